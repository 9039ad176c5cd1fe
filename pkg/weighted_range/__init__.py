"""
Weighted numerical ranges W(A;c), c-values and boundary-coincidence checks.
"""

__version__ = "0.1.0"
__author__ = "Kentaroh Toyoda"
__license__ = "MIT"
