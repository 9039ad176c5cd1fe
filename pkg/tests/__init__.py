"""
Test suite for weighted-range.
"""
