"""
Command-line front end for weighted numerical ranges.

Reads matrix and weight files, runs the computations of the library and
writes CSV, JSON and SVG artifacts plus theorem reports.
"""

import argparse
import io
import json
import logging
import os
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from . import __version__, core
from .cvalues import (
    cpolynomial,
    cpolynomial_to_json,
    cvalue_set,
    cvalue_set_to_json,
    match_tolerance,
)
from .errors import DegreeTooLarge, DimensionTooLarge
from .region import (
    ConvexRegion,
    RegionKind,
    boundary_intersections,
    boundary_rows,
    build_region,
)
from .support import DEFAULT_GRID, support_profile
from . import verify

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_EMPTY = 2
EXIT_GUARD = 3
EXIT_INCONSISTENT = 4

CONFIG_NAME = ".wnrrc"
ENV_PREFIX = "WNR_"
FORMATS = ("csv", "json", "svg")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")
MIN_GRID = 256

# Number of matrix/weight files each theorem takes.
THEOREM_INPUTS = {
    "main": 4,
    "lines": 4,
    "boundary": 4,
    "curve": 4,
    "equal": 4,
    "circle": 2,
    "ellipse": 2,
    "sharp": 2,
    "nilpotent": 1,
    "soundness": 0,
}


class UsageError(Exception):
    """Invalid command line."""


class Config:
    """Defaults from ~/.wnrrc and ./.wnrrc, overridden by WNR_* variables."""

    def __init__(self, home: Optional[Path] = None, cwd: Optional[Path] = None,
                 environ: Optional[Mapping[str, str]] = None):
        self.grid_n: int = DEFAULT_GRID
        self.seed: int = verify.DEFAULT_SEED
        self.tol_eig: float = core.JACOBI_TOL
        self.tol_match: float = 1e-7
        self.output_dir: Path = Path("wnr-out")
        self.formats: Tuple[str, ...] = FORMATS
        self.log_level: str = "WARNING"
        self.sources: List[Path] = []
        self._load_config(
            Path.home() if home is None else home,
            Path.cwd() if cwd is None else cwd,
            os.environ if environ is None else environ,
        )

    def _load_config(self, home: Path, cwd: Path, environ: Mapping[str, str]):
        """Load ~/.wnrrc, then ./.wnrrc, then WNR_* environment variables."""
        from dotenv import dotenv_values

        config: Dict[str, Optional[str]] = {}
        home_path = home / CONFIG_NAME
        if home_path.exists():
            config.update(dotenv_values(home_path))
            self.sources.append(home_path)

        local_path = cwd / CONFIG_NAME
        if local_path.exists() and local_path.resolve() != home_path.resolve():
            from rich.console import Console

            Console(stderr=True).print(f"[yellow]Note:[/yellow] loading local config from [cyan]{local_path}[/cyan]")
            config.update(dotenv_values(local_path))
            self.sources.append(local_path)

        for key, value in environ.items():
            if key.startswith(ENV_PREFIX):
                config[key[len(ENV_PREFIX):]] = value

        try:
            grid_n = int(config.get("GRID_N") or DEFAULT_GRID)
            self.grid_n = grid_n if _valid_grid(grid_n) else DEFAULT_GRID
        except ValueError:
            self.grid_n = DEFAULT_GRID

        try:
            self.seed = int(config.get("SEED") or str(verify.DEFAULT_SEED), 0)
        except ValueError:
            self.seed = verify.DEFAULT_SEED

        self.tol_eig = _positive_float(config.get("TOL_EIG"), self.tol_eig)
        self.tol_match = _positive_float(config.get("TOL_MATCH"), self.tol_match)

        if config.get("OUTPUT_DIR"):
            self.output_dir = Path(config["OUTPUT_DIR"])

        formats = _parse_formats(config.get("FORMATS") or "")
        if formats:
            self.formats = formats

        level = (config.get("LOG_LEVEL") or self.log_level).upper()
        self.log_level = level if level in LOG_LEVELS else "WARNING"


def _valid_grid(grid_n: int) -> bool:
    return grid_n >= MIN_GRID and grid_n & (grid_n - 1) == 0


def _positive_float(raw: Optional[str], default: float) -> float:
    try:
        value = float(raw) if raw else default
    except ValueError:
        return default
    return value if value > 0 and np.isfinite(value) else default


def _parse_formats(raw: str) -> Tuple[str, ...]:
    return tuple(f for f in FORMATS if f in {x.strip().lower() for x in raw.split(",")})


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    inputs: Tuple[Path, ...] = ()
    grid_n: int = DEFAULT_GRID
    tol_eig: float = core.JACOBI_TOL
    tol_match: float = 1e-7
    seed: int = verify.DEFAULT_SEED
    output_dir: Path = Path("wnr-out")
    formats: Tuple[str, ...] = FORMATS
    options: Dict[str, object] = field(default_factory=dict)

    def __post_init__(self):
        if not _valid_grid(self.grid_n):
            raise UsageError(f"--grid must be a power of two >= {MIN_GRID}, got {self.grid_n}")
        if not (self.tol_eig > 0 and self.tol_match > 0):
            raise UsageError("tolerances must be positive")
        if not self.formats:
            raise UsageError(f"--format must name at least one of {', '.join(FORMATS)}")

    def wants(self, fmt: str) -> bool:
        return fmt in self.formats


class ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="wnr", description="Weighted numerical ranges W(A;c) and c-values")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--grid", type=int, help="number of sampled directions (power of two >= 256)")
    common.add_argument("--seed", type=lambda s: int(s, 0), help="random seed")
    common.add_argument("--tol-eig", type=float, help="relative Jacobi off-diagonal tolerance")
    common.add_argument("--tol-match", type=float, help="relative c-value matching tolerance")
    common.add_argument("--out", type=Path, help="output directory")
    common.add_argument("--format", action="append", choices=FORMATS,
                        help="output format; repeat for several (default: all)")
    common.add_argument("--log-level", choices=LOG_LEVELS, help="log level on stderr")

    sub = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)
    for name, help_text in (
        ("boundary", "boundary polygon of W(A;c)"),
        ("cvalues", "c-values and the c-polynomial"),
        ("cpoly", "coefficients of the c-polynomial"),
        ("support", "weighted support function on the grid"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("matrix", type=Path)
        p.add_argument("weights", type=Path)

    p = sub.add_parser("intersect", parents=[common], help="common boundary points of two regions")
    for name in ("matrix_a", "weights_c", "matrix_b", "weights_d"):
        p.add_argument(name, type=Path)

    p = sub.add_parser("verify", parents=[common], help="check a boundary-coincidence theorem")
    p.add_argument("theorem", choices=sorted(THEOREM_INPUTS))
    p.add_argument("inputs", type=Path, nargs="*", help="matrix and weight files")
    p.add_argument("--trials", type=int, help="number of random samples (nilpotent, soundness)")
    p.add_argument("--max-n", type=int, default=3, help="largest dimension in the soundness ensemble")

    p = sub.add_parser("demo", parents=[common], help="roots of unity against a disc")
    p.add_argument("--n", type=int, default=4, help="number of roots of unity (>= 3)")
    p.add_argument("--radius", type=float, default=0.95, help="disc radius, between cos(pi/n) and 1")
    return parser


def make_run_config(args: argparse.Namespace, config: Config) -> RunConfig:
    if args.command == "verify":
        needed = THEOREM_INPUTS[args.theorem]
        if len(args.inputs) != needed:
            raise UsageError(f"verify {args.theorem} takes {needed} input files, got {len(args.inputs)}")
        inputs = tuple(args.inputs)
    elif args.command == "intersect":
        inputs = (args.matrix_a, args.weights_c, args.matrix_b, args.weights_d)
    elif args.command == "demo":
        inputs = ()
    else:
        inputs = (args.matrix, args.weights)

    options = {
        k: v for k, v in vars(args).items()
        if k in ("theorem", "trials", "max_n", "n", "radius") and v is not None
    }
    return RunConfig(
        subcommand=args.command,
        inputs=inputs,
        grid_n=config.grid_n if args.grid is None else args.grid,
        tol_eig=config.tol_eig if args.tol_eig is None else args.tol_eig,
        tol_match=config.tol_match if args.tol_match is None else args.tol_match,
        seed=config.seed if args.seed is None else args.seed,
        output_dir=config.output_dir if args.out is None else args.out,
        formats=config.formats if not args.format else tuple(dict.fromkeys(args.format)),
        options=options,
    )


def setup_logging(level: str):
    from rich.console import Console
    from rich.logging import RichHandler

    handler = RichHandler(console=Console(stderr=True), show_time=False, show_path=False)
    logging.basicConfig(level=level, format="%(message)s", handlers=[handler], force=True)


# ---------------------------------------------------------------------------
# Output files
# ---------------------------------------------------------------------------

def write_atomic(path: Path, data: str) -> Path:
    """Write ``data`` next to ``path`` and rename it into place."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as f:
            f.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    logger.debug("wrote %s", path)
    return path


def _json_default(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps_json(data) -> str:
    return json.dumps(data, indent=2, default=_json_default) + "\n"


def format_csv(header: Sequence[str], rows) -> str:
    """Rows as CSV with 17 significant digits."""
    buf = io.StringIO()
    arr = np.asarray(rows, dtype=float).reshape(-1, len(header))
    np.savetxt(buf, arr, fmt="%.17g", delimiter=",", header=",".join(header), comments="")
    return buf.getvalue()


def read_boundary_csv(path: Path) -> np.ndarray:
    """(theta, x, y) rows written by ``wnr boundary``."""
    return np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)


def region_svg(vertices: np.ndarray, kind: RegionKind, eigenvalues: Sequence[complex] = (),
               cvalues: Sequence[complex] = (), others: Sequence[np.ndarray] = (),
               marks: Sequence[complex] = ()) -> str:
    """Static SVG: boundary polyline, eigenvalue crosses and c-value dots."""
    import matplotlib
    matplotlib.use("Agg")
    from matplotlib.figure import Figure

    vertices = np.asarray(vertices, dtype=np.complex128)
    eigenvalues = np.asarray(eigenvalues, dtype=np.complex128)
    cvalues = np.asarray(cvalues, dtype=np.complex128)
    marks = np.asarray(marks, dtype=np.complex128)
    everything = np.concatenate([vertices, eigenvalues, cvalues, marks] + [np.asarray(o) for o in others])

    with matplotlib.rc_context({"svg.hashsalt": "weighted-range", "svg.fonttype": "none"}):
        fig = Figure(figsize=(6, 6))
        ax = fig.add_subplot(111)
        for k, poly in enumerate([vertices] + [np.asarray(o) for o in others]):
            closed = np.append(poly, poly[:1]) if kind is RegionKind.FULL_2D or k > 0 else poly
            ax.plot(closed.real, closed.imag, "-", lw=1.0, color=f"C{k}",
                    marker="o" if closed.size == 1 else None)
        if eigenvalues.size:
            ax.plot(eigenvalues.real, eigenvalues.imag, "x", color="k", ms=7, label="eigenvalues")
        if cvalues.size:
            ax.plot(cvalues.real, cvalues.imag, ".", color="C3", ms=4, label="c-values")
        if marks.size:
            ax.plot(marks.real, marks.imag, "o", mfc="none", color="C2", ms=6, label="intersections")

        if everything.size:
            x0, x1 = everything.real.min(), everything.real.max()
            y0, y1 = everything.imag.min(), everything.imag.max()
            pad = 0.1 * max(x1 - x0, y1 - y0, 1e-12)
            ax.set_xlim(x0 - pad, x1 + pad)
            ax.set_ylim(y0 - pad, y1 + pad)
        ax.set_aspect("equal")
        ax.axhline(0.0, color="0.8", lw=0.5)
        ax.axvline(0.0, color="0.8", lw=0.5)
        ax.set_xlabel("Re")
        ax.set_ylabel("Im")
        if eigenvalues.size or cvalues.size or marks.size:
            ax.legend(loc="upper right", fontsize="small")

        buf = io.StringIO()
        fig.savefig(buf, format="svg", metadata={"Date": None})
    return buf.getvalue()


def profile_svg(grid: np.ndarray, values: np.ndarray) -> str:
    import matplotlib
    matplotlib.use("Agg")
    from matplotlib.figure import Figure

    with matplotlib.rc_context({"svg.hashsalt": "weighted-range", "svg.fonttype": "none"}):
        fig = Figure(figsize=(7, 4))
        ax = fig.add_subplot(111)
        ax.plot(grid, values, "-", lw=1.0)
        ax.set_xlabel("theta")
        ax.set_ylabel("h(theta)")
        buf = io.StringIO()
        fig.savefig(buf, format="svg", metadata={"Date": None})
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

class Runner:
    """Runs one subcommand and reports to the console."""

    def __init__(self, run: RunConfig, console=None):
        from rich.console import Console

        self.run = run
        self.console = console or Console()
        self.written: List[Path] = []

    def _write(self, name: str, data: str):
        self.written.append(write_atomic(self.run.output_dir / name, data))

    def _load_pair(self, offset: int = 0):
        return core.load_matrix(self.run.inputs[offset]), core.load_weights(self.run.inputs[offset + 1])

    def execute(self) -> int:
        commands: Dict[str, Callable[[], int]] = {
            "boundary": self.cmd_boundary,
            "cvalues": self.cmd_cvalues,
            "cpoly": self.cmd_cpoly,
            "support": self.cmd_support,
            "intersect": self.cmd_intersect,
            "verify": self.cmd_verify,
            "demo": self.cmd_demo,
        }
        with core.eigen_tolerance(self.run.tol_eig), match_tolerance(self.run.tol_match):
            code = commands[self.run.subcommand]()
        for path in self.written:
            self.console.print(f"[dim]wrote {path}[/dim]")
        return code

    def _region_summary(self, region: ConvexRegion) -> str:
        if region.is_2d:
            return f"{region.kind.value}, {len(region)} vertices, area {region.area:.6g}"
        return f"{region.kind.value}, {len(region)} vertices"

    def cmd_boundary(self) -> int:
        a, c = self._load_pair()
        region = build_region(a, c, self.run.grid_n)
        if region.empty:
            self.console.print("[red]EMPTY[/red]")
            return EXIT_EMPTY
        rows = boundary_rows(region)
        if self.run.wants("csv"):
            self._write("boundary.csv", format_csv(("theta", "x", "y"), rows))
        if self.run.wants("json"):
            self._write("boundary.json", dumps_json({
                "kind": region.kind.value,
                "gridN": self.run.grid_n,
                "vertices": [[v.real, v.imag] for v in region.vertices],
            }))
        if self.run.wants("svg"):
            self._write("boundary.svg", region_svg(region.vertices, region.kind, core.spectrum(a).eigenvalues))
        self.console.print(f"W(A;c): {self._region_summary(region)}")
        return EXIT_OK

    def cmd_cvalues(self) -> int:
        a, c = self._load_pair()
        cset = cvalue_set(a, c)
        poly = cpolynomial(a, c)
        self._write("cvalues.json", dumps_json({
            "cvalues": cvalue_set_to_json(cset),
            "polynomial": cpolynomial_to_json(poly),
        }))
        self.console.print(f"deg(A;c) = {cset.degree}")
        return EXIT_OK

    def cmd_cpoly(self) -> int:
        a, c = self._load_pair()
        poly = cpolynomial(a, c)
        self._write("cpoly.json", dumps_json(cpolynomial_to_json(poly)))
        self.console.print(f"p(A;c) has degree {poly.degree}")
        return EXIT_OK

    def cmd_support(self) -> int:
        a, c = self._load_pair()
        profile = support_profile(a, c, self.run.grid_n)
        if self.run.wants("csv"):
            self._write("support.csv", format_csv(("theta", "value", "derivative"), profile.rows()))
        if self.run.wants("json"):
            self._write("support.json", dumps_json({
                "gridN": self.run.grid_n,
                "fallback": int(np.sum(profile.fallback)),
                "rows": profile.rows(),
            }))
        if self.run.wants("svg"):
            self._write("support.svg", profile_svg(profile.grid, profile.values))
        self.console.print(f"{profile.grid.size} samples, {int(np.sum(profile.fallback))} finite-difference fallbacks")
        return EXIT_OK

    def cmd_intersect(self) -> int:
        a, c = self._load_pair(0)
        b, d = self._load_pair(2)
        first = build_region(a, c, self.run.grid_n)
        second = build_region(b, d, self.run.grid_n)
        if first.empty or second.empty:
            self.console.print("[red]EMPTY[/red]")
            return EXIT_EMPTY
        inter = boundary_intersections(first, second)
        points = [(p.real, p.imag) for p in inter.points]
        overlaps = [(p.real, p.imag, q.real, q.imag) for p, q in inter.overlaps]
        if self.run.wants("csv"):
            self._write("intersections.csv", format_csv(("x", "y"), points))
            self._write("overlaps.csv", format_csv(("x0", "y0", "x1", "y1"), overlaps))
        if self.run.wants("json"):
            self._write("intersections.json", dumps_json({
                "points": points,
                "overlaps": overlaps,
                "touching": [(p.real, p.imag) for p in inter.touching],
                "full_overlap": inter.full_overlap,
            }))
        if self.run.wants("svg"):
            self._write("intersections.svg", region_svg(
                first.vertices, first.kind, others=[second.vertices], marks=list(inter.points),
            ))
        self.console.print(
            f"{len(inter.points)} crossings, {len(inter.overlaps)} shared segments, "
            f"{len(inter.touching)} touching points"
        )
        return EXIT_OK

    def _report(self, report) -> int:
        from rich.panel import Panel

        self._write(f"report-{report.to_json()['theorem']}.json", dumps_json(report.to_json()))
        verdict = report.verdict.value
        style = "red" if report.verdict is verify.Verdict.INCONSISTENT else "green"
        lines = [f"verdict: [{style}]{verdict}[/{style}]"]
        if isinstance(report, verify.TheoremReport):
            lines.append(f"bound: {report.bound}, crossing: {report.crossing}, tangential: {report.tangential}")
            lines.append(f"hypothesis met: {report.hypothesis_met} ({report.hypothesis_status.value})")
            lines.append(f"common values: {len(report.common_values)}")
            lines.extend(f"note: {n}" for n in report.notes)
        else:
            lines.append(f"trials: {report.trials}, evaluated: {report.evaluated}, skipped: {report.skipped}")
            lines.append(f"violations: {len(report.violations)}")
        self.console.print(Panel("\n".join(lines), title=report.to_json()["theorem"], border_style=style))
        return EXIT_INCONSISTENT if report.verdict is verify.Verdict.INCONSISTENT else EXIT_OK

    def cmd_verify(self) -> int:
        theorem = self.run.options["theorem"]
        grid_n, seed = self.run.grid_n, self.run.seed
        trials = self.run.options.get("trials")
        if theorem == "soundness":
            report = verify.run_soundness_ensemble(
                trials=500 if trials is None else trials, seed=seed,
                grid_n=grid_n, max_n=self.run.options.get("max_n", 3),
            )
            return self._report(report)
        if theorem == "nilpotent":
            a = core.load_matrix(self.run.inputs[0])
            report = verify.check_nilpotent_corollary(
                a, trials=20 if trials is None else trials, grid_n=grid_n, seed=seed,
            )
            return self._report(report)

        a, c = self._load_pair(0)
        single = {
            "circle": verify.check_circle_corollary,
            "ellipse": verify.check_ellipse_corollary,
            "sharp": verify.check_sharp_point_corollary,
        }
        if theorem in single:
            return self._report(single[theorem](a, c, grid_n=grid_n, seed=seed))

        b, d = self._load_pair(2)
        pair = {
            "main": verify.verify_theorem_main,
            "lines": verify.verify_supporting_lines,
            "boundary": verify.verify_boundary_points,
            "curve": verify.check_curve_overlap,
            "equal": verify.check_equal_ranges,
        }
        return self._report(pair[theorem](a, c, b, d, grid_n=grid_n, seed=seed))

    def cmd_demo(self) -> int:
        from rich.table import Table

        n = self.run.options.get("n", 4)
        radius = self.run.options.get("radius", 0.95)
        if n < 3 or not np.cos(np.pi / n) < radius < 1.0:
            raise UsageError(f"demo needs n >= 3 and cos(pi/n) < radius < 1, got n={n}, radius={radius}")
        a, c, b, d = verify.remark_fixture(n, radius)
        for name, data in (("A", core.matrix_to_json(a)), ("c", core.weights_to_json(c)),
                           ("B", core.matrix_to_json(b)), ("d", core.weights_to_json(d))):
            self._write(f"demo-{name}.json", dumps_json(data))

        reports = [
            verify.verify_theorem_main(a, c, b, d, grid_n=self.run.grid_n, seed=self.run.seed),
            verify.verify_boundary_points(a, c, b, d, grid_n=self.run.grid_n, seed=self.run.seed),
        ]
        table = Table(title=f"{n} roots of unity against the disc of radius {radius}")
        table.add_column("Check")
        table.add_column("Bound", justify="right")
        table.add_column("Count", justify="right")
        table.add_column("Common values", justify="right")
        table.add_column("Verdict")
        code = EXIT_OK
        for report in reports:
            self._write(f"report-{report.theorem}.json", dumps_json(report.to_json()))
            table.add_row(report.theorem, str(report.bound), str(report.crossing + report.tangential),
                          str(len(report.common_values)), report.verdict.value)
            if report.inconsistent:
                code = EXIT_INCONSISTENT
        if self.run.wants("svg"):
            first = build_region(a, c, self.run.grid_n)
            second = build_region(b, d, self.run.grid_n)
            inter = boundary_intersections(first, second)
            self._write("demo.svg", region_svg(first.vertices, first.kind, core.spectrum(a).eigenvalues,
                                               others=[second.vertices], marks=list(inter.points)))
        self.console.print(table)
        return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point."""
    from rich.console import Console

    err = Console(stderr=True)
    try:
        try:
            args = build_parser().parse_args(argv)
            config = Config()
            run = make_run_config(args, config)
        except UsageError as e:
            err.print(f"[red]Error:[/red] {e}")
            return EXIT_ERROR
        setup_logging(args.log_level or config.log_level)
        return Runner(run).execute()

    except KeyboardInterrupt:
        print("\nGoodbye!", file=sys.stderr)
        return EXIT_OK
    except (DegreeTooLarge, DimensionTooLarge) as e:
        err.print(f"[red]Error:[/red] {e}")
        return EXIT_GUARD
    except Exception as e:
        err.print(f"[red]Error:[/red] {e}")
        return EXIT_ERROR


if __name__ == '__main__':
    sys.exit(main())
