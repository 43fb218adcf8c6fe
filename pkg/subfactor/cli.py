from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, TextIO
import argparse
import json
import logging
import sys

import subfactor.settings as settings
from subfactor import dot
from subfactor.classification import EnumerateOptions, condition_report, enumerate_records, report
from subfactor.errors import GroupMismatchError, InconsistencyError, SubfactorError, UsageError
from subfactor.corpus import builtin_group
from subfactor.groups import FiniteGroup, Subgroup, check_order_cap
from subfactor.imprimitivity import MatrixStarAlgebra, decompose, decomposition_report
from subfactor.induction import build_sigma, induced_report, sigma_report
from subfactor.reps import ProjectiveRep, regular_rep, trivial_rep
from subfactor.schema import dumps, error_json, load_algebra_file, load_group_file, load_rep_file, parse_subgroup
from subfactor.selftest import run_selftest
from subfactor.tower import principal_graph, tower

logger = logging.getLogger(__name__)

COMMANDS = ("check", "induce", "sigma", "tower", "graph", "report", "enumerate", "decompose", "selftest")
DOT_COMMANDS = ("tower", "graph", "report")


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--group", type=Path, help="Path to a group JSON file")
    common.add_argument("--subgroup", default=None, help="Comma-separated element labels, or 'all'")
    common.add_argument("--rep", default="trivial", help="Path to a representation JSON file, 'trivial' or 'regular'")
    common.add_argument("--algebra", type=Path, help="Path to an algebra JSON file (decompose)")
    common.add_argument("--nmax", type=int, default=settings.DEFAULT_NMAX, help="Tower depth")
    common.add_argument("--format", choices=("json", "table", "dot"), default="json", help="Output format")
    common.add_argument("--seed", type=int, default=settings.DEFAULT_SEED, help="Random seed")
    common.add_argument("--tol", type=float, default=settings.TOLERANCE, help="Numerical tolerance")
    common.add_argument("--max-order", type=int, default=settings.MAX_GROUP_ORDER, help="Cap on group order")
    common.add_argument(
        "--max-enum-order",
        type=int,
        default=settings.MAX_ENUMERATION_ORDER,
        help="Cap on the group order for character tables, induction and enumeration, at most SUBFACTOR_MAX_ENUMERATION_ORDER",
    )
    common.add_argument("--output", type=Path, help="Write the result here instead of stdout")
    common.add_argument("--workers", type=int, default=settings.DEFAULT_WORKERS, help="Enumeration workers")
    common.add_argument("--all-subgroups", action="store_true", help="Enumerate every subgroup, not one per class")
    common.add_argument("--as-sigma", action="store_true", help="Use --rep as sigma itself for tower and graph")

    parser = _Parser(prog="subfactor", description="Subfactor invariants from finite group data")
    sub = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        sub.add_parser(command, parents=[common])
    return parser


@dataclass(frozen=True)
class RunConfig:
    command: str
    group_path: Path | None
    subgroup: str | None
    rep: str
    algebra_path: Path | None
    n_max: int
    fmt: str
    seed: int
    tol: float
    max_order: int
    max_enum_order: int
    output: Path | None
    workers: int
    all_subgroups: bool
    as_sigma: bool

    def __post_init__(self):
        if self.max_order <= 0 or self.max_enum_order <= 0 or self.n_max <= 0 or self.workers <= 0:
            raise UsageError("caps, --nmax and --workers must be positive")
        if self.max_enum_order > settings.MAX_ENUMERATION_ORDER:
            raise UsageError(f"--max-enum-order cannot exceed {settings.MAX_ENUMERATION_ORDER}, raise SUBFACTOR_MAX_ENUMERATION_ORDER instead")
        if not 0 < self.tol <= 1e-3:
            raise UsageError(f"--tol must lie in (0, 1e-3], got {self.tol}")
        if self.fmt == "dot" and self.command not in DOT_COMMANDS:
            raise UsageError(f"--format dot is only available for {', '.join(DOT_COMMANDS)}")
        if self.command != "selftest" and self.group_path is None:
            raise UsageError(f"{self.command} needs --group")

    @staticmethod
    def from_argv(argv: list[str] | None) -> "RunConfig":
        args = build_parser().parse_args(argv)
        return RunConfig(
            command=args.command,
            group_path=args.group,
            subgroup=args.subgroup,
            rep=args.rep,
            algebra_path=args.algebra,
            n_max=args.nmax,
            fmt=args.format,
            seed=args.seed,
            tol=args.tol,
            max_order=args.max_order,
            max_enum_order=args.max_enum_order,
            output=args.output,
            workers=args.workers,
            all_subgroups=args.all_subgroups,
            as_sigma=args.as_sigma,
        )


def _group(config: RunConfig) -> FiniteGroup:
    if config.group_path is None:
        raise UsageError(f"{config.command} needs --group")
    if config.group_path.exists() or config.group_path.suffix:
        G = load_group_file(config.group_path, config.max_order)
    else:
        G = builtin_group(str(config.group_path), config.max_order)
    check_order_cap(G, config.max_enum_order, config.command)
    return G


def _rep(config: RunConfig, G: FiniteGroup) -> tuple[Subgroup, ProjectiveRep]:
    if config.rep in ("trivial", "regular"):
        H = parse_subgroup(G, config.subgroup)
        return H, trivial_rep(H) if config.rep == "trivial" else regular_rep(H)
    rep = load_rep_file(config.rep, G, config.tol)
    if config.subgroup is not None and parse_subgroup(G, config.subgroup) != rep.group:
        raise GroupMismatchError(f"{config.rep} is defined on {rep.group.labels()}, not on --subgroup {config.subgroup}")
    return rep.group, rep


def _sigma(config: RunConfig, G: FiniteGroup) -> ProjectiveRep:
    H, rep = _rep(config, G)
    if not config.as_sigma:
        return build_sigma(H, rep, config.tol).total
    if not H.is_whole:
        raise GroupMismatchError("--as-sigma needs a representation of the whole group")
    return rep


def _cmd_check(config: RunConfig) -> Any:
    G = _group(config)
    H, psi = _rep(config, G)
    return condition_report(G, H, psi, config.tol)


def _cmd_induce(config: RunConfig) -> Any:
    G = _group(config)
    H, pi = _rep(config, G)
    return induced_report(H, pi, config.tol)


def _cmd_sigma(config: RunConfig) -> Any:
    G = _group(config)
    H, psi = _rep(config, G)
    return sigma_report(H, psi, config.tol)


def _cmd_tower(config: RunConfig) -> Any:
    sigma = _sigma(config, _group(config))
    if config.fmt == "dot":
        return principal_graph(sigma, config.seed, config.tol)
    return tower(sigma, config.n_max, config.seed, config.tol)


def _cmd_graph(config: RunConfig) -> Any:
    return principal_graph(_sigma(config, _group(config)), config.seed, config.tol)


def _cmd_report(config: RunConfig) -> Any:
    G = _group(config)
    H, psi = _rep(config, G)
    record = report(G, H, psi, config.n_max, config.seed, config.tol)
    return record.graph if config.fmt == "dot" else record


def _cmd_enumerate(config: RunConfig) -> Any:
    G = _group(config)
    extra = () if config.rep in ("trivial", "regular") else (load_rep_file(config.rep, G, config.tol),)
    options = EnumerateOptions(
        up_to_conjugacy=not config.all_subgroups,
        n_max=config.n_max,
        extra_reps=extra,
        workers=config.workers,
        seed=config.seed,
        tol=config.tol,
        max_order=config.max_enum_order,
    )
    return enumerate_records(G, options)


def _cmd_decompose(config: RunConfig) -> Any:
    if config.algebra_path is None:
        raise UsageError("decompose needs --algebra")
    sigma = _sigma(config, _group(config))
    B = MatrixStarAlgebra.from_spanning_set(load_algebra_file(config.algebra_path), config.tol)
    return decomposition_report(decompose(sigma, B, config.seed, config.tol))


def _cmd_selftest(config: RunConfig) -> Any:
    return run_selftest(config.seed)


HANDLERS: dict[str, Callable[[RunConfig], Any]] = {
    "check": _cmd_check,
    "induce": _cmd_induce,
    "sigma": _cmd_sigma,
    "tower": _cmd_tower,
    "graph": _cmd_graph,
    "report": _cmd_report,
    "enumerate": _cmd_enumerate,
    "decompose": _cmd_decompose,
    "selftest": _cmd_selftest,
}

_TABLE_COLUMNS = ("index", "depth", "subgroup", "psi", "r", "condition_holds", "irreducible", "fingerprint_class")


def _cell(value: Any) -> str:
    return value if isinstance(value, str) else json.dumps(value, ensure_ascii=False)


def render_table(result: Any) -> str:
    if isinstance(result, list):
        rows = [{**r.to_dict(), "depth": r.graph.depth} for r in result]
        cells = [list(_TABLE_COLUMNS)] + [[_cell(row[c]) for c in _TABLE_COLUMNS] for row in rows]
        widths = [max(len(row[i]) for row in cells) for i in range(len(_TABLE_COLUMNS))]
        return "".join("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() + "\n" for row in cells)
    dct = result.to_dict()
    width = max(len(k) for k in dct)
    return "".join(f"{k.ljust(width)}  {_cell(v)}\n" for k, v in dct.items())


def render(result: Any, fmt: str) -> str:
    if fmt == "dot":
        return dot.render(result)
    if fmt == "table":
        return render_table(result)
    if isinstance(result, list):
        return dumps([r.to_dict() for r in result])
    return dumps(result.to_dict())


def run(argv: list[str] | None = None, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    """Exit codes: 0 success, 1 invalid input or numerical failure, 2 internal inconsistency."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        config = RunConfig.from_argv(argv)
        result = HANDLERS[config.command](config)
        text = render(result, config.fmt)
    except InconsistencyError as e:
        logger.fatal(f"internal inconsistency: {e}")
        stderr.write(error_json(e) + "\n")
        return 2
    except SubfactorError as e:
        logger.error(f"{type(e).__name__}: {e}")
        stderr.write(error_json(e) + "\n")
        return 1

    if config.output is not None:
        config.output.parent.mkdir(parents=True, exist_ok=True)
        config.output.write_text(text)
        logger.info(f"wrote {config.command} result to {config.output}")
    else:
        stdout.write(text)
    if config.command == "selftest" and not result.passed:
        failed = [c.name for c in result.checks if not c.passed]
        stderr.write(error_json(InconsistencyError(f"selftest failed: {', '.join(failed)}")) + "\n")
        return 2
    return 0


def main():
    sys.exit(run())
