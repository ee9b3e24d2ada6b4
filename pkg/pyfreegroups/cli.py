"""Command line interface."""
import argparse
import logging
import sys
from typing import Any, Callable, Dict, List, NoReturn, Optional, Sequence, Tuple

from .binorm import normal_subgroup_growth
from .const import (
    DEFAULT_BALL_RADIUS,
    DEFAULT_NORM_BUDGET,
    DEFAULT_SEARCH_LENGTH,
    FORMAT_CSV,
    FORMAT_DOT,
    FORMAT_JSON,
    FORMAT_TEXT,
    OUTPUT_FORMATS,
    ExitCode,
)
from .exceptions import BudgetExhaustedException, FreeGroupException
from .experiments import EXPERIMENTS, ExperimentParams
from .export import graph_to_dict, graph_to_dot, table_to_csv, tables_to_csv, to_json
from .homomorphism import Homomorphism
from .killer import killer_word
from .pyfreegroups import FreeGroupAnalyzerSync
from .quasimorphism import (
    CountingQm,
    homogenize,
    psi,
    qm_value_to_dict,
    separation_witness,
)
from .stallings import bad_vertices, build, index
from .words import Word, cyclic_reduce, parse_word

_LOGGER = logging.getLogger(__name__)

Handler = Callable[[argparse.Namespace, FreeGroupAnalyzerSync], Tuple[str, ExitCode]]


class _ArgumentParser(argparse.ArgumentParser):
    """Argument parser exiting with the usage error code."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(ExitCode.USAGE_ERROR, f"{self.prog}: error: {message}\n")


def _parse_words(texts: Sequence[str], rank: Optional[int]) -> List[Word]:
    """Parse `texts` in a common rank, inferred when `rank` is None."""
    if rank is None:
        rank = max([parse_word(text).rank for text in texts], default=1)
    return [parse_word(text, rank) for text in texts]


def _check_format(args: argparse.Namespace, allowed: Sequence[str]) -> str:
    if args.format not in allowed:
        raise ValueError(
            f"`{args.command}` supports the formats {', '.join(allowed)}, not {args.format}"
        )
    return args.format


def _reduce(args: argparse.Namespace, _: FreeGroupAnalyzerSync) -> Tuple[str, ExitCode]:
    fmt = _check_format(args, (FORMAT_JSON, FORMAT_TEXT))
    (word,) = _parse_words([args.word], args.rank)
    core, conjugator = cyclic_reduce(word)
    if fmt == FORMAT_TEXT:
        return (
            f"{word}\ncyclic core: {core} (conjugator {conjugator})\n",
            ExitCode.PASS,
        )
    payload = {
        **word.as_dict(),
        "cyclic_core": str(core),
        "conjugator": str(conjugator),
    }
    return to_json(payload) + "\n", ExitCode.PASS


def _norm(
    args: argparse.Namespace, analyzer: FreeGroupAnalyzerSync
) -> Tuple[str, ExitCode]:
    (word,) = _parse_words([args.word], args.rank)
    if args.norm_command == "bounds":
        fmt = _check_format(args, (FORMAT_JSON, FORMAT_TEXT))
        bounds = analyzer.norm_bounds(word)
        if fmt == FORMAT_TEXT:
            return f"{bounds.lower} <= |{word}| <= {bounds.upper}\n", ExitCode.PASS
        return to_json(bounds.as_dict()) + "\n", ExitCode.PASS

    fmt = _check_format(args, (FORMAT_CSV, FORMAT_JSON, FORMAT_TEXT))
    rows = [
        {"k": k, "lower": str(bound)}
        for k, bound in normal_subgroup_growth(word, args.kmax)
    ]
    if fmt == FORMAT_CSV:
        return table_to_csv(rows, ("k", "lower")), ExitCode.PASS
    if fmt == FORMAT_TEXT:
        return "".join(f"{row['k']}\t{row['lower']}\n" for row in rows), ExitCode.PASS
    return to_json(rows) + "\n", ExitCode.PASS


def _qm(args: argparse.Namespace, analyzer: FreeGroupAnalyzerSync) -> Tuple[str, ExitCode]:
    fmt = _check_format(args, (FORMAT_JSON, FORMAT_TEXT))
    first, second = _parse_words([args.first, args.second], args.rank)
    payload: Dict[str, Any]
    if args.qm_command == "separate":
        qm = separation_witness(first, second)
        steps = analyzer.budgets.homogenize_steps
        payload = {
            "pattern": str(qm.pattern),
            "g": qm_value_to_dict(homogenize(qm, first, steps)),
            "h": qm_value_to_dict(homogenize(qm, second, steps)),
        }
        if fmt == FORMAT_TEXT:
            return (
                f"pattern {qm.pattern}: {payload['g']['value']} vs {payload['h']['value']}\n",
                ExitCode.PASS,
            )
    else:
        qm = CountingQm(first)
        if args.qm_command == "eval":
            value = psi(qm, second)
        else:
            value = homogenize(qm, second, analyzer.budgets.homogenize_steps)
        payload = qm_value_to_dict(value)
        if fmt == FORMAT_TEXT:
            return f"{value}\n", ExitCode.PASS
    return to_json(payload) + "\n", ExitCode.PASS


def _graph(args: argparse.Namespace, _: FreeGroupAnalyzerSync) -> Tuple[str, ExitCode]:
    fmt = _check_format(args, (FORMAT_JSON, FORMAT_DOT, FORMAT_TEXT))
    generators = _parse_words(args.generators, args.rank)
    rank = args.rank or (generators[0].rank if generators else 1)
    graph = build(rank, generators)
    if fmt == FORMAT_DOT:
        return graph_to_dot(graph), ExitCode.PASS
    if fmt == FORMAT_TEXT:
        graph_index = index(graph)
        lines = [
            f"rank {graph.rank}, {len(graph.vertices)} vertices, "
            f"{len(graph.edges)} edges, subgroup rank {graph.subgroup_rank}",
            f"index {'infinite' if graph_index is None else graph_index}",
        ]
        lines.extend(
            f"bad vertex v{vertex.vertex}: valence {vertex.valence}"
            for vertex in bad_vertices(graph)
        )
        return "\n".join(lines) + "\n", ExitCode.PASS
    return to_json(graph_to_dict(graph)) + "\n", ExitCode.PASS


def _killer(
    args: argparse.Namespace, analyzer: FreeGroupAnalyzerSync
) -> Tuple[str, ExitCode]:
    fmt = _check_format(args, (FORMAT_JSON, FORMAT_TEXT))
    generators = _parse_words(args.generators, args.rank)
    rank = args.rank or (generators[0].rank if generators else 1)
    graph = build(rank, generators)
    allow_hair = args.allow_hair or graph.subgroup_rank == 0
    if graph.subgroup_rank == 0:
        _LOGGER.warning("Trivial subgroup: every nontrivial word is a killer word")
    killer = killer_word(graph, allow_hair=allow_hair)
    verified = analyzer.verify_killer(graph, killer.word)
    code = ExitCode.PASS if verified else ExitCode.PROPERTY_VIOLATED
    if fmt == FORMAT_TEXT:
        lines = [str(step) for step in killer.steps] if args.trace else []
        lines.append(f"killer word {killer.word} ({'verified' if verified else 'NOT verified'})")
        return "\n".join(lines) + "\n", code
    payload = killer.as_dict()
    payload["verified"] = verified
    if not args.trace:
        del payload["steps"]
    return to_json(payload) + "\n", code


def _analyze(
    args: argparse.Namespace, analyzer: FreeGroupAnalyzerSync
) -> Tuple[str, ExitCode]:
    fmt = _check_format(args, (FORMAT_JSON, FORMAT_CSV, FORMAT_TEXT))
    if len(args.image) != args.source_rank:
        raise ValueError(
            f"Expected {args.source_rank} images, got {len(args.image)}"
        )
    hom = Homomorphism.parse(args.image, args.target_rank)
    verdict = analyzer.classify(hom)
    rows: List[Dict[str, Any]] = []
    if args.growth is not None:
        rows = [row.as_dict() for row in analyzer.growth_table(verdict, args.growth)]
    if fmt == FORMAT_CSV:
        if not rows:
            raise ValueError("CSV output needs a growth table, pass --growth K")
        return table_to_csv(rows), ExitCode.PASS
    if fmt == FORMAT_TEXT:
        lines = [f"{hom}: {verdict.kind.value}"]
        lines.extend(
            "\t".join(str(value) for value in row.values()) for row in rows
        )
        return "\n".join(lines) + "\n", ExitCode.PASS
    payload = verdict.as_dict()
    if args.growth is not None:
        payload["growth"] = rows
    return to_json(payload) + "\n", ExitCode.PASS


def _experiment(
    args: argparse.Namespace, analyzer: FreeGroupAnalyzerSync
) -> Tuple[str, ExitCode]:
    fmt = _check_format(args, (FORMAT_JSON, FORMAT_CSV, FORMAT_TEXT))
    params = ExperimentParams(
        max_len=args.max_len,
        kmax=args.kmax,
        word=args.word,
        rank=args.rank,
        budget=analyzer.budgets.norm_budget,
        ball_radius=analyzer.budgets.ball_radius,
        pattern_len=args.pattern_len,
        trace=args.trace,
    )
    report = analyzer.run_experiment(args.experiment, params)
    code = ExitCode.PASS if report.passed else ExitCode.PROPERTY_VIOLATED
    if fmt == FORMAT_CSV:
        return tables_to_csv(report.tables), code
    if fmt == FORMAT_TEXT:
        status = "passed" if report.passed else "FAILED"
        return "\n".join([*report.notes, f"{report.experiment} {status}"]) + "\n", code
    return to_json(report.as_dict()) + "\n", code


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rank", type=int, help="Rank of the free group")
    common.add_argument(
        "--budget",
        type=int,
        default=DEFAULT_NORM_BUDGET,
        help=f"Conjugator length budget of the norm search (default: {DEFAULT_NORM_BUDGET})",
    )
    common.add_argument(
        "--format", choices=OUTPUT_FORMATS, default=FORMAT_JSON, help="Output format"
    )
    common.add_argument("--out", help="Write the output to FILE instead of stdout")
    common.add_argument(
        "-v", "--verbose", action="store_true", help="Log debug messages to stderr"
    )
    return common


def build_parser() -> argparse.ArgumentParser:
    """Return the argument parser of the `pyfreegroups` command."""
    common = _common_parser()
    parser = _ArgumentParser(
        prog="pyfreegroups",
        description="Bi-invariant word norms, subgroup graphs and homomorphisms of free groups.",
    )
    commands = parser.add_subparsers(
        dest="command", required=True, parser_class=_ArgumentParser
    )

    p_reduce = commands.add_parser("reduce", parents=[common], help="Reduce a word")
    p_reduce.add_argument("word")
    p_reduce.set_defaults(handler=_reduce)

    p_norm = commands.add_parser("norm", help="Conjugation-invariant norm bounds")
    norm_commands = p_norm.add_subparsers(
        dest="norm_command", required=True, parser_class=_ArgumentParser
    )
    p_bounds = norm_commands.add_parser("bounds", parents=[common])
    p_bounds.add_argument("word")
    p_growth = norm_commands.add_parser("growth", parents=[common])
    p_growth.add_argument("word")
    p_growth.add_argument("--kmax", type=int, default=20)
    p_norm.set_defaults(handler=_norm)

    p_qm = commands.add_parser("qm", help="Counting quasi-morphisms")
    qm_commands = p_qm.add_subparsers(
        dest="qm_command", required=True, parser_class=_ArgumentParser
    )
    for name, first, second in (
        ("eval", "pattern", "word"),
        ("homog", "pattern", "word"),
        ("separate", "g", "h"),
    ):
        p_sub = qm_commands.add_parser(name, parents=[common])
        p_sub.add_argument("first", metavar=first)
        p_sub.add_argument("second", metavar=second)
    p_qm.set_defaults(handler=_qm)

    p_graph = commands.add_parser("graph", parents=[common], help="Subgroup graph")
    p_graph.add_argument("generators", nargs="*", metavar="gen")
    p_graph.set_defaults(handler=_graph)

    p_killer = commands.add_parser("killer", parents=[common], help="Killer word")
    p_killer.add_argument("generators", nargs="*", metavar="gen")
    p_killer.add_argument("--trace", action="store_true")
    p_killer.add_argument(
        "--allow-hair",
        action="store_true",
        help="Accept graphs with vertices of valence < 2",
    )
    p_killer.set_defaults(handler=_killer)

    p_analyze = commands.add_parser(
        "analyze", parents=[common], help="Classify a homomorphism F_m -> F_n"
    )
    p_analyze.add_argument("--source-rank", type=int, required=True)
    p_analyze.add_argument("--target-rank", type=int, required=True)
    p_analyze.add_argument("--image", nargs="+", required=True)
    p_analyze.add_argument("--growth", type=int, metavar="K")
    p_analyze.add_argument("--search-length", type=int, default=DEFAULT_SEARCH_LENGTH)
    p_analyze.add_argument("--ball-radius", type=int, default=DEFAULT_BALL_RADIUS)
    p_analyze.set_defaults(handler=_analyze)

    p_experiment = commands.add_parser(
        "experiment", parents=[common], help="Run an experiment"
    )
    p_experiment.add_argument("experiment", choices=sorted(EXPERIMENTS))
    p_experiment.add_argument("--max-len", type=int)
    p_experiment.add_argument("--kmax", type=int, default=20)
    p_experiment.add_argument("--word", default="ab")
    p_experiment.add_argument("--pattern-len", type=int, default=3)
    p_experiment.add_argument("--ball-radius", type=int, default=DEFAULT_BALL_RADIUS)
    p_experiment.add_argument("--trace", action="store_true")
    p_experiment.set_defaults(handler=_experiment)

    return parser


def _write(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the command line interface and return the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as error:
        return int(error.code or 0)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    handler: Handler = args.handler
    try:
        analyzer = FreeGroupAnalyzerSync(
            norm_budget=args.budget,
            search_length=getattr(args, "search_length", DEFAULT_SEARCH_LENGTH),
            ball_radius=getattr(args, "ball_radius", DEFAULT_BALL_RADIUS),
        )
        text, code = handler(args, analyzer)
    except BudgetExhaustedException as error:
        _LOGGER.debug("Budget exhausted", exc_info=True)
        sys.stderr.write(f"budget exhausted: {error}\n")
        return ExitCode.BUDGET_EXHAUSTED
    except (FreeGroupException, ValueError) as error:
        sys.stderr.write(f"error: {error}\n")
        return ExitCode.USAGE_ERROR
    _write(text, args.out)
    return code
