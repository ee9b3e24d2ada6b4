"""Reproducible experiments over the library operations."""
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from itertools import product as cartesian
import logging
from typing import Any, Callable, Dict, FrozenSet, List, Optional, Tuple

from .binorm import norm_bounds, norm_upper, normal_subgroup_growth
from .const import (
    DEFAULT_BALL_RADIUS,
    DEFAULT_NORM_BUDGET,
    DIHEDRAL_CONJUGATOR_LENGTH,
    EXPERIMENT_DEFECT,
    EXPERIMENT_DIHEDRAL_DIAMETER,
    EXPERIMENT_DIHEDRAL_LIFT,
    EXPERIMENT_DISTORTION_GROWTH,
    EXPERIMENT_EXAMPLE_A2,
    EXPERIMENT_NORMAL_GROWTH,
    EXPERIMENT_QSUR_GROWTH,
    EXPERIMENT_TRICHOTOMY,
    Budgets,
    VerdictKind,
)
from .exceptions import BudgetExhaustedException, UnknownExperimentException
from .homomorphism import (
    Homomorphism,
    classify,
    distortion_growth,
    distortion_witness,
    qsur_failure_witness,
    qsur_growth,
)
from .killer import KillerWord, cyclically_reduced_killer, killer_word, verify_killer
from .quasimorphism import defect_sweep
from .stallings import bad_vertices, build, enumerate_elements
from .words import Word, is_subword, parse_word, reduced_words

_LOGGER = logging.getLogger(__name__)

# Two involutions; 0 stands for the image of a, 1 for the image of b
DIHEDRAL_LETTERS = "ab"


@dataclass(frozen=True)
class DihedralElement:
    """Element of Z/2 * Z/2 as an alternating word in the involutions."""

    letters: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        """Validate normal form."""
        if any(letter not in (0, 1) for letter in self.letters):
            raise ValueError(f"Invalid dihedral letters {self.letters}")
        if any(a == b for a, b in zip(self.letters, self.letters[1:])):
            raise ValueError(f"{self.letters} does not alternate")

    @classmethod
    def of(cls, letters: Tuple[int, ...]) -> "DihedralElement":
        """Return the product of `letters`, cancelling squares."""
        stack: List[int] = []
        for letter in letters:
            if stack and stack[-1] == letter:
                stack.pop()
            else:
                stack.append(letter)
        return cls(tuple(stack))

    @classmethod
    def project(cls, g: Word) -> "DihedralElement":
        """Image of an element of F_2 under a -> a, b -> b."""
        if g.rank != 2:
            raise ValueError("Projection is defined on F_2")
        return cls.of(tuple(abs(code) - 1 for code in g.letters))

    def __mul__(self, other: "DihedralElement") -> "DihedralElement":
        return DihedralElement.of(self.letters + other.letters)

    def inverse(self) -> "DihedralElement":
        """Return the inverse: the reversed word."""
        return DihedralElement(tuple(reversed(self.letters)))

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return "".join(DIHEDRAL_LETTERS[letter] for letter in self.letters) or "1"


def dihedral_elements(max_len: int) -> List[DihedralElement]:
    """All elements of length <= max_len, shortest first."""
    elements = [DihedralElement()]
    for length in range(1, max_len + 1):
        for first in (0, 1):
            elements.append(
                DihedralElement(tuple((first + i) % 2 for i in range(length)))
            )
    return elements


@lru_cache(maxsize=8)
def _conjugates_of_generators(conjugator_length: int) -> FrozenSet[DihedralElement]:
    return frozenset(
        c * DihedralElement((t,)) * c.inverse()
        for c in dihedral_elements(conjugator_length)
        for t in (0, 1)
    )


def dihedral_norm(
    x: DihedralElement, conjugator_length: int = DIHEDRAL_CONJUGATOR_LENGTH
) -> int:
    """Norm of `x` with respect to the conjugates of the two involutions."""
    if not x.letters:
        return 0
    conjugates = _conjugates_of_generators(conjugator_length)
    if x in conjugates:
        return 1
    if any(s.inverse() * x in conjugates for s in conjugates):
        return 2
    raise BudgetExhaustedException(
        f"{x} is no product of two conjugates with conjugators of length <= {conjugator_length}"
    )


def dihedral_lift(x: DihedralElement) -> Word:
    """
    Return a lift to F_2 with the same norm.

    Odd length elements are conjugates c t c^-1 of an involution and lift to the
    conjugate of a generator. Even length elements lift to such a conjugate
    times one more letter.
    """
    length = len(x)
    if length == 0:
        return Word.identity(2)
    if length % 2:
        half = length // 2
        c = Word(2, tuple(letter + 1 for letter in x.letters[:half]))
        t = Word.generator(2, x.letters[half] + 1)
        return c * t * ~c
    head = dihedral_lift(DihedralElement(x.letters[:-1]))
    middle = x.letters[(length - 1) // 2]
    last = x.letters[-1]
    return head * Word.generator(2, last + 1, -1 if last == middle else 1)


@dataclass(frozen=True)
class ExperimentParams:
    """Parameters shared by the experiments."""

    max_len: Optional[int] = None
    kmax: int = 20
    word: str = "ab"
    rank: Optional[int] = None
    budget: int = DEFAULT_NORM_BUDGET
    ball_radius: int = DEFAULT_BALL_RADIUS
    pattern_len: int = 3
    trace: bool = False

    def length(self, default: int) -> int:
        """`max_len` or the experiment's default."""
        return default if self.max_len is None else self.max_len


@dataclass
class ExperimentReport:
    """Outcome of an experiment."""

    experiment: str
    parameters: Dict[str, Any]
    passed: bool = True
    tables: Dict[str, List[Dict[str, Any]]] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    def check(self, condition: bool, note: str) -> None:
        """Record a property check."""
        self.notes.append(f"{'ok' if condition else 'FAILED'}: {note}")
        self.passed = self.passed and condition

    def as_dict(self) -> Dict[str, Any]:
        """Return the JSON form."""
        return {
            "experiment": self.experiment,
            "parameters": self.parameters,
            "passed": self.passed,
            "tables": self.tables,
            "notes": self.notes,
        }


def _dihedral_diameter(params: ExperimentParams) -> ExperimentReport:
    report = ExperimentReport(EXPERIMENT_DIHEDRAL_DIAMETER, asdict(params))
    rows = [
        {"element": str(x), "length": len(x), "norm": dihedral_norm(x)}
        for x in dihedral_elements(params.length(12))
    ]
    report.tables["norms"] = rows
    norms = [row["norm"] for row in rows]
    report.check(max(norms) <= 2, "every element has norm <= 2")
    report.check(2 in norms, "some element has norm 2")
    return report


def _dihedral_lift(params: ExperimentParams) -> ExperimentReport:
    max_len = params.length(8)
    report = ExperimentReport(EXPERIMENT_DIHEDRAL_LIFT, asdict(params))
    budget = max(params.budget, max_len)

    elements = dihedral_elements(max_len)
    rows = []
    for x in elements:
        lift = dihedral_lift(x)
        bounds = norm_bounds(lift, budget)
        rows.append(
            {
                "element": str(x),
                "lift": str(lift),
                "norm": dihedral_norm(x),
                "lower": bounds.lower,
                "upper": bounds.upper,
            }
        )
    report.tables["lifts"] = rows
    report.check(
        all(
            DihedralElement.project(parse_word(row["lift"], 2)) == x
            for row, x in zip(rows, elements)
        ),
        "lifts project back",
    )
    report.check(
        all(row["lower"] == row["upper"] == row["norm"] for row in rows),
        "lift bounds pinch at the dihedral norm",
    )

    # y = g·lift(y) with g in the kernel, and the distance from y to g is the norm of the lift
    upper = {x: row["upper"] for x, row in zip(elements, rows)}
    worst = max(upper[DihedralElement.project(y)] for y in reduced_words(2, max_len))
    report.tables["kernel_distance"] = [{"max_len": max_len, "max_distance": worst}]
    report.check(worst <= 2, f"distance to the kernel is <= 2 up to length {max_len}")
    return report


EXAMPLE_A2_GENERATORS = ("abAB", "bbbb", "aaa")
EXAMPLE_A2_WORDS = ("Aba", "Abaa", "Abaab")


def _example_a2(params: ExperimentParams) -> ExperimentReport:
    report = ExperimentReport(EXPERIMENT_EXAMPLE_A2, asdict(params))
    graph = build(2, [parse_word(text, 2) for text in EXAMPLE_A2_GENERATORS])
    bad = bad_vertices(graph)
    report.check(
        graph.vertex_count == 7 and len(graph.edges) == 9, "graph has 7 vertices and 9 edges"
    )
    report.check(
        [vertex.vertex for vertex in bad] == list(range(1, 7)), "all vertices but the base are bad"
    )

    killer = killer_word(graph)
    reduced = cyclically_reduced_killer(graph, killer)
    if params.trace:
        report.tables["trace"] = [step.as_dict() for step in killer.steps]
    report.tables["killer"] = [
        {"word": str(killer.word), "cyclically_reduced": str(reduced.word)}
    ]
    report.check(killer.verified and reduced.verified, "constructed killer words verify")

    elements = enumerate_elements(graph, params.length(14))
    report.check(
        not any(is_subword(reduced.word, g) for g in elements),
        f"killer word is no subword of a subgroup element up to length {params.length(14)}",
    )

    rows = []
    for text in EXAMPLE_A2_WORDS:
        word = parse_word(text, 2)
        rows.append({"word": text, "killer": verify_killer(graph, word)})
    report.tables["words"] = rows
    verdicts = {row["word"]: row["killer"] for row in rows}
    report.check(not verdicts["Aba"], "Aba is read along a path of the graph")
    report.check(verdicts["Abaa"] and verdicts["Abaab"], "Abaa and Abaab are killer words")
    extended = cyclically_reduced_killer(graph, KillerWord(parse_word("Abaa", 2), graph))
    report.check(str(extended.word) == "Abaab", "Abaa extends to Abaab")
    return report


def _normal_growth(params: ExperimentParams) -> ExperimentReport:
    report = ExperimentReport(EXPERIMENT_NORMAL_GROWTH, asdict(params))
    w = parse_word(params.word, params.rank)
    rows = normal_subgroup_growth(w, params.kmax)
    report.tables["growth"] = [{"k": k, "lower": str(bound)} for k, bound in rows]
    report.check(
        all(a[1] < b[1] for a, b in zip(rows, rows[1:])), "lower bounds strictly increase"
    )
    return report


DISTORTION_EXAMPLE = ("aa", "b", "abA")


def _distortion_growth(params: ExperimentParams) -> ExperimentReport:
    report = ExperimentReport(EXPERIMENT_DISTORTION_GROWTH, asdict(params))
    hom = Homomorphism.parse(DISTORTION_EXAMPLE, 2)
    budgets = Budgets(norm_budget=params.budget, ball_radius=params.ball_radius)
    witness = distortion_witness(hom, budgets)
    rows = distortion_growth(witness, hom, params.kmax, params.budget)
    report.tables["witness"] = [witness.as_dict()]
    report.tables["growth"] = [row.as_dict() for row in rows]
    u_norm = norm_upper(witness.u, params.budget)[0]
    report.check(
        all(row.image_upper <= 2 * u_norm for row in rows), "image side stays bounded"
    )
    report.check(
        all(a.source_lower < b.source_lower for a, b in zip(rows, rows[1:])),
        "source side lower bounds strictly increase",
    )
    return report


def _qsur_growth(params: ExperimentParams) -> ExperimentReport:
    report = ExperimentReport(EXPERIMENT_QSUR_GROWTH, asdict(params))
    hom = Homomorphism.parse(EXAMPLE_A2_GENERATORS, 2)
    witness = qsur_failure_witness(
        hom, Budgets(norm_budget=params.budget, ball_radius=params.ball_radius)
    )
    rows = qsur_growth(witness, params.kmax)
    report.tables["witness"] = [
        {"word": str(witness.word), "ball_radius": witness.ball_radius}
    ]
    report.tables["growth"] = [row.as_dict() for row in rows]
    report.check(
        all(a.distance_lower < b.distance_lower for a, b in zip(rows, rows[1:])),
        "distance lower bounds strictly increase",
    )
    report.check(
        all(row.distance_lower * 9 >= row.k for row in rows), "distance is at least k/9"
    )
    return report


# (target rank, images, expected kind)
TRICHOTOMY_CORPUS: Tuple[Tuple[int, Tuple[str, ...], VerdictKind], ...] = (
    (2, ("a", "b"), VerdictKind.ISOMORPHISM),
    (2, ("ab", "b"), VerdictKind.ISOMORPHISM),
    (2, ("b", "a"), VerdictKind.ISOMORPHISM),
    (2, ("A", "b"), VerdictKind.ISOMORPHISM),
    (2, ("baB", "b"), VerdictKind.ISOMORPHISM),
    (2, ("ab", "abb"), VerdictKind.ISOMORPHISM),
    (3, ("ac", "b", "c"), VerdictKind.ISOMORPHISM),
    (1, ("a",), VerdictKind.ISOMORPHISM),
    (2, ("a", "a"), VerdictKind.NON_INJECTIVE),
    (1, ("a", "a"), VerdictKind.NON_INJECTIVE),
    (2, ("a", "1"), VerdictKind.NON_INJECTIVE),
    (2, ("a", "b", "ab"), VerdictKind.NON_INJECTIVE),
    (2, ("aa", "aaa"), VerdictKind.NON_INJECTIVE),
    (3, ("a", "b", "1"), VerdictKind.NON_INJECTIVE),
    (2, ("aa", "b", "abA"), VerdictKind.FINITE_INDEX_PROPER),
    (2, ("aaa", "b", "abA", "aabAA"), VerdictKind.FINITE_INDEX_PROPER),
    (2, ("aa", "bb", "ab"), VerdictKind.FINITE_INDEX_PROPER),
    (2, ("a", "bb", "baB"), VerdictKind.FINITE_INDEX_PROPER),
    (1, ("aa",), VerdictKind.FINITE_INDEX_PROPER),
    (2, ("aa", "b"), VerdictKind.INFINITE_INDEX),
    (2, EXAMPLE_A2_GENERATORS, VerdictKind.INFINITE_INDEX),
    (2, ("ab", "ba"), VerdictKind.INFINITE_INDEX),
    (2, ("a",), VerdictKind.INFINITE_INDEX),
    (2, ("ab",), VerdictKind.INFINITE_INDEX),
    (3, ("a", "b"), VerdictKind.INFINITE_INDEX),
    (2, ("a", "baB"), VerdictKind.INFINITE_INDEX),
    (2, ("baB",), VerdictKind.INFINITE_INDEX),
)


def _trichotomy(params: ExperimentParams) -> ExperimentReport:
    report = ExperimentReport(EXPERIMENT_TRICHOTOMY, asdict(params))
    budgets = Budgets(norm_budget=params.budget, ball_radius=params.ball_radius)
    rows = []
    for target_rank, images, expected in TRICHOTOMY_CORPUS:
        hom = Homomorphism.parse(images, target_rank)
        verdict = classify(hom, budgets)
        rows.append(
            {
                "homomorphism": str(hom),
                "expected": expected.value,
                "kind": verdict.kind.value,
                "index": verdict.index,
                "witness": verdict.witness is not None,
            }
        )
    report.tables["verdicts"] = rows
    report.check(
        all(row["kind"] == row["expected"] for row in rows), "every verdict matches its label"
    )
    return report


def _defect(params: ExperimentParams) -> ExperimentReport:
    report = ExperimentReport(EXPERIMENT_DEFECT, asdict(params))
    rank = params.rank or 2
    elements = list(reduced_words(rank, params.length(5)))
    patterns = [w for w in reduced_words(rank, params.pattern_len) if not w.is_identity]
    defects = defect_sweep(patterns, cartesian(elements, elements))
    rows = [
        {"pattern": str(pattern), "defect": str(defect)}
        for pattern, defect in zip(patterns, defects)
    ]
    report.tables["defects"] = rows
    report.check(
        all(int(row["defect"]) <= 2 for row in rows), "defect of every counting function is <= 2"
    )
    return report


EXPERIMENTS: Dict[str, Callable[[ExperimentParams], ExperimentReport]] = {
    EXPERIMENT_DIHEDRAL_DIAMETER: _dihedral_diameter,
    EXPERIMENT_DIHEDRAL_LIFT: _dihedral_lift,
    EXPERIMENT_EXAMPLE_A2: _example_a2,
    EXPERIMENT_NORMAL_GROWTH: _normal_growth,
    EXPERIMENT_DISTORTION_GROWTH: _distortion_growth,
    EXPERIMENT_QSUR_GROWTH: _qsur_growth,
    EXPERIMENT_TRICHOTOMY: _trichotomy,
    EXPERIMENT_DEFECT: _defect,
}


def run_experiment(
    experiment: str, params: Optional[ExperimentParams] = None
) -> ExperimentReport:
    """Run the experiment with id `experiment`."""
    if experiment not in EXPERIMENTS:
        raise UnknownExperimentException(
            f"Unknown experiment `{experiment}`, choose from {sorted(EXPERIMENTS)}"
        )
    report = EXPERIMENTS[experiment](params or ExperimentParams())
    _LOGGER.info(
        "Experiment %s %s", experiment, "passed" if report.passed else "failed"
    )
    return report
