"""Little counting quasi-morphisms and their homogenisations."""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Sequence, Tuple

from .const import COUNTING_DEFECT, DEFAULT_HOMOGENIZE_STEPS, HOMOGENIZED_DEFECT
from .exceptions import (
    BudgetExhaustedException,
    ConjugateSubgroupsException,
    IdentityWordException,
)
from .helpers import fraction_to_dict
from .words import (
    Codes,
    Word,
    are_conjugate,
    check_same_rank,
    count_disjoint,
    cyclic_core,
    invert,
    multiply,
    search_text,
)

_LOGGER = logging.getLogger(__name__)

QmValue = Fraction


@dataclass(frozen=True)
class CountingQm:
    """The little counting quasi-morphism psi_w = c_w - c_{w^-1}."""

    pattern: Word

    def __post_init__(self) -> None:
        """Validate pattern."""
        if self.pattern.is_identity:
            raise IdentityWordException("Counting quasi-morphisms need a nontrivial pattern")

    @property
    def rank(self) -> int:
        """Rank of the free group the quasi-morphism lives on."""
        return self.pattern.rank

    def as_dict(self) -> Dict[str, Any]:
        """Return the JSON form."""
        return {"pattern": self.pattern.as_dict()}

    def __str__(self) -> str:
        return f"psi_{self.pattern}"


@dataclass(frozen=True)
class QmConstants:
    """Bounds entering the Lipschitz estimate of a homogeneous quasi-morphism."""

    defect_bound: Fraction
    generator_bound: Fraction

    @property
    def lipschitz_bound(self) -> Fraction:
        """Lipschitz constant B + 2D."""
        return self.generator_bound + 2 * self.defect_bound

    def as_dict(self) -> Dict[str, Any]:
        """Return the JSON form."""
        return {
            "defect_bound": fraction_to_dict(self.defect_bound),
            "generator_bound": fraction_to_dict(self.generator_bound),
            "lipschitz_bound": fraction_to_dict(self.lipschitz_bound),
        }


def psi(qm: CountingQm, g: Word) -> int:
    """Return psi_w(g) = c_w(g) - c_{w^-1}(g)."""
    check_same_rank(qm.pattern, g)
    return count_disjoint(qm.pattern, g) - count_disjoint(invert(qm.pattern), g)


def _occurrence_rate(pattern: Codes, cycle: Codes, max_steps: int) -> Fraction:
    """
    Return lim c_pattern(cycle^n) / n for a cyclically reduced `cycle`.

    The greedy scan over cycle^infinity is determined by the scan position modulo
    len(cycle), so it becomes periodic after at most len(cycle) selections.
    """
    size, width = len(cycle), len(pattern)
    starts = [
        start
        for start in range(size)
        if all(cycle[(start + i) % size] == pattern[i] for i in range(width))
    ]
    if not starts:
        return Fraction(0)

    seen: Dict[int, Tuple[int, int]] = {}
    cursor, count = 0, 0
    while cursor % size not in seen:
        if count >= max_steps:
            raise BudgetExhaustedException(
                f"Homogenisation scan exceeded {max_steps} steps"
            )
        seen[cursor % size] = (count, cursor)
        cursor += min((start - cursor) % size for start in starts) + width
        count += 1
    first_count, first_cursor = seen[cursor % size]
    return Fraction(count - first_count, (cursor - first_cursor) // size)


def homogenize(
    qm: CountingQm, g: Word, max_steps: int = DEFAULT_HOMOGENIZE_STEPS
) -> QmValue:
    """
    Return the exact value of the homogenisation lim psi_w(g^n)/n.

    Homogeneous quasi-morphisms are class functions, so the limit is computed on
    the cyclic core of `g`.
    """
    check_same_rank(qm.pattern, g)
    core = cyclic_core(g).letters
    if not core:
        return Fraction(0)
    return _occurrence_rate(qm.pattern.letters, core, max_steps) - _occurrence_rate(
        invert(qm.pattern).letters, core, max_steps
    )


def subgroups_conjugate(g: Word, h: Word) -> bool:
    """Whether the cyclic subgroups <g> and <h> are conjugate."""
    return are_conjugate(g, h) or are_conjugate(g, invert(h))


def separation_witness(g: Word, h: Word) -> CountingQm:
    """
    Return a counting quasi-morphism whose homogenisation separates g and h.

    The pattern is the cyclic core of the longer element (g on ties); the
    homogenisation is 1 on it and has absolute value < 1 on the other one.
    """
    check_same_rank(g, h)
    if g.is_identity and h.is_identity:
        raise ConjugateSubgroupsException("Both elements are the identity")
    if subgroups_conjugate(g, h):
        raise ConjugateSubgroupsException(
            f"<{g}> and <{h}> are conjugate subgroups"
        )
    core_g, core_h = cyclic_core(g), cyclic_core(h)
    pattern = core_g if len(core_g) >= len(core_h) else core_h
    return CountingQm(pattern)


def _psi_of_texts(qm: CountingQm, texts: Sequence[str]) -> List[int]:
    forward, backward = search_text(qm.pattern), search_text(invert(qm.pattern))
    return [text.count(forward) - text.count(backward) for text in texts]


def _checked_defect(qm: CountingQm, worst: int) -> Fraction:
    if worst > COUNTING_DEFECT:
        _LOGGER.warning("Defect %s of %s exceeds %s", worst, qm, COUNTING_DEFECT)
    return Fraction(worst)


def defect_probe(qm: CountingQm, samples: Iterable[Tuple[Word, Word]]) -> Fraction:
    """Return max |psi(g) - psi(gh) + psi(h)| over the samples."""
    return defect_sweep([qm.pattern], samples)[0]


def defect_sweep(
    patterns: Sequence[Word], samples: Iterable[Tuple[Word, Word]]
) -> List[Fraction]:
    """
    Return the defect of psi_w over the samples, for each pattern w.

    Each element and each product gh is reduced and encoded once, and shared by
    all patterns.
    """
    index: Dict[Word, int] = {}
    triples: List[Tuple[int, int, int]] = []

    def slot(word: Word) -> int:
        return index.setdefault(word, len(index))

    for g, h in samples:
        triples.append((slot(g), slot(h), slot(multiply(g, h))))
    if patterns and index:
        check_same_rank(*patterns, next(iter(index)))
    texts = [search_text(word) for word in index]

    defects = []
    for pattern in patterns:
        qm = CountingQm(pattern)
        values = _psi_of_texts(qm, texts)
        worst = max(
            (abs(values[g] - values[gh] + values[h]) for g, h, gh in triples),
            default=0,
        )
        defects.append(_checked_defect(qm, worst))
    return defects


def lipschitz_constants(qm: CountingQm) -> QmConstants:
    """Return the constants of the Lipschitz estimate for the homogenisation."""
    generator_bound = max(
        abs(homogenize(qm, Word.generator(qm.rank, index)))
        for index in range(1, qm.rank + 1)
    )
    return QmConstants(
        defect_bound=HOMOGENIZED_DEFECT, generator_bound=Fraction(generator_bound)
    )


def qm_value_to_dict(value: QmValue) -> Dict[str, Any]:
    """Return the JSON form {"value": {"num", "den"}} of a quasi-morphism value."""
    return {"value": fraction_to_dict(value)}
