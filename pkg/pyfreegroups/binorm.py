"""Certified bounds for the conjugation-invariant word norm."""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
import logging
from math import ceil
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from .const import DEFAULT_NORM_BUDGET, MAX_NORM_SEARCH_LENGTH
from .exceptions import IdentityWordException, NotCyclicallyReducedException
from .helpers import fraction_to_dict
from .quasimorphism import CountingQm, homogenize, lipschitz_constants
from .words import (
    Codes,
    Letter,
    Word,
    check_same_rank,
    conjugate,
    cyclic_core,
    cyclic_split,
    exponent_sums,
    invert,
    multiply,
    power,
    product,
)

_LOGGER = logging.getLogger(__name__)

METHOD_TRIVIAL = "trivial"
METHOD_ABELIANIZATION = "abelianization"
METHOD_PARITY = "parity"
METHOD_QUASIMORPHISM = "quasimorphism"

# (conjugator, letter) standing for conjugator · letter · conjugator^-1
Factor = Tuple[Word, Letter]
Certificate = Tuple[Factor, ...]


@dataclass(frozen=True)
class LowerCertificate:
    """Lipschitz function |phi(g)| / C justifying a lower bound."""

    method: str
    description: str
    bound: int
    value: Fraction = Fraction(0)
    constant: Fraction = Fraction(1)

    def as_dict(self) -> Dict[str, Any]:
        """Return the JSON form."""
        return {
            "method": self.method,
            "description": self.description,
            "bound": self.bound,
            "value": fraction_to_dict(self.value),
            "constant": fraction_to_dict(self.constant),
        }


@dataclass(frozen=True)
class NormBounds:
    """Lower and upper bound for the norm of `element`, each with a certificate."""

    element: Word
    lower: int
    upper: int
    upper_certificate: Certificate = field(repr=False)
    lower_certificate: LowerCertificate = field(repr=False)

    def __post_init__(self) -> None:
        """Validate bounds."""
        if self.lower > self.upper:
            raise AssertionError(
                f"Lower bound {self.lower} exceeds upper bound {self.upper} for {self.element}"
            )

    @property
    def exact(self) -> Optional[int]:
        """The norm when the bounds meet."""
        return self.lower if self.lower == self.upper else None

    def as_dict(self) -> Dict[str, Any]:
        """Return the JSON form."""
        return {
            "element": self.element.as_dict(),
            "lower": self.lower,
            "upper": self.upper,
            "exact": self.exact,
            "certificates": {
                "upper": certificate_to_list(self.upper_certificate),
                "lower": self.lower_certificate.as_dict(),
            },
        }


def certificate_to_list(certificate: Certificate) -> List[Dict[str, str]]:
    """Return the JSON form of an upper certificate."""
    return [
        {"conjugator": str(conjugator), "letter": str(letter)}
        for conjugator, letter in certificate
    ]


def certificate_product(certificate: Iterable[Factor], rank: int) -> Word:
    """Multiply out a factorization into conjugates of letters."""
    return product(
        (
            conjugate(Word(rank, (letter.code,)), conjugator)
            for conjugator, letter in certificate
        ),
        rank,
    )


def conjugate_certificate(certificate: Iterable[Factor], u: Word) -> Certificate:
    """Turn a certificate of g into one of u·g·u^-1."""
    return tuple((multiply(u, conjugator), letter) for conjugator, letter in certificate)


def invert_certificate(certificate: Sequence[Factor]) -> Certificate:
    """Turn a certificate of g into one of g^-1."""
    return tuple(
        (conjugator, letter.inverse()) for conjugator, letter in reversed(certificate)
    )


def _deletion_plan(codes: Codes, budget: int) -> Tuple[int, Tuple[int, ...]]:
    """
    Return the fewest deletions that leave a freely trivial word.

    Kept letters pair off as a non-crossing matching of mutually inverse letters.
    A deleted letter sits under as many matched pairs as its conjugator is long,
    so deletions are only allowed at nesting depth <= budget. The budget bounds
    the nesting depth only: the caller prepends a rotation head and a conjugating
    prefix to every conjugator.
    """
    size, cap = len(codes), budget + 1
    infinity = size + 1

    @lru_cache(maxsize=None)
    def best(i: int, j: int, depth: int) -> int:
        if i >= j:
            return 0
        result = infinity
        if depth <= budget:
            result = 1 + best(i + 1, j, depth)
        for k in range(i + 1, j):
            if codes[k] == -codes[i]:
                result = min(
                    result,
                    best(i + 1, k, min(depth + 1, cap)) + best(k + 1, j, depth),
                )
        return min(result, infinity)

    cost = best(0, size, 0)
    deleted: List[int] = []
    stack = [(0, size, 0)]
    while stack:
        i, j, depth = stack.pop()
        if i >= j:
            continue
        target = best(i, j, depth)
        if depth <= budget and 1 + best(i + 1, j, depth) == target:
            deleted.append(i)
            stack.append((i + 1, j, depth))
            continue
        for k in range(i + 1, j):
            inner = min(depth + 1, cap)
            if codes[k] == -codes[i] and best(i + 1, k, inner) + best(
                k + 1, j, depth
            ) == target:
                stack.append((i + 1, k, inner))
                stack.append((k + 1, j, depth))
                break
    best.cache_clear()
    return cost, tuple(sorted(deleted))


@lru_cache(maxsize=4096)
def _core_factorization(core: Word, budget: int) -> Certificate:
    """Factorize a cyclically reduced word, trying every rotation."""
    codes, rank = core.letters, core.rank
    if len(codes) > MAX_NORM_SEARCH_LENGTH:
        _LOGGER.warning(
            "Cyclic core of length %s exceeds search cap %s, using letterwise factorization",
            len(codes),
            MAX_NORM_SEARCH_LENGTH,
        )
        return tuple(
            (Word.identity(rank), Letter.from_code(code)) for code in codes
        )

    plan: Optional[Tuple[int, int, Tuple[int, ...]]] = None
    for start in range(len(codes)):
        cost, deleted = _deletion_plan(codes[start:] + codes[:start], budget)
        if plan is None or cost < plan[0]:
            plan = (cost, start, deleted)
    if plan is None:
        return ()
    cost, start, deleted = plan
    _LOGGER.debug(
        "Core %s: %s deletions at rotation %s (budget %s)", core, cost, start, budget
    )

    # core = head · rotated · head^-1
    head = codes[:start]
    rotated = codes[start:] + codes[:start]
    kept: List[int] = []
    factors: List[Factor] = []
    for position, code in enumerate(rotated):
        if position in deleted:
            factors.append((Word(rank, head + tuple(kept)), Letter.from_code(code)))
        else:
            kept.append(code)
    return tuple(factors)


def norm_upper(g: Word, budget: int = DEFAULT_NORM_BUDGET) -> Tuple[int, Certificate]:
    """
    Return an upper bound for the norm of `g` with its factorization.

    The bound never exceeds the length of the cyclic core of `g`, and is the
    same for all conjugates of `g`.

    `budget` caps the nesting depth of deleted letters inside the chosen
    rotation of the core. A conjugator in the certificate is the conjugating
    prefix of `g`, then the rotation head, then at most `budget` kept letters.
    """
    if budget < 0:
        raise ValueError("`budget` must be non-negative")
    prefix, core = cyclic_split(g)
    certificate = conjugate_certificate(_core_factorization(core, budget), prefix)
    if certificate_product(certificate, g.rank) != g:
        raise AssertionError(f"Norm certificate does not multiply out to {g}")
    return len(certificate), certificate


def _adjust_parity(bound: int, total: int) -> int:
    # each conjugate of a letter changes the total exponent sum by 1
    return bound + 1 if (bound - total) % 2 else bound


def norm_lower(
    g: Word, witnesses: Iterable[CountingQm] = ()
) -> Tuple[int, LowerCertificate]:
    """
    Return a lower bound for the norm of `g`.

    Uses the abelianisation, the parity of the total exponent sum and
    |psi_bar(g)| / (B + D) for every witness.
    """
    if g.is_identity:
        return 0, LowerCertificate(METHOD_TRIVIAL, "identity", 0)

    sums = exponent_sums(g)
    total = sum(sums)
    absolute = sum(abs(value) for value in sums)
    if absolute:
        best = LowerCertificate(
            METHOD_ABELIANIZATION,
            f"sum of |exponent sums| {list(sums)}",
            absolute,
            Fraction(absolute),
        )
    else:
        best = LowerCertificate(
            METHOD_PARITY, "nontrivial element with all exponent sums 0", 2
        )

    for qm in witnesses:
        check_same_rank(qm.pattern, g)
        constants = lipschitz_constants(qm)
        value = abs(homogenize(qm, g))
        constant = constants.generator_bound + constants.defect_bound
        bound = _adjust_parity(ceil(value / constant), total)
        if bound > best.bound:
            best = LowerCertificate(
                METHOD_QUASIMORPHISM, str(qm), bound, value, constant
            )
    return best.bound, best


def _default_witnesses(g: Word) -> List[CountingQm]:
    core = cyclic_core(g)
    return [] if core.is_identity else [CountingQm(core)]


def norm_bounds(
    g: Word,
    budget: int = DEFAULT_NORM_BUDGET,
    witnesses: Optional[Iterable[CountingQm]] = None,
) -> NormBounds:
    """Return both bounds for `g`; witnesses default to psi of its cyclic core."""
    lower, lower_certificate = norm_lower(
        g, _default_witnesses(g) if witnesses is None else witnesses
    )
    upper, upper_certificate = norm_upper(g, budget)
    return NormBounds(g, lower, upper, upper_certificate, lower_certificate)


def norm_exact_small(
    g: Word,
    budget: int = DEFAULT_NORM_BUDGET,
    witnesses: Optional[Iterable[CountingQm]] = None,
) -> Optional[int]:
    """Return the norm of `g` when the bounds meet, None when it stays unknown."""
    return norm_bounds(g, budget, witnesses).exact


def normal_subgroup_growth(w: Word, kmax: int) -> List[Tuple[int, Fraction]]:
    """
    Return (k, lower bound on the norm of w^k) for k = 0..kmax.

    psi_bar_w(w^k) = k, so the bound k / (B + D) grows linearly. The bounds are
    the raw rationals |psi_bar_w(w^k)| / (B + D), not rounded; the norm is an
    integer, so it is at least their ceiling.
    """
    if w.is_identity:
        raise IdentityWordException("The normal closure of the identity is trivial")
    if not w.is_cyclically_reduced:
        raise NotCyclicallyReducedException(f"{w} is not cyclically reduced")
    if kmax < 0:
        raise ValueError("`kmax` must be non-negative")
    qm = CountingQm(w)
    constants = lipschitz_constants(qm)
    constant = constants.generator_bound + constants.defect_bound
    return [(k, abs(homogenize(qm, power(w, k))) / constant) for k in range(kmax + 1)]

