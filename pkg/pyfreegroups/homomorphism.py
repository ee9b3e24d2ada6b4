"""Homomorphisms between free groups and the quasi-isometry trichotomy."""
from dataclasses import dataclass, field
from fractions import Fraction
import logging
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from .binorm import (
    Certificate,
    certificate_product,
    conjugate_certificate,
    invert_certificate,
    norm_upper,
)
from .const import Budgets, VerdictKind
from .exceptions import (
    BudgetExhaustedException,
    PreconditionException,
    RankMismatchException,
)
from .helpers import fraction_to_dict
from .killer import KillerWord, cyclically_reduced_killer, killer_word
from .quasimorphism import (
    CountingQm,
    QmConstants,
    homogenize,
    lipschitz_constants,
    separation_witness,
)
from .stallings import (
    CosetData,
    StallingsGraph,
    build,
    coset_data,
    enumerate_elements,
    index,
    membership,
)
from .words import (
    Word,
    are_conjugate,
    check_rank,
    conjugate,
    invert,
    multiply,
    parse_word,
    power,
    product,
    reduced_words,
)

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class Homomorphism:
    """Homomorphism F_source_rank -> F_target_rank given by the images of the generators."""

    source_rank: int
    target_rank: int
    images: Tuple[Word, ...]

    def __post_init__(self) -> None:
        """Validate images."""
        check_rank(self.source_rank)
        check_rank(self.target_rank)
        object.__setattr__(self, "images", tuple(self.images))
        if len(self.images) != self.source_rank:
            raise RankMismatchException(
                f"Expected {self.source_rank} images, got {len(self.images)}"
            )
        for image in self.images:
            if image.rank != self.target_rank:
                raise RankMismatchException(
                    f"Image {image} does not lie in F_{self.target_rank}"
                )

    @classmethod
    def parse(cls, images: Sequence[str], target_rank: int) -> "Homomorphism":
        """Create homomorphism from image texts."""
        return cls(
            len(images), target_rank, tuple(parse_word(text, target_rank) for text in images)
        )

    @classmethod
    def identity(cls, rank: int) -> "Homomorphism":
        """Return the identity of F_rank."""
        return cls(rank, rank, tuple(Word.generator(rank, i) for i in range(1, rank + 1)))

    def __call__(self, g: Word) -> Word:
        return apply(self, g)

    def as_dict(self) -> Dict[str, Any]:
        """Return the JSON form."""
        return {
            "source_rank": self.source_rank,
            "target_rank": self.target_rank,
            "images": [str(image) for image in self.images],
        }

    def __str__(self) -> str:
        return (
            f"F_{self.source_rank} -> F_{self.target_rank}: "
            + ", ".join(str(image) for image in self.images)
        )


@dataclass(frozen=True)
class DistortionWitness:
    """Elements h1, h2 with conjugate images whose homogenised values differ."""

    h1: Word
    h2: Word
    u: Word
    g1: Word
    g2: Word
    exponents: Tuple[int, int]
    qm: CountingQm
    constants: QmConstants
    difference: Fraction

    @property
    def slope(self) -> Fraction:
        """Growth rate of the source side lower bound."""
        return abs(self.difference) / self.constants.lipschitz_bound

    def as_dict(self) -> Dict[str, Any]:
        """Return the JSON form."""
        return {
            "h1": str(self.h1),
            "h2": str(self.h2),
            "u": str(self.u),
            "g1": str(self.g1),
            "g2": str(self.g2),
            "exponents": list(self.exponents),
            "qm": str(self.qm),
            "constants": self.constants.as_dict(),
            "difference": fraction_to_dict(self.difference),
            "slope": fraction_to_dict(self.slope),
        }


@dataclass(frozen=True)
class QsurFailureWitness:
    """Cyclically reduced killer word w of the image; psi_bar_w vanishes on the image."""

    word: Word
    killer: KillerWord = field(repr=False)
    qm: CountingQm
    constants: QmConstants
    ball_radius: int

    def as_dict(self) -> Dict[str, Any]:
        """Return the JSON form."""
        return {
            "word": str(self.word),
            "killer": self.killer.as_dict(),
            "qm": str(self.qm),
            "constants": self.constants.as_dict(),
            "ball_radius": self.ball_radius,
        }


Witness = Union[Homomorphism, Word, DistortionWitness, QsurFailureWitness]


@dataclass(frozen=True)
class Verdict:
    """Classification of a homomorphism with its witness."""

    kind: VerdictKind
    homomorphism: Homomorphism
    image_rank: int
    index: Optional[int]
    witness: Optional[Witness] = None

    def as_dict(self) -> Dict[str, Any]:
        """Return the JSON form."""
        witness: Any = None
        if isinstance(self.witness, Word):
            witness = {"kernel_element": self.witness.as_dict()}
        elif isinstance(self.witness, Homomorphism):
            witness = {"inverse": self.witness.as_dict()}
        elif self.witness is not None:
            witness = self.witness.as_dict()
        return {
            "kind": self.kind.value,
            "homomorphism": self.homomorphism.as_dict(),
            "image_rank": self.image_rank,
            "index": self.index,
            "witness": witness,
        }


@dataclass(frozen=True)
class DistortionRow:
    """Norm bounds for h1^k h2^-k in the source and its image in the target."""

    k: int
    source_lower: Fraction
    image_upper: int
    image_certificate: Certificate = field(repr=False, compare=False)

    def as_dict(self) -> Dict[str, Any]:
        """Return the CSV row."""
        return {
            "k": self.k,
            "source_lower": str(self.source_lower),
            "image_upper": self.image_upper,
        }


@dataclass(frozen=True)
class QsurRow:
    """Lower bound on the distance from w^k to the image."""

    k: int
    distance_lower: Fraction

    def as_dict(self) -> Dict[str, Any]:
        """Return the CSV row."""
        return {"k": self.k, "distance_lower": str(self.distance_lower)}


def apply(hom: Homomorphism, g: Word) -> Word:
    """Return the image of `g`."""
    if g.rank != hom.source_rank:
        raise RankMismatchException(f"{g!r} does not lie in F_{hom.source_rank}")
    return product(
        (
            hom.images[abs(code) - 1] if code > 0 else invert(hom.images[abs(code) - 1])
            for code in g.letters
        ),
        hom.target_rank,
    )


def compose(outer: Homomorphism, inner: Homomorphism) -> Homomorphism:
    """Return outer ∘ inner."""
    if inner.target_rank != outer.source_rank:
        raise RankMismatchException("Homomorphisms can't be composed")
    return Homomorphism(
        inner.source_rank,
        outer.target_rank,
        tuple(apply(outer, image) for image in inner.images),
    )


def image_graph(hom: Homomorphism) -> StallingsGraph:
    """Stallings graph of the image; membership witnesses are source words."""
    return build(hom.target_rank, hom.images)


def kernel_witness(
    hom: Homomorphism, search_length: int = Budgets().search_length
) -> Optional[Word]:
    """
    Return a nontrivial element of the kernel, None for injective homomorphisms.

    Folding the image graph yields such an element whenever the image rank drops;
    a search over short source words backs it up.
    """
    graph = image_graph(hom)
    if graph.subgroup_rank == hom.source_rank:
        return None
    for relation in graph.relations:
        if apply(hom, relation).is_identity:
            return relation
    for g in reduced_words(hom.source_rank, search_length):
        if not g.is_identity and apply(hom, g).is_identity:
            return g
    raise BudgetExhaustedException(
        f"No kernel element of length <= {search_length} found for {hom}"
    )


def isomorphism_witness(hom: Homomorphism) -> Homomorphism:
    """Return the inverse of an isomorphism, checked by composing both ways."""
    graph = image_graph(hom)
    if hom.source_rank != hom.target_rank or index(graph) != 1:
        raise PreconditionException(f"{hom} is not an isomorphism")
    preimages = []
    for generator in range(1, hom.target_rank + 1):
        witness = membership(graph, Word.generator(hom.target_rank, generator))
        if witness is None:
            raise AssertionError("Generator missing from a finite index 1 image")
        preimages.append(witness)
    inverse = Homomorphism(hom.target_rank, hom.source_rank, tuple(preimages))
    if compose(hom, inverse) != Homomorphism.identity(hom.target_rank) or compose(
        inverse, hom
    ) != Homomorphism.identity(hom.source_rank):
        raise AssertionError(f"Inverse {inverse} does not invert {hom}")
    return inverse


def _first_outside(graph: StallingsGraph, search_length: int) -> Word:
    for u in reduced_words(graph.rank, search_length):
        if membership(graph, u) is None:
            return u
    raise BudgetExhaustedException(
        f"No element outside the image of length <= {search_length}"
    )


def distortion_witness(hom: Homomorphism, budgets: Budgets = Budgets()) -> DistortionWitness:
    """
    Build the witness that a proper finite index image is distorted.

    With N the normal core of the image and x^k, y^l in N, g1 = x^k y^l and
    g2 = u·g1·u^-1 for some u outside the image are conjugate in the target
    but their preimages generate non-conjugate cyclic subgroups of the source.
    """
    graph = image_graph(hom)
    if graph.subgroup_rank != hom.source_rank:
        raise PreconditionException(f"{hom} is not injective")
    if hom.target_rank < 2:
        raise PreconditionException("Distortion witnesses need target rank >= 2")
    if index(graph) in (None, 1):
        raise PreconditionException(f"The image of {hom} is not a proper finite index subgroup")

    data: CosetData = coset_data(graph)
    k, ell = data.exponents[0], data.exponents[1]
    rank = hom.target_rank
    g1 = multiply(power(Word.generator(rank, 1), k), power(Word.generator(rank, 2), ell))
    u = _first_outside(graph, budgets.search_length)
    g2 = conjugate(g1, u)
    h1, h2 = membership(graph, g1), membership(graph, g2)
    if h1 is None or h2 is None:
        raise AssertionError(f"{g1} and {g2} must lie in the normal core")

    qm = separation_witness(h1, h2)
    difference = homogenize(qm, h1, budgets.homogenize_steps) - homogenize(
        qm, h2, budgets.homogenize_steps
    )
    if difference == 0 or not are_conjugate(apply(hom, h1), apply(hom, h2)):
        raise AssertionError(f"Distortion witness for {hom} does not verify")
    witness = DistortionWitness(
        h1, h2, u, g1, g2, (k, ell), qm, lipschitz_constants(qm), difference
    )
    _LOGGER.debug("Distortion witness %s", witness)
    return witness


def distortion_growth_row(
    witness: DistortionWitness, hom: Homomorphism, k: int, budget: int
) -> DistortionRow:
    """
    Return the bounds for h1^k h2^-k.

    The image g1^k g2^-k = (g1^k u g1^-k)·u^-1 is a product of two conjugates
    of u^±1, so its norm is at most twice that of u for every k.
    """
    element = multiply(power(witness.h1, k), power(witness.h2, -k))
    _, u_certificate = norm_upper(witness.u, budget)
    certificate = conjugate_certificate(
        u_certificate, power(witness.g1, k)
    ) + invert_certificate(u_certificate)
    if certificate_product(certificate, hom.target_rank) != apply(hom, element):
        raise AssertionError(f"Image certificate fails for k = {k}")
    return DistortionRow(
        k,
        k * abs(witness.difference) / witness.constants.lipschitz_bound,
        len(certificate),
        certificate,
    )


def distortion_growth(
    witness: DistortionWitness, hom: Homomorphism, kmax: int, budget: int = Budgets().norm_budget
) -> List[DistortionRow]:
    """Return distortion rows for k = 0..kmax."""
    return [distortion_growth_row(witness, hom, k, budget) for k in range(kmax + 1)]


def qsur_failure_witness(
    hom: Homomorphism, budgets: Budgets = Budgets()
) -> QsurFailureWitness:
    """
    Build the witness that an infinite index image is not quasi-surjective.

    psi_bar_w for a cyclically reduced killer word w is 1 on w and 0 on the
    image; the latter is checked on the image ball of radius `ball_radius`.
    """
    if hom.target_rank < 2:
        raise PreconditionException("Quasi-surjectivity witnesses need target rank >= 2")
    graph = image_graph(hom)
    if graph.is_covering:
        raise PreconditionException(f"The image of {hom} has finite index")

    killer = cyclically_reduced_killer(graph, killer_word(graph, allow_hair=True))
    qm = CountingQm(killer.word)
    if homogenize(qm, killer.word, budgets.homogenize_steps) != 1:
        raise AssertionError(f"psi_bar of {killer.word} is not 1 on itself")
    for g in enumerate_elements(graph, budgets.ball_radius):
        if homogenize(qm, g, budgets.homogenize_steps) != 0:
            raise AssertionError(f"psi_bar_{killer.word} does not vanish on {g}")
    return QsurFailureWitness(
        killer.word, killer, qm, lipschitz_constants(qm), budgets.ball_radius
    )


def qsur_growth_row(witness: QsurFailureWitness, k: int) -> QsurRow:
    """
    Return the lower bound on the distance from w^k to the image.

    For k >= 1, w^k is outside the image, so |psi_bar(w^k) - psi_bar(h)| = k is
    at most lipschitz_bound times the distance to any image element h.
    """
    return QsurRow(
        k, homogenize(witness.qm, power(witness.word, k)) / witness.constants.lipschitz_bound
    )


def qsur_growth(witness: QsurFailureWitness, kmax: int) -> List[QsurRow]:
    """Return quasi-surjectivity rows for k = 0..kmax."""
    return [qsur_growth_row(witness, k) for k in range(kmax + 1)]


def classify(hom: Homomorphism, budgets: Budgets = Budgets()) -> Verdict:
    """
    Classify `hom` as an isomorphism or one of the three non quasi-isometries.

    Injectivity is decided by the rank of the image graph, then the index of the
    image separates the remaining cases.
    """
    graph = image_graph(hom)
    image_rank = graph.subgroup_rank
    image_index = index(graph)
    witness: Optional[Witness]

    if image_rank < hom.source_rank:
        kind = VerdictKind.NON_INJECTIVE
        witness = kernel_witness(hom, budgets.search_length)
    elif image_index == 1:
        kind = VerdictKind.ISOMORPHISM
        witness = isomorphism_witness(hom)
    elif hom.target_rank < 2:
        kind = (
            VerdictKind.INFINITE_INDEX
            if image_index is None
            else VerdictKind.FINITE_INDEX_PROPER
        )
        witness = None
        _LOGGER.warning("No witness for %s: target rank 1", hom)
    elif image_index is not None:
        kind = VerdictKind.FINITE_INDEX_PROPER
        witness = distortion_witness(hom, budgets)
    else:
        kind = VerdictKind.INFINITE_INDEX
        witness = qsur_failure_witness(hom, budgets)

    _LOGGER.debug(
        "Classified %s as %s (image rank %s, index %s)",
        hom,
        kind.value,
        image_rank,
        image_index,
    )
    return Verdict(kind, hom, image_rank, image_index, witness)

