"""Tests for `pyfreegroups.homomorphism`."""
from fractions import Fraction
import logging

import pytest

from pyfreegroups.binorm import certificate_product
from pyfreegroups.const import Budgets, VerdictKind
from pyfreegroups.exceptions import PreconditionException, RankMismatchException
from pyfreegroups.homomorphism import (
    DistortionWitness,
    Homomorphism,
    QsurFailureWitness,
    apply,
    classify,
    compose,
    distortion_growth,
    distortion_growth_row,
    distortion_witness,
    image_graph,
    isomorphism_witness,
    kernel_witness,
    qsur_failure_witness,
    qsur_growth,
)
from pyfreegroups.quasimorphism import homogenize
from pyfreegroups.stallings import enumerate_elements
from pyfreegroups.words import Word, are_conjugate, conjugate, parse_word

from .const import CORPUS_FIXTURE, EXAMPLE_A2_GENERATORS, LIPSCHITZ_BOUND
from .helpers import load_fixture

CORPUS = load_fixture(CORPUS_FIXTURE)


def test_homomorphism_validation():
    with pytest.raises(RankMismatchException):
        Homomorphism(2, 2, (parse_word("a", 2),))
    with pytest.raises(RankMismatchException):
        Homomorphism(1, 2, (parse_word("a", 3),))
    with pytest.raises(ValueError):
        Homomorphism(0, 2, ())


def test_apply(index_two_hom):
    assert apply(index_two_hom, parse_word("abc")) == parse_word("aababA")
    assert index_two_hom(parse_word("C", 3)) == parse_word("aBA")
    assert index_two_hom(Word.identity(3)).is_identity
    with pytest.raises(RankMismatchException):
        apply(index_two_hom, parse_word("ab"))


def test_compose(index_two_hom):
    swap = Homomorphism.parse(["b", "a"], 2)
    composed = compose(swap, index_two_hom)
    assert [str(image) for image in composed.images] == ["bb", "a", "baB"]
    assert compose(Homomorphism.identity(2), index_two_hom) == index_two_hom
    with pytest.raises(RankMismatchException):
        compose(index_two_hom, index_two_hom)


def test_as_dict(index_two_hom):
    assert index_two_hom.as_dict() == {
        "source_rank": 3,
        "target_rank": 2,
        "images": ["aa", "b", "abA"],
    }
    assert str(index_two_hom) == "F_3 -> F_2: aa, b, abA"


def test_kernel_witness():
    hom = Homomorphism.parse(["a", "a"], 2)
    assert kernel_witness(hom) == parse_word("Ab")
    hom = Homomorphism.parse(["a", "b", "ab"], 2)
    witness = kernel_witness(hom)
    assert witness is not None and not witness.is_identity
    assert apply(hom, witness).is_identity
    assert kernel_witness(Homomorphism.identity(2)) is None


def test_isomorphism_witness():
    hom = Homomorphism.parse(["ab", "b"], 2)
    inverse = isomorphism_witness(hom)
    assert [str(image) for image in inverse.images] == ["aB", "b"]
    assert compose(hom, inverse) == Homomorphism.identity(2)
    with pytest.raises(PreconditionException):
        isomorphism_witness(Homomorphism.parse(["aa", "b"], 2))


def test_distortion_witness(index_two_hom):
    witness = distortion_witness(index_two_hom)
    assert witness.exponents == (2, 1)
    assert witness.g1 == parse_word("aab")
    assert witness.u == parse_word("a")
    assert witness.g2 == parse_word("aaabA")
    assert witness.h1 == parse_word("ab", 3)
    assert witness.h2 == parse_word("ac", 3)
    assert witness.qm.pattern == parse_word("ab", 3)
    assert witness.difference == 1
    assert witness.constants.lipschitz_bound == LIPSCHITZ_BOUND
    assert witness.slope == Fraction(1, 8)
    assert are_conjugate(index_two_hom(witness.h1), index_two_hom(witness.h2))
    assert witness.as_dict()["slope"] == {"num": 1, "den": 8}


def test_distortion_witness_preconditions():
    with pytest.raises(PreconditionException):
        distortion_witness(Homomorphism.parse(["aa", "b"], 2))
    with pytest.raises(PreconditionException):
        distortion_witness(Homomorphism.parse(["a", "a"], 2))
    with pytest.raises(PreconditionException):
        distortion_witness(Homomorphism.parse(["aa"], 1))


def test_distortion_growth(index_two_hom):
    witness = distortion_witness(index_two_hom)
    rows = distortion_growth(witness, index_two_hom, 10)
    assert [row.k for row in rows] == list(range(11))
    assert all(row.image_upper == 2 for row in rows)
    assert all(a.source_lower < b.source_lower for a, b in zip(rows, rows[1:]))
    row = distortion_growth_row(witness, index_two_hom, 50, Budgets().norm_budget)
    assert row.source_lower == Fraction(25, 4)
    assert float(row.source_lower) == 6.25
    image = index_two_hom(witness.h1**50 * witness.h2**-50)
    assert certificate_product(row.image_certificate, 2) == image
    assert row.as_dict() == {"k": 50, "source_lower": "25/4", "image_upper": 2}


def test_qsur_failure_witness():
    hom = Homomorphism.parse(EXAMPLE_A2_GENERATORS, 2)
    witness = qsur_failure_witness(hom)
    assert witness.word.is_cyclically_reduced
    assert homogenize(witness.qm, witness.word) == 1
    graph = image_graph(hom)
    ball = enumerate_elements(graph, 12)
    assert parse_word("bbbbaaa") in ball
    assert all(homogenize(witness.qm, g) == 0 for g in ball)
    rows = qsur_growth(witness, 20)
    assert rows[0].distance_lower == 0
    assert all(a.distance_lower < b.distance_lower for a, b in zip(rows, rows[1:]))
    assert all(9 * row.distance_lower >= row.k for row in rows)


def test_qsur_failure_witness_hair():
    hom = Homomorphism.parse(["baB"], 2)
    witness = qsur_failure_witness(hom)
    assert str(witness.word) == "ab"
    assert witness.ball_radius == Budgets().ball_radius


def test_qsur_failure_witness_preconditions():
    with pytest.raises(PreconditionException):
        qsur_failure_witness(Homomorphism.parse(["aa", "b", "abA"], 2))
    with pytest.raises(PreconditionException):
        qsur_failure_witness(Homomorphism.parse(["aa"], 1))


CORPUS_IDS = [f"F{entry['target_rank']}:{','.join(entry['images'])}" for entry in CORPUS]


@pytest.mark.parametrize("entry", CORPUS, ids=CORPUS_IDS)
def test_classify_corpus(entry):
    hom = Homomorphism.parse(entry["images"], entry["target_rank"])
    verdict = classify(hom)
    assert verdict.kind == VerdictKind(entry["kind"])
    assert verdict.homomorphism == hom
    if verdict.kind == VerdictKind.ISOMORPHISM:
        assert compose(hom, verdict.witness) == Homomorphism.identity(hom.target_rank)
    elif verdict.kind == VerdictKind.NON_INJECTIVE:
        assert not verdict.witness.is_identity
        assert apply(hom, verdict.witness).is_identity
    elif verdict.kind == VerdictKind.FINITE_INDEX_PROPER:
        assert isinstance(verdict.witness, DistortionWitness)
        assert verdict.index > 1
    else:
        assert isinstance(verdict.witness, QsurFailureWitness)
        assert verdict.index is None
    assert verdict.as_dict()["kind"] == entry["kind"]


def test_classify_rank_one_target(caplog):
    with caplog.at_level(logging.WARNING):
        verdict = classify(Homomorphism.parse(["aa"], 1))
    assert verdict.kind == VerdictKind.FINITE_INDEX_PROPER
    assert verdict.index == 2
    assert verdict.witness is None
    assert "target rank 1" in caplog.text


def test_classify_rank_one_cases():
    assert classify(Homomorphism.parse(["A"], 1)).kind == VerdictKind.ISOMORPHISM
    assert classify(Homomorphism.parse(["a", "a"], 1)).kind == VerdictKind.NON_INJECTIVE


def test_verdict_as_dict(index_two_hom):
    data = classify(index_two_hom).as_dict()
    assert data["kind"] == "finite_index_proper"
    assert data["index"] == 2
    assert data["image_rank"] == 3
    assert data["witness"]["u"] == "a"
    data = classify(Homomorphism.parse(["a", "a"], 2)).as_dict()
    assert data["witness"] == {"kernel_element": {"rank": 2, "word": "Ab"}}


@pytest.mark.parametrize("entry", CORPUS, ids=CORPUS_IDS)
def test_classify_inner_automorphism(entry):
    hom = Homomorphism.parse(entry["images"], entry["target_rank"])
    rank = hom.target_rank
    u = Word.generator(rank, rank, -1) * Word.generator(rank, 1)
    inner = Homomorphism(
        hom.source_rank, rank, tuple(conjugate(image, u) for image in hom.images)
    )
    verdict, conjugated = classify(hom), classify(inner)
    assert conjugated.kind == verdict.kind
    assert conjugated.index == verdict.index
