"""Tests for `pyfreegroups.quasimorphism`."""
from fractions import Fraction
from itertools import product

from hypothesis import assume, given, settings
from hypothesis import strategies as st
import pytest

from pyfreegroups.binorm import norm_upper
from pyfreegroups.exceptions import (
    BudgetExhaustedException,
    ConjugateSubgroupsException,
    IdentityWordException,
    RankMismatchException,
)
from pyfreegroups.quasimorphism import (
    CountingQm,
    defect_probe,
    defect_sweep,
    homogenize,
    lipschitz_constants,
    psi,
    qm_value_to_dict,
    separation_witness,
    subgroups_conjugate,
)
from pyfreegroups.words import (
    Word,
    conjugate,
    cyclic_core,
    invert,
    multiply,
    parse_word,
    power,
    reduced_words,
)

from .const import HOMOGENIZED_DEFECT, LIPSCHITZ_BOUND
from .helpers import words


def qm(text: str, rank: int = 2) -> CountingQm:
    return CountingQm(parse_word(text, rank))


def test_psi():
    assert psi(qm("ab"), parse_word("abab")) == 2
    assert psi(qm("ab"), parse_word("BABA")) == -2
    assert psi(qm("ab"), parse_word("aBa")) == 0
    assert psi(qm("aa"), parse_word("aaaaa")) == 2


def test_identity_pattern():
    with pytest.raises(IdentityWordException):
        CountingQm(Word.identity(2))


def test_rank_mismatch():
    with pytest.raises(RankMismatchException):
        psi(qm("ab"), parse_word("abc"))


@pytest.mark.parametrize(
    "pattern,word,value",
    [
        ("ab", "ab", Fraction(1)),
        ("ab", "a", Fraction(0)),
        ("ab", "BA", Fraction(-1)),
        ("ab", "baB", Fraction(0)),
        ("aa", "a", Fraction(1, 2)),
        ("abab", "ab", Fraction(1, 2)),
        ("a", "aab", Fraction(2)),
        ("ab", "abAB", Fraction(1)),
    ],
)
def test_homogenize(pattern, word, value):
    assert homogenize(qm(pattern), parse_word(word, 2)) == value


def test_homogenize_identity():
    assert homogenize(qm("ab"), Word.identity(2)) == 0


def test_homogenize_budget():
    with pytest.raises(BudgetExhaustedException):
        homogenize(qm("a"), parse_word("aab"), max_steps=1)


@given(words(max_size=6), words(max_size=4))
def test_homogenize_class_function(g, u):
    pattern = qm("ab")
    assert homogenize(pattern, conjugate(g, u)) == homogenize(pattern, g)


@given(words(max_size=5))
def test_homogenize_homogeneous(g):
    pattern = qm("aB")
    assert homogenize(pattern, power(g, 3)) == 3 * homogenize(pattern, g)
    assert homogenize(pattern, ~g) == -homogenize(pattern, g)


def test_subgroups_conjugate():
    assert subgroups_conjugate(parse_word("ab"), parse_word("ba"))
    assert subgroups_conjugate(parse_word("ab"), parse_word("BA"))
    assert not subgroups_conjugate(parse_word("ab"), parse_word("aab"))


def test_separation_witness():
    g, h = parse_word("ab"), parse_word("aab")
    witness = separation_witness(g, h)
    assert witness.pattern == parse_word("aab")
    assert homogenize(witness, h) == 1
    assert homogenize(witness, g) == 0


def test_separation_witness_ties_use_first():
    g, h = parse_word("ab", 3), parse_word("ac", 3)
    witness = separation_witness(g, h)
    assert witness.pattern == g
    assert homogenize(witness, g) - homogenize(witness, h) == 1


@pytest.mark.parametrize("first,second", [("ab", "ba"), ("ab", "BA"), ("1", "1")])
def test_separation_witness_conjugate(first, second):
    with pytest.raises(ConjugateSubgroupsException):
        separation_witness(parse_word(first, 2), parse_word(second, 2))


def test_defect_probe():
    elements = list(reduced_words(2, 3))
    for pattern in ("a", "ab", "aB", "aab"):
        assert defect_probe(qm(pattern), product(elements, elements)) <= 2


def test_defect_probe_attained():
    samples = [(parse_word("ab"), parse_word("ab"))]
    assert defect_probe(qm("bab"), samples) == 1


def test_lipschitz_constants():
    constants = lipschitz_constants(qm("ab"))
    assert constants.generator_bound == 0
    assert constants.defect_bound == HOMOGENIZED_DEFECT
    assert constants.lipschitz_bound == LIPSCHITZ_BOUND
    assert lipschitz_constants(qm("a")).lipschitz_bound == 9
    assert constants.as_dict()["lipschitz_bound"] == {"num": 8, "den": 1}


def test_qm_value_to_dict():
    assert qm_value_to_dict(Fraction(1, 2)) == {"value": {"num": 1, "den": 2}}
    assert qm_value_to_dict(Fraction(-3)) == {"value": {"num": -3, "den": 1}}
    assert str(qm("aB")) == "psi_aB"
    assert qm("aB").as_dict() == {"pattern": {"rank": 2, "word": "aB"}}


def patterns(max_size: int = 3):
    return words(max_size=max_size).filter(lambda w: not w.is_identity).map(CountingQm)


@settings(deadline=None)
@given(patterns(2), words(max_size=4))
def test_homogenize_matches_long_powers(pattern, g):
    # |psi(g^n)/n - psi_bar(g)| <= 2/n, and the denominator of psi_bar is at most 20
    # for these sizes, so a long power pins the value down
    n = 2000
    estimate = Fraction(psi(pattern, power(g, n)), n)
    assert estimate.limit_denominator(20) == homogenize(pattern, g)


@settings(deadline=None)
@given(patterns(), words(max_size=6), st.integers(1, 8))
def test_homogenize_convergence(pattern, g, n):
    gap = homogenize(pattern, g) - Fraction(psi(pattern, power(g, n)), n)
    assert abs(gap) <= Fraction(4, n)


@given(patterns(4), words(max_size=10))
def test_homogenize_length_bound(pattern, g):
    assert abs(homogenize(pattern, g)) <= Fraction(len(g), len(pattern.pattern))


@given(words(max_size=6).filter(lambda w: not w.is_identity), st.integers(1, 5))
def test_homogenize_pattern_value(w, k):
    pattern = CountingQm(cyclic_core(w))
    assert homogenize(pattern, w) == 1
    assert homogenize(pattern, power(w, k)) == k


@settings(deadline=None)
@given(patterns(), words(max_size=6), words(max_size=6))
def test_homogenize_lipschitz(pattern, g, h):
    constant = lipschitz_constants(pattern).lipschitz_bound
    distance = norm_upper(multiply(invert(g), h))[0]
    assert abs(homogenize(pattern, g) - homogenize(pattern, h)) <= constant * distance
    assert abs(homogenize(pattern, g)) <= constant * norm_upper(g)[0]


@given(words(max_size=6), words(max_size=6))
def test_separation_witness_random(g, h):
    assume(not (g.is_identity and h.is_identity))
    assume(not subgroups_conjugate(g, h))
    witness = separation_witness(g, h)
    longer, other = (g, h) if len(cyclic_core(g)) >= len(cyclic_core(h)) else (h, g)
    assert witness.pattern == cyclic_core(longer)
    assert homogenize(witness, longer) == 1
    assert abs(homogenize(witness, other)) < 1


@given(patterns(4), words(), words())
def test_defect_random(pattern, g, h):
    assert defect_probe(pattern, [(g, h)]) <= 2


def test_defect_sweep_exhaustive():
    elements = list(reduced_words(2, 4))
    pattern_words = [w for w in reduced_words(2, 3) if not w.is_identity]
    defects = defect_sweep(pattern_words, product(elements, elements))
    assert len(defects) == 52
    assert 1 <= max(defects) <= 2
    for pattern, defect in zip(pattern_words[:4], defects):
        assert defect == defect_probe(CountingQm(pattern), product(elements, elements))


def test_defect_sweep_rank_mismatch():
    with pytest.raises(RankMismatchException):
        defect_sweep([parse_word("ab", 3)], [(parse_word("a"), parse_word("b"))])
    assert defect_sweep([parse_word("ab")], []) == [Fraction(0)]
