"""Test helpers"""
from functools import lru_cache, reduce
from itertools import combinations
import json
from operator import mul
from typing import Any, Dict, Optional, Set

from hypothesis import strategies as st
from sympy.combinatorics.free_groups import FreeGroup, free_group

from pyfreegroups.words import Word, conjugate, letters_of_rank, multiply, reduced_words


def load_fixture(file_name: str) -> Any:
    """Load a JSON fixture"""
    with open(f"tests/fixtures/{file_name}", "r", encoding="utf8") as file:
        return json.load(file)


def words(rank: int = 2, max_size: int = 8) -> st.SearchStrategy:
    """Strategy for reduced words of the given rank"""
    return st.lists(st.sampled_from(letters_of_rank(rank)), max_size=max_size).map(
        lambda codes: Word(rank, tuple(codes))
    )


def sympy_group(rank: int) -> FreeGroup:
    """Free group of sympy used as an independent oracle"""
    return free_group(" ".join(f"x{i}" for i in range(1, rank + 1)))[0]


def to_sympy(group: FreeGroup, g: Word):
    """Return `g` as a sympy free group element"""
    return reduce(
        mul,
        [
            group.generators[abs(code) - 1] ** (1 if code > 0 else -1)
            for code in g.letters
        ],
        group.identity,
    )


def brute_force_norm(g: Word, conjugator_length: int, max_factors: int) -> Optional[int]:
    """
    Return the least n <= max_factors such that g is a product of n conjugates of
    letters with conjugators of length <= conjugator_length, None if there is none.
    """
    conjugates = {
        conjugate(Word(g.rank, (code,)), c)
        for c in reduced_words(g.rank, conjugator_length)
        for code in letters_of_rank(g.rank)
    }
    level: Set[Word] = {Word.identity(g.rank)}
    for n in range(max_factors + 1):
        if g in level:
            return n
        if n == max_factors:
            break
        level = {multiply(h, s) for h in level for s in conjugates}
    return None


def brute_force_count(w: Word, g: Word) -> int:
    """Largest number of pairwise disjoint occurrences of `w` in `g`"""
    width = len(w)
    starts = [
        i for i in range(len(g) - width + 1) if g.letters[i : i + width] == w.letters
    ]
    for size in range(len(starts), 0, -1):
        for chosen in combinations(starts, size):
            if all(second - first >= width for first, second in zip(chosen, chosen[1:])):
                return size
    return 0


@lru_cache(maxsize=None)
def brute_force_norms(
    rank: int, conjugator_length: int, max_factors: int
) -> Dict[Word, int]:
    """
    Breadth-first search over products of conjugates of letters: the least number
    of factors for every element reachable with at most max_factors of them
    """
    conjugates = {
        conjugate(Word(rank, (code,)), c)
        for c in reduced_words(rank, conjugator_length)
        for code in letters_of_rank(rank)
    }
    norms = {Word.identity(rank): 0}
    frontier = [Word.identity(rank)]
    for n in range(1, max_factors + 1):
        found = []
        for h in frontier:
            for s in conjugates:
                g = multiply(h, s)
                if g not in norms:
                    norms[g] = n
                    found.append(g)
        frontier = found
    return norms
