"""Killer words: reduced words that are not subwords of any element of a subgroup."""
from dataclasses import dataclass, field
from functools import lru_cache
import logging
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import networkx as nx

from .exceptions import (
    FiniteIndexException,
    InvalidGraphException,
    PreconditionException,
)
from .stallings import StallingsGraph
from .words import Codes, Word, letter_char, letters_of_rank, word_key

_LOGGER = logging.getLogger(__name__)

State = Tuple[int, Optional[int]]


@dataclass(frozen=True)
class GraphPath:
    """Reduced path in a subgroup graph, given by its start and the letters read."""

    graph: StallingsGraph = field(repr=False, compare=False)
    start: int
    letters: Codes = ()

    def __post_init__(self) -> None:
        """Validate path."""
        if any(a == -b for a, b in zip(self.letters, self.letters[1:])):
            raise ValueError("Path backtracks")
        if self.graph.read(self.start, self.word) is None:
            raise ValueError(f"{self.word} can't be read from vertex {self.start}")

    @property
    def word(self) -> Word:
        """Word read along the path."""
        return Word(self.graph.rank, self.letters)

    @property
    def end(self) -> int:
        """Terminal vertex."""
        end = self.graph.read(self.start, self.word)
        assert end is not None
        return end

    @property
    def state(self) -> State:
        """Terminal vertex together with the last letter read."""
        return self.end, self.letters[-1] if self.letters else None


@dataclass(frozen=True)
class KillerStep:
    """One step of the killer word construction."""

    vertex: int
    before: Word
    after: Word
    extended: bool
    bad_vertex: Optional[int] = None
    exit_letter: Optional[int] = None

    def as_dict(self) -> Dict[str, Any]:
        """Return the JSON form."""
        return {
            "vertex": self.vertex,
            "before": str(self.before),
            "after": str(self.after),
            "extended": self.extended,
            "bad_vertex": self.bad_vertex,
            "exit_letter": None
            if self.exit_letter is None
            else letter_char(self.exit_letter),
        }

    def __str__(self) -> str:
        if not self.extended:
            return f"v{self.vertex}: {self.before} exits the graph"
        return (
            f"v{self.vertex}: {self.before} -> {self.after} "
            f"(bad vertex v{self.bad_vertex}, exit {letter_char(self.exit_letter or 0)})"
        )


@dataclass(frozen=True)
class KillerWord:
    """A word together with the graph it kills and its construction trace."""

    word: Word
    graph: StallingsGraph = field(repr=False, compare=False)
    verified: bool = False
    steps: Tuple[KillerStep, ...] = field(default=(), repr=False, compare=False)

    def as_dict(self) -> Dict[str, Any]:
        """Return the JSON form."""
        return {
            "word": str(self.word),
            "verified": self.verified,
            "steps": [step.as_dict() for step in self.steps],
        }


def _check_whiskers(graph: StallingsGraph) -> None:
    for vertex in graph.vertices:
        if graph.valence(vertex) < 2:
            raise InvalidGraphException(
                f"Vertex {vertex} has valence {graph.valence(vertex)} < 2"
            )


@lru_cache(maxsize=32)
def _state_graph(graph: StallingsGraph) -> nx.DiGraph:
    """Non-backtracking moves between (vertex, last letter) states."""
    states = nx.DiGraph()
    for vertex in graph.vertices:
        for last in (None,) + letters_of_rank(graph.rank):
            for code in letters_of_rank(graph.rank):
                target = graph.move(vertex, code)
                if target is not None and code != -(last or 0):
                    states.add_edge((vertex, last), (target, code))
    return states


def _shortest_extensions(graph: StallingsGraph, source: State) -> Dict[int, Codes]:
    """Shortest, then least, non-backtracking continuation from `source` to each vertex."""
    states = _state_graph(graph)
    found: Dict[int, Codes] = {source[0]: ()}
    if source not in states:
        return found
    for state, path in nx.single_source_shortest_path(states, source).items():
        codes = tuple(step[1] for step in path[1:])
        vertex = state[0]
        if vertex not in found or (len(codes), word_key(codes)) < (
            len(found[vertex]),
            word_key(found[vertex]),
        ):
            found[vertex] = codes
    return found


def extend_reduced_path(
    graph: StallingsGraph, prefix: GraphPath, target: int
) -> GraphPath:
    """
    Extend `prefix` to a reduced path ending at `target`.

    When every vertex has valence >= 2 such an extension always exists.
    """
    _check_whiskers(graph)
    if prefix.end == target:
        return prefix
    extension = _shortest_extensions(graph, prefix.state).get(target)
    if extension is None:
        raise InvalidGraphException(
            f"Vertex {target} unreachable from {prefix.end} without backtracking"
        )
    return GraphPath(graph, prefix.start, prefix.letters + extension)


def exits_at(graph: StallingsGraph, vertex: int, w: Word) -> bool:
    """Whether reading `w` from `vertex` leaves the graph."""
    return graph.read(vertex, w) is None


def verify_killer(graph: StallingsGraph, w: Word) -> bool:
    """Whether reading `w` from every vertex leaves the graph."""
    return all(exits_at(graph, vertex, w) for vertex in graph.vertices)


def _forced_step(
    graph: StallingsGraph, vertex: int, codes: Codes, step: Word
) -> Tuple[GraphPath, int]:
    if step.is_identity:
        raise ValueError("A forced step needs at least its exit letter")
    path = GraphPath(graph, vertex, codes + step.letters[:-1])
    exit_letter = step.letters[-1]
    if exit_letter not in graph.missing_letters(path.end):
        raise ValueError(
            f"{letter_char(exit_letter)} does not leave the graph at vertex {path.end}"
        )
    return path, exit_letter


def killer_word(
    graph: StallingsGraph,
    vertex_order: Optional[Sequence[int]] = None,
    allow_hair: bool = False,
    forced_steps: Optional[Mapping[int, Word]] = None,
) -> KillerWord:
    """
    Construct a killer word for the subgroup of `graph`.

    Vertices are handled in turn. If the current word can still be read from a
    vertex, the path is extended inside the graph to the nearest bad vertex and
    then leaves it along the lowest missing letter. Every word is a prefix of
    the next one, so vertices handled earlier stay killed.

    With `allow_hair` vertices of valence < 2 are accepted: a non-backtracking
    search can only get stuck at such a vertex, and it is bad itself.

    `forced_steps` replays a hand-made construction: at a listed vertex the
    given word continues the current one, its last letter being the exit
    letter at the bad vertex the rest of it leads to.
    """
    if graph.is_covering:
        raise FiniteIndexException("Subgroups of finite index have no killer words")
    if not allow_hair:
        _check_whiskers(graph)
    order: Iterable[int] = graph.vertices if vertex_order is None else vertex_order

    codes: Codes = ()
    steps: List[KillerStep] = []
    for vertex in order:
        before = Word(graph.rank, codes)
        if exits_at(graph, vertex, before):
            steps.append(KillerStep(vertex, before, before, False))
            continue
        forced = forced_steps.get(vertex) if forced_steps else None
        if forced is not None:
            path, exit_letter = _forced_step(graph, vertex, codes, forced)
            bad = path.end
        else:
            prefix = GraphPath(graph, vertex, codes)
            extensions = _shortest_extensions(graph, prefix.state)
            bad = min(
                (v for v in extensions if graph.missing_letters(v)),
                key=lambda v: (len(extensions[v]), word_key(extensions[v]), v),
            )
            if allow_hair:
                path = GraphPath(graph, vertex, codes + extensions[bad])
            else:
                path = extend_reduced_path(graph, prefix, bad)
            exit_letter = graph.missing_letters(bad)[0]
        codes = path.letters + (exit_letter,)
        step = KillerStep(
            vertex, before, Word(graph.rank, codes), True, bad, exit_letter
        )
        _LOGGER.debug("Killer step %s", step)
        steps.append(step)

    word = Word(graph.rank, codes)
    if not verify_killer(graph, word):
        raise AssertionError(f"Constructed word {word} is not a killer word")
    return KillerWord(word, graph, True, tuple(steps))


def cyclically_reduced_killer(graph: StallingsGraph, killer: KillerWord) -> KillerWord:
    """
    Return a cyclically reduced killer word containing `killer.word`.

    A word whose ends cancel is multiplied on the right by the lowest letter that
    is neither its first letter nor that letter's inverse.
    """
    if graph.rank < 2:
        raise PreconditionException("Cyclically reduced killer words need rank >= 2")
    if not verify_killer(graph, killer.word):
        raise InvalidGraphException(f"{killer.word} is not a killer word")
    if killer.word.is_cyclically_reduced:
        return killer
    first = killer.word.letters[0]
    extra = next(
        code for code in letters_of_rank(graph.rank) if code not in (first, -first)
    )
    word = Word(graph.rank, killer.word.letters + (extra,))
    if not verify_killer(graph, word) or not word.is_cyclically_reduced:
        raise AssertionError(f"{word} is not a cyclically reduced killer word")
    _LOGGER.debug("Cyclically reduced %s to %s", killer.word, word)
    return KillerWord(word, graph, True, killer.steps)
