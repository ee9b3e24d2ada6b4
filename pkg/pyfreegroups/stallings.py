"""Stallings subgroup graphs."""
from collections import deque
from dataclasses import dataclass
import logging
from typing import Any, Dict, Iterable, List, Optional, Set, Tuple

import networkx as nx
from sympy.combinatorics import Permutation, PermutationGroup

from .exceptions import InfiniteIndexException
from .words import (
    Word,
    check_rank,
    check_same_rank,
    invert,
    letter_char,
    letter_key,
    letters_of_rank,
    multiply,
    product,
    shortlex_key,
)

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class Edge:
    """
    Directed edge labelled by a positive generator.

    `weight` is an element of the free group on the defining generators of the
    subgroup; reading the edge backwards contributes its inverse.
    """

    source: int
    target: int
    label: int
    weight: Word

    def as_dict(self) -> Dict[str, Any]:
        """Return the JSON form."""
        return {
            "src": self.source,
            "dst": self.target,
            "label": letter_char(self.label),
            "weight": str(self.weight),
        }


@dataclass(frozen=True)
class VertexClass:
    """Valence of a vertex and the letters it cannot read."""

    vertex: int
    valence: int
    bad: bool
    missing: Tuple[int, ...] = ()

    def as_dict(self) -> Dict[str, Any]:
        """Return the JSON form."""
        return {
            "vertex": self.vertex,
            "valence": self.valence,
            "bad": self.bad,
            "missing": [letter_char(code) for code in self.missing],
        }


@dataclass(frozen=True)
class CosetData:
    """Permutation action of the generators on the cosets of a finite index subgroup."""

    cosets: Tuple[int, ...]
    permutations: Tuple[Permutation, ...]
    exponents: Tuple[int, ...]

    @property
    def quotient_order(self) -> int:
        """Order of the image of the permutation representation."""
        return int(PermutationGroup(list(self.permutations)).order())

    def as_dict(self) -> Dict[str, Any]:
        """Return the JSON form."""
        return {
            "cosets": list(self.cosets),
            "permutations": [
                [int(image) for image in permutation.array_form]
                for permutation in self.permutations
            ],
            "exponents": list(self.exponents),
            "quotient_order": self.quotient_order,
        }


class StallingsGraph:
    """
    Folded core graph of a finitely generated subgroup.

    Vertices are 0..vertex_count-1, numbered breadth-first from the base (vertex
    0) exploring letters in letter order, so equal subgroups give equal graphs.
    """

    def __init__(
        self,
        rank: int,
        generators: Iterable[Word],
        vertices: Iterable[int],
        edges: Iterable[Edge],
        base: int,
        relations: Iterable[Word] = (),
    ) -> None:
        """Create graph and renumber its vertices canonically."""
        self.rank = check_rank(rank)
        self.generators: Tuple[Word, ...] = tuple(generators)
        self.relations: Tuple[Word, ...] = tuple(relations)
        self.witness_rank = max(len(self.generators), 1)

        edges = list(edges)
        raw_moves: Dict[Tuple[int, int], Tuple[int, Edge]] = {}
        for edge in edges:
            raw_moves[(edge.source, edge.label)] = (edge.target, edge)
            raw_moves[(edge.target, -edge.label)] = (edge.source, edge)

        numbering = {base: 0}
        queue = deque([base])
        while queue:
            vertex = queue.popleft()
            for code in letters_of_rank(self.rank):
                move = raw_moves.get((vertex, code))
                if move and move[0] not in numbering:
                    numbering[move[0]] = len(numbering)
                    queue.append(move[0])
        if set(numbering) != set(vertices):
            raise AssertionError("Subgroup graph is not connected")

        self.base = 0
        self.vertex_count = len(numbering)
        self.edges: Tuple[Edge, ...] = tuple(
            sorted(
                (
                    Edge(numbering[e.source], numbering[e.target], e.label, e.weight)
                    for e in edges
                ),
                key=lambda e: (e.source, letter_key(e.label), e.target),
            )
        )
        self._moves: Dict[Tuple[int, int], Tuple[int, Word]] = {}
        for edge in self.edges:
            self._moves[(edge.source, edge.label)] = (edge.target, edge.weight)
            self._moves[(edge.target, -edge.label)] = (edge.source, invert(edge.weight))

    @property
    def vertices(self) -> range:
        """Vertex ids."""
        return range(self.vertex_count)

    @property
    def subgroup_rank(self) -> int:
        """Rank of the subgroup: E - V + 1."""
        return len(self.edges) - self.vertex_count + 1

    @property
    def is_covering(self) -> bool:
        """Whether every vertex reads every letter."""
        return len(self._moves) == 2 * self.rank * self.vertex_count

    def move(self, vertex: int, code: int) -> Optional[int]:
        """Return the endpoint of the edge read from `vertex` by letter `code`."""
        step = self._moves.get((vertex, code))
        return step[0] if step else None

    def read(self, vertex: int, word: Word) -> Optional[int]:
        """Return where reading `word` from `vertex` ends, None if it leaves the graph."""
        found = self.read_weighted(vertex, word)
        return found[0] if found else None

    def read_weighted(self, vertex: int, word: Word) -> Optional[Tuple[int, Word]]:
        """Like `read`, also returning the product of the edge weights on the path."""
        check_same_rank(Word.identity(self.rank), word)
        weight = Word.identity(self.witness_rank)
        for code in word.letters:
            step = self._moves.get((vertex, code))
            if step is None:
                return None
            vertex = step[0]
            weight = multiply(weight, step[1])
        return vertex, weight

    def valence(self, vertex: int) -> int:
        """Number of incident half-edges; loops count twice."""
        return sum(1 for code in letters_of_rank(self.rank) if (vertex, code) in self._moves)

    def missing_letters(self, vertex: int) -> Tuple[int, ...]:
        """Letters that cannot be read from `vertex`, in letter order."""
        return tuple(
            code for code in letters_of_rank(self.rank) if (vertex, code) not in self._moves
        )

    def expand(self, witness: Word) -> Word:
        """Substitute the defining generators into a witness word."""
        return product(
            (
                self.generators[abs(code) - 1]
                if code > 0
                else invert(self.generators[abs(code) - 1])
                for code in witness.letters
            ),
            self.rank,
        )

    def canonical_form(self) -> Tuple[int, Tuple[Tuple[int, int, int], ...]]:
        """Labelled graph up to based isomorphism, ignoring weights."""
        return (
            self.vertex_count,
            tuple((edge.source, edge.target, edge.label) for edge in self.edges),
        )

    def to_networkx(self) -> nx.MultiDiGraph:
        """Return the graph as a networkx multigraph with labelled edges."""
        graph = nx.MultiDiGraph(base=self.base, rank=self.rank)
        for vertex in self.vertices:
            valence = self.valence(vertex)
            graph.add_node(
                vertex,
                base=vertex == self.base,
                valence=valence,
                bad=valence < 2 * self.rank,
            )
        for edge in self.edges:
            graph.add_edge(
                edge.source,
                edge.target,
                label=letter_char(edge.label),
                weight=str(edge.weight),
            )
        return graph

    def as_dict(self) -> Dict[str, Any]:
        """Return the JSON form."""
        return {
            "rank": self.rank,
            "vertices": list(self.vertices),
            "base": self.base,
            "edges": [edge.as_dict() for edge in self.edges],
        }

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StallingsGraph):
            return NotImplemented
        return self.rank == other.rank and self.canonical_form() == other.canonical_form()

    def __hash__(self) -> int:
        return hash((self.rank, self.canonical_form()))

    def __repr__(self) -> str:
        return (
            f"StallingsGraph(rank={self.rank}, vertices={self.vertex_count}, "
            f"edges={len(self.edges)})"
        )


class _Folder:
    """Mutable labelled graph with weighted edges, folded in place."""

    def __init__(self, rank: int, witness_rank: int) -> None:
        self.rank = rank
        self.witness_rank = witness_rank
        self.edges: Dict[int, Edge] = {}
        self.incident: Dict[int, Set[int]] = {0: set()}
        self.relations: List[Word] = []
        self._next_vertex = 1
        self._next_edge = 0

    def new_vertex(self) -> int:
        vertex = self._next_vertex
        self._next_vertex += 1
        self.incident[vertex] = set()
        return vertex

    def add_edge(self, source: int, target: int, label: int, weight: Word) -> None:
        self.edges[self._next_edge] = Edge(source, target, label, weight)
        self.incident[source].add(self._next_edge)
        self.incident[target].add(self._next_edge)
        self._next_edge += 1

    def remove_edge(self, edge_id: int) -> Edge:
        edge = self.edges.pop(edge_id)
        self.incident[edge.source].discard(edge_id)
        self.incident[edge.target].discard(edge_id)
        return edge

    def add_petal(self, word: Word, index: int) -> None:
        """Add a loop at the base reading `word`, weighted by generator `index`."""
        codes = word.letters
        gen = Word.generator(self.witness_rank, index)
        current = 0
        for position, code in enumerate(codes):
            last = position == len(codes) - 1
            nxt = 0 if last else self.new_vertex()
            weight = gen if last else Word.identity(self.witness_rank)
            if code > 0:
                self.add_edge(current, nxt, code, weight)
            else:
                self.add_edge(nxt, current, -code, invert(weight))
            current = nxt

    def record(self, relation: Word) -> None:
        if not relation.is_identity:
            _LOGGER.debug("Fold found relation %s", relation)
            self.relations.append(relation)

    def _merge(self, keep: int, drop: int, delta: Word) -> None:
        """Identify `drop` with `keep`; delta is pot(keep)·pot(drop)^-1."""
        for edge_id in list(self.incident.pop(drop)):
            edge = self.edges[edge_id]
            weight = edge.weight
            if edge.source == drop:
                weight = multiply(delta, weight)
            if edge.target == drop:
                weight = multiply(weight, invert(delta))
            self.edges[edge_id] = Edge(
                keep if edge.source == drop else edge.source,
                keep if edge.target == drop else edge.target,
                edge.label,
                weight,
            )
            self.incident[keep].add(edge_id)

    def _find_fold(self, vertex: int) -> Optional[Tuple[int, int, bool]]:
        seen: Dict[Tuple[int, bool], int] = {}
        for edge_id in sorted(self.incident[vertex]):
            edge = self.edges[edge_id]
            for outgoing in (True, False):
                if (edge.source if outgoing else edge.target) != vertex:
                    continue
                key = (edge.label, outgoing)
                if key in seen:
                    return seen[key], edge_id, outgoing
                seen[key] = edge_id
        return None

    def fold(self) -> None:
        """Fold until no vertex has two equally labelled edges in one direction."""
        stack = list(self.incident)
        while stack:
            vertex = stack.pop()
            if vertex not in self.incident:
                continue
            found = self._find_fold(vertex)
            if found is None:
                continue
            first_id, second_id, outgoing = found
            first = self.edges[first_id]
            second = self.remove_edge(second_id)
            if outgoing:
                # first: vertex -> v, second: vertex -> w
                keep, drop = first.target, second.target
                delta = multiply(invert(first.weight), second.weight)
            else:
                # first: v -> vertex, second: w -> vertex
                keep, drop = first.source, second.source
                delta = multiply(first.weight, invert(second.weight))
            if keep == drop:
                self.record(delta)
            else:
                if drop == 0:
                    keep, drop, delta = drop, keep, invert(delta)
                _LOGGER.debug("Folding vertex %s into %s", drop, keep)
                self._merge(keep, drop, delta)
                stack.append(keep)
                for edge_id in self.incident[keep]:
                    stack.extend((self.edges[edge_id].source, self.edges[edge_id].target))
            stack.append(vertex)

    def trim(self) -> None:
        """Remove valence-1 vertices other than the base until none remain."""
        stack = list(self.incident)
        while stack:
            vertex = stack.pop()
            if vertex == 0 or vertex not in self.incident:
                continue
            incident = self.incident[vertex]
            half_edges = sum(
                2 if self.edges[e].source == self.edges[e].target else 1 for e in incident
            )
            if half_edges <= 1:
                for edge_id in list(incident):
                    edge = self.remove_edge(edge_id)
                    stack.append(edge.target if edge.source == vertex else edge.source)
                del self.incident[vertex]


def build(rank: int, generators: Iterable[Word]) -> StallingsGraph:
    """
    Return the Stallings graph of the subgroup generated by `generators`.

    Edge weights record how every base loop is written in the generators, and
    `relations` lists the nontrivial relations among the generators met while
    folding.
    """
    check_rank(rank)
    generators = tuple(generators)
    check_same_rank(Word.identity(rank), *generators)
    folder = _Folder(rank, max(len(generators), 1))
    for index, generator in enumerate(generators, start=1):
        if generator.is_identity:
            folder.record(Word.generator(folder.witness_rank, index))
        folder.add_petal(generator, index)
    folder.fold()
    folder.trim()
    graph = StallingsGraph(
        rank,
        generators,
        folder.incident,
        folder.edges.values(),
        0,
        folder.relations,
    )
    _LOGGER.debug(
        "Built %r for %s generators, subgroup rank %s",
        graph,
        len(generators),
        graph.subgroup_rank,
    )
    return graph


def membership(graph: StallingsGraph, g: Word) -> Optional[Word]:
    """
    Return g as a word in the defining generators, None when g is not in the subgroup.

    The witness is a word in the free group of rank `graph.witness_rank` whose
    letter i stands for the i-th defining generator.
    """
    found = graph.read_weighted(graph.base, g)
    if found is None or found[0] != graph.base:
        return None
    witness = found[1]
    if graph.expand(witness) != g:
        raise AssertionError(f"Membership witness {witness} does not expand to {g}")
    return witness


def index(graph: StallingsGraph) -> Optional[int]:
    """Return the index of the subgroup, None when it is infinite."""
    return graph.vertex_count if graph.is_covering else None


def bad_vertices(graph: StallingsGraph) -> List[VertexClass]:
    """Return the vertices of valence < 2·rank with their missing letters."""
    classes = []
    for vertex in graph.vertices:
        missing = graph.missing_letters(vertex)
        if missing:
            classes.append(
                VertexClass(vertex, 2 * graph.rank - len(missing), True, missing)
            )
    return classes


def coset_data(graph: StallingsGraph) -> CosetData:
    """Return the permutation action of the generators on the cosets."""
    if not graph.is_covering:
        raise InfiniteIndexException("Coset data needs a subgroup of finite index")
    permutations = tuple(
        Permutation([graph.move(vertex, generator) for vertex in graph.vertices])
        for generator in range(1, graph.rank + 1)
    )
    return CosetData(
        cosets=tuple(graph.vertices),
        permutations=permutations,
        exponents=tuple(int(permutation.order()) for permutation in permutations),
    )


def enumerate_elements(graph: StallingsGraph, max_len: int) -> List[Word]:
    """Return all subgroup elements of length <= max_len in shortlex order."""
    found: List[Word] = []
    alphabet = letters_of_rank(graph.rank)
    stack: List[Tuple[int, Tuple[int, ...]]] = [(graph.base, ())]
    while stack:
        vertex, codes = stack.pop()
        if vertex == graph.base:
            found.append(Word(graph.rank, codes))
        if len(codes) == max_len:
            continue
        for code in alphabet:
            if codes and codes[-1] == -code:
                continue
            target = graph.move(vertex, code)
            if target is not None:
                stack.append((target, codes + (code,)))
    return sorted(found, key=shortlex_key)
