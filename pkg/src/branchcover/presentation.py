"""Edge-path presentations of fundamental groups.

A connected complex with a basepoint gets a deterministic BFS spanning
tree (ascending-id tie-breaking); the oriented non-tree edges are the
generators and every 2-simplex contributes one relator word obtained by
collapsing tree edges.
"""
from __future__ import annotations

from collections import deque
from functools import lru_cache

from .errors import BadBasepoint, Disconnected
from .simplicial import SimplicialComplex, Simplex

# a letter is (generator index, +1 or -1); a word is a tuple of letters
Letter = tuple[int, int]
Word = tuple[Letter, ...]


class EdgePathPresentation:
    """Spanning tree, ordered generators and relators for a complex."""

    __slots__ = ("complex", "basepoint", "parent", "tree_edges", "generators",
                 "gen_index", "relators", "_hash")

    def __init__(self, complex: SimplicialComplex, basepoint: int):
        if basepoint not in set(complex.vertices):
            raise BadBasepoint(f"basepoint {basepoint} is not a vertex")
        adj: dict[int, list[int]] = {v: [] for v in complex.vertices}
        for (u, v) in complex.simplices_of_dim(1):
            adj[u].append(v)
            adj[v].append(u)
        parent: dict[int, int] = {basepoint: basepoint}
        order = deque([basepoint])
        while order:
            u = order.popleft()
            for w in sorted(adj[u]):
                if w not in parent:
                    parent[w] = u
                    order.append(w)
        missing = [v for v in complex.vertices if v not in parent]
        if missing:
            raise Disconnected(
                f"complex is not connected: vertex {missing[0]} unreachable from {basepoint}")

        self.complex = complex
        self.basepoint = basepoint
        self.parent = parent
        self.tree_edges = frozenset(
            tuple(sorted((v, parent[v]))) for v in complex.vertices if v != basepoint)
        self.generators = tuple(
            e for e in complex.simplices_of_dim(1) if e not in self.tree_edges)
        self.gen_index = {e: i for i, e in enumerate(self.generators)}
        self.relators = tuple(self._relator(t) for t in complex.simplices_of_dim(2))
        self._hash = hash((complex, basepoint))

    def _letter(self, u: int, v: int) -> Letter | None:
        """Letter for traversing the oriented edge u -> v; None on the tree."""
        e = (u, v) if u < v else (v, u)
        if e in self.tree_edges:
            return None
        return (self.gen_index[e], 1 if u < v else -1)

    def _relator(self, triangle: Simplex) -> Word:
        a, b, c = triangle
        letters = []
        for (u, v) in ((a, b), (b, c), (c, a)):
            l = self._letter(u, v)
            if l is not None:
                letters.append(l)
        return tuple(letters)

    def tree_path(self, v: int) -> tuple[int, ...]:
        """Vertices of the unique tree path basepoint -> v."""
        path = [v]
        while path[-1] != self.basepoint:
            path.append(self.parent[path[-1]])
        return tuple(reversed(path))

    def n_generators(self) -> int:
        return len(self.generators)

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        return (isinstance(other, EdgePathPresentation)
                and self.complex == other.complex and self.basepoint == other.basepoint)


@lru_cache(maxsize=None)
def edge_path_presentation(complex: SimplicialComplex, basepoint: int) -> EdgePathPresentation:
    """Deterministic presentation of the edge-path group of a complex."""
    return EdgePathPresentation(complex, basepoint)
