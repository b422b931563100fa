"""Vietoris-Rips filtrations as explicit face-closed, ordered simplex lists.

Weights are in epsilon units: a vertex enters at 0, the edge {i, j} at
d(i, j) / 2 (so it is present exactly when d <= 2 * eps), and a higher simplex
at the maximum of its edge weights.  The global order is (weight, dim, lex),
which places every face strictly before its cofaces and fixes the column
order of all boundary matrices downstream.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from ._validation import check_distance_matrix


@dataclass(frozen=True, order=False)
class Simplex:
    vertices: tuple[int, ...]
    weight: float

    def __post_init__(self):
        vs = tuple(int(v) for v in self.vertices)
        if any(vs[i] >= vs[i + 1] for i in range(len(vs) - 1)):
            raise ValueError(f"vertices must be strictly increasing, got {vs}")
        if self.weight < 0:
            raise ValueError("weight must be nonnegative")
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "weight", float(self.weight))

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    @property
    def key(self) -> tuple:
        """Sort key realising the (weight, dim, lex) filtration order."""
        return (self.weight, self.dim, self.vertices)

    def faces(self):
        """Codimension-1 faces as vertex tuples (empty for vertices)."""
        if self.dim == 0:
            return
        for i in range(len(self.vertices)):
            yield self.vertices[:i] + self.vertices[i + 1:]


class FilteredComplex:
    """A filtration-ordered, face-closed list of weighted simplices."""

    def __init__(self, simplices: list[Simplex], max_dim: int, max_scale: float):
        self.simplices = simplices
        self.max_dim = int(max_dim)
        self.max_scale = float(max_scale)
        self._index = {s.vertices: i for i, s in enumerate(simplices)}
        self._by_dim: dict[int, list[Simplex]] = {}
        for s in simplices:
            self._by_dim.setdefault(s.dim, []).append(s)

    @classmethod
    def from_simplices(cls, items, max_scale: float | None = None) -> "FilteredComplex":
        """Build and validate a complex from (vertices, weight) pairs.

        Adds nothing: the input must already be face-closed with monotone
        weights; this is the constructor test fixtures use.
        """
        simplices = sorted((Simplex(tuple(v), w) for v, w in items), key=lambda s: s.key)
        index = {s.vertices: s.weight for s in simplices}
        if len(index) != len(simplices):
            raise ValueError("duplicate simplices")
        for s in simplices:
            for f in s.faces():
                if f not in index:
                    raise ValueError(f"missing face {f} of {s.vertices}")
                if index[f] > s.weight:
                    raise ValueError(f"face {f} heavier than coface {s.vertices}")
        max_dim = max((s.dim for s in simplices), default=0)
        if max_scale is None:
            max_scale = max((s.weight for s in simplices), default=0.0)
        return cls(simplices, max_dim, max_scale)

    def __len__(self) -> int:
        return len(self.simplices)

    def __iter__(self):
        return iter(self.simplices)

    def __contains__(self, simplex) -> bool:
        vs = simplex.vertices if isinstance(simplex, Simplex) else tuple(simplex)
        return vs in self._index

    def index(self, simplex) -> int:
        vs = simplex.vertices if isinstance(simplex, Simplex) else tuple(simplex)
        try:
            return self._index[vs]
        except KeyError:
            raise KeyError(f"simplex {vs} not in complex") from None

    def weight(self, vertices) -> float:
        return self.simplices[self.index(vertices)].weight

    def simplices_of_dim(self, k: int) -> list[Simplex]:
        """k-simplices in filtration order (the row/column order of boundary matrices)."""
        return self._by_dim.get(k, [])

    @property
    def vertex_count(self) -> int:
        return len(self._by_dim.get(0, []))

    def edge_arrays(self):
        """Edges as (i, j, weight) arrays in filtration order."""
        edges = self.simplices_of_dim(1)
        i = np.fromiter((e.vertices[0] for e in edges), dtype=np.int64, count=len(edges))
        j = np.fromiter((e.vertices[1] for e in edges), dtype=np.int64, count=len(edges))
        w = np.fromiter((e.weight for e in edges), dtype=float, count=len(edges))
        return i, j, w

    def dump(self, path) -> None:
        """Debug CSV: weight,dim,v0 v1 ... vk per row."""
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for s in self.simplices:
                fh.write(f"{s.weight!r},{s.dim},{' '.join(map(str, s.vertices))}\n")


def rips_filtration(dist, max_dim: int, max_scale: float | None = None) -> FilteredComplex:
    """Vietoris-Rips filtration of a distance matrix.

    `max_scale` defaults to half the maximum pairwise distance, at which the
    complex is a cone and all positive-dimensional classes have died.
    """
    D = check_distance_matrix(dist)
    if max_dim < 1:
        raise ValueError("max_dim must be >= 1")
    n = D.shape[0]
    W = D / 2.0
    if max_scale is None:
        max_scale = float(W.max()) if n > 1 else 0.0
    max_scale = float(max_scale)
    if n > 1 and max_scale <= 0:
        raise ValueError("max_scale must be positive")

    simplices = [Simplex((v,), 0.0) for v in range(n)]
    for dim in range(1, max_dim + 1):
        for vs in combinations(range(n), dim + 1):
            w = 0.0
            for a, b in combinations(vs, 2):
                wab = W[a, b]
                if wab > w:
                    w = wab
                if w > max_scale:
                    break
            else:
                simplices.append(Simplex(vs, float(w)))
    simplices.sort(key=lambda s: s.key)
    return FilteredComplex(simplices, max_dim, max_scale)


def filtration_index(complex: FilteredComplex, simplex) -> int:
    """Position of a simplex in the global filtration order."""
    return complex.index(simplex)
