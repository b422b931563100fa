"""Boundary matrices over GF(2), the standard reduction, persistence pairs
and explicit cycle representatives.

Two extraction paths produce identical output: `extract_pairs` runs the
literal column reduction on an explicit `FilteredComplex` (any dimension),
while `rips_pairs` uses the fast engine in `_reduction` straight from a
distance matrix (dimensions 0 and 1, which is what the experiments need).

Each pair also carries its death image: the set of classes its homology
class equals the moment it dies, resolved in the basis of still-alive
classes.  A one-element image is a genuine merge in the sense of the
boundary-space definition; the merge module builds clusters from it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._reduction import RipsData
from ._validation import check_distance_matrix
from .filtration import FilteredComplex, Simplex


@dataclass(frozen=True)
class Chain:
    """A k-chain over GF(2): membership of a simplex means coefficient 1."""

    k: int
    simplices: frozenset

    def __post_init__(self):
        object.__setattr__(self, "simplices",
                           frozenset(tuple(s) for s in self.simplices))

    def __len__(self):
        return len(self.simplices)

    def __iter__(self):
        return iter(sorted(self.simplices))

    def __bool__(self):
        return bool(self.simplices)

    def __xor__(self, other: "Chain") -> "Chain":
        if self.k != other.k and self and other:
            raise ValueError("cannot add chains of different dimensions")
        return Chain(self.k if self else other.k,
                     self.simplices ^ other.simplices)

    __add__ = __xor__

    def intersects(self, other: "Chain") -> bool:
        return bool(self.simplices & other.simplices)


def boundary(simplex) -> Chain:
    """Codimension-1 face sum of a simplex; vertices map to the empty chain."""
    vs = simplex.vertices if isinstance(simplex, Simplex) else tuple(simplex)
    k = len(vs) - 1
    if k == 0:
        return Chain(-1, frozenset())
    faces = frozenset(vs[:i] + vs[i + 1:] for i in range(len(vs)))
    return Chain(k - 1, faces)


def chain_boundary(chain: Chain) -> Chain:
    """Linear extension of the boundary operator to chains."""
    out = Chain(chain.k - 1, frozenset())
    for s in chain.simplices:
        out = out ^ boundary(s)
    return out


class BoundaryMatrix:
    """The k-th boundary matrix: one column per k-simplex in filtration order."""

    def __init__(self, k: int, rows: list[tuple], cols: list[tuple],
                 columns: list[set]):
        self.k = k
        self.rows = rows
        self.cols = cols
        self.columns = columns

    @classmethod
    def from_complex(cls, complex: FilteredComplex, k: int) -> "BoundaryMatrix":
        rows = [s.vertices for s in complex.simplices_of_dim(k - 1)]
        cols = [s.vertices for s in complex.simplices_of_dim(k)]
        row_index = {vs: i for i, vs in enumerate(rows)}
        columns = []
        for vs in cols:
            if k == 0:
                columns.append(set())
            else:
                columns.append({row_index[f] for f in boundary(vs).simplices})
        return cls(k, rows, cols, columns)


@dataclass
class ReducedBoundary:
    """Result of the standard reduction: columns, accumulated logs, pivots."""

    k: int
    columns: list[frozenset]
    logs: list[frozenset]      # per column, the set of original columns summed
    pivots: dict               # row index -> column index


def reduce(matrix: BoundaryMatrix) -> ReducedBoundary:
    """Standard left-to-right column reduction over GF(2).

    For each column the log records which original columns were accumulated
    into it; the log of a zero column is the representative source.
    """
    cols = [set(c) for c in matrix.columns]
    logs = [{j} for j in range(len(cols))]
    pivots: dict[int, int] = {}
    for j in range(len(cols)):
        col = cols[j]
        while col:
            low = max(col)
            i = pivots.get(low)
            if i is None:
                pivots[low] = j
                break
            col ^= cols[i]
            logs[j] ^= logs[i]
    return ReducedBoundary(matrix.k,
                           [frozenset(c) for c in cols],
                           [frozenset(l) for l in logs],
                           pivots)


@dataclass(frozen=True)
class PersistencePair:
    """A (birth, death) interval with its cycle representative.

    `death_image` lists the indices (within the same extraction) of the alive
    classes this class's homology class equals at the instant of death; empty
    for classes that die to zero and for essential classes.
    """

    k: int
    birth: float
    death: float
    birth_simplex: Simplex
    death_simplex: Simplex | None
    representative: Chain
    essential: bool
    index: int
    death_image: tuple

    @property
    def persistence(self) -> float:
        return self.death - self.birth

    def __repr__(self):
        tag = " essential" if self.essential else ""
        return (f"PersistencePair(k={self.k}, ({self.birth:g}, {self.death:g}),"
                f" born {self.birth_simplex.vertices}{tag})")


def precedes(a: PersistencePair, b: PersistencePair) -> bool:
    """The paper's strict order: earlier birth, ties by column position.

    Within one dimension the column position at equal birth weight is the
    lexicographic order of the birth simplices.
    """
    if a.k != b.k:
        raise ValueError("cannot compare pairs of different dimensions")
    return (a.birth, a.birth_simplex.vertices) < (b.birth, b.birth_simplex.vertices)


def representative(pair: PersistencePair) -> Chain:
    """The cycle the reduction produced for this class."""
    return pair.representative


def _finish_pairs(k, records, include_zero_persistence):
    """Assign indices in birth order and remap death images onto them."""
    records.sort(key=lambda r: (r["birth"], r["birth_simplex"].vertices))
    kept = [r for r in records
            if include_zero_persistence or r["death"] > r["birth"]]
    index_of = {r["birth_simplex"].vertices: i for i, r in enumerate(kept)}
    pairs = []
    for i, r in enumerate(kept):
        image = tuple(sorted(index_of[v] for v in r["image"]))
        pairs.append(PersistencePair(
            k=k, birth=r["birth"], death=r["death"],
            birth_simplex=r["birth_simplex"], death_simplex=r["death_simplex"],
            representative=r["representative"], essential=r["essential"],
            index=i, death_image=image))
    return pairs


def extract_pairs(complex: FilteredComplex, k: int,
                  include_zero_persistence: bool = False) -> list[PersistencePair]:
    """Persistence pairs of dimension k from the explicit reduction.

    Zero-persistence pairs (birth == death) are dropped unless requested;
    unpaired classes are clamped to the complex's max_scale and flagged
    essential.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    mk = BoundaryMatrix.from_complex(complex, k)
    rk = reduce(mk)
    if k + 1 <= complex.max_dim:
        mk1 = BoundaryMatrix.from_complex(complex, k + 1)
        rk1 = reduce(mk1)
    else:
        mk1 = BoundaryMatrix(k + 1, mk.cols, [], [])
        rk1 = ReducedBoundary(k + 1, [], [], {})

    ksimp = {vs: i for i, vs in enumerate(mk.cols)}
    weights = {s.vertices: s.weight for s in complex.simplices}

    # deaths: nonzero reduced columns of the (k+1)-matrix, killing their low row
    killer_of: dict[int, int] = {}   # k-simplex row -> (k+1)-column
    for j, col in enumerate(rk1.columns):
        if col:
            killer_of[max(col)] = j

    # births: zero columns of the k-matrix, with accumulated representatives
    born: dict[int, dict] = {}
    for j, col in enumerate(rk.columns):
        if col:
            continue
        rep_rows = frozenset(rk.logs[j])
        vs = mk.cols[j]
        kill = killer_of.get(j)
        if kill is not None:
            dvs = mk1.cols[kill]
            death, death_simplex = weights[dvs], Simplex(dvs, weights[dvs])
        else:
            death, death_simplex = complex.max_scale, None
        born[j] = dict(
            birth=weights[vs], death=death,
            birth_simplex=Simplex(vs, weights[vs]), death_simplex=death_simplex,
            representative=Chain(k, frozenset(mk.cols[i] for i in rep_rows)),
            rep_rows=rep_rows, essential=kill is None, image=())

    # death images: expand each killing column over the representative basis,
    # then resolve dead classes through to the classes alive at that weight
    raw: dict[int, frozenset] = {}
    for j in sorted(born, key=lambda j: born[j]["death_simplex"].key
                    if born[j]["death_simplex"] else (np.inf,)):
        rec = born[j]
        if rec["essential"]:
            continue
        kill = killer_of[j]
        C = set(rk1.columns[kill]) ^ set(rec["rep_rows"])
        S: set[int] = set()
        while C:
            m = max(C)
            C ^= set(born[m]["rep_rows"])
            S ^= {m}
        raw[j] = frozenset(S)

    def resolve(x: int, t: float) -> frozenset:
        rec = born[x]
        if rec["essential"] or rec["death"] > t:
            return frozenset((x,))
        out: set[int] = set()
        for y in raw[x]:
            out ^= resolve(y, t)
        return frozenset(out)

    for j, rec in born.items():
        if rec["essential"]:
            continue
        t = rec["death"]
        img: set[int] = set()
        for y in raw[j]:
            img ^= resolve(y, t)
        rec["image"] = tuple(born[m]["birth_simplex"].vertices for m in sorted(img))

    return _finish_pairs(k, list(born.values()), include_zero_persistence)


def rips_pairs(dist, k: int = 1, max_scale: float | None = None,
               include_zero_persistence: bool = False,
               data: RipsData | None = None) -> list[PersistencePair]:
    """Persistence pairs of a Rips filtration straight from a distance matrix.

    Fast path for k in {0, 1} (identical output to `extract_pairs` on the
    corresponding complex); higher dimensions need the explicit path.
    Pass `data` to reuse an existing `RipsData` for the same matrix.
    """
    if k not in (0, 1):
        raise ValueError("rips_pairs supports k in {0, 1}; use extract_pairs")
    if data is None:
        data = RipsData.build(check_distance_matrix(dist), max_scale)
    records = []
    if k == 0:
        images = data.dim0_images()
        deaths = {}
        for pos in range(len(data.edge_w)):
            v = int(data.killed_vertex[pos])
            if v >= 0:
                deaths[v] = pos
        for v in range(data.n):
            bs = Simplex((v,), 0.0)
            pos = deaths.get(v)
            if pos is not None:
                dvs = (int(data.edge_i[pos]), int(data.edge_j[pos]))
                death = float(data.edge_w[pos])
                dsimp = Simplex(dvs, death)
                image = tuple(sorted((int(m),) for m in images[v]))
            else:
                death, dsimp, image = data.max_scale, None, ()
            records.append(dict(
                birth=0.0, death=death, birth_simplex=bs, death_simplex=dsimp,
                representative=Chain(0, frozenset(((v,),))),
                essential=pos is None, image=image))
        return _finish_pairs(0, records, include_zero_persistence)

    images = data.dim1_images(include_zero_persistence)

    def edge_vs(pos):
        return (int(data.edge_i[pos]), int(data.edge_j[pos]))

    for pos in data.positive_positions():
        birth = float(data.edge_w[pos])
        dw = data.dim1_death_weight(pos)
        death = dw if dw is not None else data.max_scale
        if death == birth and not include_zero_persistence:
            continue  # dropped below anyway; skip the decoding work
        if dw is not None:
            tkey = data.dim1_death(pos)
            dsimp = Simplex(tkey[1:], death)
            image = tuple(sorted(edge_vs(m) for m in images.get(pos, ())))
        else:
            dsimp, image = None, ()
        rep = Chain(1, frozenset(edge_vs(m) for m in data.dim1_rep(pos)))
        records.append(dict(
            birth=birth, death=death,
            birth_simplex=Simplex(edge_vs(pos), birth), death_simplex=dsimp,
            representative=rep, essential=tkey is None, image=image))
    return _finish_pairs(1, records, include_zero_persistence)


def compute_pairs(X=None, dist=None, k: int = 1, max_dim: int | None = None,
                  max_scale: float | None = None,
                  include_zero_persistence: bool = False):
    """Route a persistence computation to the fast or the explicit path.

    Returns (pairs, source) where `source` exposes `edge_arrays()` for
    geodesic computations (a `RipsData` or a `FilteredComplex`).
    """
    from .filtration import rips_filtration
    from .pointcloud import pairwise_distances

    if dist is None:
        if X is None:
            raise ValueError("need a point cloud or a distance matrix")
        dist = pairwise_distances(X)
    else:
        dist = check_distance_matrix(dist)
    if max_dim is None:
        max_dim = k + 1
    if max_dim < k + 1 and k >= 1:
        raise ValueError("max_dim must be at least k + 1 for finite deaths")
    if k <= 1:
        # 2-simplices settle every dim-1 death; higher simplices cannot
        # touch dimensions 0 or 1, so the fast path is exact for any max_dim
        data = RipsData.build(dist, max_scale)
        return rips_pairs(dist, k, max_scale,
                          include_zero_persistence, data=data), data
    cx = rips_filtration(dist, max_dim, max_scale)
    return extract_pairs(cx, k, include_zero_persistence), cx


def pairs_to_diagram(pairs) -> np.ndarray:
    """Persistence diagram as an (m, 2) array of (birth, death)."""
    return np.array([[p.birth, p.death] for p in pairs], dtype=float).reshape(-1, 2)
