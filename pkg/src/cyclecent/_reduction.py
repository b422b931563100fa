"""Fast reduction engine for Rips persistence in dimensions 0 and 1.

Produces output bit-identical to the standard left-to-right column reduction
of the boundary matrices in (weight, dim, lex) order, via three standard
devices whose results coincide with it exactly (pairing uniqueness):

* dimension 0 by union-find with min-root union (the elder rule with the
  vertex order as age);
* dimension-1 deaths by reducing the anti-transposed triangle boundary
  (coboundary columns in reverse filtration order) with the apparent-pairs
  shortcut and negative edges cleared;
* dimension-1 representatives and accumulated-column logs by an exact lazy
  simulation of the standard algorithm's pivot chase on the edge matrix.

The coboundary reduction also retains its accumulated-column logs, which are
representative cocycles; pairing them against cycle representatives is
unitriangular in birth order and yields each dying class's image in the basis
of currently-alive classes (used for exact merge detection).

Triangles never get materialised globally: a triangle is a packed integer
order key whose natural order realises the (weight, dim, lex) filtration
order (see the dim-1 engine section).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

import numpy as np

from ._validation import check_distance_matrix


def _union_find_pairs(ei, ej, n):
    """Kruskal pass: dim-0 deaths and the positive (cycle-creating) edges.

    Returns (pos_mask, killed_root per negative edge, survivor root per
    negative edge) with roots following the min-root elder rule, which
    reproduces the standard reduction's dim-0 pairing exactly.
    """
    parent = np.arange(n)

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return int(a)

    E = len(ei)
    positive = np.zeros(E, dtype=bool)
    killed = np.full(E, -1, dtype=np.int64)
    survivor = np.full(E, -1, dtype=np.int64)
    for k in range(E):
        ra, rb = find(int(ei[k])), find(int(ej[k]))
        if ra == rb:
            positive[k] = True
        else:
            hi, lo = (ra, rb) if ra > rb else (rb, ra)
            parent[hi] = lo
            killed[k] = hi
            survivor[k] = lo
    return positive, killed, survivor


@dataclass
class RipsData:
    """Reduction byproducts for one distance matrix (dims 0 and 1)."""

    dist: np.ndarray
    max_scale: float
    n: int
    edge_i: np.ndarray          # filtration order
    edge_j: np.ndarray
    edge_w: np.ndarray
    positive: np.ndarray        # bool mask over edges
    killed_vertex: np.ndarray   # per negative edge, the dying root
    survivor_vertex: np.ndarray
    _W: np.ndarray = field(repr=False, default=None)
    _dim1_done: bool = field(default=False, repr=False)
    _deaths: dict = field(default_factory=dict, repr=False)   # edge pos -> packed triangle
    _cocycles: dict = field(default_factory=dict, repr=False)  # edge pos -> frozenset of edge pos
    _pivots: dict | None = field(default=None, repr=False)    # vertex -> (endpoint, edge pos)
    _reps: dict = field(default_factory=dict, repr=False)     # pivot vertex -> log bitmask
    _uw: np.ndarray = field(default=None, repr=False)         # sorted distinct edge weights

    @classmethod
    def build(cls, dist, max_scale: float | None = None) -> "RipsData":
        D = check_distance_matrix(dist)
        n = D.shape[0]
        W = D / 2.0
        if max_scale is None:
            max_scale = float(W.max()) if n > 1 else 0.0
        max_scale = float(max_scale)
        iu, ju = np.triu_indices(n, 1)
        ew = W[iu, ju]
        keep = ew <= max_scale
        iu, ju, ew = iu[keep], ju[keep], ew[keep]
        order = np.lexsort((ju, iu, ew))
        ei, ej, eww = iu[order].astype(np.int64), ju[order].astype(np.int64), ew[order]
        positive, killed, survivor = _union_find_pairs(ei, ej, n)
        return cls(dist=D, max_scale=max_scale, n=n, edge_i=ei, edge_j=ej,
                   edge_w=eww, positive=positive, killed_vertex=killed,
                   survivor_vertex=survivor, _W=W)

    # -- shared skeleton access (duck-typed with FilteredComplex) --------

    def edge_arrays(self):
        return self.edge_i, self.edge_j, self.edge_w

    @property
    def vertex_count(self) -> int:
        return self.n

    # -- dim-1 engine ----------------------------------------------------
    #
    # Triangles are packed into int64 keys ((rank(w) * n + x) * n + y) * n + z
    # whose integer order realises the exact (weight, lex) filtration order;
    # ranks index the sorted distinct edge weights (a triangle weight is
    # always an edge weight).  Packing overflows int64 around n ~ 6000,
    # far beyond what a dense Rips pipeline can process anyway.

    def _weight_ranks(self):
        if self._uw is None:
            if self.n > 6000:
                raise ValueError("point cloud too large for packed triangle keys")
            self._uw = np.unique(self.edge_w)
            self._WR = np.searchsorted(self._uw, self._W)
            self._rank_cap = int(np.searchsorted(self._uw, self.max_scale,
                                                 side="right")) - 1
        return self._uw

    def _unpack(self, key: int):
        n = self.n
        key = int(key)
        z = key % n
        key //= n
        y = key % n
        key //= n
        x = key % n
        r = key // n
        return (float(self._uw[r]), int(x), int(y), int(z))

    def _cofacet_column(self, a: int, b: int) -> list:
        """All cofacet keys of edge (a, b) under max_scale (packed ints)."""
        n = self.n
        self._weight_ranks()
        WR = self._WR
        ranks = np.maximum(WR[a, b], np.maximum(WR[a], WR[b]))
        mask = ranks <= self._rank_cap
        mask[a] = False
        mask[b] = False
        vs = np.flatnonzero(mask)
        ranks = ranks[vs]
        lo = np.minimum(np.minimum(a, b), vs)
        hi = np.maximum(np.maximum(a, b), vs)
        mid = (a + b) + vs - lo - hi
        keys = ((ranks * n + lo) * n + mid) * n + hi
        return keys.tolist()

    def _reduce_dim1(self) -> None:
        """Coboundary reduction over positive edges in reverse filtration order."""
        if self._dim1_done:
            return
        W = self._W
        pivot: dict[int, tuple] = {}  # packed triangle -> (a, b, column|None, cocycle)
        deaths = self._deaths
        cocycles = self._cocycles
        n = self.n
        self._weight_ranks()
        pos_positions = np.flatnonzero(self.positive)[::-1]
        chunk = 1024
        for lo_ in range(0, len(pos_positions), chunk):
            ks = pos_positions[lo_:lo_ + chunk]
            ai, bi = self.edge_i[ks], self.edge_j[ks]
            ws = self.edge_w[ks]
            rab = self._WR[ai, bi]
            # vectorised hunt for the lex-minimal zero-persistence cofacet
            m1 = np.maximum(W[ai], W[bi])
            rows = np.arange(len(ks))
            m1[rows, ai] = np.inf
            m1[rows, bi] = np.inf
            hit = m1 <= ws[:, None]
            has_zp = hit.any(axis=1)
            vmin = hit.argmax(axis=1)
            # vectorised strict facet-maximality of (a, b) in the candidate
            wav = W[ai, vmin]
            wbv = W[bi, vmin]
            fa_lo, fa_hi = np.minimum(ai, vmin), np.maximum(ai, vmin)
            fb_lo, fb_hi = np.minimum(bi, vmin), np.maximum(bi, vmin)
            fa_ok = (wav < ws) | ((wav == ws) & ((fa_lo < ai) |
                                                 ((fa_lo == ai) & (fa_hi < bi))))
            fb_ok = (wbv < ws) | ((wbv == ws) & ((fb_lo < ai) |
                                                 ((fb_lo == ai) & (fb_hi < bi))))
            apparent = has_zp & fa_ok & fb_ok
            lo3 = np.minimum(np.minimum(ai, bi), vmin)
            hi3 = np.maximum(np.maximum(ai, bi), vmin)
            mid3 = ai + bi + vmin - lo3 - hi3
            tkeys = ((rab * n + lo3) * n + mid3) * n + hi3
            for r in range(len(ks)):
                k = int(ks[r])
                if apparent[r]:
                    t = int(tkeys[r])
                    if t not in pivot:
                        pivot[t] = (int(ai[r]), int(bi[r]), None, frozenset((k,)))
                        deaths[k] = t
                        cocycles[k] = frozenset((k,))
                        continue
                self._cascade(k, int(ai[r]), int(bi[r]), pivot)
        self._dim1_done = True

    def _cascade(self, k: int, a: int, b: int, pivot: dict) -> None:
        """General reduction of one coboundary column (heap with parity dedup)."""
        deaths = self._deaths
        cocycles = self._cocycles
        heap = self._cofacet_column(a, b)
        heapq.heapify(heap)
        acc = {k}
        while True:
            low = None
            while heap:
                t = heapq.heappop(heap)
                parity = 1
                while heap and heap[0] == t:
                    heapq.heappop(heap)
                    parity ^= 1
                if parity:
                    low = t
                    break
            if low is None:
                cocycles[k] = frozenset(acc)  # essential cocycle
                break
            p = pivot.get(low)
            if p is None:
                if heap:
                    arr = np.array(heap, dtype=np.int64)
                    uniq, counts = np.unique(arr, return_counts=True)
                    column = uniq[counts % 2 == 1].tolist()
                else:
                    column = []
                column.append(low)
                pivot[low] = (a, b, column, frozenset(acc))
                deaths[k] = low
                cocycles[k] = frozenset(acc)
                break
            if p[2] is None:
                p = (p[0], p[1], self._cofacet_column(p[0], p[1]), p[3])
                pivot[low] = p
            for t in p[2]:
                if t != low:
                    heapq.heappush(heap, t)
            acc ^= set(p[3])

    def _pivot_forest(self) -> None:
        """First pass of the edge-matrix reduction, without column logs.

        Claims, per vertex, the reduced pivot column (other endpoint +
        claiming edge).  Pivots never change afterwards, so a later re-chase
        of any edge replays its original reduction exactly; representatives
        are reconstructed lazily that way in `dim1_rep`.
        """
        if self._pivots is not None:
            return
        pivots: dict[int, tuple[int, int]] = {}  # vertex -> (other endpoint, edge)
        for k in range(len(self.edge_w)):
            u, v = int(self.edge_i[k]), int(self.edge_j[k])
            while u != v:
                lo, hi = (u, v) if u < v else (v, u)
                p = pivots.get(hi)
                if p is None:
                    pivots[hi] = (lo, k)
                    break
                u, v = lo, p[0]
        self._pivots = pivots

    def _trail(self, k: int) -> list[int]:
        """Pivot vertices hit while reducing edge column k (exact replay)."""
        pivots = self._pivots
        u, v = int(self.edge_i[k]), int(self.edge_j[k])
        out = []
        while u != v:
            lo, hi = (u, v) if u < v else (v, u)
            p = pivots[hi]
            if p[1] == k:        # this edge claimed the pivot here: done
                break
            out.append(hi)
            u, v = lo, p[0]
        return out

    def _pivot_log(self, h: int) -> int:
        """Accumulated-column bitmask of the pivot claimed at vertex h."""
        memo = self._reps
        stack = [h]
        while stack:
            top = stack[-1]
            if top in memo:
                stack.pop()
                continue
            edge = self._pivots[top][1]
            deps = [d for d in self._trail(edge) if d not in memo]
            if deps:
                stack.extend(deps)
                continue
            V = 1 << edge
            for d in self._trail(edge):
                V ^= memo[d]
            memo[top] = V
            stack.pop()
        return memo[h]

    # -- public accessors -------------------------------------------------

    def dim1_death(self, k: int):
        """(weight, x, y, z) of the triangle killing the class born at edge
        position k, or None when the class is essential."""
        self._reduce_dim1()
        key = self._deaths.get(k)
        return None if key is None else self._unpack(key)

    def dim1_death_weight(self, k: int):
        """Death weight only (cheaper than the full unpack), or None."""
        self._reduce_dim1()
        key = self._deaths.get(k)
        return None if key is None else float(self._uw[key // self.n ** 3])

    def dim1_rep(self, k: int) -> frozenset:
        """Representative cycle of the class born at edge position k (edge positions)."""
        if not self.positive[k]:
            raise ValueError(f"edge position {k} does not create a cycle")
        self._pivot_forest()
        mask = 1 << k
        for h in self._trail(k):
            mask ^= self._pivot_log(h)
        out = []
        while mask:
            out.append((mask & -mask).bit_length() - 1)
            mask &= mask - 1
        return frozenset(out)

    def positive_positions(self):
        self._reduce_dim1()
        return [int(k) for k in np.flatnonzero(self.positive)]

    def dim1_images(self, include_zero_persistence: bool = False):
        """Death image of dim-1 classes, in the alive-class basis.

        Returns {edge pos: frozenset of edge pos of alive classes}; essential
        classes are absent.  "Alive at t" means birth <= t < death by weight
        value, so images resolve through all simultaneous deaths.  Only
        positive-persistence classes can be alive at another class's death;
        images OF zero-persistence classes are well-defined but only computed
        on request (decoding every representative is the dominant cost).
        """
        self._reduce_dim1()
        pos = self.positive_positions()
        births = {k: float(self.edge_w[k]) for k in pos}
        deaths = {k: (float(self._uw[self._deaths[k] // self.n ** 3])
                      if k in self._deaths else None)
                  for k in pos}
        pp = [k for k in pos if deaths[k] is None or deaths[k] > births[k]]
        wanted = pos if include_zero_persistence else pp
        reps = {k: self.dim1_rep(k) for k in wanted}
        coc = self._cocycles

        def charge(target: frozenset, m: int) -> int:
            return len(target & coc[m]) & 1

        images: dict[int, frozenset] = {}
        for k in wanted:
            t = deaths[k]
            if t is None:
                continue
            # alive classes in ascending edge position = birth order
            alive = [m for m in pp
                     if births[m] <= t and (deaths[m] is None or deaths[m] > t)]
            chi = [charge(reps[k], m) for m in alive]
            coeff = [0] * len(alive)
            # pairing matrix is unitriangular: <cocycle_i, rep_j> = 0 for i > j
            for i in range(len(alive) - 1, -1, -1):
                s = chi[i]
                for j in range(i + 1, len(alive)):
                    if coeff[j] and charge(reps[alive[j]], alive[i]):
                        s ^= 1
                coeff[i] = s
            images[k] = frozenset(alive[i] for i in range(len(alive)) if coeff[i])
        return images

    def dim0_images(self):
        """Death image of every dim-0 class (vertex -> alive vertex-class)."""
        raw = {}
        deaths = {}
        E = len(self.edge_w)
        for k in range(E):
            hi = int(self.killed_vertex[k])
            if hi >= 0:
                raw[hi] = int(self.survivor_vertex[k])
                deaths[hi] = float(self.edge_w[k])

        def resolve(v: int, t: float) -> frozenset:
            while v in deaths and deaths[v] <= t:
                v = raw[v]
            return frozenset((v,))

        return {v: resolve(raw[v], deaths[v]) for v in raw}
