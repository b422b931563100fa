"""Norms and distances on centrality curves, and the stability-bound report.

Finite-p distances between collections are bottleneck-style: the compared
objects are the numbers ||J||_p^p, a matched pair costs the absolute
difference, and matching a value to the diagonal costs half the value.  The
optimum is computed exactly by binary search over the candidate cost set with
a bipartite-matching feasibility test at each candidate (never greedily).
The p = infinity distance is landscape-style: curves are ranked by maximum
value, the shorter collection is padded with zero curves, and rank-wise
inner norms of the pointwise difference are summed.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from ._validation import check_p
from .centrality import CentralityCurve, curve as build_curve, zero_curve
from .errors import UndefinedConstantsError
from .merge import MergeClusters, all_order_members

logger = logging.getLogger(__name__)


# --------------------------------------------------------------------------
# geodesic cutoff d*

def d_star(sigma: int, source, clusters: MergeClusters,
           use_geodesic: bool = True) -> float:
    """Norm cutoff of a class: min of its death and the largest geodesic
    distance between vertices of the largest cycle in its class.

    The largest cycle is the one with the most simplices among the class's
    own representative and those of its first-order members (ties by larger
    geodesic diameter); distances run over the weighted 1-skeleton restricted
    to edges no heavier than the class's death.
    """
    root = clusters.pairs[sigma]
    if not use_geodesic:
        return root.death
    candidates = [root.representative]
    candidates += [clusters.pairs[m].representative
                   for m, _ in clusters.members(sigma)]
    best_len = max(len(c) for c in candidates)
    tied = [c for c in candidates if len(c) == best_len]

    ei, ej, ew = source.edge_arrays()
    keep = ew <= root.death
    n = source.vertex_count
    graph = csr_matrix((ew[keep], (ei[keep], ej[keep])), shape=(n, n))

    def diameter(chain) -> float:
        verts = sorted({v for s in chain.simplices for v in s})
        dm = dijkstra(graph, directed=False, indices=verts)
        sub = dm[:, verts]
        if not np.isfinite(sub).all():
            raise RuntimeError("cycle vertices disconnected below the death scale")
        return float(sub.max())

    G = max(diameter(c) for c in tied)
    return min(root.death, G)


# --------------------------------------------------------------------------
# p-norms

def p_norm(curve: CentralityCurve, p, cutoff: float) -> float:
    """Closed-form p-norm of a curve over [0, cutoff] (sup value at p = inf)."""
    p = check_p(p)
    if cutoff < 0:
        raise ValueError("cutoff must be nonnegative")
    if math.isinf(p):
        return curve.evaluate(cutoff)
    total = 0.0
    for x0, x1, y0, slope in curve.segments(0.0, cutoff):
        if x1 == x0:
            continue
        if slope == 0.0:
            total += (y0 ** p) * (x1 - x0)
        else:
            y1 = y0 + slope * (x1 - x0)
            total += (y1 ** (p + 1) - y0 ** (p + 1)) / (slope * (p + 1))
    return total ** (1.0 / p)


# --------------------------------------------------------------------------
# collections

@dataclass
class CentralityCollection:
    """Curves of one filtration with their cutoffs and cached p-norms."""

    curves: list
    cutoffs: list
    p: float
    norms: list
    pairs: list = field(default_factory=list)
    clusters: MergeClusters | None = None

    def __len__(self):
        return len(self.curves)

    @property
    def powered_norms(self):
        if math.isinf(self.p):
            return list(self.norms)
        return [v ** self.p for v in self.norms]


def centrality_collection(source, pairs, clusters: MergeClusters,
                          order: int = 3, scaling: str = "unit", p=2,
                          use_geodesic: bool = True) -> CentralityCollection:
    """Build the centrality-function collection of one filtration."""
    p = check_p(p)
    curves, cutoffs, norms = [], [], []
    for pr in pairs:
        c = build_curve(pr.index, clusters, order, scaling)
        cut = d_star(pr.index, source, clusters, use_geodesic)
        curves.append(c)
        cutoffs.append(cut)
        norms.append(p_norm(c, p, cut))
    return CentralityCollection(curves=curves, cutoffs=cutoffs, p=p,
                                norms=norms, pairs=list(pairs), clusters=clusters)


# --------------------------------------------------------------------------
# exact bottleneck machinery

def _perfect_matching_exists(n_left, n_right, adj) -> bool:
    """Kuhn's augmenting-path test for a perfect matching (left-saturating)."""
    match_right = [-1] * n_right

    def try_augment(u, seen):
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                if match_right[v] == -1 or try_augment(match_right[v], seen):
                    match_right[v] = u
                    return True
        return False

    for u in range(n_left):
        if not try_augment(u, [False] * n_right):
            return False
    return True


def _bottleneck(costs: np.ndarray, diag_a: np.ndarray, diag_b: np.ndarray):
    """Exact bottleneck with diagonal: min over bijections of the max cost.

    `costs[i, j]` is the real-real cost, `diag_*` the cost of sending a point
    to the diagonal.  Returns (value, matching) where matching lists
    ("pair", i, j) and ("diagonal", side, index) entries.
    """
    m, n = costs.shape
    if m == 0 and n == 0:
        return 0.0, []
    cand = {0.0}
    cand.update(float(c) for c in costs.ravel())
    cand.update(float(c) for c in diag_a)
    cand.update(float(c) for c in diag_b)
    cand = sorted(cand)

    size = m + n  # left: A reals then B-copies; right: B reals then A-copies

    def adjacency(c):
        adj = [[] for _ in range(size)]
        for i in range(m):
            row = adj[i]
            for j in range(n):
                if costs[i, j] <= c:
                    row.append(j)
            if diag_a[i] <= c:
                row.extend(range(n, n + m))
        for jc in range(n):
            row = adj[m + jc]
            if diag_b[jc] <= c:
                row.append(jc)
            row.extend(range(n, n + m))
        return adj

    def feasible(c):
        return _perfect_matching_exists(size, size, adjacency(c))

    lo, hi = 0, len(cand) - 1
    if not feasible(cand[hi]):
        raise RuntimeError("no feasible matching at the maximal candidate cost")
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(cand[mid]):
            hi = mid
        else:
            lo = mid + 1
    value = cand[lo]

    # recover one optimal matching
    adj = adjacency(value)
    match_right = [-1] * size

    def try_augment(u, seen):
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                if match_right[v] == -1 or try_augment(match_right[v], seen):
                    match_right[v] = u
                    return True
        return False

    for u in range(size):
        try_augment(u, [False] * size)
    matching = []
    for v, u in enumerate(match_right):
        if u < m and v < n:
            matching.append(("pair", u, v))
        elif u < m:
            matching.append(("diagonal", "a", u))
        elif v < n:
            matching.append(("diagonal", "b", v))
    return float(value), matching


@dataclass
class DistanceResult:
    value: float
    matching: list
    p: float = math.nan

    def to_dict(self):
        return {"p": self.p, "value": self.value,
                "matching": [list(m) for m in self.matching]}


def centrality_distance(A: CentralityCollection, B: CentralityCollection) -> DistanceResult:
    """Finite-p centrality distance between two collections (exact)."""
    if math.isinf(A.p) or math.isinf(B.p):
        raise ValueError("use centrality_distance_inf for p = inf collections")
    if A.p != B.p:
        raise ValueError("collections must carry the same p")
    da = np.array(A.powered_norms, dtype=float)
    db = np.array(B.powered_norms, dtype=float)
    costs = np.abs(da[:, None] - db[None, :]) if len(da) and len(db) \
        else np.zeros((len(da), len(db)))
    value, matching = _bottleneck(costs, da / 2.0, db / 2.0)
    return DistanceResult(value=value, matching=matching, p=A.p)


def _sup_difference(f: CentralityCurve, g: CentralityCurve, end: float) -> float:
    xs = {0.0, end}
    xs.update(t for t in f.knots() if t <= end)
    xs.update(t for t in g.knots() if t <= end)
    best = 0.0
    for x in xs:
        best = max(best,
                   abs(f.evaluate(x) - g.evaluate(x)),
                   abs(f.evaluate_left(x) - g.evaluate_left(x)))
    return best


def _integral_difference(f: CentralityCurve, g: CentralityCurve,
                         end: float, p: float) -> float:
    """Exact integral of |f - g|^p over [0, end] by piecewise-linear pieces."""
    if end == 0.0:
        return 0.0
    cuts = {0.0, end}
    cuts.update(t for t in f.knots() if 0.0 < t < end)
    cuts.update(t for t in g.knots() if 0.0 < t < end)
    cuts = sorted(cuts)
    total = 0.0
    for x0, x1 in zip(cuts, cuts[1:]):
        h0 = f.evaluate(x0) - g.evaluate(x0)
        h1 = f.evaluate_left(x1) - g.evaluate_left(x1)
        width = x1 - x0
        if width == 0.0:
            continue
        slope = (h1 - h0) / width
        pieces = [(x0, x1, h0, h1)]
        if h0 * h1 < 0:            # sign change: split at the root
            r = x0 - h0 / slope
            pieces = [(x0, r, h0, 0.0), (r, x1, 0.0, h1)]
        for a, b, ya, yb in pieces:
            if b == a:
                continue
            ya, yb = abs(ya), abs(yb)
            s = (yb - ya) / (b - a)
            if s == 0.0:
                total += (ya ** p) * (b - a)
            else:
                total += (yb ** (p + 1) - ya ** (p + 1)) / (s * (p + 1))
    return total


def centrality_distance_inf(A: CentralityCollection, B: CentralityCollection,
                            inner_p=math.inf) -> float:
    """Landscape-style distance: rank curves by max value, pad with zero
    curves, sum the rank-wise inner norms of the differences."""
    inner_p = check_p(inner_p)
    fa = sorted(A.curves, key=lambda c: -c.max_value())
    fb = sorted(B.curves, key=lambda c: -c.max_value())
    while len(fa) < len(fb):
        fa.append(zero_curve())
    while len(fb) < len(fa):
        fb.append(zero_curve())
    total = 0.0
    for f, g in zip(fa, fb):
        end = max(f.support_end(), g.support_end())
        if math.isinf(inner_p):
            total += _sup_difference(f, g, end)
        else:
            total += _integral_difference(f, g, end, inner_p) ** (1.0 / inner_p)
    return total


# --------------------------------------------------------------------------
# constants and bounds

@dataclass(frozen=True)
class StabilityConstants:
    K: float
    q: int
    qprime: int


def constants(A: CentralityCollection, B: CentralityCollection) -> StabilityConstants:
    """K (max persistence), q (max collection size), q' (max successive merging)."""
    if not A.pairs and not B.pairs:
        raise UndefinedConstantsError("both collections are empty")
    K = max(p.persistence for p in [*A.pairs, *B.pairs])
    q = max(len(A.pairs), len(B.pairs))
    qprime = 0
    for coll in (A, B):
        if coll.clusters is None:
            continue
        for pr in coll.pairs:
            if pr.persistence <= 0:
                continue
            members = all_order_members(coll.clusters, pr.index, pr.death)
            qprime = max(qprime, len(members))
    if qprime == 0:
        logger.warning("no nonempty first-order merge cluster: q' = 0 "
                       "(standing assumption violated; merge bounds inapplicable)")
    return StabilityConstants(K=float(K), q=int(q), qprime=int(qprime))


def bound_R(p, K: float, q: float) -> float:
    p = check_p(p)
    if math.isinf(p):
        return 2.0 * q * (1.0 + q)
    return 2.0 ** (1.0 / p) * K * (1.0 + q)


def bound_Rprime(p, K: float, qprime: float) -> float:
    return bound_R(p, K, qprime)


# --------------------------------------------------------------------------
# diagram bottleneck

def bottleneck_distance(D, Dprime) -> float:
    """Exact bottleneck distance between diagrams (L-inf ground metric,
    diagonal projections at half persistence)."""
    D = np.asarray(D, dtype=float).reshape(-1, 2)
    Dp = np.asarray(Dprime, dtype=float).reshape(-1, 2)
    if len(D) and len(Dp):
        costs = np.maximum(np.abs(D[:, 0, None] - Dp[None, :, 0]),
                           np.abs(D[:, 1, None] - Dp[None, :, 1]))
    else:
        costs = np.zeros((len(D), len(Dp)))
    diag_a = (D[:, 1] - D[:, 0]) / 2.0 if len(D) else np.zeros(0)
    diag_b = (Dp[:, 1] - Dp[:, 0]) / 2.0 if len(Dp) else np.zeros(0)
    value, _ = _bottleneck(costs, diag_a, diag_b)
    return value


# --------------------------------------------------------------------------
# bound verification report

@dataclass(frozen=True)
class BoundCheck:
    name: str
    lhs: float
    rhs: float
    holds: bool


def write_bound_report(path, checks) -> None:
    """Tab-separated bound report: inequality, lhs, rhs, pass."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("inequality\tlhs\trhs\tpass\n")
        for c in checks:
            fh.write(f"{c.name}\t{c.lhs!r}\t{c.rhs!r}\t{int(c.holds)}\n")


def verify_bounds(A: CentralityCollection, B: CentralityCollection,
                  diagram_a, diagram_b, weight_diff: float | None = None) -> list:
    """Evaluate every applicable stability inequality and report both sides.

    `weight_diff` is the sup-norm discrepancy of the two filtration weight
    functions over the shared complex (max edge-weight difference); the
    weight-based bounds are omitted when it is not supplied.  The merge-aware
    bounds (with q') are omitted when no merge cluster is nonempty, since the
    theory assumes one exists.
    """
    p = A.p
    cs = constants(A, B)
    K, q, qp = cs.K, cs.q, cs.qprime
    if math.isinf(p):
        C = centrality_distance_inf(A, B)
    else:
        C = centrality_distance(A, B).value
    dB = bottleneck_distance(diagram_a, diagram_b)

    checks = []

    def add(name, rhs):
        checks.append(BoundCheck(name=name, lhs=C, rhs=float(rhs), holds=C <= rhs + 1e-12))

    if math.isinf(p):
        add("absolute", K * q * (1.0 + q))
        add("bottleneck", bound_R(p, K, q) * dB)
        if weight_diff is not None:
            add("weight", bound_R(p, K, q) * weight_diff)
        if qp >= 1:
            add("bottleneck_merge", bound_Rprime(p, K, qp) * dB)
            if weight_diff is not None:
                add("weight_merge_linear", bound_Rprime(p, K, qp) * weight_diff)
    else:
        add("absolute", K ** (1.0 + 1.0 / p) * (1.0 + q))
        add("bottleneck", bound_R(p, K, q) * dB ** (1.0 / p))
        if weight_diff is not None:
            add("weight", bound_R(p, K, q) * weight_diff ** (1.0 / p))
        if qp >= 1:
            add("bottleneck_merge", bound_Rprime(p, K, qp) * dB ** (1.0 / p))
            if qp > 1.0 / (2.0 ** (1.0 / p) * K) - 1.0 and weight_diff is not None:
                add("weight_merge_linear", bound_Rprime(p, K, qp) * weight_diff)
    return checks
