"""Shared fixtures and independent brute-force oracles.

The oracles here never call into the library's reduction/pairing code: Betti
numbers come from GF(2) ranks of fully materialised boundary matrices,
complexes from direct clique enumeration, and boundary-space membership from
a fresh Gaussian elimination.  They exist to check the library, so they stay
deliberately naive.
"""

import itertools

import numpy as np
import pytest

from cyclecent import FilteredComplex, pairwise_distances


# --------------------------------------------------------------------------
# clouds and complexes used across modules

def ring_cloud(spec):
    """Concentric circles: [(radius, count, phase), ...]."""
    pts = []
    for r, m, ph in spec:
        pts += [(r * np.cos(2 * np.pi * i / m + ph),
                 r * np.sin(2 * np.pi * i / m + ph)) for i in range(m)]
    return np.array(pts)


@pytest.fixture
def unit_square():
    return np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])


@pytest.fixture
def two_rings():
    """Inner hole genuinely merges into the outer one when the annulus fills."""
    return ring_cloud([(1.0, 8, 0.0), (1.6, 20, 0.1)])


@pytest.fixture
def three_rings():
    """Produces a depth-2 merge chain: inner -> middle -> outer."""
    return ring_cloud([(1.0, 8, 0.0), (1.7, 16, 0.05), (2.6, 28, 0.11)])


def two_squares_complex():
    """Abstract two-squares-sharing-an-edge complex with one genuine merge.

    The outer contour class is born at 0.1; the wall edge (0, 2) births a
    second class at 0.2 whose representative is the 0-1-2 triangle contour.
    A fan filling the 0-2-3 square at weight 1.0 merges the wall class into
    the outer class; everything is coned off by weight 2.0.
    """
    items = [((v,), 0.0) for v in range(4)]
    items += [((0, 1), 0.1), ((0, 3), 0.1), ((1, 2), 0.1), ((2, 3), 0.1),
              ((0, 2), 0.2), ((1, 3), 2.0)]
    items += [((0, 2, 3), 1.0),
              ((0, 1, 2), 2.0), ((0, 1, 3), 2.0), ((1, 2, 3), 2.0)]
    return FilteredComplex.from_simplices(items, max_scale=2.0)


@pytest.fixture
def two_squares():
    return two_squares_complex()


def random_cloud(seed, n_lo=5, n_hi=12, dim=2, grid=False):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(n_lo, n_hi + 1))
    if grid:
        return rng.integers(0, 4, size=(n, dim)).astype(float)
    return rng.random((n, dim))


# --------------------------------------------------------------------------
# independent oracles

def gf2_rank(columns):
    """Rank over GF(2) of integer-bitmask columns."""
    pivots = {}
    rank = 0
    for col in columns:
        while col:
            low = col.bit_length() - 1
            if low in pivots:
                col ^= pivots[low]
            else:
                pivots[low] = col
                rank += 1
                break
    return rank


def brute_force_simplices(D, eps, max_dim):
    """All simplices of the Rips complex at threshold eps (d <= 2*eps)."""
    n = D.shape[0]
    out = {0: [(v,) for v in range(n)]}
    for k in range(1, max_dim + 1):
        simps = []
        for vs in itertools.combinations(range(n), k + 1):
            if all(D[a, b] <= 2 * eps + 1e-12 for a, b in itertools.combinations(vs, 2)):
                simps.append(vs)
        out[k] = simps
    return out


def brute_force_betti(D, eps, k, max_dim):
    """Betti number at threshold eps from boundary-matrix ranks."""
    simp = brute_force_simplices(D, eps, max_dim)
    rows = {vs: i for i, vs in enumerate(simp.get(k - 1, []))}

    def columns(dim):
        cols = []
        for vs in simp.get(dim, []):
            col = 0
            idx = {f: i for i, f in enumerate(simp.get(dim - 1, []))}
            for drop in range(len(vs)):
                face = vs[:drop] + vs[drop + 1:]
                col ^= 1 << idx[face]
            cols.append(col)
        return cols

    n_k = len(simp.get(k, []))
    rank_k = gf2_rank(columns(k)) if k >= 1 else 0
    rank_k1 = gf2_rank(columns(k + 1)) if k + 1 <= max_dim else 0
    return n_k - rank_k - rank_k1


def betti_from_pairs(pairs, eps):
    """Alive-class count at eps (essential classes never die)."""
    return sum(1 for p in pairs
               if p.birth <= eps and (p.essential or p.death > eps))


def boundary_span_member(complex, k, chain_simplices, eps):
    """Fresh GF(2) solve: is the chain in the (k+1)-boundary space at eps?"""
    rows = {s.vertices: i for i, s in enumerate(complex.simplices_of_dim(k))}
    pivots = {}
    for s in complex.simplices_of_dim(k + 1):
        if s.weight > eps:
            continue
        col = 0
        for drop in range(len(s.vertices)):
            face = s.vertices[:drop] + s.vertices[drop + 1:]
            col ^= 1 << rows[face]
        while col:
            low = col.bit_length() - 1
            if low in pivots:
                col ^= pivots[low]
            else:
                pivots[low] = col
                break
    target = 0
    for vs in chain_simplices:
        target ^= 1 << rows[tuple(vs)]
    while target:
        low = target.bit_length() - 1
        if low not in pivots:
            return False
        target ^= pivots[low]
    return True


def sorted_positive(pairs):
    """Positive-persistence pairs in the (birth, death) order Alg. 2 wants."""
    pos = [p for p in pairs if p.persistence > 0]
    pos.sort(key=lambda p: (p.birth, p.death, p.birth_simplex.vertices))
    return pos
