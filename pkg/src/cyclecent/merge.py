"""Merge clusters: which classes a dying homology class merges into.

A class that dies merges with a surviving class when the sum of their
representatives is a boundary at the death time.  The default clustering
rule reads each pair's death image (computed by the reduction) and records a
merge exactly when that image is a single alive class, which agrees with the
boundary-space definition by construction.  The literal published loop, which
tests representative overlap (k-nearness) inside a lifetime window, is
available as ``rule="near"``; it reproduces the original plots but records
memberships the definition-level oracle rejects on most data.

Merge time of a member is its own death; members with a death equal to their
owner's are never merged (the definition requires distinct deaths) and are
logged instead.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .filtration import FilteredComplex
from .persistence import Chain, PersistencePair, precedes

logger = logging.getLogger(__name__)

_RULES = ("exact", "near")


def k_near(a: Chain, b: Chain) -> bool:
    """True when the chains share a simplex (a common nonzero sub-chain)."""
    if a.k != b.k:
        raise ValueError("chains must have the same dimension")
    return a.intersects(b)


def merges_with_oracle(a: PersistencePair, b: PersistencePair,
                       complex: FilteredComplex, eps: float) -> bool:
    """Definition-level check: is rep(a) + rep(b) a boundary at scale eps?

    Solves the linear system over GF(2) against the (k+1)-boundary columns
    with weight <= eps.  Independent of the clustering fast path; used to
    validate it.
    """
    if a.k != b.k:
        raise ValueError("pairs must have the same dimension")
    if a.birth_simplex.vertices == b.birth_simplex.vertices:
        raise ValueError("classes must be distinct")
    if a.death == b.death:
        raise ValueError("the merge definition requires distinct deaths")
    k = a.k
    rows = {s.vertices: i for i, s in enumerate(complex.simplices_of_dim(k))}
    pivots: dict[int, int] = {}
    for s in complex.simplices_of_dim(k + 1):
        if s.weight > eps:
            continue
        col = 0
        for f in s.faces():
            col ^= 1 << rows[f]
        while col:
            low = col.bit_length() - 1
            if low in pivots:
                col ^= pivots[low]
            else:
                pivots[low] = col
                break
    target = 0
    for vs in (a.representative ^ b.representative).simplices:
        target ^= 1 << rows[vs]
    while target:
        low = target.bit_length() - 1
        if low not in pivots:
            return False
        target ^= pivots[low]
    return True


@dataclass
class MergeClusters:
    """First-order merge sets: owner pair index -> ((member index, merge time), ...)."""

    k: int
    first_order: dict
    ordering: tuple              # pair indices in the (birth, death) sort used
    pairs: dict                  # pair index -> PersistencePair
    skipped_ties: tuple = field(default=())

    def members(self, sigma: int):
        if sigma not in self.pairs:
            raise KeyError(f"unknown pair index {sigma}")
        return self.first_order.get(sigma, ())


def _check_sorted(pairs) -> None:
    keys = [(p.birth, p.death) for p in pairs]
    if any(keys[i] > keys[i + 1] for i in range(len(keys) - 1)):
        raise ValueError("pairs must be sorted by ascending (birth, death)")


def first_order_clusters(pairs, rule: str = "exact") -> MergeClusters:
    """First-order merge clusters over a (birth, death)-sorted pair list.

    Zero-persistence pairs must have been excluded.  Each member lands in at
    most one cluster and satisfies d(owner) >= d(member) > b(owner); deaths
    tied with the owner are skipped and logged.
    """
    if rule not in _RULES:
        raise ValueError(f"rule must be one of {_RULES}")
    pairs = list(pairs)
    _check_sorted(pairs)
    if any(p.persistence == 0 for p in pairs):
        raise ValueError("zero-persistence pairs must be excluded")
    k = pairs[0].k if pairs else 0
    by_index = {p.index: p for p in pairs}
    first_order: dict[int, list] = {p.index: [] for p in pairs}
    ties = []

    if rule == "exact":
        for p in pairs:
            if len(p.death_image) != 1:
                continue
            owner = by_index.get(p.death_image[0])
            if owner is None:
                continue
            if owner.death == p.death:
                ties.append((p.index, owner.index))
                logger.info("skipping merge with tied deaths: %s and %s", p, owner)
                continue
            if p.death == owner.birth:
                logger.info("merge time equals owner birth, skipped: %s -> %s", p, owner)
                continue
            first_order[owner.index].append((p.index, p.death))
    else:
        absorbed: set[int] = set()
        for i in range(1, len(pairs)):
            pi = pairs[i]
            if pi.index in absorbed:
                continue
            for j in range(i - 1, -1, -1):
                pj = pairs[j]
                if not k_near(pi.representative, pj.representative):
                    continue
                if pj.death < pi.death:
                    continue
                if pi.death > pj.birth:
                    if pj.death == pi.death:
                        ties.append((pi.index, pj.index))
                        logger.info("tied deaths, never merged: %s and %s", pi, pj)
                        continue
                    first_order[pj.index].append((pi.index, pi.death))
                    absorbed.add(pi.index)
                    break
                if pi.death == pj.birth:
                    logger.info("merge time equals owner birth, skipped "
                                "(strict guard): %s and %s", pi, pj)

    ordering = tuple(p.index for p in pairs)
    fo = {owner: tuple(sorted(members)) for owner, members in first_order.items()}
    return MergeClusters(k=k, first_order=fo, ordering=ordering,
                         pairs=by_index, skipped_ties=tuple(ties))


def nth_order_cluster(clusters: MergeClusters, sigma: int, n: int,
                      eps: float) -> set:
    """M_n at threshold eps: members reachable in exactly n merge steps by eps."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if sigma not in clusters.pairs:
        raise KeyError(f"unknown pair index {sigma}")
    level = {sigma}
    for _ in range(n):
        nxt: set[int] = set()
        for tau in level:
            for member, time in clusters.first_order.get(tau, ()):
                if time <= eps:
                    nxt.add(member)
        level = nxt
        if not level:
            break
    return level


def all_order_members(clusters: MergeClusters, sigma: int, eps: float) -> dict:
    """Union over n >= 1 of M_n[sigma, eps], mapping member -> entry time.

    The entry time of a member is the largest merge time on its path to
    sigma, which is when the centrality sum first includes it.
    """
    if sigma not in clusters.pairs:
        raise KeyError(f"unknown pair index {sigma}")
    out: dict[int, float] = {}
    stack = [(sigma, 0.0)]
    while stack:
        tau, path_time = stack.pop()
        for member, time in clusters.first_order.get(tau, ()):
            if time <= eps:
                entry = max(path_time, time)
                if member not in out or entry < out[member]:
                    out[member] = entry
                    stack.append((member, entry))
    return out


def earliest_ancestor(clusters: MergeClusters, sigma: int) -> int:
    """Minimal pair under `precedes` among sigma and all orders of its members."""
    if sigma not in clusters.pairs:
        raise KeyError(f"unknown pair index {sigma}")
    root = clusters.pairs[sigma]
    best = root
    for member in all_order_members(clusters, sigma, root.death):
        cand = clusters.pairs[member]
        if precedes(cand, best):
            best = cand
    return best.index
