"""Cycle centrality curves J1, J2, J3 with unit/early/late scalings.

A curve is zero up to the class's birth, ramps with slope one until its
death, and jumps upward each time a merged class's persistence is added.
Jumps happen at merge times, so every curve is right-continuous,
nondecreasing and piecewise linear; it is represented exactly by its birth,
death and jump list rather than by sampled values.

The published naming for the third function's scaled variants is J4 = J3
with unit factors, J5 = J3 with late scaling, J6 = J3 with early scaling.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DegenerateClassError
from .merge import MergeClusters, all_order_members

SCALINGS = ("unit", "early", "late")

VARIANT_NAMES = {
    "J4": (3, "unit"),
    "J5": (3, "late"),
    "J6": (3, "early"),
}


def scaling_factor(scaling: str, member_death: float, root_death: float) -> float:
    if scaling == "unit":
        return 1.0
    if root_death <= 0:
        raise DegenerateClassError("ratio scaling needs a positive death")
    ratio = member_death / root_death
    return ratio if scaling == "early" else 1.0 - ratio


@dataclass(frozen=True)
class CentralityCurve:
    """Exact piecewise-linear centrality curve of one homology class."""

    class_index: int
    birth: float
    death: float
    jumps: tuple          # ((time, size), ...) sorted by time, sizes > 0

    def evaluate(self, eps: float) -> float:
        """Right-continuous value at eps."""
        val = max(0.0, min(eps, self.death) - self.birth)
        for t, size in self.jumps:
            if t <= eps:
                val += size
            else:
                break
        return val

    def evaluate_left(self, eps: float) -> float:
        """Left limit at eps (differs from evaluate only at jump times)."""
        val = max(0.0, min(eps, self.death) - self.birth)
        for t, size in self.jumps:
            if t < eps:
                val += size
            else:
                break
        return val

    def max_value(self) -> float:
        """Final constant value; by monotonicity the supremum."""
        return (self.death - self.birth) + sum(s for _, s in self.jumps)

    def support_end(self) -> float:
        """Smallest eps beyond which the curve is constant."""
        end = self.death
        if self.jumps:
            end = max(end, self.jumps[-1][0])
        return end

    def knots(self):
        """All points where the slope or value can change, sorted."""
        ks = {self.birth, self.death}
        ks.update(t for t, _ in self.jumps)
        return sorted(ks)

    def breakpoints(self):
        """(eps, value-after) pairs at every knot, for serialisation."""
        return [(t, self.evaluate(t)) for t in self.knots()]

    def segments(self, lo: float, hi: float):
        """Linear pieces (x0, x1, y0, slope) covering [lo, hi] exactly."""
        if hi < lo:
            raise ValueError("empty interval")
        cuts = [lo] + [t for t in self.knots() if lo < t < hi] + [hi]
        out = []
        for x0, x1 in zip(cuts, cuts[1:]):
            slope = 1.0 if (self.birth <= x0 and x1 <= self.death) else 0.0
            out.append((x0, x1, self.evaluate(x0), slope))
        return out


def persistence_at(pair, eps: float) -> float:
    """The persistence of a class accrued by scale eps."""
    return max(0.0, min(eps, pair.death) - pair.birth)


def _build_curve(sigma: int, clusters: MergeClusters, contributions) -> CentralityCurve:
    root = clusters.pairs[sigma]
    sizes: dict[float, float] = {}
    for time, amount in contributions:
        if amount != 0.0:
            sizes[time] = sizes.get(time, 0.0) + amount
    jumps = tuple(sorted(sizes.items()))
    return CentralityCurve(class_index=sigma, birth=root.birth,
                           death=root.death, jumps=jumps)


def j1_curve(sigma: int, clusters: MergeClusters) -> CentralityCurve:
    """Persistence of the class plus persistences of directly-merged classes."""
    root = clusters.pairs[sigma]
    contribs = [(time, clusters.pairs[m].persistence)
                for m, time in clusters.members(sigma)]
    return _build_curve(sigma, clusters, contribs)


def j2_curve(sigma: int, clusters: MergeClusters, scaling: str = "unit") -> CentralityCurve:
    """J1 with each merged persistence weighted by the merge-time scaling."""
    if scaling not in SCALINGS:
        raise ValueError(f"scaling must be one of {SCALINGS}")
    root = clusters.pairs[sigma]
    contribs = []
    for m, time in clusters.members(sigma):
        member = clusters.pairs[m]
        f = scaling_factor(scaling, member.death, root.death)
        contribs.append((time, f * member.persistence))
    return _build_curve(sigma, clusters, contribs)


def j3_curve(sigma: int, clusters: MergeClusters, scaling: str = "unit",
             max_order: int | None = None) -> CentralityCurve:
    """J2 extended over all orders of merge clusters.

    Every member of every order contributes once, scaled against the root
    class's death; a depth-r member enters when its whole merge path to the
    root has happened.  `max_order` truncates the order sum (None = all).
    """
    if scaling not in SCALINGS:
        raise ValueError(f"scaling must be one of {SCALINGS}")
    root = clusters.pairs[sigma]
    entry = all_order_members(clusters, sigma, float("inf"))
    if max_order is not None:
        allowed = set()
        level = {sigma}
        for _ in range(max_order):
            nxt = {m for tau in level for m, _ in clusters.members(tau)}
            allowed |= nxt
            level = nxt
        entry = {m: t for m, t in entry.items() if m in allowed}
    contribs = []
    for m, time in entry.items():
        member = clusters.pairs[m]
        f = scaling_factor(scaling, member.death, root.death)
        contribs.append((time, f * member.persistence))
    return _build_curve(sigma, clusters, contribs)


def curve(sigma: int, clusters: MergeClusters, order: int = 3,
          scaling: str = "unit") -> CentralityCurve:
    """J`order` curve of one class."""
    if order == 1:
        return j1_curve(sigma, clusters)
    if order == 2:
        return j2_curve(sigma, clusters, scaling)
    if order == 3:
        return j3_curve(sigma, clusters, scaling)
    raise ValueError("order must be 1, 2 or 3")


def curve_family(clusters: MergeClusters, order: int = 3,
                 scaling: str = "unit") -> dict:
    """Curves of every class in the cluster structure, keyed by pair index."""
    return {sigma: curve(sigma, clusters, order, scaling)
            for sigma in clusters.ordering}


def evaluate(curve: CentralityCurve, eps: float) -> float:
    return curve.evaluate(eps)


def max_value(curve: CentralityCurve) -> float:
    return curve.max_value()


def zero_curve(class_index: int = -1) -> CentralityCurve:
    """The identically-zero curve (used for padding collections)."""
    return CentralityCurve(class_index=class_index, birth=0.0, death=0.0, jumps=())
