"""Approximate intertwinings of inverse systems of simplices.

Two towers of simplices with column-stochastic connecting maps are linked by
diagonal cross maps; when the defect series are summable the limits are
affinely homeomorphic, and truncations estimate the limit map with a
certified error.  The default metric is l1 (total variation), in which every
column-stochastic map is automatically nonexpansive, so the contractivity
hypothesis costs nothing; l2 is available read-only through exactly
representable squared distances.

Conventions: in a `MapSequence`, maps[j] sends level-(j+1) points to level-j
points.  Cross maps run diagonally: rho[j] from top level j+1 to bottom
level j, and rho_prime[j] from bottom level j to top level j.  When no cross
maps are given (towers over identical levels), rho[j] defaults to the top
map f_j itself and rho_prime[j] to the identity, which makes one defect
series vanish and the other equal the levelwise gaps d(f_j, f'_j).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import BratteliError
from .simplex import SimplexPoint, StochasticAffineMap

_METRICS = ("l1", "l2")


def _point_distance(a: SimplexPoint, b: SimplexPoint, metric: str) -> Fraction:
    if metric == "l1":
        return a.l1_distance(b)
    if metric == "l2":
        return a.l2sq_distance(b)
    raise BratteliError(f"unknown metric {metric!r}")


def map_distance(f: StochasticAffineMap, g: StochasticAffineMap, metric: str = "l1") -> Fraction:
    """Uniform distance between two maps with the same shape.

    The pointwise distance x -> d(f(x), g(x)) is convex, so its sup over the
    simplex is attained at a vertex; the result is the exact max over
    columns.  For l2 the squared distance is returned (max of squares equals
    square of max).
    """
    if (f.rows, f.cols) != (g.rows, g.cols):
        raise BratteliError("shape mismatch")
    if metric not in _METRICS:
        raise BratteliError(f"unknown metric {metric!r}")
    return max(
        _point_distance(f.column_point(j), g.column_point(j), metric)
        for j in range(f.cols)
    )


@dataclass(frozen=True, slots=True)
class MapSequence:
    """Chained connecting maps of one inverse system of simplices."""

    maps: tuple[StochasticAffineMap, ...]
    metric: str = "l1"

    def __init__(self, maps: Iterable[StochasticAffineMap], metric: str = "l1") -> None:
        ms = tuple(maps)
        if metric not in _METRICS:
            raise BratteliError(f"unknown metric {metric!r}")
        for j in range(len(ms) - 1):
            if ms[j].cols != ms[j + 1].rows:
                raise BratteliError(f"maps {j} and {j + 1} do not chain")
        object.__setattr__(self, "maps", ms)
        object.__setattr__(self, "metric", metric)

    def __len__(self) -> int:
        return len(self.maps)

    def level_dim(self, j: int) -> int:
        """Coordinate count of level j (0 <= j <= len(self))."""
        if j < len(self.maps):
            return self.maps[j].rows
        if j == len(self.maps) and self.maps:
            return self.maps[-1].cols
        raise BratteliError(f"level {j} outside the sequence")


def compose_range(seq: MapSequence, i: int, j: int) -> StochasticAffineMap:
    """The composed map from level j down to level i (i < j)."""
    if not 0 <= i < j <= len(seq.maps):
        raise BratteliError(f"bad range ({i}, {j}) for {len(seq.maps)} maps")
    out = seq.maps[i]
    for n in range(i + 1, j):
        out = out.compose(seq.maps[n])
    return out


@dataclass(frozen=True, slots=True)
class TailBound:
    """Rule bounding the gap series beyond the computed prefix."""

    kind: str
    ratio: Fraction = Fraction(0)

    def __init__(self, kind: str, ratio=Fraction(0)) -> None:
        ratio = Fraction(ratio)
        if kind == "geometric":
            if not 0 < ratio < 1:
                raise BratteliError("geometric tail needs 0 < ratio < 1")
        elif kind != "zero":
            raise BratteliError(f"unknown tail rule {kind!r}")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "ratio", ratio)

    def bound_from(self, index: int) -> Fraction:
        """Upper bound for the sum of gaps at indices >= index."""
        if self.kind == "zero":
            return Fraction(0)
        return self.ratio**index / (1 - self.ratio)

    @staticmethod
    def geometric(ratio) -> "TailBound":
        return TailBound("geometric", ratio)

    @staticmethod
    def zero() -> "TailBound":
        return TailBound("zero")


@dataclass(frozen=True, slots=True)
class IntertwiningData:
    top: MapSequence
    bottom: MapSequence
    rho: tuple[StochasticAffineMap, ...] | None = None
    rho_prime: tuple[StochasticAffineMap, ...] | None = None
    tail: TailBound | None = None

    def __post_init__(self) -> None:
        if self.rho is not None:
            for j, r in enumerate(self.rho):
                if r.cols != self.top.level_dim(j + 1) or r.rows != self.bottom.level_dim(j):
                    raise BratteliError(f"cross map rho[{j}] has the wrong shape")
        if self.rho_prime is not None:
            for j, r in enumerate(self.rho_prime):
                if r.cols != self.bottom.level_dim(j) or r.rows != self.top.level_dim(j):
                    raise BratteliError(f"cross map rho_prime[{j}] has the wrong shape")

    @property
    def full_form(self) -> bool:
        return self.rho is not None


@dataclass(frozen=True, slots=True)
class GapSeries:
    """Exact defect values of an intertwining, with l1 partial sums.

    In the identical-levels form `gaps[j]` is d(f_j, f'_j); in the full form
    it is the defect of rho'_j o rho_j against f_j and `second[j]` the defect
    of rho_j o rho'_{j+1} against f'_j.  The certificate (partial sum plus
    tail bound) exists only in the l1 metric, where stochastic maps are
    nonexpansive and the bounds actually compose.
    """

    metric: str
    gaps: tuple[Fraction, ...]
    second: tuple[Fraction, ...] | None
    partial_sums: tuple[Fraction, ...] | None
    certificate: Fraction | None


def gap_series(data: IntertwiningData, count: int | None = None) -> GapSeries:
    metric = data.top.metric
    limit = min(len(data.top.maps), len(data.bottom.maps))
    n = limit if count is None else min(count, limit)
    if data.full_form:
        if data.rho_prime is None:
            raise BratteliError("full form needs both cross-map sequences")
        first = []
        second = []
        for j in range(n):
            first.append(
                map_distance(data.rho_prime[j].compose(data.rho[j]), data.top.maps[j], metric)
            )
            if j + 1 < len(data.rho_prime):
                second.append(
                    map_distance(
                        data.rho[j].compose(data.rho_prime[j + 1]), data.bottom.maps[j], metric
                    )
                )
        gaps, extra = tuple(first), tuple(second)
    else:
        gaps = tuple(
            map_distance(data.top.maps[j], data.bottom.maps[j], metric) for j in range(n)
        )
        extra = None
    if metric != "l1":
        return GapSeries(metric, gaps, extra, None, None)
    running = Fraction(0)
    sums = []
    for g in gaps:
        running += g
        sums.append(running)
    if extra:
        running += sum(extra)
    certificate = None
    if data.tail is not None:
        certificate = running + data.tail.bound_from(n)
    return GapSeries(metric, gaps, extra, tuple(sums), certificate)


@dataclass(frozen=True, slots=True)
class LimitEstimate:
    point: SimplexPoint
    error_bound: Fraction
    certified: bool


def limit_vertex_estimate(
    data: IntertwiningData, level: int, vertex: int, depth: int
) -> LimitEstimate:
    """Truncation estimate of the limit map on a persistent extreme point.

    For systems in one-new-vertex form, vertex v of the limit projects onto
    the v-th vertex of every deep enough level; the estimate at `depth` j is
    the image of that vertex through the cross map at j and the bottom
    composites down to `level`.  The error bound sums the remaining defects
    within the prefix plus the tail rule, all in exact l1 arithmetic.
    """
    i, j = level, depth
    if data.top.metric != "l1" or data.bottom.metric != "l1":
        raise BratteliError("estimates are certified in the l1 metric only")
    if not 0 <= i <= j < len(data.bottom.maps):
        raise BratteliError("need 0 <= level <= depth < number of maps")
    if data.full_form:
        cross = data.rho[j] if j < len(data.rho) else None
        if cross is None:
            raise BratteliError(f"missing cross map at depth {j}")
    else:
        if len(data.top.maps) <= j:
            raise BratteliError(f"top sequence too short for depth {j}")
        cross = data.top.maps[j]
    if not 0 <= vertex < cross.cols:
        raise BratteliError(f"vertex {vertex} outside the depth-{j + 1} simplex")
    start = cross.apply(SimplexPoint.vertex(cross.cols, vertex))
    point = start if i == j else compose_range(data.bottom, i, j).apply(start)

    series = gap_series(data)
    if data.full_form:
        remaining = sum(series.second[n] for n in range(j, len(series.second)))
        remaining += sum(series.gaps[n] for n in range(j + 1, len(series.gaps)))
        horizon = len(series.gaps)
    else:
        remaining = sum(series.gaps[n] for n in range(j, len(series.gaps)))
        horizon = len(series.gaps)
    certified = data.tail is not None
    bound = remaining + (data.tail.bound_from(horizon) if certified else Fraction(0))
    return LimitEstimate(point, bound, certified)
