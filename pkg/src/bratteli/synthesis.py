"""Constructive realization of inverse-limit simplex targets by diagrams.

Given target points xi^(n) in the n-dimensional simplex (one per level,
typically the normalized heads of a fixed non-negative weight sequence t),
this module chooses multiplicity vectors m^(n) level by level so that the
resulting triangular diagram's trace maps send the new vertex of each level
to a point zeta^(n) within 2^-n of xi^(n), in l1 and l2 alike.  When the
targets are rational with positive coordinates the approximation can be made
exact (all gaps zero).

The per-level tolerance is eps_n = 2^-n / (n+1): a per-coordinate error
below eps_n bounds the l1 gap by (n+1) eps_n = 2^-n, and the l2 gap a
fortiori, keeping every certificate in exact rational arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm, prod
from typing import Callable, Iterable, Sequence

from .diagram import TriangularSpec, characteristic_sequence
from .errors import BratteliError, InsufficientPrefixError
from .intertwine import MapSequence
from .simplex import SimplexPoint, StochasticAffineMap

_SCAN_CAP = 10**7
_N0_SCAN_CAP = 10**6


@dataclass(frozen=True, slots=True)
class TailRule:
    """Continuation of a weight sequence beyond its explicit head."""

    kind: str  # "zero" | "geometric" | "equal-to-k" | "custom"
    ratio: Fraction = Fraction(0)
    spec: TriangularSpec | None = None
    fn: Callable[[int], Fraction] | None = None

    @staticmethod
    def zero() -> "TailRule":
        return TailRule("zero")

    @staticmethod
    def geometric(ratio) -> "TailRule":
        ratio = Fraction(ratio)
        if ratio <= 0:
            raise BratteliError("geometric ratio must be positive")
        return TailRule("geometric", ratio=ratio)

    @staticmethod
    def equal_to_k(spec: TriangularSpec) -> "TailRule":
        return TailRule("equal-to-k", spec=spec)

    @staticmethod
    def custom(fn: Callable[[int], Fraction]) -> "TailRule":
        return TailRule("custom", fn=fn)


@dataclass(frozen=True, slots=True)
class StationarySpec:
    """Non-negative weight sequence t_0, t_1, ... defining stationary targets.

    `head` lists explicit values; `tail` continues them.  A geometric tail
    continues the last head value by repeated multiplication (or runs
    ratio^n from n = 0 when the head is empty).  Proportional sequences give
    identical targets, so no normalization is stored.
    """

    head: tuple[Fraction, ...]
    tail: TailRule

    def __init__(self, head: Iterable = (), tail: TailRule | None = None) -> None:
        hd = tuple(Fraction(x) for x in head)
        if any(x < 0 for x in hd):
            raise BratteliError("weights must be non-negative")
        tl = tail if tail is not None else TailRule.zero()
        object.__setattr__(self, "head", hd)
        object.__setattr__(self, "tail", tl)
        if self._tail_is_zero() and all(x == 0 for x in hd):
            raise BratteliError("weight sequence is identically zero")

    def _tail_is_zero(self) -> bool:
        t = self.tail
        if t.kind == "zero":
            return True
        if t.kind == "geometric":
            return bool(self.head) and self.head[-1] == 0
        return False

    def value(self, n: int) -> Fraction:
        if n < 0:
            raise BratteliError("index must be non-negative")
        if n < len(self.head):
            return self.head[n]
        t = self.tail
        if t.kind == "zero":
            return Fraction(0)
        if t.kind == "geometric":
            if self.head:
                return self.head[-1] * t.ratio ** (n - len(self.head) + 1)
            return t.ratio**n
        if t.kind == "equal-to-k":
            return Fraction(characteristic_sequence(t.spec, n)[n])
        return Fraction(t.fn(n))

    def partial_sum(self, n: int) -> Fraction:
        return sum(self.value(j) for j in range(n + 1))

    @property
    def first_nonzero(self) -> int:
        for n in range(max(len(self.head), 1) + _N0_SCAN_CAP):
            if self.value(n) != 0:
                return n
        raise BratteliError("no nonzero weight found within the scan cap")

    def targets(self) -> "TargetSequence":
        return TargetSequence.stationary(self)


def stationary_targets(t: StationarySpec, n: int) -> SimplexPoint:
    """Target point on level n: the normalized weight head.

    Below the first nonzero weight the target is genuinely arbitrary; the
    documented default is the barycenter.
    """
    if n < t.first_nonzero:
        return SimplexPoint.barycenter(n + 1)
    return SimplexPoint.normalized([t.value(j) for j in range(n + 1)])


class TargetSequence:
    """Producer of the per-level target points xi^(n).

    `stationary_from` is the level from which the coherence identity
    f_n(xi^(n+1)) = xi^(n) is promised (exact for stationary specs); None
    when nothing is promised.
    """

    def __init__(self, point_fn, max_level: int | None, stationary_from: int | None, kind: str):
        self._point_fn = point_fn
        self.max_level = max_level
        self.stationary_from = stationary_from
        self.kind = kind

    @staticmethod
    def stationary(spec: StationarySpec) -> "TargetSequence":
        return TargetSequence(
            lambda n: stationary_targets(spec, n),
            max_level=None,
            stationary_from=spec.first_nonzero,
            kind="stationary",
        )

    @staticmethod
    def explicit(points: Sequence[SimplexPoint], stationary_from: int | None = None) -> "TargetSequence":
        pts = tuple(points)
        for n, p in enumerate(pts):
            if p.dim != n + 1:
                raise BratteliError(f"target {n} must have {n + 1} coordinates, has {p.dim}")
        return TargetSequence(
            lambda n: pts[n], max_level=len(pts) - 1, stationary_from=stationary_from, kind="explicit"
        )

    def point(self, n: int) -> SimplexPoint:
        if n < 0:
            raise BratteliError("level must be non-negative")
        if self.max_level is not None and n > self.max_level:
            raise InsufficientPrefixError(
                f"targets defined through level {self.max_level}, asked for {n}"
            )
        return self._point_fn(n)

    def connecting_map(self, n: int) -> StochasticAffineMap:
        """The map fixing the first n+1 vertices and sending the new vertex
        of level n+1 to xi^(n)."""
        return StochasticAffineMap.vertex_fixing(self.point(n))

    def map_sequence(self, count: int, metric: str = "l1") -> MapSequence:
        return MapSequence([self.connecting_map(n) for n in range(count)], metric)

    def check_coherence(self, count: int) -> bool:
        """Exact check of f_n(xi^(n+1)) = xi^(n) on the promised range."""
        if self.stationary_from is None:
            return False
        for n in range(self.stationary_from, count):
            if self.connecting_map(n).apply(self.point(n + 1)) != self.point(n):
                return False
        return True


def approximate_on_simplex(
    xi: SimplexPoint,
    eps,
    exact: bool = False,
    scan_cap: int = _SCAN_CAP,
) -> tuple[int, ...]:
    """Positive integers l_0..l_n with |l_j / sum(l) - xi_j| < eps for all j.

    Exact mode clears denominators (requires every coordinate positive) and
    returns a zero-error vector; approximate mode scans denominators
    D = 1, 2, 3, ... rounding by largest remainder and accepting the first D
    that meets eps, so a returned vector is always correct.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise BratteliError("tolerance must be positive")
    if exact:
        if any(c == 0 for c in xi):
            raise BratteliError(
                "exact mode needs strictly positive coordinates (each l_j must be >= 1)"
            )
        den = lcm(*(c.denominator for c in xi.coords))
        ell = [c.numerator * (den // c.denominator) for c in xi.coords]
        g = gcd(*ell)
        return tuple(e // g for e in ell)
    n = xi.dim
    for d in range(1, scan_cap + 1):
        base = [int(c * d) for c in xi.coords]  # floor: c*d is a Fraction
        remainders = [(c * d - b, -j) for j, (c, b) in enumerate(zip(xi.coords, base))]
        deficit = d - sum(base)
        for _, neg_j in sorted(remainders, reverse=True)[:deficit]:
            base[-neg_j] += 1
        ell = [max(1, b) for b in base]
        total = sum(ell)
        if all(abs(Fraction(l, total) - c) < eps for l, c in zip(ell, xi.coords)):
            return tuple(ell)
    raise BratteliError(f"no approximation found within denominator cap {scan_cap}")


@dataclass(frozen=True, slots=True)
class LevelSynthesis:
    """Everything chosen and certified at one synthesis level."""

    level: int
    ell: tuple[int, ...]
    mvector: tuple[int, ...]
    k_next: int
    xi: SimplexPoint
    zeta: SimplexPoint
    gap_l1: Fraction
    gap_l2sq: Fraction
    epsilon: Fraction


@dataclass(frozen=True, slots=True)
class SynthesisCertificate:
    levels: tuple[LevelSynthesis, ...]

    @property
    def max_gap_l1(self) -> Fraction:
        return max((l.gap_l1 for l in self.levels), default=Fraction(0))

    def all_gaps_within_bound(self) -> bool:
        return all(
            l.gap_l1 < Fraction(1, 2**l.level)
            and l.gap_l2sq < Fraction(1, 4**l.level)
            for l in self.levels
        )


def _level_from_ell(ks: list[int], ell: Sequence[int], reduced: bool):
    scale = lcm(*ks) if reduced else prod(ks)
    mvector = tuple((scale // ks[j]) * ell[j] for j in range(len(ks)))
    k_next = scale * sum(ell)
    zeta_point = SimplexPoint.normalized(ell)
    return mvector, k_next, zeta_point


def synthesize_level(
    kprefix: Sequence[int],
    xi: SimplexPoint,
    eps,
    exact: bool = False,
    reduced: bool = False,
) -> tuple[tuple[int, ...], int, SimplexPoint]:
    """One induction step: from the sizes so far and the level target,
    produce (multiplicity vector, next size, realized point).

    With scale K divisible by every k_j (the full product, or their lcm in
    reduced mode), m_j = (K / k_j) l_j gives zeta_j = m_j k_j / k_next =
    l_j / sum(l), so the realized point is exactly the integer
    approximation of the target.
    """
    ks = list(kprefix)
    if len(ks) != xi.dim:
        raise BratteliError("size prefix and target dimension disagree")
    if any(k < 1 for k in ks):
        raise BratteliError("sizes must be positive")
    ell = approximate_on_simplex(xi, eps, exact=exact)
    return _level_from_ell(ks, ell, reduced)


def synthesize(
    targets: TargetSequence,
    count: int,
    k0: int = 1,
    exact: bool = False,
    reduced: bool = False,
) -> tuple[TriangularSpec, SynthesisCertificate]:
    """Build a triangular diagram realizing the targets through level `count`.

    Every multiplicity is at least 1, so the result always carries the
    just-infinite block structure; each level's realized point is within
    2^-n of the target in l1 (strictly), with the squared-l2 gap below 4^-n.
    """
    ks = [k0]
    mvectors: list[tuple[int, ...]] = []
    records: list[LevelSynthesis] = []
    for n in range(count + 1):
        xi = targets.point(n)
        eps_n = Fraction(1, 2**n * (n + 1))
        ell = approximate_on_simplex(xi, eps_n, exact=exact)
        mvector, k_next, zeta_point = _level_from_ell(ks, ell, reduced)
        gap_l1 = xi.l1_distance(zeta_point)
        gap_l2 = xi.l2sq_distance(zeta_point)
        if gap_l1 >= Fraction(1, 2**n):
            raise AssertionError(f"level {n} gap {gap_l1} exceeds its bound")
        records.append(
            LevelSynthesis(n, ell, mvector, k_next, xi, zeta_point, gap_l1, gap_l2, eps_n)
        )
        mvectors.append(mvector)
        ks.append(k_next)
    return TriangularSpec(k0, mvectors), SynthesisCertificate(tuple(records))


def synthesized_generator(
    targets: TargetSequence,
    k0: int = 1,
    exact: bool = False,
    reduced: bool = False,
    kind: str = "synthesized",
) -> "DiagramGenerator":
    """Lazy diagram rule driven by a target sequence.

    Level construction is deterministic and prefix-stable (the level-n choice
    depends only on earlier levels), so the cache below is unobservable.
    """
    from .diagram import DiagramGenerator

    cache: dict[int, tuple[int, ...]] = {}

    def rule(n: int) -> tuple[int, ...]:
        if n not in cache:
            spec, _ = synthesize(targets, n, k0=k0, exact=exact, reduced=reduced)
            cache.update(enumerate(spec.mvectors))
        return cache[n]

    # every synthesized multiplicity is (scale / k_j) * l_j with l_j >= 1
    return DiagramGenerator(kind, k0, rule, positivity_guaranteed=True)


def stationary_generator(
    weights: StationarySpec, k0: int = 1, exact: bool = True, reduced: bool = False
) -> "DiagramGenerator":
    return synthesized_generator(
        weights.targets(), k0=k0, exact=exact, reduced=reduced, kind="stationary"
    )


@dataclass(frozen=True, slots=True)
class Classification:
    """Shape of the limit simplex of a stationary family."""

    verdict: str  # "bauer" | "non-bauer" | "degenerate" | "inconclusive"
    e_inf: tuple[Fraction, ...] | None = None
    total: Fraction | None = None
    partial_sums: tuple[Fraction, ...] | None = None


def classify_stationary(t: StationarySpec, depth: int = 32) -> Classification:
    """Divergent weights give the one-point-compactification Bauer simplex;
    summable weights with at least two atoms give a non-Bauer simplex whose
    limit of extreme points is the normalized weight mixture; a single atom
    is isolated as degenerate; an undecidable tail reports partial sums."""
    tail = t.tail
    tail_zero = t._tail_is_zero()
    if tail.kind == "custom":
        sums = tuple(t.partial_sum(n) for n in range(depth + 1))
        return Classification("inconclusive", partial_sums=sums)
    if tail_zero:
        atoms = sum(1 for x in t.head if x != 0)
        if atoms == 1:
            return Classification("degenerate")
        total = sum(t.head)
        coeffs = tuple(t.value(j) / total for j in range(depth + 1))
        return Classification("non-bauer", e_inf=coeffs, total=total)
    if tail.kind == "equal-to-k":
        return Classification("bauer")  # sizes are >= 1, the sum diverges
    # geometric with positive base
    if tail.ratio >= 1:
        return Classification("bauer")
    if t.head:
        # the head's last value is repeated down the tail with ratio q
        total = sum(t.head) + t.head[-1] * tail.ratio / (1 - tail.ratio)
    else:
        total = 1 / (1 - tail.ratio)  # sum of q^j from j = 0
    coeffs = tuple(t.value(j) / total for j in range(depth + 1))
    return Classification("non-bauer", e_inf=coeffs, total=total)


@dataclass(frozen=True, slots=True)
class GCheck:
    level: int
    vertex: str
    ok: bool


@dataclass(frozen=True, slots=True)
class GReport:
    checks: tuple[GCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def failing_levels(self) -> tuple[int, ...]:
        return tuple(sorted({c.level for c in self.checks if not c.ok}))


def verify_g_consistency(targets: TargetSequence, count: int, vertex_budget: int) -> GReport:
    """Exact commutation check of the cylinder maps onto the levels.

    g_n sends vertex j to the j-th level vertex when j <= n and to the
    target point otherwise (including the compactifying vertex, labeled
    "inf"); the check verifies f_n o g_{n+1} = g_n on vertices
    e_0..e_{vertex_budget} and "inf" for each level in range.
    """
    start = targets.stationary_from
    if start is None:
        raise BratteliError("g-consistency needs a declared stationary range")
    checks: list[GCheck] = []

    def g(n: int, j: int | None) -> SimplexPoint:
        if j is not None and j <= n:
            return SimplexPoint.vertex(n + 1, j)
        return targets.point(n)

    for n in range(start, count):
        f_n = targets.connecting_map(n)
        labels: list[tuple[str, int | None]] = [(str(j), j) for j in range(vertex_budget + 1)]
        labels.append(("inf", None))
        for label, j in labels:
            lhs = f_n.apply(g(n + 1, j))
            checks.append(GCheck(n, label, lhs == g(n, j)))
    return GReport(tuple(checks))
