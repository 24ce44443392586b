"""Fixed parabolic data on a two-component nodal curve and its scalar formulas.

All quantities are exact: ranks, parabolic Euler characteristics and the
rank-dependent correction ``m(F)`` are :class:`fractions.Fraction` values
whose denominators divide ``k * (c1 + c2)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import accumulate
from typing import Iterable, Mapping, Sequence

from .errors import (
    InconsistentFlagDims,
    InvalidParabolicData,
    MissingFlagData,
    NonIncreasingWeights,
    NonIntegralSplit,
    NonPositiveMultiplicity,
    UnbalancedSpec,
    ZeroPolarization,
    ZeroRank,
)

ExactRational = Fraction


class Component(str, enum.Enum):
    C1 = "C1"
    C2 = "C2"
    NODE1 = "Node1"
    NODE2 = "Node2"

    @property
    def side(self) -> int:
        return 1 if self in (Component.C1, Component.NODE1) else 2

    @property
    def is_node(self) -> bool:
        return self in (Component.NODE1, Component.NODE2)


def jumps(weights: Sequence[int]) -> tuple[int, ...]:
    """Consecutive differences of a strictly increasing weight sequence."""
    if any(b <= a for a, b in zip(weights, weights[1:])):
        raise NonIncreasingWeights(f"weights {tuple(weights)} are not strictly increasing")
    return tuple(b - a for a, b in zip(weights, weights[1:]))


def cumulative_ranks(flag_type: Sequence[int]) -> tuple[int, ...]:
    if any(n <= 0 for n in flag_type):
        raise NonPositiveMultiplicity(f"flag type {tuple(flag_type)} has a non-positive block")
    return tuple(accumulate(flag_type))


@dataclass(frozen=True)
class ParabolicPoint:
    """Flag type, integer weights and the extra weight ``alpha`` at one point."""

    point_id: str
    component: Component
    flag_type: tuple[int, ...]
    weights: tuple[int, ...]
    alpha: int

    def __post_init__(self):
        object.__setattr__(self, "component", Component(self.component))
        object.__setattr__(self, "flag_type", tuple(int(n) for n in self.flag_type))
        object.__setattr__(self, "weights", tuple(int(a) for a in self.weights))
        object.__setattr__(self, "alpha", int(self.alpha))

    @property
    def length(self) -> int:
        """Number of proper flag steps ``l``."""
        return len(self.flag_type) - 1

    @property
    def jumps(self) -> tuple[int, ...]:
        return jumps(self.weights)

    @property
    def ranks(self) -> tuple[int, ...]:
        """r_1..r_l (the last prefix sum, which equals r, is dropped)."""
        return cumulative_ranks(self.flag_type)[:-1]

    @property
    def top_weight(self) -> int:
        return self.weights[-1]

    def jump_sum(self) -> int:
        """sum_i d_i r_i."""
        return sum(d * ri for d, ri in zip(self.jumps, self.ranks))

    def charge(self, r: int) -> int:
        """Contribution sum_i d_i r_i + r*alpha of this point to the balance condition."""
        return self.jump_sum() + r * self.alpha

    def gl_weight(self) -> tuple[int, ...]:
        """Character of the flag line bundle, one entry per fiber coordinate.

        Block ``i`` of the flag carries ``alpha + a_{l+1} - a_i``; the result is
        weakly decreasing and sums to :meth:`charge`.
        """
        out: list[int] = []
        for n, a in zip(self.flag_type, self.weights):
            out.extend([self.alpha + self.top_weight - a] * n)
        return tuple(out)

    def validate(self, r: int, k: int) -> None:
        if not self.flag_type:
            raise InvalidParabolicData(f"{self.point_id}: empty flag type")
        cumulative_ranks(self.flag_type)
        if sum(self.flag_type) != r:
            raise InvalidParabolicData(
                f"{self.point_id}: flag type {self.flag_type} does not sum to rank {r}"
            )
        if len(self.weights) != len(self.flag_type):
            raise InvalidParabolicData(
                f"{self.point_id}: {len(self.weights)} weights for {len(self.flag_type)} blocks"
            )
        jumps(self.weights)
        a1, top = self.weights[0], self.weights[-1]
        room = k - top + a1
        if self.component.is_node:
            ok = 0 <= a1 and top <= k and 0 <= self.alpha <= room
        else:
            ok = 0 < a1 and top < k and 0 <= self.alpha < room
        if not ok:
            raise InvalidParabolicData(
                f"{self.point_id}: weights {self.weights} / alpha {self.alpha} "
                f"out of range for level {k} on {self.component.value}"
            )


def rank_of(r1: int, r2: int, c1: int, c2: int) -> Fraction:
    if c1 + c2 == 0:
        raise ZeroPolarization("c1 + c2 = 0")
    return Fraction(c1 * r1 + c2 * r2, c1 + c2)


def hilbert_poly(r1: int, r2: int, chi: int, c1: int, c2: int) -> tuple[int, int]:
    """(leading coefficient, constant term) of n -> chi(E(n))."""
    return c1 * r1 + c2 * r2, chi


def split_levels(c1: int, c2: int, ell_total: int) -> tuple[int, int]:
    if c1 <= 0 or c2 <= 0:
        raise ZeroPolarization(f"polarization degrees must be positive, got {(c1, c2)}")
    s = c1 + c2
    if (c1 * ell_total) % s or (c2 * ell_total) % s:
        raise NonIntegralSplit(f"ell_total={ell_total} does not split integrally along {(c1, c2)}")
    return c1 * ell_total // s, c2 * ell_total // s


@dataclass(frozen=True)
class DegenerationSpec:
    """Numeric data fixed on X1 u X2: genera, polarization, rank, level, chi, levels, points.

    ``c1, c2`` are divided by their gcd on construction.  The balance condition is
    not enforced here (see :func:`balance_check`); loaders enforce it.
    """

    g1: int
    g2: int
    c1: int
    c2: int
    r: int
    k: int
    chi: int
    ell_total: int
    points: tuple[ParabolicPoint, ...] = ()

    def __post_init__(self):
        if self.g1 < 0 or self.g2 < 0:
            raise InvalidParabolicData("genera must be nonnegative")
        if self.r <= 0:
            raise InvalidParabolicData("rank must be positive")
        if self.k <= 0:
            raise InvalidParabolicData("level must be positive")
        if self.c1 <= 0 or self.c2 <= 0:
            raise ZeroPolarization(f"polarization degrees must be positive, got {(self.c1, self.c2)}")
        g = math.gcd(self.c1, self.c2)
        object.__setattr__(self, "c1", self.c1 // g)
        object.__setattr__(self, "c2", self.c2 // g)
        object.__setattr__(self, "points", tuple(self.points))
        seen = set()
        for p in self.points:
            if p.point_id in seen:
                raise InvalidParabolicData(f"duplicate point id {p.point_id!r}")
            seen.add(p.point_id)
            if p.component.is_node:
                raise InvalidParabolicData(
                    f"{p.point_id}: node preimages are not marked points of the nodal curve"
                )
            p.validate(self.r, self.k)
        split_levels(self.c1, self.c2, self.ell_total)

    @property
    def ell1(self) -> int:
        return split_levels(self.c1, self.c2, self.ell_total)[0]

    @property
    def ell2(self) -> int:
        return split_levels(self.c1, self.c2, self.ell_total)[1]

    @property
    def ells(self) -> tuple[int, int]:
        return split_levels(self.c1, self.c2, self.ell_total)

    def points_on(self, side: int) -> tuple[ParabolicPoint, ...]:
        return tuple(p for p in self.points if p.component.side == side)

    def point(self, point_id: str) -> ParabolicPoint:
        for p in self.points:
            if p.point_id == point_id:
                return p
        raise KeyError(point_id)


@dataclass(frozen=True)
class SheafNumerics:
    """Numeric shadow of a torsion-free sheaf: ranks on X1, X2, chi, and flag data.

    ``flag_dims[x]`` lists dim(F_x / F_x n F_i(E)_x) for i = 1..l_x.  Points on a
    component where the sheaf has rank 0 may be omitted, as may flagless points.
    """

    rank_pair: tuple[int, int]
    chi: int
    flag_dims: Mapping[str, tuple[int, ...]] = field(default_factory=dict)

    def __post_init__(self):
        r1, r2 = (int(x) for x in self.rank_pair)
        if r1 < 0 or r2 < 0:
            raise InvalidParabolicData("ranks must be nonnegative")
        object.__setattr__(self, "rank_pair", (r1, r2))
        object.__setattr__(
            self, "flag_dims", {str(x): tuple(int(v) for v in d) for x, d in self.flag_dims.items()}
        )

    @classmethod
    def ambient(cls, spec: DegenerationSpec, chi: int | None = None) -> "SheafNumerics":
        """The sheaf E itself: rank (r, r) with the full flag."""
        return cls(
            (spec.r, spec.r),
            spec.chi if chi is None else chi,
            {p.point_id: p.ranks for p in spec.points},
        )

    def rank_at(self, point: ParabolicPoint) -> int:
        return self.rank_pair[point.component.side - 1]

    def twisted(self, t: int, c1: int, c2: int) -> "SheafNumerics":
        """Numerics of F(t): chi moves by t times the Hilbert polynomial's slope."""
        lead, _ = hilbert_poly(*self.rank_pair, self.chi, c1, c2)
        return SheafNumerics(self.rank_pair, self.chi + t * lead, dict(self.flag_dims))


def flag_quotient_dims(s: SheafNumerics, point: ParabolicPoint) -> tuple[int, ...]:
    """dim(F_x / F_x n F_i) for i = 1..l+1, validated against the ambient flag."""
    rank = s.rank_at(point)
    l = point.length
    dims = s.flag_dims.get(point.point_id)
    if dims is None:
        if rank == 0 or l == 0:
            dims = (0,) * l if rank == 0 else ()
        else:
            raise MissingFlagData(f"no flag data at {point.point_id}")
    if len(dims) != l:
        raise InconsistentFlagDims(f"{point.point_id}: expected {l} flag dimensions, got {len(dims)}")
    full = tuple(dims) + (rank,)
    prev = 0
    for i, (q, ri, n) in enumerate(zip(full, point.ranks + (sum(point.flag_type),), point.flag_type)):
        if q < prev or q > min(rank, ri) or q - prev > n:
            raise InconsistentFlagDims(
                f"{point.point_id}: flag dimensions {dims} incompatible with flag type "
                f"{point.flag_type} and rank {rank} (step {i + 1})"
            )
        prev = q
    return full


def intersection_multiplicities(s: SheafNumerics, point: ParabolicPoint) -> tuple[int, ...]:
    """n_i^F = dim(F_x n F_{i-1} / F_x n F_i), recovered by differencing."""
    full = flag_quotient_dims(s, point)
    return tuple(b - a for a, b in zip((0,) + full[:-1], full))


def sheaf_rank(s: SheafNumerics, spec: DegenerationSpec) -> Fraction:
    return rank_of(*s.rank_pair, spec.c1, spec.c2)


def par_chi(s: SheafNumerics, spec: DegenerationSpec) -> Fraction:
    total = Fraction(s.chi)
    for p in spec.points:
        weighted = sum(n * a for n, a in zip(intersection_multiplicities(s, p), p.weights))
        total += Fraction(weighted, spec.k)
    return total


def m_correction(s: SheafNumerics, spec: DegenerationSpec) -> Fraction:
    """The rank-dependent shift that makes semistability behave across the node."""
    rf = sheaf_rank(s, spec)
    r1, r2 = s.rank_pair
    total = Fraction(0)
    for side, ri in ((1, r1), (2, r2)):
        mass = sum(p.top_weight + p.alpha for p in spec.points_on(side))
        total += (rf - ri) * mass / spec.k
    return total


def par_chi_m(s: SheafNumerics, spec: DegenerationSpec) -> Fraction:
    return par_chi(s, spec) + m_correction(s, spec)


def par_mu_m(s: SheafNumerics, spec: DegenerationSpec) -> Fraction:
    if s.rank_pair == (0, 0):
        raise ZeroRank("slope of a rank-(0,0) sheaf")
    return par_chi_m(s, spec) / sheaf_rank(s, spec)


@dataclass(frozen=True)
class BalanceVerdict:
    balanced: bool
    lhs: int
    rhs: int

    def __bool__(self):
        return self.balanced


def balance_lhs(points: Iterable[ParabolicPoint], r: int, ell: int) -> int:
    return sum(p.charge(r) for p in points) + r * ell


def balance_check(spec: DegenerationSpec) -> BalanceVerdict:
    lhs = balance_lhs(spec.points, spec.r, spec.ell_total)
    rhs = spec.k * spec.chi
    return BalanceVerdict(lhs == rhs, lhs, rhs)


def require_balanced(spec: DegenerationSpec) -> None:
    verdict = balance_check(spec)
    if not verdict:
        raise UnbalancedSpec(f"balance condition fails: {verdict.lhs} != {verdict.rhs}")


@dataclass(frozen=True)
class PointExponents:
    point_id: str
    alpha: int
    jumps: tuple[int, ...]


@dataclass(frozen=True)
class ThetaExponents:
    """Exponents of the theta bundle: det-cohomology power, per-point flag powers, y-levels."""

    k: int
    points: tuple[PointExponents, ...]
    ell1: int
    ell2: int


def theta_exponents(spec: DegenerationSpec) -> ThetaExponents:
    require_balanced(spec)
    return ThetaExponents(
        k=spec.k,
        points=tuple(PointExponents(p.point_id, p.alpha, p.jumps) for p in spec.points),
        ell1=spec.ell1,
        ell2=spec.ell2,
    )
