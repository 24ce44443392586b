"""Component windows of the nodal moduli space and local types at the node."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import InfeasibleFiberDim, RankOutOfRange
from .parabolic import DegenerationSpec, balance_lhs, require_balanced


def n_j(spec: DegenerationSpec) -> tuple[Fraction, Fraction]:
    """Lower ends of the Euler characteristic windows on X1 and X2."""
    require_balanced(spec)
    return tuple(
        Fraction(balance_lhs(spec.points_on(j), spec.r, ell), spec.k)
        for j, ell in ((1, spec.ell1), (2, spec.ell2))
    )


@dataclass(frozen=True)
class ComponentWindow:
    n1: Fraction
    n2: Fraction
    pairs: tuple[tuple[int, int], ...]

    @property
    def count(self) -> int:
        return len(self.pairs)


def chi_window(spec: DegenerationSpec) -> ComponentWindow:
    """Integer splittings chi1 + chi2 = chi + r with n_j <= chi_j <= n_j + r."""
    n1, n2 = n_j(spec)
    total = spec.chi + spec.r
    pairs = tuple(
        (c1, total - c1)
        for c1 in range(math.ceil(n1), math.floor(n1 + spec.r) + 1)
        if n2 <= total - c1 <= n2 + spec.r
    )
    return ComponentWindow(n1, n2, pairs)


class Polarization(str, enum.Enum):
    GENERIC = "Generic"
    NON_GENERIC = "NonGeneric"


@dataclass(frozen=True)
class PolarizationReport:
    kind: Polarization
    n1: Fraction
    n2: Fraction
    component_count: int
    # the stratum of non-locally-free sheaves misses the semistable locus
    w0_empty: bool

    @property
    def generic(self) -> bool:
        return self.kind is Polarization.GENERIC


def generic_polarization(spec: DegenerationSpec) -> PolarizationReport:
    window = chi_window(spec)
    generic = window.n1.denominator != 1 and window.n2.denominator != 1
    return PolarizationReport(
        Polarization.GENERIC if generic else Polarization.NON_GENERIC,
        window.n1,
        window.n2,
        window.count,
        generic,
    )


@dataclass(frozen=True)
class LocalType:
    """Completed stalk at the node is O^a + O1^b + O2^c."""

    a: int
    b: int
    c: int

    @property
    def r1(self) -> int:
        return self.a + self.b

    @property
    def r2(self) -> int:
        return self.a + self.c

    @property
    def fiber_dim(self) -> int:
        return self.a + self.b + self.c

    @property
    def locally_free(self) -> bool:
        return self.b == 0 and self.c == 0


def local_type(r1: int, r2: int, fiber_dim: int) -> LocalType:
    if min(r1, r2) < 0 or not max(r1, r2) <= fiber_dim <= r1 + r2:
        raise InfeasibleFiberDim(f"fiber dimension {fiber_dim} infeasible for ranks {(r1, r2)}")
    a = r1 + r2 - fiber_dim
    return LocalType(a, r1 - a, r2 - a)


def superadditivity_check(a_f: int, a_g: int, a_e: int) -> bool:
    """For 0 -> G -> F -> E -> 0 the free rank at the node is superadditive."""
    return a_f >= a_g + a_e


def gps_rank_correspondence(rank_q_x1: int, r: int) -> LocalType:
    """Local type of the sheaf obtained from a GPS whose x2-fiber maps isomorphically to Q."""
    if r <= 0 or not 0 <= rank_q_x1 <= r:
        raise RankOutOfRange(f"rank {rank_q_x1} of E_x1 -> Q outside [0, {r}]")
    return local_type(r, r, 2 * r - rank_q_x1)
