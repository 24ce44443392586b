"""Semistability certificates for parabolic sheaves and GPS on the nodal curve.

Margins compare modified parabolic Euler characteristics rather than slopes:
``margin = par_chi_m(E) / r(E) * r(F) - par_chi_m(F)``.  A positive margin
means the subobject does not destabilize, zero means equality, negative means
the subobject destabilizes.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import degeneration
from .errors import PreconditionViolated, QImageOverflow, RankOverflow, ZeroRank
from .parabolic import (
    DegenerationSpec,
    SheafNumerics,
    par_chi_m,
    rank_of,
    sheaf_rank,
)


class VerdictClass(str, enum.Enum):
    STABLE = "Stable"
    STRICTLY_SEMISTABLE = "StrictlySemistable"
    UNSTABLE = "Unstable"


@dataclass(frozen=True)
class Verdict:
    verdict_class: VerdictClass
    margin: Fraction

    @classmethod
    def from_margin(cls, margin: Fraction) -> "Verdict":
        if margin > 0:
            return cls(VerdictClass.STABLE, margin)
        if margin == 0:
            return cls(VerdictClass.STRICTLY_SEMISTABLE, margin)
        return cls(VerdictClass.UNSTABLE, margin)

    @property
    def semistable(self) -> bool:
        return self.margin >= 0


@dataclass(frozen=True)
class GpsProfile:
    """Numerics of a GPS (or sub-GPS): the sheaf on the normalization plus dim of its image in Q.

    ``dim_q`` is the dimension of the ambient quotient Q and is only
    meaningful on the ambient profile.
    """

    base: SheafNumerics
    dim_q_image: int
    dim_q: int | None = None

    def __post_init__(self):
        if self.dim_q_image < 0 or (self.dim_q is not None and self.dim_q < 0):
            raise QImageOverflow("Q dimensions must be nonnegative")
        if self.dim_q is not None and self.dim_q_image > self.dim_q:
            raise QImageOverflow(f"image dimension {self.dim_q_image} exceeds dim Q = {self.dim_q}")
        # fibers at x1 and x2 have dimensions r1 and r2
        if self.dim_q_image > sum(self.base.rank_pair):
            raise QImageOverflow(
                f"image dimension {self.dim_q_image} exceeds fiber dimension {sum(self.base.rank_pair)}"
            )


def _check_ranks(sub: SheafNumerics, ambient: SheafNumerics) -> None:
    if any(s > a for s, a in zip(sub.rank_pair, ambient.rank_pair)):
        raise RankOverflow(f"sub rank {sub.rank_pair} exceeds ambient rank {ambient.rank_pair}")
    if sub.rank_pair == (0, 0) or ambient.rank_pair == (0, 0):
        raise ZeroRank("torsion profiles are not certified")


def margin(value_amb: Fraction, rank_amb: Fraction, value_sub: Fraction, rank_sub: Fraction) -> Fraction:
    return Fraction(value_amb) / rank_amb * rank_sub - Fraction(value_sub)


def check_parabolic(sub: SheafNumerics, ambient: SheafNumerics, spec: DegenerationSpec) -> Verdict:
    _check_ranks(sub, ambient)
    return Verdict.from_margin(
        margin(par_chi_m(ambient, spec), sheaf_rank(ambient, spec), par_chi_m(sub, spec), sheaf_rank(sub, spec))
    )


@dataclass(frozen=True)
class Certificate:
    """Outcome over a finite list of subobjects: overall verdict and the worst profile."""

    verdict: Verdict
    worst_index: int | None
    verdicts: tuple[Verdict, ...]

    @property
    def semistable(self) -> bool:
        return self.verdict.semistable


def certify(subs: Sequence[SheafNumerics], ambient: SheafNumerics, spec: DegenerationSpec) -> Certificate:
    """Check every supplied subobject; report the minimum-margin one (first on ties)."""
    verdicts = tuple(check_parabolic(s, ambient, spec) for s in subs)
    if not verdicts:
        return Certificate(Verdict(VerdictClass.STABLE, Fraction(0)), None, ())
    worst = min(range(len(verdicts)), key=lambda i: (verdicts[i].margin, i))
    return Certificate(verdicts[worst], worst, verdicts)


def check_gps(sub: GpsProfile, ambient: GpsProfile, spec: DegenerationSpec) -> Verdict:
    if ambient.dim_q is None:
        raise QImageOverflow("ambient GPS profile needs dim_q")
    if sub.dim_q_image > ambient.dim_q:
        raise QImageOverflow(f"sub image dimension {sub.dim_q_image} exceeds dim Q = {ambient.dim_q}")
    _check_ranks(sub.base, ambient.base)
    return Verdict.from_margin(
        gps_margin(
            par_chi_m(ambient.base, spec),
            ambient.dim_q,
            sheaf_rank(ambient.base, spec),
            par_chi_m(sub.base, spec),
            sub.dim_q_image,
            sheaf_rank(sub.base, spec),
        )
    )


def gps_margin(pcm_amb, dim_q, rank_amb, pcm_sub, dim_q_sub, rank_sub) -> Fraction:
    """(par_chi_m(E) - dim Q)/r(E) * r(E') - (par_chi_m(E') - dim Q^{E'})."""
    return margin(Fraction(pcm_amb) - dim_q, rank_amb, Fraction(pcm_sub) - dim_q_sub, rank_sub)


def mu_g(deg: int, dim_q: int, rank: int) -> Fraction:
    if rank <= 0:
        raise ZeroRank("GPS slope needs positive rank")
    return Fraction(deg - dim_q, rank)


@dataclass(frozen=True)
class ChiInterval:
    lower: Fraction
    upper: Fraction

    def integers(self) -> tuple[int, ...]:
        return tuple(range(math.ceil(self.lower), math.floor(self.upper) + 1))

    def __contains__(self, x) -> bool:
        return self.lower <= x <= self.upper


def gps_chi_bounds(spec: DegenerationSpec, dim_q_e1: int, dim_q_e2: int) -> tuple[ChiInterval, ChiInterval]:
    """Euler characteristic windows for E1, E2 forced by GPS semistability."""
    r = spec.r
    for d in (dim_q_e1, dim_q_e2):
        if not 0 <= d <= r:
            raise QImageOverflow(f"image dimension {d} outside [0, {r}]")
    n1, n2 = degeneration.n_j(spec)
    return (
        ChiInterval(n1 + r - dim_q_e2, n1 + dim_q_e1),
        ChiInterval(n2 + r - dim_q_e1, n2 + dim_q_e2),
    )


# -- slope decomposition across the node --------------------------------------


@dataclass(frozen=True)
class GluingInstance:
    """Values entering the slope decomposition of a subsheaf F of a glued bundle E.

    ``chi_*`` are modified parabolic Euler characteristics of E, E1(-x0), E2,
    F, F1 (rank (r1, 0)) and F2 (rank (0, r2)).  ``level`` and ``mass1``,
    ``mass2`` (the sums of a_{l+1} + alpha over each side's points) determine the
    m-correction used to pass to unmodified slopes.
    """

    r: int
    r1: int
    r2: int
    c1: int
    c2: int
    chi_e: Fraction
    chi_e1_twisted: Fraction
    chi_e2: Fraction
    chi_f: Fraction
    chi_f1: Fraction
    chi_f2: Fraction
    level: int = 1
    mass1: Fraction = Fraction(0)
    mass2: Fraction = Fraction(0)


def _m(ranks: tuple[int, int], inst: GluingInstance) -> Fraction:
    rf = rank_of(*ranks, inst.c1, inst.c2)
    return ((rf - ranks[0]) * Fraction(inst.mass1) + (rf - ranks[1]) * Fraction(inst.mass2)) / inst.level


def gluing_lines(inst: GluingInstance) -> tuple[Fraction, ...]:
    """The five successive expressions of the decomposition; all must agree."""
    r, r1, r2 = inst.r, inst.r1, inst.r2
    if not (0 <= r1 <= r and 0 <= r2 <= r and r1 + r2 > 0 and r > 0):
        raise PreconditionViolated(f"ranks (r={r}, r1={r1}, r2={r2}) out of range")
    if inst.c1 <= 0 or inst.c2 <= 0 or inst.level <= 0:
        raise PreconditionViolated("polarization and level must be positive")
    pe, pe1, pe2 = (Fraction(x) for x in (inst.chi_e, inst.chi_e1_twisted, inst.chi_e2))
    pf, pf1, pf2 = (Fraction(x) for x in (inst.chi_f, inst.chi_f1, inst.chi_f2))
    if pf != pf1 + pf2:
        raise PreconditionViolated("par_chi_m(F) != par_chi_m(F1) + par_chi_m(F2)")
    if pe1 + pe2 != pe:
        raise PreconditionViolated("par_chi_m(E1(-x0)) + par_chi_m(E2) != par_chi_m(E)")
    if (r1 == 0 and pf1 != 0) or (r2 == 0 and pf2 != 0):
        raise PreconditionViolated("a zero-rank piece must have zero par_chi_m")
    a1 = Fraction(inst.c1, inst.c1 + inst.c2)
    a2 = Fraction(inst.c2, inst.c1 + inst.c2)
    rf = a1 * r1 + a2 * r2

    def slope(value: Fraction, rank: int) -> Fraction:
        return value / rank if rank else Fraction(0)

    line0 = pe / r - pf / rf
    line1 = pe1 / r - pf1 / rf + pe2 / r - pf2 / rf
    line2 = (a1 * r1 * pe1 - r * pf1 + a2 * r2 * pe1) / (rf * r) + (
        a2 * r2 * pe2 - r * pf2 + a1 * r1 * pe2
    ) / (rf * r)
    line3 = (
        r1 / rf * (slope(pe1, r) - slope(pf1, r1))
        + r2 / rf * (slope(pe2, r) - slope(pf2, r2))
        + (a2 * (r2 - r1) * pe1 + a1 * (r1 - r2) * pe2) / (rf * r)
    )
    # unmodified slopes: strip m of a rank-(s, 0) or (0, s) sheaf
    pmu_e1 = (pe1 - _m((r, 0), inst)) / r
    pmu_f1 = slope(pf1 - _m((r1, 0), inst), r1) if r1 else Fraction(0)
    pmu_e2 = (pe2 - _m((0, r), inst)) / r
    pmu_f2 = slope(pf2 - _m((0, r2), inst), r2) if r2 else Fraction(0)
    pe1_untwisted = pe1 + r
    line4 = (
        r1 / rf * (pmu_e1 - pmu_f1)
        + r2 / rf * (pmu_e2 - pmu_f2)
        + (r1 - r2) * (a1 * pe + r - pe1_untwisted) / (rf * r)
    )
    return line0, line1, line2, line3, line4


def verify_gluing_identity(inst: GluingInstance) -> Fraction:
    """Sum of |line_i - line_0|; zero exactly when the decomposition holds."""
    lines = gluing_lines(inst)
    return sum((abs(x - lines[0]) for x in lines[1:]), Fraction(0))

