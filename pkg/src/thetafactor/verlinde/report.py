"""Dimension check of the node factorization against the Verlinde oracle.

Every single-curve problem is reduced to an sl_r conformal-block query:

* a marked point with parabolic data (n, a, alpha) contributes the level-k
  weight ``normalize(alpha + a_{l+1} - a_i repeated n_i times)``;
* the degree class of the bundle enters through one extra insertion
  ``sigma^t(0)`` of the simple current, with ``t = chi mod r``.  Without it
  the sum over node labels does not reproduce the left-hand side once
  ``r`` does not divide ``chi``.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ..errors import NumericallyUnstable, UnconvertibleWeights
from ..mu_transform import CurveProblem, FactorSummand, NodeLabel, factorization_summands
from ..parabolic import DegenerationSpec, ParabolicPoint, require_balanced
from .lie import FusionLabel, Weight, dual_weight, is_alcove_weight, normalize, simple_current, zero
from .oracle import DEFAULT_TOLERANCE, DimQuery, dim_direct, dim_recursive


@dataclass(frozen=True)
class Charge:
    total: int
    level: int
    rank: int


def mu_to_label(label: NodeLabel, k: int) -> tuple[FusionLabel, Charge]:
    label.check_level(k)
    return FusionLabel(normalize(label.mu), k), Charge(label.total, k, label.rank)


def dual_label(lam: FusionLabel) -> FusionLabel:
    return lam.dual()


def point_label(p: ParabolicPoint, k: int) -> FusionLabel:
    w = normalize(p.gl_weight())
    if not is_alcove_weight(w, k):
        raise UnconvertibleWeights(f"{p.point_id}: weight {w} lies outside the level-{k} alcove")
    return FusionLabel(w, k)


def twist_label(chi: int, r: int, k: int) -> FusionLabel:
    return FusionLabel(simple_current(zero(r), k, chi % r), k)


def problem_query(genus: int, points: Sequence[ParabolicPoint], chi: int, r: int, k: int) -> DimQuery:
    labels = [point_label(p, k).weights for p in points]
    t = twist_label(chi, r, k).weights
    if t != zero(r):
        labels.append(t)
    return DimQuery(genus, tuple(labels), r, k)


def curve_query(problem: CurveProblem) -> DimQuery:
    return problem_query(problem.genus, problem.points, int(problem.chi), problem.r, problem.k)


@dataclass(frozen=True)
class SummandRow:
    mu: tuple[int, ...]
    chi1: Fraction
    chi2: Fraction
    admissible: bool
    label: Weight
    dual: Weight
    dim_left: int
    dim_right: int

    @property
    def product(self) -> int:
        return self.dim_left * self.dim_right


@dataclass(frozen=True)
class FactorizationReport:
    lhs: int
    lhs_direct: int | None
    rows: tuple[SummandRow, ...]
    diagnostics: tuple[str, ...] = field(default=())

    @property
    def rhs(self) -> int:
        return sum(row.product for row in self.rows)

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs and (self.lhs_direct is None or self.lhs_direct == self.lhs)


def _dim(q: DimQuery, method: str, tolerance: float) -> int:
    if method == "direct":
        return dim_direct(q, tolerance)
    return dim_recursive(q)


def _row(spec: DegenerationSpec, s: FactorSummand, method: str, tolerance: float) -> SummandRow:
    lam, _ = mu_to_label(s.label, spec.k)
    left_label = point_label(s.left_point, spec.k)
    right_label = point_label(s.right_point, spec.k)
    if left_label != lam or right_label != dual_label(lam):
        raise AssertionError(f"node data for {s.label.mu} is not a dual pair")
    if not s.admissible:
        return SummandRow(s.label.mu, s.chi1, s.chi2, False, lam.weights, right_label.weights, 0, 0)
    left, right = s.problems(spec)
    d1 = _dim(curve_query(left), method, tolerance)
    d2 = _dim(curve_query(right), method, tolerance) if d1 else 0
    return SummandRow(s.label.mu, s.chi1, s.chi2, True, lam.weights, right_label.weights, d1, d2)


def factorization_report(
    spec: DegenerationSpec,
    method: str = "recursive",
    cross_check: bool = True,
    workers: int = 1,
    tolerance: float = DEFAULT_TOLERANCE,
) -> FactorizationReport:
    """Compare the smooth-curve dimension with the sum over node labels.

    ``method`` picks the oracle for the summands ("recursive" or "direct"); with
    ``cross_check`` the left-hand side is computed both ways.
    """
    if method not in ("recursive", "direct"):
        raise ValueError(f"unknown method {method!r}")
    require_balanced(spec)
    lhs_query = problem_query(spec.g1 + spec.g2, spec.points, spec.chi, spec.r, spec.k)
    lhs = _dim(lhs_query, method, tolerance)
    other = "direct" if method == "recursive" else "recursive"
    lhs_other = None
    diagnostics = []
    if cross_check:
        try:
            lhs_other = _dim(lhs_query, other, tolerance)
        except NumericallyUnstable as exc:
            diagnostics.append(f"cross-check skipped: {exc}")
    summands = factorization_summands(spec)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = tuple(pool.map(lambda s: _row(spec, s, method, tolerance), summands))
    else:
        rows = tuple(_row(spec, s, method, tolerance) for s in summands)
    if spec.r > 1:
        diagnostics.append(
            "node labels give sl weights with lambda_1 <= k - 1; the remaining alcove "
            "weights are reached through the degree twist"
        )
    twist = twist_label(spec.chi, spec.r, spec.k)
    if twist.weights != zero(spec.r):
        diagnostics.append(f"degree twist inserted on the smooth curve: {twist}")
    report = FactorizationReport(lhs, lhs_other, rows, tuple(diagnostics))
    if not report.equal:
        report = FactorizationReport(
            lhs, lhs_other, rows, tuple(diagnostics) + (f"mismatch: lhs {lhs} rhs {report.rhs}",)
        )
    return report
