"""Node labels and the parabolic data they induce at the two preimages of the node."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .degeneration import n_j
from .errors import LabelOutOfRange
from .parabolic import (
    Component,
    DegenerationSpec,
    ParabolicPoint,
    balance_lhs,
    require_balanced,
)

NODE1_ID = "x1"
NODE2_ID = "x2"


@dataclass(frozen=True, order=True)
class NodeLabel:
    """Weakly decreasing r-tuple with entries in [0, k-1]."""

    mu: tuple[int, ...]

    def __post_init__(self):
        mu = tuple(int(x) for x in self.mu)
        object.__setattr__(self, "mu", mu)
        if not mu:
            raise LabelOutOfRange("empty node label")
        if any(a < b for a, b in zip(mu, mu[1:])):
            raise LabelOutOfRange(f"node label {mu} is not weakly decreasing")
        if mu[-1] < 0:
            raise LabelOutOfRange(f"node label {mu} has a negative entry")

    def check_level(self, k: int) -> None:
        if self.mu[0] > k - 1:
            raise LabelOutOfRange(f"node label {self.mu} exceeds k - 1 = {k - 1}")

    @property
    def rank(self) -> int:
        return len(self.mu)

    @property
    def total(self) -> int:
        return sum(self.mu)

    def jump_positions(self) -> tuple[tuple[int, int], ...]:
        """(r_i, d_i) for each strict descent mu_{r_i} > mu_{r_i + 1}."""
        return tuple(
            (i + 1, a - b) for i, (a, b) in enumerate(zip(self.mu, self.mu[1:])) if a != b
        )

    def __str__(self):
        return ",".join(map(str, self.mu))


def _point(point_id: str, component: Component, ranks: Sequence[int], ds: Sequence[int],
           base: int, alpha: int, r: int) -> ParabolicPoint:
    cum = list(ranks) + [r]
    flag_type = tuple(b - a for a, b in zip([0] + cum[:-1], cum))
    weights = tuple(itertools.accumulate(ds, initial=base))
    return ParabolicPoint(point_id, component, flag_type, weights, alpha)


def node_parabolic(label: NodeLabel, k: int, r: int) -> tuple[ParabolicPoint, ParabolicPoint]:
    """Parabolic data at x1 (on X1) and x2 (on X2) induced by a node label.

    At x2 the cumulative ranks are complemented and the jumps reversed, so the
    flag type at x2 is the reverse of the one at x1.
    """
    if label.rank != r:
        raise LabelOutOfRange(f"node label {label.mu} has length {label.rank}, expected {r}")
    label.check_level(k)
    mu = label.mu
    jumps = label.jump_positions()
    ranks = [ri for ri, _ in jumps]
    ds = [d for _, d in jumps]
    left = _point(NODE1_ID, Component.NODE1, ranks, ds, mu[-1], mu[-1], r)
    right = _point(
        NODE2_ID,
        Component.NODE2,
        [r - ri for ri in reversed(ranks)],
        list(reversed(ds)),
        mu[-1],
        k - mu[0],
        r,
    )
    for p in (left, right):
        p.validate(r, k)
    return left, right


def chi_mu(spec: DegenerationSpec, label: NodeLabel) -> tuple[Fraction, Fraction]:
    n1, n2 = n_j(spec)
    shift = Fraction(label.total, spec.k)
    return n1 + shift, n2 + spec.r - shift


@dataclass(frozen=True)
class NodeBalance:
    holds: bool
    side: int | None = None
    lhs: Fraction | None = None
    rhs: Fraction | None = None

    def __bool__(self):
        return self.holds


def verify_node_balance(spec: DegenerationSpec, label: NodeLabel) -> NodeBalance:
    """Balance condition on each side once the node preimage is marked."""
    require_balanced(spec)
    chis = chi_mu(spec, label)
    nodes = node_parabolic(label, spec.k, spec.r)
    for j, ell in ((1, spec.ell1), (2, spec.ell2)):
        lhs = Fraction(balance_lhs(spec.points_on(j) + (nodes[j - 1],), spec.r, ell))
        rhs = spec.k * chis[j - 1]
        if lhs != rhs:
            return NodeBalance(False, j, lhs, rhs)
    return NodeBalance(True)


# name kept for callers of the documented API
verify_3_3 = verify_node_balance


def enumerate_mu(k: int, r: int) -> tuple[NodeLabel, ...]:
    """All node labels of rank r at level k, lexicographically descending."""
    if k < 1 or r < 1:
        raise LabelOutOfRange("level and rank must be positive")
    return tuple(
        NodeLabel(mu) for mu in itertools.combinations_with_replacement(range(k - 1, -1, -1), r)
    )


@dataclass(frozen=True)
class CurveProblem:
    """Moduli problem on one smooth component: genus, rank, level, chi, ell, marked points."""

    genus: int
    r: int
    k: int
    chi: Fraction
    ell: int
    points: tuple[ParabolicPoint, ...]


@dataclass(frozen=True)
class FactorSummand:
    label: NodeLabel
    chi1: Fraction
    chi2: Fraction
    left_point: ParabolicPoint
    right_point: ParabolicPoint

    @property
    def admissible(self) -> bool:
        return self.chi1.denominator == 1 and self.chi2.denominator == 1

    def problems(self, spec: DegenerationSpec) -> tuple[CurveProblem, CurveProblem]:
        return (
            CurveProblem(spec.g1, spec.r, spec.k, self.chi1, spec.ell1,
                         spec.points_on(1) + (self.left_point,)),
            CurveProblem(spec.g2, spec.r, spec.k, self.chi2, spec.ell2,
                         spec.points_on(2) + (self.right_point,)),
        )


def factorization_summands(spec: DegenerationSpec) -> tuple[FactorSummand, ...]:
    require_balanced(spec)
    out = []
    for label in enumerate_mu(spec.k, spec.r):
        chi1, chi2 = chi_mu(spec, label)
        left, right = node_parabolic(label, spec.k, spec.r)
        out.append(FactorSummand(label, chi1, chi2, left, right))
    return tuple(out)
