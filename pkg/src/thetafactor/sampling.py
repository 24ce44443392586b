"""Seeded random generation of valid parabolic data and balanced specs."""

from __future__ import annotations

import random

from .parabolic import Component, DegenerationSpec, ParabolicPoint, balance_lhs

POLARIZATIONS = ((1, 1), (1, 2), (2, 1), (1, 3), (2, 3))


def random_point(rng: random.Random, point_id: str, component: Component, r: int, k: int) -> ParabolicPoint:
    """Uniform-ish valid interior point; needs k >= 2 (weights live in (0, k))."""
    # number of blocks is limited both by r and by the k - 1 available weights
    blocks = rng.randint(1, min(r, k - 1))
    cuts = sorted(rng.sample(range(1, r), blocks - 1))
    flag_type = tuple(b - a for a, b in zip([0] + cuts, cuts + [r]))
    weights = tuple(sorted(rng.sample(range(1, k), blocks)))
    alpha = rng.randrange(k - weights[-1] + weights[0])
    return ParabolicPoint(point_id, component, flag_type, weights, alpha)


def random_spec(
    rng: random.Random,
    max_rank: int = 4,
    max_level: int = 5,
    max_points: int = 3,
    max_genus: int = 2,
    max_ell_steps: int = 3,
) -> DegenerationSpec:
    """A balanced spec; rejection-samples until k divides the balance left side."""
    while True:
        r = rng.randint(1, max_rank)
        k = rng.randint(1, max_level)
        c1, c2 = rng.choice(POLARIZATIONS)
        count = rng.randint(0, max_points) if k >= 2 else 0
        points = tuple(
            random_point(rng, f"p{i}", rng.choice((Component.C1, Component.C2)), r, k)
            for i in range(count)
        )
        ell_total = (c1 + c2) * rng.randint(-max_ell_steps, max_ell_steps)
        lhs = balance_lhs(points, r, ell_total)
        if lhs % k:
            continue
        return DegenerationSpec(
            rng.randint(0, max_genus), rng.randint(0, max_genus), c1, c2, r, k, lhs // k, ell_total, points
        )


def spec_grid(count: int, seed: int = 0, **kwargs) -> list[DegenerationSpec]:
    rng = random.Random(seed)
    return [random_spec(rng, **kwargs) for _ in range(count)]
