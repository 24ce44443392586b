"""Integrable weights of sl_r at level k and their fusion rules.

Weights are stored in partition coordinates: a weakly decreasing tuple of
length ``r`` whose last entry is 0.  The level-k alcove is the set of such
tuples with first entry at most ``k``.

Fusion coefficients are computed with the Kac-Walton algorithm: the ordinary
tensor product is expanded with Littlewood-Richardson coefficients and every
constituent is folded into the level-k alcove by the shifted action of the
affine Weyl group, with signs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from ..errors import LabelOutOfRange

Weight = tuple[int, ...]


@dataclass(frozen=True, order=True)
class FusionLabel:
    """A normalized level-k dominant weight of sl_r."""

    weights: Weight
    level: int

    def __post_init__(self):
        w = tuple(int(x) for x in self.weights)
        object.__setattr__(self, "weights", w)
        if not is_alcove_weight(w, self.level):
            raise LabelOutOfRange(f"{w} is not a level-{self.level} alcove weight")

    @property
    def rank(self) -> int:
        return len(self.weights)

    def dual(self) -> "FusionLabel":
        return FusionLabel(dual_weight(self.weights), self.level)

    def __str__(self):
        return ",".join(map(str, self.weights))


def normalize(w: Sequence[int]) -> Weight:
    """Subtract the last entry so the weight ends in 0."""
    last = w[-1]
    return tuple(x - last for x in w)


def is_alcove_weight(w: Sequence[int], k: int) -> bool:
    if not w or w[-1] != 0:
        return False
    if any(a < b for a, b in zip(w, w[1:])):
        return False
    return w[0] <= k


def alcove(r: int, k: int) -> list[Weight]:
    """All level-k weights of sl_r, lexicographically descending."""
    if r == 1:
        return [(0,)]
    return [
        c + (0,)
        for c in itertools.combinations_with_replacement(range(k, -1, -1), r - 1)
    ]


def zero(r: int) -> Weight:
    return (0,) * r


def dual_weight(w: Sequence[int]) -> Weight:
    """Highest weight of the contragredient representation."""
    r = len(w)
    return tuple(w[0] - w[r - 1 - i] for i in range(r))


def simple_current(w: Sequence[int], k: int, power: int = 1) -> Weight:
    """Rotate ``w`` by the outer automorphism of the affine diagram.

    One step sends the gl-weight (w_1, ..., w_r) to (w_2, ..., w_r, w_1 - k)
    and renormalizes; this is what an elementary Hecke modification does to
    the parabolic weights at a point while lowering the degree by one.
    """
    w = tuple(w)
    r = len(w)
    for _ in range(power % r):
        w = normalize(w[1:] + (w[0] - k,))
    return w


def charge(w: Sequence[int]) -> int:
    return sum(w)


# -- Littlewood-Richardson ---------------------------------------------------


def lr_expand(lam: Sequence[int], mu: Sequence[int], max_rows: int) -> dict[Weight, int]:
    """Expand s_lam * s_mu in Schur functions with at most ``max_rows`` rows.

    Boxes labelled 1, 2, ... are added to ``lam`` one label at a time as
    horizontal strips; the reverse reading word must stay a lattice word,
    which for label ``i`` in row ``j`` reads

        #i in rows 1..j  <=  #(i-1) in rows 1..j-1.

    States carry the cumulative counts of the previous label so the lattice
    test is local.
    """
    lam = tuple(x for x in lam if x > 0)
    mu = tuple(x for x in mu if x > 0)
    if len(lam) > max_rows or len(mu) > max_rows:
        return {}
    base = tuple(lam) + (0,) * (max_rows - len(lam))
    # state: (shape, prefix sums of previous label per row) -> multiplicity
    states: dict[tuple[Weight, Weight], int] = {(base, (0,) * max_rows): 1}
    for label, count in enumerate(mu):
        nxt: dict[tuple[Weight, Weight], int] = {}
        for (shape, prev_cum), mult in states.items():
            for placed in _horizontal_strips(shape, count, prev_cum, first=label == 0):
                new_shape = tuple(s + p for s, p in zip(shape, placed))
                cum = tuple(itertools.accumulate(placed))
                key = (new_shape, cum)
                nxt[key] = nxt.get(key, 0) + mult
        states = nxt
    out: dict[Weight, int] = {}
    for (shape, _), mult in states.items():
        out[shape] = out.get(shape, 0) + mult
    return out


def _horizontal_strips(shape: Weight, count: int, prev_cum: Weight, first: bool):
    rows = len(shape)
    placed = [0] * rows

    def rec(j: int, remaining: int, cum: int):
        if j == rows:
            if remaining == 0:
                yield tuple(placed)
            return
        cap = remaining
        if j > 0:
            # horizontal strip: new row j may not pass the old row j-1
            cap = min(cap, shape[j - 1] - shape[j])
        if not first:
            # lattice condition against the previous label
            limit = prev_cum[j - 1] if j > 0 else 0
            cap = min(cap, limit - cum)
        for x in range(max(cap, -1), -1, -1):
            placed[j] = x
            yield from rec(j + 1, remaining - x, cum + x)
        placed[j] = 0

    yield from rec(0, count, 0)


# -- Kac-Walton --------------------------------------------------------------


def fold_into_alcove(w: Sequence[int], k: int) -> tuple[int, Weight | None]:
    """Shifted affine Weyl action: (sign, alcove weight) or (0, None) on a wall."""
    r = len(w)
    h = k + r
    x = [w[i] + (r - 1 - i) for i in range(r)]
    sign = 1
    while True:
        # bubble sort keeps track of the permutation sign
        for i in range(r):
            for j in range(r - 1 - i):
                if x[j] < x[j + 1]:
                    x[j], x[j + 1] = x[j + 1], x[j]
                    sign = -sign
        if any(x[j] == x[j + 1] for j in range(r - 1)):
            return 0, None
        spread = x[0] - x[-1]
        if spread == h:
            return 0, None
        if spread < h:
            break
        x[0], x[-1] = x[-1] + h, x[0] - h
        sign = -sign
    return sign, normalize(tuple(x[i] - (r - 1 - i) for i in range(r)))


@lru_cache(maxsize=None)
def fusion_product(a: Weight, b: Weight, k: int) -> tuple[tuple[Weight, int], ...]:
    """Level-k fusion a x b as sorted (weight, multiplicity) pairs."""
    r = len(a)
    acc: dict[Weight, int] = {}
    for nu, mult in lr_expand(a, b, r).items():
        sign, c = fold_into_alcove(normalize(nu), k)
        if sign:
            acc[c] = acc.get(c, 0) + sign * mult
    return tuple(sorted((c, m) for c, m in acc.items() if m))


def fusion_coeff(a: Sequence[int], b: Sequence[int], c: Sequence[int], k: int) -> int:
    """Dimension of genus-0 blocks with three insertions a, b, c."""
    a, b, c = tuple(a), tuple(b), tuple(c)
    if not (len(a) == len(b) == len(c)):
        raise LabelOutOfRange("labels of different rank")
    for w in (a, b, c):
        if not is_alcove_weight(w, k):
            raise LabelOutOfRange(f"{w} is not a level-{k} alcove weight")
    target = dual_weight(c)
    for w, m in fusion_product(a, b, k):
        if w == target:
            return m
    return 0


def iter_labels(labels: Iterable) -> Iterable[Weight]:
    for lab in labels:
        yield lab.weights if isinstance(lab, FusionLabel) else tuple(lab)
