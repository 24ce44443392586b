import itertools
import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import balanced_specs, empty_spec, point
from thetafactor.errors import LabelOutOfRange, NumericallyUnstable, UnconvertibleWeights
from thetafactor.mu_transform import NodeLabel, enumerate_mu, factorization_summands
from thetafactor.parabolic import DegenerationSpec, ParabolicPoint, Component
from thetafactor.verlinde import oracle
from thetafactor.verlinde.lie import (
    FusionLabel,
    alcove,
    dual_weight,
    fold_into_alcove,
    fusion_coeff,
    lr_expand,
    simple_current,
    zero,
)
from thetafactor.verlinde.oracle import DimQuery, RecursiveEngine, dim_direct, dim_recursive
from thetafactor.verlinde.report import (
    dual_label,
    factorization_report,
    mu_to_label,
    point_label,
    twist_label,
)


# -- weights and fusion ----------------------------------------------------------


def test_alcove_sizes():
    assert alcove(2, 3) == [(3, 0), (2, 0), (1, 0), (0, 0)]
    assert len(alcove(3, 2)) == 6
    assert len(alcove(4, 3)) == 20


def test_lr_expand_known_products():
    # s_1 * s_1 = s_2 + s_11
    assert lr_expand((1,), (1,), 3) == {(2, 0, 0): 1, (1, 1, 0): 1}
    # s_21 * s_21 in three rows: s_42 + s_411 + s_33 + 2 s_321 + s_222
    assert lr_expand((2, 1), (2, 1), 3) == {
        (4, 2, 0): 1, (4, 1, 1): 1, (3, 3, 0): 1, (3, 2, 1): 2, (2, 2, 2): 1,
    }


@given(st.lists(st.integers(0, 3), min_size=3, max_size=3), st.lists(st.integers(0, 3), min_size=3, max_size=3))
def test_lr_expand_dimension_count(a, b):
    # compare total box counts and commutativity
    a = sorted(a, reverse=True)
    b = sorted(b, reverse=True)
    ab = lr_expand(a, b, 3)
    assert ab == lr_expand(b, a, 3)
    assert all(sum(nu) == sum(a) + sum(b) for nu in ab)


def test_fold_hits_wall():
    assert fold_into_alcove((2, 0), 1) == (0, None)
    assert fold_into_alcove((3, 0), 1) == (-1, (1, 0))


@pytest.mark.parametrize(
    "r, k, a, b, c, expected",
    [
        (2, 1, (1, 0), (1, 0), (0, 0), 1),
        (2, 1, (1, 0), (1, 0), (1, 0), 0),
        (2, 2, (1, 0), (1, 0), (2, 0), 1),
        (2, 2, (2, 0), (2, 0), (0, 0), 1),
        (3, 4, (0, 0, 0), (0, 0, 0), (0, 0, 0), 1),
    ],
)
def test_fusion_coeff_examples(r, k, a, b, c, expected):
    assert fusion_coeff(a, b, c, k) == expected


@pytest.mark.parametrize("r, k", [(2, 3), (3, 2), (4, 1)])
def test_fusion_symmetry_and_duality(r, k):
    labels = alcove(r, k)
    for a, b, c in itertools.product(labels, repeat=3):
        n = fusion_coeff(a, b, c, k)
        assert n >= 0
        assert n == fusion_coeff(b, c, a, k) == fusion_coeff(b, a, c, k)
        assert n == fusion_coeff(dual_weight(a), dual_weight(b), dual_weight(c), k)


def test_fusion_label_validation():
    with pytest.raises(LabelOutOfRange):
        FusionLabel((3, 0), 2)
    with pytest.raises(LabelOutOfRange):
        FusionLabel((1, 2, 0), 3)


@pytest.mark.parametrize(
    "lam, k, expected",
    [((3, 0), 4, (3, 0)), ((2, 0, 0), 2, (2, 2, 0)), ((0, 0, 0), 1, (0, 0, 0))],
)
def test_dual_label(lam, k, expected):
    assert dual_label(FusionLabel(lam, k)).weights == expected


def test_simple_current_orbit():
    assert simple_current((0, 0), 3) == (3, 0)
    assert simple_current((0, 0, 0), 2, 1) == (2, 2, 0)
    assert simple_current((0, 0, 0), 2, 3) == (0, 0, 0)


# -- oracles ----------------------------------------------------------------------


@pytest.mark.parametrize("g, expected", [(1, 2), (2, 4), (3, 8)])
def test_level_one_sl2(g, expected):
    q = DimQuery(g, (), 2, 1)
    assert dim_direct(q) == dim_recursive(q) == expected


@pytest.mark.parametrize("k", range(1, 9))
def test_genus_one_sl2(k):
    assert dim_direct(DimQuery(1, (), 2, k)) == k + 1


def test_hand_recursion_sl2_level_one():
    assert dim_recursive(DimQuery(1, ((1, 0),), 2, 1)) == 0
    assert dim_recursive(DimQuery(2, (), 2, 1)) == 4


def test_three_point_base_case():
    q = DimQuery(0, ((1, 0), (1, 0), (2, 0)), 2, 2)
    assert dim_recursive(q) == fusion_coeff((1, 0), (1, 0), (2, 0), 2) == 1


def test_query_validation():
    with pytest.raises(LabelOutOfRange):
        DimQuery(0, ((3, 0),), 2, 2)


def test_direct_tolerance_guard(monkeypatch):
    monkeypatch.setattr(oracle, "verlinde_sum", lambda q: 2.4 + 0j)
    with pytest.raises(NumericallyUnstable):
        dim_direct(DimQuery(1, (), 2, 1))


GRID = [(2, k, 3) for k in range(1, 5)] + [(3, k, 3) for k in (1, 2)]


@pytest.mark.parametrize("r, k, gmax", GRID)
def test_oracles_agree(r, k, gmax):
    labels = alcove(r, k)
    for g in range(gmax + 1):
        for n in range(3):
            for labs in itertools.combinations_with_replacement(labels, n):
                q = DimQuery(g, labs, r, k)
                d = dim_direct(q)
                assert dim_recursive(q, "handles") == d
                assert dim_recursive(q, "separating") == d


def test_memo_keys_drop_vacuum():
    eng = RecursiveEngine(2, 2)
    assert eng.key("handles", 1, [(0, 0), (1, 0)]) == eng.key("handles", 1, [(1, 0)])


def test_cache_round_trip(tmp_path):
    eng = RecursiveEngine(2, 2)
    value = eng.dim(2, [(2, 0)])
    eng.save(tmp_path)
    fresh = RecursiveEngine(2, 2)
    fresh.load(tmp_path)
    assert fresh.memo == eng.memo
    assert fresh.dim(2, [(2, 0)]) == value
    assert isinstance(json.loads((tmp_path / "sl2_k2.json").read_text()), list)


# -- report -------------------------------------------------------------------------


def test_mu_to_label():
    lam, charge = mu_to_label(NodeLabel((3, 1, 1)), 4)
    assert lam.weights == (2, 0, 0) and charge.total == 5
    lam, charge = mu_to_label(NodeLabel((0, 0)), 1)
    assert lam.weights == (0, 0) and charge.total == 0
    lam, charge = mu_to_label(NodeLabel((2, 2, 2)), 3)
    assert lam.weights == (0, 0, 0) and charge.total == 6


@pytest.mark.parametrize(
    "r, k, g1, g2, ell, chi, lhs",
    [(2, 1, 1, 1, 0, 0, 4), (2, 1, 1, 1, 2, 4, 4), (2, 2, 1, 1, 2, 2, 10), (3, 1, 1, 1, 0, 0, 9)],
)
def test_factorization_examples(r, k, g1, g2, ell, chi, lhs):
    rep = factorization_report(empty_spec(r, k, ell, chi, g1, g2))
    assert rep.lhs == rep.lhs_direct == lhs
    assert rep.equal and rep.rhs == lhs


def test_factorization_level_one_rows():
    rep = factorization_report(empty_spec(2, 1, 0, 0, 1, 1))
    assert [(row.mu, row.product) for row in rep.rows] == [((0, 0), 4)]


@given(balanced_specs)
def test_factorization_holds_on_random_specs(spec):
    if spec.g1 + spec.g2 > 2 and spec.r * spec.k > 8:
        spec = DegenerationSpec(min(spec.g1, 1), min(spec.g2, 1), spec.c1, spec.c2, spec.r, spec.k,
                                spec.chi, spec.ell_total, spec.points)
    rep = factorization_report(spec)
    assert rep.equal, rep.diagnostics


@given(balanced_specs)
def test_node_insertions_are_dual(spec):
    for s in factorization_summands(spec):
        lam, _ = mu_to_label(s.label, spec.k)
        assert point_label(s.left_point, spec.k) == lam
        assert point_label(s.right_point, spec.k) == dual_label(lam)


def test_degree_twist_is_needed(monkeypatch):
    assert twist_label(1, 2, 2).weights == (2, 0)
    assert twist_label(2, 2, 2).weights == (0, 0)
    spec = empty_spec(2, 2, 2, 2)
    rep = factorization_report(spec)
    assert (rep.lhs, rep.rhs) == (10, 10)
    # dropping the twist double counts: the odd-chi sides lose their extra insertion
    import thetafactor.verlinde.report as report

    monkeypatch.setattr(report, "twist_label", lambda chi, r, k: FusionLabel(zero(r), k))
    untwisted = factorization_report(spec)
    assert (untwisted.lhs, untwisted.rhs) == (10, 18)


def test_interior_point_label():
    p = ParabolicPoint("p", Component.C1, (1, 2), (1, 3), 0)
    assert point_label(p, 4).weights == (2, 0, 0)


def test_unconvertible_node_data():
    p = ParabolicPoint("x", Component.NODE1, (1, 1), (0, 3), 1)
    with pytest.raises(UnconvertibleWeights):
        point_label(p, 2)


def test_report_is_parallel_safe():
    spec = empty_spec(3, 2, 0, 0, 1, 1)
    serial = factorization_report(spec)
    parallel = factorization_report(spec, workers=4)
    assert serial == parallel
