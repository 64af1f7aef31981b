"""Stencil examples, quadratic-form hand values, and operator identities
for finitely supported lattice functions."""

from __future__ import annotations

import numpy as np
import pytest

from lattice_hardy import lattice_ops as lo
from lattice_hardy.errors import DomainError
from lattice_hardy.lattice_ops import LatticeFunction


def _random_function(dim: int, radius: int, seed: int, *,
                     integer: bool = False,
                     complex_valued: bool = False,
                     zero_origin: bool = False) -> LatticeFunction:
    """Dense random function on the ell-infinity ball of the given radius."""
    rng = np.random.default_rng(seed)
    vals = {}
    for n in np.ndindex(*[2 * radius + 1] * dim):
        idx = tuple(int(c) - radius for c in n)
        if zero_origin and idx == (0,) * dim:
            continue
        if integer:
            vals[idx] = float(rng.integers(-5, 6))
        elif complex_valued:
            vals[idx] = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        else:
            vals[idx] = float(rng.uniform(-1, 1))
    return LatticeFunction(dim, vals)


# -- construction -------------------------------------------------------


def test_constructor_prunes_exact_zeros():
    u = LatticeFunction(2, {(0, 0): 0.0, (1, 0): 2.0})
    assert u.support() == [(1, 0)]
    assert len(u) == 1
    assert u[(0, 0)] == 0.0


def test_constructor_rejects_bad_dim_and_index():
    with pytest.raises(ValueError):
        LatticeFunction(0)
    with pytest.raises(ValueError):
        LatticeFunction(2, {(0,): 1.0})


def test_delta_constructor():
    u = LatticeFunction.delta(3, (0, 1, 0))
    assert u.values == {(0, 1, 0): 1.0}


# -- backward difference ------------------------------------------------


def test_backward_difference_of_point_mass_1d():
    u = LatticeFunction.delta(1, (0,))
    assert lo.backward_difference(u, 1).values == {(0,): 1.0, (1,): -1.0}


def test_backward_difference_of_point_mass_2d_second_axis():
    u = LatticeFunction.delta(2, (1, 0))
    out = lo.backward_difference(u, 2)
    assert out.values == {(1, 0): 1.0, (1, 1): -1.0}


def test_backward_difference_axis_out_of_range():
    u = LatticeFunction.delta(1, (0,))
    for j in (0, 2, -1):
        with pytest.raises(ValueError):
            lo.backward_difference(u, j)


def test_backward_difference_kills_constants_in_the_interior():
    const = LatticeFunction(2, {tuple(c - 3 for c in n): 1.0
                                for n in np.ndindex(7, 7)})
    out = lo.backward_difference(const, 1)
    for n in np.ndindex(5, 5):
        idx = tuple(int(c) - 2 for c in n)
        assert out[idx] == 0.0


# -- Laplacian ----------------------------------------------------------


def test_laplacian_point_mass_1d():
    u = LatticeFunction.delta(1, (0,))
    out = lo.apply_laplacian(u)
    assert out.values == {(-1,): -1.0, (0,): 2.0, (1,): -1.0}


def test_laplacian_point_mass_3d():
    u = LatticeFunction.delta(3, (0, 0, 0))
    out = lo.apply_laplacian(u)
    assert out[(0, 0, 0)] == 6.0
    neighbors = [n for n in out.values if n != (0, 0, 0)]
    assert len(neighbors) == 6
    assert all(out[n] == -1.0 for n in neighbors)
    assert all(sum(abs(c) for c in n) == 1 for n in neighbors)


def test_laplacian_annihilates_constants_in_the_interior():
    const = LatticeFunction(2, {tuple(c - 3 for c in n): 1.0
                                for n in np.ndindex(7, 7)})
    out = lo.apply_laplacian(const)
    for n in np.ndindex(5, 5):
        idx = tuple(int(c) - 2 for c in n)
        assert out[idx] == 0.0


def test_bilaplacian_point_mass_1d():
    u = LatticeFunction.delta(1, (0,))
    out = lo.apply_laplacian_power(u, 2)
    assert out.values == {(-2,): 1.0, (-1,): -4.0, (0,): 6.0,
                          (1,): -4.0, (2,): 1.0}


def test_laplacian_power_zero_is_identity_and_negative_rejected():
    u = _random_function(2, 1, 3)
    assert lo.apply_laplacian_power(u, 0) == u
    with pytest.raises(ValueError):
        lo.apply_laplacian_power(u, -1)


def test_laplacian_power_support_radius():
    u = LatticeFunction.delta(2, (0, 0))
    for k in (1, 2, 3):
        out = lo.apply_laplacian_power(u, k)
        reach = max(sum(abs(c) for c in n) for n in out.values)
        assert reach == k  # the stencil reaches exactly k steps in ell-1
        assert out[(k, 0)] != 0.0


def test_laplacian_power_matches_iterated_single_applications():
    u = _random_function(2, 2, 11)
    once = lo.apply_laplacian(lo.apply_laplacian(lo.apply_laplacian(u)))
    assert lo.apply_laplacian_power(u, 3) == once


def test_laplacian_equals_sum_of_difference_compositions():
    # Delta = sum_j D_j* D_j with (D_j* v)(n) = v(n) - v(n + e_j).
    u = _random_function(2, 2, 5, integer=True)
    total: dict = {}
    for j in range(1, 3):
        w = lo.backward_difference(u, j)
        for n, v in w.values.items():
            total[n] = total.get(n, 0.0) + v
            m = n[:j - 1] + (n[j - 1] - 1,) + n[j:]
            total[m] = total.get(m, 0.0) - v
    assert LatticeFunction(2, total) == lo.apply_laplacian(u)


def test_linearity_exact_on_integer_functions():
    u = _random_function(2, 2, 7, integer=True)
    v = _random_function(2, 2, 8, integer=True)
    left = lo.apply_laplacian(2.0 * u + (-3.0) * v)
    right = 2.0 * lo.apply_laplacian(u) + (-3.0) * lo.apply_laplacian(v)
    assert left == right


def test_translation_invariance_of_forms():
    u = _random_function(3, 1, 13)
    shift = (2, -5, 1)
    v = LatticeFunction(3, {tuple(a + b for a, b in zip(n, shift)): c
                            for n, c in u.values.items()})
    for k in (0, 1, 2):
        assert lo.dirichlet_form(v, k) == pytest.approx(
            lo.dirichlet_form(u, k), rel=1e-13)
        assert lo.rellich_form(v, k) == pytest.approx(
            lo.rellich_form(u, k), rel=1e-13)
    assert lo.sum_sq(v) == pytest.approx(lo.sum_sq(u), rel=1e-13)


# -- adjoints and symmetry ----------------------------------------------


def test_summation_by_parts():
    u = _random_function(2, 2, 21, complex_valued=True)
    v = _random_function(2, 2, 22, complex_valued=True)
    for j in (1, 2):
        # forward difference (D_j* v)(n) = v(n) - v(n + e_j)
        adj: dict = {}
        for n, c in v.values.items():
            adj[n] = adj.get(n, 0.0) + c
            m = n[:j - 1] + (n[j - 1] - 1,) + n[j:]
            adj[m] = adj.get(m, 0.0) - c
        lhs = lo.inner(lo.backward_difference(u, j), v)
        rhs = lo.inner(u, LatticeFunction(2, adj))
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))


def test_laplacian_is_symmetric():
    u = _random_function(3, 1, 31, complex_valued=True)
    v = _random_function(3, 1, 32, complex_valued=True)
    lhs = lo.inner(lo.apply_laplacian(u), v)
    rhs = lo.inner(u, lo.apply_laplacian(v))
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))


def test_forms_equal_operator_inner_products():
    # sum |D Delta^k u|^2 = <Delta^{2k+1} u, u>, sum |Delta^k u|^2
    # = <Delta^{2k} u, u>: both forms are realized by the operator powers.
    u = _random_function(2, 2, 41)
    for k in (0, 1):
        lhs_d = lo.dirichlet_form(u, k)
        rhs_d = float(np.real(lo.inner(lo.apply_laplacian_power(u, 2 * k + 1), u)))
        assert lhs_d == pytest.approx(rhs_d, rel=1e-12)
        lhs_r = lo.rellich_form(u, k)
        rhs_r = float(np.real(lo.inner(lo.apply_laplacian_power(u, 2 * k), u)))
        assert lhs_r == pytest.approx(rhs_r, rel=1e-12)


# -- quadratic forms: hand values ----------------------------------------


def test_dirichlet_form_point_mass_3d_order_zero():
    u = LatticeFunction.delta(3, (1, 0, 0))
    assert lo.dirichlet_form(u, 0) == pytest.approx(6.0, abs=0)


def test_rellich_form_point_mass_1d_order_one():
    u = LatticeFunction.delta(1, (0,))
    assert lo.rellich_form(u, 1) == pytest.approx(6.0, abs=0)


def test_rellich_form_order_zero_is_plain_sum_of_squares():
    u = _random_function(2, 2, 51)
    assert lo.rellich_form(u, 0) == pytest.approx(lo.sum_sq(u), rel=1e-14)


def test_forms_reject_negative_order():
    u = LatticeFunction.delta(1, (0,))
    with pytest.raises(ValueError):
        lo.dirichlet_form(u, -1)
    with pytest.raises(ValueError):
        lo.rellich_form(u, -1)


# -- weighted norm -------------------------------------------------------


def test_weighted_norm_of_sphere_indicator_is_2d():
    for d in (1, 2, 3, 4):
        sphere = lo.unit_sphere_indicator(d)
        for s in (0, 1, 2, 4):
            assert lo.weighted_norm_sq(sphere, s) == pytest.approx(
                2.0 * d, abs=1e-13)


def test_weighted_norm_point_mass_at_distance_two():
    u = LatticeFunction.delta(1, (2,))
    assert lo.weighted_norm_sq(u, 2) == pytest.approx(0.25, abs=0)
    assert lo.weighted_norm_sq(u, 4) == pytest.approx(1.0 / 16.0, abs=0)
    assert lo.weighted_norm_sq(u, 1) == pytest.approx(0.5, abs=1e-16)


def test_weighted_norm_excludes_origin_for_zero_exponent():
    u = LatticeFunction.delta(2, (0, 0))
    assert lo.weighted_norm_sq(u, 0) == 0.0


def test_weighted_norm_rejects_origin_mass_for_singular_weight():
    u = LatticeFunction.delta(2, (0, 0))
    with pytest.raises(DomainError):
        lo.weighted_norm_sq(u, 2)


def test_unit_sphere_indicator_examples():
    assert lo.unit_sphere_indicator(1).values == {(-1,): 1.0, (1,): 1.0}
    two = lo.unit_sphere_indicator(2)
    assert two.values == {(1, 0): 1.0, (-1, 0): 1.0,
                          (0, 1): 1.0, (0, -1): 1.0}


# -- simple d-power upper bounds -----------------------------------------


def test_operator_norm_upper_bounds_random():
    rng_seeds = range(6)
    for d in (2, 3):
        for seed in rng_seeds:
            u = _random_function(d, 1, 100 + seed)
            base = lo.sum_sq(u)
            for k in (0, 1, 2):
                cap_r = (4.0 * d) ** (2 * k)
                cap_d = (4.0 * d) ** (2 * k + 1)
                assert lo.rellich_form(u, k) <= cap_r * base * (1 + 1e-12)
                assert lo.dirichlet_form(u, k) <= cap_d * base * (1 + 1e-12)


def test_sphere_indicator_rayleigh_quotients_under_cap():
    for d in (2, 3, 4):
        sphere = lo.unit_sphere_indicator(d)
        for k in (0, 1):
            num = lo.dirichlet_form(sphere, k)
            den = lo.weighted_norm_sq(sphere, 4 * k + 2)
            assert num / den <= (4.0 * d) ** (2 * k + 1) * (1 + 1e-12)


# -- text round trip ------------------------------------------------------


def test_text_round_trip_exact():
    u = _random_function(2, 2, 61)
    again = lo.from_text(lo.to_text(u))
    assert again == u


def test_text_format_layout():
    u = LatticeFunction(3, {(0, 0, 1): 1.0, (1, -2, 0): -0.5})
    text = lo.to_text(u)
    lines = text.strip().splitlines()
    assert lines[0] == "dim 3"
    assert lines[1].split() == ["0", "0", "1", "1.0"]
    assert lines[2].split() == ["1", "-2", "0", "-0.5"]


def test_to_text_rejects_complex_values():
    u = LatticeFunction(1, {(1,): 1.0 + 2.0j})
    with pytest.raises(ValueError):
        lo.to_text(u)


@pytest.mark.parametrize("bad", [
    "",
    "   \n  ",
    "dimension 3\n0 0 0 1.0",
    "dim 2\n0 1.0",
    "dim 1\n0 nan",
    "dim 1\n0 inf",
    "dim 1\n1 1.0\n1 2.0",
])
def test_from_text_rejects_malformed_input(bad):
    with pytest.raises(ValueError):
        lo.from_text(bad)


def test_save_and_load(tmp_path):
    u = _random_function(3, 1, 71)
    path = tmp_path / "function.txt"
    lo.save(u, path)
    assert lo.load(path) == u


def test_lex_item_ordering_is_deterministic():
    u = LatticeFunction(2, {(1, 0): 1.0, (-1, 2): 2.0, (0, 0): 3.0})
    keys = [n for n, _ in u.items()]
    assert keys == sorted(keys)


def test_inner_conjugates_second_argument():
    u = LatticeFunction(1, {(0,): 1.0 + 1.0j})
    v = LatticeFunction(1, {(0,): 2.0j})
    val = lo.inner(u, v)
    assert val == pytest.approx((1 + 1j) * (-2j))
    # ordering of supports must not change the answer
    w = LatticeFunction(1, {(0,): 2.0j, (5,): 1.0})
    assert lo.inner(u, w) == pytest.approx((1 + 1j) * (-2j))
