"""Generalized-eigenvalue estimation of sharp constants on boxes: hand
values, a dense eigensolver oracle, variational monotonicity, brackets,
and the slope-fitting helper."""

from __future__ import annotations

import numpy as np
import pytest
import scipy.linalg

from lattice_hardy import estimator as es
from lattice_hardy import lattice_ops as lo
from lattice_hardy.errors import ConvergenceError, DomainError, ResourceError
from lattice_hardy.estimator import BoxSpec
from lattice_hardy.lattice_ops import LatticeFunction


def _box_sites(d: int, radius: int) -> list[tuple[int, ...]]:
    sites = []
    for n in np.ndindex(*[2 * radius + 1] * d):
        idx = tuple(int(c) - radius for c in n)
        if idx != (0,) * d:
            sites.append(idx)
    return sites


def _dense_minimum(k: int, d: int, radius: int, kind: str) -> float:
    """Smallest pencil eigenvalue via a dense solver, column by column."""
    box = BoxSpec(d, radius)
    sites = _box_sites(d, radius)
    m = len(sites)
    pos = {n: i for i, n in enumerate(sites)}
    a_mat = np.zeros((m, m))
    for j, n in enumerate(sites):
        image = es.quadratic_form_apply(LatticeFunction(d, {n: 1.0}),
                                        box, k, kind)
        for site, value in image.values.items():
            if site in pos:
                a_mat[pos[site], j] = float(np.real(value))
    weight_power = 4 * k + 2 if kind == "hardy" else 4 * k
    w_mat = np.diag([float(sum(c * c for c in n)) ** (-weight_power / 2)
                     for n in sites])
    return float(scipy.linalg.eigh(a_mat, w_mat, eigvals_only=True)[0])


def _quotient(u: LatticeFunction, k: int, kind: str) -> float:
    if kind == "hardy":
        return lo.dirichlet_form(u, k) / lo.weighted_norm_sq(u, 4 * k + 2)
    return lo.rellich_form(u, k) / lo.weighted_norm_sq(u, 4 * k)


# -- box bookkeeping -----------------------------------------------------


def test_box_spec_size():
    assert BoxSpec(1, 1).size == 2
    assert BoxSpec(2, 2).size == 24
    assert BoxSpec(3, 1).size == 26


def test_box_spec_validation():
    with pytest.raises(DomainError):
        BoxSpec(0, 1)
    with pytest.raises(DomainError):
        BoxSpec(2, 0)


def test_box_budget_and_env_override(monkeypatch):
    with pytest.raises(ResourceError):
        BoxSpec(3, 200).check_budget()
    monkeypatch.setenv("LATTICE_HARDY_BUDGET", "10")
    with pytest.raises(ResourceError):
        BoxSpec(2, 2).check_budget()
    monkeypatch.setenv("LATTICE_HARDY_BUDGET", "100")
    BoxSpec(2, 2).check_budget()
    monkeypatch.setenv("LATTICE_HARDY_BUDGET", "not-a-number")
    with pytest.raises(ValueError):
        BoxSpec(2, 2).check_budget()
    monkeypatch.setenv("LATTICE_HARDY_BUDGET", "-4")
    with pytest.raises(ValueError):
        BoxSpec(2, 2).check_budget()


# -- the quadratic form operator -------------------------------------------


def test_quadratic_form_matches_lattice_forms():
    rng = np.random.default_rng(0)
    box = BoxSpec(2, 3)
    sites = _box_sites(2, 3)
    vals = {n: float(rng.standard_normal()) for n in sites}
    u = LatticeFunction(2, vals)
    for k, kind, form in ((0, "hardy", lo.dirichlet_form),
                          (1, "hardy", lo.dirichlet_form),
                          (1, "rellich", lo.rellich_form)):
        image = es.quadratic_form_apply(u, box, k, kind)
        quad = float(np.real(lo.inner(image, u)))
        assert quad == pytest.approx(form(u, k), rel=1e-12)


def test_quadratic_form_rejects_bad_input():
    box = BoxSpec(2, 1)
    outside = LatticeFunction(2, {(5, 0): 1.0})
    with pytest.raises(DomainError):
        es.quadratic_form_apply(outside, box, 0, "hardy")
    origin_mass = LatticeFunction(2, {(0, 0): 1.0})
    with pytest.raises(DomainError):
        es.quadratic_form_apply(origin_mass, box, 0, "hardy")
    complex_u = LatticeFunction(2, {(1, 0): 1.0j})
    with pytest.raises(ValueError):
        es.quadratic_form_apply(complex_u, box, 0, "hardy")


# -- hand values --------------------------------------------------------------


def test_hand_value_hardy_1d_radius_1():
    result = es.estimate_sharp_constant(0, 1, 1, "hardy", tol=1e-12)
    assert result.value == pytest.approx(2.0, abs=1e-10)
    assert result.quotient_check == pytest.approx(2.0, abs=1e-8)


def test_hand_value_rellich_1d_radius_1():
    # the restricted pencil is [[6,1],[1,6]] vs identity; its ground pair
    # (1,-1) is orthogonal to the all-ones start, so this exercises the
    # second block vector
    result = es.estimate_sharp_constant(1, 1, 1, "rellich", tol=1e-12)
    assert result.value == pytest.approx(5.0, abs=1e-10)
    ground = result.minimizer
    a, b = ground[(-1,)], ground[(1,)]
    assert abs(a + b) < 1e-6 * max(abs(a), abs(b))


# -- dense oracle --------------------------------------------------------------


@pytest.mark.parametrize("k,d,radius,kind", [
    (0, 2, 2, "hardy"),
    (1, 2, 2, "rellich"),
    (0, 3, 1, "hardy"),
])
def test_estimate_matches_dense_eigensolver(k, d, radius, kind):
    dense = _dense_minimum(k, d, radius, kind)
    result = es.estimate_sharp_constant(k, d, radius, kind, tol=1e-10)
    assert result.value == pytest.approx(dense, rel=1e-8)


# -- variational structure -------------------------------------------------------


def test_estimates_decrease_with_radius():
    previous = None
    for radius in (1, 2, 3, 4):
        value = es.estimate_sharp_constant(0, 2, radius, "hardy").value
        if previous is not None:
            assert value <= previous * (1 + 1e-10)
        previous = value


def test_one_dimensional_floor():
    # the 1-D sharp constant is 1/4; finite boxes stay above it and
    # improve monotonically
    values = [es.estimate_sharp_constant(0, 1, r, "hardy").value
              for r in (1, 2, 4, 8, 16)]
    assert all(v >= 0.25 - 1e-12 for v in values)
    assert all(b <= a * (1 + 1e-10) for a, b in zip(values, values[1:]))


def test_minimizer_realizes_the_estimate():
    result = es.estimate_sharp_constant(0, 2, 2, "hardy", tol=1e-10)
    assert isinstance(result.minimizer, LatticeFunction)
    assert result.minimizer.dim == 2
    assert result.minimizer[(0, 0)] == 0.0
    assert _quotient(result.minimizer, 0, "hardy") == pytest.approx(
        result.value, rel=1e-8)


def test_estimate_result_payload():
    result = es.estimate_sharp_constant(0, 2, 1, "hardy")
    payload = result.as_dict()
    for key in ("value", "dim", "radius", "basis_size", "k", "kind",
                "iterations", "residual", "quotient_check"):
        assert key in payload
    assert payload["dim"] == 2
    assert payload["radius"] == 1
    assert payload["basis_size"] == 8
    assert "minimizer" not in payload


# -- validation and failure modes --------------------------------------------------


def test_estimate_validation():
    with pytest.raises(ValueError):
        es.estimate_sharp_constant(0, 1, 1, "sobolev")
    with pytest.raises(DomainError):
        es.estimate_sharp_constant(-1, 1, 1, "hardy")
    with pytest.raises(DomainError):
        es.estimate_sharp_constant(0, 1, 0, "hardy")
    with pytest.raises(ValueError):
        es.estimate_sharp_constant(0, 1, 1, "hardy", tol=0.0)
    with pytest.raises(ResourceError):
        es.estimate_sharp_constant(0, 4, 50, "hardy")


def test_convergence_error_when_starved():
    with pytest.raises(ConvergenceError):
        es.estimate_sharp_constant(0, 2, 3, "hardy", tol=1e-16, max_outer=1)


# -- sweeps ------------------------------------------------------------------------


def test_sweep_rows_and_bracket_containment():
    rows = es.sweep(0, "hardy", [3, 4], radius=2)
    assert [row.d for row in rows] == [3, 4]
    for row in rows:
        assert row.bracket.lower <= row.estimate.value <= row.bracket.upper
        payload = row.as_dict()
        assert payload["dim"] == row.d
        assert payload["bracket_lower"] == pytest.approx(row.bracket.lower)
        assert payload["bracket_upper"] == pytest.approx(row.bracket.upper)
        assert payload["value"] == pytest.approx(row.estimate.value)


def test_sweep_budget_checked_before_any_work():
    # the oversized dimension fails the pre-check, so no estimate runs
    with pytest.raises(ResourceError):
        es.sweep(0, "hardy", [3, 50], radius=9)


def test_sweep_domain_gate():
    with pytest.raises(DomainError):
        es.sweep(0, "hardy", [2, 3], radius=1)  # bracket needs d > 2


# -- slope fitting -----------------------------------------------------------------


def test_fit_log_slope_recovers_exact_power_law():
    pairs = [(d, 3.5 * d ** 2.25) for d in (4, 8, 16, 32)]
    slope, intercept, r_squared = es.fit_log_slope(pairs)
    assert slope == pytest.approx(2.25, abs=1e-12)
    assert intercept == pytest.approx(np.log(3.5), abs=1e-12)
    assert r_squared == pytest.approx(1.0, abs=1e-12)


def test_fit_log_slope_constant_series():
    slope, _, r_squared = es.fit_log_slope([(2, 7.0), (4, 7.0), (8, 7.0)])
    assert slope == pytest.approx(0.0, abs=1e-12)
    assert r_squared == 1.0


def test_fit_log_slope_validation():
    with pytest.raises(ValueError):
        es.fit_log_slope([(2, 1.0), (4, 2.0)])
    with pytest.raises(ValueError):
        es.fit_log_slope([(2, 1.0), (4, 2.0), (8, -1.0)])
    with pytest.raises(ValueError):
        es.fit_log_slope([(0, 1.0), (4, 2.0), (8, 1.0)])
