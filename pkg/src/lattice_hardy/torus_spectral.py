"""Trigonometric polynomials on the torus cube Q_d = [-pi, pi]^d and
numerical verification of the weighted inequalities.

A polynomial is stored by its frequency coefficients, psi(x) =
sum_n c_n e^{i n.x}.  The singular weight

    omega(x) = sum_j sin^2(x_j / 2) = d/2 - (1/2) sum_j cos(x_j)

acts on coefficients by a nearest-neighbour stencil, so every integral of
the form  integral |phi|^2 omega^p dx  with p >= 0 is a finite exact sum by
Parseval.  Negative powers are genuinely singular at x = 0 and are computed
by two independent routes:

* ``quadrature_form``: midpoint rule on a half-cell-shifted tensor grid
  (never hits the singularity; first-order accurate in 1/N for singular
  weights, with a grid-doubling diagnostic);
* ``omega_weighted_integral``: an exact per-axis factorization.  Writing
  1/omega^s as a Gamma-function integral of e^{-t omega} and using
  e^{(t/2) cos x_j}, the x-integral factorizes into products of scaled
  modified Bessel functions:

      integral g(x) omega(x)^{-s} dx
        = (2 pi)^d / (s-1)! * integral_0^inf t^{s-1}
            sum_m g_m prod_j ive(|m_j|, t/2) dt,

  reducing a d-dimensional singular integral to a smooth 1-D one evaluated
  adaptively to near machine precision at any dimension.  The inequality
  verifiers use this route; the grid route cross-checks it in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np
from scipy import integrate, signal, special

from . import constants, indexing
from .errors import DomainError, ResourceError
from .indexing import Index

TWO_PI = 2.0 * math.pi

#: Default cap on the number of tensor-grid quadrature nodes.
GRID_POINT_BUDGET = 1 << 24


class TrigPoly:
    """A trigonometric polynomial psi(x) = sum_n c_n e^{i n.x} on Q_d.

    ``real_valued`` records that the coefficients were built (and checked)
    Hermitian-symmetric, c_{-n} = conj(c_n), so psi is real pointwise.
    """

    __slots__ = ("dim", "coeffs", "real_valued")

    def __init__(self, dim: int, coeffs: Mapping[Index, complex] | None = None,
                 real_valued: bool = False):
        if dim < 1:
            raise ValueError("dimension must be >= 1")
        self.dim = int(dim)
        cc: dict[Index, complex] = {}
        if coeffs:
            for n, v in coeffs.items():
                n = indexing.validate_index(n, self.dim)
                v = complex(v)
                if v != 0:
                    cc[n] = v
        self.coeffs = cc
        self.real_valued = bool(real_valued)
        if self.real_valued:
            self._check_hermitian()

    def _check_hermitian(self) -> None:
        scale = max((abs(v) for v in self.coeffs.values()), default=0.0)
        for n, v in self.coeffs.items():
            m = tuple(-c for c in n)
            w = self.coeffs.get(m, 0.0)
            if abs(v - np.conj(w)) > 1e-12 * max(1.0, scale):
                raise ValueError(
                    "real_valued polynomial must have Hermitian-symmetric "
                    f"coefficients; violated at frequency {n}")

    # -- basic protocol --------------------------------------------------

    def __len__(self) -> int:
        return len(self.coeffs)

    def __repr__(self) -> str:
        return (f"TrigPoly(dim={self.dim}, support={len(self.coeffs)}, "
                f"real_valued={self.real_valued})")

    def items(self) -> list[tuple[Index, complex]]:
        return indexing.lex_items(self.coeffs)

    def support_radius(self) -> int:
        """Largest ell-infinity norm over the support (0 for the zero poly)."""
        if not self.coeffs:
            return 0
        return max(max(abs(c) for c in n) for n in self.coeffs)

    def zero_average(self) -> bool:
        return (0,) * self.dim not in self.coeffs

    def evaluate(self, points) -> np.ndarray:
        """psi at an (m, d) array of points."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if pts.shape[1] != self.dim:
            raise ValueError(f"points must have {self.dim} columns")
        if not self.coeffs:
            return np.zeros(pts.shape[0], dtype=complex)
        items = self.items()
        freqs = np.array([n for n, _ in items], dtype=float)
        cvals = np.array([v for _, v in items], dtype=complex)
        return np.exp(1j * pts @ freqs.T) @ cvals

    # -- algebra ----------------------------------------------------------

    def __add__(self, other: "TrigPoly") -> "TrigPoly":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        cc = dict(self.coeffs)
        for n, v in other.coeffs.items():
            cc[n] = cc.get(n, 0.0) + v
        return TrigPoly(self.dim, cc)

    def __rmul__(self, scalar: complex) -> "TrigPoly":
        return TrigPoly(self.dim,
                        {n: scalar * v for n, v in self.coeffs.items()})

    __mul__ = __rmul__


@dataclass(frozen=True)
class QuadratureSpec:
    """Midpoint tensor grid: x_m = -pi + (2 pi / N)(m + 1/2) per axis.

    The half-cell shift keeps every node away from the singular point
    x = 0 (and from the corners).
    """

    nodes_per_axis: int = 64
    shift: bool = True

    def __post_init__(self):
        if self.nodes_per_axis < 8:
            raise ValueError("quadrature needs at least 8 nodes per axis")

    def axis_nodes(self) -> np.ndarray:
        n = self.nodes_per_axis
        offset = 0.5 if self.shift else 0.0
        return -math.pi + (TWO_PI / n) * (np.arange(n) + offset)


# -- coefficient-space operators ------------------------------------------


def _to_box(psi: TrigPoly) -> tuple[np.ndarray, Index]:
    lo, hi = indexing.bounding_box(psi.coeffs.keys())
    shape = tuple(b - a + 1 for a, b in zip(lo, hi))
    if indexing.box_volume(lo, hi) > indexing.BOX_VOLUME_LIMIT:
        raise ResourceError("coefficient box exceeds the volume limit")
    return indexing.dict_to_array(psi.coeffs, lo, shape, complex), lo


def _from_box(dim: int, arr: np.ndarray, lo: Index,
              real_valued: bool = False) -> TrigPoly:
    out = TrigPoly(dim, indexing.array_to_dict(arr, lo))
    out.real_valued = real_valued
    return out


def multiply_by_omega(psi: TrigPoly) -> TrigPoly:
    """Coefficients of omega * psi.

    omega = d/2 - (1/2) sum_j cos x_j, so the new coefficient at n is
    (d/2) c_n - (1/4) sum_j (c_{n-e_j} + c_{n+e_j}); the support grows by
    one shell.  This is a quarter of the lattice Laplacian stencil applied
    in frequency space.
    """
    if not psi.coeffs:
        return TrigPoly(psi.dim, {}, real_valued=psi.real_valued)
    arr, lo = _to_box(psi)
    out = indexing.laplacian_array(arr) * 0.25
    return _from_box(psi.dim, out, tuple(a - 1 for a in lo),
                     real_valued=psi.real_valued)


def omega_power_multiply(psi: TrigPoly, p: int) -> TrigPoly:
    """omega^p * psi for integer p >= 0, exact in coefficient space."""
    if p < 0:
        raise ValueError("power must be >= 0; negative weights are integrals")
    if p == 0 or not psi.coeffs:
        return TrigPoly(psi.dim, dict(psi.coeffs), real_valued=psi.real_valued)
    arr, lo = _to_box(psi)
    for _ in range(p):
        arr = indexing.laplacian_array(arr) * 0.25
    return _from_box(psi.dim, arr, tuple(a - p for a in lo),
                     real_valued=psi.real_valued)


def laplacian_power_multiplier(psi: TrigPoly, m: int) -> TrigPoly:
    """Delta^m psi: diagonal multiplier (-|n|^2)^m on coefficients."""
    if m < 0:
        raise ValueError("power must be >= 0")
    if m == 0:
        return TrigPoly(psi.dim, dict(psi.coeffs), real_valued=psi.real_valued)
    cc = {}
    for n, v in psi.coeffs.items():
        cc[n] = ((-float(indexing.norm_sq(n))) ** m) * v
    return TrigPoly(psi.dim, cc, real_valued=psi.real_valued)


def gradient_components(psi: TrigPoly) -> list[TrigPoly]:
    """[d_1 psi, ..., d_d psi]: multipliers (i n_j)."""
    comps = []
    for axis in range(psi.dim):
        cc = {n: 1j * n[axis] * v for n, v in psi.coeffs.items()}
        comps.append(TrigPoly(psi.dim, cc))
    return comps


def derivative_multiplier(psi: TrigPoly, op: str, m: int = 1):
    """Apply a Fourier derivative multiplier.

    op = "laplacian": returns Delta^m psi (one polynomial).
    op = "gradient": returns the d components of the gradient (m must be 1).
    """
    if op == "laplacian":
        return laplacian_power_multiplier(psi, m)
    if op == "gradient":
        if m != 1:
            raise ValueError("gradient repetition beyond 1 is not defined")
        return gradient_components(psi)
    raise ValueError(f"op must be 'gradient' or 'laplacian', got {op!r}")


def _derived_components(psi: TrigPoly, deriv: str, m: int) -> list[TrigPoly]:
    if deriv == "none":
        return [psi]
    if deriv == "gradient":
        return gradient_components(psi)
    if deriv == "laplacian":
        return [laplacian_power_multiplier(psi, m)]
    if deriv == "gradient_laplacian":
        return gradient_components(laplacian_power_multiplier(psi, m))
    raise ValueError(
        "deriv must be 'none', 'gradient', 'laplacian' or "
        f"'gradient_laplacian', got {deriv!r}")


def weighted_form(psi: TrigPoly, deriv: str = "none", p: int = 0,
                  m: int = 1) -> float:
    """Exact integral |(deriv psi)(x)|^2 omega(x)^p dx for p >= 0.

    Entirely in coefficient space: for each derived component phi the value
    is (2 pi)^d sum_n (omega^p phi)_n conj(phi_n); no quadrature error.
    """
    if p < 0:
        raise ValueError("weighted_form needs p >= 0; use quadrature_form or "
                         "omega_weighted_integral for singular weights")
    total = 0.0
    for phi in _derived_components(psi, deriv, m):
        if not phi.coeffs:
            continue
        w = omega_power_multiply(phi, p)
        acc = 0.0
        for n, v in phi.items():
            acc += (w.coeffs.get(n, 0.0) * np.conj(v)).real
        total += acc
    return (TWO_PI ** psi.dim) * total


# -- pointwise grid evaluation and midpoint quadrature ---------------------


def _grid_values(psi: TrigPoly, spec: QuadratureSpec) -> np.ndarray:
    """psi on the full tensor grid via an FFT of the placed coefficients."""
    n_axis = spec.nodes_per_axis
    r = psi.support_radius()
    if 2 * r + 1 > n_axis:
        raise ResourceError(
            f"grid of {n_axis} nodes per axis cannot resolve support radius {r}")
    shape = (n_axis,) * psi.dim
    placed = np.zeros(shape, dtype=complex)
    offset = math.pi / n_axis if spec.shift else 0.0
    base = -math.pi + offset
    for n, v in psi.coeffs.items():
        placed[tuple(c % n_axis for c in n)] += v * np.exp(1j * base * sum(n))
    return np.fft.ifftn(placed) * (n_axis ** psi.dim)


def _omega_grid(dim: int, spec: QuadratureSpec) -> np.ndarray:
    x = spec.axis_nodes()
    s = np.sin(x / 2.0) ** 2
    total = np.zeros((spec.nodes_per_axis,) * dim)
    for axis in range(dim):
        shape = [1] * dim
        shape[axis] = spec.nodes_per_axis
        total = total + s.reshape(shape)
    return total


def _midpoint_value(psi: TrigPoly, deriv: str, p: int, m: int,
                    spec: QuadratureSpec) -> float:
    dim = psi.dim
    integrand = np.zeros((spec.nodes_per_axis,) * dim)
    for phi in _derived_components(psi, deriv, m):
        if phi.coeffs:
            vals = _grid_values(phi, spec)
            integrand += np.abs(vals) ** 2
    if p != 0:
        integrand = integrand * _omega_grid(dim, spec) ** p
    return float(integrand.sum() * (TWO_PI / spec.nodes_per_axis) ** dim)


def quadrature_form(psi: TrigPoly, deriv: str = "none", p: int = -1,
                    q: QuadratureSpec | None = None, m: int = 1,
                    budget: int = GRID_POINT_BUDGET) -> tuple[float, float | None]:
    """Midpoint-rule integral of |(deriv psi)|^2 omega^p on the shifted grid.

    Returns (value, diagnostic) where the diagnostic is the absolute
    difference against the half-resolution grid (None when N/2 < 8).  For
    p < 0 the shifted grid avoids the singular point; the rule converges
    like N^{2-d} for such weights, so the diagnostic matters.
    """
    spec = q or QuadratureSpec()
    if p < 0 and not spec.shift:
        raise DomainError("singular weights require the shifted grid")
    if p == -1 and psi.dim < 3:
        raise DomainError("requires d >= 3 for an integrable 1/omega weight")
    if p <= -2 and psi.dim < 5 - 2 * (p + 2):
        raise DomainError(
            f"requires d >= {5 - 2 * (p + 2)} for an integrable omega^{p} weight")
    if spec.nodes_per_axis ** psi.dim > budget:
        raise ResourceError(
            f"grid has {spec.nodes_per_axis}^{psi.dim} points, over the "
            f"budget of {budget}")
    value = _midpoint_value(psi, deriv, p, m, spec)
    diagnostic = None
    half = spec.nodes_per_axis // 2
    if half >= 8:
        coarse = _midpoint_value(psi, deriv, p, m,
                                 QuadratureSpec(half, spec.shift))
        diagnostic = abs(value - coarse)
    return value, diagnostic


# -- products and axis weights (coefficient space) -------------------------


def _correlate_coeffs(f: TrigPoly, g: TrigPoly) -> TrigPoly:
    """Coefficients of the pointwise product f(x) conj(g(x))."""
    if not f.coeffs or not g.coeffs:
        return TrigPoly(f.dim, {})
    fa, flo = _to_box(f)
    ga, glo = _to_box(g)
    # correlate conjugates its second input: h[lag] = sum_u fa[u] conj(ga[u-lag]),
    # with the full-mode output starting at lag = -(len(ga)-1) per axis, i.e. at
    # the absolute frequency flo - ghi.
    h = signal.correlate(fa, ga, mode="full", method="auto")
    ghi = tuple(a + s - 1 for a, s in zip(glo, ga.shape))
    hlo = tuple(a - b for a, b in zip(flo, ghi))
    return _from_box(f.dim, h, hlo)


# Dense-box helpers: the verification pipeline works on (array, lower-corner)
# pairs so that the large product polynomials (support ~ (4r+1)^d) never pay
# for per-coefficient dict round trips.

Box = tuple[np.ndarray, Index]


def _sq_box(phi: TrigPoly) -> Box | None:
    """|phi|^2 as a coefficient box (None for the zero polynomial).

    The autocorrelation box is centered: its lower corner is 1 - shape
    regardless of where phi's own box sits.
    """
    if not phi.coeffs:
        return None
    fa, _ = _to_box(phi)
    h = signal.correlate(fa, fa, mode="full", method="auto")
    return h, tuple(1 - s for s in fa.shape)


def _sum_boxes(boxes: Iterable[Box]) -> Box | None:
    boxes = [b for b in boxes if b is not None]
    if not boxes:
        return None
    lo = tuple(min(b[1][i] for b in boxes) for i in range(boxes[0][0].ndim))
    hi = tuple(max(b[1][i] + b[0].shape[i] - 1 for b in boxes)
               for i in range(boxes[0][0].ndim))
    out = np.zeros(tuple(b - a + 1 for a, b in zip(lo, hi)), dtype=complex)
    for arr, alo in boxes:
        sl = tuple(slice(a - b, a - b + s)
                   for a, b, s in zip(alo, lo, arr.shape))
        out[sl] += arr
    return out, lo


def _axis_taps_box(box: Box, axis: int, taps: dict[int, float]) -> Box:
    arr, lo = box
    out = indexing.axis_stencil_array(arr, axis, taps)
    reach = max(abs(o) for o in taps)
    return out, tuple(a - (reach if i == axis else 0)
                      for i, a in enumerate(lo))


def _sin4_sum_box(box: Box, dim: int) -> Box:
    return _sum_boxes(_axis_taps_box(box, axis, _SIN4_TAPS)
                      for axis in range(dim))


def abs_squared_poly(components: Iterable[TrigPoly]) -> TrigPoly:
    """sum_c |phi_c(x)|^2 as a polynomial (real-valued by construction)."""
    dim = None
    boxes = []
    for phi in components:
        dim = phi.dim
        boxes.append(_sq_box(phi))
    if dim is None:
        raise ValueError("need at least one component")
    total = _sum_boxes(boxes)
    if total is None:
        return TrigPoly(dim, {}, real_valued=True)
    out = _from_box(dim, total[0], total[1])
    out.real_valued = True
    return out


_SIN2_TAPS = {0: 0.5, -1: -0.25, 1: -0.25}
_SIN4_TAPS = {0: 0.375, -1: -0.25, 1: -0.25, -2: 0.0625, 2: 0.0625}


def _axis_weight_multiply(psi: TrigPoly, axis: int, taps: dict[int, float]) -> TrigPoly:
    if not psi.coeffs:
        return TrigPoly(psi.dim, {})
    arr, lo = _to_box(psi)
    out = indexing.axis_stencil_array(arr, axis, taps)
    reach = max(abs(o) for o in taps)
    new_lo = tuple(a - (reach if i == axis else 0) for i, a in enumerate(lo))
    return _from_box(psi.dim, out, new_lo)


def multiply_by_axis_sin2(psi: TrigPoly, axis: int) -> TrigPoly:
    """sin^2(x_axis / 2) * psi via the 3-tap cosine stencil."""
    return _axis_weight_multiply(psi, axis, _SIN2_TAPS)


def multiply_by_axis_sin4(psi: TrigPoly, axis: int) -> TrigPoly:
    """sin^4(x_axis / 2) * psi via the 5-tap stencil of (3 - 4 cos t + cos 2t)/8."""
    return _axis_weight_multiply(psi, axis, _SIN4_TAPS)


def sum_axis_sin4_multiply(psi: TrigPoly) -> TrigPoly:
    """(sum_i sin^4(x_i / 2)) * psi."""
    total: TrigPoly | None = None
    for axis in range(psi.dim):
        term = multiply_by_axis_sin4(psi, axis)
        total = term if total is None else total + term
    return total if total is not None else TrigPoly(psi.dim, {})


# -- the factorized singular integral --------------------------------------


def _box_integral(box: Box | None, dim: int, p: int,
                  epsrel: float = 1e-10) -> tuple[float, float]:
    """integral g(x) omega(x)^p dx from g's coefficient box (real part)."""
    if box is None:
        return 0.0, 0.0
    arr, lo = box
    if p >= 0:
        origin = tuple(-a for a in lo)
        for _ in range(p):
            arr = indexing.laplacian_array(arr) * 0.25
            origin = tuple(c + 1 for c in origin)
        if any(not 0 <= c < s for c, s in zip(origin, arr.shape)):
            return 0.0, 0.0
        return (TWO_PI ** dim) * float(np.real(arr[origin])), 0.0
    s = -p
    axis_orders = [np.abs(np.arange(a, a + size))
                   for a, size in zip(lo, arr.shape)]
    max_order = max(int(o.max()) for o in axis_orders)
    work = np.ascontiguousarray(arr.real)

    def transform(t: float) -> float:
        iv = special.ive(np.arange(max_order + 1), t / 2.0)
        out = work
        for orders in reversed(axis_orders):
            out = np.tensordot(out, iv[orders], axes=([-1], [0]))
        return float(out)

    scale = (TWO_PI ** dim) / math.factorial(s - 1)
    value, err = integrate.quad(
        lambda t: t ** (s - 1) * transform(t), 0.0, np.inf,
        epsabs=1e-14, epsrel=epsrel, limit=400)
    return scale * value, scale * err


def omega_weighted_integral(g: TrigPoly, p: int,
                            epsrel: float = 1e-10) -> tuple[float, float]:
    """integral g(x) omega(x)^p dx for a real-valued polynomial g, any
    integer p.  Returns (value, error_estimate).

    p >= 0 is exact: the integral is (2 pi)^d times the zero coefficient of
    omega^p g.  p < 0 uses the Bessel-product factorization; convergence of
    the underlying x-integral (2|p| < d + vanishing order of g at 0) is the
    caller's responsibility, as with any improper integral.  Only the real
    part of g enters: a polynomial that is real pointwise has Hermitian
    coefficients, and the symmetric Bessel weights annihilate the
    antisymmetric imaginary part of any coefficient array.
    """
    if not g.coeffs:
        return 0.0, 0.0
    return _box_integral(_to_box(g), g.dim, p, epsrel)


# -- verification reports ---------------------------------------------------

#: relative slack for "holds" verdicts on exact (Parseval-only) comparisons
EXACT_TOL = 1e-8
#: relative slack when any singular integral enters the comparison
QUADRATURE_TOL = 1e-4


@dataclass
class VerificationReport:
    """Outcome of one inequality check on one polynomial."""

    name: str
    dim: int
    params: dict
    constant: float | None
    lhs: float
    rhs: float
    ratio: float | None
    holds: bool
    tol: float
    diagnostics: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "dim": self.dim,
            "params": dict(self.params),
            "constant": self.constant,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "ratio": self.ratio,
            "holds": self.holds,
            "tol": self.tol,
            "diagnostics": dict(self.diagnostics),
        }


def _dominance_report(name: str, psi: TrigPoly, params: dict, constant: float,
                      lhs_integral: tuple[float, float],
                      rhs_integral: tuple[float, float],
                      tol: float) -> VerificationReport:
    """Report for inequalities of the shape C * I_lhs <= I_rhs."""
    lhs_val, lhs_err = lhs_integral
    rhs_val, rhs_err = rhs_integral
    lhs = constant * lhs_val
    ratio = rhs_val / lhs_val if lhs_val > 0 else None
    holds = lhs <= rhs_val * (1.0 + tol) or (lhs_val == 0.0 and rhs_val >= 0.0)
    return VerificationReport(
        name=name, dim=psi.dim, params=params, constant=constant,
        lhs=lhs, rhs=rhs_val, ratio=ratio, holds=holds, tol=tol,
        diagnostics={"lhs_integral_error": lhs_err,
                     "rhs_integral_error": rhs_err})


def _require_zero_average(psi: TrigPoly) -> None:
    if not psi.zero_average():
        raise DomainError("requires a zero-average polynomial "
                          "(no zero-frequency coefficient)")


def _grad_sq_box(psi: TrigPoly) -> Box | None:
    return _sum_boxes(_sq_box(phi) for phi in gradient_components(psi))


def verify_weighted_hardy(psi: TrigPoly, k: int) -> VerificationReport:
    """H(k,d) * integral |psi|^2 omega^{k-1} <= integral |grad psi|^2 omega^k
    for zero-average psi, non-positive k, d > -2k+2."""
    _require_zero_average(psi)
    h = constants.weighted_hardy_constant(k, psi.dim)  # checks the domain
    d = psi.dim
    lhs = _box_integral(_sq_box(psi), d, k - 1)
    rhs = _box_integral(_grad_sq_box(psi), d, k)
    return _dominance_report(
        "weighted_hardy", psi, {"k": k}, h, lhs, rhs, QUADRATURE_TOL)


def verify_weighted_hardy_rellich(psi: TrigPoly, k: int) -> VerificationReport:
    """HR(k,d) * integral |grad psi|^2 omega^{k-1} <= integral
    |Delta psi|^2 omega^k for zero-average psi, d >= -6k+8."""
    _require_zero_average(psi)
    hr = constants.weighted_hardy_rellich_constant(k, psi.dim)
    d = psi.dim
    lhs = _box_integral(_grad_sq_box(psi), d, k - 1)
    rhs = _box_integral(_sq_box(laplacian_power_multiplier(psi, 1)), d, k)
    return _dominance_report(
        "weighted_hardy_rellich", psi, {"k": k}, hr, lhs, rhs, QUADRATURE_TOL)


def verify_weighted_rellich(psi: TrigPoly, k: int) -> VerificationReport:
    """R(k,d) * integral |psi|^2 omega^{k-2} <= integral |Delta psi|^2
    omega^k for zero-average psi, d > -2k+4."""
    _require_zero_average(psi)
    r = constants.weighted_rellich_constant(k, psi.dim)
    d = psi.dim
    lhs = _box_integral(_sq_box(psi), d, k - 2)
    rhs = _box_integral(_sq_box(laplacian_power_multiplier(psi, 1)), d, k)
    return _dominance_report(
        "weighted_rellich", psi, {"k": k}, r, lhs, rhs, QUADRATURE_TOL)


def verify_two_parameter_bound(psi: TrigPoly, alpha, beta: float,
                               gamma: float) -> VerificationReport:
    """The two-parameter family of lower bounds on the weighted Laplacian
    energy from which the Hardy-Rellich and Rellich steps specialize:

        integral omega^{2a} |Delta psi|^2
          >= (2g - b(d+4b-4a)) integral omega^{2a-1} |grad psi|^2
           + (g/2)((2b-2a+1)(d+4a-4) - 2g) integral omega^{2a-2} |psi|^2
           + E,

    with remainder

        E = 2b integral (1 + (2b-2a+1) sum_i sin^4(x_i/2)/omega^2)
                 omega^{2a} |grad psi|^2
          - 4b integral (sum_i sin^2(x_i/2) |d_i psi|^2) omega^{2a-1}
          - g(2b-2a+1) integral (1 + 2(a-1) sum_i sin^4(x_i/2)/omega^2)
                 omega^{2a-1} |psi|^2,

    for alpha <= 0 with 2 alpha an integer, d > -4 alpha + 4, and real
    beta, gamma with beta^2 - beta(2 alpha - 1) >= 0.  No zero-average
    hypothesis is needed.  Every term reduces exactly to polynomial *
    omega^power integrals; the sin^2/sin^4 weights are folded into the
    polynomials by their cosine stencils.
    """
    a = float(alpha)
    two_alpha = 2.0 * a
    if two_alpha != int(two_alpha):
        raise DomainError("requires 2*alpha to be an integer")
    two_alpha = int(two_alpha)
    if a > 0:
        raise DomainError("requires alpha <= 0")
    d = psi.dim
    if not d > -4 * a + 4:
        raise DomainError(f"requires d > -4*alpha+4 = {-4 * a + 4}, got d = {d}")
    if beta * beta - beta * (2 * a - 1) < 0:
        raise DomainError("requires beta^2 - beta(2*alpha - 1) >= 0")

    grad = gradient_components(psi)
    grad_sq = _sum_boxes(_sq_box(phi) for phi in grad)
    psi_sq = _sq_box(psi)
    lap_sq = _sq_box(laplacian_power_multiplier(psi, 1))

    main, main_err = _box_integral(lap_sq, d, two_alpha)

    coeff_grad = 2.0 * gamma - beta * (d + 4.0 * beta - 4.0 * a)
    t_grad, e1 = _box_integral(grad_sq, d, two_alpha - 1)
    coeff_mass = (gamma / 2.0) * ((2.0 * beta - 2.0 * a + 1.0)
                                  * (d + 4.0 * a - 4.0) - 2.0 * gamma)
    t_mass, e2 = _box_integral(psi_sq, d, two_alpha - 2)

    # remainder E, term by term
    e_grad_plain, e3 = _box_integral(grad_sq, d, two_alpha)
    e_grad_sin4, e4 = _box_integral(
        None if grad_sq is None else _sin4_sum_box(grad_sq, d),
        d, two_alpha - 2)
    comp_sin2 = _sum_boxes(
        _axis_taps_box(b, axis, _SIN2_TAPS)
        for axis, phi in enumerate(grad)
        if (b := _sq_box(phi)) is not None)
    e_comp, e5 = _box_integral(comp_sin2, d, two_alpha - 1)
    e_mass_plain, e6 = _box_integral(psi_sq, d, two_alpha - 1)
    e_mass_sin4, e7 = _box_integral(
        None if psi_sq is None else _sin4_sum_box(psi_sq, d),
        d, two_alpha - 3)

    remainder = (2.0 * beta * (e_grad_plain
                               + (2.0 * beta - 2.0 * a + 1.0) * e_grad_sin4)
                 - 4.0 * beta * e_comp
                 - gamma * (2.0 * beta - 2.0 * a + 1.0)
                 * (e_mass_plain + 2.0 * (a - 1.0) * e_mass_sin4))

    rhs = coeff_grad * t_grad + coeff_mass * t_mass + remainder
    scale = max(1.0, abs(main), abs(coeff_grad * t_grad),
                abs(coeff_mass * t_mass), abs(remainder))
    tol = QUADRATURE_TOL
    holds = main >= rhs - tol * scale
    return VerificationReport(
        name="two_parameter_bound", dim=d,
        params={"alpha": a, "beta": beta, "gamma": gamma},
        constant=None, lhs=main, rhs=rhs,
        ratio=None if main == 0 else rhs / main,
        holds=holds, tol=tol,
        diagnostics={"integral_errors": max(main_err, e1, e2, e3, e4, e5,
                                            e6, e7),
                     "remainder": remainder})


def verify_higher_order(psi: TrigPoly, m: int, k: int,
                        which: str) -> VerificationReport:
    """Higher-order composed inequalities for zero-average psi.

    which = "laplacian":  C(m,k,d) integral |psi|^2 omega^{k-2m}
                          <= integral |Delta^m psi|^2 omega^k, d > -2k+4m.
    which = "gradient":   C~(m,k,d) integral |psi|^2 omega^{k-2m-1}
                          <= integral |grad Delta^m psi|^2 omega^k,
                          d > -2k+4m+2.
    """
    _require_zero_average(psi)
    d = psi.dim
    if which == "laplacian":
        if not d > -2 * k + 4 * m:
            raise DomainError(
                f"requires d > -2k+4m = {-2 * k + 4 * m}, got d = {d}")
        const = constants._higher_c(m, k, d)
        lhs = _box_integral(_sq_box(psi), d, k - 2 * m)
        rhs = _box_integral(_sq_box(laplacian_power_multiplier(psi, m)), d, k)
        name = "higher_order_laplacian"
    elif which == "gradient":
        if not d > -2 * k + 4 * m + 2:
            raise DomainError(
                f"requires d > -2k+4m+2 = {-2 * k + 4 * m + 2}, got d = {d}")
        const = constants._higher_ctilde(m, k, d)
        lhs = _box_integral(_sq_box(psi), d, k - 2 * m - 1)
        rhs = _box_integral(
            _grad_sq_box(laplacian_power_multiplier(psi, m)), d, k)
        name = "higher_order_gradient"
    else:
        raise ValueError(f"which must be 'laplacian' or 'gradient', got {which!r}")
    return _dominance_report(
        name, psi, {"m": m, "k": k, "which": which}, const, lhs, rhs,
        QUADRATURE_TOL)


# -- random polynomials ------------------------------------------------------


def random_trig_poly(d: int, support_radius: int, seed: int,
                     zero_average: bool = True,
                     real_valued: bool = True) -> TrigPoly:
    """Random polynomial with coefficients uniform in [-1,1]^2 over the
    ell-infinity ball of the given radius; deterministic in the seed.

    Hermitian-symmetrized when real_valued; the zero-frequency coefficient
    is removed when zero_average.
    """
    if support_radius < 1:
        raise ValueError("support_radius must be >= 1")
    rng = np.random.default_rng(seed)
    side = range(-support_radius, support_radius + 1)
    freqs = sorted(_iter_box(side, d))
    draws = rng.uniform(-1.0, 1.0, size=(len(freqs), 2))
    cc: dict[Index, complex] = {}
    for (re, im), n in zip(draws, freqs):
        cc[n] = complex(re, im)
    origin = (0,) * d
    if zero_average:
        cc.pop(origin, None)
    elif real_valued:
        cc[origin] = complex(cc[origin].real, 0.0)
    if real_valued:
        sym: dict[Index, complex] = {}
        for n, v in cc.items():
            mn = tuple(-c for c in n)
            sym[n] = 0.5 * (v + np.conj(cc.get(mn, 0.0)))
        cc = sym
    return TrigPoly(d, cc, real_valued=real_valued)


def _iter_box(side, d: int):
    import itertools
    return itertools.product(side, repeat=d)
