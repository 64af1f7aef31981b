"""Lattice-to-torus transfer: build a trigonometric polynomial from a
finitely supported lattice function so that the weighted lattice sums and
the torus energies agree exactly.

For a lattice function u vanishing at the origin, define

    psi(x) = (2 pi)^{-d/2} sum_{n != 0} theta_w u(n) / |n|^{2w} e^{i n.x},

where w is the derivative order of the chosen family (w = 2k+1 for the
Hardy-type pairing, w = 2k for the Rellich-type pairing) and theta_w =
(-i)^w is a unimodular phase.  Two families of exact identities follow by
Parseval and the symbol calculus Delta <-> -|n|^2, D_j <-> multiplication
by (1 - e^{i x_j}), whose squared modulus is 4 sin^2(x_j / 2):

* Hardy pairing (weight exponent 4k+2):
    sum_n |u(n)|^2 / |n|^{4k+2}  =  integral |grad(Delta^k psi)|^2 dx
    sum   |D(Delta^k u)|^2       =  4^{2k+1} integral |Delta^{2k+1} psi|^2
                                            omega^{2k+1} dx
* Rellich pairing (weight exponent 4k):
    sum_n |u(n)|^2 / |n|^{4k}    =  integral |Delta^k psi|^2 dx
    sum   |Delta^k u|^2          =  4^{2k}   integral |Delta^{2k} psi|^2
                                            omega^{2k} dx

Both sides of every identity are finite sums, so the verifiers demand
agreement at rounding level.  The phase drops out of all four identities
(they compare squared moduli); it is fixed anyway so that the mixed
derivatives of psi reproduce the transforms of iterated difference
functions under the e^{i n.x} coefficient convention.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import lattice_ops, torus_spectral
from .errors import DomainError
from .indexing import norm_sq
from .lattice_ops import LatticeFunction
from .torus_spectral import TrigPoly

TWO_PI = torus_spectral.TWO_PI

_KINDS = ("hardy", "rellich")


@dataclass(frozen=True)
class CorrespondenceKind:
    """Which pairing to use: 'hardy' (weight 4k+2) or 'rellich' (weight 4k)."""

    kind: str
    k: int

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"kind must be one of {_KINDS}, got {self.kind!r}")
        if self.k < 0:
            raise DomainError("requires k >= 0")

    @property
    def derivative_order(self) -> int:
        """w: how many first-order operators the pairing threads through."""
        return 2 * self.k + 1 if self.kind == "hardy" else 2 * self.k

    @property
    def weight_exponent(self) -> int:
        """2w: the power of |n| dividing u(n)."""
        return 2 * self.derivative_order


def _require_vanishing_origin(u: LatticeFunction) -> None:
    if u[(0,) * u.dim] != 0:
        raise DomainError("requires u(0) = 0")


def build_psi(u: LatticeFunction, kind: CorrespondenceKind) -> TrigPoly:
    """The polynomial whose coefficient at n is
    (-i)^w (2 pi)^{-d/2} u(n) / |n|^{2w}; support equals the support of u.

    |n|^{2w} is computed as an exact integer power before the single
    floating division, so each coefficient carries one rounding error.
    """
    _require_vanishing_origin(u)
    w = kind.derivative_order
    phase = (-1j) ** w
    norm = (TWO_PI) ** (-u.dim / 2.0)
    coeffs = {}
    for n, v in u.items():
        coeffs[n] = phase * norm * v / float(norm_sq(n) ** w)
    return TrigPoly(u.dim, coeffs)


@dataclass(frozen=True)
class IdentityReport:
    """Two exactly-equal quantities and their relative disagreement."""

    name: str
    dim: int
    kind: str
    k: int
    lhs: float
    rhs: float
    rel_err: float
    holds: bool
    tol: float

    def as_dict(self) -> dict:
        return {
            "name": self.name, "dim": self.dim, "kind": self.kind,
            "k": self.k, "lhs": self.lhs, "rhs": self.rhs,
            "rel_err": self.rel_err, "holds": self.holds, "tol": self.tol,
        }


#: Both sides of each identity are finite exact sums; disagreement beyond
#: accumulated rounding means a real defect.
IDENTITY_TOL = 1e-12


def _report(name: str, u: LatticeFunction, kind: CorrespondenceKind,
            lhs: float, rhs: float) -> IdentityReport:
    lhs, rhs = float(lhs), float(rhs)
    scale = max(abs(lhs), abs(rhs))
    rel_err = 0.0 if scale == 0.0 else abs(lhs - rhs) / scale
    return IdentityReport(
        name=name, dim=u.dim, kind=kind.kind, k=kind.k,
        lhs=lhs, rhs=rhs, rel_err=rel_err,
        holds=bool(rel_err <= IDENTITY_TOL), tol=IDENTITY_TOL)


def verify_identity_lhs_rhs(u: LatticeFunction,
                            kind: CorrespondenceKind) -> IdentityReport:
    """Weighted lattice mass against the unweighted torus energy:

    hardy:   sum |u|^2 / |n|^{4k+2}  vs  integral |grad(Delta^k psi)|^2
    rellich: sum |u|^2 / |n|^{4k}    vs  integral |Delta^k psi|^2
    """
    psi = build_psi(u, kind)
    lhs = lattice_ops.weighted_norm_sq(u, kind.weight_exponent)
    if kind.kind == "hardy":
        rhs = torus_spectral.weighted_form(
            psi, "gradient_laplacian", p=0, m=kind.k)
    else:
        rhs = torus_spectral.weighted_form(psi, "laplacian", p=0, m=kind.k)
    return _report("identity_lhs_rhs", u, kind, lhs, rhs)


def verify_identity_forms(u: LatticeFunction,
                          kind: CorrespondenceKind) -> IdentityReport:
    """Lattice difference energy against the omega-weighted torus energy:

    hardy:   sum |D(Delta^k u)|^2  vs  4^{2k+1} integral |Delta^{2k+1} psi|^2
                                                omega^{2k+1}
    rellich: sum |Delta^k u|^2     vs  4^{2k}   integral |Delta^{2k} psi|^2
                                                omega^{2k}
    """
    psi = build_psi(u, kind)
    w = kind.derivative_order
    if kind.kind == "hardy":
        lhs = lattice_ops.dirichlet_form(u, kind.k)
    else:
        lhs = lattice_ops.rellich_form(u, kind.k)
    rhs = (4.0 ** w) * torus_spectral.weighted_form(
        psi, "laplacian", p=w, m=w)
    return _report("identity_forms", u, kind, lhs, rhs)


def coefficient_lift(u: LatticeFunction) -> TrigPoly:
    """Plain coefficient reading n -> u(n), no weights or normalization.

    Under this lift the lattice Laplacian becomes multiplication by
    4 omega(x): lift(Delta u) = 4 omega * lift(u).
    """
    return TrigPoly(u.dim, dict(u.items()))


def random_lattice_function(d: int, support_radius: int, seed: int,
                            zero_origin: bool = True,
                            complex_valued: bool = False) -> LatticeFunction:
    """Deterministic random lattice function on the ell-infinity ball.

    Values are uniform in [-1, 1] (plus an independent imaginary part when
    complex_valued); the origin value is removed when zero_origin.
    """
    import itertools

    import numpy as np

    if support_radius < 1:
        raise ValueError("support_radius must be >= 1")
    rng = np.random.default_rng(seed)
    side = range(-support_radius, support_radius + 1)
    freqs = sorted(itertools.product(side, repeat=d))
    re = rng.uniform(-1.0, 1.0, size=len(freqs))
    im = rng.uniform(-1.0, 1.0, size=len(freqs)) if complex_valued else None
    values: dict = {}
    for i, n in enumerate(freqs):
        values[n] = complex(re[i], im[i]) if complex_valued else float(re[i])
    if zero_origin:
        values.pop((0,) * d, None)
    return LatticeFunction(d, values)
