"""Finitely supported functions on Z^d and the discrete operators on them.

The backward difference is (D_j u)(n) = u(n) - u(n - e_j) and the Laplacian
is taken in its positive form

    (Delta u)(n) = sum_j (2 u(n) - u(n - e_j) - u(n + e_j)),

so Delta = sum_j D_j* D_j is a non-negative operator.  Quadratic forms built
from these operators are finite sums and are evaluated exactly (up to
floating-point rounding): no truncation is involved because every function
has finite support.

Storage is a sparse dict keyed by integer tuples.  Operators and forms
switch to a dense bounding-box representation when the padded box fits
``indexing.BOX_VOLUME_LIMIT``; both paths implement identical arithmetic.
"""

from __future__ import annotations

import io
import math
from typing import Iterable, Mapping

import numpy as np

from . import indexing
from .errors import DomainError
from .indexing import Index


class LatticeFunction:
    """A finitely supported function Z^d -> C.

    Exact zeros are pruned on construction, so ``support()`` is canonical;
    two functions are equal iff their dict representations are equal.
    """

    __slots__ = ("dim", "values")

    def __init__(self, dim: int, values: Mapping[Index, complex] | None = None):
        if dim < 1:
            raise ValueError("dimension must be >= 1")
        self.dim = int(dim)
        vals: dict[Index, complex] = {}
        if values:
            for n, v in values.items():
                n = indexing.validate_index(n, self.dim)
                if v != 0:
                    vals[n] = v
        self.values = vals

    # -- constructors ---------------------------------------------------

    @classmethod
    def delta(cls, dim: int, n: Iterable[int]) -> "LatticeFunction":
        """The unit point mass at ``n``."""
        return cls(dim, {tuple(int(c) for c in n): 1.0})

    # -- basic protocol -------------------------------------------------

    def __getitem__(self, n: Index) -> complex:
        return self.values.get(tuple(n), 0.0)

    def __len__(self) -> int:
        return len(self.values)

    def __eq__(self, other) -> bool:
        return (isinstance(other, LatticeFunction) and self.dim == other.dim
                and self.values == other.values)

    def __repr__(self) -> str:
        return f"LatticeFunction(dim={self.dim}, support={len(self.values)})"

    def support(self) -> list[Index]:
        return sorted(self.values)

    def items(self) -> list[tuple[Index, complex]]:
        """(index, value) pairs in lexicographic order."""
        return indexing.lex_items(self.values)

    def is_real(self) -> bool:
        return all(not isinstance(v, complex) or v.imag == 0.0
                   for v in self.values.values())

    # -- arithmetic (used heavily by linearity tests) --------------------

    def _check_same_dim(self, other: "LatticeFunction") -> None:
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")

    def __add__(self, other: "LatticeFunction") -> "LatticeFunction":
        self._check_same_dim(other)
        out = dict(self.values)
        for n, v in other.values.items():
            out[n] = out.get(n, 0.0) + v
        return LatticeFunction(self.dim, out)

    def __sub__(self, other: "LatticeFunction") -> "LatticeFunction":
        return self + (-1.0) * other

    def __rmul__(self, scalar: complex) -> "LatticeFunction":
        return LatticeFunction(
            self.dim, {n: scalar * v for n, v in self.values.items()})

    __mul__ = __rmul__


def _as_box(u: LatticeFunction, pad: int, dtype=None):
    """Dense array of u over its bounding box padded by ``pad``, or None
    when the padded box exceeds the volume limit or the support is empty."""
    if not u.values:
        return None
    lo, hi = indexing.bounding_box(u.values.keys())
    lo = tuple(a - pad for a in lo)
    hi = tuple(b + pad for b in hi)
    if indexing.box_volume(lo, hi) > indexing.BOX_VOLUME_LIMIT:
        return None
    shape = tuple(b - a + 1 for a, b in zip(lo, hi))
    if dtype is None:
        dtype = complex if not u.is_real() else float
    return indexing.dict_to_array(u.values, lo, shape, dtype), lo


def backward_difference(u: LatticeFunction, j: int) -> LatticeFunction:
    """(D_j u)(n) = u(n) - u(n - e_j) for a 1-based axis j."""
    if not 1 <= j <= u.dim:
        raise ValueError(f"axis {j} out of range 1..{u.dim}")
    axis = j - 1
    out: dict[Index, complex] = {}
    for n, v in u.values.items():
        out[n] = out.get(n, 0.0) + v
        shifted = n[:axis] + (n[axis] + 1,) + n[axis + 1:]
        out[shifted] = out.get(shifted, 0.0) - v
    return LatticeFunction(u.dim, out)


def _laplacian_dict(values: dict[Index, complex], dim: int) -> dict[Index, complex]:
    out: dict[Index, complex] = {}
    twod = 2 * dim
    for n, v in values.items():
        out[n] = out.get(n, 0.0) + twod * v
        for axis in range(dim):
            for step in (-1, 1):
                m = n[:axis] + (n[axis] + step,) + n[axis + 1:]
                out[m] = out.get(m, 0.0) - v
    return out


def apply_laplacian(u: LatticeFunction) -> LatticeFunction:
    """One application of the positive-form discrete Laplacian."""
    return apply_laplacian_power(u, 1)


def apply_laplacian_power(u: LatticeFunction, k: int) -> LatticeFunction:
    """Delta^k u for integer k >= 0."""
    if k < 0:
        raise ValueError("power must be >= 0")
    if k == 0 or not u.values:
        return LatticeFunction(u.dim, dict(u.values))
    boxed = _as_box(u, pad=k)
    if boxed is not None:
        arr, lo = boxed
        core = arr
        for _ in range(k):
            core = indexing.laplacian_array(core)
        # each application grows the box by one cell per side
        final_lo = tuple(a - k for a in lo)
        return LatticeFunction(u.dim, indexing.array_to_dict(core, final_lo))
    vals = dict(u.values)
    for _ in range(k):
        vals = _laplacian_dict(vals, u.dim)
        vals = {n: v for n, v in vals.items() if v != 0}
    return LatticeFunction(u.dim, vals)


def sum_sq(u: LatticeFunction) -> float:
    """sum_n |u(n)|^2."""
    return float(sum(abs(v) ** 2 for _, v in u.items()))


def inner(u: LatticeFunction, v: LatticeFunction) -> complex:
    """sum_n u(n) conj(v(n)), over the smaller support."""
    u._check_same_dim(v)
    a, b = (u, v) if len(u) <= len(v) else (v, u)
    acc = 0.0
    for n, av in a.items():
        bv = b.values.get(n)
        if bv is not None:
            acc += (av * np.conj(bv)) if a is u else (bv * np.conj(av))
    if isinstance(acc, complex) and acc.imag == 0.0:
        return acc.real
    return acc


def dirichlet_form(u: LatticeFunction, k: int) -> float:
    """sum_j sum_n |D_j (Delta^k u)(n)|^2, the order-(2k+1) gradient form."""
    if k < 0:
        raise ValueError("order must be >= 0")
    w = apply_laplacian_power(u, k)
    if not w.values:
        return 0.0
    boxed = _as_box(w, pad=0)
    if boxed is not None:
        arr, lo = boxed
        total = 0.0
        for axis in range(u.dim):
            diff = indexing.backward_difference_array(arr, axis)
            total += float(np.sum(np.abs(diff) ** 2))
        return total
    total = 0.0
    for j in range(1, u.dim + 1):
        total += sum_sq(backward_difference(w, j))
    return total


def rellich_form(u: LatticeFunction, k: int) -> float:
    """sum_n |(Delta^k u)(n)|^2, the order-2k Laplacian form."""
    if k < 0:
        raise ValueError("order must be >= 0")
    return sum_sq(apply_laplacian_power(u, k))


def weighted_norm_sq(u: LatticeFunction, s: int) -> float:
    """sum_{n != 0} |u(n)|^2 / |n|^s.

    For s > 0 the summand at the origin is singular, so a nonzero value at
    the origin violates the hypothesis u(0) = 0 and raises ``DomainError``.
    """
    origin = (0,) * u.dim
    if s > 0 and u.values.get(origin, 0.0) != 0.0:
        raise DomainError("requires u(0) = 0 for a singular weight (s > 0)")
    total = 0.0
    for n, v in u.items():
        if n == origin:
            continue
        total += abs(v) ** 2 / float(indexing.norm_sq(n)) ** (s / 2)
    return total


def unit_sphere_indicator(dim: int) -> LatticeFunction:
    """Indicator of the 2d lattice unit vectors {+-e_j}.

    Its Rayleigh quotients give the simple d-power upper bounds
    dirichlet_form/weighted ratio <= 4^{2k+1} d^{2k+1} and the 4^{2k} d^{2k}
    analogue, valid uniformly in d.
    """
    vals: dict[Index, float] = {}
    for axis in range(dim):
        for step in (-1, 1):
            n = tuple(step if i == axis else 0 for i in range(dim))
            vals[n] = 1.0
    return LatticeFunction(dim, vals)


# -- plain-text exchange format ----------------------------------------
#
#   dim 3
#   0 0 1 1.0
#   1 -2 0 -0.5
#
# Header line "dim d", then one whitespace-separated record per support
# point: d integers followed by the (real) value.


def to_text(u: LatticeFunction) -> str:
    if not u.is_real():
        raise ValueError("text format stores real-valued functions only")
    buf = io.StringIO()
    buf.write(f"dim {u.dim}\n")
    for n, v in u.items():
        coords = " ".join(str(c) for c in n)
        buf.write(f"{coords} {float(np.real(v))!r}\n")
    return buf.getvalue()


def from_text(text: str) -> LatticeFunction:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError("empty lattice function text")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "dim":
        raise ValueError("first line must be 'dim d'")
    dim = int(head[1])
    vals: dict[Index, float] = {}
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != dim + 1:
            raise ValueError(
                f"record {ln!r} must have {dim} coordinates and a value")
        n = tuple(int(p) for p in parts[:dim])
        v = float(parts[dim])
        if not math.isfinite(v):
            raise ValueError(f"non-finite value in record {ln!r}")
        if n in vals:
            raise ValueError(f"duplicate index {n}")
        vals[n] = v
    return LatticeFunction(dim, vals)


def save(u: LatticeFunction, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(to_text(u))


def load(path) -> LatticeFunction:
    with open(path, "r", encoding="ascii") as fh:
        return from_text(fh.read())
