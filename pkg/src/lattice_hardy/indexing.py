"""Multi-index bookkeeping and dense-box stencil kernels.

Functions on Z^d are stored sparsely as ``dict[tuple[int, ...], scalar]``.
Stencil application and quadratic forms go through a dense bounding-box
representation when the box fits a size budget; the kernels here implement
that conversion and the core nearest-neighbour stencils with exact
zero-extension semantics (arrays grow by the stencil reach on every
application, so no mass is ever clipped).
"""

from __future__ import annotations

from typing import Iterable

import numpy as np

Index = tuple[int, ...]

#: Default cap on dense bounding-box volume before operations stay sparse.
BOX_VOLUME_LIMIT = 1 << 22


def norm_sq(n: Index) -> int:
    """Squared Euclidean norm of a multi-index, exact in integers."""
    return sum(c * c for c in n)


def validate_index(n, dim: int) -> Index:
    n = tuple(int(c) for c in n)
    if len(n) != dim:
        raise ValueError(f"index {n} has length {len(n)}, expected {dim}")
    return n


def bounding_box(keys: Iterable[Index]) -> tuple[Index, Index]:
    """Componentwise (lo, hi) over the given indices."""
    it = iter(keys)
    first = next(it)
    lo = list(first)
    hi = list(first)
    for n in it:
        for j, c in enumerate(n):
            if c < lo[j]:
                lo[j] = c
            elif c > hi[j]:
                hi[j] = c
    return tuple(lo), tuple(hi)


def box_volume(lo: Index, hi: Index) -> int:
    v = 1
    for a, b in zip(lo, hi):
        v *= b - a + 1
    return v


def dict_to_array(values: dict[Index, complex], lo: Index, shape: Index,
                  dtype) -> np.ndarray:
    arr = np.zeros(shape, dtype=dtype)
    for n, v in values.items():
        arr[tuple(c - a for c, a in zip(n, lo))] = v
    return arr


def array_to_dict(arr: np.ndarray, lo: Index) -> dict[Index, complex]:
    """Nonzero entries of a box array as a sparse dict (exact zeros pruned)."""
    out = {}
    for pos in zip(*np.nonzero(arr)):
        n = tuple(int(p) + a for p, a in zip(pos, lo))
        out[n] = arr[pos].item()
    return out


def _grow(arr: np.ndarray, pad: int) -> np.ndarray:
    return np.pad(arr, pad)


def laplacian_array(arr: np.ndarray) -> np.ndarray:
    """One application of the positive-form Laplacian stencil.

    Input covers a box with zero values outside; the output covers the box
    grown by one cell per side (offset shifts by -1 on every axis) so the
    zero extension stays exact.
    """
    d = arr.ndim
    out = _grow(arr, 1) * (2 * d)
    core = arr.shape
    for j in range(d):
        for off in (0, 2):
            sl = tuple(
                slice(1, 1 + core[i]) if i != j else slice(off, off + core[i])
                for i in range(d))
            out[sl] -= arr
    return out


def backward_difference_array(arr: np.ndarray, axis: int) -> np.ndarray:
    """(D_j u)(n) = u(n) - u(n - e_j); output grows by one cell forward."""
    shape = list(arr.shape)
    shape[axis] += 1
    out = np.zeros(tuple(shape), dtype=arr.dtype)
    head = tuple(
        slice(0, arr.shape[i]) if i == axis else slice(None)
        for i in range(arr.ndim))
    tail = tuple(
        slice(1, None) if i == axis else slice(None) for i in range(arr.ndim))
    out[head] = arr
    out[tail] -= arr
    return out


def axis_stencil_array(arr: np.ndarray, axis: int,
                       taps: dict[int, float]) -> np.ndarray:
    """Apply a 1-axis symmetric stencil {offset: weight}; grows by max reach."""
    reach = max(abs(o) for o in taps)
    pad = [(0, 0)] * arr.ndim
    pad[axis] = (reach, reach)
    out = np.zeros(np.pad(arr, pad).shape, dtype=arr.dtype)
    for off, w in taps.items():
        sl = tuple(
            slice(reach + off, reach + off + arr.shape[i]) if i == axis
            else slice(None) for i in range(arr.ndim))
        out[sl] += w * arr
    return out


def coordinate_grids(lo: Index, shape: Index) -> list[np.ndarray]:
    """Open-mesh integer coordinate arrays for a box, one per axis."""
    return list(
        np.ix_(*(np.arange(a, a + s) for a, s in zip(lo, shape))))


def norm_sq_array(lo: Index, shape: Index) -> np.ndarray:
    """|n|^2 over a box as a dense integer array."""
    grids = coordinate_grids(lo, shape)
    out = np.zeros(shape, dtype=np.int64)
    for g in grids:
        out = out + g * g
    return out


def lex_items(values: dict[Index, complex]) -> list[tuple[Index, complex]]:
    """Items in lexicographic index order, for deterministic reductions."""
    return sorted(values.items(), key=lambda kv: kv[0])
