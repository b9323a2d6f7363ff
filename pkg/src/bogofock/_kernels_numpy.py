"""Pure-numpy implementations of the hot kernels.

These mirror ``_kernels_numba`` line for line so that both backends walk the
same arithmetic graph in the same order.  Selected via ``BOGOFOCK_BACKEND=numpy``
(see ``_backend``).
"""

import math

import numpy as np


def hermite_lattice(coeff, y, shape):
    """Fill the full lattice of Hermite-polynomial values up to ``shape``.

    Implements the index-raising recursion

        H[u + e_k] = y[k] * H[u] - sum_j coeff[k, j] * u[j] * H[u - e_j]

    over the box lattice ``0 <= u < shape`` (C order, flattened), always raising
    the first index with a nonzero entry.  ``coeff`` is the inverse of the
    polynomial's parameter matrix and ``y = coeff @ x`` for argument ``x``.

    Args:
        coeff: (M, M) complex matrix of recursion coefficients.
        y: (M,) complex vector, the linear term of the recursion.
        shape: (M,) int64 array of per-index lattice extents.

    Returns:
        Flat complex array of ``prod(shape)`` values in C order.
    """
    m = shape.shape[0]
    strides = np.ones(m, dtype=np.int64)
    for i in range(m - 1, 0, -1):
        strides[i - 1] = strides[i] * shape[i]
    size = strides[0] * shape[0]

    grid = np.zeros(size, dtype=np.complex128)
    grid[0] = 1.0
    idx = np.zeros(m, dtype=np.int64)

    for flat in range(1, size):
        j = m - 1
        while True:
            idx[j] += 1
            if idx[j] < shape[j]:
                break
            idx[j] = 0
            j -= 1
        k = 0
        while idx[k] == 0:
            k += 1
        pivot = flat - strides[k]
        val = y[k] * grid[pivot]
        for j in range(m):
            uj = idx[j] - 1 if j == k else idx[j]
            if uj > 0:
                val -= coeff[k, j] * uj * grid[pivot - strides[j]]
        grid[flat] = val
    return grid


def scaled_lattice(coeff, y, shape, scale, weights, offsets):
    """:func:`hermite_lattice` followed by per-entry scalar normalization.

    Entry ``u`` of the output is ``(...((H[u] * scale) * w_0[u_0]) * ...)`` with
    ``w_axis`` the slice ``weights[offsets[axis]:offsets[axis + 1]]``.  The
    scaling runs entry by entry in scalar arithmetic so that a one-element
    lattice and an interior entry of a larger lattice produce bit-identical
    numbers (vectorized complex multiplies round differently).
    """
    m = shape.shape[0]
    strides = np.ones(m, dtype=np.int64)
    for i in range(m - 1, 0, -1):
        strides[i - 1] = strides[i] * shape[i]
    size = strides[0] * shape[0]

    grid = hermite_lattice(coeff, y, shape)
    idx = np.zeros(m, dtype=np.int64)
    for flat in range(size):
        if flat > 0:
            j = m - 1
            while True:
                idx[j] += 1
                if idx[j] < shape[j]:
                    break
                idx[j] = 0
                j -= 1
        val = grid[flat] * scale
        for axis in range(m):
            val = val * weights[offsets[axis] + idx[axis]]
        grid[flat] = val
    return grid


def kan_sum(v, quad, lin, alternate):
    """Direct summation for Gaussian moments / Hermite values.

    Evaluates, with ``h = v/2 - l`` and ``vt = sum(v)``,

        sum_l sum_s (-1)^(|l| [+ s]) * C(v, l)
              * (h' quad h / 2)^s * (h' lin)^(vt - 2s) / (s! (vt - 2s)!)

    where the extra ``(-1)^s`` is included when ``alternate`` is true (the
    Hermite variant); without it the sum is the raw Gaussian product moment.
    Binomial/factorial weights go through log-gamma so large total degrees do
    not overflow intermediate factorials.

    Args:
        v: (M,) int64 multi-index.
        quad: (M, M) complex quadratic-form matrix.
        lin: (M,) complex linear vector.
        alternate: whether to alternate the sign of the s-sum.

    Returns:
        The complex value of the sum.
    """
    m = v.shape[0]
    vt = 0
    for j in range(m):
        vt += v[j]

    lg_v = np.zeros(m, dtype=np.float64)
    for j in range(m):
        lg_v[j] = math.lgamma(v[j] + 1.0)

    half_v = np.zeros(m, dtype=np.float64)
    for j in range(m):
        half_v[j] = 0.5 * v[j]

    total = 0.0 + 0.0j
    ell = np.zeros(m, dtype=np.int64)
    h = np.zeros(m, dtype=np.float64)
    while True:
        lsum = 0
        log_binom = 0.0
        for j in range(m):
            lsum += ell[j]
            log_binom += lg_v[j] - math.lgamma(ell[j] + 1.0) - math.lgamma(v[j] - ell[j] + 1.0)
            h[j] = half_v[j] - ell[j]

        hq = 0.0 + 0.0j
        for i in range(m):
            acc = 0.0 + 0.0j
            for j in range(m):
                acc += quad[i, j] * h[j]
            hq += h[i] * acc
        hl = 0.0 + 0.0j
        for j in range(m):
            hl += h[j] * lin[j]

        sign_l = -1.0 if (lsum & 1) else 1.0
        hq2 = 0.5 * hq
        zs = 1.0 + 0.0j
        for s in range(vt // 2 + 1):
            p = vt - 2 * s
            weight = math.exp(log_binom - math.lgamma(s + 1.0) - math.lgamma(p + 1.0))
            zp = hl ** p if p > 0 else 1.0 + 0.0j
            sign = sign_l
            if alternate and (s & 1):
                sign = -sign
            total += sign * weight * zs * zp
            zs = zs * hq2

        j = m - 1
        while j >= 0:
            ell[j] += 1
            if ell[j] <= v[j]:
                break
            ell[j] = 0
            j -= 1
        if j < 0:
            break
    return total
