"""Numba-compiled implementations of the hot kernels.

Same algorithms and loop order as ``_kernels_numpy``; see that module for the
recursion and summation formulas.  These are the default backend.
"""

import math

import numpy as np
from numba import njit


@njit(cache=False)
def hermite_lattice(coeff, y, shape):  # pragma: no cover - exercised via _backend
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


@njit(cache=False)
def scaled_lattice(coeff, y, shape, scale, weights, offsets):  # pragma: no cover
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


@njit(cache=False)
def kan_sum(v, quad, lin, alternate):  # pragma: no cover - exercised via _backend
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
