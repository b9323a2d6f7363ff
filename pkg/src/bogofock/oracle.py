"""Brute-force referee: explicit operators on a truncated Fock space.

Everything here is deliberately direct - dense matrices, generator
exponentials, ordinary matrix products - so that it is slow but obviously
correct.  The production path (``husimi``) is tested against these matrices
element by element.
"""

import functools
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .bogoliubov import Displacement, Rotation, Squeezing
from .exceptions import ResourceLimitError, ShapeError, TruncationRiskError
from .hermite import as_index

#: Largest dense dimension (cutoff ** n_modes) the oracle will materialize.
DENSE_CAP = 4096

#: Default squeezing guard: reject sigma above this when the cutoff is small.
GUARD_SIGMA = 1.0
GUARD_CUTOFF = 20


@dataclass(frozen=True)
class TruncatedOperator:
    """A dense operator on ``n_modes`` modes with per-mode Fock levels ``0..cutoff-1``.

    Matrix indices use tensor-product (C) ordering, mode 1 slowest.
    """

    cutoff: int
    n_modes: int
    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return self.cutoff ** self.n_modes

    def flat_index(self, occupations) -> int:
        occ = as_index(occupations)
        if occ.shape[0] != self.n_modes:
            raise ShapeError(
                f"index length {occ.shape[0]} does not match mode count {self.n_modes}"
            )
        if np.any(occ >= self.cutoff):
            raise IndexError(
                f"occupation {list(occ)} reaches the cutoff {self.cutoff}"
            )
        return int(np.ravel_multi_index(tuple(occ), (self.cutoff,) * self.n_modes))


def _check_dims(n_modes: int, cutoff: int, dense_cap: int):
    if cutoff < 2:
        raise ValueError(f"cutoff must be at least 2, got {cutoff}")
    if n_modes < 1:
        raise ValueError(f"n_modes must be positive, got {n_modes}")
    dim = cutoff ** n_modes
    if dim > dense_cap:
        raise ResourceLimitError(
            f"dense dimension {dim} exceeds the cap {dense_cap} "
            f"(n_modes={n_modes}, cutoff={cutoff})"
        )


def ladder_matrices(n_modes: int, cutoff: int, dense_cap: int = DENSE_CAP) -> list:
    """Per-mode annihilation operators ``a_j`` as dense matrices."""
    _check_dims(n_modes, cutoff, dense_cap)
    single = np.diag(np.sqrt(np.arange(1, cutoff, dtype=np.float64)), k=1).astype(np.complex128)
    eye = np.eye(cutoff, dtype=np.complex128)
    ops = []
    for j in range(n_modes):
        out = np.eye(1, dtype=np.complex128)
        for slot in range(n_modes):
            out = np.kron(out, single if slot == j else eye)
        ops.append(out)
    return ops


@functools.lru_cache(maxsize=8)
def _quadrature_matrices_cached(n_modes: int, cutoff: int, kind: str, dense_cap: int) -> tuple:
    ladders = ladder_matrices(n_modes, cutoff, dense_cap)
    if kind == "position":
        mats = tuple((a + a.conj().T) / np.sqrt(2.0) for a in ladders)
    elif kind == "momentum":
        mats = tuple(-1j * (a - a.conj().T) / np.sqrt(2.0) for a in ladders)
    else:
        raise ValueError(f"kind must be 'position' or 'momentum', got {kind!r}")
    for m in mats:
        m.setflags(write=False)
    return mats


def quadrature_matrices(n_modes: int, cutoff: int, kind: str, dense_cap: int = DENSE_CAP) -> list:
    """Per-mode position ``(a + a^dag)/sqrt(2)`` or momentum ``-i(a - a^dag)/sqrt(2)``.

    Cached and returned read-only; copy before mutating.
    """
    return list(_quadrature_matrices_cached(n_modes, cutoff, kind, dense_cap))


def _squeeze_guard(sigma, cutoff: int, guard: bool):
    if not guard:
        return
    smax = float(np.max(np.abs(sigma))) if np.size(sigma) else 0.0
    if smax > GUARD_SIGMA and cutoff < GUARD_CUTOFF:
        raise TruncationRiskError(
            f"squeezing {smax:.3f} needs a cutoff of at least {GUARD_CUTOFF} "
            f"(got {cutoff}); raise the cutoff or pass guard=False"
        )


def elementary_matrix(op, cutoff: int, guard: bool = True, dense_cap: int = DENSE_CAP) -> TruncatedOperator:
    """Exponential of the generator of one elementary operator.

    Displacement ``exp(t' adag - t^dag a)``, rotation ``exp(adag' ln(U) a)``,
    squeezing ``exp((adag' sig adag - a' sig a)/2)``; the exponential is
    scipy's scaling-and-squaring Pade implementation.
    """
    n = op.n_modes
    ladders = ladder_matrices(n, cutoff, dense_cap)
    if isinstance(op, Displacement):
        gen = sum(
            op.t[j] * ladders[j].conj().T - np.conj(op.t[j]) * ladders[j]
            for j in range(n)
        )
    elif isinstance(op, Rotation):
        log_u = scipy.linalg.logm(np.asarray(op.u))
        gen = sum(
            log_u[j, k] * ladders[j].conj().T @ ladders[k]
            for j in range(n)
            for k in range(n)
        )
    elif isinstance(op, Squeezing):
        _squeeze_guard(op.sigma, cutoff, guard)
        gen = sum(
            0.5 * op.sigma[j] * (
                ladders[j].conj().T @ ladders[j].conj().T - ladders[j] @ ladders[j]
            )
            for j in range(n)
        )
    else:
        raise TypeError(f"unsupported elementary operation: {type(op).__name__}")
    return TruncatedOperator(cutoff=cutoff, n_modes=n, matrix=scipy.linalg.expm(gen))


def transform_matrix(
    ops,
    cutoff: int,
    n_modes: int | None = None,
    guard: bool = True,
    dense_cap: int = DENSE_CAP,
) -> TruncatedOperator:
    """Ordered product of elementary operators (leftmost acts last on kets)."""
    ops = list(ops)
    if not ops:
        if n_modes is None:
            raise ValueError("empty operation list needs an explicit n_modes")
        _check_dims(n_modes, cutoff, dense_cap)
        dim = cutoff ** n_modes
        return TruncatedOperator(cutoff=cutoff, n_modes=n_modes, matrix=np.eye(dim, dtype=np.complex128))
    n = ops[0].n_modes
    if n_modes is not None and n_modes != n:
        raise ShapeError(f"n_modes={n_modes} does not match the operations ({n})")
    out = None
    for op in ops:
        if op.n_modes != n:
            raise ShapeError(f"mode counts differ within the operation list: {op.n_modes} vs {n}")
        factor = elementary_matrix(op, cutoff, guard=guard, dense_cap=dense_cap)
        out = factor.matrix if out is None else out @ factor.matrix
    return TruncatedOperator(cutoff=cutoff, n_modes=n, matrix=out)


def oracle_element(operator: TruncatedOperator, m, n) -> complex:
    """The amplitude ``<m|T|n>``: row ``m``, column ``n`` of the dense matrix."""
    return complex(operator.matrix[operator.flat_index(m), operator.flat_index(n)])


def oracle_quadrature_element(
    operator: TruncatedOperator,
    m,
    n,
    k,
    kind: str,
    margin: int = 0,
) -> complex:
    """The amplitude ``<m| T prod_j X_j^k_j |n>`` with ``X`` position or momentum.

    Quadrature powers spread occupation by one level per power, so
    ``n_j + k_j`` must stay ``margin`` below the cutoff.
    """
    m = as_index(m)
    n = as_index(n)
    k = as_index(k)
    nm = operator.n_modes
    if not (m.shape[0] == n.shape[0] == k.shape[0] == nm):
        raise ShapeError(
            f"index lengths {m.shape[0]}/{n.shape[0]}/{k.shape[0]} do not match mode count {nm}"
        )
    if np.any(n + k >= operator.cutoff - margin):
        raise IndexError(
            f"n + k = {list(n + k)} reaches cutoff {operator.cutoff} minus margin {margin}"
        )
    if np.all(k == 0):
        return oracle_element(operator, m, n)
    quads = quadrature_matrices(nm, operator.cutoff, kind)
    column = np.zeros(operator.dim, dtype=np.complex128)
    column[operator.flat_index(n)] = 1.0
    for j in range(nm):
        for _ in range(int(k[j])):
            column = quads[j] @ column
    column = operator.matrix @ column
    return complex(column[operator.flat_index(m)])


def unitarity_leakage(operator: TruncatedOperator, max_total: int) -> float:
    """Worst column-norm defect over columns with total occupation <= ``max_total``."""
    worst = 0.0
    shape = (operator.cutoff,) * operator.n_modes
    for flat in range(operator.dim):
        occ = np.unravel_index(flat, shape)
        if sum(occ) <= max_total:
            worst = max(worst, abs(np.linalg.norm(operator.matrix[:, flat]) - 1.0))
    return worst
