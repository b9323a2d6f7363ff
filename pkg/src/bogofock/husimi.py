"""Closed-form generating functions of Fock-basis matrix elements.

For a Gaussian operator with transform ``(S, R, t)`` the (unnormalized) Husimi
function is ``c0 * exp(-abar' V abar / 2 + mu' abar)`` over the doubled
coherent-state vector ``abar = (alpha, alpha*)``.  Matrix elements follow by
differentiation, which lands on the multivariate Hermite polynomials:

    <m|O|n> = c0 * prod_j (n_j! m_j!)^(-1/2) * H_(n,m)(V^-1 mu; V^-1)

with the polynomial index ordered ket-sector first.  Appending an auxiliary
derivative variable per mode extends the same machinery to matrix elements of
the operator times powers of the position or momentum quadratures.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from ._backend import kan_sum, scaled_lattice
from .bogoliubov import BogoliubovTransform, validate_symplectic
from .exceptions import InvalidTransformError, ResourceLimitError, ShapeError
from .hermite import as_index

#: Max-abs symmetry tolerance for the assembled quadratic-form matrices.
V_SYMMETRY_TOL = 1e-10

#: Warn when the condition number of S crosses this (inverses degrade).
CONDITION_WARN = 1e8

#: Default cap on the number of lattice points a single block may fill.
LATTICE_CAP = 2_000_000

_POSITION = "position"
_MOMENTUM = "momentum"


def _inverses(transform: BogoliubovTransform):
    """Return ((S^dag)^-1, (S^*)^-1), warning when S is badly conditioned."""
    s = transform.s
    cond = np.linalg.cond(s)
    if cond > CONDITION_WARN:
        warnings.warn(
            f"S has condition number {cond:.2e}; inverse-based formulas lose "
            "roughly that many digits",
            stacklevel=3,
        )
    s_inv = np.linalg.inv(s)
    return s_inv.conj().T, s_inv.conj()


def _check_valid(transform: BogoliubovTransform):
    report = validate_symplectic(transform, tol=transform.tol)
    if not report.passed:
        raise InvalidTransformError(f"transform is not symplectic: {report}")


def _check_symmetry(mat, what):
    defect = float(np.max(np.abs(mat - mat.T)))
    if defect > V_SYMMETRY_TOL:
        raise InvalidTransformError(
            f"{what} came out asymmetric (defect {defect:.3e}); "
            "the input transform is too far from symplectic"
        )


@dataclass(frozen=True)
class HusimiGaussian:
    """Quadratic form ``(V, mu, c0)`` generating the Fock elements of one operator."""

    v_matrix: np.ndarray
    mu: np.ndarray
    c0: complex
    n_modes: int

    def __post_init__(self):
        v = np.asarray(self.v_matrix, dtype=np.complex128)
        mu = np.asarray(self.mu, dtype=np.complex128)
        two_n = 2 * self.n_modes
        if v.shape != (two_n, two_n):
            raise ShapeError(f"V must be {two_n}x{two_n}, got {v.shape}")
        if mu.shape != (two_n,):
            raise ShapeError(f"mu must have length {two_n}, got {mu.shape}")
        _check_symmetry(v, "V")
        v.setflags(write=False)
        mu.setflags(write=False)
        object.__setattr__(self, "v_matrix", v)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "c0", complex(self.c0))


@dataclass(frozen=True)
class QuadratureHusimi:
    """Extension of :class:`HusimiGaussian` by one derivative variable per mode.

    ``kind`` selects which quadrature the auxiliary variables generate powers
    of; the top-left ``2N x 2N`` block of ``v_matrix`` is the parent ``V``.
    """

    v_matrix: np.ndarray
    mu: np.ndarray
    c0: complex
    kind: str
    n_modes: int

    def __post_init__(self):
        if self.kind not in (_POSITION, _MOMENTUM):
            raise ValueError(f"kind must be 'position' or 'momentum', got {self.kind!r}")
        v = np.asarray(self.v_matrix, dtype=np.complex128)
        mu = np.asarray(self.mu, dtype=np.complex128)
        three_n = 3 * self.n_modes
        if v.shape != (three_n, three_n):
            raise ShapeError(f"extended V must be {three_n}x{three_n}, got {v.shape}")
        if mu.shape != (three_n,):
            raise ShapeError(f"extended mu must have length {three_n}, got {mu.shape}")
        _check_symmetry(v, "extended V")
        v.setflags(write=False)
        mu.setflags(write=False)
        object.__setattr__(self, "v_matrix", v)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "c0", complex(self.c0))


@dataclass(frozen=True)
class WMatrix:
    """The symmetric kernel of the coherent-state integral and its closed-form inverse.

    Purely diagnostic: the element formulas never invert ``W`` numerically, but
    its identities (``W W^-1 = I`` and ``(-1)^N det W = |det S|^2``) are sharp
    consistency checks on a transform.
    """

    w: np.ndarray
    w_inv: np.ndarray
    n_modes: int

    def inverse_residual(self) -> float:
        eye = np.eye(2 * self.n_modes)
        return float(np.max(np.abs(self.w @ self.w_inv - eye)))

    def det_residual(self, transform: BogoliubovTransform) -> float:
        """Relative error of ``(-1)^N det W`` against ``|det S|^2``."""
        sign_w, log_w = np.linalg.slogdet(self.w)
        sign_s, log_s = np.linalg.slogdet(transform.s)
        lhs = (-1.0) ** self.n_modes * sign_w * np.exp(log_w)
        rhs = np.exp(2.0 * log_s)
        return float(abs(lhs - rhs) / abs(rhs))


def w_matrix(transform: BogoliubovTransform) -> WMatrix:
    """Assemble ``W`` and its closed-form inverse from the transform blocks."""
    _check_valid(transform)
    s, r = transform.s, transform.r
    n = transform.n_modes
    eye = np.eye(n)
    s_inv = np.linalg.inv(s)
    w = np.block([
        [-s.T @ r.conj(), s.T @ s.conj()],
        [s.conj().T @ s, -r.T @ s.conj()],
    ])
    w_inv = np.block([
        [r.T @ s_inv.T, eye],
        [eye, s_inv.conj() @ r.conj()],
    ])
    return WMatrix(w=w, w_inv=w_inv, n_modes=n)


def gaussian_qfunction(transform: BogoliubovTransform) -> HusimiGaussian:
    """Build ``(V, mu, c0)`` for the Gaussian operator of ``transform``.

    Block assembly (``sdi = (S^dag)^-1``, ``sci = (S^*)^-1``, ``l = (t, t*)``):

        V  = [[-R^dag sdi, -sci], [-sdi, sdi R^T]]
        mu = l' [[0, I], [-sdi, sdi R^T]]
        c0 = |det S|^(-1/2) exp(-l' [[0, 0], [I, sdi R^T]] l / 2)
    """
    _check_valid(transform)
    s, r, t = transform.s, transform.r, transform.t
    n = transform.n_modes
    sdi, sci = _inverses(transform)
    zero = np.zeros((n, n))
    eye = np.eye(n)

    v = np.block([
        [-r.conj().T @ sdi, -sci],
        [-sdi, sdi @ r.T],
    ])
    ell = np.concatenate([t, t.conj()])
    mu = np.block([[zero, eye], [-sdi, sdi @ r.T]]).T @ ell
    quad = np.block([[zero, zero], [eye, sdi @ r.T]])
    _, logdet = np.linalg.slogdet(s)
    c0 = np.exp(-0.5 * (ell @ (quad @ ell)) - 0.5 * logdet)
    return HusimiGaussian(v_matrix=v, mu=mu, c0=c0, n_modes=n)


def quadrature_qfunction(transform: BogoliubovTransform, kind: str) -> QuadratureHusimi:
    """Extend the generating function by ``exp(lambda' Q)`` or ``exp(lambda' P)``.

    Both kinds share one algebra; the normal-ordered form of the exponential
    only changes two scalar couplings (``w`` on the integration variable,
    ``p`` on the coherent amplitude):  position ``w = p = 1/sqrt(2)``,
    momentum ``w = i/sqrt(2)``, ``p = -i/sqrt(2)``.  The extra blocks are

        V_al  = -[w (S^*)^-1 R^* + p I ; w (S^dag)^-1]      (2N x N)
        V_ll  = -w^2 (S^*)^-1 R^* - I/2
        mu_l  = -w (S^*)^-1 t^*
    """
    base = gaussian_qfunction(transform)
    s, r, t = transform.s, transform.r, transform.t
    n = transform.n_modes
    sdi, sci = _inverses(transform)
    if kind == _POSITION:
        w = p = 1.0 / np.sqrt(2.0)
    elif kind == _MOMENTUM:
        w = 1.0j / np.sqrt(2.0)
        p = -1.0j / np.sqrt(2.0)
    else:
        raise ValueError(f"kind must be 'position' or 'momentum', got {kind!r}")

    scr = sci @ r.conj()
    coupling = np.vstack([w * scr + p * np.eye(n), w * sdi])
    lam_block = -(w * w) * scr - 0.5 * np.eye(n)
    vbar = np.block([
        [base.v_matrix, -coupling],
        [-coupling.T, lam_block],
    ])
    mubar = np.concatenate([base.mu, -w * (sci @ t.conj())])
    return QuadratureHusimi(v_matrix=vbar, mu=mubar, c0=base.c0, kind=kind, n_modes=n)


# ---------------------------------------------------------------------------
# element evaluation
# ---------------------------------------------------------------------------

def _inv_sqrt_factorial(k: int) -> float:
    return math.exp(-0.5 * math.lgamma(k + 1.0))


def _norm_weights(shape, normalized_axes):
    """Per-axis weight tables for :func:`bogofock._backend.scaled_lattice`."""
    weights = []
    offsets = [0]
    for axis, extent in enumerate(shape):
        if axis in normalized_axes:
            weights.extend(_inv_sqrt_factorial(k) for k in range(extent))
        else:
            weights.extend([1.0] * extent)
        offsets.append(len(weights))
    return np.asarray(weights, dtype=np.float64), np.asarray(offsets[:-1], dtype=np.int64)


def _element(v_matrix, mu, c0, v, n_normalized, method):
    """One normalized amplitude; ``v`` is the full lattice index, ``c0`` the scale.

    Only the first ``n_normalized`` axes carry the inverse-square-root
    factorial normalization (the Fock sectors; derivative sectors do not).
    """
    shape = v + 1
    if method == "recursion":
        weights, offsets = _norm_weights(shape, set(range(n_normalized)))
        flat = scaled_lattice(v_matrix, mu, shape, complex(c0), weights, offsets)
        return complex(flat[-1])
    if method == "direct":
        value = kan_sum(v, v_matrix, mu, True) * complex(c0)
        for axis in range(n_normalized):
            value = value * _inv_sqrt_factorial(int(v[axis]))
        return complex(value)
    raise ValueError(f"method must be 'recursion' or 'direct', got {method!r}")


def matrix_element(h: HusimiGaussian, m, n, method: str = "recursion") -> complex:
    """Amplitude ``<m|O|n>`` of the Gaussian operator behind ``h``.

    ``method='recursion'`` walks the index lattice exactly as
    :func:`element_block` does, so single elements and blocks agree bitwise;
    ``method='direct'`` is the independent finite-summation route.
    """
    m = as_index(m)
    n = as_index(n)
    if m.shape[0] != h.n_modes or n.shape[0] != h.n_modes:
        raise ShapeError(
            f"index lengths {m.shape[0]}/{n.shape[0]} do not match mode count {h.n_modes}"
        )
    v = np.concatenate([n, m])
    return _element(h.v_matrix, h.mu, h.c0, v, 2 * h.n_modes, method)


def quadrature_element(q: QuadratureHusimi, m, n, k, method: str = "recursion") -> complex:
    """Amplitude ``<m| O prod_j X_j^k_j |n>`` with ``X`` the quadrature of ``q.kind``.

    The derivative orders ``k`` carry no factorial normalization; only the
    Fock sectors are normalized.
    """
    m = as_index(m)
    n = as_index(n)
    k = as_index(k)
    if not (m.shape[0] == n.shape[0] == k.shape[0] == q.n_modes):
        raise ShapeError(
            f"index lengths {m.shape[0]}/{n.shape[0]}/{k.shape[0]} "
            f"do not match mode count {q.n_modes}"
        )
    v = np.concatenate([n, m, k])
    return _element(q.v_matrix, q.mu, q.c0, v, 2 * q.n_modes, method)


def element_block(h: HusimiGaussian, max_m, max_n, lattice_cap: int = LATTICE_CAP) -> np.ndarray:
    """Dense block of ``<m|O|n>`` for all ``m <= max_m``, ``n <= max_n`` elementwise.

    One memoized recursion pass over the full lattice; entry ``[m..., n...]``
    is bit-identical to ``matrix_element(h, m, n)``.

    Returns:
        Complex array of shape ``(*max_m + 1, *max_n + 1)``.
    """
    max_m = as_index(max_m)
    max_n = as_index(max_n)
    nm = h.n_modes
    if max_m.shape[0] != nm or max_n.shape[0] != nm:
        raise ShapeError(
            f"bound lengths {max_m.shape[0]}/{max_n.shape[0]} do not match mode count {nm}"
        )
    shape = np.concatenate([max_n, max_m]) + 1
    size = int(np.prod(shape))
    if size > lattice_cap:
        raise ResourceLimitError(
            f"requested lattice has {size} points, above the cap {lattice_cap}"
        )
    weights, offsets = _norm_weights(shape, set(range(2 * nm)))
    flat = scaled_lattice(h.v_matrix, h.mu, shape, complex(h.c0), weights, offsets)
    block = flat.reshape(tuple(shape))
    # lattice axes are (n-sector, m-sector); the public block is indexed [m, n]
    return np.transpose(block, axes=list(range(nm, 2 * nm)) + list(range(nm)))


def heuristic_cutoffs(transform: BogoliubovTransform, n=None) -> np.ndarray:
    """Per-mode Fock bounds that capture a state's norm to better than 1e-4.

    ``M = ceil(4 + 24 sinh^2(s) + 2 |t|^2 + 8 |t| sinh(s)) + 3 sum(n)`` with
    ``s`` the largest squeezing parameter and ``|t|`` the norm of the whole
    displacement vector (rotations can concentrate all of it into one mode).
    The squeezing coefficient is sized for the squeezed-vacuum tail, which
    decays only like ``tanh(s)^M`` and therefore needs far more levels than
    the mean photon number ``sinh^2(s)`` suggests; the cross term covers
    displaced squeezed states and the ``n`` term excited inputs.
    """
    smax = float(np.arccosh(max(np.linalg.norm(transform.s, 2), 1.0)))
    extra = 3 * int(np.sum(as_index(n))) if n is not None else 0
    tnorm = float(np.linalg.norm(transform.t))
    bound = np.ceil(
        4.0 + 24.0 * np.sinh(smax) ** 2 + 2.0 * tnorm ** 2 + 8.0 * tnorm * np.sinh(smax)
    )
    return np.full(transform.n_modes, int(bound) + extra, dtype=np.int64)
