"""Multivariate Hermite polynomials and multivariate Gaussian moments.

Two independent evaluation routes are provided for the polynomial family

    H_v(x; L) = (-1)^|v| exp(x' L^-1 x / 2) d^v/dx^v exp(-x' L^-1 x / 2)

with ``L`` complex symmetric: an index-raising recursion (dynamic programming
over the full sub-index lattice) and a direct finite summation that works from
``(mu, W)`` with ``x = W^-1 mu`` and ``L = W^-1`` without inverting ``W``.  The
same summation evaluates raw moments of a multivariate normal distribution,
and the two families convert into each other through

    E(prod y_j^v_j) = i^-|v| H_v(i L y_mean; L),   y ~ N(y_mean, L^-1).
"""

from dataclasses import dataclass, field

import numpy as np

from ._backend import hermite_lattice, kan_sum
from .exceptions import ShapeError

#: Default cap on the total degree of a single evaluation.  Factorial weights
#: are handled in log space, so this guards accuracy rather than overflow;
#: pass ``max_total=None`` to evaluate beyond it.
DEGREE_CAP = 40

_SYMMETRY_TOL = 1e-12
_INVERSE_TOL = 1e-10


def as_index(v) -> np.ndarray:
    """Coerce a multi-index (MultiIndex or sequence of ints) to an int64 array."""
    if isinstance(v, MultiIndex):
        return v.v
    arr = np.atleast_1d(np.asarray(v))
    if arr.ndim != 1:
        raise ShapeError(f"multi-index must be one-dimensional, got shape {arr.shape}")
    out = arr.astype(np.int64)
    if not np.array_equal(out, arr):
        raise ValueError(f"multi-index entries must be integers, got {list(arr)}")
    if np.any(out < 0):
        raise ValueError(f"multi-index entries must be non-negative, got {list(out)}")
    return out


@dataclass(frozen=True)
class MultiIndex:
    """Vector of non-negative integers indexing occupations or derivative orders."""

    v: np.ndarray
    total: int = field(init=False)

    def __post_init__(self):
        arr = np.asarray(self.v, dtype=np.int64)
        if arr.ndim != 1:
            raise ShapeError(f"multi-index must be one-dimensional, got shape {arr.shape}")
        if np.any(arr < 0):
            raise ValueError(f"multi-index entries must be non-negative, got {list(arr)}")
        arr.setflags(write=False)
        object.__setattr__(self, "v", arr)
        object.__setattr__(self, "total", int(arr.sum()))

    def __len__(self):
        return self.v.shape[0]

    def __iter__(self):
        return iter(self.v.tolist())


def _check_symmetric(mat, name, tol=_SYMMETRY_TOL):
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ShapeError(f"{name} must be square, got shape {mat.shape}")
    defect = np.max(np.abs(mat - mat.T)) if mat.size else 0.0
    if defect > tol:
        raise ShapeError(f"{name} is not symmetric (max |A - A^T| = {defect:.3e})")


@dataclass(frozen=True)
class HermiteParams:
    """Parameter matrix, cached inverse, and argument vector of ``H_v(x; lam)``.

    ``lam`` is the complex symmetric parameter matrix; the recursion consumes
    its inverse, which is cached here so repeated evaluations share one solve.
    The derivative definition of the polynomials wants ``Re(lam)`` positive
    definite, but the finite recursion does not, so that check is opt-in
    (``require_spd_real=True``); quadratic-form matrices coming from operator
    transforms routinely violate it and are still fine.
    """

    lam: np.ndarray
    lam_inv: np.ndarray
    x: np.ndarray
    require_spd_real: bool = False

    def __post_init__(self):
        lam = np.asarray(self.lam, dtype=np.complex128)
        lam_inv = np.asarray(self.lam_inv, dtype=np.complex128)
        x = np.asarray(self.x, dtype=np.complex128)
        _check_symmetric(lam, "lam")
        m = lam.shape[0]
        if lam_inv.shape != (m, m):
            raise ShapeError(f"lam_inv shape {lam_inv.shape} does not match lam {lam.shape}")
        if x.shape != (m,):
            raise ShapeError(f"argument length {x.shape} does not match matrix size {m}")
        defect = np.max(np.abs(lam @ lam_inv - np.eye(m))) if m else 0.0
        if defect > _INVERSE_TOL:
            raise ValueError(f"lam_inv is not the inverse of lam (residual {defect:.3e})")
        if self.require_spd_real:
            smallest = float(np.min(np.linalg.eigvalsh(lam.real))) if m else 1.0
            if smallest <= 0:
                raise ValueError(
                    f"Re(lam) is not positive definite (smallest eigenvalue {smallest:.3e})"
                )
        for name, arr in (("lam", lam), ("lam_inv", lam_inv), ("x", x)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def from_lambda(cls, lam, x, require_spd_real: bool = False) -> "HermiteParams":
        """Build from the parameter matrix, inverting it (raises if singular)."""
        lam = np.asarray(lam, dtype=np.complex128)
        return cls(lam, np.linalg.inv(lam), x, require_spd_real)

    @classmethod
    def from_lambda_inv(cls, lam_inv, x, require_spd_real: bool = False) -> "HermiteParams":
        """Build from the inverse parameter matrix (the recursion's native input)."""
        lam_inv = np.asarray(lam_inv, dtype=np.complex128)
        return cls(np.linalg.inv(lam_inv), lam_inv, x, require_spd_real)

    @property
    def dim(self) -> int:
        return self.lam.shape[0]


@dataclass(frozen=True)
class GaussianMomentParams:
    """Mean vector and covariance matrix of a multivariate normal."""

    y_mean: np.ndarray
    covariance: np.ndarray

    def __post_init__(self):
        y = np.asarray(self.y_mean, dtype=np.complex128)
        cov = np.asarray(self.covariance, dtype=np.complex128)
        _check_symmetric(cov, "covariance")
        if y.shape != (cov.shape[0],):
            raise ShapeError(
                f"mean length {y.shape} does not match covariance {cov.shape}"
            )
        y.setflags(write=False)
        cov.setflags(write=False)
        object.__setattr__(self, "y_mean", y)
        object.__setattr__(self, "covariance", cov)

    @property
    def dim(self) -> int:
        return self.y_mean.shape[0]


def _check_degree(total, max_total):
    if max_total is not None and total > max_total:
        raise ValueError(
            f"total degree {total} exceeds the cap {max_total}; "
            "pass max_total=None to evaluate anyway"
        )


def mhp_lattice(vmax, params: HermiteParams) -> np.ndarray:
    """All values ``H_u(x; lam)`` for ``u <= vmax`` elementwise, as an ndarray.

    One dynamic-programming pass over the ``prod(vmax + 1)`` lattice; indices
    are raised in a fixed order (first nonzero slot), so every entry is
    bit-reproducible and independent of which corner the caller reads.
    """
    vmax = as_index(vmax)
    if vmax.shape[0] != params.dim:
        raise ShapeError(f"index length {vmax.shape[0]} does not match dimension {params.dim}")
    y = params.lam_inv @ params.x
    shape = vmax + 1
    flat = hermite_lattice(params.lam_inv, y, shape)
    return flat.reshape(tuple(shape))


def mhp_recursion(v, params: HermiteParams, max_total=DEGREE_CAP) -> complex:
    """Evaluate ``H_v(x; lam)`` by the index-raising recursion."""
    v = as_index(v)
    _check_degree(int(v.sum()), max_total)
    return complex(mhp_lattice(v, params)[tuple(v)])


def mhp_direct(v, mu, w, max_total=DEGREE_CAP) -> complex:
    """Evaluate ``H_v(w^-1 mu; w^-1)`` by direct summation, without inverting ``w``.

    Equals ``mhp_recursion(v, HermiteParams.from_lambda_inv(w, solve(w, mu)))``
    up to rounding; the two routes share no intermediate quantities.
    """
    v = as_index(v)
    mu = np.asarray(mu, dtype=np.complex128)
    w = np.asarray(w, dtype=np.complex128)
    _check_symmetric(w, "w", tol=1e-8)
    if mu.shape != (w.shape[0],) or v.shape[0] != w.shape[0]:
        raise ShapeError(
            f"inconsistent shapes: v has {v.shape[0]} entries, mu {mu.shape}, w {w.shape}"
        )
    _check_degree(int(v.sum()), max_total)
    return complex(kan_sum(v, w, mu, True))


def mgm_direct(v, params: GaussianMomentParams, max_total=DEGREE_CAP) -> complex:
    """Moment ``E(prod_j y_j^v_j)`` of ``N(y_mean, covariance)`` by direct summation."""
    v = as_index(v)
    if v.shape[0] != params.dim:
        raise ShapeError(f"index length {v.shape[0]} does not match dimension {params.dim}")
    _check_degree(int(v.sum()), max_total)
    return complex(kan_sum(v, params.covariance, params.y_mean, False))


def mgm_to_mhp(v, params: GaussianMomentParams, max_total=DEGREE_CAP) -> complex:
    """The same moment as ``mgm_direct``, but routed through the Hermite recursion.

    Uses ``E = i^-|v| H_v(i lam y_mean; lam)`` with ``lam = covariance^-1``; the
    recursion consumes ``lam^-1 = covariance`` directly, so nothing is inverted.
    """
    v = as_index(v)
    if v.shape[0] != params.dim:
        raise ShapeError(f"index length {v.shape[0]} does not match dimension {params.dim}")
    total = int(v.sum())
    _check_degree(total, max_total)
    y = 1j * params.y_mean
    flat = hermite_lattice(params.covariance, y, v + 1)
    h = flat.reshape(tuple(v + 1))[tuple(v)]
    return complex((-1j) ** total * h)


def mhp_to_mgm(v, params: HermiteParams, y_mean=None, max_total=DEGREE_CAP) -> complex:
    """The same value as ``mhp_recursion``, but routed through the moment summation.

    Inverts the identity: ``H_v(x; lam) = i^|v| E(prod y^v)`` for the normal
    distribution with covariance ``lam^-1`` and mean ``-i lam^-1 x`` (passed
    explicitly via ``y_mean`` when the caller already has it).
    """
    v = as_index(v)
    if v.shape[0] != params.dim:
        raise ShapeError(f"index length {v.shape[0]} does not match dimension {params.dim}")
    total = int(v.sum())
    _check_degree(total, max_total)
    if y_mean is None:
        y_mean = -1j * (params.lam_inv @ params.x)
    else:
        y_mean = np.asarray(y_mean, dtype=np.complex128)
    moment = kan_sum(v, params.lam_inv, y_mean, False)
    return complex(1j ** total * moment)
