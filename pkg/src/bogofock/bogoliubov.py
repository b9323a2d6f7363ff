"""Multimode Bogoliubov transformations and their elementary decompositions.

A transform is the triple ``(S, R, t)`` acting on mode operators as
``a_j -> sum_k S_jk a_k - R_jk a_k^dag + t_j`` (adjoint action of the
associated Gaussian operator).  The pair ``(S, R)`` must satisfy the four
symplectic identities; ``t`` is an arbitrary complex displacement.
"""

import json
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .exceptions import InvalidTransformError, ShapeError

#: Default max-abs tolerance for the symplectic identities.
SYMPLECTIC_TOL = 1e-10

#: Default max-abs tolerance for reconstructing (S, R) from a factorization.
RECONSTRUCTION_TOL = 1e-10


# ---------------------------------------------------------------------------
# elementary operations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Displacement:
    """Mode displacement by a complex vector."""

    t: np.ndarray

    def __post_init__(self):
        t = np.atleast_1d(np.asarray(self.t, dtype=np.complex128))
        if t.ndim != 1:
            raise ShapeError(f"displacement must be a vector, got shape {t.shape}")
        t.setflags(write=False)
        object.__setattr__(self, "t", t)

    @property
    def n_modes(self):
        return self.t.shape[0]


@dataclass(frozen=True)
class Rotation:
    """Passive mode mixing by a unitary matrix."""

    u: np.ndarray
    tol: float = SYMPLECTIC_TOL

    def __post_init__(self):
        u = np.atleast_2d(np.asarray(self.u, dtype=np.complex128))
        if u.ndim != 2 or u.shape[0] != u.shape[1]:
            raise ShapeError(f"rotation matrix must be square, got shape {u.shape}")
        defect = np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0])))
        if defect > self.tol:
            raise InvalidTransformError(f"rotation matrix is not unitary (residual {defect:.3e})")
        u.setflags(write=False)
        object.__setattr__(self, "u", u)

    @property
    def n_modes(self):
        return self.u.shape[0]


@dataclass(frozen=True)
class Squeezing:
    """Single-mode squeezing with one real parameter per mode."""

    sigma: np.ndarray

    def __post_init__(self):
        sig = np.atleast_1d(np.asarray(self.sigma, dtype=np.float64))
        if sig.ndim != 1:
            raise ShapeError(f"squeezing parameters must be a vector, got shape {sig.shape}")
        sig.setflags(write=False)
        object.__setattr__(self, "sigma", sig)

    @property
    def n_modes(self):
        return self.sigma.shape[0]


# ---------------------------------------------------------------------------
# the transform itself
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BogoliubovTransform:
    """The ``(S, R, t)`` triple of a multimode Bogoliubov transformation.

    Constructing one validates the symplectic identities at ``tol`` unless
    ``validate=False`` (useful to build deliberately broken transforms for
    diagnostics; every numerical formula downstream assumes validity).
    """

    s: np.ndarray
    r: np.ndarray
    t: np.ndarray
    tol: float = SYMPLECTIC_TOL
    validate: bool = True
    n_modes: int = field(init=False)

    def __post_init__(self):
        s = np.atleast_2d(np.asarray(self.s, dtype=np.complex128))
        r = np.atleast_2d(np.asarray(self.r, dtype=np.complex128))
        t = np.atleast_1d(np.asarray(self.t, dtype=np.complex128))
        n = s.shape[0]
        if s.shape != (n, n):
            raise ShapeError(f"S must be square, got shape {s.shape}")
        if r.shape != (n, n):
            raise ShapeError(f"R shape {r.shape} does not match S shape {s.shape}")
        if t.shape != (n,):
            raise ShapeError(f"t length {t.shape} does not match mode count {n}")
        for name, arr in (("s", s), ("r", r), ("t", t)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "n_modes", n)
        if self.validate:
            report = validate_symplectic(self, tol=self.tol)
            if not report.passed:
                raise InvalidTransformError(
                    f"transform violates the symplectic identities: {report}"
                )

    @classmethod
    def identity(cls, n_modes: int) -> "BogoliubovTransform":
        return cls(np.eye(n_modes), np.zeros((n_modes, n_modes)), np.zeros(n_modes))

    @property
    def k_matrix(self) -> np.ndarray:
        """The doubled-up transformation matrix ``[[S, -R], [-R*, S*]]``."""
        return np.block([[self.s, -self.r], [-self.r.conj(), self.s.conj()]])

    @property
    def l_vector(self) -> np.ndarray:
        """The doubled-up displacement ``(t, t*)``."""
        return np.concatenate([self.t, self.t.conj()])

    def inverse(self) -> "BogoliubovTransform":
        """The transform of the adjoint (inverse) operator: ``(S^dag, -R^T, -(S^dag t + R^T t*))``."""
        s_inv = self.s.conj().T
        r_inv = -self.r.T
        t_inv = -(s_inv @ self.t + self.r.T @ self.t.conj())
        return BogoliubovTransform(s_inv, r_inv, t_inv, tol=self.tol)


@dataclass(frozen=True)
class SymplecticReport:
    """Max-abs residuals of the four symplectic identities."""

    ss_dag_minus_rr_dag: float
    sr_transpose: float
    sdag_s_minus_rt_rconj: float
    rdag_s: float
    tol: float
    passed: bool

    def residuals(self) -> dict:
        return {
            "ss_dag_minus_rr_dag": self.ss_dag_minus_rr_dag,
            "sr_transpose": self.sr_transpose,
            "sdag_s_minus_rt_rconj": self.sdag_s_minus_rt_rconj,
            "rdag_s": self.rdag_s,
        }

    def __str__(self):
        worst = max(self.residuals().values())
        return f"worst residual {worst:.3e} vs tolerance {self.tol:.1e}"


def validate_symplectic(transform: BogoliubovTransform, tol: float = SYMPLECTIC_TOL) -> SymplecticReport:
    """Report the residuals of the four symplectic identities on ``(S, R)``.

    The identities are ``S S^dag - R R^dag = I``, ``S R^T = R S^T``,
    ``S^dag S - R^T R^* = I`` and ``R^dag S = S^T R^*``; the report passes iff
    every max-abs residual is at most ``tol``.
    """
    s, r = transform.s, transform.r
    n = s.shape[0]
    eye = np.eye(n)
    res = (
        np.max(np.abs(s @ s.conj().T - r @ r.conj().T - eye)),
        np.max(np.abs(s @ r.T - r @ s.T)),
        np.max(np.abs(s.conj().T @ s - r.T @ r.conj() - eye)),
        np.max(np.abs(r.conj().T @ s - s.T @ r.conj())),
    )
    res = tuple(float(x) for x in res)
    return SymplecticReport(*res, tol=tol, passed=all(x <= tol for x in res))


def compose(a: BogoliubovTransform, b: BogoliubovTransform) -> BogoliubovTransform:
    """Transform of the operator product ``O_a O_b``.

    The adjoint action composes as ``K = K_a K_b`` and ``l = K_a l_b + l_a``,
    which in block form reads as below.
    """
    if a.n_modes != b.n_modes:
        raise ShapeError(f"mode counts differ: {a.n_modes} vs {b.n_modes}")
    s = a.s @ b.s + a.r @ b.r.conj()
    r = a.s @ b.r + a.r @ b.s.conj()
    t = a.s @ b.t - a.r @ b.t.conj() + a.t
    return BogoliubovTransform(s, r, t, tol=max(a.tol, b.tol))


def from_elementary(ops, tol: float = SYMPLECTIC_TOL) -> BogoliubovTransform:
    """Assemble the transform of an ordered operator product.

    ``ops`` lists factors left to right, i.e. ``[A, B]`` builds the operator
    ``A B`` (with ``B`` acting first on kets).  Factors map to transforms as
    displacement ``(I, 0, t)``, rotation ``(U, 0, 0)``, squeezing
    ``(cosh sig, -sinh sig, 0)``.
    """
    ops = list(ops)
    if not ops:
        raise ValueError("empty operation list; use BogoliubovTransform.identity instead")
    n = ops[0].n_modes
    out = BogoliubovTransform.identity(n)
    for op in ops:
        if op.n_modes != n:
            raise ShapeError(f"mode counts differ within the operation list: {op.n_modes} vs {n}")
        if isinstance(op, Displacement):
            factor = BogoliubovTransform(np.eye(n), np.zeros((n, n)), op.t, tol=tol)
        elif isinstance(op, Rotation):
            factor = BogoliubovTransform(op.u, np.zeros((n, n)), np.zeros(n), tol=tol)
        elif isinstance(op, Squeezing):
            factor = BogoliubovTransform(
                np.diag(np.cosh(op.sigma)).astype(np.complex128),
                -np.diag(np.sinh(op.sigma)).astype(np.complex128),
                np.zeros(n),
                tol=tol,
            )
        else:
            raise TypeError(f"unsupported elementary operation: {type(op).__name__}")
        out = compose(out, factor)
    return out


# ---------------------------------------------------------------------------
# Bloch-Messiah factorization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BlochMessiah:
    """Factorization ``S = U_L cosh(sig) U_R^dag``, ``R = -U_L sinh(sig) U_R^T``.

    ``sigma`` is sorted descending.  For degenerate squeezing values only the
    reconstructed product is unique, not the individual unitaries.
    """

    u_left: np.ndarray
    sigma: np.ndarray
    u_right: np.ndarray

    def __post_init__(self):
        for name in ("u_left", "u_right"):
            arr = np.asarray(getattr(self, name), dtype=np.complex128)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        sig = np.asarray(self.sigma, dtype=np.float64)
        sig.setflags(write=False)
        object.__setattr__(self, "sigma", sig)

    def reconstruct_s(self) -> np.ndarray:
        return self.u_left @ np.diag(np.cosh(self.sigma)) @ self.u_right.conj().T

    def reconstruct_r(self) -> np.ndarray:
        return -self.u_left @ np.diag(np.sinh(self.sigma)) @ self.u_right.T

    def to_ops(self, t=None) -> list:
        """Elementary-operator list ``[D(t)?, Rot(U_L), Sq(sigma), Rot(U_R^dag)]``."""
        ops = [Rotation(self.u_left), Squeezing(self.sigma), Rotation(self.u_right.conj().T)]
        if t is not None and np.any(np.asarray(t) != 0):
            ops.insert(0, Displacement(t))
        return ops


def takagi(matrix: np.ndarray, group_tol: float = 1e-8):
    """Symmetric factorization ``A = Q diag(vals) Q^T`` of a complex symmetric matrix.

    Built on the SVD; within each group of (numerically) equal singular values
    the left/right singular bases are glued by a matrix square root, which is
    what makes the factor symmetric.  Returns ``(vals, Q)`` with ``vals``
    descending and ``Q`` unitary.
    """
    a = np.asarray(matrix, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeError(f"matrix must be square, got shape {a.shape}")
    defect = np.max(np.abs(a - a.T)) if a.size else 0.0
    if defect > 1e-10 * max(1.0, np.max(np.abs(a))):
        raise ShapeError(f"matrix is not symmetric (max |A - A^T| = {defect:.3e})")

    v, vals, wh = np.linalg.svd(a)
    w = wh.conj().T
    scale = max(1.0, vals[0]) if vals.size else 1.0

    blocks = []
    start = 0
    for i in range(1, len(vals) + 1):
        if i == len(vals) or vals[start] - vals[i] > group_tol * scale:
            idx = slice(start, i)
            z = v[:, idx].T @ w[:, idx]
            blocks.append(scipy.linalg.sqrtm(z))
            start = i
    q = v @ scipy.linalg.block_diag(*blocks).conj() if blocks else v
    return vals, q


def bloch_messiah(
    transform: BogoliubovTransform,
    tol: float = RECONSTRUCTION_TOL,
) -> BlochMessiah:
    """Factor a valid transform into rotation / squeezing / rotation.

    The squeezing parameters are the arccosh of the singular values of ``S``;
    the unitaries come from the SVD of ``S`` with block phases fixed so that
    the same pair also reproduces ``R``.  Raises if the input fails symplectic
    validation or if the reconstruction residual exceeds ``tol``.
    """
    report = validate_symplectic(transform, tol=transform.tol)
    if not report.passed:
        raise InvalidTransformError(f"cannot factor a non-symplectic transform: {report}")

    s, r = transform.s, transform.r
    n = transform.n_modes
    a, c, bh = np.linalg.svd(s)
    b = bh.conj().T
    c = np.clip(c, 1.0, None)
    sigma = np.arccosh(c)

    # D = A^dag R conj(B) is block diagonal over groups of equal singular
    # values, complex symmetric, with singular values sinh(sigma); a Takagi
    # factor per block turns it into exactly -sinh(sigma).
    d = a.conj().T @ r @ b.conj()
    x = np.eye(n, dtype=np.complex128)
    group_tol = 1e-8 * max(1.0, c[0])
    start = 0
    for i in range(1, n + 1):
        if i == n or c[start] - c[i] > group_tol:
            idx = slice(start, i)
            d_blk = (d[idx, idx] + d[idx, idx].T) / 2
            # effectively-zero blocks (no squeezing) need no phase fixing, and
            # a Takagi factor of numerical noise would be meaningless
            if d_blk.size and np.max(np.abs(d_blk)) > 1e-13 * max(1.0, c[0]):
                _, q = takagi(d_blk)
                x[idx, idx] = 1j * q
            start = i

    u_left = a @ x
    u_right = b @ x
    result = BlochMessiah(u_left, sigma, u_right)

    res = max(
        np.max(np.abs(result.reconstruct_s() - s)),
        np.max(np.abs(result.reconstruct_r() - r)),
    )
    if res > tol:
        raise InvalidTransformError(
            f"Bloch-Messiah reconstruction residual {res:.3e} exceeds tolerance {tol:.1e}"
        )
    return result


# ---------------------------------------------------------------------------
# random instances
# ---------------------------------------------------------------------------

def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Gaussian matrix.

    The R-diagonal phases are divided out, which both fixes the distribution
    and makes the draw reproducible for a given generator state.
    """
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, upper = np.linalg.qr(z)
    phases = np.diag(upper).copy()
    phases = phases / np.abs(phases)
    return q * phases


def random_transform(
    n_modes: int,
    max_squeeze: float,
    max_displacement: float,
    seed,
) -> BogoliubovTransform:
    """Deterministic random transform: Haar rotations, uniform squeezing, disk displacement."""
    if n_modes < 1:
        raise ValueError(f"n_modes must be positive, got {n_modes}")
    if max_squeeze < 0 or max_displacement < 0:
        raise ValueError("max_squeeze and max_displacement must be non-negative")
    rng = np.random.default_rng(seed)
    u_left = haar_unitary(n_modes, rng)
    u_right = haar_unitary(n_modes, rng)
    sigma = rng.uniform(0.0, max_squeeze, n_modes) if max_squeeze > 0 else np.zeros(n_modes)
    radius = max_displacement * np.sqrt(rng.uniform(0.0, 1.0, n_modes))
    angle = rng.uniform(0.0, 2 * np.pi, n_modes)
    t = radius * np.exp(1j * angle)
    ops = [
        Displacement(t),
        Rotation(u_left),
        Squeezing(sigma),
        Rotation(u_right.conj().T),
    ]
    return from_elementary(ops)


# ---------------------------------------------------------------------------
# JSON serialization
# ---------------------------------------------------------------------------

def _to_pairs(arr) -> list:
    arr = np.asarray(arr, dtype=np.complex128)
    if arr.ndim == 1:
        return [[float(z.real), float(z.imag)] for z in arr]
    return [[[float(z.real), float(z.imag)] for z in row] for row in arr]


def _from_pairs(obj, ndim) -> np.ndarray:
    arr = np.asarray(obj, dtype=np.float64)
    if arr.ndim != ndim + 1 or arr.shape[-1] != 2:
        raise ValueError(f"expected nested [re, im] pairs of depth {ndim + 1}, got shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def transform_to_dict(transform: BogoliubovTransform) -> dict:
    """Spec wire format: row-major matrices of [re, im] pairs."""
    return {
        "n_modes": transform.n_modes,
        "S": _to_pairs(transform.s),
        "R": _to_pairs(transform.r),
        "t": _to_pairs(transform.t),
    }


def transform_from_dict(data: dict, tol: float = SYMPLECTIC_TOL, validate: bool = True) -> BogoliubovTransform:
    try:
        n = int(data["n_modes"])
        s = _from_pairs(data["S"], 2)
        r = _from_pairs(data["R"], 2)
        t = _from_pairs(data["t"], 1)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed transform object: {exc}") from exc
    if s.shape != (n, n):
        raise ShapeError(f"S shape {s.shape} does not match n_modes {n}")
    return BogoliubovTransform(s, r, t, tol=tol, validate=validate)


def ops_to_dict(ops) -> dict:
    entries = []
    for op in ops:
        if isinstance(op, Displacement):
            entries.append({"type": "displacement", "t": _to_pairs(op.t)})
        elif isinstance(op, Rotation):
            entries.append({"type": "rotation", "U": _to_pairs(op.u)})
        elif isinstance(op, Squeezing):
            entries.append({"type": "squeezing", "sigma": [float(x) for x in op.sigma]})
        else:
            raise TypeError(f"unsupported elementary operation: {type(op).__name__}")
    return {"ops": entries}


def ops_from_dict(data: dict) -> list:
    try:
        raw = data["ops"]
    except (KeyError, TypeError) as exc:
        raise ValueError("malformed operation list: missing 'ops'") from exc
    ops = []
    for entry in raw:
        kind = entry.get("type")
        if kind == "displacement":
            ops.append(Displacement(_from_pairs(entry["t"], 1)))
        elif kind == "rotation":
            ops.append(Rotation(_from_pairs(entry["U"], 2)))
        elif kind == "squeezing":
            ops.append(Squeezing(np.asarray(entry["sigma"], dtype=np.float64)))
        else:
            raise ValueError(f"unknown elementary operation type: {kind!r}")
    return ops


def transform_to_json(transform: BogoliubovTransform) -> str:
    return json.dumps(transform_to_dict(transform))


def transform_from_json(text: str, tol: float = SYMPLECTIC_TOL, validate: bool = True) -> BogoliubovTransform:
    return transform_from_dict(json.loads(text), tol=tol, validate=validate)
