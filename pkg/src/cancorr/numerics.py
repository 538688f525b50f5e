"""Dense symmetric decompositions and distribution helpers shared by the fitting routines.

Everything here works on plain float ndarrays.  Eigenvalues and singular
values are always returned in descending order, and eigenvector signs are
fixed deterministically (largest-magnitude entry positive) so repeated runs
and different solvers produce comparable weights.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.optimize import brentq
from scipy.special import gammainc

# Relative symmetry tolerance for inputs that must be symmetric.
SYM_RTOL = 1e-12
# Condition-number ceiling; blocks beyond this are treated as singular.
COND_LIMIT = 1e10


class NumericalError(ValueError):
    """A matrix failed the conditioning or definiteness a solver requires."""


def as_checked_array(a, name: str = "matrix") -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains non-finite entries")
    return a


def check_symmetric(a, name: str = "matrix", rtol: float = SYM_RTOL) -> np.ndarray:
    """Validate that ``a`` is square and symmetric within a relative tolerance."""
    a = as_checked_array(a, name)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be square, got shape {a.shape}")
    if a.size:
        scale = max(float(np.abs(a).max()), 1.0)
        if float(np.abs(a - a.T).max()) > rtol * scale:
            raise ValueError(f"{name} is not symmetric within relative tolerance {rtol:g}")
    return a


def fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip column signs so the largest-magnitude entry of each column is positive.

    Ties in magnitude are broken by the lowest row index (argmax picks the
    first maximiser), which keeps the convention deterministic.
    """
    v = np.array(vectors, dtype=float, copy=True)
    for j in range(v.shape[1]):
        lead = int(np.argmax(np.abs(v[:, j])))
        if v[lead, j] < 0:
            v[:, j] = -v[:, j]
    return v


@dataclass(frozen=True)
class EigenResult:
    """Eigenvalues in descending order with sign-fixed eigenvector columns."""

    values: np.ndarray
    vectors: np.ndarray


@dataclass(frozen=True)
class SvdResult:
    """Thin SVD ``m = u @ diag(s) @ v.T`` with deterministic column signs."""

    u: np.ndarray
    s: np.ndarray
    v: np.ndarray


def sym_eig(a) -> EigenResult:
    """Eigendecomposition of a symmetric matrix.

    Returns eigenvalues descending and orthonormal eigenvectors with the
    largest-magnitude entry of each column positive.
    """
    a = check_symmetric(a)
    values, vectors = scipy.linalg.eigh(a)
    order = np.argsort(-values, kind="stable")
    return EigenResult(values[order], fix_signs(vectors[:, order]))


def gen_eig_sym(a, b) -> EigenResult:
    """Solve ``a v = lam b v`` for symmetric ``a`` and symmetric positive-definite ``b``.

    Eigenvectors are B-normalised (``v.T @ b @ v = 1``) and eigenvalues are
    returned in descending order.
    """
    a = check_symmetric(a, name="A")
    b = check_symmetric(b, name="B")
    if a.shape != b.shape:
        raise ValueError(f"A and B must have equal shapes, got {a.shape} and {b.shape}")
    beigs = scipy.linalg.eigvalsh(b)
    if beigs[-1] <= 0 or beigs[0] <= beigs[-1] / COND_LIMIT:
        raise NumericalError(
            "B is not positive definite within working precision "
            f"(eigenvalue range [{beigs[0]:.3e}, {beigs[-1]:.3e}]); "
            "add ridge regularisation to the constraint blocks"
        )
    values, vectors = scipy.linalg.eigh(a, b)
    order = np.argsort(-values, kind="stable")
    return EigenResult(values[order], fix_signs(vectors[:, order]))


def svd(m) -> SvdResult:
    """Thin singular value decomposition with deterministic signs.

    Column ``j`` of ``u`` has its largest-magnitude entry positive; the
    matching column of ``v`` is flipped together with it so that
    ``m = u @ diag(s) @ v.T`` always holds.
    """
    m = as_checked_array(m)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-d array, got shape {m.shape}")
    u, s, vh = np.linalg.svd(m, full_matrices=False)
    v = vh.T.copy()
    for j in range(u.shape[1]):
        lead = int(np.argmax(np.abs(u[:, j])))
        if u[lead, j] < 0:
            u[:, j] = -u[:, j]
            v[:, j] = -v[:, j]
    return SvdResult(u, s, v)


def inv_sqrt_spd(a) -> np.ndarray:
    """Inverse matrix square root of a symmetric positive-definite matrix."""
    a = check_symmetric(a)
    values, vectors = scipy.linalg.eigh(a)
    if values[-1] <= 0 or values[0] <= values[-1] / COND_LIMIT:
        raise NumericalError(
            "matrix is numerically singular "
            f"(eigenvalue range [{values[0]:.3e}, {values[-1]:.3e}]); "
            "use the ridge-regularised fit instead"
        )
    x = (vectors / np.sqrt(values)) @ vectors.T
    # symmetrise away the last bits of roundoff
    return (x + x.T) / 2.0


def partial_gram_schmidt(k, eta: float) -> np.ndarray:
    """Pivoted incomplete Cholesky factorisation of a positive semi-definite matrix.

    Greedily eliminates the largest remaining diagonal entry until the trace
    of the residual ``k - r @ r.T`` drops to ``eta`` or below.  Returns the
    factor ``r`` with one column per elimination step, in the original row
    order (permuting rows by pivot order gives a lower-trapezoidal matrix).

    Parameters
    ----------
    k : array_like
        Symmetric positive semi-definite matrix, shape (n, n).
    eta : float
        Nonnegative trace cutoff for the residual.

    Returns
    -------
    ndarray of shape (n, m) with m <= n such that ``k ~= r @ r.T``.
    """
    k = check_symmetric(k, name="gram matrix")
    if eta < 0:
        raise ValueError(f"eta must be nonnegative, got {eta}")
    n = k.shape[0]
    d = np.diag(k).astype(float).copy()
    if d.size and float(d.min()) < -1e-10:
        raise NumericalError(
            f"diagonal entry {d.min():.3e} is negative; input is not positive semi-definite"
        )
    r = np.zeros((n, n))
    picked = np.zeros(n, dtype=bool)
    # pivots below this are numerical zeros: extending would only add noise
    pivot_floor = 1e-12 * max(float(d.max()) if d.size else 0.0, 1.0)
    cols = 0
    for _ in range(n):
        remaining = float(d[~picked].sum())
        if remaining <= eta:
            break
        masked = np.where(picked, -np.inf, d)
        pivot_idx = int(np.argmax(masked))
        pivot = float(d[pivot_idx])
        if float(d[~picked].min()) < -1e-10:
            raise NumericalError(
                "residual diagonal went negative during pivoting; "
                "input is not positive semi-definite"
            )
        if pivot <= pivot_floor:
            break
        col = (k[:, pivot_idx] - r[:, :cols] @ r[pivot_idx, :cols]) / np.sqrt(pivot)
        col[picked] = 0.0
        col[pivot_idx] = np.sqrt(pivot)
        r[:, cols] = col
        d -= col * col
        d[pivot_idx] = 0.0
        picked[pivot_idx] = True
        cols += 1
    return r[:, :cols]


def chi2_quantile(p: float, df: int) -> float:
    """Quantile of the chi-squared distribution via the regularised incomplete gamma.

    Solves ``P(df/2, x/2) = p`` for ``x`` with bracketed root refinement.
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie strictly between 0 and 1, got {p}")
    if int(df) != df or df < 1:
        raise ValueError(f"df must be a positive integer, got {df}")
    shape = df / 2.0

    def cdf(x):
        return gammainc(shape, x / 2.0)

    hi = max(4.0 * df, 16.0)
    while cdf(hi) < p:
        hi *= 2.0
    return float(brentq(lambda x: cdf(x) - p, 0.0, hi, xtol=1e-10, maxiter=200))
