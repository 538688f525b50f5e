"""Kernel canonical correlation: Gram construction, the direct pencil, and the
reduced-rank route through pivoted incomplete Cholesky factors."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np
import scipy.linalg
from scipy.spatial.distance import pdist, squareform

from .dataset import PairedDataset
from .numerics import NumericalError, check_symmetric, gen_eig_sym, partial_gram_schmidt, sym_eig

# The dense 2n-pencil is only sensible at desk scale; larger problems go
# through the reduced route.
DIRECT_N_LIMIT = 2000


@dataclass(frozen=True)
class KernelSpec:
    """Kernel family and parameters for one view."""

    kind: str
    width: float | None = None

    def __post_init__(self):
        if self.kind not in ("linear", "gaussian"):
            raise ValueError(f"unknown kernel kind '{self.kind}'; expected linear or gaussian")
        if self.kind == "gaussian":
            if self.width is None or not np.isfinite(self.width) or self.width <= 0:
                raise ValueError(f"gaussian kernel needs a positive finite width, got {self.width}")


def median_heuristic(x) -> float:
    """Median pairwise Euclidean distance between observations (rows of ``x``).

    With an even number of pairs the mean of the two central order statistics
    is returned, which is plain ``numpy.median`` behaviour.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or x.shape[0] < 2:
        raise ValueError("median heuristic needs a 2-d array with at least two rows")
    med = float(np.median(pdist(x)))
    if med <= 0:
        raise ValueError("median pairwise distance is zero; all observations are identical")
    return med


def gram(x, spec: KernelSpec) -> np.ndarray:
    """Gram matrix of the rows of ``x`` under ``spec``.

    The gaussian kernel is ``exp(-||xi - xj||^2 / (2 width^2))`` with an
    exactly unit diagonal.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 2:
        raise ValueError(f"expected a 2-d array, got shape {x.shape}")
    if spec.kind == "linear":
        return x @ x.T
    sq = squareform(pdist(x, "sqeuclidean"))
    return np.exp(-sq / (2.0 * spec.width**2))


def center_gram(k) -> np.ndarray:
    """Center a Gram matrix in feature space.

    Implements ``K - (1/n) J K - (1/n) K J + (1/n^2) (1'K1) J`` through row,
    column, and grand means; centering is idempotent and the result has row
    and column sums of zero.
    """
    k = check_symmetric(k, name="gram matrix")
    col_means = k.mean(axis=0)
    row_means = k.mean(axis=1)
    grand = k.mean()
    return k - col_means[None, :] - row_means[:, None] + grand


@dataclass(frozen=True)
class GramPair:
    """Centered Gram matrices of the two views with the specs that built them."""

    k_a: np.ndarray
    k_b: np.ndarray
    spec_a: KernelSpec
    spec_b: KernelSpec

    def __post_init__(self):
        ka = np.asarray(self.k_a, dtype=float)
        kb = np.asarray(self.k_b, dtype=float)
        if ka.shape != kb.shape or ka.ndim != 2 or ka.shape[0] != ka.shape[1]:
            raise ValueError(
                f"gram matrices must be square with equal shapes, got {ka.shape} and {kb.shape}"
            )
        object.__setattr__(self, "k_a", ka)
        object.__setattr__(self, "k_b", kb)

    @property
    def n(self) -> int:
        return self.k_a.shape[0]


def build_gram_pair(
    data: PairedDataset, spec_a: KernelSpec, spec_b: KernelSpec
) -> GramPair:
    """Build and center both views' Gram matrices."""
    return GramPair(
        k_a=center_gram(gram(data.view_a, spec_a)),
        k_b=center_gram(gram(data.view_b, spec_b)),
        spec_a=spec_a,
        spec_b=spec_b,
    )


@dataclass(frozen=True)
class KernelCcaModel:
    """Dual weight pairs with their correlations and unit-norm training images."""

    alpha: np.ndarray
    beta: np.ndarray
    correlations: np.ndarray
    z_a: np.ndarray
    z_b: np.ndarray
    solver: str
    regularization: tuple[tuple[str, float], ...]

    @property
    def r(self) -> int:
        return self.alpha.shape[1]


def _assemble_kernel_model(
    grams: GramPair, alpha: np.ndarray, beta: np.ndarray, solver: str, reg: dict
) -> KernelCcaModel:
    """Rescale duals to unit-norm images, orient, and sort by realized cosine."""
    z_a = grams.k_a @ alpha
    z_b = grams.k_b @ beta
    norm_a = np.linalg.norm(z_a, axis=0)
    norm_b = np.linalg.norm(z_b, axis=0)
    if np.any(norm_a < 1e-12) or np.any(norm_b < 1e-12):
        raise NumericalError(
            "a kernel image collapsed to the zero vector; "
            "reduce the component count or the regularisation"
        )
    alpha = alpha / norm_a
    beta = beta / norm_b
    z_a = z_a / norm_a
    z_b = z_b / norm_b
    corr = np.einsum("ij,ij->j", z_a, z_b)
    flip = corr < 0
    beta = np.where(flip, -beta, beta)
    z_b = np.where(flip, -z_b, z_b)
    corr = np.abs(corr)
    order = np.argsort(-corr, kind="stable")
    return KernelCcaModel(
        alpha=alpha[:, order],
        beta=beta[:, order],
        correlations=corr[order],
        z_a=z_a[:, order],
        z_b=z_b[:, order],
        solver=solver,
        regularization=tuple(sorted((k, float(v)) for k, v in reg.items())),
    )


def fit_kernel_cca(grams: GramPair, c1: float, c2: float, r: int) -> KernelCcaModel:
    """Kernel CCA through the symmetric 2n-dimensional pencil.

    Solves ``A v = rho B v`` with ``A = [[0, Ka Kb], [Kb Ka, 0]]`` and
    ``B = blkdiag((Ka + c1 I)^2, (Kb + c2 I)^2)``; the squared-ridge blocks
    are the regularised dual constraints.  Both ridges must be positive: at
    zero the problem is degenerate and every correlation is trivially 1.
    """
    if c1 <= 0 or c2 <= 0:
        raise ValueError(
            "kernel CCA requires positive ridges c1, c2: the unregularised dual "
            "problem is degenerate (all correlations 1)"
        )
    n = grams.n
    if n > DIRECT_N_LIMIT:
        raise ValueError(
            f"direct kernel CCA is limited to n <= {DIRECT_N_LIMIT} (got n = {n}); "
            "use fit_kernel_cca_pgso"
        )
    if not 1 <= r <= n:
        raise ValueError(f"components must satisfy 1 <= r <= n = {n}, got {r}")
    cross = grams.k_a @ grams.k_b
    a = np.zeros((2 * n, 2 * n))
    a[:n, n:] = cross
    a[n:, :n] = cross.T
    eye = np.eye(n)
    ba = (grams.k_a + c1 * eye) @ (grams.k_a + c1 * eye)
    bb = (grams.k_b + c2 * eye) @ (grams.k_b + c2 * eye)
    b = np.zeros((2 * n, 2 * n))
    b[:n, :n] = (ba + ba.T) / 2.0
    b[n:, n:] = (bb + bb.T) / 2.0
    res = gen_eig_sym(a, b)
    if res.values[r - 1] <= 1e-12:
        raise NumericalError(
            f"only {int(np.sum(res.values > 1e-12))} positive pencil eigenvalues available, "
            f"fewer than the requested {r} components"
        )
    vectors = res.vectors[:, :r]
    return _assemble_kernel_model(
        grams, vectors[:n], vectors[n:], "kernel_pencil", {"c1": c1, "c2": c2}
    )


def fit_kernel_cca_pgso(
    grams: GramPair,
    kappa: float,
    eta: float | None = None,
    r: int = 1,
) -> KernelCcaModel:
    """Kernel CCA on incomplete Cholesky factors of both Grams.

    Factorises ``K ~= R R.T`` per view by greedy pivoting (trace cutoff
    ``eta``, defaulting to ``1e-6 * trace(K)``), forms the reduced blocks
    ``D_xy = R_x.T R_y``, and solves
    ``inv(S) D_ab inv(D_bb + kappa I) D_ba inv(S).T`` with
    ``D_aa = S S.T``; duals are mapped back through the factors and reported
    against the true Grams.

    Parameters
    ----------
    grams : GramPair
        Centered Gram matrices.
    kappa : float
        Positive ridge on the reduced view-b block.
    eta : float, optional
        Residual-trace cutoff for the factorisation, shared by both views
        when given explicitly.
    r : int
        Number of components.
    """
    if kappa <= 0:
        raise ValueError(f"kappa must be positive, got {kappa}")
    if r < 1:
        raise ValueError(f"components must be at least 1, got {r}")
    eta_a = 1e-6 * float(np.trace(grams.k_a)) if eta is None else float(eta)
    eta_b = 1e-6 * float(np.trace(grams.k_b)) if eta is None else float(eta)
    r_a = partial_gram_schmidt(grams.k_a, eta_a)
    r_b = partial_gram_schmidt(grams.k_b, eta_b)
    d_aa = r_a.T @ r_a
    d_ab = r_a.T @ r_b
    d_bb = r_b.T @ r_b
    try:
        s = scipy.linalg.cholesky(d_aa, lower=True)
        bb_ridged = scipy.linalg.cho_factor(d_bb + kappa * np.eye(d_bb.shape[0]), lower=True)
        bb_plain = scipy.linalg.cho_factor(d_bb, lower=True)
    except scipy.linalg.LinAlgError as exc:
        raise NumericalError(
            "a reduced gram block is singular; decrease eta or increase kappa"
        ) from exc
    t = scipy.linalg.solve_triangular(s, d_ab, lower=True)
    h = t @ scipy.linalg.cho_solve(bb_ridged, t.T)
    res = sym_eig((h + h.T) / 2.0)
    usable = int(np.sum(res.values > 1e-12))
    if usable < r:
        raise NumericalError(
            f"reduced problem supports only {usable} components, fewer than the requested {r}"
        )
    rho = np.sqrt(np.clip(res.values[:r], 0.0, 1.0))
    alpha_hat = res.vectors[:, :r]
    alpha_red = scipy.linalg.solve_triangular(s, alpha_hat, lower=True, trans="T")
    beta_red = scipy.linalg.cho_solve(bb_plain, d_ab.T @ alpha_red) / rho
    # minimum-norm duals in the full space
    alpha = r_a @ scipy.linalg.cho_solve((s, True), alpha_red)
    beta = r_b @ scipy.linalg.cho_solve(bb_plain, beta_red)
    return _assemble_kernel_model(
        grams,
        alpha,
        beta,
        "kernel_pgso",
        {"kappa": kappa, "eta_a": eta_a, "eta_b": eta_b},
    )


@dataclass(frozen=True)
class RelationTable:
    """Pearson correlations of candidate signals against image columns."""

    signal_names: tuple[str, ...]
    image_names: tuple[str, ...]
    correlations: np.ndarray

    @property
    def absolute(self) -> np.ndarray:
        return np.abs(self.correlations)

    def write_csv(self, path) -> None:
        import csv

        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["signal", *self.image_names])
            for name, row in zip(self.signal_names, self.correlations):
                writer.writerow([name, *("%.17g" % v for v in row)])


def image_relation_table(
    images: np.ndarray,
    signals: Mapping[str, np.ndarray],
    image_names: tuple[str, ...] | None = None,
) -> RelationTable:
    """Correlate every named signal with every image column.

    ``images`` is (n, r); each signal is a length-n vector.  Constant signals
    have no defined correlation and are rejected.
    """
    images = np.asarray(images, dtype=float)
    if images.ndim != 2:
        raise ValueError("images must be a 2-d array with one column per component")
    centered = images - images.mean(axis=0)
    img_norms = np.linalg.norm(centered, axis=0)
    if np.any(img_norms < 1e-300):
        raise ValueError("an image column is constant")
    if image_names is None:
        image_names = tuple(f"z{i + 1}" for i in range(images.shape[1]))
    rows = []
    names = []
    for name, sig in signals.items():
        sig = np.asarray(sig, dtype=float)
        if sig.shape != (images.shape[0],):
            raise ValueError(f"signal '{name}' has shape {sig.shape}, expected ({images.shape[0]},)")
        s = sig - sig.mean()
        s_norm = np.linalg.norm(s)
        if s_norm < 1e-300:
            raise ValueError(f"signal '{name}' is constant")
        rows.append((centered.T @ s) / (img_norms * s_norm))
        names.append(name)
    return RelationTable(
        signal_names=tuple(names),
        image_names=tuple(image_names),
        correlations=np.asarray(rows, dtype=float),
    )
