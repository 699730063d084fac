"""Empirical optimal constants for the Korn-type inequalities.

Every estimator reduces to a top generalized eigenvalue of a pencil built
from the assembled quadratic forms:

* Korn second constant:          max U^T G U / U^T (M + E) U
* interpolation constant:        max over s > 0 of lam_max(G, Q_s), where
  Q_s = s/2 * N + 1/(2 s h^2) * E + M + E relaxes the product term
  ||u.n|| ||e(u)|| / h exactly (AM-GM with parameter: the minimum of the
  relaxation over s reproduces the product for every field, so exchanging
  the two extrema is exact and the search returns the true discrete
  optimal constant);
* curvature-refined quotient:    lam_max(G, N_in + E) on surfaces with
  one-signed Gaussian curvature;
* 2D thin-strip Korn first:      max ||grad U - A*||^2 / ||e(U)||^2 over a
  strip grid, with the optimal skew matrix A* given in closed form by the
  domain average of the rotation (u_y - v_x)/2 and the 3-dimensional rigid
  space deflated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .eig import EigenEstimate, top_generalized_eigenvalue

__all__ = [
    "korn_second_constant",
    "interpolation_constant",
    "InterpolationResult",
    "curvature_refined_quotients",
    "korn_first_2d_constant",
    "Korn1Result",
    "korn1_quotient",
    "BracketEdgeError",
    "CurvatureSignError",
]

_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


class BracketEdgeError(RuntimeError):
    """The s-search maximum sits on the bracket boundary; widen the bracket."""


class CurvatureSignError(ValueError):
    """Surface lacks one-signed nonvanishing Gaussian curvature."""


def korn_second_constant(forms, method="auto", seed=0, x0=None):
    """Empirical optimal constant of Korn's second inequality.

    Returns the top generalized eigenvalue of (G, M + E); by the Rayleigh
    principle the witness field certifies the value from below.
    """
    Q = (forms.M + forms.E).tocsr()
    return top_generalized_eigenvalue(forms.G, Q, method=method, seed=seed, x0=x0)


@dataclass
class InterpolationResult:
    c_int: float
    s_star: float
    estimate: EigenEstimate
    evaluations: int


def interpolation_constant(
    forms,
    h=None,
    bracket=(1e-8, 1e8),
    tol_log=1e-3,
    method="auto",
    seed=0,
    coarse=17,
):
    """Empirical optimal constant of the interpolation inequality.

    Maximizes lam_max(G, Q_s) over s by a coarse scan plus golden-section
    search on log s.  Raises :class:`BracketEdgeError` when the maximum is
    attained at the bracket boundary.

    Returns
    -------
    InterpolationResult
        ``c_int`` (the constant), ``s_star`` (the maximizing relaxation
        parameter), the certifying eigen estimate and the number of
        eigenvalue evaluations.
    """
    if h is None:
        h = forms.h
    if h <= 0:
        raise ValueError("h must be positive")
    lo, hi = bracket
    if not (0 < lo < hi):
        raise ValueError("invalid bracket")
    if np.log10(hi / lo) < 6:
        raise ValueError("bracket must span at least 6 decades of s")

    G = forms.G
    state = {"x0": None, "evals": 0}

    def lam(log_s):
        s = float(np.exp(log_s))
        Q = (0.5 * s * forms.N + (1.0 / (2.0 * s * h * h)) * forms.E + forms.M + forms.E).tocsr()
        est = top_generalized_eigenvalue(G, Q, method=method, seed=seed, x0=state["x0"])
        state["x0"] = est.witness
        state["evals"] += 1
        return est

    logs = np.linspace(np.log(lo), np.log(hi), coarse)
    ests = [lam(ls) for ls in logs]
    vals = np.array([e.lam for e in ests])
    i = int(np.argmax(vals))
    if i == 0 or i == coarse - 1:
        raise BracketEdgeError(
            f"interpolation maximum at bracket edge s = {np.exp(logs[i]):.3e}; widen the bracket"
        )

    # golden section for the maximum on [logs[i-1], logs[i+1]]
    a, b = logs[i - 1], logs[i + 1]
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    e1, e2 = lam(x1), lam(x2)
    best = max(ests[i], e1, e2, key=lambda e: e.lam)
    best_log = {id(ests[i]): logs[i], id(e1): x1, id(e2): x2}[id(best)]
    while (b - a) > tol_log:
        if e1.lam >= e2.lam:
            b, x2, e2 = x2, x1, e1
            x1 = b - _GOLDEN * (b - a)
            e1 = lam(x1)
        else:
            a, x1, e1 = x1, x2, e2
            x2 = a + _GOLDEN * (b - a)
            e2 = lam(x2)
        for e, lx in ((e1, x1), (e2, x2)):
            if e.lam > best.lam:
                best, best_log = e, lx
    return InterpolationResult(
        c_int=best.lam, s_star=float(np.exp(best_log)), estimate=best, evaluations=state["evals"]
    )


def curvature_refined_quotients(forms, method="auto", seed=0):
    """Quotient lam_max(G, N_in + E) for one-signed Gaussian curvature.

    Rejects surfaces whose Gaussian curvature vanishes or changes sign on
    the sampled patch (plate, cylinder).
    """
    grid = forms.grid
    if grid is None:
        raise ValueError("forms must carry their grid for the curvature check")
    K = grid.kappa_theta * grid.kappa_z
    kmin, kmax = float(K.min()), float(K.max())
    if kmin <= 0.0 <= kmax or max(abs(kmin), abs(kmax)) < 1e-12:
        raise CurvatureSignError(
            f"Gaussian curvature must be nonvanishing of one sign; sampled range "
            f"[{kmin:.3e}, {kmax:.3e}] (plate and cylinder are rejected)"
        )
    Q = (forms.N_in + forms.E).tocsr()
    return top_generalized_eigenvalue(forms.G, Q, method=method, seed=seed)


# ---------------------------------------------------------------------------
# 2D thin-strip Korn first inequality
# ---------------------------------------------------------------------------

def _strip_strain_operators(grid2d):
    """Sparse x/y derivative operators over one nodal scalar on a strip grid."""
    from .forms import _diff_matrix

    nx, ny = grid2d.shape
    Dxi = sp.kron(_diff_matrix(nx, grid2d.dxi), sp.eye(ny), format="csr")
    Dy = sp.kron(sp.eye(nx), _diff_matrix(ny, grid2d.dy), format="csr")
    inv_w = 1.0 / np.broadcast_to(grid2d.width[None], grid2d.shape)
    Px = sp.diags(inv_w.ravel()) @ Dxi
    # chain coefficient from finite differences of the nodal x-map keeps the
    # nodal rigid motions exactly in the discrete strain kernel
    Xy = Dy @ grid2d.X.ravel()
    Py = Dy - sp.diags(Xy) @ Px
    return Px, Py


def _korn1_forms(grid2d):
    Px, Py = _strip_strain_operators(grid2d)
    n = grid2d.n_nodes
    w = grid2d.weights.ravel()
    Wd = sp.diags(w)

    def hb(left, right):
        return sp.hstack([left, right], format="csr")

    Z = sp.csr_matrix((n, n))
    E11 = hb(Px, Z)
    E22 = hb(Z, Py)
    E12 = hb(0.5 * Py, 0.5 * Px)
    Rho = hb(0.5 * Py, -0.5 * Px)

    A_e = (E11.T @ Wd @ E11 + E22.T @ Wd @ E22 + 2.0 * (E12.T @ Wd @ E12)).tocsr()
    A_rho = (Rho.T @ Wd @ Rho).tocsr()
    r = Rho.T @ w  # rank-one part of the centered rotation norm
    area = float(w.sum())
    return A_e, A_rho, r, area, Rho


def korn1_quotient(U, grid2d):
    """Direct quotient ||grad U - A*(U)||^2 / ||e(U)||^2 for one 2D field.

    ``U`` is an array of shape (2,) + grid2d.shape; A* is the closed-form
    optimal skew matrix (off-diagonal entry = average rotation).
    """
    A_e, A_rho, r, area, _ = _korn1_forms(grid2d)
    vec = np.asarray(U, dtype=float).reshape(-1)
    e2 = float(vec @ (A_e @ vec))
    rho_cent = float(vec @ (A_rho @ vec)) - float(r @ vec) ** 2 / area
    if e2 <= 0:
        raise ZeroDivisionError("field lies in the rigid-motion kernel")
    return (e2 + 2.0 * rho_cent) / e2


@dataclass
class Korn1Result:
    k1_squared: float
    residual: float
    witness: np.ndarray
    skew_entry: float


def korn_first_2d_constant(grid2d):
    """Empirical optimal constant K1(h)^2 of the 2D strip Korn inequality.

    Maximizes ||grad U - A*||^2 / ||e(U)||^2 by a dense generalized
    eigensolve with the 3-dimensional rigid-motion space deflated.
    """
    A_e, A_rho, r, area, Rho = _korn1_forms(grid2d)
    n2 = 2 * grid2d.n_nodes

    A_num = (A_e + 2.0 * A_rho).toarray()
    A_num -= (2.0 / area) * np.outer(r, r)
    A_den = A_e.toarray()

    # rigid motions: two translations plus the in-plane rotation (-y, x)
    K = np.zeros((n2, 3))
    n = grid2d.n_nodes
    K[:n, 0] = 1.0
    K[n:, 1] = 1.0
    K[:n, 2] = -np.broadcast_to(grid2d.y[None, :], grid2d.shape).ravel()
    K[n:, 2] = grid2d.X.ravel()
    Qfull, _ = np.linalg.qr(K, mode="complete")
    Z = Qfull[:, 3:]

    An = Z.T @ A_num @ Z
    Ad = Z.T @ A_den @ Z
    An = 0.5 * (An + An.T)
    Ad = 0.5 * (Ad + Ad.T)
    import scipy.linalg as sla

    m = An.shape[0]
    w, v = sla.eigh(An, Ad, subset_by_index=[m - 1, m - 1])
    vec = Z @ v[:, -1]
    lam = float(vec @ (A_num @ vec)) / float(vec @ (A_den @ vec))
    res = abs(lam - w[-1]) / abs(lam)
    rho_mean = float(r @ vec) / area
    return Korn1Result(k1_squared=lam, residual=res, witness=vec, skew_entry=rho_mean)
