"""Sparse quadratic forms for the shell norm functionals.

The stacked unknown vector is U = (u_t, u_theta, u_z) over all grid nodes
(C order).  ``assemble_forms`` builds symmetric positive semidefinite
matrices representing

    G    = ||grad u||^2        (full curvilinear gradient)
    E    = ||e(u)||^2          (symmetrized gradient)
    N    = ||u . n||^2         (out-of-plane component u_t)
    M    = ||u||^2
    N_in = ||u_in||^2          (in-plane components u_theta, u_z)

all with the weighted volume element of the shell grid.  The gradient
matrix is an independent sparse encoding of the same stencils used by
:mod:`kornlab.operators`; agreement of the two routes to 1e-10 is a tested
invariant.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .operators import OffsetSingularityError

__all__ = ["QuadraticFormSet", "assemble_forms", "gradient_matrix"]


def _diff_matrix(n, spacing):
    """Second-order first-derivative matrix (one-sided at the ends)."""
    D = sp.lil_matrix((n, n))
    c = 1.0 / (2.0 * spacing)
    for i in range(1, n - 1):
        D[i, i - 1] = -c
        D[i, i + 1] = c
    D[0, 0], D[0, 1], D[0, 2] = -3 * c, 4 * c, -c
    D[n - 1, n - 1], D[n - 1, n - 2], D[n - 1, n - 3] = 3 * c, -4 * c, c
    return D.tocsr()


def _axis_operators(grid):
    nt, nth, nz = grid.shape
    Ds = sp.kron(_diff_matrix(nt, grid.ds), sp.eye(nth * nz), format="csr")
    Dth = sp.kron(sp.eye(nt), sp.kron(_diff_matrix(nth, grid.dtheta), sp.eye(nz)), format="csr")
    Dz = sp.kron(sp.eye(nt * nth), _diff_matrix(nz, grid.dz), format="csr")
    return Ds, Dth, Dz


def _dia(values):
    return sp.diags(np.asarray(values, dtype=float).ravel())


def gradient_matrix(grid, simplified=False):
    """Sparse matrix of the (full or simplified) gradient, shape (9N, 3N).

    Output blocks are ordered row-major over the 3x3 matrix entries; input
    blocks are (u_t, u_theta, u_z).
    """
    if not simplified:
        m = min(
            (1.0 + grid.t * grid.kappa_theta[None]).min(),
            (1.0 + grid.t * grid.kappa_z[None]).min(),
        )
        if m < 0.5:
            raise OffsetSingularityError(
                f"min(1 + t*kappa) = {m:.3f} < 1/2; thickness too large for curvature"
            )

    Ds, Dth, Dz = _axis_operators(grid)
    inv_gsum = 1.0 / np.broadcast_to(grid.gsum[None], grid.shape)
    Pt = _dia(inv_gsum) @ Ds
    Pth = Dth - _dia(grid.t_dtheta) @ Pt
    Pz = Dz - _dia(grid.t_dz) @ Pt

    shape3 = grid.shape

    def full3(arr2d):
        return np.broadcast_to(arr2d[None], shape3)

    Ath = full3(grid.A_theta)
    Az = full3(grid.A_z)
    Athz = full3(grid.A_theta_dz)
    Azth = full3(grid.A_z_dtheta)
    kth = full3(grid.kappa_theta)
    kz = full3(grid.kappa_z)
    if simplified:
        off_th = np.ones(shape3)
        off_z = np.ones(shape3)
    else:
        off_th = 1.0 + grid.t * kth
        off_z = 1.0 + grid.t * kz

    Zb = None  # empty block
    blocks = [
        [Pt, Zb, Zb],
        [_dia(1 / (Ath * off_th)) @ Pth, _dia(-kth / off_th), Zb],
        [_dia(1 / (Az * off_z)) @ Pz, Zb, _dia(-kz / off_z)],
        [Zb, Pt, Zb],
        [_dia(kth / off_th), _dia(1 / (Ath * off_th)) @ Pth, _dia(Athz / (Az * Ath * off_th))],
        [Zb, _dia(1 / (Az * off_z)) @ Pz, _dia(-Azth / (Az * Ath * off_z))],
        [Zb, Zb, Pt],
        [Zb, _dia(-Athz / (Az * Ath * off_th)), _dia(1 / (Ath * off_th)) @ Pth],
        [_dia(kz / off_z), _dia(Azth / (Az * Ath * off_z)), _dia(1 / (Az * off_z)) @ Pz],
    ]
    return sp.bmat(blocks, format="csr")


@dataclass
class QuadraticFormSet:
    """Assembled symmetric forms over the stacked nodal unknown vector."""

    G: sp.spmatrix
    E: sp.spmatrix
    N: sp.spmatrix
    M: sp.spmatrix
    N_in: sp.spmatrix
    h: float
    grid: object = None
    meta: dict = field(default_factory=dict)

    @property
    def n_dofs(self):
        return self.G.shape[0]

    def random_field_vector(self, rng):
        return rng.standard_normal(self.n_dofs)


def _symmetrize(A):
    A = A.tocsr()
    return ((A + A.T) * 0.5).tocsr()


def assemble_forms(grid):
    """Assemble G, E, N, M, N_in for a shell grid.

    The weight of every form is the nodal quadrature weight of the grid;
    E uses the exact symmetrization projector on the 9 gradient entries,
    so G - E is positive semidefinite by construction.
    """
    B = gradient_matrix(grid)
    w = grid.weights.ravel()
    Wd = sp.diags(w)
    n = grid.n_nodes

    W9 = sp.kron(sp.eye(9), Wd, format="csr")
    G = _symmetrize(B.T @ W9 @ B)

    # symmetrization projector on row-major 3x3 entries
    P = np.zeros((9, 9))
    for i in range(3):
        for j in range(3):
            P[3 * i + j, 3 * i + j] += 0.5
            P[3 * i + j, 3 * j + i] += 0.5
    PW = sp.kron(sp.csr_matrix(P), Wd, format="csr")
    E = _symmetrize(B.T @ PW @ B)

    Zn = sp.csr_matrix((n, n))
    N = sp.block_diag([Wd, Zn, Zn], format="csr")
    M = sp.block_diag([Wd, Wd, Wd], format="csr")
    N_in = sp.block_diag([Zn, Wd, Wd], format="csr")

    meta = {
        "surface": grid.surface.kind,
        "thickness_kind": grid.profile.kind,
        "n_t": grid.n_t,
        "n_theta": grid.n_theta,
        "n_z": grid.n_z,
    }
    return QuadraticFormSet(G=G, E=E, N=N, M=M, N_in=N_in, h=grid.h, grid=grid, meta=meta)
