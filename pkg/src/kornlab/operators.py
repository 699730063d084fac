"""Curvilinear differential operators and weighted inner products.

Vector fields live in the local orthonormal basis (n, e_theta, e_z) as
nodal samples on a :class:`~kornlab.geometry.ShellGrid`.  The full gradient
combines finite-difference partials in the reference coordinates with the
metric, curvature and offset factors of the shell; the simplified gradient
drops the (1 + t*kappa) offset factors.  All norms use the weighted volume
element A_z * A_theta dtheta dz dt.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

__all__ = [
    "FieldSample",
    "MatrixFieldSample",
    "OffsetSingularityError",
    "gradient_full",
    "gradient_simplified",
    "sym",
    "l2_inner",
    "l2_norm",
    "pushforward",
    "pullback",
    "translation_field",
    "rotation_field",
    "cartesian_crosscheck",
    "write_field_csv",
    "read_field_csv",
]


class OffsetSingularityError(ValueError):
    """Offset factor 1 + t*kappa dropped below 1/2: h too large for curvature."""


@dataclass
class FieldSample:
    """Nodal samples of (u_t, u_theta, u_z) on a shell grid."""

    comps: np.ndarray  # (3,) + grid.shape

    def __post_init__(self):
        self.comps = np.asarray(self.comps, dtype=float)
        if self.comps.ndim != 4 or self.comps.shape[0] != 3:
            raise ValueError("FieldSample needs an array of shape (3, n_t, n_theta, n_z)")
        if not np.all(np.isfinite(self.comps)):
            raise ValueError("field contains non-finite entries")

    @property
    def u_t(self):
        return self.comps[0]

    @property
    def u_theta(self):
        return self.comps[1]

    @property
    def u_z(self):
        return self.comps[2]

    @classmethod
    def from_components(cls, u_t, u_theta, u_z):
        return cls(np.stack([u_t, u_theta, u_z]))

    @classmethod
    def zeros(cls, grid):
        return cls(np.zeros((3,) + grid.shape))

    @classmethod
    def random(cls, grid, rng):
        return cls(rng.standard_normal((3,) + grid.shape))

    def stacked(self):
        """Flat DOF vector (u_t block, then u_theta, then u_z)."""
        return self.comps.reshape(3, -1).reshape(-1)

    @classmethod
    def from_stacked(cls, vec, grid):
        return cls(np.asarray(vec, dtype=float).reshape((3,) + grid.shape))

    def __add__(self, other):
        return FieldSample(self.comps + other.comps)

    def __sub__(self, other):
        return FieldSample(self.comps - other.comps)

    def __mul__(self, a):
        return FieldSample(self.comps * a)

    __rmul__ = __mul__


@dataclass
class MatrixFieldSample:
    """Nodal 3x3 matrices in the local basis (n, e_theta, e_z)."""

    entries: np.ndarray  # (3, 3) + grid.shape

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=float)
        if self.entries.ndim != 5 or self.entries.shape[:2] != (3, 3):
            raise ValueError("MatrixFieldSample needs shape (3, 3, n_t, n_theta, n_z)")
        if not np.all(np.isfinite(self.entries)):
            raise ValueError("matrix field contains non-finite entries")

    def transpose(self):
        return MatrixFieldSample(np.swapaxes(self.entries, 0, 1))

    def __add__(self, other):
        return MatrixFieldSample(self.entries + other.entries)

    def __sub__(self, other):
        return MatrixFieldSample(self.entries - other.entries)

    def __mul__(self, a):
        return MatrixFieldSample(self.entries * a)

    __rmul__ = __mul__


# ---------------------------------------------------------------------------
# finite differences on grid axes
# ---------------------------------------------------------------------------

def _diff_axis(f, spacing, axis):
    """Second-order first derivative along one axis (one-sided at the ends)."""
    f = np.asarray(f, dtype=float)
    d = np.empty_like(f)
    fm = np.moveaxis(f, axis, 0)
    dm = np.moveaxis(d, axis, 0)
    dm[1:-1] = (fm[2:] - fm[:-2]) / (2 * spacing)
    dm[0] = (-3 * fm[0] + 4 * fm[1] - fm[2]) / (2 * spacing)
    dm[-1] = (3 * fm[-1] - 4 * fm[-2] + fm[-3]) / (2 * spacing)
    return d


def grid_partials(f, grid):
    """Partials (f_t, f_theta, f_z) of a nodal scalar at fixed (t, theta, z).

    Grid lines at constant s follow varying t when the thickness varies, so
    the theta/z derivatives carry the chain-rule correction through the
    t-map:  f_theta|_t = f_theta|_s - t_theta|_s * f_t.
    """
    f_s = _diff_axis(f, grid.ds, 0)
    f_t = f_s / grid.gsum[None]
    f_th = _diff_axis(f, grid.dtheta, 1) - grid.t_dtheta * f_t
    f_z = _diff_axis(f, grid.dz, 2) - grid.t_dz * f_t
    return f_t, f_th, f_z


def combine_gradient_entries(partials, u, grid, simplified=False):
    """Assemble the nine gradient entries from nodal partials and components.

    ``partials`` is a dict with keys like ("t", "t") for u_{t,t}; ``u`` the
    FieldSample.  With ``simplified=True`` the offset factors 1 + t*kappa
    are replaced by 1 (mid-surface gradient).
    """
    Ath = grid.A_theta[None]
    Az = grid.A_z[None]
    Athz = grid.A_theta_dz[None]
    Azth = grid.A_z_dtheta[None]
    kth = grid.kappa_theta[None]
    kz = grid.kappa_z[None]
    if simplified:
        off_th = 1.0
        off_z = 1.0
    else:
        off_th = 1.0 + grid.t * kth
        off_z = 1.0 + grid.t * kz

    ut, uth, uz = u.u_t, u.u_theta, u.u_z
    p = partials
    out = np.empty((3, 3) + grid.shape)
    out[0, 0] = p["t", "t"]
    out[0, 1] = (p["t", "th"] - Ath * kth * uth) / (Ath * off_th)
    out[0, 2] = (p["t", "z"] - Az * kz * uz) / (Az * off_z)
    out[1, 0] = p["th", "t"]
    out[1, 1] = (Az * p["th", "th"] + Az * Ath * kth * ut + Athz * uz) / (Az * Ath * off_th)
    out[1, 2] = (Ath * p["th", "z"] - Azth * uz) / (Az * Ath * off_z)
    out[2, 0] = p["z", "t"]
    out[2, 1] = (Az * p["z", "th"] - Athz * uth) / (Az * Ath * off_th)
    out[2, 2] = (Ath * p["z", "z"] + Az * Ath * kz * ut + Azth * uth) / (Az * Ath * off_z)
    return MatrixFieldSample(out)


def _check_offset(grid):
    m = min(
        (1.0 + grid.t * grid.kappa_theta[None]).min(),
        (1.0 + grid.t * grid.kappa_z[None]).min(),
    )
    if m < 0.5:
        raise OffsetSingularityError(
            f"min(1 + t*kappa) = {m:.3f} < 1/2; thickness too large for curvature"
        )


def _fd_partials(u, grid):
    names = ("t", "th", "z")
    parts = {}
    for i, comp in enumerate(u.comps):
        ft, fth, fz = grid_partials(comp, grid)
        parts[names[i], "t"] = ft
        parts[names[i], "th"] = fth
        parts[names[i], "z"] = fz
    return parts


def gradient_full(u, grid):
    """Full curvilinear gradient of a field, in the local basis.

    Partials are second-order finite differences in the reference
    coordinates (one-sided second order at boundaries), divided through the
    t-map; entries carry the exact metric/curvature coefficients including
    the offset factors 1 + t*kappa.
    """
    _check_offset(grid)
    return combine_gradient_entries(_fd_partials(u, grid), u, grid, simplified=False)


def gradient_simplified(u, grid):
    """Mid-surface gradient: the full gradient with offset factors set to 1."""
    return combine_gradient_entries(_fd_partials(u, grid), u, grid, simplified=True)


def sym(m):
    """Symmetric part (M + M^T)/2 of a matrix field."""
    return MatrixFieldSample(0.5 * (m.entries + np.swapaxes(m.entries, 0, 1)))


# ---------------------------------------------------------------------------
# weighted inner products
# ---------------------------------------------------------------------------

def _node_values(f):
    if isinstance(f, FieldSample):
        return f.comps, 1
    if isinstance(f, MatrixFieldSample):
        return f.entries, 2
    return np.asarray(f, dtype=float), 0


def l2_inner(f, g, grid):
    """Weighted L2 inner product, summed entrywise for vector/matrix fields."""
    fa, fk = _node_values(f)
    ga, gk = _node_values(g)
    if fa.shape != ga.shape:
        raise ValueError(f"shape mismatch: {fa.shape} vs {ga.shape}")
    if fk == 0 and fa.shape != grid.shape:
        raise ValueError(f"scalar field shape {fa.shape} does not match grid {grid.shape}")
    prod = (fa * ga).reshape((-1,) + grid.shape).sum(axis=0)
    return float((grid.weights * prod).sum())


def l2_norm(f, grid):
    return float(np.sqrt(max(l2_inner(f, f, grid), 0.0)))


# ---------------------------------------------------------------------------
# push-forward / pull-back between local and Cartesian components
# ---------------------------------------------------------------------------

def pushforward(u, grid):
    """Cartesian vector field u_t*n + u_theta*e_theta + u_z*e_z at the nodes."""
    from .geometry import offset_map

    _, frames = offset_map(grid.surface, grid.profile, grid)
    return np.einsum("...ij,j...->...i", frames, u.comps)


def pullback(vec, grid):
    """Local components of a nodal Cartesian vector field (shape + (3,))."""
    from .geometry import offset_map

    _, frames = offset_map(grid.surface, grid.profile, grid)
    comps = np.einsum("...ij,...i->j...", frames, vec)
    return FieldSample(comps)


def translation_field(grid, direction):
    """Pull-back of the constant Cartesian field ``direction``."""
    vec = np.broadcast_to(np.asarray(direction, dtype=float), grid.shape + (3,))
    return pullback(vec, grid)


def rotation_field(grid, skew):
    """Pull-back of the infinitesimal rotation x -> W x (W skew)."""
    from .geometry import offset_map

    skew = np.asarray(skew, dtype=float)
    if not np.allclose(skew + skew.T, 0.0):
        raise ValueError("rotation generator must be skew-symmetric")
    points, _ = offset_map(grid.surface, grid.profile, grid)
    vec = np.einsum("ij,...j->...i", skew, points)
    return pullback(vec, grid)


# ---------------------------------------------------------------------------
# Cartesian cross-check oracle
# ---------------------------------------------------------------------------

def _cartesian_gradient_local(u, grid):
    """Gradient via Cartesian positions only (no metric/curvature formulas).

    Differentiates the pushed-forward Cartesian field and the nodal
    positions along the grid axes, inverts the position Jacobian, and
    re-expresses the result in the local frame.
    """
    from .geometry import offset_map

    points, frames = offset_map(grid.surface, grid.profile, grid)
    ubar = pushforward(u, grid)

    spacings = (grid.ds, grid.dtheta, grid.dz)
    J = np.empty(grid.shape + (3, 3))
    Du = np.empty(grid.shape + (3, 3))
    for k in range(3):
        J[..., k] = np.stack(
            [_diff_axis(points[..., i], spacings[k], k) for i in range(3)], axis=-1
        )
        Du[..., k] = np.stack(
            [_diff_axis(ubar[..., i], spacings[k], k) for i in range(3)], axis=-1
        )
    grad_cart = Du @ np.linalg.inv(J)
    local = np.einsum("...ki,...kl,...lj->...ij", frames, grad_cart, frames)
    return MatrixFieldSample(np.moveaxis(local, (-2, -1), (0, 1)))


@dataclass
class CrosscheckResult:
    deviation: float
    deviation_fine: float
    order: float


def cartesian_crosscheck(field_fn, grid, margin=2):
    """Max interior deviation between the curvilinear and Cartesian gradients.

    ``field_fn(grid) -> FieldSample`` must evaluate the same smooth test
    field on any grid; the deviation is measured on interior nodes (one
    stencil margin) at the given grid and at a once-refined grid, and the
    observed convergence order is reported.
    """
    def interior_dev(g):
        u = field_fn(g)
        full = gradient_full(u, g)
        cart = _cartesian_gradient_local(u, g)
        diff = np.abs(full.entries - cart.entries)
        sl = (slice(None), slice(None)) + tuple(slice(margin, -margin) for _ in range(3))
        return float(diff[sl].max())

    d1 = interior_dev(grid)
    fine = grid.refined(2)
    d2 = interior_dev(fine)
    order = float(np.log2(d1 / d2)) if d2 > 0 else np.inf
    return CrosscheckResult(deviation=d1, deviation_fine=d2, order=order)


# ---------------------------------------------------------------------------
# CSV interchange
# ---------------------------------------------------------------------------

def write_field_csv(u, path_or_buf):
    """Write a field as rows (i_t, i_theta, i_z, u_t, u_theta, u_z)."""
    close = False
    if isinstance(path_or_buf, (str, bytes)):
        buf = open(path_or_buf, "w", newline="")
        close = True
    else:
        buf = path_or_buf
    try:
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["i_t", "i_theta", "i_z", "u_t", "u_theta", "u_z"])
        nt, nth, nz = u.comps.shape[1:]
        for it in range(nt):
            for ith in range(nth):
                for iz in range(nz):
                    writer.writerow(
                        [it, ith, iz]
                        + [repr(float(u.comps[c, it, ith, iz])) for c in range(3)]
                    )
    finally:
        if close:
            buf.close()


def read_field_csv(path_or_buf):
    """Read a field written by :func:`write_field_csv`."""
    close = False
    if isinstance(path_or_buf, (str, bytes)):
        buf = open(path_or_buf, "r", newline="")
        close = True
    else:
        buf = path_or_buf
    try:
        reader = csv.reader(buf)
        header = next(reader)
        if header[:3] != ["i_t", "i_theta", "i_z"]:
            raise ValueError("not a field CSV")
        rows = [(int(r[0]), int(r[1]), int(r[2]), float(r[3]), float(r[4]), float(r[5])) for r in reader]
    finally:
        if close:
            buf.close()
    nt = max(r[0] for r in rows) + 1
    nth = max(r[1] for r in rows) + 1
    nz = max(r[2] for r in rows) + 1
    comps = np.zeros((3, nt, nth, nz))
    for it, ith, iz, a, b, c in rows:
        comps[:, it, ith, iz] = (a, b, c)
    return FieldSample(comps)


def field_csv_string(u):
    buf = io.StringIO()
    write_field_csv(u, buf)
    return buf.getvalue()
