"""Mid-surface patches, thickness profiles and the 3D shell grid.

A shell is described by a mid-surface patch parametrized by principal
variables (theta, z), a pair of positive thickness functions (g1, g2)
attached to the unit normal, and a tensor-product grid in reference
coordinates (s, theta, z) with s in [-1/2, 1/2] mapped onto the normal
fiber t in [-g1, g2].

All geometry objects are immutable after construction; every evaluator is
a pure function of its arguments and broadcasts over numpy arrays.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "PatchDomain",
    "SurfacePatch",
    "Plate",
    "Cylinder",
    "SphereCap",
    "Catenoid",
    "make_builtin_surface",
    "ThicknessProfile",
    "ConstantThickness",
    "SinusoidalThickness",
    "ShellGrid",
    "offset_map",
    "AdmissibilityReport",
    "validate_admissibility",
    "SingularSurfaceError",
]


class SingularSurfaceError(ValueError):
    """Requested domain touches a coordinate singularity of the parametrization."""


# ---------------------------------------------------------------------------
# patch domain
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PatchDomain:
    """Parameter rectangle (or curvilinear trapezoid) of one surface patch.

    theta runs over [0, omega]; at each theta the principal line parameter z
    runs over [z1(theta), z2(theta)].  ``l``/``L`` bound the z-extent from
    below/above and ``Z`` bounds the W^{1,inf} size of the two edge functions.
    Built-in runs use constant z1, z2 (set via :meth:`rectangle`).
    """

    omega: float
    z1_const: float
    z2_const: float
    l: float = field(default=0.0)
    L: float = field(default=0.0)
    Z: float = field(default=0.0)

    def __post_init__(self):
        if self.omega <= 0:
            raise ValueError("omega must be positive")
        if self.z2_const <= self.z1_const:
            raise ValueError("z2 must exceed z1")
        ext = self.z2_const - self.z1_const
        if self.l == 0.0:
            object.__setattr__(self, "l", ext)
        if self.L == 0.0:
            object.__setattr__(self, "L", ext)
        if self.Z == 0.0:
            object.__setattr__(self, "Z", max(abs(self.z1_const), abs(self.z2_const)))

    @classmethod
    def rectangle(cls, omega, z_min, z_max):
        return cls(omega=float(omega), z1_const=float(z_min), z2_const=float(z_max))

    def z1(self, theta):
        return np.full_like(np.asarray(theta, dtype=float), self.z1_const)

    def z2(self, theta):
        return np.full_like(np.asarray(theta, dtype=float), self.z2_const)

    @property
    def z_min(self):
        return self.z1_const

    @property
    def z_max(self):
        return self.z2_const


# ---------------------------------------------------------------------------
# surfaces
# ---------------------------------------------------------------------------

class SurfacePatch:
    """Analytic mid-surface in principal coordinates.

    Subclasses provide the position map ``r``, the metric coefficients
    ``A_theta``, ``A_z``, the principal curvatures ``kappa_theta``,
    ``kappa_z``, the unit normal and tangents, and the first partials of
    the metric coefficients and curvatures.  The normal is oriented so that

        n_{,theta} = kappa_theta * A_theta * e_theta,
        n_{,z}     = kappa_z     * A_z     * e_z,

    which is the convention that makes (1 + t*kappa) the exact offset
    factors of the curvilinear gradient.
    """

    kind = "abstract"

    # -- position and frame -------------------------------------------------
    def r(self, theta, z):
        raise NotImplementedError

    def normal(self, theta, z):
        raise NotImplementedError

    def e_theta(self, theta, z):
        raise NotImplementedError

    def e_z(self, theta, z):
        raise NotImplementedError

    # -- metric -------------------------------------------------------------
    def A_theta(self, theta, z):
        raise NotImplementedError

    def A_z(self, theta, z):
        raise NotImplementedError

    def A_theta_dtheta(self, theta, z):
        return np.zeros(np.broadcast(theta, z).shape)

    def A_theta_dz(self, theta, z):
        return np.zeros(np.broadcast(theta, z).shape)

    def A_z_dtheta(self, theta, z):
        return np.zeros(np.broadcast(theta, z).shape)

    def A_z_dz(self, theta, z):
        return np.zeros(np.broadcast(theta, z).shape)

    # -- curvature ----------------------------------------------------------
    def kappa_theta(self, theta, z):
        raise NotImplementedError

    def kappa_z(self, theta, z):
        raise NotImplementedError

    def kappa_theta_dtheta(self, theta, z):
        return np.zeros(np.broadcast(theta, z).shape)

    def kappa_theta_dz(self, theta, z):
        return np.zeros(np.broadcast(theta, z).shape)

    def kappa_z_dtheta(self, theta, z):
        return np.zeros(np.broadcast(theta, z).shape)

    def kappa_z_dz(self, theta, z):
        return np.zeros(np.broadcast(theta, z).shape)

    def gaussian_curvature(self, theta, z):
        return self.kappa_theta(theta, z) * self.kappa_z(theta, z)

    def frame(self, theta, z):
        """Orthonormal frame as column-stacked matrix [n, e_theta, e_z]."""
        n = self.normal(theta, z)
        et = self.e_theta(theta, z)
        ez = self.e_z(theta, z)
        return np.stack([n, et, ez], axis=-1)


def _stack3(x, y, z):
    return np.stack(np.broadcast_arrays(x, y, z), axis=-1)


class Plate(SurfacePatch):
    """Flat patch r = (theta, z, 0); unit metric, zero curvature."""

    kind = "plate"

    def r(self, theta, z):
        theta, z = np.broadcast_arrays(theta, z)
        return _stack3(theta, z, np.zeros_like(theta))

    def normal(self, theta, z):
        theta, z = np.broadcast_arrays(theta, z)
        return _stack3(np.zeros_like(theta), np.zeros_like(theta), np.ones_like(theta))

    def e_theta(self, theta, z):
        theta, z = np.broadcast_arrays(theta, z)
        return _stack3(np.ones_like(theta), np.zeros_like(theta), np.zeros_like(theta))

    def e_z(self, theta, z):
        theta, z = np.broadcast_arrays(theta, z)
        return _stack3(np.zeros_like(theta), np.ones_like(theta), np.zeros_like(theta))

    def A_theta(self, theta, z):
        return np.ones(np.broadcast(theta, z).shape)

    def A_z(self, theta, z):
        return np.ones(np.broadcast(theta, z).shape)

    def kappa_theta(self, theta, z):
        return np.zeros(np.broadcast(theta, z).shape)

    def kappa_z(self, theta, z):
        return np.zeros(np.broadcast(theta, z).shape)


class Cylinder(SurfacePatch):
    """Circular cylinder of radius R, axis along the Cartesian z axis.

    theta is the polar angle (A_theta = R), z the axial arclength.  With the
    outward normal, kappa_theta = 1/R and kappa_z = 0.
    """

    kind = "cylinder"

    def __init__(self, radius):
        if radius <= 0:
            raise ValueError("radius must be positive")
        self.radius = float(radius)

    def r(self, theta, z):
        R = self.radius
        return _stack3(R * np.cos(theta), R * np.sin(theta), z + np.zeros_like(np.asarray(theta, dtype=float)))

    def normal(self, theta, z):
        theta, z = np.broadcast_arrays(theta, z)
        return _stack3(np.cos(theta), np.sin(theta), np.zeros_like(theta))

    def e_theta(self, theta, z):
        theta, z = np.broadcast_arrays(theta, z)
        return _stack3(-np.sin(theta), np.cos(theta), np.zeros_like(theta))

    def e_z(self, theta, z):
        theta, z = np.broadcast_arrays(theta, z)
        return _stack3(np.zeros_like(theta), np.zeros_like(theta), np.ones_like(theta))

    def A_theta(self, theta, z):
        return np.full(np.broadcast(theta, z).shape, self.radius)

    def A_z(self, theta, z):
        return np.ones(np.broadcast(theta, z).shape)

    def kappa_theta(self, theta, z):
        return np.full(np.broadcast(theta, z).shape, 1.0 / self.radius)

    def kappa_z(self, theta, z):
        return np.zeros(np.broadcast(theta, z).shape)


class SphereCap(SurfacePatch):
    """Sphere of radius R in polar parametrization, poles excluded.

    theta is the azimuth, z the polar angle (geodesic parameter is R*z but
    principal lines coincide for any monotone reparametrization; we keep z
    the angle so A_z = R, A_theta = R sin z).  Umbilic: both curvatures
    equal 1/R with the outward normal.
    """

    kind = "sphere_cap"

    def __init__(self, radius):
        if radius <= 0:
            raise ValueError("radius must be positive")
        self.radius = float(radius)

    def r(self, theta, z):
        R = self.radius
        return _stack3(R * np.sin(z) * np.cos(theta), R * np.sin(z) * np.sin(theta), R * np.cos(z) + np.zeros_like(np.asarray(theta, dtype=float)))

    def normal(self, theta, z):
        return _stack3(np.sin(z) * np.cos(theta), np.sin(z) * np.sin(theta), np.cos(z) + np.zeros_like(np.asarray(theta, dtype=float)))

    def e_theta(self, theta, z):
        theta, z = np.broadcast_arrays(theta, z)
        return _stack3(-np.sin(theta), np.cos(theta), np.zeros_like(theta))

    def e_z(self, theta, z):
        return _stack3(np.cos(z) * np.cos(theta), np.cos(z) * np.sin(theta), -np.sin(z) + np.zeros_like(np.asarray(theta, dtype=float)))

    def A_theta(self, theta, z):
        theta, z = np.broadcast_arrays(theta, z)
        return self.radius * np.sin(z)

    def A_z(self, theta, z):
        return np.full(np.broadcast(theta, z).shape, self.radius)

    def A_theta_dz(self, theta, z):
        theta, z = np.broadcast_arrays(theta, z)
        return self.radius * np.cos(z)

    def kappa_theta(self, theta, z):
        return np.full(np.broadcast(theta, z).shape, 1.0 / self.radius)

    def kappa_z(self, theta, z):
        return np.full(np.broadcast(theta, z).shape, 1.0 / self.radius)


class Catenoid(SurfacePatch):
    """Catenoid of waist parameter c: rho(z) = c*cosh(z/c), axis = z axis.

    Minimal surface, so kappa_theta = -kappa_z = 1/(c cosh^2(z/c)) with the
    outward normal; the Gaussian curvature is strictly negative.
    """

    kind = "catenoid"

    def __init__(self, waist):
        if waist <= 0:
            raise ValueError("waist must be positive")
        self.waist = float(waist)

    def _rho(self, z):
        return self.waist * np.cosh(z / self.waist)

    def r(self, theta, z):
        rho = self._rho(z)
        return _stack3(rho * np.cos(theta), rho * np.sin(theta), z + np.zeros_like(np.asarray(theta, dtype=float)))

    def normal(self, theta, z):
        # outward: (cos th, sin th, -rho') / sqrt(1 + rho'^2), rho' = sinh(z/c)
        sech = 1.0 / np.cosh(z / self.waist)
        tanh = np.tanh(z / self.waist)
        return _stack3(sech * np.cos(theta), sech * np.sin(theta), -tanh + np.zeros_like(np.asarray(theta, dtype=float)))

    def e_theta(self, theta, z):
        theta, z = np.broadcast_arrays(theta, z)
        return _stack3(-np.sin(theta), np.cos(theta), np.zeros_like(theta))

    def e_z(self, theta, z):
        sinh = np.sinh(z / self.waist)
        cosh = np.cosh(z / self.waist)
        return _stack3(sinh * np.cos(theta) / cosh, sinh * np.sin(theta) / cosh, 1.0 / cosh + np.zeros_like(np.asarray(theta, dtype=float)))

    def A_theta(self, theta, z):
        theta, z = np.broadcast_arrays(theta, z)
        return self.waist * np.cosh(z / self.waist)

    def A_z(self, theta, z):
        theta, z = np.broadcast_arrays(theta, z)
        return np.cosh(z / self.waist)

    def A_theta_dz(self, theta, z):
        theta, z = np.broadcast_arrays(theta, z)
        return np.sinh(z / self.waist)

    def A_z_dz(self, theta, z):
        theta, z = np.broadcast_arrays(theta, z)
        return np.sinh(z / self.waist) / self.waist

    def kappa_theta(self, theta, z):
        theta, z = np.broadcast_arrays(theta, z)
        return 1.0 / (self.waist * np.cosh(z / self.waist) ** 2)

    def kappa_z(self, theta, z):
        return -self.kappa_theta(theta, z)

    def kappa_theta_dz(self, theta, z):
        theta, z = np.broadcast_arrays(theta, z)
        c = self.waist
        return -2.0 * np.tanh(z / c) / (c * np.cosh(z / c) ** 2) / c

    def kappa_z_dz(self, theta, z):
        return -self.kappa_theta_dz(theta, z)


_SURFACE_KINDS = {
    "plate": lambda param: Plate(),
    "cylinder": lambda param: Cylinder(param),
    "sphere_cap": lambda param: SphereCap(param),
    "catenoid": lambda param: Catenoid(param),
}


def make_builtin_surface(kind, domain, param=None):
    """Construct a built-in surface and reject singular parameter domains.

    Parameters
    ----------
    kind : str
        One of ``plate``, ``cylinder``, ``sphere_cap``, ``catenoid``.
    domain : PatchDomain
        Requested parameter rectangle; checked against coordinate
        singularities (sphere poles, vanishing metric).
    param : float, optional
        Radius (cylinder, sphere_cap) or waist (catenoid); ignored for the
        plate.
    """
    if kind not in _SURFACE_KINDS:
        raise ValueError(f"unknown surface kind {kind!r}")
    if kind != "plate":
        if param is None:
            raise ValueError(f"surface kind {kind!r} requires a positive parameter")
        if param <= 0:
            raise ValueError("geometric parameter must be positive")
    surf = _SURFACE_KINDS[kind](param)
    th = np.linspace(0.0, domain.omega, 65)
    zz = np.linspace(domain.z_min, domain.z_max, 65)
    T, Zg = np.meshgrid(th, zz, indexing="ij")
    a_min = min(surf.A_theta(T, Zg).min(), surf.A_z(T, Zg).min())
    if a_min < 1e-8:
        raise SingularSurfaceError(
            f"{kind} metric degenerates on the requested domain (min A = {a_min:.3e})"
        )
    return surf


# ---------------------------------------------------------------------------
# thickness profiles
# ---------------------------------------------------------------------------

class ThicknessProfile:
    """Pair of positive thickness functions (g1, g2) at scale h.

    ``c1`` and ``c2`` are the declared admissibility constants:
    h <= g1, g2 <= c1*h and |grad g1| + |grad g2| <= c2*h on the patch.
    """

    kind = "abstract"

    def __init__(self, h, c1, c2):
        if h <= 0:
            raise ValueError("h must be positive")
        self.h = float(h)
        self.c1 = float(c1)
        self.c2 = float(c2)

    def g1(self, theta, z):
        raise NotImplementedError

    def g2(self, theta, z):
        raise NotImplementedError

    def g1_dtheta(self, theta, z):
        return np.zeros(np.broadcast(theta, z).shape)

    def g1_dz(self, theta, z):
        return np.zeros(np.broadcast(theta, z).shape)

    def g2_dtheta(self, theta, z):
        return np.zeros(np.broadcast(theta, z).shape)

    def g2_dz(self, theta, z):
        return np.zeros(np.broadcast(theta, z).shape)

    def total(self, theta, z):
        return self.g1(theta, z) + self.g2(theta, z)


class ConstantThickness(ThicknessProfile):
    """g1 = g2 = h (total thickness 2h)."""

    kind = "constant"

    def __init__(self, h):
        super().__init__(h, c1=1.0, c2=0.0)

    def g1(self, theta, z):
        return np.full(np.broadcast(theta, z).shape, self.h)

    g2 = g1


class SinusoidalThickness(ThicknessProfile):
    """g1 = h, g2 = h*(1 + amplitude*sin(theta)*sin(z)).

    Requires amplitude in [0, 1) and sin(theta)*sin(z) >= 0 on the patch so
    the lower admissibility bound h <= g2 holds; the declared gradient
    constant defaults to a generous 4*amplitude.
    """

    kind = "sinusoidal"

    def __init__(self, h, amplitude, c2=None):
        if not 0.0 <= amplitude < 1.0:
            raise ValueError("amplitude must lie in [0, 1)")
        super().__init__(h, c1=1.0 + amplitude, c2=4.0 * amplitude if c2 is None else c2)
        self.amplitude = float(amplitude)

    def g1(self, theta, z):
        return np.full(np.broadcast(theta, z).shape, self.h)

    def g2(self, theta, z):
        theta, z = np.broadcast_arrays(theta, z)
        return self.h * (1.0 + self.amplitude * np.sin(theta) * np.sin(z))

    def g2_dtheta(self, theta, z):
        theta, z = np.broadcast_arrays(theta, z)
        return self.h * self.amplitude * np.cos(theta) * np.sin(z)

    def g2_dz(self, theta, z):
        theta, z = np.broadcast_arrays(theta, z)
        return self.h * self.amplitude * np.sin(theta) * np.cos(z)


def make_thickness(kind, h, amplitude=0.0):
    if kind == "constant":
        return ConstantThickness(h)
    if kind == "sinusoidal":
        return SinusoidalThickness(h, amplitude)
    raise ValueError(f"unknown thickness kind {kind!r}")


# ---------------------------------------------------------------------------
# shell grid
# ---------------------------------------------------------------------------

def _trapezoid_weights(n, spacing):
    w = np.full(n, spacing)
    w[0] *= 0.5
    w[-1] *= 0.5
    return w


class ShellGrid:
    """Tensor-product discretization of the shell in (s, theta, z).

    The reference coordinate s runs uniformly over [-1/2, 1/2] and is mapped
    onto the normal fiber by t = -g1 + (s + 1/2)(g1 + g2), so variable
    thickness is absorbed into the map.  Nodal quadrature weights are

        w = A_z * A_theta * (g1 + g2) * (trapezoid weights in s x theta x z),

    which discretizes the weighted volume integral used for every norm.
    Surface samples, the t-map and its (theta, z) partials are cached on the
    grid; axis order of all nodal arrays is (s, theta, z).
    """

    def __init__(self, surface, profile, domain, n_t, n_theta, n_z):
        if min(n_t, n_theta, n_z) < 3:
            raise ValueError("need at least 3 nodes per axis for second-order stencils")
        self.surface = surface
        self.profile = profile
        self.domain = domain
        self.n_t = int(n_t)
        self.n_theta = int(n_theta)
        self.n_z = int(n_z)

        self.s = np.linspace(-0.5, 0.5, self.n_t)
        self.theta = np.linspace(0.0, domain.omega, self.n_theta)
        self.z = np.linspace(domain.z_min, domain.z_max, self.n_z)
        self.ds = self.s[1] - self.s[0]
        self.dtheta = self.theta[1] - self.theta[0]
        self.dz = self.z[1] - self.z[0]

        TH, ZZ = np.meshgrid(self.theta, self.z, indexing="ij")
        self.TH, self.ZZ = TH, ZZ
        self.A_theta = surface.A_theta(TH, ZZ)
        self.A_z = surface.A_z(TH, ZZ)
        self.A_theta_dz = surface.A_theta_dz(TH, ZZ)
        self.A_z_dtheta = surface.A_z_dtheta(TH, ZZ)
        self.kappa_theta = surface.kappa_theta(TH, ZZ)
        self.kappa_z = surface.kappa_z(TH, ZZ)

        g1 = profile.g1(TH, ZZ)
        g2 = profile.g2(TH, ZZ)
        if np.any(g1 <= 0) or np.any(g2 <= 0):
            raise ValueError("thickness functions must stay positive on the grid")
        self.g1, self.g2 = g1, g2
        self.gsum = g1 + g2

        sc = self.s[:, None, None]
        self.t = -g1[None] + (sc + 0.5) * self.gsum[None]
        # partials of the t-map at fixed s: needed to convert grid-line
        # derivatives into derivatives at fixed t
        g1t = profile.g1_dtheta(TH, ZZ)
        g1z = profile.g1_dz(TH, ZZ)
        gt = g1t + profile.g2_dtheta(TH, ZZ)
        gz = g1z + profile.g2_dz(TH, ZZ)
        self.t_dtheta = -g1t[None] + (sc + 0.5) * gt[None]
        self.t_dz = -g1z[None] + (sc + 0.5) * gz[None]

        ws = _trapezoid_weights(self.n_t, self.ds)
        wt = _trapezoid_weights(self.n_theta, self.dtheta)
        wz = _trapezoid_weights(self.n_z, self.dz)
        self.weights = (
            ws[:, None, None]
            * (wt[:, None] * wz[None, :] * self.A_z * self.A_theta * self.gsum)[None]
        )

    @property
    def shape(self):
        return (self.n_t, self.n_theta, self.n_z)

    @property
    def n_nodes(self):
        return self.n_t * self.n_theta * self.n_z

    @property
    def n_dofs(self):
        return 3 * self.n_nodes

    @property
    def h(self):
        return self.profile.h

    def max_spacing(self):
        """Largest physical node spacing over the three axes."""
        dt_phys = (self.gsum.max() / (self.n_t - 1))
        dth_phys = self.A_theta.max() * self.dtheta
        dz_phys = self.A_z.max() * self.dz
        return max(dt_phys, dth_phys, dz_phys)

    def refined(self, factor=2):
        """Same geometry with every axis refined (n -> factor*(n-1)+1)."""
        return ShellGrid(
            self.surface,
            self.profile,
            self.domain,
            factor * (self.n_t - 1) + 1,
            factor * (self.n_theta - 1) + 1,
            factor * (self.n_z - 1) + 1,
        )

    def volume(self):
        return float(self.weights.sum())


def offset_map(surface, profile, grid):
    """Nodal Cartesian points R = r + t*n and local frames on a grid.

    Returns
    -------
    points : ndarray, shape grid.shape + (3,)
    frames : ndarray, shape grid.shape + (3, 3)
        Columns are (n, e_theta, e_z) at the foot point of each node.
    """
    r = surface.r(grid.TH, grid.ZZ)
    n = surface.normal(grid.TH, grid.ZZ)
    points = r[None] + grid.t[..., None] * n[None]
    frames = surface.frame(grid.TH, grid.ZZ)
    frames = np.broadcast_to(frames[None], grid.shape + (3, 3)).copy()
    return points, frames


# ---------------------------------------------------------------------------
# admissibility validation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ReportRow:
    symbol: str
    estimate: float
    bound: float
    passed: bool


@dataclass
class AdmissibilityReport:
    rows: list

    @property
    def all_pass(self):
        return all(r.passed for r in self.rows)

    def row(self, symbol):
        for r in self.rows:
            if r.symbol == symbol:
                return r
        raise KeyError(symbol)

    def __getitem__(self, symbol):
        return self.row(symbol)

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["symbol", "estimate", "bound", "pass"])
        for r in self.rows:
            writer.writerow([r.symbol, repr(r.estimate), repr(r.bound), r.passed])
        return buf.getvalue()


def _fd_max_abs_derivatives(F, dth, dz, orders=(1,)):
    """Max |d^k F| over interior samples by central differences, per order."""
    out = {}
    f_th = (F[2:, :] - F[:-2, :]) / (2 * dth)
    f_z = (F[:, 2:] - F[:, :-2]) / (2 * dz)
    if 1 in orders:
        out[1] = max(np.abs(f_th).max(), np.abs(f_z).max())
    if 2 in orders:
        f_thth = (F[2:, :] - 2 * F[1:-1, :] + F[:-2, :]) / dth**2
        f_zz = (F[:, 2:] - 2 * F[:, 1:-1] + F[:, :-2]) / dz**2
        f_thz = (f_th[:, 2:] - f_th[:, :-2]) / (2 * dz)
        out[2] = max(np.abs(f_thth).max(), np.abs(f_zz).max(), np.abs(f_thz).max())
    return out


def validate_admissibility(surface, profile, domain, n_samples=33):
    """Sampled estimates of the geometric and thickness admissibility symbols.

    Estimates are finite-difference/sampling estimates, not certified
    bounds.  Minima can only decrease and maxima only increase under
    refinement of the (nested) sample set, so a failed bound never turns
    into a pass on a finer grid.

    Parameters
    ----------
    n_samples : int or (int, int)
        Samples per axis; at least 17 x 17.
    """
    if np.isscalar(n_samples):
        ns_th = ns_z = int(n_samples)
    else:
        ns_th, ns_z = map(int, n_samples)
    if ns_th < 17 or ns_z < 17:
        raise ValueError("sample density must be at least 17x17")

    th = np.linspace(0.0, domain.omega, ns_th)
    zz = np.linspace(domain.z_min, domain.z_max, ns_z)
    TH, ZZ = np.meshgrid(th, zz, indexing="ij")
    dth = th[1] - th[0]
    dz = zz[1] - zz[0]

    rows = []
    eps = 1e-12

    # patch extent (2.1-style conditions)
    z1 = domain.z1(th)
    z2 = domain.z2(th)
    ext = z2 - z1
    l_est = float(ext.min())
    L_est = float(ext.max())
    lip1 = float(np.abs(np.diff(z1) / dth).max()) if ns_th > 1 else 0.0
    lip2 = float(np.abs(np.diff(z2) / dth).max()) if ns_th > 1 else 0.0
    Z_est = max(np.abs(z1).max(), np.abs(z2).max()) + max(lip1, lip2)
    rows.append(ReportRow("omega", float(domain.omega), float(domain.omega), domain.omega > 0))
    rows.append(ReportRow("l", l_est, float(domain.l), l_est >= domain.l - eps and l_est > 0))
    rows.append(ReportRow("L", L_est, float(domain.L), L_est <= domain.L + eps))
    rows.append(ReportRow("Z", float(Z_est), float(domain.Z), Z_est <= domain.Z + eps))

    # metric and curvature bounds (2.4-style conditions)
    A_th = surface.A_theta(TH, ZZ)
    A_zv = surface.A_z(TH, ZZ)
    a_est = float(min(A_th.min(), A_zv.min()))
    rows.append(ReportRow("a", a_est, 0.0, a_est > 1e-8))

    d_ath = _fd_max_abs_derivatives(A_th, dth, dz, orders=(1, 2))
    d_az = _fd_max_abs_derivatives(A_zv, dth, dz, orders=(1, 2))
    A_est = (
        np.abs(A_th).max() + d_ath[1] + d_ath[2]
        + np.abs(A_zv).max() + d_az[1] + d_az[2]
    )
    rows.append(ReportRow("A", float(A_est), float("inf"), np.isfinite(A_est)))

    k_th = surface.kappa_theta(TH, ZZ)
    k_zv = surface.kappa_z(TH, ZZ)
    d_kth = _fd_max_abs_derivatives(k_th, dth, dz)[1]
    d_kz = _fd_max_abs_derivatives(k_zv, dth, dz)[1]
    k_est = np.abs(k_th).max() + d_kth + np.abs(k_zv).max() + d_kz
    rows.append(ReportRow("k", float(k_est), float("inf"), np.isfinite(k_est)))

    # thickness conditions (1.1)
    h = profile.h
    g1 = profile.g1(TH, ZZ)
    g2 = profile.g2(TH, ZZ)
    low_est = float(min(g1.min(), g2.min()) / h)
    c1_est = float(max(g1.max(), g2.max()) / h)
    rows.append(ReportRow("thickness_lower", low_est, 1.0, low_est >= 1.0 - 1e-9))
    rows.append(ReportRow("c1", c1_est, profile.c1, c1_est <= profile.c1 + 1e-9))

    # surface gradient estimated by finite differences in arclength
    def grad_mag(G):
        g_th = np.zeros_like(G)
        g_z = np.zeros_like(G)
        g_th[1:-1, :] = (G[2:, :] - G[:-2, :]) / (2 * dth)
        g_th[0, :] = (G[1, :] - G[0, :]) / dth
        g_th[-1, :] = (G[-1, :] - G[-2, :]) / dth
        g_z[:, 1:-1] = (G[:, 2:] - G[:, :-2]) / (2 * dz)
        g_z[:, 0] = (G[:, 1] - G[:, 0]) / dz
        g_z[:, -1] = (G[:, -1] - G[:, -2]) / dz
        return np.hypot(g_th / A_th, g_z / A_zv)

    c2_est = float((grad_mag(g1) + grad_mag(g2)).max() / h)
    rows.append(ReportRow("c2", c2_est, profile.c2, c2_est <= profile.c2 + 1e-9))

    return AdmissibilityReport(rows)
