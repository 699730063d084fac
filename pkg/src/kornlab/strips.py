"""Thin 2D strip domains and mapped tensor grids.

A strip is D = {(x, y): y in (0, b), x in (-phi1(y), phi2(y))} with both
width functions pinched between h and C1*h and Lipschitz bound C2*h.  The
grid uses a reference coordinate xi in [-1/2, 1/2] across the width, so
x = -phi1 + (xi + 1/2)(phi1 + phi2), with uniform y along the strip.
"""

from __future__ import annotations

import numpy as np

__all__ = ["StripDomain", "StripGrid", "make_strip"]


class StripDomain:
    """Variable-width strip with admissibility constants C1, C2."""

    kind = "abstract"

    def __init__(self, h, b, C1, C2):
        if h <= 0 or b <= 0:
            raise ValueError("h and b must be positive")
        self.h = float(h)
        self.b = float(b)
        self.C1 = float(C1)
        self.C2 = float(C2)

    def phi1(self, y):
        raise NotImplementedError

    def phi2(self, y):
        raise NotImplementedError

    def dphi1(self, y):
        return np.zeros_like(np.asarray(y, dtype=float))

    def dphi2(self, y):
        return np.zeros_like(np.asarray(y, dtype=float))

    def d2phi1(self, y):
        return np.zeros_like(np.asarray(y, dtype=float))

    def d2phi2(self, y):
        return np.zeros_like(np.asarray(y, dtype=float))

    def check_admissible(self, n_samples=257):
        y = np.linspace(0.0, self.b, n_samples)
        for phi, dphi in ((self.phi1, self.dphi1), (self.phi2, self.dphi2)):
            p = phi(y)
            if p.min() < self.h - 1e-12 or p.max() > self.C1 * self.h + 1e-12:
                raise ValueError("width function violates h <= phi <= C1*h")
            if np.abs(dphi(y)).max() > self.C2 * self.h + 1e-12:
                raise ValueError("width slope violates |phi'| <= C2*h")
        return True


class ConstantStrip(StripDomain):
    kind = "constant"

    def __init__(self, h, b=1.0):
        super().__init__(h, b, C1=1.0, C2=0.0)

    def phi1(self, y):
        return np.full_like(np.asarray(y, dtype=float), self.h)

    phi2 = phi1


class SinusoidalStrip(StripDomain):
    """phi_i = h * (1 + a/2 * (1 -/+ trig(2 pi y / b))), range [h, (1+a) h]."""

    kind = "sinusoidal"

    def __init__(self, h, b=1.0, amplitude=0.3):
        if not 0.0 <= amplitude < 1.0:
            raise ValueError("amplitude must lie in [0, 1)")
        self.amplitude = float(amplitude)
        omega = 2.0 * np.pi / b
        super().__init__(h, b, C1=1.0 + amplitude, C2=amplitude * 0.5 * omega * 1.0001)

    def _om(self):
        return 2.0 * np.pi / self.b

    def phi1(self, y):
        a, om = self.amplitude, self._om()
        return self.h * (1.0 + 0.5 * a * (1.0 - np.cos(om * np.asarray(y, dtype=float))))

    def dphi1(self, y):
        a, om = self.amplitude, self._om()
        return self.h * 0.5 * a * om * np.sin(om * np.asarray(y, dtype=float))

    def d2phi1(self, y):
        a, om = self.amplitude, self._om()
        return self.h * 0.5 * a * om * om * np.cos(om * np.asarray(y, dtype=float))

    def phi2(self, y):
        a, om = self.amplitude, self._om()
        return self.h * (1.0 + 0.5 * a * (1.0 - np.sin(om * np.asarray(y, dtype=float))))

    def dphi2(self, y):
        a, om = self.amplitude, self._om()
        return -self.h * 0.5 * a * om * np.cos(om * np.asarray(y, dtype=float))

    def d2phi2(self, y):
        a, om = self.amplitude, self._om()
        return self.h * 0.5 * a * om * om * np.sin(om * np.asarray(y, dtype=float))


class SawtoothStrip(StripDomain):
    """Smoothed sawtooth width: three-mode Fourier truncation of a triangle wave."""

    kind = "sawtooth-smoothed"

    _MODES = (1, 3, 5)

    def __init__(self, h, b=1.0, amplitude=0.3):
        if not 0.0 <= amplitude < 1.0:
            raise ValueError("amplitude must lie in [0, 1)")
        self.amplitude = float(amplitude)
        om = 2.0 * np.pi / b
        # |tri'| <= (8/pi^2) * om * sum(1/k) over odd modes
        slope = (8.0 / np.pi**2) * om * sum(1.0 / k for k in self._MODES)
        super().__init__(h, b, C1=1.0 + amplitude, C2=0.5 * amplitude * slope * 1.0001)

    def _tri(self, y, deriv=0):
        om = 2.0 * np.pi / self.b
        out = np.zeros_like(np.asarray(y, dtype=float))
        for k in self._MODES:
            c = (8.0 / np.pi**2) * (-1.0) ** ((k - 1) // 2) / k**2
            arg = k * om * np.asarray(y, dtype=float)
            if deriv == 0:
                out += c * np.sin(arg)
            elif deriv == 1:
                out += c * k * om * np.cos(arg)
            else:
                out += -c * (k * om) ** 2 * np.sin(arg)
        return out

    def phi1(self, y):
        return self.h * (1.0 + 0.5 * self.amplitude * (1.0 + self._tri(y)))

    def dphi1(self, y):
        return self.h * 0.5 * self.amplitude * self._tri(y, 1)

    def d2phi1(self, y):
        return self.h * 0.5 * self.amplitude * self._tri(y, 2)

    def phi2(self, y):
        return self.h * (1.0 + 0.5 * self.amplitude * (1.0 - self._tri(y)))

    def dphi2(self, y):
        return -self.h * 0.5 * self.amplitude * self._tri(y, 1)

    def d2phi2(self, y):
        return -self.h * 0.5 * self.amplitude * self._tri(y, 2)


def make_strip(kind, h, b=1.0, amplitude=0.3):
    if kind == "constant":
        return ConstantStrip(h, b)
    if kind == "sinusoidal":
        return SinusoidalStrip(h, b, amplitude)
    if kind == "sawtooth-smoothed":
        return SawtoothStrip(h, b, amplitude)
    raise ValueError(f"unknown strip kind {kind!r}")


class StripGrid:
    """Mapped tensor grid on a strip; axis order (xi, y)."""

    def __init__(self, strip, n_across, n_along):
        if n_across < 9:
            raise ValueError("grid must resolve the width with at least 9 nodes")
        if n_along < 3:
            raise ValueError("need at least 3 nodes along the strip")
        self.strip = strip
        self.n_across = int(n_across)
        self.n_along = int(n_along)
        self.xi = np.linspace(-0.5, 0.5, self.n_across)
        self.y = np.linspace(0.0, strip.b, self.n_along)
        self.dxi = self.xi[1] - self.xi[0]
        self.dy = self.y[1] - self.y[0]

        p1 = strip.phi1(self.y)
        p2 = strip.phi2(self.y)
        self.phi1, self.phi2 = p1, p2
        self.width = p1 + p2
        self.X = -p1[None, :] + (self.xi[:, None] + 0.5) * self.width[None, :]

        wxi = np.full(self.n_across, self.dxi)
        wxi[0] *= 0.5
        wxi[-1] *= 0.5
        wy = np.full(self.n_along, self.dy)
        wy[0] *= 0.5
        wy[-1] *= 0.5
        self.weights = wxi[:, None] * (wy * self.width)[None, :]

    @property
    def shape(self):
        return (self.n_across, self.n_along)

    @property
    def n_nodes(self):
        return self.n_across * self.n_along

    def refined(self, factor=2):
        return StripGrid(
            self.strip,
            factor * (self.n_across - 1) + 1,
            factor * (self.n_along - 1) + 1,
        )

    def area(self):
        return float(self.weights.sum())

    # -- nodal partials at fixed (x, y) --------------------------------------
    def partials(self, f):
        """(f_x, f_y) of a nodal scalar via mapped second-order differences."""
        from .operators import _diff_axis

        f_xi = _diff_axis(f, self.dxi, 0)
        f_x = f_xi / self.width[None, :]
        X_y = _diff_axis(self.X, self.dy, 1)
        f_y = _diff_axis(f, self.dy, 1) - X_y * f_x
        return f_x, f_y

    def inner(self, f, g):
        return float((self.weights * f * g).sum())

    def norm(self, f):
        return float(np.sqrt(max(self.inner(f, f), 0.0)))

    def mean(self, f):
        return self.inner(f, np.ones_like(f)) / self.area()

    def boundary_distance(self):
        """Nodal distance to the strip boundary (min over the four sides).

        Bottom/top are straight segments; the lateral graph boundaries are
        measured against a refined polyline.
        """
        yy = np.broadcast_to(self.y[None, :], self.shape)
        d = np.minimum(yy, self.strip.b - yy)
        yf = np.linspace(0.0, self.strip.b, 8 * (self.n_along - 1) + 1)
        for sign, phi in ((-1.0, self.strip.phi1), (1.0, self.strip.phi2)):
            px = sign * phi(yf)
            d = np.minimum(d, _points_to_polyline(self.X, yy, px, yf))
        return d


def _points_to_polyline(px_pts, py_pts, cx, cy):
    """Distance from grid points to the polyline (cx[k], cy[k])."""
    P = np.stack([px_pts.ravel(), py_pts.ravel()], axis=1)
    A = np.stack([cx[:-1], cy[:-1]], axis=1)
    B = np.stack([cx[1:], cy[1:]], axis=1)
    AB = B - A
    denom = (AB**2).sum(axis=1)
    denom[denom == 0] = 1.0
    best = np.full(P.shape[0], np.inf)
    # chunk over segments to bound memory
    step = 512
    for k0 in range(0, A.shape[0], step):
        a = A[k0 : k0 + step]
        ab = AB[k0 : k0 + step]
        dn = denom[k0 : k0 + step]
        ap = P[:, None, :] - a[None, :, :]
        t = np.clip((ap * ab[None, :, :]).sum(-1) / dn[None, :], 0.0, 1.0)
        proj = a[None, :, :] + t[..., None] * ab[None, :, :]
        dist = np.linalg.norm(P[:, None, :] - proj, axis=-1).min(axis=1)
        best = np.minimum(best, dist)
    return best.reshape(px_pts.shape)
