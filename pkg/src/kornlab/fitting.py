"""Log-log scaling-exponent fits and their pass/fail verdicts."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["FitReport", "SweepResult", "fit_exponent"]

R2_GATE = 0.95


@dataclass
class FitReport:
    """Least-squares power-law fit of value ~ C * h^slope.

    The verdict is ``inconclusive`` whenever R^2 < 0.95 regardless of the
    slope; otherwise ``pass``/``fail`` against the tolerance band (when one
    is given).
    """

    quantity: str
    slope: float
    intercept: float
    r2: float
    n_points: int
    band: tuple | None = None
    verdict: str = "inconclusive"
    excluded: int = 0

    def as_dict(self):
        return {
            "quantity": self.quantity,
            "slope": self.slope,
            "intercept": self.intercept,
            "r2": self.r2,
            "n_points": self.n_points,
            "band": list(self.band) if self.band is not None else None,
            "verdict": self.verdict,
            "excluded": self.excluded,
        }


@dataclass
class SweepResult:
    """Per-h measured values of one quantity plus the fitted exponent."""

    quantity: str
    pairs: list  # list of (h, value)
    fit: FitReport = field(default=None)

    @property
    def slope(self):
        return self.fit.slope

    @property
    def r2(self):
        return self.fit.r2


def fit_exponent(pairs, band=None, name="quantity", r2_gate=R2_GATE):
    """Fit log(value) = slope * log(h) + intercept by least squares.

    Nonpositive values are excluded (counted in ``excluded``); fewer than 3
    surviving points makes the fit inconclusive with NaN slope.
    """
    pairs = [(float(h), float(v)) for h, v in pairs]
    kept = [(h, v) for h, v in pairs if v > 0 and np.isfinite(v) and h > 0]
    excluded = len(pairs) - len(kept)
    if len(kept) < 3:
        return FitReport(
            quantity=name,
            slope=float("nan"),
            intercept=float("nan"),
            r2=0.0,
            n_points=len(kept),
            band=band,
            verdict="inconclusive",
            excluded=excluded,
        )
    logh = np.log([h for h, _ in kept])
    logv = np.log([v for _, v in kept])
    slope, intercept = np.polyfit(logh, logv, 1)
    pred = slope * logh + intercept
    ss_res = float(np.sum((logv - pred) ** 2))
    ss_tot = float(np.sum((logv - logv.mean()) ** 2))
    if ss_tot == 0.0:
        r2 = 1.0 if ss_res <= 1e-24 else 0.0
    else:
        r2 = 1.0 - ss_res / ss_tot

    if r2 < r2_gate:
        verdict = "inconclusive"
    elif band is None:
        verdict = "pass"
    else:
        lo = -np.inf if band[0] is None else band[0]
        hi = np.inf if band[1] is None else band[1]
        verdict = "pass" if lo <= slope <= hi else "fail"
    return FitReport(
        quantity=name,
        slope=float(slope),
        intercept=float(intercept),
        r2=float(r2),
        n_points=len(kept),
        band=band,
        verdict=verdict,
        excluded=excluded,
    )


def sweep_result(name, pairs, band=None):
    return SweepResult(quantity=name, pairs=list(pairs), fit=fit_exponent(pairs, band=band, name=name))
