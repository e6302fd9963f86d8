"""Width prediction by inverting the active/passive current model."""

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .device import (
    CurrentSplit,
    Geometry,
    Region,
    active_current,
    drain_current,
    overdrive,
    passive_current,
    saturation_check,
)
from .errors import NoBracket, NonConvergence, NotSaturated, OutOfDomain
from .kinds import DeviceKind
from .models import eval_ro, eval_ucox, eval_vth

DAMPING = 0.5
DEFAULT_BRACKET = (0.2e-6, 500e-6)
ADJUST_THRESHOLD = 0.05


@dataclass(frozen=True)
class Pins:
    ucox: float = None
    vth: float = None
    ro: float = None

    @property
    def complete(self):
        return None not in (self.ucox, self.vth, self.ro)


@dataclass(frozen=True)
class SizingRequest:
    kind: DeviceKind
    target_id: float
    v_gs: float
    v_ds: float
    l: float
    pins: Pins = field(default_factory=Pins)

    def __post_init__(self):
        object.__setattr__(self, "kind", DeviceKind.parse(self.kind))
        if not self.target_id > 0:
            raise ValueError("target drain current must be positive")
        if not self.l > 0:
            raise ValueError("channel length must be positive")
        if self.pins is None:
            object.__setattr__(self, "pins", Pins())


@dataclass(frozen=True)
class SizingResult:
    w: float
    vth: float
    ucox: float
    ro: float
    split: CurrentSplit
    region: Region
    iterations: int
    method: str


@dataclass(frozen=True)
class SweepResult:
    samples: tuple
    best_w: float
    step: float
    range_saturated: bool = False


def closed_form_width(i_a, ucox, l, v_ov):
    """W that makes the square-law term carry ``i_a``."""
    if not v_ov > 0:
        raise NotSaturated(f"overdrive {v_ov:.6g} V is not positive")
    return 2.0 * i_a * l / (ucox * v_ov**2)


class _Device:
    """Parameter lookup at a candidate width, honouring pins."""

    def __init__(self, bundle, req):
        self.bundle = bundle
        self.req = req
        p = req.pins
        self.ro = p.ro if p.ro is not None else eval_ro(bundle, req.kind, req.l)

    def params(self, w):
        p = self.req.pins
        vth = p.vth if p.vth is not None else eval_vth(self.bundle, self.req.kind, w, self.req.l)
        ucox = p.ucox if p.ucox is not None else eval_ucox(self.bundle, self.req.kind, w, self.req.l)
        return vth, ucox

    def split(self, w):
        vth, ucox = self.params(w)
        r = self.req
        v_ov = overdrive(r.kind, r.v_gs, vth)
        return drain_current(active_current(ucox, Geometry(w, r.l), v_ov),
                             passive_current(r.v_ds, v_ov, self.ro))

    def next_width(self, w):
        r = self.req
        vth, ucox = self.params(w)
        v_ov = overdrive(r.kind, r.v_gs, vth)
        i_a = r.target_id - passive_current(r.v_ds, v_ov, self.ro)
        if not i_a > 0:
            raise NotSaturated("passive current alone exceeds the target")
        return closed_form_width(i_a, ucox, r.l, v_ov)


def _fixed_point(dev, w0, lo, hi, tol_rel, max_iter):
    w = w0
    for k in range(1, max_iter + 1):
        w_next = (1 - DAMPING) * w + DAMPING * dev.next_width(w)
        if not (lo <= w_next <= hi) or not math.isfinite(w_next):
            return None
        if abs(w_next - w) < tol_rel * w:
            return w_next, k
        w = w_next
    return None


def _bisect(dev, lo, hi, tol_rel, max_iter):
    target = dev.req.target_id

    def g(w):
        return dev.split(w).i_d - target

    try:
        g_lo, g_hi = g(lo), g(hi)
    except (OutOfDomain, NotSaturated) as exc:
        raise NoBracket(f"cannot evaluate the bracket ends: {exc}") from None
    if g_lo == 0:
        return lo, 0
    if g_hi == 0:
        return hi, 0
    if (g_lo > 0) == (g_hi > 0):
        raise NoBracket(
            f"target {target:.6g} A is outside [{g_lo + target:.6g}, {g_hi + target:.6g}] A "
            f"reachable for W in [{lo:.6g}, {hi:.6g}] m"
        )
    for k in range(1, max_iter + 1):
        mid = 0.5 * (lo + hi)
        g_mid = g(mid)
        if (g_mid > 0) == (g_lo > 0):
            lo, g_lo = mid, g_mid
        else:
            hi = mid
        if hi - lo < tol_rel * lo:
            return 0.5 * (lo + hi), k
    raise NonConvergence("bisection did not reach tolerance")


def predict_width(bundle, req, tol_rel=1e-6, max_iter=100, w_bracket=DEFAULT_BRACKET):
    """Predict W for the requested drain current, bias and length.

    Damped fixed-point on the closed-form width, with bisection over
    ``w_bracket`` when the iteration leaves the bracket or fails to settle.
    """
    lo, hi = w_bracket
    if not 0 < lo < hi:
        raise ValueError("bracket must satisfy 0 < lo < hi")
    dev = _Device(bundle, req)

    if req.pins.complete:
        w = dev.next_width(lo)
        if not lo <= w <= hi:
            raise NoBracket(f"pinned width {w:.6g} m is outside the bracket")
        found, method = (w, 1), "fixed_point"
    else:
        try:
            found = _fixed_point(dev, math.sqrt(lo * hi), lo, hi, tol_rel, max_iter)
        except (OutOfDomain, NotSaturated):
            found = None
        method = "fixed_point"
        if found is None:
            # Bisection needs more halvings than the fixed point needs steps.
            found = _bisect(dev, lo, hi, tol_rel * 1e-3, max(max_iter, 200))
            method = "bisection"

    w, iterations = found
    vth, ucox = dev.params(w)
    region = saturation_check(req.kind, req.v_gs, req.v_ds, vth)
    if region is not Region.SATURATION:
        raise NotSaturated(f"sized device lands in the {region.value} region")
    split = dev.split(w)
    return SizingResult(w, vth, ucox, dev.ro, split, region, iterations, method)


def brute_force_width(bundle, kind, target_id, v_gs, v_ds, l, w_min, w_max, steps, pins=None):
    """Linear W sweep; the sample with current closest to the target wins."""
    if steps < 2:
        raise ValueError("a sweep needs at least 2 steps")
    if not 0 < w_min < w_max:
        raise ValueError("sweep range must satisfy 0 < w_min < w_max")
    req = SizingRequest(kind, target_id, v_gs, v_ds, l, pins or Pins())
    dev = _Device(bundle, req)
    ws = np.linspace(w_min, w_max, steps)
    ids = np.array([dev.split(float(w)).i_d for w in ws])
    best = int(np.argmin(np.abs(ids - target_id)))
    saturated = (best in (0, steps - 1)) and not (ids.min() <= target_id <= ids.max())
    return SweepResult(
        tuple(zip(ws.tolist(), ids.tolist())),
        float(ws[best]),
        float((w_max - w_min) / (steps - 1)),
        bool(saturated),
    )


class Adjustment(str, enum.Enum):
    DECREASE_W = "decrease_w"
    INCREASE_W = "increase_w"
    NONE = "none"


@dataclass(frozen=True)
class AdjustmentAdvice:
    direction: Adjustment
    rationale: str


def suggest_adjustment(kind, expected_vds, actual_vds, threshold=ADJUST_THRESHOLD):
    """Which way to move W when a sized device's V_DS misses its target."""
    expected, actual = abs(expected_vds), abs(actual_vds)
    if expected == 0:
        raise ValueError("expected V_DS must be nonzero")
    err = abs(actual - expected) / expected
    if err <= threshold:
        return AdjustmentAdvice(
            Adjustment.NONE, f"|V_DS| error {100 * err:.3g}% is within {100 * threshold:.3g}%")
    if actual < expected:
        return AdjustmentAdvice(
            Adjustment.DECREASE_W,
            f"|V_DS| {actual:.4g} V is below {expected:.4g} V; a narrower device carries less "
            "active current, shifting share to the passive path and raising V_DS")
    return AdjustmentAdvice(
        Adjustment.INCREASE_W,
        f"|V_DS| {actual:.4g} V is above {expected:.4g} V; a wider device carries more "
        "active current, lowering V_DS")
