"""Refit single-variable models from characterization rows."""

import numpy as np

from ..kinds import DeviceKind
from ..numeric import FitProblem, gauss_newton_fit
from .bundle import eval_model

REFITTABLE = ("vth_w", "vth_l", "ro")


class _ScaledFamily:
    """Adapts a family so the fitter sees inputs already in meters."""

    def __init__(self, spec):
        self.spec = spec

    def value(self, xs, theta):
        return self.spec.family.value(self.spec.scale(xs), theta)

    def jacobian(self, xs, theta):
        return self.spec.family.jacobian(self.spec.scale(xs), theta)


def refit_targets(rows, bundle, kind, model):
    """Inputs (meters) and the isolated responses of ``model`` for each row.

    The threshold column holds the combined value; the other single-variable
    fit and the combiner are taken from ``bundle`` and stripped off.
    """
    kind = DeviceKind.parse(kind)
    rows = [r for r in rows if r.kind is kind]
    dev = bundle.device(kind)
    if model == "ro":
        return np.array([r.l for r in rows]), np.array([r.r_o for r in rows])
    b0, bw, bl = dev.vth_combo.theta
    if model == "vth_w":
        xs = np.array([r.w for r in rows])
        ys = np.array([(r.v_th - b0 - bl * eval_model(dev.vth_l, r.l)) / bw for r in rows])
    elif model == "vth_l":
        xs = np.array([r.l for r in rows])
        ys = np.array([(r.v_th - b0 - bw * eval_model(dev.vth_w, r.w)) / bl for r in rows])
    else:
        raise ValueError(f"can refit only {', '.join(REFITTABLE)}, not {model!r}")
    return xs, ys


def refit_model(rows, bundle, kind, model, theta0=None, tol=1e-12, max_iter=200):
    """Gauss-Newton refit of one bundle model from characterization rows."""
    spec = getattr(bundle.device(kind), model)
    xs, ys = refit_targets(rows, bundle, kind, model)
    start = spec.theta if theta0 is None else theta0
    problem = FitProblem(xs, ys, start, tol=tol, max_iter=max_iter)
    return gauss_newton_fit(_ScaledFamily(spec), problem)
