"""Re-solve combiner coefficients so the combined model hits known anchors."""

from dataclasses import dataclass

import numpy as np

from ..numeric import solve_linear_lsq
from .bundle import ModelSpec, eval_model, ucox_parts, vth_parts

_PARTS = {"vth": vth_parts, "ucox": ucox_parts}


@dataclass(frozen=True)
class AnchorPoint:
    w: float
    l: float
    target: float

    def __post_init__(self):
        if not (self.w > 0 and self.l > 0):
            raise ValueError("anchor geometry must be positive")


@dataclass(frozen=True)
class CalibrationResult:
    spec: ModelSpec
    residual: float


def calibrate_combo(bundle, kind, quantity, anchors, fixed_beta0=None,
                    fixed_beta1=None, fixed_beta2=None, note=None):
    """Least-squares fit of the affine combiner for ``quantity`` to ``anchors``.

    Fixed coefficients are held at the given values and only the remaining
    ones are solved for. ``residual`` is the 2-norm of the anchor misfit,
    zero up to round-off when the system is exactly determined.
    """
    if quantity not in _PARTS:
        raise ValueError(f"quantity must be 'vth' or 'ucox', got {quantity!r}")
    anchors = list(anchors)
    fixed = {0: fixed_beta0, 1: fixed_beta1, 2: fixed_beta2}
    free = [i for i, v in fixed.items() if v is None]
    if not free:
        raise ValueError("all three coefficients fixed; nothing to calibrate")
    if len(anchors) < len(free):
        raise ValueError(f"need at least {len(free)} anchors to solve {len(free)} coefficients")

    parts = _PARTS[quantity]
    rows = np.array([[1.0, *parts(bundle, kind, a.w, a.l)] for a in anchors])
    targets = np.array([a.target for a in anchors], dtype=float)

    rhs = targets.copy()
    for i, v in fixed.items():
        if v is not None:
            rhs -= v * rows[:, i]
    solved = solve_linear_lsq(rows[:, free], rhs)

    beta = [fixed[i] for i in range(3)]
    for i, b in zip(free, solved):
        beta[i] = float(b)
    old = getattr(bundle.device(kind), f"{quantity}_combo")
    spec = ModelSpec(old.family, beta, old.input_unit, old.note if note is None else note)
    misfit = targets - np.array([eval_model(spec, row[1:]) for row in rows])
    return CalibrationResult(spec, float(np.linalg.norm(misfit)))
