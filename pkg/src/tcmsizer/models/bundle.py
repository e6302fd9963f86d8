"""Model specs, per-technology coefficient bundles, and evaluation."""

from dataclasses import dataclass, replace

import numpy as np

from ..errors import OutOfDomain
from ..kinds import DeviceKind
from .families import ModelFamily, get_family

UNITS = {"um": 1e-6, "m": 1.0}

# Fits were trained on bounded geometry sweeps; no extrapolation beyond.
GEOM_MIN = 0.18e-6
GEOM_MAX = 500e-6

MODEL_NAMES = ("vth_w", "vth_l", "vth_combo", "ucox_w", "ucox_l", "ucox_combo", "ro")


@dataclass(frozen=True)
class ModelSpec:
    family: ModelFamily
    theta: tuple
    input_unit: str = "um"
    note: str = ""

    def __post_init__(self):
        if isinstance(self.family, str):
            object.__setattr__(self, "family", get_family(self.family))
        theta = tuple(float(t) for t in self.theta)
        if len(theta) != self.family.n_params:
            raise ValueError(
                f"{self.family.code} takes {self.family.n_params} coefficients, got {len(theta)}"
            )
        object.__setattr__(self, "theta", theta)
        if self.input_unit not in UNITS:
            raise ValueError(f"input_unit must be one of {sorted(UNITS)}, got {self.input_unit!r}")
        if self.family.n_inputs == 2 and self.input_unit != "m":
            raise ValueError("combiner specs take unscaled inputs (input_unit=m)")

    def scale(self, x_m):
        """Convert meters to the unit this fit was trained in."""
        return np.asarray(x_m, dtype=float) / UNITS[self.input_unit]

    def __call__(self, x):
        return eval_model(self, x)


def eval_model(spec, x):
    """Evaluate ``spec`` at geometry ``x`` given in meters.

    Combiner specs take a ``(u, v)`` pair instead. Raises OutOfDomain
    outside the family's domain.
    """
    if spec.family.n_inputs == 2:
        return spec.family(x, spec.theta)
    return spec.family(float(x) / UNITS[spec.input_unit], spec.theta)


def jacobian(spec, x):
    """Partials of ``spec`` with respect to its coefficients at ``x`` (meters)."""
    if spec.family.n_inputs == 2:
        return spec.family.jacobian(np.asarray(x, dtype=float).reshape(1, 2), spec.theta)[0]
    return spec.family.jacobian(spec.scale(x), spec.theta)[0]


@dataclass(frozen=True)
class DeviceModels:
    vth_w: ModelSpec
    vth_l: ModelSpec
    vth_combo: ModelSpec
    ucox_w: ModelSpec
    ucox_l: ModelSpec
    ucox_combo: ModelSpec
    ro: ModelSpec


@dataclass(frozen=True)
class CoefficientBundle:
    nmos: DeviceModels
    pmos: DeviceModels
    tech: str = "0.18um"
    vgs: float = 0.5
    vds: float = 0.6
    vsb: float = 0.0
    note: str = ""

    def device(self, kind):
        return getattr(self, DeviceKind.parse(kind).value)

    def with_spec(self, kind, name, spec):
        """Copy of the bundle with one model spec replaced."""
        kind = DeviceKind.parse(kind).value
        models = replace(getattr(self, kind), **{name: spec})
        return replace(self, **{kind: models})


def _check_geometry(name, value):
    if not (GEOM_MIN * (1 - 1e-12) <= value <= GEOM_MAX * (1 + 1e-12)):
        raise OutOfDomain(
            f"{name} = {value:.6g} m is outside the fitted range "
            f"[{GEOM_MIN:.3g}, {GEOM_MAX:.3g}] m"
        )


def vth_parts(bundle, kind, w, l):
    """The two single-variable threshold fits, before combination."""
    _check_geometry("W", w)
    _check_geometry("L", l)
    dev = bundle.device(kind)
    return eval_model(dev.vth_w, w), eval_model(dev.vth_l, l)


def ucox_parts(bundle, kind, w, l):
    _check_geometry("W", w)
    _check_geometry("L", l)
    dev = bundle.device(kind)
    return eval_model(dev.ucox_w, w), eval_model(dev.ucox_l, l)


def eval_vth(bundle, kind, w, l):
    """Threshold voltage in volts; negative for PMOS."""
    return eval_model(bundle.device(kind).vth_combo, vth_parts(bundle, kind, w, l))


def eval_ucox(bundle, kind, w, l):
    """Mobility-oxide capacitance product in A/V^2."""
    return eval_model(bundle.device(kind).ucox_combo, ucox_parts(bundle, kind, w, l))


def eval_ro(bundle, kind, l):
    """Output resistance in ohms at the 1 uA training current."""
    _check_geometry("L", l)
    return eval_model(bundle.device(kind).ro, l)
