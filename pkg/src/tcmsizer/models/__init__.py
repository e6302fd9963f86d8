from .bundle import (
    GEOM_MAX,
    GEOM_MIN,
    MODEL_NAMES,
    CoefficientBundle,
    DeviceModels,
    ModelSpec,
    eval_model,
    eval_ro,
    eval_ucox,
    eval_vth,
    jacobian,
    ucox_parts,
    vth_parts,
)
from .calibrate import AnchorPoint, CalibrationResult, calibrate_combo
from .families import FAMILIES, ModelFamily, get_family
from .io import format_bundle, load_bundle, parse_bundle, save_bundle
from .reference import build_reference_bundle, default_bundle

__all__ = [
    "AnchorPoint",
    "build_reference_bundle",
    "calibrate_combo",
    "CalibrationResult",
    "CoefficientBundle",
    "default_bundle",
    "DeviceModels",
    "eval_model",
    "eval_ro",
    "eval_ucox",
    "eval_vth",
    "FAMILIES",
    "format_bundle",
    "GEOM_MAX",
    "GEOM_MIN",
    "get_family",
    "jacobian",
    "load_bundle",
    "MODEL_NAMES",
    "ModelFamily",
    "ModelSpec",
    "parse_bundle",
    "save_bundle",
    "ucox_parts",
    "vth_parts",
]
