"""The 0.18 um coefficient set, rebuilt from the published fits.

A handful of published coefficients are unusable as printed (wrong sign,
wrong power of ten). The repaired values are set here and each one carries
a note that ends up in the bundle file. The PMOS mobility combiner is
re-solved against two sized devices with known mobility.
"""

from importlib import resources

from ..kinds import DeviceKind
from .bundle import CoefficientBundle, DeviceModels, ModelSpec
from .calibrate import AnchorPoint, calibrate_combo
from .io import format_bundle, parse_bundle

BUNDLE_FILENAME = "paper-0p18um.mdl"

PMOS_UCOX_ANCHORS = (
    AnchorPoint(73.2e-6, 40e-6, 84e-6),
    AnchorPoint(119.2e-6, 25e-6, 86.9e-6),
)
PMOS_UCOX_BETA0 = 26.07e-6
PMOS_UCOX_PUBLISHED = (26.07e-6, 0.6815, 0.6684)


def _nmos():
    return DeviceModels(
        vth_w=ModelSpec("F1", (0.10471, 0.14941, 2.0794, 0.14273, -0.01878), "um"),
        vth_l=ModelSpec("F2", (0.42488, 0.27216, 0.28097, 0.20575), "um"),
        vth_combo=ModelSpec("F6", (-0.38164, 0.9422, 0.98848), "m"),
        ucox_w=ModelSpec(
            "F3", (388.11e-6, 428.19e-6, 0.988351, 273.7e-6, 0.21960), "um",
            note="repaired: leading term sign made positive (printed negative gives "
                 "negative mobility everywhere); exponential rate 988351 read as "
                 "0.988351 per um",
        ),
        ucox_l=ModelSpec(
            "F4", (333.19e-6, 185e-6, 404.08), "um",
            note="unresolved: rate 404.08 taken per um, so the exponential term "
                 "vanishes over the fitted range and the model is ~333.19e-6 constant",
        ),
        ucox_combo=ModelSpec(
            "F6", (101.06e-6, 0.2044, 0.41887), "m",
            note="repaired: third coefficient read as dimensionless 0.41887 "
                 "(printed with a spurious 1e-6 factor)",
        ),
        ro=ModelSpec("F7", (8.64e6, 1.4014e12), "m"),
    )


def _pmos_printed():
    return DeviceModels(
        vth_w=ModelSpec(
            "F5", (-414.01e-3, -35.91e-3), "um",
            note="repaired: scale read as -414.01e-3 V (printed e3) and the "
                 "denominator as (W - 35.91e-3), matching vth_l; both coefficients "
                 "negative so the threshold is negative",
        ),
        vth_l=ModelSpec(
            "F5", (-396.94e-3, -14.34e-3), "um",
            note="repaired: scale read as -396.94e-3 V (printed 1e3)",
        ),
        vth_combo=ModelSpec("F6", (1.445, 1.79, 2.81), "m"),
        ucox_w=ModelSpec(
            "F8", (89.038e-6, 19.262e-6, 0.34468, 0.09278e-6), "um",
            note="repaired: linear coefficient read as 0.09278e-6 per um",
        ),
        ucox_l=ModelSpec("F4", (68.21e-6, 9.469e-6, 0.50698), "um"),
        ucox_combo=ModelSpec("F6", PMOS_UCOX_PUBLISHED, "m"),
        ro=ModelSpec("F7", (55.9e6, 6.712e12), "m"),
    )


def build_reference_bundle():
    """Construct the shipped bundle from scratch (used to generate the file)."""
    bundle = CoefficientBundle(
        nmos=_nmos(),
        pmos=_pmos_printed(),
        tech="0.18um",
        vgs=0.5,
        vds=0.6,
        vsb=0.0,
        note="fits taken at W = L = 1 um general values; r_o fits at 1 uA drain current",
    )
    cal = calibrate_combo(
        bundle, DeviceKind.PMOS, "ucox", PMOS_UCOX_ANCHORS, fixed_beta0=PMOS_UCOX_BETA0,
        note="recalibrated: beta1, beta2 re-solved against (73.2 um, 40 um) -> 84e-6 "
             "and (119.2 um, 25 um) -> 86.9e-6 with beta0 fixed; published "
             "(0.6815, 0.6684) give ~137e-6",
    )
    return bundle.with_spec(DeviceKind.PMOS, "ucox_combo", cal.spec)


def reference_bundle_text():
    return resources.files("tcmsizer.data").joinpath(BUNDLE_FILENAME).read_text(encoding="utf-8")


def default_bundle():
    """The shipped 0.18 um bundle, loaded from package data."""
    return parse_bundle(reference_bundle_text())


def regenerate_text():
    return format_bundle(build_reference_bundle())
