"""Reading and writing coefficient bundle files."""

from pathlib import Path

from ..errors import ParseError, SchemaError
from ..kinds import DeviceKind
from ..textfmt import fmt_float, parse_sections, render_sections
from .bundle import MODEL_NAMES, UNITS, CoefficientBundle, DeviceModels, ModelSpec
from .families import FAMILIES

_META_KEYS = ("tech", "vgs", "vds", "vsb", "note")
_SPEC_KEYS = ("family", "input_unit", "theta", "note")


def _spec_from_section(sec):
    for key in sec.fields:
        if key not in _SPEC_KEYS:
            raise ParseError(f"unknown field {key!r}", line=sec.lines[key], field=f"{sec.name}.{key}")
    code = sec.require("family", SchemaError)
    if code not in FAMILIES:
        raise ParseError(f"unknown family {code!r}", line=sec.lines["family"], field=f"{sec.name}.family")
    unit = sec.require("input_unit", SchemaError)
    if unit not in UNITS:
        raise ParseError(f"input_unit must be um or m, got {unit!r}",
                         line=sec.lines["input_unit"], field=f"{sec.name}.input_unit")
    theta = sec.numbers("theta")
    family = FAMILIES[code]
    if len(theta) != family.n_params:
        raise ParseError(f"{code} takes {family.n_params} coefficients, got {len(theta)}",
                         line=sec.lines["theta"], field=f"{sec.name}.theta")
    try:
        return ModelSpec(family, theta, unit, sec.get("note", ""))
    except ValueError as exc:
        raise ParseError(str(exc), line=sec.line, field=sec.name) from None


def parse_bundle(text):
    sections = parse_sections(text)
    allowed = {"meta"} | {f"{k.value}.{m}" for k in DeviceKind for m in MODEL_NAMES}
    for name, sec in sections.items():
        if name not in allowed:
            raise ParseError(f"unknown section [{name}]", line=sec.line)
    if "meta" not in sections:
        raise SchemaError("missing [meta] section", field="meta")
    meta = sections["meta"]
    for key in meta.fields:
        if key not in _META_KEYS:
            raise ParseError(f"unknown field {key!r}", line=meta.lines[key], field=f"meta.{key}")

    devices = {}
    for kind in DeviceKind:
        specs = {}
        for model in MODEL_NAMES:
            name = f"{kind.value}.{model}"
            if name not in sections:
                raise SchemaError(f"missing model section [{name}]", field=name)
            specs[model] = _spec_from_section(sections[name])
        devices[kind.value] = DeviceModels(**specs)

    return CoefficientBundle(
        nmos=devices["nmos"],
        pmos=devices["pmos"],
        tech=meta.require("tech", SchemaError),
        vgs=meta.number("vgs"),
        vds=meta.number("vds"),
        vsb=meta.number("vsb"),
        note=meta.get("note", ""),
    )


def format_bundle(bundle):
    meta = [("tech", bundle.tech), ("vgs", fmt_float(bundle.vgs)),
            ("vds", fmt_float(bundle.vds)), ("vsb", fmt_float(bundle.vsb))]
    if bundle.note:
        meta.append(("note", bundle.note))
    sections = [("meta", meta)]
    for kind in DeviceKind:
        dev = bundle.device(kind)
        for model in MODEL_NAMES:
            spec = getattr(dev, model)
            items = [
                ("family", spec.family.code),
                ("input_unit", spec.input_unit),
                ("theta", ",".join(fmt_float(t) for t in spec.theta)),
            ]
            if spec.note:
                items.append(("note", spec.note))
            sections.append((f"{kind.value}.{model}", items))
    return render_sections(sections)


def load_bundle(path):
    return parse_bundle(Path(path).read_text(encoding="utf-8"))


def save_bundle(bundle, path):
    Path(path).write_text(format_bundle(bundle), encoding="utf-8")
