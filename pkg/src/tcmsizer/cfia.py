"""Current-feedback instrumentation amplifier: gain, constraints, sizing flow."""

import csv
from dataclasses import dataclass, field, fields
from pathlib import Path

from .errors import ParseError, SchemaError, SingularDenominator, SizerError
from .kinds import DeviceKind
from .numeric import pearson
from .sizing import SizingRequest, predict_width
from .textfmt import parse_sections


def parallel(*rs):
    return 1.0 / sum(1.0 / r for r in rs)


def rg_current(v1, v2, rg):
    """Current through the gain-setting resistor between the two buffers."""
    if not rg > 0:
        raise ValueError("rg must be positive")
    return (v1 - v2) / rg


@dataclass(frozen=True)
class SmallSignalParams:
    gm1: float
    gm2: float
    gmb1: float
    ro1: float
    ro2: float
    rout1: float
    rout2: float
    rout3: float
    r1: float
    r2: float
    # Output resistance of the M5 current source; R_out1 stands in when unset.
    ro5: float = None

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if v is not None and v < 0:
                raise ValueError(f"{f.name} must be non-negative")


def alpha(p):
    """R_out2 in parallel with r_o1."""
    return p.rout2 * p.ro1 / (p.rout2 + p.ro1)


def beta_factor(p):
    """The composite node conductance, term by term as published.

    Note the 1/R1 term: :func:`gain_full` uses the half-circuit value 2/R1
    instead, which is what the KCL at the feedback node actually gives.
    """
    a = alpha(p)
    return (1.0 / p.r1 + a / p.rout2 * (p.gm1 + 1.0 / p.ro1) + a * p.gm1 * p.gm2
            + a * p.gm2 / p.ro1 + 1.0 / p.ro2 + 1.0 / p.rout1)


def gain_full(p):
    """Closed-loop small-signal gain of the half circuit.

    Eliminates V_G2, i1 and i3 in favour of V_D2, then closes the output
    node through Z = R_out3 || R2/2. The V_D2 elimination is arranged so the
    large loop-gain terms cancel symbolically rather than in floating point.
    """
    a = alpha(p)
    z = parallel(p.rout3, p.r2 / 2.0) if p.r2 > 0 else 0.0
    k1 = a / p.rout2
    loop = a * p.gm1 * p.gm2
    # Conductance to ground at D2 other than through M1 and M2.
    g_node = 2.0 / p.r1 + 1.0 / p.rout1
    g_out = p.gm2 + 1.0 / p.ro2
    # i2 = (c_d2 * V_D2 - loop * V_in) / (1 + g_out * Z)
    c_d2 = a * p.gm2 * (p.gm1 + 1.0 / p.ro1) + 1.0 / p.ro2
    num = z * (k1 * p.gm1 / p.ro2 - loop * g_node)
    den = (1.0 + g_out * z) * (k1 * (p.gm1 + 1.0 / p.ro1) + g_node) + c_d2
    if den == 0 or abs(den) < 1e-300:
        raise SingularDenominator("gain denominator vanishes")
    return num / den


def gain_simplified(r1, r2):
    if not r1 > 0:
        raise ValueError("r1 must be positive")
    return -r2 / r1


def rout4(p):
    """Resistance looking into the source of M1."""
    return parallel(1.0 / p.gm1, 1.0 / p.gmb1, p.ro1) * (1.0 + p.rout2 / p.ro1)


@dataclass(frozen=True)
class ConstraintFinding:
    name: str
    lhs: float
    rhs: float
    satisfied: bool


def check_constraints(p, ratio=10.0):
    """Evaluate every 'much greater than' condition as lhs >= ratio * rhs."""
    if not ratio > 1:
        raise ValueError("ratio must exceed 1")
    ro5 = p.rout1 if p.ro5 is None else p.ro5
    rows = [
        ("R_out3 >> R2", p.rout3, p.r2),
        ("r_o1 >> R_out2", p.ro1, p.rout2),
        ("r_o2 >> R_out2", p.ro2, p.rout2),
        ("r_o7 (R_out3) >> R2", p.rout3, p.r2),
        ("r_o6 (R_out2) >> 1/g_m1", p.rout2, 1.0 / p.gm1 if p.gm1 > 0 else float("inf")),
        ("r_o1 >> r_o5", p.ro1, ro5),
        ("r_o2 >> r_o5", p.ro2, ro5),
    ]
    return [ConstraintFinding(n, lhs, rhs, lhs >= ratio * rhs) for n, lhs, rhs in rows]


# Design plans


@dataclass(frozen=True)
class TransistorPlan:
    name: str
    kind: DeviceKind
    target_id: float
    v_gs: float
    v_ds: float
    l: float


@dataclass(frozen=True)
class DesignPlan:
    transistors: tuple = ()
    vdd: float = 1.8
    r1: float = 10e3
    r2: float = 100e3
    branch_currents: tuple = ()
    # field name -> number, or (quantity, transistor) with quantity gm/ro
    small_signal: dict = None

    def __post_init__(self):
        names = [t.name for t in self.transistors]
        if len(set(names)) != len(names):
            raise ValueError("transistor names must be unique")
        if any(not i > 0 for i in self.branch_currents):
            raise ValueError("branch currents must be positive")


_SS_FIELDS = [f.name for f in fields(SmallSignalParams)]


def _small_signal_value(text, line, name):
    text = text.strip()
    if ":" in text:
        qty, _, ref = text.partition(":")
        if qty not in ("gm", "ro"):
            raise ParseError(f"reference must be gm:<name> or ro:<name>, got {text!r}",
                             line=line, field=f"smallsignal.{name}")
        return qty, ref.strip()
    try:
        return float(text)
    except ValueError:
        raise ParseError(f"not a number or reference: {text!r}", line=line,
                         field=f"smallsignal.{name}") from None


def parse_plan(text):
    sections = parse_sections(text)
    transistors = []
    for name, sec in sections.items():
        if name.startswith("transistor."):
            try:
                kind = DeviceKind.parse(sec.require("kind"))
            except ValueError as exc:
                raise ParseError(str(exc), line=sec.lines.get("kind"), field=f"{name}.kind") from None
            t = TransistorPlan(name.split(".", 1)[1], kind, sec.number("id_a"),
                               sec.number("vgs_v"), sec.number("vds_v"), sec.number("l_m"))
            if not (t.target_id > 0 and t.l > 0):
                raise ParseError("id_a and l_m must be positive", line=sec.line, field=name)
            transistors.append(t)
        elif name not in ("supply", "feedback", "smallsignal"):
            raise ParseError(f"unknown section [{name}]", line=sec.line)
    if "supply" not in sections:
        raise SchemaError("plan lacks a [supply] section", field="supply")
    if "feedback" not in sections:
        raise SchemaError("plan lacks a [feedback] section", field="feedback")
    supply, fb = sections["supply"], sections["feedback"]
    currents = supply.numbers("branch_currents_a") if supply.get("branch_currents_a") else []
    small = None
    if "smallsignal" in sections:
        ss = sections["smallsignal"]
        small = {}
        for key, value in ss.fields.items():
            if key not in _SS_FIELDS:
                raise ParseError(f"unknown small-signal field {key!r}", line=ss.lines[key])
            small[key] = _small_signal_value(value, ss.lines[key], key)
    try:
        return DesignPlan(tuple(transistors), supply.number("vdd_v"), fb.number("r1_ohm"),
                          fb.number("r2_ohm"), tuple(currents), small)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def load_plan(path):
    return parse_plan(Path(path).read_text(encoding="utf-8"))


# Sizing flow


@dataclass(frozen=True)
class TransistorDesign:
    plan: TransistorPlan
    result: object = None
    error: str = None

    @property
    def gm(self):
        """Square-law transconductance estimate 2 I_A / V_ov."""
        r = self.result
        v_ov = abs(self.plan.v_gs) - abs(r.vth)
        return 2.0 * r.split.i_a / v_ov


@dataclass(frozen=True)
class ErrorRow:
    name: str
    expected: float
    actual: float
    error_pct: float


@dataclass(frozen=True)
class ErrorReport:
    v_ds: tuple
    i_p: tuple
    i_a: tuple
    correlations: dict


@dataclass(frozen=True)
class DesignReport:
    designs: tuple
    power: float
    gain_simplified: float
    gain_full: float = None
    small_signal: SmallSignalParams = None
    constraints: tuple = ()
    errors: ErrorReport = None
    notes: tuple = field(default=())

    @property
    def failed(self):
        return [d for d in self.designs if d.error is not None]


def power(vdd, currents):
    return vdd * sum(currents)


def _resolve_small_signal(spec, plan, designs):
    by_name = {d.plan.name: d for d in designs}
    values = {}
    for key, v in spec.items():
        if isinstance(v, tuple):
            qty, ref = v
            d = by_name.get(ref)
            if d is None or d.result is None:
                raise SchemaError(f"small-signal {key} refers to unsized transistor {ref!r}",
                                  field=f"smallsignal.{key}")
            v = d.gm if qty == "gm" else d.result.ro
        values[key] = v
    values.setdefault("r1", plan.r1)
    values.setdefault("r2", plan.r2)
    missing = [f for f in _SS_FIELDS if f not in values and f != "ro5"]
    if missing:
        raise SchemaError(f"small-signal parameters missing: {', '.join(missing)}",
                          field="smallsignal")
    return SmallSignalParams(**values)


def size_cfia(bundle, plan, measured=None, ratio=10.0):
    """Size every planned transistor and assemble the amplifier report."""
    designs = []
    for t in plan.transistors:
        req = SizingRequest(t.kind, t.target_id, abs(t.v_gs), abs(t.v_ds), t.l)
        try:
            designs.append(TransistorDesign(t, predict_width(bundle, req)))
        except SizerError as exc:
            designs.append(TransistorDesign(t, error=f"{t.name}: {type(exc).__name__}: {exc}"))
    designs = tuple(designs)

    notes = []
    gain, params, findings = None, None, ()
    if plan.small_signal is not None:
        try:
            params = _resolve_small_signal(plan.small_signal, plan, designs)
            gain = gain_full(params)
            findings = tuple(check_constraints(params, ratio))
            notes.append("full gain uses g_m = 2 I_A / V_ov from the sizing results")
        except SizerError as exc:
            notes.append(f"full gain unavailable: {exc}")

    errors = None
    if measured is not None:
        errors = error_report(
            measured["expected"], measured["actual"],
            lengths={t.name: t.l for t in plan.transistors},
            currents={t.name: t.target_id for t in plan.transistors},
        )
    return DesignReport(designs, power(plan.vdd, plan.branch_currents),
                        gain_simplified(plan.r1, plan.r2), gain, params, findings,
                        errors, tuple(notes))


def percent_error(expected, actual):
    return 100.0 * abs(expected - actual) / abs(expected)


def error_report(expected, actual, lengths=None, currents=None):
    """Expected-vs-actual error table with correlations against the V_DS error.

    ``expected`` and ``actual`` map transistor name to ``{"v_ds", "i_p",
    "i_a"}``. Correlations are keyed by the series compared with the V_DS
    error: ``"err_i_p"``, ``"err_i_a"``, and ``"l"`` / ``"i_d"`` when those
    maps are given.
    """
    if set(expected) != set(actual):
        raise ValueError("expected and actual must cover the same transistors")
    names = list(expected)
    table = {}
    for q in ("v_ds", "i_p", "i_a"):
        table[q] = tuple(
            ErrorRow(n, expected[n][q], actual[n][q], percent_error(expected[n][q], actual[n][q]))
            for n in names
        )
    err_vds = [row.error_pct for row in table["v_ds"]]
    corr = {
        "err_i_p": pearson([row.error_pct for row in table["i_p"]], err_vds),
        "err_i_a": pearson([row.error_pct for row in table["i_a"]], err_vds),
    }
    if lengths is not None:
        corr["l"] = pearson([lengths[n] for n in names], err_vds)
    if currents is not None:
        corr["i_d"] = pearson([currents[n] for n in names], err_vds)
    return ErrorReport(table["v_ds"], table["i_p"], table["i_a"], corr)


MEASURED_COLUMNS = ("name", "expected_vds_v", "actual_vds_v", "expected_ip_a",
                    "actual_ip_a", "expected_ia_a", "actual_ia_a")


def load_measured(path):
    """Read a measured-values CSV into the ``expected``/``actual`` maps."""
    path = Path(path)
    lines = [ln for ln in path.read_text(encoding="utf-8").splitlines()
             if ln.strip() and not ln.lstrip().startswith("#")]
    reader = csv.DictReader(lines)
    missing = [c for c in MEASURED_COLUMNS if c not in (reader.fieldnames or [])]
    if missing:
        raise ParseError(f"{path}: header lacks {', '.join(missing)}", line=1)
    expected, actual = {}, {}
    for n, rec in enumerate(reader, start=2):
        try:
            vals = {c: float(rec[c]) for c in MEASURED_COLUMNS[1:]}
        except (TypeError, ValueError):
            raise ParseError(f"{path}: bad number", line=n) from None
        name = rec["name"].strip()
        expected[name] = {"v_ds": vals["expected_vds_v"], "i_p": vals["expected_ip_a"],
                          "i_a": vals["expected_ia_a"]}
        actual[name] = {"v_ds": vals["actual_vds_v"], "i_p": vals["actual_ip_a"],
                        "i_a": vals["actual_ia_a"]}
    return {"expected": expected, "actual": actual}
