"""Square-law saturation model split into active and passive currents.

PMOS quantities are handled as magnitudes throughout; only the threshold
returned by the bundle keeps its sign.
"""

import csv
import enum
import io
from dataclasses import dataclass
from pathlib import Path

from .errors import DegenerateDenominator, NotSaturated, ParseError, UnitError
from .kinds import DeviceKind
from .models import eval_ro, eval_ucox, eval_vth
from .textfmt import fmt_float


class Region(str, enum.Enum):
    SATURATION = "saturation"
    LINEAR = "linear"
    CUTOFF = "cutoff"


@dataclass(frozen=True)
class OperatingPoint:
    i_d: float
    v_gs: float
    v_ds: float
    v_sb: float = 0.0

    def __post_init__(self):
        if self.i_d < 0:
            raise ValueError("drain current magnitude must be non-negative")


@dataclass(frozen=True)
class Geometry:
    w: float
    l: float

    def __post_init__(self):
        if not (self.w > 0 and self.l > 0):
            raise ValueError(f"geometry must be positive, got W={self.w!r}, L={self.l!r}")

    @property
    def aspect(self):
        return self.w / self.l


@dataclass(frozen=True)
class CurrentSplit:
    i_a: float
    i_p: float
    i_d: float

    def __post_init__(self):
        if self.i_d != self.i_a + self.i_p:
            raise ValueError("i_d must equal i_a + i_p exactly")

    @classmethod
    def of(cls, i_a, i_p):
        return cls(i_a, i_p, i_a + i_p)


def overdrive(kind, v_gs, v_th):
    return abs(v_gs) - abs(v_th)


def active_current(ucox, geom, v_ov):
    if not v_ov > 0:
        raise NotSaturated(f"overdrive {v_ov:.6g} V is not positive")
    return 0.5 * ucox * geom.aspect * v_ov**2


def passive_current(v_ds, v_ov, r_o):
    """May come out negative below the saturation boundary."""
    if not r_o > 0:
        raise ValueError("r_o must be positive")
    return (abs(v_ds) - v_ov) / r_o


def drain_current(i_a, i_p):
    return CurrentSplit.of(i_a, i_p)


def saturation_check(kind, v_gs, v_ds, v_th):
    v_ov = abs(v_gs) - abs(v_th)
    if v_ov <= 0:
        return Region.CUTOFF
    if abs(v_ds) > v_ov:
        return Region.SATURATION
    return Region.LINEAR


@dataclass(frozen=True)
class ExtractionInput:
    i_d: float
    w: float
    l: float
    v_gs: float
    v_th: float
    v_ds: float
    lam: float = 0.0

    @classmethod
    def from_ro(cls, i_d, w, l, v_gs, v_th, v_ds, r_o):
        """Channel-length modulation taken as 1/(r_o I_D)."""
        return cls(i_d, w, l, v_gs, v_th, v_ds, 1.0 / (r_o * abs(i_d)))


def extract_ucox(x):
    """Mobility-capacitance product from a measured saturation current."""
    v_ov = abs(x.v_gs) - abs(x.v_th)
    if not v_ov > 0:
        raise NotSaturated(f"overdrive {v_ov:.6g} V is not positive")
    clm = 1.0 + x.lam * abs(x.v_ds)
    if not clm > 0:
        raise DegenerateDenominator(f"1 + lambda*V_DS = {clm:.6g} is not positive")
    return 2.0 * abs(x.i_d) / ((x.w / x.l) * v_ov**2 * clm)


@dataclass(frozen=True)
class DevicePoint:
    """Everything the surrogate computed at one bias and geometry."""

    vth: float
    ucox: float
    ro: float
    v_ov: float
    split: CurrentSplit
    region: Region


def device_point(bundle, kind, geom, v_gs, v_ds):
    vth = eval_vth(bundle, kind, geom.w, geom.l)
    ucox = eval_ucox(bundle, kind, geom.w, geom.l)
    ro = eval_ro(bundle, kind, geom.l)
    region = saturation_check(kind, v_gs, v_ds, vth)
    if region is not Region.SATURATION:
        raise NotSaturated(f"device is in {region.value} at V_GS={v_gs}, V_DS={v_ds}, V_th={vth:.6g}")
    v_ov = overdrive(kind, v_gs, vth)
    split = drain_current(active_current(ucox, geom, v_ov), passive_current(v_ds, v_ov, ro))
    return DevicePoint(vth, ucox, ro, v_ov, split, region)


def surrogate_id(bundle, kind, geom, v_gs, v_ds):
    """Forward model used in place of a circuit simulator."""
    return device_point(bundle, kind, geom, v_gs, v_ds).split


# Characterization CSV

CSV_COLUMNS = ("kind", "w_m", "l_m", "vgs_v", "vds_v", "vsb_v", "id_a", "vth_v", "ro_ohm", "lambda_per_v")
_REQUIRED = CSV_COLUMNS[:-1]


@dataclass(frozen=True)
class CharacterizationRow:
    kind: DeviceKind
    w: float
    l: float
    v_gs: float
    v_ds: float
    v_sb: float
    i_d: float
    v_th: float
    r_o: float
    lam: float = None


def _parse_rows(lines, source):
    data = [(n, line) for n, line in enumerate(lines, start=1)
            if line.strip() and not line.lstrip().startswith("#")]
    if not data:
        raise ParseError(f"{source}: no header")
    header_line, header = data[0]
    cols = [c.strip() for c in header.split(",")]
    unknown = [c for c in cols if c not in CSV_COLUMNS]
    if unknown:
        raise UnitError(f"{source}: unrecognized column(s) {', '.join(unknown)}; values must be SI "
                        f"with the unit suffix of {', '.join(CSV_COLUMNS)}", line=header_line)
    missing = [c for c in _REQUIRED if c not in cols]
    if missing:
        raise ParseError(f"{source}: header lacks {', '.join(missing)}", line=header_line)

    rows = []
    reader = csv.reader(io.StringIO("\n".join(line for _, line in data[1:])))
    for (lineno, _), rec in zip(data[1:], reader):
        if len(rec) != len(cols):
            raise ParseError(f"expected {len(cols)} fields, got {len(rec)}", line=lineno)
        raw = dict(zip(cols, (r.strip() for r in rec)))
        try:
            kind = DeviceKind.parse(raw["kind"])
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno, field="kind") from None
        vals = {}
        for c in CSV_COLUMNS[1:]:
            if c not in raw or (c == "lambda_per_v" and raw[c] == ""):
                continue
            try:
                vals[c] = float(raw[c])
            except ValueError:
                raise ParseError(f"not a number: {raw[c]!r}", line=lineno, field=c) from None
        for c in ("w_m", "l_m", "ro_ohm"):
            if not vals[c] > 0:
                raise ParseError(f"{c} must be positive, got {raw[c]}", line=lineno, field=c)
        rows.append(CharacterizationRow(
            kind, vals["w_m"], vals["l_m"], vals["vgs_v"], vals["vds_v"], vals["vsb_v"],
            vals["id_a"], vals["vth_v"], vals["ro_ohm"], vals.get("lambda_per_v"),
        ))
    return rows


def ingest_characterization(path):
    """Read a characterization CSV; all values are SI."""
    path = Path(path)
    return _parse_rows(path.read_text(encoding="utf-8").splitlines(), str(path))


def parse_characterization(text, source="<string>"):
    return _parse_rows(text.splitlines(), source)


def characterize(bundle, kind, w_grid, l_grid, v_gs=None, v_ds=None):
    """Surrogate characterization rows over a W x L grid (row-major in W).

    PMOS biases are written with their negative sign; currents as magnitudes.
    """
    v_gs = bundle.vgs if v_gs is None else v_gs
    v_ds = bundle.vds if v_ds is None else v_ds
    kind = DeviceKind.parse(kind)
    sign = -1.0 if kind is DeviceKind.PMOS else 1.0
    rows = []
    for w in w_grid:
        for l in l_grid:
            pt = device_point(bundle, kind, Geometry(w, l), v_gs, v_ds)
            lam = 1.0 / (pt.ro * pt.split.i_d)
            rows.append(CharacterizationRow(
                kind, w, l, sign * abs(v_gs), sign * abs(v_ds), bundle.vsb,
                pt.split.i_d, pt.vth, pt.ro, lam,
            ))
    return rows


def format_characterization(rows):
    out = [",".join(CSV_COLUMNS)]
    for r in rows:
        lam = "" if r.lam is None else fmt_float(r.lam)
        out.append(",".join([r.kind.value] + [fmt_float(v) for v in (
            r.w, r.l, r.v_gs, r.v_ds, r.v_sb, r.i_d, r.v_th, r.r_o)] + [lam]))
    return "\n".join(out) + "\n"
