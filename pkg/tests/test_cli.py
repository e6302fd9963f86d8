import io
from pathlib import Path

import numpy as np
import pytest

from tcmsizer.cli import main
from tcmsizer.device import CSV_COLUMNS, parse_characterization
from tcmsizer.models import FAMILIES
from tcmsizer.models.refit import refit_model

ROOT = Path(__file__).parents[1]
PLAN = str(ROOT / "plans" / "paper-cfia.plan")
MEASURED = str(ROOT / "plans" / "paper-cfia-measured.csv")
M5 = ["--device", "nmos", "--id", "0.6e-6", "--vgs", "0.5", "--vds", "0.6", "--l", "4e-6"]


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def fields(text):
    return dict(line.split(" = ", 1) for line in text.splitlines() if " = " in line)


def number(text):
    return float(text.split()[0])


def test_eval_threshold():
    code, out, _ = run("eval", "--device", "nmos", "--quantity", "vth", "--w", "0.65e-6", "--l", "4e-6")
    assert code == 0
    assert number(fields(out)["vth"]) == pytest.approx(0.350, abs=1e-3)


def test_eval_output_resistance():
    code, out, _ = run("eval", "--device", "pmos", "--quantity", "ro", "--l", "40e-6")
    assert code == 0 and out.endswith("ohm\n")
    assert number(fields(out)["ro"]) == pytest.approx(3.244e8, rel=0.01)


def test_eval_negative_width_is_usage_error():
    assert run("eval", "--device", "nmos", "--quantity", "vth", "--w", "-1", "--l", "4e-6")[0] == 2


def test_eval_out_of_domain():
    code, out, err = run("eval", "--device", "nmos", "--quantity", "vth", "--w", "1e-3", "--l", "4e-6")
    assert code == 4 and out == "" and "error" in err


def test_size_pinned():
    code, out, _ = run("size", *M5, "--pin-ucox", "324e-6", "--pin-vth", "0.350")
    assert code == 0
    assert number(fields(out)["w"]) == pytest.approx(6.24e-7, rel=0.01)
    assert fields(out)["region"] == "saturation"


def test_size_full_bundle_m7():
    code, out, _ = run("size", "--device", "nmos", "--id", "1e-6", "--vgs", "0.5", "--vds", "0.6",
                       "--l", "80e-6")
    assert code == 0
    assert number(fields(out)["w"]) == pytest.approx(2.26e-5, rel=0.10)


def test_size_unreachable():
    assert run("size", "--device", "nmos", "--id", "1", "--vgs", "0.5", "--vds", "0.6", "--l", "4e-6")[0] == 5


def test_sweep_agrees_with_size():
    code, out, _ = run("--precision", "12", "sweep", *M5, "--w-min", "0.2e-6", "--w-max", "5e-6",
                       "--steps", "1000")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "w_m,id_a" and len(lines) == 1002
    best = float(lines[-1].split(",")[1])
    _, size_out, _ = run("--precision", "12", "size", *M5)
    step = (5e-6 - 0.2e-6) / 999
    assert abs(best - number(fields(size_out)["w"])) <= step


def test_sweep_two_steps_and_bad_range():
    code, out, _ = run("sweep", *M5, "--w-min", "0.3e-6", "--w-max", "5e-6", "--steps", "2")
    assert code == 0 and len(out.splitlines()) == 4
    assert run("sweep", *M5, "--w-min", "5e-6", "--w-max", "1e-6")[0] == 2
    assert run("sweep", *M5, "--w-min", "1e-6", "--w-max", "5e-6", "--steps", "1")[0] == 2


def cfia_widths(out):
    rows = [line.split(",") for line in out.splitlines() if line.startswith("M")]
    return {r[0]: float(r[2]) for r in rows}


def test_cfia_reference_plan():
    code, out, err = run("cfia", "--plan", PLAN)
    assert code == 0, err
    assert number(fields(out)["power"]) == 5.76e-6
    assert "power = 5.760000e-06 W" in out
    ws = cfia_widths(out)
    for name, ref in {"M1": 73.2e-6, "M5": 0.650e-6, "M6": 119.2e-6, "M7": 22.6e-6}.items():
        assert ws[name] == pytest.approx(ref, rel=0.10)


def test_cfia_with_measurements():
    code, out, _ = run("--precision", "3", "cfia", "--plan", PLAN, "--measured", MEASURED)
    assert code == 0
    line = next(x for x in out.splitlines() if x.startswith("correlation,i_d"))
    parts = dict(p.split("=", 1) for p in line.split(",")[2:] if "=" in p)
    assert float(parts["r"]) == pytest.approx(-0.954, abs=0.005)
    assert float(parts["p"]) == pytest.approx(0.046, abs=0.002)


def test_cfia_missing_plan(tmp_path):
    assert run("cfia", "--plan", str(tmp_path / "nope.plan"))[0] == 2


def test_cfia_failure_exit(tmp_path):
    bad = tmp_path / "bad.plan"
    bad.write_text(Path(PLAN).read_text().replace("id_a=1e-6", "id_a=1"))
    code, out, err = run("cfia", "--plan", str(bad))
    assert code == 5 and "M7,nmos,failed" in out and "M7" in err


def test_stats_pearson():
    code, out, _ = run("--precision", "3", "stats", "pearson", "--x", "0.6,0.6,1.6,1", "--y", "80,84,0.3,73")
    assert code == 0
    r, p, lo, hi = (float(t.strip("(),")) for t in out.split())
    assert (r, p) == pytest.approx((-0.954, 0.046), abs=0.001)
    assert (lo, hi) == pytest.approx((-0.999, 0.0894), abs=0.001)


def test_stats_identity_and_errors():
    code, out, _ = run("stats", "pearson", "--x", "1,2,3,5", "--y", "1,2,3,5")
    assert code == 0 and out.startswith("1.000000e+00")
    assert run("stats", "pearson", "--x", "1,1,1", "--y", "1,2,3")[0] == 4
    assert run("stats", "pearson", "--x", "1,2,3", "--y", "1,2")[0] == 2


def test_characterize_grid_shape():
    code, out, _ = run("characterize", "--device", "nmos", "--w-grid", "geom:1e-6:100e-6:10",
                       "--l-grid", "geom:1e-6:80e-6:10")
    lines = out.splitlines()
    assert code == 0 and lines[0] == ",".join(CSV_COLUMNS) and len(lines) == 101


def test_characterize_empty_grid():
    code, out, _ = run("characterize", "--device", "pmos", "--w-grid", "", "--l-grid", "1e-6")
    assert code == 0 and out == ",".join(CSV_COLUMNS) + "\n"


def test_characterize_out_of_domain():
    assert run("characterize", "--device", "nmos", "--w-grid", "1e-3", "--l-grid", "4e-6")[0] == 4


def test_characterize_refit_round_trip(bundle):
    _, out, _ = run("characterize", "--device", "nmos", "--w-grid", "geom:0.5e-6:150e-6:12",
                    "--l-grid", "geom:1e-6:100e-6:6")
    rows = parse_characterization(out)
    truth = np.array(bundle.nmos.vth_w.theta)
    fit = refit_model(rows, bundle, "nmos", "vth_w", theta0=truth * 1.01)
    np.testing.assert_allclose(fit.theta, truth, rtol=1e-4)


def write_xy(path, xs, ys):
    path.write_text("x,y\n" + "".join(f"{float(x)!r},{float(y)!r}\n" for x, y in zip(xs, ys)))


def test_fit_round_trip(tmp_path):
    theta = np.array([68.21e-6, 9.469e-6, 0.50698])
    xs = np.linspace(0.5, 20, 200)
    data = tmp_path / "f4.csv"
    write_xy(data, xs, FAMILIES["F4"].value(xs, theta))
    init = ",".join(repr(float(t)) for t in theta * 1.2)
    code, out, _ = run("fit", "--family", "F4", "--data", str(data), "--init", init)
    assert code == 0
    got = np.array([float(t) for t in fields(out)["theta"].split(",")])
    np.testing.assert_allclose(got, theta, rtol=1e-4)
    assert fields(out)["converged"] == "true"


def test_fit_usage_errors(tmp_path):
    data = tmp_path / "d.csv"
    write_xy(data, [1.0, 2.0, 3.0, 4.0], [1.0, 2.0, 3.0, 4.0])
    code, _, err = run("fit", "--family", "F4", "--data", str(data), "--init", "1,2")
    assert code == 2 and "3" in err
    assert run("fit", "--family", "F7", "--data", str(data), "--init", "0,1", "--max-iter", "0")[0] == 2
    assert run("fit", "--family", "F99", "--data", str(data), "--init", "0,1")[0] == 2
    assert run("fit", "--family", "F7", "--data", str(tmp_path / "none.csv"), "--init", "0,1")[0] == 2


def test_fit_iteration_cap_exit(tmp_path):
    data = tmp_path / "d.csv"
    xs = np.linspace(0.5, 20, 50)
    write_xy(data, xs, FAMILIES["F4"].value(xs, [1.0, 2.0, 0.5]))
    code, out, _ = run("fit", "--family", "F4", "--data", str(data), "--init", "3,0.5,2", "--max-iter", "1")
    assert code == 3 and fields(out)["converged"] == "false"


def test_unknown_flag_and_csv_format():
    assert run("eval", "--device", "nmos", "--quantity", "ro", "--l", "4e-6", "--bogus")[0] == 2
    code, out, _ = run("--format", "csv", "eval", "--device", "nmos", "--quantity", "ro", "--l", "4e-6")
    assert code == 0 and out.startswith("ro,1.4")


def test_missing_bundle_file(tmp_path):
    assert run("--bundle", str(tmp_path / "x.mdl"), "eval", "--device", "nmos", "--quantity", "ro",
               "--l", "4e-6")[0] == 2


@pytest.mark.parametrize("argv", [
    ["size", *M5], ["cfia", "--plan", PLAN, "--measured", MEASURED],
    ["sweep", *M5, "--w-min", "0.2e-6", "--w-max", "5e-6", "--steps", "50"],
])
def test_byte_identical_output(argv):
    assert run(*argv) == run(*argv)
