import json

import pytest

from nvlevels import cli, config

# reduced sampling keeps the CLI tests fast; determinism is still exact
FAST_QUAD = {"quadrature": {"log2_points": 13, "scrambles": 4}}


def _write_cfg(tmp_path, extra=None, name="cfg.json"):
    doc = dict(FAST_QUAD)
    if extra:
        doc.update(extra)
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def _run(args):
    return cli.main(args)


def test_levels_outputs(tmp_path):
    out = tmp_path / "out"
    assert _run(["levels", "--out", str(out)]) == 0
    doc = json.loads((out / "levels.json").read_text())
    assert len(doc["states"]) == 15
    assert (out / "levels.png").exists()
    names = {s["name"] for s in doc["states"]}
    assert {"3A2-", "A2", "1A1(e2)", "1Ex"} <= names
    for s in doc["states"]:
        assert len(s["amplitudes"]) == 15
        assert "config_sha256" in doc


def test_levels_degenerate_when_couplings_off(tmp_path):
    cfg = _write_cfg(tmp_path, {"fine_structure": {
        "lambda_z_ghz": 0.0, "lambda_xy_ghz": 0.0, "delta_ghz": 0.0,
        "delta_prime_ghz": 0.0, "delta_dprime_ghz": 0.0}})
    out = tmp_path / "out"
    assert _run(["levels", "--config", cfg, "--out", str(out)]) == 0
    doc = json.loads((out / "levels.json").read_text())
    assert all(s["energy_ghz"] == 0.0 for s in doc["states"])


def test_levels_with_config_offsets_and_tensor(tmp_path):
    cfg = _write_cfg(tmp_path, {
        "config_offsets_ghz": {"e2": 0.0, "ae": 1000.0, "a2": 2000.0},
        "coulomb": {"source": "tensor",
                    "entries": {"xyxy": 10.0, "xxyy": 2.0, "xxxx": 14.0,
                                "yyyy": 14.0}},
        "fine_structure": {"lambda_z_ghz": 0.0, "lambda_xy_ghz": 0.0,
                           "delta_ghz": 0.0, "delta_prime_ghz": 0.0,
                           "delta_dprime_ghz": 0.0}})
    out = tmp_path / "out"
    assert _run(["levels", "--config", cfg, "--out", str(out)]) == 0
    doc = json.loads((out / "levels.json").read_text())
    by_name = {s["name"]: s["energy_ghz"] for s in doc["states"]}
    # singlet ladder above the ground triplet: 0, 2e, 4e with e = 2 GHz
    assert by_name["1E1"] - by_name["3A20"] == pytest.approx(4.0, abs=1e-9)
    assert by_name["1A1(e2)"] - by_name["3A20"] == pytest.approx(8.0, abs=1e-9)
    assert by_name["A2"] > 900.0


def test_selection_rules_output(tmp_path):
    out = tmp_path / "out"
    assert _run(["selection-rules", "--out", str(out), "--no-plot"]) == 0
    doc = json.loads((out / "selection_rules.json").read_text())
    assert len(doc["triplet"]) == 10
    assert len(doc["singlets_e2"]) == 6
    assert len(doc["singlets_a2"]) == 2
    assert len(doc["allowed_transitions"]) == 36
    assert not (out / "selection_rules.png").exists()


def test_strain_scan_columns_and_determinism(tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert _run(["strain-scan", "--out", str(out1)]) == 0
    assert _run(["strain-scan", "--out", str(out2), "--no-plot"]) == 0
    data1 = (out1 / "strain_scan.csv").read_bytes()
    data2 = (out2 / "strain_scan.csv").read_bytes()
    assert data1 == data2
    header = data1.decode().splitlines()[2].split(",")
    assert header[0] == "delta_E1_ghz"
    assert header[1:7] == [f"energy_{n}_ghz"
                           for n in ("A1", "A2", "Ex", "Ey", "E1", "E2")]
    assert header[-2:] == ["circular_degree", "linear_axis_rad"]
    assert sum(1 for c in header if c.startswith("ov_")) == 18
    assert (out1 / "strain_scan.png").exists()


def test_stark_scan_output(tmp_path):
    out = tmp_path / "out"
    assert _run(["stark-scan", "--out", str(out)]) == 0
    text = (out / "stark_scan.csv").read_text().splitlines()
    assert text[0].startswith("# config_sha256:")
    header = text[2].split(",")
    assert header[0] == "field_mvm" and header[-1] == "ground_shift_ghz"
    rows = [line.split(",") for line in text[3:]]
    assert len(rows) == 21


def test_stark_csv_slope_recovers_piezo_response(tmp_path):
    # end-to-end: fit the exported axial transition shifts; the relative
    # slope must be g(d - b) = 5.4 GHz/(MV/m) for the default parameters
    import numpy as np
    out = tmp_path / "out"
    assert _run(["stark-scan", "--out", str(out), "--no-plot"]) == 0
    lines = (out / "stark_scan.csv").read_text().splitlines()
    rows = np.array([[float(v) for v in line.split(",")] for line in lines[3:]])
    fields = rows[:, 0]
    for col in range(1, 7):
        shift = rows[:, col] - rows[0, col]
        slope = np.polyfit(fields, shift, 1)[0]
        assert slope == pytest.approx(5.4, rel=1e-6)


def test_levels_gaussian_coulomb_source(tmp_path):
    cfg = _write_cfg(tmp_path, {
        "coulomb": {"source": "gaussian"},
        "fine_structure": {"lambda_z_ghz": 0.0, "lambda_xy_ghz": 0.0,
                           "delta_ghz": 0.0, "delta_prime_ghz": 0.0,
                           "delta_dprime_ghz": 0.0}})
    out = tmp_path / "out"
    assert _run(["levels", "--config", cfg, "--out", str(out),
                 "--no-plot"]) == 0
    doc = json.loads((out / "levels.json").read_text())
    e = {s["name"]: s["energy_ghz"] for s in doc["states"]}
    # ground-configuration ladder from the model integrals: triplet below
    # the E singlets below the A1 singlet
    assert e["3A20"] < e["1E1"] < e["1A1(e2)"]
    assert e["1E2"] == pytest.approx(e["1E1"], rel=0.05)


def test_spin_spin_sweep_output(tmp_path):
    cfg = _write_cfg(tmp_path, {"scans": {"spin_spin": {"p_n_points": 3}}})
    out = tmp_path / "out"
    assert _run(["spin-spin", "--config", cfg, "--out", str(out)]) == 0
    lines = (out / "spin_spin_sweep.csv").read_text().splitlines()
    assert len(lines) == 3 + 3
    trend = json.loads((out / "spin_spin_trend.json").read_text())["trend"]
    assert set(trend) == {"delta", "delta_prime", "delta_dprime"}


def test_seed_changes_hash_and_data(tmp_path):
    cfg = _write_cfg(tmp_path, {"scans": {"spin_spin": {"p_n_points": 2}}})
    outs = []
    for seed in (0, 1):
        out = tmp_path / f"s{seed}"
        assert _run(["spin-spin", "--config", cfg, "--out", str(out),
                     "--seed", str(seed), "--no-plot"]) == 0
        outs.append((out / "spin_spin_sweep.csv").read_text())
    assert outs[0] != outs[1]
    h0 = outs[0].splitlines()[0]
    h1 = outs[1].splitlines()[0]
    assert h0 != h1


def test_unknown_key_rejected(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"fine_structure": {"lambda_zz_ghz": 1.0}}')
    assert _run(["levels", "--config", str(bad), "--out",
                 str(tmp_path / "o")]) == 2


def test_bad_type_rejected(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"seed": "zero"}')
    assert _run(["levels", "--config", str(bad), "--out",
                 str(tmp_path / "o")]) == 2


def test_malformed_json_rejected(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert _run(["levels", "--config", str(bad), "--out",
                 str(tmp_path / "o")]) == 2


def test_nonconvergent_integration_exit_code(tmp_path):
    cfg = _write_cfg(tmp_path, {
        "quadrature": {"log2_points": 8, "scrambles": 2,
                       "target_rel_error": 1e-12},
        "coulomb": {"source": "gaussian"}})
    assert _run(["levels", "--config", cfg, "--out",
                 str(tmp_path / "o")]) == 3


def test_config_hash_is_stable():
    cfg = config.load_config(None)
    assert config.config_hash(cfg) == config.config_hash(
        config.load_config(None))


def test_validate_subcommand(tmp_path):
    cfg = _write_cfg(tmp_path, {"scans": {"spin_spin": {"p_n_points": 2}}})
    out = tmp_path / "out"
    # exit status 1: the stated-but-unattainable axis-rotation gate fails
    assert _run(["validate", "--config", cfg, "--out", str(out)]) == 1
    doc = json.loads((out / "validate_report.json").read_text())
    by_crit = {c["criterion"]: c["passed"] for c in doc["checks"]}
    assert by_crit["7-axis"] is False
    others = [c["passed"] for c in doc["checks"] if c["criterion"] != "7-axis"]
    assert all(others)
