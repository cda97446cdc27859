import math
from pathlib import Path

import numpy as np
import pytest

from brillent.cli import EXIT_CONFIG, EXIT_OK, EXIT_VALIDATION, main
from brillent.config import ConfigError, parse_config

CONFIGS = Path(__file__).resolve().parents[1] / "configs"
BASE = CONFIGS / "operating_point.cfg"


def read_csv(path):
    meta, summary, header, rows = {}, {}, None, []
    for line in Path(path).read_text().splitlines():
        if line.startswith("# config "):
            k, v = line[len("# config "):].split(" = ", 1)
            meta[k] = v
        elif line.startswith("# summary "):
            for item in line[len("# summary "):].split():
                k, v = item.split("=", 1)
                summary[k] = v
        elif line.startswith("#"):
            continue
        elif header is None:
            header = line.split(",")
        else:
            rows.append(line.split(","))
    return meta, summary, header, rows


def column(header, rows, name):
    i = header.index(name)
    return np.array([float(r[i]) for r in rows])


def write_cfg(tmp_path, text, name="run.cfg"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


# --- configuration --------------------------------------------------------------------

@pytest.mark.parametrize("text, fragment", [
    ("g_over_Gamma = 30\nbogus = 1\n", "2: unknown key"),
    ("T_m_K = 30\nT_m_K = 40\n", "duplicate key"),
    ("T_m_K = warm\n", "cannot parse"),
    ("just words\n", "expected key = value"),
    ("k_per_m = 1\ndelta_a_over_Gamma = 0.2\n", "either k_per_m or delta_a_over_Gamma"),
    ("sweep_var = nonsense\nsweep_min = 0\nsweep_max = 1\n", "not a config key"),
])
def test_config_errors_are_diagnosed(text, fragment):
    with pytest.raises(ConfigError, match=fragment):
        parse_config(text, "x.cfg")


def test_bad_config_exits_with_code_2(tmp_path, capsys):
    cfg = write_cfg(tmp_path, "k_per_m = 1\ndelta_a_over_Gamma = 0.2\n")
    assert main(["entangle", "--config", cfg]) == EXIT_CONFIG
    assert "config error" in capsys.readouterr().err
    assert main(["entangle", "--config", str(tmp_path / "missing.cfg")]) == EXIT_CONFIG


def test_frequencies_are_converted_to_angular():
    cfg = parse_config("Gamma_hz = 2e6\ngamma_hz = 0.1e6\ng_over_Gamma = 30\n")
    p = cfg.params()
    assert p.Gamma == pytest.approx(2 * math.pi * 2e6, rel=1e-15)
    assert p.g == pytest.approx(30 * p.Gamma, rel=1e-15)


# --- entangle -------------------------------------------------------------------------

def test_entangle_is_reproducible_and_headers_round_trip(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for out in (a, b):
        assert main(["entangle", "--config", str(BASE), "--out", str(out),
                     "--reproducible", "--samples", "100"]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    meta, _, _, _ = read_csv(a)
    assert float(meta["derived.Gamma_hz"]) == pytest.approx(float(meta["Gamma_hz"]), rel=1e-12)
    assert float(meta["derived.gamma_hz"]) == pytest.approx(float(meta["gamma_hz"]), rel=1e-12)
    assert float(meta["derived.omega_ac_hz"]) == pytest.approx(float(meta["omega_ac_hz"]), rel=1e-12)
    assert float(meta["derived.delta_a_hz"]) == pytest.approx(
        float(meta["delta_a_over_Gamma"]) * float(meta["Gamma_hz"]), rel=1e-12)


def test_entangle_timestamp_only_without_reproducible(tmp_path):
    out = tmp_path / "t.csv"
    main(["entangle", "--config", str(BASE), "--out", str(out), "--samples", "20"])
    assert any(l.startswith("# generated") for l in out.read_text().splitlines())


def test_entangle_columns_are_consistent(tmp_path):
    out = tmp_path / "e.csv"
    main(["entangle", "--config", str(BASE), "--out", str(out), "--reproducible", "--samples", "200"])
    _, summary, header, rows = read_csv(out)
    en = column(header, rows, "E_N_exact")
    lam = column(header, rows, "lambda_minus")
    assert np.allclose(en, np.maximum(0, -np.log(2 * lam)), rtol=0, atol=1e-15)
    assert float(summary["peak_E_N"]) >= en.max() - 1e-12
    assert float(summary["peak_E_N"]) == pytest.approx(0.248, abs=2e-3)


def test_entangle_peak_within_ten_percent_of_estimate(tmp_path):
    # the closed-form E_N^max estimate is meant to track the numerical peak
    out = tmp_path / "e.csv"
    main(["entangle", "--config", str(BASE), "--out", str(out), "--reproducible", "--samples", "200"])
    _, summary, _, _ = read_csv(out)
    peak, est = float(summary["peak_E_N"]), float(summary["en_max"])
    assert abs(peak - est) <= 0.1 * est


def test_multiple_couplings_write_separate_files(tmp_path):
    cfg = write_cfg(tmp_path, BASE.read_text().replace("g_over_Gamma = 30", "g_over_Gamma = 10,30"))
    out = tmp_path / "m.csv"
    assert main(["entangle", "--config", cfg, "--out", str(out), "--reproducible", "--samples", "30"]) == 0
    assert (tmp_path / "m_g10.csv").exists() and (tmp_path / "m_g30.csv").exists()


def test_zero_coupling_gives_zero_entanglement(tmp_path):
    cfg = write_cfg(tmp_path, BASE.read_text().replace("g_over_Gamma = 30", "g_over_Gamma = 0"))
    out = tmp_path / "z.csv"
    assert main(["entangle", "--config", cfg, "--out", str(out), "--reproducible", "--samples", "50"]) == 0
    _, _, header, rows = read_csv(out)
    assert not column(header, rows, "E_N_exact").any()


def test_zero_readout_coupling_gives_no_stokes_antistokes_entanglement(tmp_path):
    cfg = write_cfg(tmp_path, BASE.read_text().replace("g_tilde_over_Gamma = 40",
                                                          "g_tilde_over_Gamma = 0"))
    out = tmp_path / "r.csv"
    assert main(["readout", "--config", cfg, "--out", str(out), "--reproducible", "--samples", "40"]) == 0
    _, _, header, rows = read_csv(out)
    assert not column(header, rows, "E_N_a_atilde").any()


# --- sweeps ---------------------------------------------------------------------------

def test_sweep_temp_rows_ordered_monotone_and_consistent(tmp_path):
    text = (CONFIGS / "sweep_temp.cfg").read_text().replace("sweep_count = 30", "sweep_count = 8")
    text = text.replace("sweep_max = 300", "sweep_max = 80")
    cfg = write_cfg(tmp_path, text)
    out = tmp_path / "st.csv"
    assert main(["sweep-temp", "--config", cfg, "--out", str(out), "--reproducible",
                 "--workers", "3"]) == 0
    _, summary, header, rows = read_csv(out)
    T = column(header, rows, "T_m")
    peak = column(header, rows, "peak_E_N")
    assert np.array_equal(T, np.linspace(10, 80, 8))
    assert np.all(np.diff(peak) <= 1e-12)
    assert summary["nonincreasing"] == "true"
    # the T = 30 K row reproduces the single-point peak
    ent = tmp_path / "e.csv"
    main(["entangle", "--config", str(BASE), "--out", str(ent), "--reproducible"])
    e_pk = float(read_csv(ent)[1]["peak_E_N"])
    assert peak[list(T).index(30.0)] == pytest.approx(e_pk, abs=1e-9)


def test_sweep_k_is_symmetric_and_peaks_near_zero_detuning(tmp_path):
    text = (CONFIGS / "sweep_k.cfg").read_text().replace("sweep_count = 61", "sweep_count = 7")
    cfg = write_cfg(tmp_path, text)
    out = tmp_path / "sk.csv"
    assert main(["sweep-k", "--config", cfg, "--out", str(out), "--reproducible"]) == 0
    _, _, header, rows = read_csv(out)
    peak = column(header, rows, "peak_E_N")
    assert np.argmax(peak) == 3
    assert np.allclose(peak, peak[::-1], rtol=1e-6, atol=1e-12)


def test_sweep_commands_require_sweep_keys(tmp_path):
    assert main(["sweep-temp", "--config", str(BASE)]) == EXIT_CONFIG


# --- validate -------------------------------------------------------------------------

def test_validate_passes_and_is_stable_across_seeds(tmp_path):
    import json

    verdicts = []
    for seed in (1, 2):
        out = tmp_path / f"v{seed}.json"
        code = main(["validate", "--config", str(BASE), "--out", str(out),
                     "--seed", str(seed), "--n-traj", "2000"])
        report = json.loads(out.read_text())
        assert report["seed"] == seed
        verdicts.append((code, [c["passed"] for c in report["checks"]]))
    assert verdicts[0] == verdicts[1]
    assert verdicts[0][0] == EXIT_OK


def test_validate_fails_with_loose_tolerance(tmp_path):
    out = tmp_path / "v.json"
    code = main(["validate", "--config", str(BASE), "--out", str(out), "--rtol", "1",
                 "--n-traj", "1000"])
    assert code == EXIT_VALIDATION
