"""End-to-end tests for the command-line interface.

Every test drives `cli.main` in-process with captured stdout/stderr, so the
assertions see exactly the bytes a shell user would.
"""

from __future__ import annotations

import io
import json
import math
from contextlib import redirect_stderr, redirect_stdout

import pytest

from moutard import cli
from moutard.cli import ConfigError, parse_complex, parse_complex_list


def run_cli(argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = cli.main(argv)
    return code, out.getvalue(), err.getvalue()


# --- argument parsing ----------------------------------------------------------


def test_parse_complex_comma_form():
    assert parse_complex("1,2") == 1 + 2j
    assert parse_complex("-0.5,0") == -0.5 + 0j


def test_parse_complex_i_suffix_form():
    assert parse_complex("3") == 3 + 0j
    assert parse_complex("2i") == 2j
    assert parse_complex("1+2i") == 1 + 2j
    assert parse_complex("1.5-0.5i") == 1.5 - 0.5j


def test_parse_complex_rejections():
    with pytest.raises(ConfigError):
        parse_complex("abc")
    with pytest.raises(ConfigError):
        parse_complex("nan")
    with pytest.raises(ConfigError):
        parse_complex("")


def test_parse_complex_list():
    assert parse_complex_list("1;2,3;4i") == [1 + 0j, 2 + 3j, 4j]
    assert parse_complex_list("1 -1") == [1 + 0j, -1 + 0j]
    assert parse_complex_list("") == []


# --- eigen ----------------------------------------------------------------------


def test_eigen_plane_wave_at_origin():
    code, out, err = run_cli(["eigen", "--roots", "", "--lambda", "1", "--z", "0"])
    assert code == 0 and err == ""
    doc = json.loads(out)
    pt = doc["points"][0]
    assert pt["psi"] == {"re": 1.0, "im": 0.0}
    assert pt["mu"] == {"re": 0.0, "im": 0.0}
    assert doc["degree"] == 0


def test_eigen_csv_columns():
    code, out, _ = run_cli(
        ["eigen", "--roots", "", "--lambda", "1", "--z", "0;1", "--format", "csv"]
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "re_z,im_z,re_mu,im_mu,re_psi,im_psi"
    assert len(lines) == 3
    row = lines[2].split(",")
    assert float(row[4]) == pytest.approx(math.e)


# --- verify -----------------------------------------------------------------------


def test_verify_passes_for_symmetric_pair():
    code, out, err = run_cli(["verify", "--roots", "1;-1", "--lambda", "2"])
    assert code == 0 and err == ""
    doc = json.loads(out)
    assert doc["all_passed"] is True
    assert all(doc["checks"].values())
    assert doc["degree"] == 2
    assert doc["sample_points"] == 25
    assert doc["results"]["identity_residual"] < 1e-12
    assert abs(doc["scattering"]["a"]["re"] - (-2.0)) < 1e-3
    assert doc["scattering"]["recovered_count"] == 2


def test_verify_is_deterministic():
    argv = ["verify", "--roots", "1;-1", "--lambda", "2"]
    assert run_cli(argv) == run_cli(argv)


def test_verify_csv_rows():
    code, out, _ = run_cli(
        ["verify", "--roots", "1;-1", "--lambda", "2", "--format", "csv"]
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "check,value,threshold,passed"
    assert len(lines) == 1 + len(cli.VERIFY_THRESHOLDS) + 1  # checks + count row
    for line in lines[1:]:
        assert line.split(",")[-1] == "True"
    assert lines[-1].startswith("count_recovered,")


# --- scatter ----------------------------------------------------------------------


def test_scatter_json_fields():
    code, out, _ = run_cli(["scatter", "--roots", "1;-1;0.5i", "--lambda", "2"])
    assert code == 0
    doc = json.loads(out)
    assert doc["degree"] == 3
    assert doc["recovered_count"] == 3
    assert doc["abs_b"] < 1e-8
    assert abs(doc["a"]["re"] - doc["expected_a"]["re"]) < 1e-3
    assert doc["samples"] == 64
    assert doc["fit_residual"] >= 0.0


def test_scatter_radius_too_small_is_structured():
    code, out, err = run_cli(["scatter", "--roots", "3", "--lambda", "1", "--radius", "4"])
    assert code == 1
    assert out == ""
    rec = json.loads(err)["error"]
    assert rec["type"] == "RadiusTooSmall"
    assert rec["message"]


# --- evolve ------------------------------------------------------------------------


def test_evolve_single_root_csv():
    code, out, _ = run_cli(
        ["evolve", "--roots", "5", "--t0", "0", "--t1", "1", "--steps", "1",
         "--format", "csv"]
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "t,re_root_1,im_root_1"
    assert len(lines) == 3
    assert not any(line.startswith("#") for line in lines)


def test_evolve_triple_collision_csv():
    code, out, _ = run_cli(
        ["evolve", "--coeffs", "0;0;0;1", "--t0", "-1", "--t1", "1",
         "--steps", "400", "--format", "csv"]
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 403  # header + 401 rows + 1 event comment
    assert lines[0] == "t,re_root_1,im_root_1,re_root_2,im_root_2,re_root_3,im_root_3"
    events = [line for line in lines if line.startswith("#event")]
    assert len(events) == 1
    assert "t_approx=0.0" in events[0]
    assert "roots=0;1;2" in events[0]


def test_evolve_json_shape():
    code, out, _ = run_cli(
        ["evolve", "--coeffs", "0;0;0;1", "--t0", "-1", "--t1", "-0.5", "--steps", "2"]
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["events"] == []
    assert doc["times"] == [-1.0, -0.75, -0.5]
    assert len(doc["paths"]) == 3
    assert all(len(path) == 3 for path in doc["paths"])


def test_evolve_csv_and_json_agree_bitwise():
    base = ["evolve", "--coeffs", "0;0;0;1", "--t0", "-1", "--t1", "-0.5", "--steps", "2"]
    _, json_out, _ = run_cli(base)
    _, csv_out, _ = run_cli(base + ["--format", "csv"])
    doc = json.loads(json_out)
    rows = [line.split(",") for line in csv_out.strip().splitlines()[1:]]
    for k, row in enumerate(rows):
        assert float(row[0]) == doc["times"][k]
        for i, path in enumerate(doc["paths"]):
            assert float(row[1 + 2 * i]) == path[k]["re"]
            assert float(row[2 + 2 * i]) == path[k]["im"]


def test_evolve_ambiguous_matching_is_structured():
    code, out, err = run_cli(
        ["evolve", "--coeffs", "0;0;0;1", "--t0", "-1", "--t1", "0.92", "--steps", "2"]
    )
    assert code == 1
    assert out == ""
    rec = json.loads(err)["error"]
    assert rec["type"] == "AmbiguousMatching"
    assert set(rec["details"]) >= {"distance", "rival", "margin"}


# --- potential ----------------------------------------------------------------------


def test_potential_json():
    code, out, _ = run_cli(["potential", "--coeffs", "0;0;0;1", "--t0", "1"])
    assert code == 0
    doc = json.loads(out)
    assert doc["t"] == 1.0
    assert doc["weight"] == pytest.approx(-8.0 * math.pi)
    assert len(doc["centers"]) == 3
    for c in doc["centers"]:
        z = complex(c["re"], c["im"])
        assert abs(z**3 + 6.0) < 1e-9


def test_potential_csv_weight_column():
    code, out, _ = run_cli(
        ["potential", "--coeffs", "0;0;0;1", "--t0", "1", "--format", "csv"]
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "re_center,im_center,weight"
    assert len(lines) == 4
    for line in lines[1:]:
        assert float(line.split(",")[2]) == -8.0 * math.pi


# --- validation diagnostics -----------------------------------------------------------


def test_rejects_roots_and_coeffs_together():
    code, out, err = run_cli(
        ["eigen", "--roots", "1", "--coeffs", "0;1", "--lambda", "1", "--z", "0"]
    )
    assert code == 2 and out == ""
    assert err.strip() == "error: provide exactly one of --roots or --coeffs"


def test_rejects_zero_lambda():
    code, _, err = run_cli(["verify", "--roots", "1", "--lambda", "0"])
    assert code == 2
    assert err.strip() == "error: verify requires a nonzero --lambda"


def test_rejects_unparsable_complex():
    code, _, err = run_cli(["eigen", "--roots", "abc", "--lambda", "1", "--z", "0"])
    assert code == 2
    assert err.strip() == "error: cannot parse complex number from 'abc'"


def test_rejects_bad_time_window():
    code, _, err = run_cli(
        ["evolve", "--roots", "1", "--t0", "1", "--t1", "1", "--steps", "5"]
    )
    assert code == 2
    assert err.strip() == "error: evolve requires --t0 < --t1"


def test_missing_subcommand_exits_2():
    code, _, _ = run_cli([])
    assert code == 2


# --- output redirection -----------------------------------------------------------------


def test_out_writes_file(tmp_path):
    target = tmp_path / "report.json"
    argv = ["verify", "--roots", "1;-1", "--lambda", "2"]
    code, out, err = run_cli(argv + ["--out", str(target)])
    assert code == 0 and out == "" and err == ""
    _, direct, _ = run_cli(argv)
    assert target.read_text(encoding="utf-8") == direct


def test_out_unwritable_path_is_structured(tmp_path):
    bad = tmp_path / "no-such-dir" / "report.json"
    code, out, err = run_cli(
        ["potential", "--roots", "1", "--out", str(bad)]
    )
    assert code == 1
    rec = json.loads(err)["error"]
    assert rec["type"] == "IoFailure"
    assert rec["details"]["path"] == str(bad)
