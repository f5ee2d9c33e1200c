import json

import pytest

from errors import ConfigurationError
from main import EXIT_ERROR, EXIT_NO_BOUND_STATE, EXIT_OK, RunConfig, parse_arguments, read_config_file, run


def run_json(capsys, argv):
    code = run(argv)
    out = capsys.readouterr().out
    assert code == EXIT_OK
    return json.loads(out)


def error_record(capsys):
    lines = [line for line in capsys.readouterr().err.splitlines() if line.strip()]
    return json.loads(lines[-1])


def test_solve_harmonic_undeformed(capsys):
    payload = run_json(capsys, ["solve-harmonic", "--alpha", "0", "--beta", "0"])
    assert payload["command"] == "solve-harmonic"
    assert payload["result"]["energy_nd"] == pytest.approx(1.0, rel=1e-12)
    assert payload["result"]["method"] == "ClosedForm"
    assert payload["energy_physical_closed_form"] == pytest.approx(0.5, rel=1e-12)


def test_solve_harmonic_physical_parameters(capsys):
    payload = run_json(capsys, ["solve-harmonic", "--alpha-prime", "0", "--beta-prime", "0.2"])
    assert payload["deformation"]["beta"] == pytest.approx(0.1)
    assert payload["result"]["energy_physical"] == pytest.approx(payload["energy_physical_closed_form"], rel=1e-12)


def test_solve_harmonic_with_dominant_alpha(capsys):
    payload = run_json(capsys, ["solve-harmonic", "--alpha", "1e8", "--beta", "0"])
    assert payload["result"]["energy_nd"] == pytest.approx(2e8, rel=1e-12)
    assert payload["energy_physical_closed_form"] == pytest.approx(1e8, rel=1e-12)


def test_oracle_on_steep_power_law(capsys):
    payload = run_json(capsys, ["oracle", "--n", "10000", "--alpha", "1", "--beta", "0"])
    assert payload["result"]["energy_nd"] == pytest.approx(2.0, rel=1e-9)
    assert payload["result"]["diagnostics"]["k2"] == "nan"


def test_solve_agrees_with_oracle(capsys):
    args = ["--potential", "3*x^4 + 0.5*x^2", "--alpha", "0.05", "--beta", "0.05"]
    solved = run_json(capsys, ["solve"] + args)
    checked = run_json(capsys, ["oracle"] + args)
    assert solved["result"]["method"] == "FullNumeric"
    assert solved["result"]["energy_nd"] == pytest.approx(checked["result"]["energy_nd"], rel=1e-6)
    assert solved["potential"] == "0.5*x^2 + 3.0*x^4"


def test_linearize_power_law(capsys):
    payload = run_json(capsys, ["linearize", "--n", "2", "--v0", "1"])
    assert payload["coefficients"]["xi2"] == 0.0
    assert payload["energy_nd"] == pytest.approx(0.75, rel=1e-10)


def test_output_is_deterministic(capsys):
    argv = ["solve", "--n", "3", "--alpha", "0.1", "--beta", "0.2"]
    assert run(argv) == EXIT_OK
    first = capsys.readouterr().out
    assert run(argv) == EXIT_OK
    assert capsys.readouterr().out == first


def test_metadata_records_parameters(capsys):
    payload = run_json(capsys, ["solve", "--potential", "x^2", "--alpha", "0.1", "--beta", "0.2", "--grid-points", "300"])
    assert payload["metadata"] == {"potential": "x^2", "alpha": 0.1, "beta": 0.2, "grid_points": 300}


def test_beta_limit_csv(capsys):
    assert run(["beta-limit", "--n", "1", "--n", "10", "--grid-points", "400"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "n,beta_limit"
    assert lines[1] == "1,inf"
    assert lines[2].startswith("10,")
    assert 1.0 < float(lines[2].split(",")[1]) < 100.0


def test_beta_limit_json_encodes_unbounded(capsys):
    payload = run_json(capsys, ["beta-limit", "--n", "1", "--format", "json"])
    assert payload["beta_limit"] == ["inf"]
    assert payload["n_values"] == [1]


def test_scan_region_csv(capsys):
    assert run(["scan-region", "--n", "2", "--region-points", "3", "--grid-points", "200"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "alpha,beta,exists"
    assert len(lines) == 10
    assert lines[-1] == "1.2,1.2,0"


def test_box_energy(capsys):
    payload = run_json(capsys, ["box-energy", "--beta-prime", "0"])
    assert payload["energy"] == pytest.approx(1.2337005501361697, rel=1e-12)


def test_output_file(tmp_path, capsys):
    target = tmp_path / "out" / "result.json"
    assert run(["solve-harmonic", "--beta", "0.1", "--out", str(target)]) == EXIT_OK
    assert capsys.readouterr().out == ""
    assert json.loads(target.read_text())["result"]["energy_nd"] > 1.0


def test_no_bound_state_exit_code(capsys):
    assert run(["solve", "--n", "10000", "--beta", "0.6"]) == EXIT_NO_BOUND_STATE
    assert error_record(capsys)["error"] == "NoBoundStateError"
    assert run(["box-energy", "--beta-prime", "1"]) == EXIT_NO_BOUND_STATE


@pytest.mark.parametrize("argv,error", [
    (["solve-harmonic", "--alpha", "0.5", "--beta", "0.5"], "InvalidDeformationError"),
    (["solve", "--potential", "x^3"], "PotentialSyntaxError"),
    (["solve", "--potential", "x^2 - x^4"], "PotentialSyntaxError"),
    (["solve"], "ConfigurationError"),
    (["solve", "--n", "2", "--potential", "x^2"], "ConfigurationError"),
    (["solve-harmonic", "--alpha", "0.1", "--alpha-prime", "0.1"], "ConfigurationError"),
    (["frobnicate"], "UsageError"),
    (["solve", "--alpha", "abc"], "UsageError"),
    (["solve-harmonic", "--format", "xml"], "UsageError"),
])
def test_validation_errors(capsys, argv, error):
    assert run(argv) == EXIT_ERROR
    record = error_record(capsys)
    assert record["error"] == error
    assert record["message"]


def test_help_exits_cleanly(capsys):
    assert run(["--help"]) == EXIT_OK
    assert "solve-harmonic" in capsys.readouterr().out


def test_config_file_values_are_overridden_by_flags(tmp_path, capsys):
    config = tmp_path / "run.cfg"
    config.write_text("# harmonic run\nalpha = 0.2\nbeta_prime = 0.4  # physical\n")
    args = parse_arguments(["solve-harmonic", "--config", str(config), "--alpha-prime", "0.05"])
    run_config = RunConfig.from_args(args)
    assert run_config.get("alpha") == 0.2
    assert run_config.get("alpha_prime") == 0.05
    assert run_config.get("beta_prime") == 0.4


def test_config_file_flag_overrides_same_key(tmp_path, capsys):
    config = tmp_path / "run.cfg"
    config.write_text("alpha = 0.2\nbeta = 0.1\n")
    payload = run_json(capsys, ["solve-harmonic", "--config", str(config), "--alpha", "0.05"])
    assert payload["metadata"]["alpha"] == 0.05
    assert payload["metadata"]["beta"] == 0.1


def test_config_file_rejects_unknown_key(tmp_path, capsys):
    config = tmp_path / "run.cfg"
    config.write_text("gamma = 1\n")
    with pytest.raises(ConfigurationError):
        read_config_file(str(config), "solve")
    assert run(["solve", "--n", "2", "--config", str(config)]) == EXIT_ERROR
    assert error_record(capsys)["error"] == "ConfigurationError"


def test_config_file_missing(tmp_path, capsys):
    assert run(["solve", "--n", "2", "--config", str(tmp_path / "absent.cfg")]) == EXIT_ERROR
    assert error_record(capsys)["error"] == "ConfigurationError"
