import json
from pathlib import Path

import pytest

from app.core.config import Settings
from app.main import main

JOBS = Path(__file__).resolve().parent.parent / "jobs"


def run_json(capsys, settings, *argv):
    code = main([*argv, "--json"], settings)
    return code, json.loads(capsys.readouterr().out)


def test_resolve_normal_crossing_json(capsys, settings):
    code, report = run_json(capsys, settings, "resolve", "--input", str(JOBS / "normal_crossing.json"))
    assert code == 0
    assert report["exit_code"] == 0
    point = report["points"][0]
    assert point["point"] == ["0", "0"]
    assert point["orders"] == {"a": 4, "b": 6, "d": 12}
    assert [c["orders"] for c in point["isolation"]["candidates"]] == [{"a": 2, "b": 3, "d": 6}] * 2
    resolution = point["resolution"]
    assert resolution["depth"] == 1
    assert [entry["net"] for entry in resolution["ledger"]["entries"]] == [0]
    surface = resolution["surfaces"][0]
    assert [(place["location"], place["fiber"]["symbol"]) for place in surface["places"]] == [
        ("u=0", "I0*"),
        ("infinity", "I0*"),
    ]
    assert surface["mordell_weil"]["rank"] == 0
    assert surface["mordell_weil"]["torsion_order"] == 4
    assert surface["mordell_weil"]["torsion_structure"] == "Z/2 x Z/2"
    assert surface["mordell_weil"]["census"] == {"sections": 4, "fiber_components": 10, "total": 14}
    bounds = resolution["bounds"]
    assert bounds["n_surfaces"] == 9
    assert bounds["lower_any"] == "2"
    assert bounds["lower_generic"] == "9"
    assert bounds["lower_product"] == "387420489"
    assert bounds["upper_extremal"] == "9225216"


def test_resolve_twin_curves_json(capsys, settings):
    code, report = run_json(capsys, settings, "resolve", "--input", str(JOBS / "twin_curves.json"))
    assert code == 0
    resolution = report["points"][0]["resolution"]
    assert resolution["depth"] == 2
    assert resolution["crepant"] is True
    first, second = resolution["surfaces"]
    assert first["rational"] is False and first["has_46_12_point"] is True
    assert first["delta_restricted"] == "31*u^12"
    assert resolution["steps"][0]["chart_u"]["f"] == "u^4 - 2*u^2*t^2 + t^4"
    assert [place["location"] for place in second["places"]] == ["u=-1", "u=1"]
    assert second["rational"] is True


def test_resolve_pencil_json(capsys, settings):
    code, report = run_json(capsys, settings, "resolve", "--input", str(JOBS / "pencil.json"))
    assert code == 0
    surface = report["points"][0]["resolution"]["surfaces"][0]
    assert surface["delta_restricted"] == "4*u^12 + 27"
    assert surface["places"][0]["location"] == "root_of(4*u^12 + 27)"
    assert surface["places"][0]["geometric_points"] == 12
    assert surface["mordell_weil"]["rank"] == 8
    assert surface["mordell_weil"]["census"]["sections"] == "infinite"
    assert surface["mordell_weil"]["dichotomy"] == "InfiniteFlopCandidates"


def test_resolve_singular_generic_fiber(capsys, settings):
    code, report = run_json(capsys, settings, "resolve", "--input", str(JOBS / "singular_generic_fiber.json"))
    assert code == 0
    assert report["job"]["isolation_mode"] == "threshold"
    point = report["points"][0]
    assert point["orders"] == {"a": 4, "b": 6, "d": 13}
    resolution = point["resolution"]
    assert resolution["ledger"]["total_discrepancy"] == 0
    (surface,) = resolution["surfaces"]
    assert surface["generic_fiber_singular"] is True
    assert surface["delta_restricted"] == "0"
    assert surface["rational"] is False

    code = main(["resolve", "--input", str(JOBS / "singular_generic_fiber.json")], settings)
    out = capsys.readouterr().out
    assert code == 0
    assert "singular generic fiber" in out
    assert "[threshold mode]" in out


def test_recursion_limit_flag(capsys, settings):
    code, report = run_json(
        capsys, settings, "resolve", "--input", str(JOBS / "twin_curves.json"), "--recursion-limit", "1"
    )
    assert code == 4
    assert report["job"]["recursion_limit"] == 1
    assert report["points"][0]["resolution"]["status"] == "RecursionLimit"


def test_not_isolated_exit_code(capsys, settings):
    code, report = run_json(capsys, settings, "resolve", "--input", str(JOBS / "non_minimal.json"))
    assert code == 3
    assert report["points"][0]["error"]["kind"] == "NotIsolated"


def test_classify_text_summary(capsys, settings):
    code = main(["classify", "--input", str(JOBS / "normal_crossing.json")], settings)
    out = capsys.readouterr().out
    assert code == 0
    assert "point (0, 0)" in out
    assert "non-Kodaira (4,6,12)" in out
    assert "exit code 0" in out


def test_input_errors(capsys, settings, tmp_path):
    assert main(["resolve"], settings) == 2
    assert "needs --input" in capsys.readouterr().err
    bad = tmp_path / "bad.json"
    bad.write_text('{"variables": ["s", "t"], "f": "s^", "g": "t"}')
    assert main(["classify", "--input", str(bad)], settings) == 2
    assert "f: " in capsys.readouterr().err
    assert main(["frobnicate"], settings) == 2


def test_print_kodaira_table(capsys, settings):
    assert main(["--print-kodaira-table"], settings) == 0
    out = capsys.readouterr().out
    assert "I0star" in out
    assert "NonKodaira" in out


def test_fault_injection_needs_debug(capsys, settings):
    assert main(["selftest", "--inject-fault", "kodaira-table"], settings) == 2
    assert "DEBUG" in capsys.readouterr().err


@pytest.mark.slow
def test_selftest_with_injected_fault(capsys):
    debug = Settings(_env_file=None, DEBUG=True, SELFTEST_INSTANCES=5)
    assert main(["selftest", "--inject-fault", "kodaira-table"], debug) != 0
    captured = capsys.readouterr()
    assert "first failing check: kodaira-table-totality" in captured.err
