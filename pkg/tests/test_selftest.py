import pytest

from app.main import main
from app.services.kodaira import KodairaService, corrupted_table
from app.services.selftest import SelftestService


@pytest.fixture
def quick(settings):
    return settings.model_copy(update={"SELFTEST_INSTANCES": 5})


def test_selftest_passes(quick):
    result = SelftestService(quick).run()
    assert result.passed, result.summary()
    assert result.checks[0].name == "kodaira-table-totality"
    assert result.instances == 5


def test_selftest_is_deterministic(quick):
    first = SelftestService(quick, seed=7).run()
    second = SelftestService(quick, seed=7).run()
    assert [(c.name, c.passed, c.detail) for c in first.checks] == [(c.name, c.passed, c.detail) for c in second.checks]


def test_corrupted_table_names_totality_check(quick):
    result = SelftestService(quick, KodairaService(corrupted_table())).run()
    assert not result.passed
    assert result.first_failure.name == "kodaira-table-totality"
    assert "selftest failed: first failing check kodaira-table-totality" in result.summary()


def test_cli_selftest(capsys, quick):
    assert main(["selftest", "--seed", "3"], quick) == 0
    assert "selftest passed" in capsys.readouterr().out
