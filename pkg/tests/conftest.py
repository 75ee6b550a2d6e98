import json

import pytest
from hypothesis import HealthCheck, settings

from posetramsey import Poset

settings.register_profile(
    "repo", deadline=None, derandomize=True, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("repo")


@pytest.fixture
def q2_file(tmp_path):
    path = tmp_path / "q2.json"
    path.write_text(json.dumps(Poset.boolean_lattice(2).to_json()))
    return path


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
