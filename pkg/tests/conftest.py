from pathlib import Path

import pytest

from expcut.parser import parse_lk, parse_proof

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "expcut" / "fixtures"

# proofs in exp/ that are expected to check
GOOD = ["cut_example", "quantifier_walkthrough", "rank_degree", "forest_counterexample", "confluence", "bridge", "merge_a", "merge_b"]


def fixture_path(rel: str) -> Path:
    return FIXTURES / rel


def load_exp(name: str):
    return parse_proof((FIXTURES / "exp" / (name + ".exp")).read_text())


def load_merge(name: str):
    return parse_proof((FIXTURES / "merge" / (name + ".exp")).read_text())


def load_lk(name: str):
    return parse_lk((FIXTURES / "lk" / (name + ".lk")).read_text())


@pytest.fixture
def cut_example():
    return load_exp("cut_example")


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.line(n))
