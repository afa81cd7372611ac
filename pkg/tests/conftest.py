from pathlib import Path

import pytest

from sullivan_tc.modelfile import load_model, parse_model

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def model(text: str, name: str = "m"):
    """Parse a model given with ``;`` as line separator."""
    return parse_model(text.replace(";", "\n"), name)


@pytest.fixture(scope="session")
def corpus_dir():
    return CORPUS


@pytest.fixture(scope="session")
def su6():
    return load_model(CORPUS / "su6_su3xsu3.smf")


@pytest.fixture(scope="session")
def su6_analysis(su6):
    from sullivan_tc.invariants import analyze

    return analyze(su6)


def pytest_terminal_summary(terminalreporter):
    import sys

    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, (status, title) in sorted(acceptance.RESULTS.items()):
        terminalreporter.write_line(f"criterion {number:2}: {status}  {title}")
