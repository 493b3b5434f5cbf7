from pathlib import Path

import pytest

from strata.cli import parse

CORPUS = Path(__file__).resolve().parent.parent / "corpus"

# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE = {}


def corpus_specs():
    """(name, ProblemSpec) for every corpus file that parses to a valid problem."""
    out = []
    for p in sorted(CORPUS.glob("*.problem")):
        try:
            spec = parse(p.read_text(encoding="utf-8"))
        except Exception:
            continue
        out.append((p.stem, spec))
    return out


@pytest.fixture
def record():
    def _record(n, ok, detail=""):
        ACCEPTANCE[n] = (bool(ok), detail)
    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        line = f"criterion {n}: {'PASS' if ok else 'FAIL'}"
        if detail:
            line += f"  {detail}"
        terminalreporter.write_line(line)
