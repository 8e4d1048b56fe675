import numpy as np
import pytest

_ACCEPTANCE: dict[int, dict] = {}
_NOTES: dict[int, list[str]] = {}


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("acceptance")
        if m is not None:
            cid, desc = m.args
            _ACCEPTANCE.setdefault(cid, {"desc": desc, "ok": True, "ran": False})


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    m = item.get_closest_marker("acceptance")
    if m is None:
        return
    entry = _ACCEPTANCE[m.args[0]]
    if report.when == "call":
        entry["ran"] = True
    if report.failed:
        entry["ok"] = False


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for cid in sorted(_ACCEPTANCE):
        e = _ACCEPTANCE[cid]
        status = "PASS" if e["ok"] and e["ran"] else ("FAIL" if e["ran"] else "NOT RUN")
        tr.write_line(f"AC{cid:<2} {status:<7} {e['desc']}")
        for note in _NOTES.get(cid, []):
            tr.write_line(f"             {note}")


@pytest.fixture
def ac_note():
    """Attach a measured value to an acceptance line in the terminal summary."""

    def note(cid: int, text: str) -> None:
        _NOTES.setdefault(cid, []).append(text)

    return note


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
