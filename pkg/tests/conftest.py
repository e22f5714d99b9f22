import os

import pytest

# acceptance lines are collected here and repeated in the terminal summary
_RESULTS = []


@pytest.fixture
def criterion():
    """``criterion(n, ok, detail)`` records one acceptance line and asserts ``ok``."""

    def record(number, ok, detail=""):
        line = f"{'PASS' if ok else 'FAIL'} criterion {number:>2}: {detail}"
        _RESULTS.append((number, line))
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_RESULTS):
        terminalreporter.write_line(line)


@pytest.fixture
def run_cli(capsys):
    """Run the command-line entry point in-process; returns ``(code, stdout, stderr)``."""
    from padyn.cli import main

    def run(*argv, env=None):
        old = {}
        for k, v in (env or {}).items():
            old[k] = os.environ.get(k)
            os.environ[k] = v
        try:
            try:
                code = main(list(argv))
            except SystemExit as exc:
                code = exc.code
        finally:
            for k, v in old.items():
                if v is None:
                    os.environ.pop(k, None)
                else:
                    os.environ[k] = v
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return run

