import pytest

from aggloss.evaluation import league_table
from aggloss.operators import OperatorId
from aggloss.quadrature import GridSpec, build_grid

_ACCEPTANCE_LINES: list[str] = []


def record_criterion(label: str, ok: bool, detail: str) -> None:
    _ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}")


@pytest.fixture(scope="session")
def acceptance_report():
    return record_criterion


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def desk_spec():
    return GridSpec(n=1000, alpha=0.5)


@pytest.fixture(scope="session")
def desk_grid(desk_spec):
    return build_grid(desk_spec)


@pytest.fixture(scope="session")
def desk_league(desk_spec):
    """All five operators at n=1000, alpha=0.5, clamp 1e-12 (about 20 s)."""
    entries = league_table(list(OperatorId), desk_spec, 1e-12)
    return {e.op: e for e in entries}


CLAMPS = (1e-4, 1e-6, 1e-9, 1e-12)


@pytest.fixture(scope="session")
def clamp_sweep(desk_spec, desk_league):
    """Full leagues at n=1000 keyed by clamp epsilon, then by operator."""
    sweep = {1e-12: desk_league}
    for eps in CLAMPS[:-1]:
        sweep[eps] = {e.op: e for e in league_table(list(OperatorId), desk_spec, eps)}
    return sweep
