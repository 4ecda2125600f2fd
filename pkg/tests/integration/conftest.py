import pytest


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "envelope: full-size benchmark runs checked against convergence envelopes"
    )


@pytest.fixture
def quiet_logs(monkeypatch):
    """Keep the CLI from installing log handlers."""
    monkeypatch.setenv("BENCH_LOG_LEVEL", "NONE")


@pytest.fixture
def bench(quiet_logs):
    """The ``bench`` CLI module; skipped without the optional rich dependency."""
    pytest.importorskip("rich")
    import bench as cli
    return cli
