import pytest

from common.defaults import THRESHOLDS_PATH
from montecarlo.config import ExperimentConfig
from montecarlo.pilot import load_thresholds


@pytest.fixture(autouse=True)
def no_persistence(monkeypatch):
    monkeypatch.setenv('RS_DATABASE', 'off')
    monkeypatch.delenv('RS_THREADS', raising=False)


@pytest.fixture
def thresholds():
    if not THRESHOLDS_PATH.is_file():
        pytest.skip('pilot thresholds not pinned yet (run: python app.py pilot --suite all)')
    return load_thresholds(THRESHOLDS_PATH)


@pytest.fixture
def make_config():
    def _make(**overrides) -> ExperimentConfig:
        values = dict(experiment='SnTailEps', dist='rademacher', n_list=(16,), param_grid=(0.5,), trials=200)
        values.update(overrides)
        return ExperimentConfig(**values)

    return _make
