import json

import numpy as np
import pytest

from ovisat.errors import MissingModelFile, ModelError
from ovisat.models import (
    DtrConfig,
    KnnConfig,
    LinearConfig,
    MlpConfig,
    RidgeConfig,
    SvrConfig,
    fit,
    load_model,
    predict,
    save_model,
)

ALL_CONFIGS = [
    LinearConfig(),
    RidgeConfig(lambda_grid=(0.1, 1.0)),
    SvrConfig(c=2.0, gamma=0.3),
    MlpConfig(epochs=60, seed=5),
    KnnConfig(k=3),
    DtrConfig(),
]


def problem(seed=0, n=30, d=5):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, d))
    y = X @ rng.normal(size=d) + 0.4 * rng.normal(size=n)
    return X, y


@pytest.mark.parametrize("config", ALL_CONFIGS, ids=lambda c: c.kind)
def test_round_trip_predictions_bit_identical(config, tmp_path):
    X, y = problem()
    model = fit(config, X, y)
    path = tmp_path / f"model_{config.kind}.json"
    save_model(model, path, metadata={"note": "test"})
    loaded, meta = load_model(path)
    assert meta == {"note": "test"}
    assert loaded.config == model.config
    assert loaded.feature_names == model.feature_names
    queries = np.random.default_rng(99).normal(size=(20, 5))
    assert np.array_equal(predict(model, queries), predict(loaded, queries))


def test_full_precision_decimal_strings(tmp_path):
    X, y = problem(1)
    model = fit(LinearConfig(), X, y)
    path = tmp_path / "m.json"
    save_model(model, path)
    doc = json.loads(path.read_text())
    for s in doc["params"]["coef"]["data"]:
        assert isinstance(s, str)
        assert float(s) in model.coef  # exact round trip

def test_missing_file(tmp_path):
    with pytest.raises(MissingModelFile):
        load_model(tmp_path / "nope.json")


def test_rejects_foreign_json(tmp_path):
    path = tmp_path / "x.json"
    path.write_text('{"hello": 1}')
    with pytest.raises(ModelError):
        load_model(path)


def test_rejects_bad_version(tmp_path):
    X, y = problem(2)
    path = tmp_path / "m.json"
    save_model(fit(LinearConfig(), X, y), path)
    doc = json.loads(path.read_text())
    doc["version"] = 99
    path.write_text(json.dumps(doc))
    with pytest.raises(ModelError):
        load_model(path)


def test_save_is_deterministic(tmp_path):
    X, y = problem(3)
    model = fit(SvrConfig(c=1.0, gamma=0.5), X, y)
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    save_model(model, p1)
    save_model(model, p2)
    assert p1.read_bytes() == p2.read_bytes()
