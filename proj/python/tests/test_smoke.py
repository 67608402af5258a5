import math

import numpy as np
import pytest

import trajml


def test_synth_shapes_and_determinism():
    train, test = trajml.synth_generate("balanced", seed=5)
    assert len(train.class_names) == 11
    assert train.features.shape[1] == 18
    assert len(train) == len(train.labels)
    train2, _ = trajml.synth_generate("balanced", seed=5)
    assert np.array_equal(train.features, train2.features)
    train3, _ = trajml.synth_generate("balanced", seed=6)
    assert not np.array_equal(train.features, train3.features)


def test_class_weights():
    # 3 of class 0, 1 of class 1: w = N / (C * N_i)
    w = trajml.class_weights([0, 0, 0, 1], 2)
    assert w == pytest.approx([4 / 6, 4 / 2])


def test_meta_features():
    train, _ = trajml.synth_generate("balanced", seed=1)
    mf = trajml.meta_features(train)
    assert len(mf) == 8
    assert mf[0] == len(train)
    assert mf[2] == 11
    assert mf[3] == pytest.approx(math.log(11))  # uniform class entropy
    assert mf[4] == pytest.approx(1.0)  # balanced -> imbalance ratio 1


def test_fit_predict_evaluate_roundtrip(tmp_path):
    train, test = trajml.synth_generate("balanced", seed=2)
    out = trajml.fit(dataset=train, seed=2, budget_evals=8, kfolds=3,
                     ensemble_rounds=10, out_dir=str(tmp_path / "run"))
    bundle = out["bundle"]
    assert out["num_evaluations"] <= 8
    assert abs(sum(bundle.weights) - 1.0) < 1e-9

    proba = bundle.predict_proba(test.features)
    assert proba.shape == (len(test), 11)
    assert np.allclose(proba.sum(axis=1), 1.0)

    report = trajml.evaluate(bundle, test)
    assert report["accuracy"] > 0.5

    reloaded = trajml.Bundle.load(str(tmp_path / "run" / "bundle.json"))
    assert bundle.predict(test.features) == reloaded.predict(test.features)


def test_dataset_csv_roundtrip(tmp_path):
    X = np.array([[0.0, 1.0], [2.0, 3.0], [4.0, 5.0]])
    ds = trajml.Dataset(X, [0, 1, 0], ["a", "b"])
    path = str(tmp_path / "ds.csv")
    ds.to_csv(path)
    back = trajml.Dataset.from_csv(path)
    assert np.array_equal(back.features, X)
    assert back.labels == [0, 1, 0]
    assert back.class_names == ["a", "b"]


def test_error_mapping(tmp_path):
    with pytest.raises(trajml.TrajmlError):
        trajml.Dataset.from_csv(str(tmp_path / "missing.csv"))
