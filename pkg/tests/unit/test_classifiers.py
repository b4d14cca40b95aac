"""Pruebas de los conjuntos de datos, los clasificadores y el almacén de modelos."""

import json

import numpy as np
import pandas as pd
import pytest

from bus_sim import Origin
from core.registry import UnknownKind
from detector import (
    Dataset,
    DecisionTree,
    DetectionModel,
    Distribution,
    FeatureKind,
    FeatureVector,
    HistogramSpec,
    LinearSvm,
    ModelFormatError,
    SingleClassTraining,
    build_classifier,
    classifier_from_dict,
    load_model,
    save_model,
    stratified_split,
)

X_TOY = np.array([[0.0], [1.0], [2.0], [3.0], [10.0], [11.0], [12.0], [13.0]])
Y_TOY = np.array([0, 0, 0, 0, 1, 1, 1, 1])


# --- conjuntos ------------------------------------------------------------

def test_stratified_split_partitions_each_class():
    labels = [0] * 10 + [1] * 20
    train, test = stratified_split(labels, 0.7, seed=1)
    assert sorted(np.concatenate([train, test]).tolist()) == list(range(30))
    assert set(train).isdisjoint(test)
    train_labels = np.asarray(labels)[train]
    assert (train_labels == 0).sum() == 7
    assert (train_labels == 1).sum() == 14


def test_stratified_split_is_seeded():
    labels = [0, 1] * 25
    first = stratified_split(labels, seed=5)
    second = stratified_split(labels, seed=5)
    other = stratified_split(labels, seed=6)
    assert all(np.array_equal(a, b) for a, b in zip(first, second))
    assert not np.array_equal(first[0], other[0])


def test_stratified_split_rejects_bad_fraction():
    with pytest.raises(ValueError):
        stratified_split([0, 1], 1.0)


def _vectors(kind=FeatureKind.MEAN_VAR):
    return [
        FeatureVector(kind, [float(i), float(i) ** 2], Origin.ATTACK if i % 2 else Origin.NO_ATTACK)
        for i in range(10)
    ]


def test_dataset_to_csv(tmp_path):
    dataset = Dataset.split(FeatureKind.MEAN_VAR, _vectors())
    frame = pd.read_csv(dataset.to_csv(tmp_path / "features.csv"))
    assert list(frame.columns) == ["label", "f0", "f1"]
    assert frame["label"].tolist()[:2] == ["no-attack", "attack"]
    assert len(frame) == 10


def test_dataset_needs_labels():
    vectors = [FeatureVector(FeatureKind.MEAN, [1.0])]
    with pytest.raises(ValueError):
        Dataset.split(FeatureKind.MEAN, vectors)


def test_dataset_rejects_mixed_kinds():
    vectors = _vectors() + [FeatureVector(FeatureKind.MEAN, [1.0], Origin.ATTACK)]
    with pytest.raises(ValueError):
        Dataset(FeatureKind.MEAN_VAR, vectors, np.arange(11), np.array([], dtype=int))


def test_dataset_rejects_overlapping_split():
    with pytest.raises(ValueError):
        Dataset(FeatureKind.MEAN_VAR, _vectors(), np.arange(6), np.arange(5, 10))


# --- árbol ----------------------------------------------------------------

def test_tree_single_split_on_separable_data():
    tree = DecisionTree().fit(X_TOY, Y_TOY)
    assert len(tree.nodes) == 3
    assert tree.depth == 1
    assert tree.nodes[0]["feature"] == 0
    assert tree.nodes[0]["threshold"] == 6.5
    assert tree.accuracy(X_TOY, Y_TOY) == 1.0


def test_tree_depth_zero_predicts_a_constant():
    tree = DecisionTree(max_depth=0).fit(X_TOY, Y_TOY)
    assert len(tree.nodes) == 1
    assert tree.predict(X_TOY).tolist() == [0] * 8
    assert tree.accuracy(X_TOY, Y_TOY) == 0.5


def test_tree_min_leaf_limits_thresholds():
    X = np.array([[0.0], [1.0], [2.0], [10.0]])
    y = np.array([0, 0, 0, 1])
    assert DecisionTree(min_leaf=1).fit(X, y).nodes[0]["threshold"] == 6.0
    assert DecisionTree(min_leaf=2).fit(X, y).nodes[0]["threshold"] == 1.5


def test_tree_ties_prefer_the_first_feature():
    X = np.array([[0.0, 0.0], [1.0, 1.0], [10.0, 10.0], [11.0, 11.0]])
    tree = DecisionTree(min_leaf=1).fit(X, np.array([0, 0, 1, 1]))
    assert tree.nodes[0]["feature"] == 0


def test_tree_is_deterministic():
    rng = np.random.default_rng(0)
    X = rng.normal(size=(60, 3))
    y = (X[:, 0] + 0.3 * rng.normal(size=60) > 0).astype(int)
    assert DecisionTree().fit(X, y).to_dict() == DecisionTree().fit(X, y).to_dict()


def test_invalid_tree_params():
    with pytest.raises(ValueError):
        DecisionTree(max_depth=-1)
    with pytest.raises(ValueError):
        DecisionTree(min_leaf=0)


# --- SVM ------------------------------------------------------------------

def test_svm_separates_toy_data():
    svm = LinearSvm(seed=1).fit(X_TOY, Y_TOY)
    assert svm.accuracy(X_TOY, Y_TOY) == 1.0
    assert svm.weights[0] > 0


def test_svm_is_seeded():
    rng = np.random.default_rng(2)
    X = rng.normal(size=(80, 2))
    y = (X.sum(axis=1) > 0).astype(int)
    first = LinearSvm(epochs=20, seed=3).fit(X, y).to_dict()
    assert first == LinearSvm(epochs=20, seed=3).fit(X, y).to_dict()


def test_svm_handles_constant_feature():
    X = np.hstack([X_TOY, np.ones((8, 1))])
    svm = LinearSvm().fit(X, Y_TOY)
    assert np.isfinite(svm.decision_scores(X)).all()


def test_untrained_classifier():
    with pytest.raises(RuntimeError):
        LinearSvm().predict(X_TOY)


def test_invalid_svm_params():
    with pytest.raises(ValueError):
        LinearSvm(lr=0.0)


@pytest.mark.parametrize("classifier", [DecisionTree(), LinearSvm()])
def test_single_class_training(classifier):
    with pytest.raises(SingleClassTraining):
        classifier.fit(X_TOY, np.zeros(8, dtype=int))


# --- registro y serialización ----------------------------------------------

def test_build_classifier_passes_seed_only_when_used():
    assert build_classifier("svm", {"epochs": 5}, seed=11).seed == 11
    assert isinstance(build_classifier("tree", None, seed=11), DecisionTree)


def test_unknown_algorithm():
    with pytest.raises(UnknownKind):
        build_classifier("forest")


@pytest.mark.parametrize("classifier", [DecisionTree(), LinearSvm(seed=4)])
def test_classifier_serialization(classifier):
    classifier.fit(X_TOY, Y_TOY)
    restored = classifier_from_dict(json.loads(json.dumps(classifier.to_dict())))
    probe = np.linspace(-5.0, 20.0, 26)[:, None]
    assert restored.predict(probe).tolist() == classifier.predict(probe).tolist()


@pytest.mark.parametrize("document", [
    {"kind": "forest", "state": {}},
    {"kind": "tree"},
    {"kind": "svm", "state": {"weights": [1.0], "bias": 0.0, "mean": [0.0, 1.0], "scale": [1.0]}},
])
def test_malformed_classifier(document):
    with pytest.raises(ModelFormatError):
        classifier_from_dict(document)


# --- modelos --------------------------------------------------------------

SPEC = HistogramSpec((0.0, 5.0, 10.0))


def _model(kind=FeatureKind.MEAN):
    baseline = [Distribution([0.5, 0.25, 0.25], SPEC)] if kind == FeatureKind.JSD else []
    return DetectionModel(DecisionTree().fit(X_TOY, Y_TOY), kind, 300.0, SPEC, baseline)


def test_model_round_trip(tmp_path):
    path = save_model(_model(FeatureKind.JSD), tmp_path / "model.json")
    loaded = load_model(path, expected_kind=FeatureKind.JSD)
    assert loaded.algorithm == "tree"
    assert loaded.window == 300.0
    assert loaded.spec == SPEC
    assert loaded.baseline[0].probabilities.tolist() == [0.5, 0.25, 0.25]
    assert loaded.classifier.predict(X_TOY).tolist() == Y_TOY.tolist()


def test_model_kind_mismatch(tmp_path):
    path = save_model(_model(FeatureKind.MEAN), tmp_path / "model.json")
    with pytest.raises(ModelFormatError):
        load_model(path, expected_kind=FeatureKind.JSD)


def test_model_bad_json(tmp_path):
    path = tmp_path / "model.json"
    path.write_text("{not json")
    with pytest.raises(ModelFormatError):
        load_model(path)


def test_model_unsupported_version(tmp_path):
    data = _model().to_dict()
    data["format_version"] = 2
    path = tmp_path / "model.json"
    path.write_text(json.dumps(data))
    with pytest.raises(ModelFormatError):
        load_model(path)


def test_model_missing_field():
    data = _model().to_dict()
    del data["window_s"]
    with pytest.raises(ModelFormatError):
        DetectionModel.from_dict(data)


def test_jsd_model_needs_baseline():
    with pytest.raises(ValueError):
        DetectionModel(DecisionTree().fit(X_TOY, Y_TOY), FeatureKind.JSD, 300.0, SPEC)
