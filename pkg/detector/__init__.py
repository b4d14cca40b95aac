"""Detección de relés MITM a partir de los tiempos entre llegadas de telegramas."""

from .classifiers import CLASSIFIERS, BaseClassifier, DecisionTree, LinearSvm, build_classifier, classifier_from_dict
from .dataset import DEFAULT_TRAIN_FRACTION, LABEL_VALUES, Dataset, label_value, stratified_split
from .errors import (
    DetectorError,
    EmptyResult,
    EmptySegment,
    ModelFormatError,
    SingleClassTraining,
    SpecMismatch,
    TooFewRecords,
)
from .features import (
    DEFAULT_BINS,
    DEFAULT_QUANTILE,
    Distribution,
    FeatureKind,
    FeatureVector,
    HistogramSpec,
    InterArrivalSegment,
    feature_vectors,
    inter_arrivals,
    jsd,
    jsd_feature_vector,
    jsd_matrix,
    kl,
    moment_features,
    segment,
    window_count,
)
from .model_store import FORMAT_VERSION, DetectionModel, load_model, save_model
from .pipeline import (
    ALL_ALGORITHMS,
    ALL_FEATURES,
    DEFAULT_WINDOWS_MIN,
    SUITE_COLUMNS,
    VERDICT_COLUMNS,
    Verdict,
    WindowExperiment,
    build_window_experiment,
    detect,
    evaluate,
    run_detection_suite,
    train,
    train_model,
    verdicts_frame,
    write_verdicts,
)

__all__ = [
    "ALL_ALGORITHMS", "ALL_FEATURES", "BaseClassifier", "CLASSIFIERS", "DEFAULT_BINS", "DEFAULT_QUANTILE",
    "DEFAULT_TRAIN_FRACTION", "Dataset", "DecisionTree", "DetectionModel", "DetectorError", "Distribution",
    "EmptyResult", "EmptySegment", "FORMAT_VERSION", "FeatureKind", "FeatureVector", "HistogramSpec",
    "InterArrivalSegment", "LABEL_VALUES", "LinearSvm", "ModelFormatError", "DEFAULT_WINDOWS_MIN",
    "SUITE_COLUMNS", "SingleClassTraining", "SpecMismatch", "TooFewRecords", "VERDICT_COLUMNS", "Verdict",
    "WindowExperiment", "build_classifier", "build_window_experiment", "classifier_from_dict", "detect",
    "evaluate", "feature_vectors", "inter_arrivals", "jsd", "jsd_feature_vector", "jsd_matrix", "kl",
    "label_value", "load_model", "moment_features", "run_detection_suite", "save_model", "segment",
    "stratified_split", "train", "train_model", "verdicts_frame", "window_count", "write_verdicts",
]
