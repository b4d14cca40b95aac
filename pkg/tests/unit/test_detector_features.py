"""Pruebas de segmentación, histogramas y divergencias."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bus_sim import CaptureRecord, CaptureSeries, Origin
from detector import (
    Distribution,
    EmptyResult,
    EmptySegment,
    FeatureKind,
    HistogramSpec,
    InterArrivalSegment,
    SpecMismatch,
    TooFewRecords,
    feature_vectors,
    inter_arrivals,
    jsd,
    jsd_feature_vector,
    jsd_matrix,
    kl,
    moment_features,
    segment,
)


def _capture(timestamps, start=0.0, end=None, origin=Origin.UNLABELED):
    records = [CaptureRecord(float(t), 0, b"") for t in timestamps]
    return CaptureSeries(records, origin, start, end)


# --- tiempos entre llegadas y ventanas -------------------------------------

def test_inter_arrivals():
    assert inter_arrivals(_capture([0, 1, 3, 6])).tolist() == [1, 2, 3]


def test_constant_period():
    values = inter_arrivals(_capture(np.arange(0.0, 600.0, 60.0)))
    assert np.allclose(values, 60.0)


def test_too_few_records():
    with pytest.raises(TooFewRecords):
        inter_arrivals(_capture([1.0]))


def test_twenty_minute_windows_over_an_hour():
    segments = segment(_capture(np.arange(0.0, 3600.0, 7.0), end=3600.0), 1200.0)
    assert len(segments) == 3
    assert [seg.start for seg in segments] == [0.0, 1200.0, 2400.0]


def test_day_in_five_minute_windows():
    assert len(segment(_capture([0.0, 10.0], end=86400.0), 300.0)) == 288


def test_window_larger_than_span():
    with pytest.raises(EmptyResult):
        segment(_capture([0.0, 10.0], end=100.0), 300.0)


def test_trailing_partial_window_is_dropped():
    segments = segment(_capture(np.arange(0.0, 1000.0, 10.0), end=1000.0), 300.0)
    assert len(segments) == 3
    assert all(seg.window == 300.0 for seg in segments)


def test_inter_arrival_stays_in_its_window():
    segments = segment(_capture([10.0, 20.0, 110.0, 150.0, 190.0], end=200.0), 100.0)
    assert segments[0].values.tolist() == [10.0]
    assert segments[1].values.tolist() == [40.0, 40.0]


def test_segments_inherit_origin():
    segments = segment(_capture([0.0, 1.0, 2.0], end=10.0, origin=Origin.ATTACK), 5.0)
    assert {seg.label for seg in segments} == {Origin.ATTACK}


def test_negative_inter_arrival_is_rejected():
    with pytest.raises(ValueError):
        InterArrivalSegment(np.array([1.0, -0.5]), 60.0, 0.0)


# --- histograma -----------------------------------------------------------

def test_spec_from_baseline_has_overflow_bin():
    values = np.linspace(0.0, 100.0, 1001)
    spec = HistogramSpec.from_baseline(values, bins=50, quantile=99.0)
    assert spec.n_bins == 51
    assert spec.edges[0] == 0.0
    assert spec.edges[-1] == pytest.approx(99.0)
    counts = spec.histogram([0.0, 98.9, 99.5, 1e6])
    assert counts[0] == 1
    assert counts[-1] == 2
    assert counts.sum() == 4


def test_spec_needs_increasing_edges():
    with pytest.raises(ValueError):
        HistogramSpec((0.0, 1.0, 1.0))
    with pytest.raises(ValueError):
        HistogramSpec((0.0,))


def test_spec_serialization():
    spec = HistogramSpec((0.0, 0.5, 1.0))
    assert HistogramSpec.from_dict(spec.to_dict()) == spec


def test_distribution_is_normalized():
    spec = HistogramSpec.from_baseline(np.random.default_rng(0).exponential(1.0, 500))
    dist = Distribution.from_values(np.random.default_rng(1).exponential(1.0, 333), spec)
    assert abs(dist.probabilities.sum() - 1.0) <= 1e-12
    assert dist.probabilities.size == spec.n_bins


def test_distribution_sum_tolerance():
    with pytest.raises(ValueError):
        Distribution(np.array([0.5, 0.5 + 1e-10]))
    assert Distribution(np.array([0.5, 0.5 - 1e-14])).probabilities.size == 2


def test_empty_distribution():
    with pytest.raises(EmptySegment):
        Distribution.from_values([], HistogramSpec((0.0, 1.0)))


# --- divergencias ---------------------------------------------------------

def test_jsd_reference_values():
    assert jsd([1.0, 0.0], [0.5, 0.5]) == pytest.approx(0.311278124459133, abs=1e-9)
    assert kl([0.5, 0.5], [0.25, 0.75]) == pytest.approx(0.207518749639422, abs=1e-9)


def test_jsd_extremes():
    assert jsd([0.2, 0.3, 0.5], [0.2, 0.3, 0.5]) == 0.0
    assert jsd([1.0, 0.0], [0.0, 1.0]) == 1.0
    assert jsd([0.5, 0.5, 0.0, 0.0], [0.0, 0.0, 0.25, 0.75]) == 1.0


def test_kl_ignores_empty_bins_of_p():
    assert kl([1.0, 0.0], [0.5, 0.5]) == pytest.approx(1.0)


def test_jsd_needs_shared_histogram():
    first = Distribution.from_values([0.1, 0.2], HistogramSpec((0.0, 0.15)))
    second = Distribution.from_values([0.1, 0.2], HistogramSpec((0.0, 0.05)))
    with pytest.raises(SpecMismatch):
        jsd(first, second)
    with pytest.raises(SpecMismatch):
        jsd([0.5, 0.5], [1.0, 0.0, 0.0])


def _normalized(weights):
    weights = np.asarray(weights, dtype=float)
    return weights / weights.sum()


probability_pairs = st.integers(2, 12).flatmap(lambda n: st.tuples(
    st.lists(st.floats(0.0, 1.0), min_size=n, max_size=n).filter(lambda w: sum(w) > 1e-6),
    st.lists(st.floats(0.0, 1.0), min_size=n, max_size=n).filter(lambda w: sum(w) > 1e-6),
))


@settings(max_examples=1000, deadline=None)
@given(probability_pairs)
def test_jsd_axioms(pair):
    p, q = (_normalized(w) for w in pair)
    forward, backward = jsd(p, q), jsd(q, p)
    assert abs(forward - backward) < 1e-12
    assert 0.0 <= forward <= 1.0
    assert jsd(p, p) == 0.0
    if not np.any((p > 0) & (q > 0)):
        assert forward == 1.0


def test_jsd_matrix_matches_pairwise():
    rng = np.random.default_rng(3)
    rows = rng.dirichlet(np.ones(6), size=4)
    columns = rng.dirichlet(np.ones(6), size=3)
    matrix = jsd_matrix(rows, columns)
    assert matrix.shape == (4, 3)
    for i in range(4):
        for j in range(3):
            assert matrix[i, j] == pytest.approx(jsd(rows[i], columns[j]), abs=1e-12)


# --- vectores de características --------------------------------------------

@pytest.fixture
def reference():
    rng = np.random.default_rng(11)
    segments = [InterArrivalSegment(rng.exponential(2.0, 80), 600.0, 600.0 * k, Origin.NO_ATTACK) for k in range(5)]
    spec = HistogramSpec.from_baseline(np.concatenate([seg.values for seg in segments]), bins=20)
    return segments, spec, [Distribution.from_values(seg.values, spec) for seg in segments]


def test_jsd_vector_against_itself(reference):
    segments, spec, baseline = reference
    vector = jsd_feature_vector(segments[2], baseline, spec)
    assert vector.values.size == len(baseline)
    assert vector.values[2] == 0.0
    assert np.all((vector.values >= 0.0) & (vector.values <= 1.0))
    assert vector.label == Origin.NO_ATTACK


def test_batched_jsd_matches_single(reference):
    segments, spec, baseline = reference
    batch = feature_vectors(segments, FeatureKind.JSD, baseline)
    for seg, vector in zip(segments, batch):
        assert np.allclose(vector.values, jsd_feature_vector(seg, baseline).values, rtol=0.0, atol=1e-12)


def test_jsd_vector_rejects_mixed_references(reference):
    segments, spec, baseline = reference
    other = Distribution.from_values(segments[0].values, HistogramSpec.from_baseline(segments[0].values, bins=5))
    with pytest.raises(SpecMismatch):
        jsd_feature_vector(segments[0], baseline + [other])


def test_jsd_needs_reference(reference):
    segments, _, _ = reference
    with pytest.raises(ValueError):
        feature_vectors(segments, FeatureKind.JSD, [])


@pytest.mark.parametrize("values, mean, variance", [([2.0, 2.0, 2.0], 2.0, 0.0), ([1.0, 3.0], 2.0, 2.0)])
def test_moments(values, mean, variance):
    seg = InterArrivalSegment(np.array(values), 60.0, 0.0)
    assert moment_features(seg, FeatureKind.MEAN).values.tolist() == [mean]
    assert moment_features(seg, FeatureKind.VARIANCE).values.tolist() == [variance]
    assert moment_features(seg, FeatureKind.MEAN_VAR).values.tolist() == [mean, variance]


def test_moments_of_empty_segment():
    with pytest.raises(EmptySegment):
        moment_features(InterArrivalSegment(np.array([]), 60.0, 0.0))


@settings(deadline=None)
@given(
    st.lists(st.floats(0.001, 100.0), min_size=2, max_size=50),
    st.floats(0.01, 100.0),
)
def test_moment_scale_equivariance(values, factor):
    seg = InterArrivalSegment(np.array(values), 60.0, 0.0)
    scaled = InterArrivalSegment(np.array(values) * factor, 60.0, 0.0)
    mean, variance = moment_features(seg).values
    scaled_mean, scaled_variance = moment_features(scaled).values
    assert math.isclose(scaled_mean, factor * mean, rel_tol=1e-9)
    assert math.isclose(scaled_variance, factor ** 2 * variance, rel_tol=1e-6, abs_tol=1e-9)
