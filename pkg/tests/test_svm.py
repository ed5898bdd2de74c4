import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from shortattrib.classifiers import LinearSvmModel, svm_predict, svm_train
from shortattrib.classifiers.svm import best_bias, hinge_objective
from shortattrib.errors import DegenerateMatrix
from shortattrib.features import WeightScheme

from conftest import make_matrix

# two classes on disjoint columns: A = {x0 = 1}, B = {x1 = 1}
SEPARABLE = make_matrix([[1, 0], [0, 1], [1, 0], [0, 1]], [0, 1, 0, 1])


def test_separable_toy_fits_training_data():
    model = svm_train(SEPARABLE)
    assert model.predict(SEPARABLE.X).tolist() == [0, 1, 0, 1]


def test_objective_non_increasing_over_last_half():
    for seed in range(5):
        h = svm_train(SEPARABLE, seed=seed).objective_history
        tail = h[len(h) // 2:]
        assert np.all(np.diff(tail, axis=0) <= 1e-15), seed


def test_multiclass_fits_singleton_class():
    m = make_matrix([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 0, 1, 0]],
                    [0, 1, 2, 2, 0, 2])
    assert svm_train(m).predict(m.X).tolist() == [0, 1, 2, 2, 0, 2]


def test_deterministic_bit_for_bit():
    m = make_matrix([[1, 2, 0], [0, 1, 3], [2, 0, 1], [1, 1, 1]], [0, 1, 0, 1], scheme=WeightScheme.TF)
    a, b = svm_train(m, seed=3), svm_train(m, seed=3)
    assert a.weights.tobytes() == b.weights.tobytes() and a.bias.tobytes() == b.bias.tobytes()
    c = svm_train(m, seed=4)
    assert a.weights.shape == c.weights.shape


def test_heavy_regularisation_shrinks_weights():
    small = svm_train(SEPARABLE, lam=1e-3)
    huge = svm_train(SEPARABLE, lam=1e6)
    assert np.linalg.norm(huge.weights) < 1e-5 < np.linalg.norm(small.weights)


def test_one_separator_per_class_and_finite():
    m = make_matrix([[1, 0, 0], [0, 1, 0], [0, 0, 1]], [0, 1, 2])
    model = svm_train(m)
    assert model.weights.shape == (3, 3) and model.bias.shape == (3,)
    assert np.all(np.isfinite(model.weights))
    assert model.objective_history.shape == (model.epochs, 3)


def test_global_row_scale_does_not_change_predictions():
    rows = np.array([[1, 2, 0], [0, 1, 3], [2, 0, 1], [1, 1, 1], [0, 3, 0], [3, 0, 0]], dtype=float)
    labels = [0, 1, 0, 1, 1, 0]
    base = svm_train(make_matrix(rows, labels))
    scaled = svm_train(make_matrix(rows * 1000, labels))
    np.testing.assert_allclose(scaled.weights * 1000, base.weights, rtol=1e-9, atol=1e-12)
    np.testing.assert_allclose(scaled.bias, base.bias, rtol=1e-9, atol=1e-12)


def test_predict_margins():
    model = LinearSvmModel(np.array([[2.0, 0.0], [0.0, -1.0]]), np.zeros(2), 1.0, 1, 0, np.zeros((1, 2)))
    label, margins = svm_predict(model, {0: 1.0, 1: 1.0})
    assert label == 0 and margins.tolist() == [2.0, -1.0]


def test_zero_model_ties_to_class_zero():
    model = LinearSvmModel(np.zeros((3, 2)), np.zeros(3), 1.0, 1, 0, np.zeros((1, 3)))
    assert svm_predict(model, {0: 1.0})[0] == 0
    assert model.predict(SEPARABLE.X).tolist() == [0, 0, 0, 0]


@given(st.floats(0.01, 100))
def test_positive_scaling_keeps_argmax(c):
    W = np.array([[0.3, -1.2], [0.5, 0.4], [-0.2, 0.9]])
    b = np.array([0.1, -0.3, 0.2])
    a = LinearSvmModel(W, b, 1.0, 1, 0, np.zeros((1, 3)))
    s = LinearSvmModel(W * c, b * c, 1.0, 1, 0, np.zeros((1, 3)))
    for row in ({0: 1.0}, {1: 2.0}, {0: 0.5, 1: 0.5}, {}):
        assert svm_predict(a, row)[0] == svm_predict(s, row)[0]


def test_rejects_bad_arguments():
    with pytest.raises(ValueError):
        svm_train(SEPARABLE, lam=0)
    with pytest.raises(ValueError):
        svm_train(SEPARABLE, epochs=0)
    with pytest.raises(DegenerateMatrix):
        svm_train(make_matrix([[1, 0], [0, 1]], [0, 0], k=2))


def test_predict_is_pure():
    model = svm_train(SEPARABLE)
    w = model.weights.copy()
    first = model.decision_matrix(SEPARABLE.X)
    assert np.array_equal(first, model.decision_matrix(SEPARABLE.X))
    assert np.array_equal(w, model.weights)
    assert not model.weights.flags.writeable


def _hinge(s, y, b):
    return sum(max(0.0, 1.0 - yi * (si - b)) for si, yi in zip(s, y))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.floats(-5, 5), st.sampled_from([-1.0, 1.0])), min_size=1, max_size=20))
def test_best_bias_minimises_hinge(pairs):
    s = np.array([p[0] for p in pairs])
    y = np.array([p[1] for p in pairs])
    b = best_bias(s, y)
    kinks = [si - yi for si, yi in zip(s, y)]
    grid = kinks + list(np.linspace(-8, 8, 161))
    assert _hinge(s, y, b) <= min(_hinge(s, y, g) for g in grid) + 1e-9


def test_hinge_objective_by_hand():
    W = np.array([[1.0, 0.0]])
    X = SEPARABLE.X
    signs = np.array([[1.0], [-1.0], [1.0], [-1.0]])
    # margins: 1, 0, 1, 0 -> hinge 0, 1, 0, 1 -> mean 0.5; reg 0.5 * 0.1 * 1
    assert hinge_objective(W, np.zeros(1), X, signs, 0.1).tolist() == [pytest.approx(0.55)]
