import math

import numpy as np
import pytest
from scipy.stats import norm

from gda_lab import (
    DimensionMismatchError,
    EmptyDatasetError,
    LabeledDataset,
    LabeledPoint,
    LinearClassifier,
    Loss,
    MixtureParams,
    RiskReport,
    Source,
    empirical_risk,
    fit_erm,
    mc_true_risk,
    nll_loss,
    sample_dataset,
    zero_one_error,
)


def _dataset(x_rows, labels):
    return LabeledDataset(x=x_rows, y=labels, source=[0] * len(labels))


def test_fit_erm_two_point_example():
    clf = fit_erm(_dataset([[2.0, 0.0], [0.0, 2.0]], [1, -1]), 0.36)
    np.testing.assert_array_equal(clf.theta, np.array([1.0, -1.0]))


def test_fit_erm_single_point():
    clf = fit_erm(_dataset([[1.0, 0.0]], [-1]), 0.36)
    np.testing.assert_array_equal(clf.theta, np.array([-1.0, 0.0]))


def test_fit_erm_matches_direct_resummation():
    data = sample_dataset(MixtureParams.standard(3, 0.36), 100, seed=21)
    clf = fit_erm(data, 0.36)
    direct = np.zeros(3)
    for point in data:
        direct = direct + point.y * point.x
    direct /= len(data)
    np.testing.assert_allclose(clf.theta, direct, rtol=0, atol=1e-14)


def test_fit_erm_consistency():
    # E[theta] equals the true mean; tolerance 3 * sigma / sqrt(n)
    data = sample_dataset(MixtureParams.standard(1, 0.36), 100_000, seed=23)
    clf = fit_erm(data, 0.36)
    assert abs(float(clf.theta[0]) - 1.0) <= 0.006


def test_fit_erm_rejects_empty():
    empty = sample_dataset(MixtureParams.standard(1, 0.36), 0, seed=1)
    with pytest.raises(EmptyDatasetError):
        fit_erm(empty, 0.36)


def test_fit_erm_scaling_linearity():
    data = sample_dataset(MixtureParams.standard(2, 0.36), 64, seed=29)
    clf = fit_erm(data, 0.36)
    # powers of two rescale mantissas exactly
    doubled = LabeledDataset(x=2.0 * data.x, y=data.y, source=data.source)
    np.testing.assert_array_equal(fit_erm(doubled, 0.36).theta, 2.0 * clf.theta)
    scaled = LabeledDataset(x=1.7 * data.x, y=data.y, source=data.source)
    np.testing.assert_allclose(fit_erm(scaled, 0.36).theta, 1.7 * clf.theta, rtol=1e-12)


def test_fit_erm_permutation_behaviour():
    data = sample_dataset(MixtureParams.standard(2, 0.36), 101, seed=31)
    rng = np.random.default_rng(0)
    perm = rng.permutation(len(data))
    shuffled = LabeledDataset(x=data.x[perm], y=data.y[perm], source=data.source[perm])
    # canonical reordering restores bit-identical sums
    order_a = np.lexsort(np.vstack([data.x.T, data.y]))
    order_b = np.lexsort(np.vstack([shuffled.x.T, shuffled.y]))
    canon_a = LabeledDataset(x=data.x[order_a], y=data.y[order_a], source=data.source[order_a])
    canon_b = LabeledDataset(
        x=shuffled.x[order_b], y=shuffled.y[order_b], source=shuffled.source[order_b]
    )
    assert fit_erm(canon_a, 0.36).theta.tobytes() == fit_erm(canon_b, 0.36).theta.tobytes()
    # raw shuffles agree to rounding noise
    np.testing.assert_allclose(
        fit_erm(shuffled, 0.36).theta, fit_erm(data, 0.36).theta, rtol=0, atol=1e-12
    )


def test_nll_loss_examples():
    clf = LinearClassifier(theta=np.array([2.0, -1.0]), noise_var=0.5)
    exact = LabeledPoint(x=np.array([2.0, -1.0]), y=1, source=Source.REAL)
    assert nll_loss(clf, exact) == 0.0
    clf1 = LinearClassifier(theta=np.array([0.0]), noise_var=0.5)
    assert nll_loss(clf1, LabeledPoint(x=np.array([1.0]), y=1, source=Source.REAL)) == 1.0
    clf2 = LinearClassifier(theta=np.array([1.0, -1.0]), noise_var=0.36)
    loss = nll_loss(clf2, LabeledPoint(x=np.array([2.0, 0.0]), y=1, source=Source.REAL))
    assert loss == pytest.approx(2.0 / 0.72, abs=1e-12)


def test_nll_loss_dimension_mismatch():
    clf = LinearClassifier(theta=np.array([1.0, 0.0]), noise_var=0.36)
    with pytest.raises(DimensionMismatchError):
        nll_loss(clf, LabeledPoint(x=np.array([1.0]), y=1, source=Source.REAL))


def test_empirical_risk_examples():
    clf = LinearClassifier(theta=np.array([1.0]), noise_var=0.5)
    zero = _dataset([[1.0]], [1])
    assert empirical_risk(clf, zero, Loss.NLL) == 0.0
    # losses 1.0 and 3.0 under theta=0, noise_var=0.5
    clf0 = LinearClassifier(theta=np.array([0.0]), noise_var=0.5)
    pair = _dataset([[1.0], [math.sqrt(3.0)]], [1, 1])
    assert empirical_risk(clf0, pair, Loss.NLL) == pytest.approx(2.0, abs=1e-12)


def test_empirical_risk_brute_force_oracle():
    data = sample_dataset(MixtureParams.standard(4, 0.36), 100, seed=37)
    clf = fit_erm(data, 0.36)
    total = 0.0
    for point in data:
        residual = point.x - point.y * clf.theta
        total += float(residual @ residual) / (2.0 * 0.36)
    assert empirical_risk(clf, data, Loss.NLL) == pytest.approx(total / 100, abs=1e-12)
    flips = sum(
        1 for point in data if (1 if float(point.x @ clf.theta) > 0 else -1) != point.y
    )
    assert empirical_risk(clf, data, Loss.ZERO_ONE) == pytest.approx(flips / 100, abs=1e-15)
    assert empirical_risk(clf, data, Loss.ZERO_ONE) == zero_one_error(clf.theta, data)


def test_empirical_risk_empty():
    clf = LinearClassifier(theta=np.array([1.0]), noise_var=0.36)
    empty = sample_dataset(MixtureParams.standard(1, 0.36), 0, seed=1)
    with pytest.raises(EmptyDatasetError):
        empirical_risk(clf, empty, Loss.NLL)


def test_mc_true_risk_degenerate_noise():
    params = MixtureParams.standard(2, 1e-12)
    train = sample_dataset(params, 20, seed=41)
    clf = fit_erm(train, params.noise_var)
    assert mc_true_risk(clf, params, 1000, seed=43, loss_kind=Loss.ZERO_ONE) == 0.0


def test_mc_true_risk_zero_classifier():
    # sign(0) = -1 misclassifies every +1 point: risk is the +1 mass, about half
    params = MixtureParams.standard(3, 0.36)
    clf = LinearClassifier(theta=np.zeros(3), noise_var=0.36)
    n = 100_000
    risk = mc_true_risk(clf, params, n, seed=47, loss_kind=Loss.ZERO_ONE)
    assert abs(risk - 0.5) <= 3.0 / math.sqrt(n)


def test_mc_true_risk_gaussian_tail_oracle():
    # P(sign error) for theta = mean at d=1 equals the normal tail at -1/sigma
    params = MixtureParams.standard(1, 0.36)
    clf = LinearClassifier(theta=np.array([1.0]), noise_var=0.36)
    risk = mc_true_risk(clf, params, 1_000_000, seed=53, loss_kind=Loss.ZERO_ONE)
    assert abs(risk - float(norm.cdf(-1.0 / 0.6))) <= 0.001


def test_mc_true_risk_deterministic():
    params = MixtureParams.standard(1, 0.36)
    clf = LinearClassifier(theta=np.array([0.8]), noise_var=0.36)
    a = mc_true_risk(clf, params, 5000, seed=59)
    b = mc_true_risk(clf, params, 5000, seed=59)
    assert a == b


def test_erm_optimality_against_random_probes():
    data = sample_dataset(MixtureParams.standard(3, 0.36), 50, seed=61)
    fitted = fit_erm(data, 0.36)
    best = empirical_risk(fitted, data, Loss.NLL)
    rng = np.random.default_rng(67)
    for _ in range(100):
        probe = LinearClassifier(theta=fitted.theta + rng.normal(size=3), noise_var=0.36)
        assert best <= empirical_risk(probe, data, Loss.NLL)


def test_risk_report():
    report = RiskReport.from_risks(0.25, 0.75, Loss.NLL)
    assert report.gen_error == 0.5
    swapped = RiskReport.from_risks(0.75, 0.25, Loss.NLL)
    assert swapped.gen_error == report.gen_error
    with pytest.raises(ValueError):
        RiskReport(train_risk=0.1, test_risk=0.2, gen_error=0.5, loss_kind=Loss.NLL)
