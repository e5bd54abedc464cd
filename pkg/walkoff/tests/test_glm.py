"""
Weighted logistic regression by IRLS
"""
import numpy as np
import pandas as pd
import pytest
from numpy.testing import assert_allclose
from scipy.special import expit
from sklearn.linear_model import LogisticRegression

from walkoff.exceptions import ConvergenceError, DesignError, SchemaError, SingularMatrixError, WalkoffError
from walkoff.glm import FitOptions, design_matrix, fit_logistic, predict_prob, wald_ci


def two_by_two(a, n1, c, n0):
    """ a wins out of n1 treated, c wins out of n0 untreated """
    A = [1] * n1 + [0] * n0
    Y = [1] * a + [0] * (n1 - a) + [1] * c + [0] * (n0 - c)
    return pd.DataFrame({'A': A, 'Y': Y})


def random_frame(n=400, seed=11):
    rng = np.random.default_rng(seed)
    frame = pd.DataFrame({'ops': rng.normal(0.75, 0.1, n), 'sac_rate': rng.exponential(1.0, n),
                          'era': rng.normal(4.2, 1.0, n)})
    eta = -1 + 2 * (frame['ops'] - 0.75) + 0.6 * frame['sac_rate'] - 0.2 * (frame['era'] - 4.2)
    frame['A'] = rng.binomial(1, 1 / (1 + np.exp(-eta)))
    return frame


@pytest.mark.fast
def test_intercept_only():
    X = design_matrix(pd.DataFrame({'y': [0, 1, 0, 1]}), [])
    m = fit_logistic(X, [0, 1, 0, 1])
    assert m.converged
    assert m.coefficient('intercept') == pytest.approx(0, abs=1e-12)
    assert m.columns == ('intercept', )


@pytest.mark.fast
def test_saturated_two_by_two():
    frame = two_by_two(39, 53, 111, 196)
    m = fit_logistic(design_matrix(frame, ['A']), frame['Y'])
    log_or = np.log((39 / 14) / (111 / 85))
    assert m.converged
    assert m.coefficient('A') == pytest.approx(log_or, abs=1e-8)
    assert m.se('A') == pytest.approx(np.sqrt(1 / 39 + 1 / 14 + 1 / 111 + 1 / 85), rel=1e-6)
    assert m.coefficient('intercept') == pytest.approx(np.log(111 / 85), abs=1e-8)
    assert m.score_norm <= 1e-8

    lo, hi = wald_ci(m, 'A')
    assert lo < np.exp(log_or) < hi
    assert np.log(hi) - log_or == pytest.approx(1.959964 * m.se('A'), rel=1e-5)


@pytest.mark.fast
def test_doubling_weights_halves_covariance():
    frame = random_frame()
    X = design_matrix(frame, ['ops', 'sac_rate', 'era'])
    single = fit_logistic(X, frame['A'])
    double = fit_logistic(X, frame['A'], w=np.full(len(frame), 2.0))
    assert_allclose(double.coef, single.coef, atol=1e-7)
    assert_allclose(double.cov, single.cov / 2, rtol=1e-6)


@pytest.mark.fast
def test_integer_weights_match_duplication():
    frame = random_frame(n=200)
    counts = np.random.default_rng(3).integers(1, 4, len(frame))
    weighted = fit_logistic(design_matrix(frame, ['ops', 'sac_rate']), frame['A'], w=counts)
    repeated = frame.loc[frame.index.repeat(counts)]
    expanded = fit_logistic(design_matrix(repeated, ['ops', 'sac_rate']), repeated['A'])
    assert_allclose(weighted.coef, expanded.coef, atol=1e-7)
    assert_allclose(weighted.cov, expanded.cov, rtol=1e-6)


@pytest.mark.fast
def test_agrees_with_sklearn():
    frame = random_frame()
    columns = ['ops', 'sac_rate', 'era']
    w = np.random.default_rng(5).uniform(0.5, 2.0, len(frame))
    m = fit_logistic(design_matrix(frame, columns), frame['A'], w=w)
    reference = LogisticRegression(C=1e12, solver='newton-cg', tol=1e-12, max_iter=1000)
    reference.fit(frame[columns], frame['A'], sample_weight=w)
    assert_allclose(m.coef[0], reference.intercept_[0], atol=1e-4)
    assert_allclose(m.coef[1:], reference.coef_[0], atol=1e-4)


@pytest.mark.fast
def test_separation_is_reported():
    frame = pd.DataFrame({'x': [-1., -1., -1., 1., 1., 1.], 'y': [0, 0, 0, 1, 1, 1]})
    X = design_matrix(frame, ['x'])
    with pytest.warns(UserWarning):
        m = fit_logistic(X, frame['y'])
    assert not m.converged
    assert m.diagnostics['separation']
    with pytest.raises(ConvergenceError):
        wald_ci(m, 'x')

    ridge = fit_logistic(X, frame['y'], opts=FitOptions(ridge=1.0))
    assert ridge.converged
    assert 0 < ridge.coefficient('x') < 10


@pytest.mark.fast
def test_wide_range_covariate_is_not_separation():
    rng = np.random.default_rng(23)
    frame = pd.DataFrame({'x': rng.uniform(-20, 20, 2000)})
    frame['y'] = rng.binomial(1, expit(frame['x']))
    X = design_matrix(frame, ['x'])
    m = fit_logistic(X, frame['y'])
    # fitted linear predictors reach far past the saturation of single probabilities
    assert np.max(np.abs(X.to_numpy() @ m.coef)) > 15
    assert m.converged
    assert 'separation' not in m.diagnostics
    assert m.score_norm <= 1e-8
    assert m.coefficient('x') == pytest.approx(1.0, abs=0.25)
    lo, hi = wald_ci(m, 'x')
    assert lo < np.exp(m.coefficient('x')) < hi


@pytest.mark.fast
def test_predictions_invariant_to_row_order_and_rescaling():
    frame = random_frame()
    columns = ['ops', 'sac_rate', 'era']
    X = design_matrix(frame, columns)
    m = fit_logistic(X, frame['A'])
    expected = predict_prob(m, X)

    shuffled = frame.iloc[np.random.default_rng(2).permutation(len(frame))]
    permuted = fit_logistic(design_matrix(shuffled, columns), shuffled['A'])
    assert_allclose(predict_prob(permuted, X), expected, rtol=0, atol=1e-10)

    rescaled = frame.assign(ops=10 * frame['ops'] - 7, era=0.5 * frame['era'] + 3)
    X_rescaled = design_matrix(rescaled, columns)
    affine = fit_logistic(X_rescaled, rescaled['A'])
    assert_allclose(predict_prob(affine, X_rescaled), expected, rtol=0, atol=1e-10)
    assert 10 * affine.coefficient('ops') == pytest.approx(m.coefficient('ops'), rel=1e-8)


@pytest.mark.fast
def test_mean_prediction_matches_outcome_rate():
    frame = random_frame(n=300, seed=4)
    X = design_matrix(frame, ['ops', 'sac_rate', 'era'])
    m = fit_logistic(X, frame['A'])
    assert m.converged
    assert np.mean(predict_prob(m, X)) == pytest.approx(frame['A'].mean(), abs=1e-10)


@pytest.mark.fast
def test_collinear_columns():
    frame = random_frame(n=50)
    frame['double_ops'] = 2 * frame['ops']
    with pytest.raises(SingularMatrixError) as excinfo:
        fit_logistic(design_matrix(frame, ['ops', 'double_ops']), frame['A'])
    assert excinfo.value.columns == ['double_ops']


@pytest.mark.fast
@pytest.mark.parametrize(['y', 'w'], [
    ([0, 1, 2], None),
    ([0, 1, 1], [1.0, 0.0, 1.0]),
    ([0, 1], None),
])
def test_invalid_inputs(y, w):
    X = design_matrix(pd.DataFrame({'x': [0.1, 0.5, 0.9]}), ['x'])
    with pytest.raises(ValueError):
        fit_logistic(X, y, w)


@pytest.mark.fast
def test_design_matrix():
    frame = pd.DataFrame({'ops': [0.7, 0.8], 'era': [3.0, 4.0]})
    X = design_matrix(frame, ['ops', 'era'])
    assert list(X.columns) == ['intercept', 'ops', 'era']
    assert (X['intercept'] == 1).all()
    with pytest.raises(SchemaError):
        design_matrix(frame, ['sac_rate'])
    with pytest.raises(DesignError) as excinfo:
        design_matrix(pd.DataFrame({'ops': [0.7, np.nan], 'era': [3.0, 4.0]}), ['ops', 'era'])
    assert isinstance(excinfo.value, WalkoffError)
    assert 'ops' in str(excinfo.value) and 'era' not in str(excinfo.value)
    with pytest.raises(ValueError):
        design_matrix(frame, ['ops', 'ops'])


@pytest.mark.fast
def test_predict_prob():
    frame = two_by_two(39, 53, 111, 196)
    m = fit_logistic(design_matrix(frame, ['A']), frame['Y'])
    assert predict_prob(m, {'A': 1}) == pytest.approx(39 / 53)
    assert_allclose(predict_prob(m, pd.DataFrame({'A': [0, 1]})), [111 / 196, 39 / 53])
    assert predict_prob(m, [1.0, 1.0]) == pytest.approx(39 / 53)
    extreme = predict_prob(m, {'A': 1e6})
    assert 0 < extreme < 1
    with pytest.raises(SchemaError):
        predict_prob(m, {'B': 1})


@pytest.mark.fast
def test_options_and_levels():
    with pytest.raises(ValueError):
        FitOptions(tolerance=0)
    with pytest.raises(ValueError):
        FitOptions(ridge=-1)
    frame = two_by_two(39, 53, 111, 196)
    m = fit_logistic(design_matrix(frame, ['A']), frame['Y'])
    with pytest.raises(ValueError):
        wald_ci(m, 'A', level=1.0)
    summary = m.summary(0.9)
    assert list(summary['coefficient']) == ['intercept', 'A']
    assert summary.loc[1, 'ci_lo'] < summary.loc[1, 'estimate'] < summary.loc[1, 'ci_hi']
