"""
irls.py
Weighted logistic regression by iteratively reweighted least squares with Wald inference
"""
import logging
import warnings
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np
import pandas as pd
from scipy.linalg import LinAlgError, cho_factor, cho_solve
from scipy.special import expit
from scipy.stats import norm

from ..exceptions import ConvergenceError, DesignError, SchemaError, SingularMatrixError

logger = logging.getLogger(__name__)

__all__ = ['FitOptions', 'LogisticModel', 'design_matrix', 'fit_logistic', 'predict_prob', 'wald_ci', 'INTERCEPT']

INTERCEPT = 'intercept'
# |x'b| beyond which a probability is numerically 0 or 1
EtaClip = 35.0
# min(p, 1 - p) below which a fitted probability counts as 0 or 1
SaturationProb = 1e-10
# largest Newton step accepted at a stationary point
StepTolerance = 1e-6


@dataclass(frozen=True)
class FitOptions:
    tolerance: float = 1e-8
    max_iterations: int = 50
    max_step_halvings: int = 30
    ridge: float = 0.0

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError('tolerance must be positive')
        if self.max_iterations < 1:
            raise ValueError('max_iterations must be at least 1')
        if self.ridge < 0:
            raise ValueError('ridge must be non-negative')


@dataclass(frozen=True)
class LogisticModel:
    columns: Tuple[str, ...]
    coef: np.ndarray
    cov: np.ndarray
    converged: bool
    iterations: int
    score_norm: float
    loglik: float
    n: int
    diagnostics: dict = field(default_factory=dict)

    def index(self, name):
        try:
            return self.columns.index(name)
        except ValueError:
            raise SchemaError(name, 'model')

    def coefficient(self, name):
        return float(self.coef[self.index(name)])

    def se(self, name):
        i = self.index(name)
        return float(np.sqrt(max(self.cov[i, i], 0.0)))

    def summary(self, level=0.95):
        """ Coefficient table: estimate, standard error, z and Wald interval on the coefficient scale """
        z_crit = norm.ppf(0.5 + level / 2)
        se = np.sqrt(np.clip(np.diag(self.cov), 0, None))
        with np.errstate(divide='ignore', invalid='ignore'):
            z = np.where(se > 0, self.coef / se, np.nan)
        return pd.DataFrame({
            'coefficient': list(self.columns),
            'estimate': self.coef,
            'se': se,
            'z': z,
            'ci_lo': self.coef - z_crit * se,
            'ci_hi': self.coef + z_crit * se
        })


def design_matrix(frame, columns, intercept=True):
    """ DesignMatrix as a DataFrame: constant intercept column first, then columns """
    columns = list(columns)
    if len(set(columns)) != len(columns):
        raise DesignError('Design matrix column names must be unique: {}'.format(columns))
    for column in columns:
        if column not in frame.columns:
            raise SchemaError(column)
    X = frame[columns].astype(float).reset_index(drop=True)
    if intercept:
        X.insert(0, INTERCEPT, 1.0)
    if not np.isfinite(X.values).all():
        raise DesignError('Design matrix contains non-finite entries in {}'.format(
            ', '.join(c for c in X.columns if not np.isfinite(X[c]).all())))
    return X


def _loglik(eta, y, w):
    return float(np.sum(w * (y * eta - np.logaddexp(0, eta))))


def _collinear_columns(X, w, names):
    """ Columns that do not raise the rank of the weighted design when appended in order """
    Xw = X * np.sqrt(w)[:, None]
    collinear = []
    rank = 0
    for j in range(X.shape[1]):
        new_rank = np.linalg.matrix_rank(Xw[:, [k for k in range(j + 1) if names[k] not in collinear]])
        if new_rank == rank:
            collinear.append(names[j])
        rank = new_rank
    return collinear


def _saturated(p):
    """ Some fitted probability is numerically 0 or 1 """
    return bool(np.any(np.minimum(p, 1 - p) < SaturationProb))


def _diverging(norms):
    """ |beta| still growing over the last iterations """
    return len(norms) >= 3 and norms[-1] > norms[-2] > norms[-3]


def fit_logistic(X, y, w=None, opts=None):
    """ Maximize the w-weighted Bernoulli log-likelihood with logit link

    Parameters
    ----------
    X: pandas.DataFrame
        Design matrix (see design_matrix)
    y: array-like of 0/1
    w: array-like of positive weights, optional
    opts: FitOptions, optional

    Returns
    -------
    LogisticModel
        A fit that does not converge (e.g. under separation) is returned with
        converged=False and diagnostics; it is never silently accepted.
    """
    opts = opts or FitOptions()
    names = tuple(X.columns) if isinstance(X, pd.DataFrame) else tuple('x{}'.format(i) for i in range(X.shape[1]))
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    w = np.ones(len(y)) if w is None else np.asarray(w, dtype=float)

    if X.ndim != 2 or X.shape[0] != len(y) or len(w) != len(y):
        raise DesignError('Dimensions of X {}, y {} and w {} do not agree'.format(X.shape, y.shape, w.shape))
    if not np.isfinite(X).all():
        raise DesignError('Design matrix contains non-finite entries')
    if not np.isin(y, (0, 1)).all():
        raise DesignError('y must be binary')
    if not (w > 0).all():
        raise DesignError('weights must be strictly positive')

    k = X.shape[1]
    penalty = np.full(k, opts.ridge)
    if INTERCEPT in names:
        penalty[names.index(INTERCEPT)] = 0.0
    if opts.ridge == 0:
        collinear = _collinear_columns(X, w, names)
        if collinear:
            raise SingularMatrixError('Singular information matrix', columns=collinear)

    def objective(beta):
        return _loglik(X @ beta, y, w) - 0.5 * np.sum(penalty * beta**2)

    beta = np.zeros(k)
    current = objective(beta)
    converged = False
    diagnostics = {}
    norms = []
    iteration = 0
    factor = None
    for iteration in range(1, opts.max_iterations + 1):
        p = expit(X @ beta)
        score = X.T @ (w * (y - p)) - penalty * beta
        score_norm = float(np.max(np.abs(score)))
        information = (X.T * (w * p * (1 - p))) @ X + np.diag(penalty)
        try:
            factor = cho_factor(information)
        except LinAlgError:
            factor = None
        if factor is None:
            # information collapses once fitted probabilities are pushed to 0 or 1
            if _saturated(p):
                diagnostics['separation'] = True
                break
            raise SingularMatrixError('Singular information matrix', columns=_collinear_columns(X, w, names))

        step = cho_solve(factor, score)
        if not np.isfinite(step).all():
            diagnostics['separation'] = _saturated(p)
            break
        # under separation the score vanishes while the Newton step stays of order one
        if score_norm <= opts.tolerance and np.max(np.abs(step)) <= StepTolerance:
            converged = True
            # the last Newton step is kept when it sharpens the optimum
            polished = beta + step
            polished_norm = float(np.max(np.abs(X.T @ (w * (y - expit(X @ polished))) - penalty * polished)))
            if polished_norm <= score_norm:
                beta, score_norm, current = polished, polished_norm, objective(polished)
            break

        t = 1.0
        for _ in range(opts.max_step_halvings):
            candidate = objective(beta + t * step)
            if candidate >= current - 1e-12 * abs(current):
                break
            t /= 2
        beta = beta + t * step
        current = objective(beta)
        norms.append(float(np.linalg.norm(beta)))
    else:
        p = expit(X @ beta)
        score_norm = float(np.max(np.abs(X.T @ (w * (y - p)) - penalty * beta)))

    if factor is not None:
        cov = cho_solve(factor, np.eye(k))
    else:
        cov = np.full((k, k), np.nan)

    if not converged:
        diagnostics.update({
            'score_norm': score_norm,
            'max_abs_coef': float(np.max(np.abs(beta))),
            'max_abs_linear_predictor': float(np.max(np.abs(X @ beta))),
            'coef_norm_growing': _diverging(norms),
            'iterations': iteration
        })
        if not diagnostics.get('separation'):
            diagnostics['separation'] = _diverging(norms) and _saturated(expit(X @ beta))
        warnings.warn('Logistic fit did not converge: {}'.format(diagnostics))
        logger.warning('Logistic fit did not converge after %d iterations', iteration)

    return LogisticModel(columns=names,
                         coef=beta,
                         cov=cov,
                         converged=converged,
                         iterations=iteration,
                         score_norm=score_norm,
                         loglik=current,
                         n=len(y),
                         diagnostics=diagnostics)


def _linear_predictor(m, x):
    if isinstance(x, pd.DataFrame):
        frame = x.copy()
        if INTERCEPT in m.columns and INTERCEPT not in frame.columns:
            frame[INTERCEPT] = 1.0
        missing = [c for c in m.columns if c not in frame.columns]
        if missing:
            raise SchemaError(missing[0], 'covariate rows')
        return frame[list(m.columns)].to_numpy(dtype=float) @ m.coef
    if isinstance(x, (dict, pd.Series)):
        x = dict(x)
        x.setdefault(INTERCEPT, 1.0)
        missing = [c for c in m.columns if c not in x]
        if missing:
            raise SchemaError(missing[0], 'covariate row')
        return float(np.dot([x[c] for c in m.columns], m.coef))
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != len(m.columns):
        raise ValueError('Expected {} values ({}), got {}'.format(len(m.columns), ', '.join(m.columns), x.shape[-1]))
    return x @ m.coef


def predict_prob(m, x):
    """ logistic(x'beta), strictly inside (0, 1)

    x may be a mapping (intercept added when absent), a DataFrame or an array
    ordered like m.columns
    """
    return expit(np.clip(_linear_predictor(m, x), -EtaClip, EtaClip))


def wald_ci(m, coefficient, level=0.95):
    """ Wald interval exp(beta +- z se) on the odds-ratio scale """
    if not m.converged:
        raise ConvergenceError('Refusing inference from a non-converged fit', diagnostics=m.diagnostics)
    if not 0 < level < 1:
        raise ValueError('level must lie in (0, 1)')
    z = norm.ppf(0.5 + level / 2)
    beta, se = m.coefficient(coefficient), m.se(coefficient)
    return float(np.exp(beta - z * se)), float(np.exp(beta + z * se))
