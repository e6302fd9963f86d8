"""Damped Gauss-Newton nonlinear least squares."""

from dataclasses import dataclass, field

import numpy as np

from ..errors import Diverged, OutOfDomain
from .linalg import back_substitute, householder_qr

MAX_HALVINGS = 20
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class FitProblem:
    xs: np.ndarray
    ys: np.ndarray
    theta0: np.ndarray
    tol: float = 1e-12
    max_iter: int = 200

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=float)
        ys = np.asarray(self.ys, dtype=float).ravel()
        theta0 = np.asarray(self.theta0, dtype=float).ravel()
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)
        object.__setattr__(self, "theta0", theta0)
        if len(xs) != len(ys):
            raise ValueError(f"xs has {len(xs)} samples but ys has {len(ys)}")
        if len(ys) < len(theta0):
            raise ValueError(f"need at least {len(theta0)} samples, got {len(ys)}")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
            raise ValueError("data must be finite")


@dataclass(frozen=True)
class FitResult:
    theta: np.ndarray
    sse: float
    iterations: int
    converged: bool
    sse_history: tuple = field(default=(), repr=False)


def _sse(model, xs, ys, theta):
    try:
        with np.errstate(all="ignore"):
            r = ys - model.value(xs, theta)
            s = float(r @ r)
    except (ArithmeticError, OutOfDomain):
        return np.inf
    return s if np.isfinite(s) else np.inf


def gauss_newton_fit(model, problem):
    """Fit ``model`` to ``problem`` by Gauss-Newton with step halving.

    ``model`` needs ``value(xs, theta)`` and ``jacobian(xs, theta)``; the
    latter returns the N x P matrix of partials. Each increment solves
    ``R1 delta = Q1^T z`` from a Householder QR of the Jacobian. Steps are
    halved up to 20 times until the residual sum of squares drops.
    """
    xs, ys = problem.xs, problem.ys
    theta = problem.theta0.copy()
    sse = _sse(model, xs, ys, theta)
    if not np.isfinite(sse):
        raise ValueError("initial coefficients give a non-finite residual")
    history = [sse]
    # Residual indistinguishable from round-off in the responses.
    floor = len(ys) * (16 * _EPS * max(float(np.max(np.abs(ys))), 1e-300)) ** 2

    def done(it, converged):
        return FitResult(theta, sse, it, converged, tuple(history))

    if sse <= floor:
        return done(0, True)

    for it in range(1, problem.max_iter + 1):
        z = ys - model.value(xs, theta)
        q1, r1 = householder_qr(model.jacobian(xs, theta))
        delta = back_substitute(r1, q1.T @ z)
        if np.linalg.norm(delta) < 1e-14 * np.linalg.norm(theta):
            return done(it - 1, True)

        step = 1.0
        for _ in range(MAX_HALVINGS + 1):
            trial = theta + step * delta
            trial_sse = _sse(model, xs, ys, trial)
            if trial_sse < sse:
                break
            step *= 0.5
        else:
            if sse <= floor:
                return done(it - 1, True)
            raise Diverged(f"no step in the halving schedule reduced SSE at iteration {it}")

        rel = (sse - trial_sse) / sse
        theta, sse = trial, trial_sse
        history.append(sse)
        if rel < problem.tol or sse <= floor:
            return done(it, True)
    return done(problem.max_iter, False)
