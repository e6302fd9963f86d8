"""Regression families used for the threshold, mobility and r_o fits.

Every family evaluates ``value(x, theta)`` and ``jacobian(x, theta)`` on
numpy arrays so the same objects plug into :func:`gauss_newton_fit`.
Combiner families (F6) take ``x`` as an (N, 2) array of ``(u, v)`` pairs.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..errors import OutOfDomain


def _positive(x, theta):
    if np.any(~(x > 0)):
        raise OutOfDomain("input must be positive")


def _positive_no_pole(x, theta):
    _positive(x, theta)
    den = theta[1] + x
    if np.any(np.abs(den) <= 1e-12 * np.maximum(np.abs(x), abs(theta[1]))):
        raise OutOfDomain(f"input hits the pole at x = {-theta[1]!r}")


def _anything(x, theta):
    if not np.all(np.isfinite(x)):
        raise OutOfDomain("input must be finite")


def _f1(x, t):
    return t[0] - t[1] * np.exp(-t[2] * x) + t[3] * np.exp(x ** t[4])


def _j1(x, t):
    e = np.exp(-t[2] * x)
    p = x ** t[4]
    ep = np.exp(p)
    return np.column_stack([np.ones_like(x), -e, t[1] * x * e, ep, t[3] * ep * p * np.log(x)])


def _f2(x, t):
    return -t[0] * x ** (-t[1]) + t[2] * np.exp(x ** (-t[3]))


def _j2(x, t):
    lx = np.log(x)
    a = x ** (-t[1])
    q = x ** (-t[3])
    eq = np.exp(q)
    return np.column_stack([-a, t[0] * a * lx, eq, -t[2] * eq * q * lx])


def _f3(x, t):
    return t[0] - t[1] * np.exp(-t[2] * x) + t[3] * x ** (-t[4])


def _j3(x, t):
    e = np.exp(-t[2] * x)
    a = x ** (-t[4])
    return np.column_stack([np.ones_like(x), -e, t[1] * x * e, a, -t[3] * a * np.log(x)])


def _f4(x, t):
    return t[0] + t[1] * np.exp(-t[2] * x)


def _j4(x, t):
    e = np.exp(-t[2] * x)
    return np.column_stack([np.ones_like(x), e, -t[1] * x * e])


def _f5(x, t):
    return t[0] * x / (t[1] + x)


def _j5(x, t):
    den = t[1] + x
    return np.column_stack([x / den, -t[0] * x / den**2])


def _f6(x, t):
    return t[0] + t[1] * x[:, 0] + t[2] * x[:, 1]


def _j6(x, t):
    return np.column_stack([np.ones(len(x)), x[:, 0], x[:, 1]])


def _f7(x, t):
    return t[0] + t[1] * x


def _j7(x, t):
    return np.column_stack([np.ones_like(x), x])


def _f8(x, t):
    return t[0] - t[1] * np.exp(-t[2] * x) + t[3] * x


def _j8(x, t):
    e = np.exp(-t[2] * x)
    return np.column_stack([np.ones_like(x), -e, t[1] * x * e, x])


@dataclass(frozen=True)
class ModelFamily:
    code: str
    label: str
    n_params: int
    n_inputs: int
    _value: Callable
    _jacobian: Callable
    _check: Callable

    def _prepare(self, x, theta):
        theta = np.asarray(theta, dtype=float)
        if theta.shape != (self.n_params,):
            raise ValueError(f"{self.code} takes {self.n_params} coefficients, got {theta.size}")
        x = np.asarray(x, dtype=float)
        if self.n_inputs == 2:
            x = np.atleast_2d(x)
            if x.shape[-1] != 2:
                raise ValueError(f"{self.code} takes (u, v) input pairs")
        else:
            x = np.atleast_1d(x)
        self._check(x, theta)
        return x, theta

    def value(self, x, theta):
        x, theta = self._prepare(x, theta)
        return self._value(x, theta)

    def jacobian(self, x, theta):
        x, theta = self._prepare(x, theta)
        return self._jacobian(x, theta)

    def __call__(self, x, theta):
        """Scalar evaluation; skips the array bookkeeping of :meth:`value`."""
        if len(theta) != self.n_params:
            raise ValueError(f"{self.code} takes {self.n_params} coefficients, got {len(theta)}")
        if self.n_inputs == 2:
            u, v = x
            return float(theta[0] + theta[1] * u + theta[2] * v)
        x = float(x)
        self._check(np.asarray(x), theta)
        return float(self._value(x, theta))


FAMILIES = {
    f.code: f
    for f in (
        ModelFamily("F1", "asym-sigmoid", 5, 1, _f1, _j1, _positive),
        ModelFamily("F2", "power-exp", 4, 1, _f2, _j2, _positive),
        ModelFamily("F3", "asym-power", 5, 1, _f3, _j3, _positive),
        ModelFamily("F4", "asym-exp", 3, 1, _f4, _j4, _positive),
        ModelFamily("F5", "michaelis-menten", 2, 1, _f5, _j5, _positive_no_pole),
        ModelFamily("F6", "affine2", 3, 2, _f6, _j6, _anything),
        ModelFamily("F7", "affine1", 2, 1, _f7, _j7, _anything),
        ModelFamily("F8", "asym-exp-linear", 4, 1, _f8, _j8, _positive),
    )
}


def get_family(code):
    try:
        return FAMILIES[code]
    except KeyError:
        raise ValueError(f"unknown model family {code!r}; expected one of {', '.join(FAMILIES)}") from None
