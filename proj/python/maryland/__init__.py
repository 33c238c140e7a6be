"""Numerics for the long-range Maryland model: regularized determinants,
Green's function decay, large deviations and localization diagnostics."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401


def default_params(eps=0.01, E=0.0, rho=1.0):
    """Golden-mean frequency with the exponentially decaying symbol."""
    return ModelParams(Frequency.golden(), LongRangeSymbol.exp_decay(rho, rho, 0.99), eps, E)  # noqa: F405
