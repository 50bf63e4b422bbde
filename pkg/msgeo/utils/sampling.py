"""
Seeded sampling helpers.

All random draws go through a ``numpy.random.Generator`` so that a seed fixes
every sampled point.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np
import sympy

logger = logging.getLogger(__name__)

RATIONAL_DENOMINATOR = 16
MAX_APPROXIMATION_DENOMINATOR = 10 ** 9


def make_rng(seed):
    return np.random.default_rng(seed)


def uniform_values(rng, symbols, low=-1.0, high=1.0):
    """Independent uniform floats keyed by symbol name."""
    return {str(s): float(rng.uniform(low, high)) for s in symbols}


def rational_values(rng, symbols, denominator=RATIONAL_DENOMINATOR, bound=1):
    """Independent rationals k/denominator in [-bound, bound] keyed by symbol name."""
    span = bound * denominator
    return {str(s): sympy.Rational(int(rng.integers(-span, span + 1)), denominator) for s in symbols}


def nearest_rational(value, max_denominator=MAX_APPROXIMATION_DENOMINATOR):
    """Closest rational with bounded denominator; exact values pass through."""
    if isinstance(value, sympy.Rational):
        return value
    if isinstance(value, sympy.Basic):
        value = float(value)
    approx = Fraction(value).limit_denominator(max_denominator)
    return sympy.Rational(approx.numerator, approx.denominator)


def run_ordered(function, items, parallel=False, workers=1):
    """
    Apply a function to every item, preserving input order.

    With ``parallel`` the calls run on a thread pool of ``workers`` threads.
    """
    items = list(items)
    if not parallel or workers <= 1 or len(items) <= 1:
        return [function(item) for item in items]
    logger.info(f"Evaluating {len(items)} items on {workers} threads")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(function, items))
