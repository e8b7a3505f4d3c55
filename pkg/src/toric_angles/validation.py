"""Input validation helpers, in the spirit of ``sklearn.utils.validation``.

Vectors travel through the package as tuples whose entries are either all
``Fraction`` (exact mode) or all ``float`` (floating mode). Integers and
``"p/q"`` strings are promoted to ``Fraction``; a single float anywhere
demotes the whole vector to floats.
"""

from fractions import Fraction
from numbers import Integral, Rational, Real

import numpy as np

from .exceptions import DimensionMismatch, NonPositiveAngle


def as_number(x):
    if isinstance(x, (Fraction, Integral)):
        return Fraction(x)
    if isinstance(x, np.integer):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, (Real, np.floating)):
        return float(x)
    raise TypeError(f"not a real number: {x!r}")


def is_exact(values):
    return all(isinstance(x, Fraction) for x in values)


def check_vector(values, length=None, name="vector", exact=None):
    """Return ``values`` as a homogeneous tuple of Fractions or floats.

    ``exact=True`` forces Fractions (floats are converted exactly),
    ``exact=False`` forces floats.
    """
    if isinstance(values, np.ndarray):
        values = values.tolist()
    out = [as_number(x) for x in values]
    if length is not None and len(out) != length:
        raise DimensionMismatch(f"{name} has length {len(out)}, expected {length}")
    if exact is None:
        exact = is_exact(out)
    if exact:
        return tuple(Fraction(x) for x in out)
    return tuple(float(x) for x in out)


def check_angle_vector(beta, d, exact=None):
    beta = check_vector(beta, d, "angle vector", exact=exact)
    bad = [a for a, b in enumerate(beta) if not b > 0]
    if bad:
        raise NonPositiveAngle(f"angle vector entries must be > 0; offending indices {bad}")
    return beta


def parse_vector_arg(text):
    """Parse a comma separated command line vector like ``"13/12,7/6,1"``."""
    parts = [p for p in text.replace(" ", "").split(",") if p]
    out = []
    for p in parts:
        if any(c in p for c in ".eE") and "/" not in p:
            out.append(float(p))
        else:
            out.append(Fraction(p))
    return out
