"""Scalar backends: exact rationals and float64 under one commutative-ring contract.

The exact backend is the default everywhere.  Values are ``gmpy2.mpq``
(``fractions.Fraction`` if gmpy2 is unavailable), which keep themselves in
lowest terms with a positive denominator.  The float backend exists for
performance experiments only; mixing backends is always an error, never a
silent coercion.
"""

from __future__ import annotations

from typing import Union

try:
    from gmpy2 import mpq as _mpq

    _RATIONAL_TYPES: tuple = (type(_mpq(0)), int)
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as _mpq

    _RATIONAL_TYPES = (_mpq, int)

from fractions import Fraction

EXACT = "exact"
F64 = "f64"

BACKENDS = (EXACT, F64)

ExactValue = type(_mpq(0))
ScalarValue = Union[ExactValue, float]


class BackendMismatch(TypeError):
    """Raised when values from different scalar backends are combined."""


def rat(p, q=1):
    """Exact rational p/q, stored in lowest terms."""
    if isinstance(p, str):
        return _mpq(Fraction(p)) if q == 1 else _mpq(Fraction(p), q)
    return _mpq(p, q)


def zero(backend: str):
    return _mpq(0) if backend == EXACT else 0.0


def one(backend: str):
    return _mpq(1) if backend == EXACT else 1.0


def coerce(backend: str, value) -> ScalarValue:
    """Admit a raw value into a backend, rejecting cross-backend leakage.

    The exact backend accepts ints, rationals, Fractions and "p/q" strings;
    the float backend accepts ints and floats.
    """
    if backend == EXACT:
        if isinstance(value, float):
            raise BackendMismatch("float value rejected by the exact backend")
        if isinstance(value, _RATIONAL_TYPES):
            return _mpq(value)
        if isinstance(value, (Fraction, str)):
            return _mpq(value)
        raise BackendMismatch(f"cannot admit {type(value).__name__} into the exact backend")
    if backend == F64:
        if isinstance(value, bool):
            raise BackendMismatch("bool is not a float64 scalar")
        if isinstance(value, (int, float)):
            return float(value)
        raise BackendMismatch(f"cannot admit {type(value).__name__} into the float backend")
    raise ValueError(f"unknown backend {backend!r}")


def check_backend(backend: str) -> None:
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}")


def scalar_eq(backend: str, a, b, tol=None) -> bool:
    """Backend-aware comparison: exact is exact, float is within tol."""
    if backend == EXACT:
        return a == b
    if tol is None:
        tol = 0.0
    return abs(a - b) <= tol


def format_scalar(backend: str, value) -> str:
    """Rationals as "p/q" (or "p" for integers), floats in repr decimal."""
    if backend == EXACT:
        return str(value)
    return repr(float(value))


def parse_scalar(backend: str, text: str) -> ScalarValue:
    if backend == EXACT:
        return _mpq(text)
    return float(text)
