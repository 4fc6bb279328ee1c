"""Exact rational scalar used by the Fock-space kernels.

``gmpy2.mpq`` is used when importable; setting ``VIRC1_PURE_PYTHON=1``
(or a missing gmpy2) falls back to :class:`fractions.Fraction`. Both are
exact, so results are identical; only speed differs. Public functions
convert back to ``Fraction`` at the boundary.
"""

from __future__ import annotations

import os
from fractions import Fraction

BACKEND = "fraction"
Q = Fraction

if os.environ.get("VIRC1_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from gmpy2 import mpq as Q  # type: ignore[no-redef]

        BACKEND = "gmpy2"
    except ImportError:  # pragma: no cover - depends on environment
        pass

ZERO = Q(0)
ONE = Q(1)


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    return Fraction(int(x.numerator), int(x.denominator))
