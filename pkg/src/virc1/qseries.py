"""Exact truncated power series in ``t``.

Three containers live here:

* :class:`QSeries` -- a sparse integer-exponent series with rational
  coefficients, known exactly through a cutoff ``order``.
* :class:`CharSeries` -- ``t**offset * body(t)`` with a rational offset,
  the shape of every c=1 character.
* :class:`BiSeries` -- a sparse two-variable series in ``z`` (Laurent) and
  ``t``, used for the Cartan-graded vacuum partition function.

Everything is exact; there is no floating point anywhere in this module.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

Rational = Union[int, Fraction]


class SeriesError(ValueError):
    """Base class for series errors."""


class ExponentOutOfRange(SeriesError):
    pass


class IncompatibleOffsets(SeriesError):
    pass


class WindowExceeded(SeriesError):
    pass


def _prune(coeffs: Mapping[int, Rational], order: int) -> dict[int, Fraction]:
    return {n: Fraction(c) for n, c in coeffs.items() if c != 0 and 0 <= n <= order}


class QSeries:
    """Truncated series ``sum c_n t**n`` for ``0 <= n <= order``.

    Coefficients past ``order`` are unknown, not zero. Binary operations
    keep the smaller order. Plain ints and Fractions act as exact constants
    of unlimited order.
    """

    __slots__ = ("_coeffs", "_order")

    def __init__(self, coeffs: Mapping[int, Rational] | None = None, order: int = 0):
        if order < 0:
            raise SeriesError(f"order must be nonnegative, got {order}")
        coeffs = coeffs or {}
        for n in coeffs:
            if n < 0:
                raise SeriesError(f"negative exponent {n}")
        self._coeffs = _prune(coeffs, order)
        self._order = order

    @classmethod
    def from_list(cls, values: Iterable[Rational], order: int | None = None) -> QSeries:
        values = list(values)
        if order is None:
            order = len(values) - 1
        return cls(dict(enumerate(values)), order)

    @classmethod
    def constant(cls, c: Rational, order: int) -> QSeries:
        return cls({0: c}, order)

    @classmethod
    def monomial(cls, n: int, c: Rational = 1, order: int | None = None) -> QSeries:
        return cls({n: c}, n if order is None else order)

    @property
    def order(self) -> int:
        return self._order

    @property
    def coefficients(self) -> dict[int, Fraction]:
        return dict(self._coeffs)

    def __getitem__(self, n: int) -> Fraction:
        if not 0 <= n <= self._order:
            raise ExponentOutOfRange(f"t^{n} outside 0..{self._order}")
        return self._coeffs.get(n, Fraction(0))

    def to_list(self) -> list[Fraction]:
        return [self[n] for n in range(self._order + 1)]

    def terms(self) -> Iterator[tuple[int, Fraction]]:
        return iter(sorted(self._coeffs.items()))

    def is_zero(self) -> bool:
        return not self._coeffs

    def valuation(self) -> int | None:
        """Lowest exponent with a nonzero coefficient, or None."""
        return min(self._coeffs) if self._coeffs else None

    def truncate(self, order: int) -> QSeries:
        return QSeries(self._coeffs, min(order, self._order))

    def shift(self, k: int) -> QSeries:
        """Multiply by ``t**k``; negative ``k`` requires the low terms to vanish."""
        if k < 0 and self._coeffs and min(self._coeffs) < -k:
            raise SeriesError(f"cannot divide by t^{-k}: low terms present")
        new_order = self._order + k
        if new_order < 0:
            raise SeriesError("shift leaves no known coefficients")
        return QSeries({n + k: c for n, c in self._coeffs.items()}, new_order)

    def _coerce(self, other) -> QSeries | None:
        if isinstance(other, QSeries):
            return other
        if isinstance(other, (int, Fraction)):
            return QSeries({0: other}, self._order)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self._coeffs)
        for n, c in other._coeffs.items():
            out[n] = out.get(n, 0) + c
        return QSeries(out, min(self._order, other._order))

    __radd__ = __add__

    def __neg__(self) -> QSeries:
        return QSeries({n: -c for n, c in self._coeffs.items()}, self._order)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QSeries({n: c * other for n, c in self._coeffs.items()}, self._order)
        if not isinstance(other, QSeries):
            return NotImplemented
        order = min(self._order, other._order)
        out: dict[int, Fraction] = {}
        for i, a in self._coeffs.items():
            for j, b in other._coeffs.items():
                k = i + j
                if k <= order:
                    out[k] = out.get(k, 0) + a * b
        return QSeries(out, order)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        """Term-by-term equality through the common order."""
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        order = min(self._order, other._order)
        return self.truncate(order)._coeffs == other.truncate(order)._coeffs

    def __hash__(self):
        return hash((self._order, frozenset(self._coeffs.items())))

    def __repr__(self) -> str:
        if not self._coeffs:
            body = "0"
        else:
            body = " + ".join(f"({c})*t^{n}" for n, c in self.terms())
        return f"QSeries({body} + O(t^{self._order + 1}))"


def series_add(a: QSeries, b: QSeries) -> QSeries:
    return a + b


def series_mul(a: QSeries, b: QSeries) -> QSeries:
    return a * b


def partition_counts(n_max: int) -> list[int]:
    """Integer partition numbers p(0..n_max) by Euler's coin recurrence."""
    counts = [1] + [0] * n_max
    for part in range(1, n_max + 1):
        for n in range(part, n_max + 1):
            counts[n] += counts[n - part]
    return counts


def partition_series(order: int) -> QSeries:
    """``p(t) = prod_n (1 - t**n)**-1`` through ``t**order``."""
    if order < 0:
        raise SeriesError(f"order must be nonnegative, got {order}")
    return QSeries.from_list(partition_counts(order))


def euler_product(order: int) -> QSeries:
    """``prod_{n=1..order} (1 - t**n)`` through ``t**order``."""
    out = QSeries.constant(1, order)
    for n in range(1, order + 1):
        out = out * QSeries({0: 1, n: -1}, order)
    return out


class CharSeries:
    """The series ``t**offset * body(t)``.

    ``body.order`` counts from the offset, so the series is known through
    the absolute exponent ``offset + body.order``. Equality compares the
    denoted series over the shared range, which for normalized operands
    (nonzero constant term) means equal offsets and equal bodies.
    """

    __slots__ = ("offset", "body")

    def __init__(self, offset: Rational, body: QSeries):
        self.offset = Fraction(offset)
        self.body = body

    @property
    def order(self) -> int:
        return self.body.order

    @property
    def top(self) -> Fraction:
        """Largest absolute exponent with a known coefficient."""
        return self.offset + self.body.order

    def is_zero(self) -> bool:
        return self.body.is_zero()

    def normalized(self) -> CharSeries:
        """Move leading zeros of the body into the offset."""
        v = self.body.valuation()
        if not v:
            return self
        return CharSeries(self.offset + v, self.body.shift(-v))

    def rebase(self, offset: Rational) -> CharSeries:
        """Re-express over a lower offset that differs by an integer."""
        offset = Fraction(offset)
        gap = self.offset - offset
        if gap.denominator != 1:
            raise IncompatibleOffsets(f"offsets {self.offset} and {offset} differ by {gap}")
        return CharSeries(offset, self.body.shift(int(gap)))

    def terms(self) -> Iterator[tuple[Fraction, Fraction]]:
        for n, c in self.body.terms():
            yield self.offset + n, c

    def __eq__(self, other) -> bool:
        if not isinstance(other, CharSeries):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        try:
            low = min(self.offset, other.offset)
            a, b = self.rebase(low), other.rebase(low)
        except IncompatibleOffsets:
            return False
        top = min(self.top, other.top)
        # Only the known window of both is compared.
        ka = {e: c for e, c in a.terms() if e <= top}
        kb = {e: c for e, c in b.terms() if e <= top}
        return ka == kb

    def __hash__(self):
        n = self.normalized()
        return hash((n.offset, n.body))

    def __repr__(self) -> str:
        return f"CharSeries(t^({self.offset}) * {self.body!r})"


def coefficient_at(s: CharSeries, e: Rational) -> Fraction:
    gap = Fraction(e) - s.offset
    if gap.denominator != 1 or not 0 <= gap <= s.order:
        raise ExponentOutOfRange(f"t^{e} not in t^{s.offset} * (t^0 .. t^{s.order})")
    return s.body[int(gap)]


def char_combine(a: CharSeries, b: CharSeries, sign: int = 1) -> CharSeries:
    """``a + sign*b`` over the smaller offset."""
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    gap = a.offset - b.offset
    if gap.denominator != 1:
        raise IncompatibleOffsets(f"offsets {a.offset} and {b.offset} differ by {gap}")
    low = min(a.offset, b.offset)
    ra, rb = a.rebase(low), b.rebase(low)
    return CharSeries(low, ra.body + rb.body * sign)


class BiSeries:
    """Sparse series ``sum c[m, n] z**m t**n`` with ``0 <= n <= t_order``."""

    __slots__ = ("_coeffs", "t_order")

    def __init__(self, coeffs: Mapping[tuple[int, int], Rational], t_order: int):
        if t_order < 0:
            raise SeriesError(f"t_order must be nonnegative, got {t_order}")
        for (_, n) in coeffs:
            if n < 0:
                raise SeriesError(f"negative t-exponent {n}")
        self._coeffs = {
            (m, n): Fraction(c) for (m, n), c in coeffs.items() if c != 0 and n <= t_order
        }
        self.t_order = t_order

    @property
    def z_window(self) -> int:
        return math.isqrt(self.t_order)

    @property
    def coefficients(self) -> dict[tuple[int, int], Fraction]:
        return dict(self._coeffs)

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        m, n = key
        if not 0 <= n <= self.t_order:
            raise ExponentOutOfRange(f"t^{n} outside 0..{self.t_order}")
        return self._coeffs.get((m, n), Fraction(0))

    def grading_bound_holds(self) -> bool:
        """Every stored term has t-exponent at least the square of its z-exponent."""
        return all(n >= m * m for (m, n) in self._coeffs)

    def slice(self, m: int) -> QSeries:
        return QSeries({n: c for (mm, n), c in self._coeffs.items() if mm == m}, self.t_order)

    def truncate(self, t_order: int) -> BiSeries:
        return BiSeries(self._coeffs, min(t_order, self.t_order))

    def __eq__(self, other) -> bool:
        if not isinstance(other, BiSeries):
            return NotImplemented
        order = min(self.t_order, other.t_order)
        return self.truncate(order)._coeffs == other.truncate(order)._coeffs

    def __hash__(self):
        return hash((self.t_order, frozenset(self._coeffs.items())))

    def __repr__(self) -> str:
        return f"BiSeries({len(self._coeffs)} terms, t_order={self.t_order})"
