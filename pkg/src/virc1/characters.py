"""Sectors of the c=1 Virasoro algebra, their characters and fusion.

A sector is labelled by its ground-state energy ``h >= 0``. It is
*degenerate* when ``h = s**2`` with ``s`` a nonnegative half-integer and
belongs to the *continuum* otherwise. Characters are built as
:class:`~virc1.qseries.CharSeries`; the Cartan-graded vacuum character of
the level-1 su(2) current algebra is a :class:`~virc1.qseries.BiSeries`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .qseries import (
    BiSeries,
    CharSeries,
    QSeries,
    WindowExceeded,
    euler_product,
    partition_series,
)

Rational = Union[int, Fraction]


class DomainError(ValueError):
    """Input outside the regime where a formula is established."""


class NotDecomposable(ValueError):
    """A character is not a nonnegative integer sum of irreducible characters."""

    def __init__(self, message: str, witness: Optional[tuple[Fraction, Fraction]] = None):
        super().__init__(message)
        self.witness = witness


class ConsistencyError(AssertionError):
    """Two independent routes to the same quantity disagree."""


def as_half_integer(x: Rational) -> Optional[Fraction]:
    """Return ``x`` if it lies in (1/2)Z, else None."""
    x = Fraction(x)
    return x if (2 * x).denominator == 1 else None


def is_half_natural(x: Rational) -> bool:
    x = Fraction(x)
    return x >= 0 and (2 * x).denominator == 1


def rational_sqrt(x: Fraction) -> Optional[Fraction]:
    """Exact square root of a nonnegative rational, or None if irrational."""
    if x < 0:
        return None
    rn, rd = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if rn * rn == x.numerator and rd * rd == x.denominator:
        return Fraction(rn, rd)
    return None


@dataclass(frozen=True, order=True)
class SectorLabel:
    """Ground-state energy ``h`` together with its classification.

    ``s`` is the half-integer with ``s**2 == h`` for degenerate sectors and
    None for the continuum.
    """

    h: Fraction
    s: Optional[Fraction] = field(default=None, compare=False)

    def __post_init__(self):
        h = Fraction(self.h)
        if h < 0:
            raise DomainError(f"ground-state energy must be >= 0, got {h}")
        object.__setattr__(self, "h", h)
        root = rational_sqrt(h)
        s = root if root is not None and (2 * root).denominator == 1 else None
        object.__setattr__(self, "s", s)

    @property
    def degenerate(self) -> bool:
        return self.s is not None

    @property
    def kind(self) -> str:
        return "degenerate" if self.degenerate else "continuum"

    def __str__(self) -> str:
        return f"[h={self.h}]"


def sector_from_h(h: Rational) -> SectorLabel:
    return SectorLabel(Fraction(h))


def classify(q: Rational) -> SectorLabel:
    """Sector reached by the charge-``q`` ground state; ``q`` and ``-q`` agree."""
    q = Fraction(q)
    return SectorLabel(q * q)


@dataclass(frozen=True)
class FusionResult:
    """Multiset of sectors with multiplicities.

    ``verified_order`` is the order through which a character identity
    certifies the result (0 for a purely formulaic result).
    ``unresolved_tail`` marks that the last sector's character runs past
    the certified window, so sectors with larger ``h`` cannot be ruled out.
    """

    summands: tuple[tuple[SectorLabel, int], ...]
    verified_order: int = 0
    unresolved_tail: bool = False

    @property
    def total_multiplicity(self) -> int:
        return sum(mult for _, mult in self.summands)

    def multiplicity(self, h: Rational) -> int:
        h = Fraction(h)
        return sum(mult for label, mult in self.summands if label.h == h)

    def h_values(self) -> list[Fraction]:
        return [label.h for label, _ in self.summands]

    def __str__(self) -> str:
        parts = [str(label) if m == 1 else f"{m}{label}" for label, m in self.summands]
        return " ⊕ ".join(parts) if parts else "0"


def _merge(labels: list[SectorLabel]) -> tuple[tuple[SectorLabel, int], ...]:
    counts: dict[SectorLabel, int] = {}
    for label in labels:
        counts[label] = counts.get(label, 0) + 1
    return tuple(counts.items())


def virasoro_char(label: SectorLabel, order: int) -> CharSeries:
    """Character of the irreducible sector ``label`` through ``order``."""
    p = partition_series(order)
    if not label.degenerate:
        return CharSeries(label.h, p)
    s = label.s
    gap = int(2 * s + 1)  # (s+1)^2 - s^2
    return CharSeries(label.h, p - p.shift(gap).truncate(order))


def vacuum_affine_char(order: int) -> BiSeries:
    """``Tr z**Q3_0 t**L_0`` on the su(2) level-1 vacuum module.

    Built from the sum over spins ``j`` of ``(2j+1)`` copies (one per
    ``z**m``) of the degenerate integer-spin Virasoro character.
    """
    if order < 0:
        raise ValueError(f"order must be nonnegative, got {order}")
    p = partition_series(order)
    coeffs: dict[tuple[int, int], Fraction] = {}
    for j in range(math.isqrt(order) + 1):
        piece = p.shift(j * j).truncate(order) - p.shift((j + 1) ** 2).truncate(order)
        for m in range(-j, j + 1):
            for n, c in piece.terms():
                coeffs[(m, n)] = coeffs.get((m, n), 0) + c
    return BiSeries(coeffs, order)


def cartan_slice(b: BiSeries, nu: int) -> CharSeries:
    """Offset-0 series collecting the ``z**(-nu)`` terms of ``b``."""
    if nu < 0:
        raise ValueError(f"nu must be nonnegative, got {nu}")
    if nu > b.z_window:
        raise WindowExceeded(f"z^-{nu} outside window |m| <= {b.z_window}")
    return CharSeries(0, b.slice(-nu))


def twisted_char(q_total: Rational, nu: int, order: int) -> CharSeries:
    """``Tr P_{-nu} t**alpha_q(L_0)`` on the vacuum module, through ``order``.

    Computed by slicing the two-variable vacuum character at ``z**(-nu)``,
    substituting ``z = t**(2q)`` and multiplying by ``t**(q**2)``; the
    result is checked against the closed form ``t**((q-nu)**2) p(t)``.
    """
    q = Fraction(q_total)
    if nu < 0:
        raise ValueError(f"nu must be nonnegative, got {nu}")
    sliced = cartan_slice(vacuum_affine_char(order + nu * nu), nu)
    substituted = CharSeries(q * q - 2 * q * nu, sliced.body).normalized()
    closed = CharSeries((q - nu) ** 2, partition_series(order))
    if substituted.offset != closed.offset or substituted.body != closed.body:
        raise ConsistencyError(
            f"slice route {substituted!r} disagrees with closed form {closed!r}"
        )
    return closed


def decompose(c: CharSeries) -> FusionResult:
    """Split a character into irreducible c=1 characters.

    A continuum offset must carry exactly ``p(t)``. A degenerate offset is
    peeled greedily from the lowest term of ``body / p(t)``.
    """
    c = c.normalized()
    order = c.order
    if c.is_zero():
        return FusionResult((), verified_order=order)
    offset_label = SectorLabel(c.offset)
    if not offset_label.degenerate:
        if c.body != partition_series(order):
            lead = next(iter(c.terms()))
            raise NotDecomposable(
                f"continuum offset {c.offset} requires body p(t)", witness=lead
            )
        return FusionResult(((offset_label, 1),), verified_order=order)

    residual = dict((c.body * euler_product(order)).coefficients)
    found: list[tuple[SectorLabel, int]] = []
    tail = False
    while residual:
        e = min(residual)
        coeff = residual[e]
        exponent = c.offset + e
        s = rational_sqrt(exponent)
        s = s if s is not None and (2 * s).denominator == 1 else None
        if s is None or (s - offset_label.s).denominator != 1:
            raise NotDecomposable(
                f"term {coeff}*t^{exponent} is not at a degenerate ground-state energy",
                witness=(exponent, coeff),
            )
        if coeff.denominator != 1 or coeff < 0:
            raise NotDecomposable(
                f"multiplicity {coeff} at t^{exponent} is not a nonnegative integer",
                witness=(exponent, coeff),
            )
        found.append((SectorLabel(exponent), int(coeff)))
        del residual[e]
        upper = e + int(2 * s + 1)
        if upper <= order:
            residual[upper] = residual.get(upper, 0) + coeff
            if residual[upper] == 0:
                del residual[upper]
        else:
            tail = True
    return FusionResult(tuple(found), verified_order=order, unresolved_tail=tail)


def fuse(q1: Rational, q2: Rational) -> FusionResult:
    """Fusion of the degenerate sector of charge ``q1`` with the continuum sector of ``q2``."""
    q1, q2 = Fraction(q1), Fraction(q2)
    if not is_half_natural(q1):
        raise DomainError(f"q1 must lie in (1/2)N0, got {q1}")
    if as_half_integer(q2) is not None:
        raise DomainError(
            f"q2={q2} lies in (1/2)Z; fusion is only established for continuum q2"
        )
    labels = [SectorLabel((q1 + q2 - nu) ** 2) for nu in range(int(2 * q1) + 1)]
    return FusionResult(_merge(labels))


def fusion_h_values(q1: Rational, q2: Rational) -> list[tuple[int, Fraction]]:
    """``(nu, (q1+q2-nu)**2)`` for each ``nu = 0..2q1``, unmerged."""
    fuse(q1, q2)
    q1, q2 = Fraction(q1), Fraction(q2)
    return [(nu, (q1 + q2 - nu) ** 2) for nu in range(int(2 * q1) + 1)]


@dataclass(frozen=True)
class MixtureWeights:
    """Binomial weights of the lowered states in a product state.

    ``r`` stands for ``|k2|**2`` of the group element, ``1 - r`` for ``|k1|**2``.
    """

    q1: Fraction
    r: Fraction
    weights: tuple[Fraction, ...]


def mixture_weights(q1: Rational, r: Rational) -> MixtureWeights:
    q1, r = Fraction(q1), Fraction(r)
    if not is_half_natural(q1):
        raise DomainError(f"q1 must lie in (1/2)N0, got {q1}")
    if not 0 <= r <= 1:
        raise DomainError(f"r must lie in [0, 1], got {r}")
    n = int(2 * q1)
    weights = tuple(math.comb(n, nu) * (1 - r) ** (n - nu) * r**nu for nu in range(n + 1))
    return MixtureWeights(q1, r, weights)


def product_state_energy(q1: Rational, q2: Rational, nu: int) -> Fraction:
    """``alpha_{q1+q2}(L_0)`` eigenvalue of the ``nu``-fold lowered vacuum."""
    q1, q2 = Fraction(q1), Fraction(q2)
    if not is_half_natural(q1):
        raise DomainError(f"q1 must lie in (1/2)N0, got {q1}")
    if not 0 <= nu <= 2 * q1:
        raise DomainError(f"nu must lie in 0..{2 * q1}, got {nu}")
    return (q1 + q2) ** 2 - 2 * nu * q2


def lowered_norm_formula(q1: Rational, nu: int) -> int:
    """``(2q1)! nu! / (2q1 - nu)!``, or 0 past ``nu = 2q1``."""
    n = int(2 * Fraction(q1))
    if nu > n:
        return 0
    return math.factorial(n) * math.factorial(nu) // math.factorial(n - nu)
