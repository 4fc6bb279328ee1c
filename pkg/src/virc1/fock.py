"""Truncated Fock-space model of the level-1 su(2) vacuum module.

The module is realized by one free boson on the charge lattice. A basis
state is ``(m, parts)``: the Cartan charge ``m`` (eigenvalue of ``Q3_0``)
and a partition listing the oscillators ``b_{-k}`` applied to the charge-m
ground state. The oscillators are rescaled so that

    [b_n, b_m] = (n/2) delta_{n+m,0},    Q3_n = b_n,    b_0 = m,

which keeps every matrix element rational. Basis monomials are
orthogonal with squared norm ``prod_k n_k! (k/2)**n_k`` and the ground
state of charge ``m`` has energy ``m**2``.

``Q+-_n`` are modes of the vertex operators

    Q+-(z) = eps(m) z**(+-2m) exp(+-2 sum_k b_{-k} z**k / k) exp(-+2 sum_k b_k z**-k / k)

shifting the charge by +-1, and ``L_n = sum_j :b_{n-j} b_j:``.
"""

from __future__ import annotations

import math
import os
from contextlib import contextmanager
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Callable, Iterable, Iterator, Mapping, Optional, Union

from ._exact import ONE, ZERO, Q, to_fraction
from .qseries import CharSeries, QSeries

Rational = Union[int, Fraction]
BasisState = tuple[int, tuple[int, ...]]  # (charge, parts in descending order)

VACUUM: BasisState = (0, ())


class CutoffExceeded(ValueError):
    """An operator would produce a state above the vector's energy cutoff."""


def energy(state: BasisState) -> int:
    m, parts = state
    return m * m + sum(parts)


def level(state: BasisState) -> int:
    return sum(state[1])


def _canon(parts: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(parts, reverse=True))


def _multiplicities(parts: tuple[int, ...]) -> dict[int, int]:
    counts: dict[int, int] = {}
    for k in parts:
        counts[k] = counts.get(k, 0) + 1
    return counts


@lru_cache(maxsize=None)
def partitions(n: int, largest: Optional[int] = None) -> tuple[tuple[int, ...], ...]:
    """All partitions of ``n`` with parts at most ``largest``, descending."""
    if largest is None or largest > n:
        largest = n
    if n == 0:
        return ((),)
    out = []
    for k in range(largest, 0, -1):
        for rest in partitions(n - k, k):
            out.append((k,) + rest)
    return tuple(out)


def enumerate_basis(charge_window: int, cutoff: int) -> list[BasisState]:
    """All basis states with ``|m| <= charge_window`` and energy ``<= cutoff``."""
    if charge_window < 0 or cutoff < 0:
        raise ValueError("charge_window and cutoff must be nonnegative")
    states = []
    for m in sorted(range(-charge_window, charge_window + 1), key=lambda x: (abs(x), -x)):
        room = cutoff - m * m
        for lev in range(room + 1):
            states.extend((m, lam) for lam in partitions(lev))
    return states


@lru_cache(maxsize=None)
def _basis_norm(state: BasisState):
    out = ONE
    for k, nk in _multiplicities(state[1]).items():
        out *= math.factorial(nk) * Q(k, 2) ** nk
    return out


def basis_norm(state: BasisState) -> Fraction:
    """Squared norm ``prod_k n_k! (k/2)**n_k`` of a basis monomial."""
    return to_fraction(_basis_norm(state))


class FockVector:
    """Finite rational combination of basis states below an energy cutoff."""

    __slots__ = ("_terms", "cutoff")

    def __init__(self, terms: Mapping[BasisState, Rational], cutoff: int):
        clean = {}
        for state, c in terms.items():
            if c == 0:
                continue
            state = (state[0], _canon(state[1]))
            if energy(state) > cutoff:
                raise CutoffExceeded(f"state {state} has energy {energy(state)} > cutoff {cutoff}")
            clean[state] = Q(c)
        self._terms = clean
        self.cutoff = cutoff

    @classmethod
    def _raw(cls, terms: dict, cutoff: int) -> FockVector:
        # terms must already be canonical, nonzero and below the cutoff
        v = cls.__new__(cls)
        v._terms = terms
        v.cutoff = cutoff
        return v

    @classmethod
    def basis(cls, state: BasisState, cutoff: int) -> FockVector:
        return cls({state: 1}, cutoff)

    @classmethod
    def vacuum(cls, cutoff: int) -> FockVector:
        return cls({VACUUM: 1}, cutoff)

    @classmethod
    def zero(cls, cutoff: int) -> FockVector:
        return cls._raw({}, cutoff)

    @property
    def terms(self) -> dict[BasisState, Fraction]:
        return {s: to_fraction(c) for s, c in self._terms.items()}

    def coefficient(self, state: BasisState) -> Fraction:
        return to_fraction(self._terms.get(state, ZERO))

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def max_energy(self) -> int:
        return max((energy(s) for s in self._terms), default=0)

    def charges(self) -> set[int]:
        return {m for m, _ in self._terms}

    def energies(self) -> set[int]:
        return {energy(s) for s in self._terms}

    def with_cutoff(self, cutoff: int) -> FockVector:
        return FockVector(self._terms, cutoff)

    def __add__(self, other: FockVector) -> FockVector:
        out = dict(self._terms)
        for s, c in other._terms.items():
            d = out.get(s)
            if d is None:
                out[s] = c
            else:
                d += c
                if d:
                    out[s] = d
                else:
                    del out[s]
        return FockVector._raw(out, min(self.cutoff, other.cutoff))

    def __neg__(self) -> FockVector:
        return FockVector._raw({s: -c for s, c in self._terms.items()}, self.cutoff)

    def __sub__(self, other: FockVector) -> FockVector:
        return self + (-other)

    def __mul__(self, scalar: Rational) -> FockVector:
        if not isinstance(scalar, (int, Fraction, type(ONE))):
            return NotImplemented
        if scalar == 0:
            return FockVector.zero(self.cutoff)
        k = Q(scalar)
        return FockVector._raw({s: c * k for s, c in self._terms.items()}, self.cutoff)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, FockVector):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __repr__(self) -> str:
        if not self._terms:
            return f"FockVector(0, cutoff={self.cutoff})"
        body = " + ".join(f"({c})|{m};{list(p)}>" for (m, p), c in sorted(self._terms.items()))
        return f"FockVector({body}, cutoff={self.cutoff})"


def inner_product(a: FockVector, b: FockVector) -> Fraction:
    """Bilinear pairing with orthogonal monomials and ``b_n^dagger = b_{-n}``."""
    if len(b._terms) < len(a._terms):
        a, b = b, a
    total = ZERO
    for s, c in a._terms.items():
        d = b._terms.get(s)
        if d is not None:
            total += c * d * _basis_norm(s)
    return to_fraction(total)


def norm_squared(v: FockVector) -> Fraction:
    return inner_product(v, v)


# --- cocycle --------------------------------------------------------------

def _trivial_cocycle(sign: int, m: int) -> int:
    return 1


def _alternating_cocycle(sign: int, m: int) -> int:
    return -1 if m % 2 else 1


COCYCLES: dict[str, Callable[[int, int], int]] = {
    "trivial": _trivial_cocycle,
    "alternating": _alternating_cocycle,
}

_cocycle_name = os.environ.get("VIRC1_COCYCLE", "trivial")


def get_cocycle() -> str:
    return _cocycle_name


def set_cocycle(name: str) -> None:
    """Select the lattice sign convention for ``Q+-`` (clears mode caches).

    ``"trivial"`` is the convention under which the current algebra
    closes; ``"alternating"`` (``eps(m) = (-1)**m``) exists to exercise the
    failure path of the commutator checks.
    """
    global _cocycle_name
    if name not in COCYCLES:
        raise ValueError(f"unknown cocycle {name!r}; choose from {sorted(COCYCLES)}")
    _cocycle_name = name
    _vertex_on_state.cache_clear()


@contextmanager
def use_cocycle(name: str) -> Iterator[None]:
    previous = _cocycle_name
    set_cocycle(name)
    try:
        yield
    finally:
        set_cocycle(previous)


# --- single-state kernels ---------------------------------------------------

Terms = tuple  # ((BasisState, scalar), ...)


@lru_cache(maxsize=None)
def _b_on_state(n: int, state: BasisState) -> Terms:
    m, parts = state
    if n == 0:
        return ((state, Q(m)),) if m else ()
    if n < 0:
        return (((m, _canon(parts + (-n,))), ONE),)
    count = parts.count(n)
    if not count:
        return ()
    rest = list(parts)
    rest.remove(n)
    return (((m, tuple(rest)), count * Q(n, 2)),)


@lru_cache(maxsize=None)
def _creation_expansion(total: int, sign: int) -> Terms:
    """Coefficients of ``exp(2*sign* sum_k b_{-k} z**k / k)`` at ``z**total``."""
    out = []
    for lam in partitions(total):
        coeff = ONE
        for k, nk in _multiplicities(lam).items():
            coeff *= Q(2 * sign, k) ** nk / math.factorial(nk)
        out.append(((0, lam), coeff))
    return tuple(out)


@lru_cache(maxsize=None)
def _vertex_on_state(sign: int, n: int, state: BasisState) -> Terms:
    m, parts = state
    # net z-power the two exponentials must supply for the z**(-n-1) mode
    net = -n - 1 - 2 * sign * m
    eps = COCYCLES[_cocycle_name](sign, m)
    mult = sorted(_multiplicities(parts).items())
    out: dict = {}
    choices = [range(nk + 1) for _, nk in mult]
    for removal in product(*choices):
        removed_level = sum(k * r for (k, _), r in zip(mult, removal))
        created = net + removed_level
        if created < 0:
            continue
        coeff = Q(eps)
        kept: list[int] = []
        for (k, nk), r in zip(mult, removal):
            coeff *= math.comb(nk, r) * (-sign) ** r
            kept.extend([k] * (nk - r))
        for (_, lam), c in _creation_expansion(created, sign):
            target = (m + sign, _canon(kept + list(lam)))
            out[target] = out.get(target, 0) + coeff * c
    return tuple((s, c) for s, c in out.items() if c != 0)


def _apply(kernel: Callable[[BasisState], Terms], shift: int, v: FockVector) -> FockVector:
    """Apply a single-state kernel that lowers the energy by ``shift``."""
    out: dict = {}
    cutoff = v.cutoff
    for state, c in v._terms.items():
        if energy(state) - shift > cutoff:
            raise CutoffExceeded(
                f"mode of index {shift} on {state} exceeds cutoff {cutoff}"
            )
        for target, d in kernel(state):
            prev = out.get(target)
            out[target] = c * d if prev is None else prev + c * d
    return FockVector._raw({s: c for s, c in out.items() if c}, cutoff)


def q3_apply(n: int, v: FockVector) -> FockVector:
    return _apply(lambda s: _b_on_state(n, s), n, v)


def qpm_apply(sign: int, n: int, v: FockVector) -> FockVector:
    """``Q+_n`` for ``sign=+1``, ``Q-_n`` for ``sign=-1``."""
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    return _apply(lambda s: _vertex_on_state(sign, n, s), n, v)


def qplus_apply(n: int, v: FockVector) -> FockVector:
    return qpm_apply(1, n, v)


def qminus_apply(n: int, v: FockVector) -> FockVector:
    return qpm_apply(-1, n, v)


@lru_cache(maxsize=None)
def _l_on_state(n: int, state: BasisState) -> Terms:
    m, parts = state
    if n == 0:
        e = energy(state)
        return ((state, Q(e)),) if e else ()
    lev = sum(parts)
    out: dict = {}

    def add(terms: Terms, scale) -> None:
        for s, c in terms:
            out[s] = out.get(s, 0) + scale * c

    # b_0 b_n + b_n b_0
    if m:
        add(_b_on_state(n, state), Q(2 * m))
    # modes with i + j = n, i, j != 0 commute pairwise for n != 0
    for j in range(n - lev, lev + 1):
        if j == 0 or j == n:
            continue
        for s1, c1 in _b_on_state(j, state):
            add(_b_on_state(n - j, s1), c1)
    return tuple((s, c) for s, c in out.items() if c != 0)


def l_apply(n: int, v: FockVector) -> FockVector:
    return _apply(lambda s: _l_on_state(n, s), n, v)


def deformed_l_apply(q: Rational, n: int, v: FockVector) -> FockVector:
    """``alpha_q(L_n) = L_n + 2q Q3_n + q**2 delta_{n,0}``."""
    q = Q(Fraction(q))
    out = l_apply(n, v)
    if q:
        out = out + q3_apply(n, v) * (2 * q)
        if n == 0:
            out = out + v * (q * q)
    return out


def sugawara_l_apply(n: int, v: FockVector) -> FockVector:
    """``L_n`` from the currents: ``(1/3) sum :Q3 Q3: + (1/2)(:Q+ Q-: + :Q- Q+:)``.

    A product ``:X_i Y_{n-i}:`` keeps ``X_i`` on the left for ``i <= -1``
    and moves it to the right otherwise.
    """
    top = v.max_energy()
    total = FockVector.zero(v.cutoff)
    pairs = [
        (q3_apply, q3_apply, ONE),
        (qplus_apply, qminus_apply, Q(1, 2)),
        (qminus_apply, qplus_apply, Q(1, 2)),
    ]
    for x, y, weight in pairs:
        for i in range(n - top, top + 1):
            if i <= -1:
                piece = x(i, y(n - i, v))
            else:
                piece = y(n - i, x(i, v))
            total = total + piece * weight
    return total * Q(1, 3)


def lowered_vector(q1: Rational, nu: int, cutoff: int) -> FockVector:
    """``(Q-_{-2 q1})**nu`` applied to the vacuum."""
    q1 = Fraction(q1)
    if q1 < 0 or (2 * q1).denominator != 1:
        raise ValueError(f"q1 must lie in (1/2)N0, got {q1}")
    if nu < 0:
        raise ValueError(f"nu must be nonnegative, got {nu}")
    step = int(2 * q1)
    if step * nu > cutoff:
        raise CutoffExceeded(f"(Q-_-{step})^{nu} Omega needs cutoff >= {step * nu}")
    v = FockVector.vacuum(cutoff)
    for _ in range(nu):
        v = qminus_apply(-step, v)
    return v


def deformed_eigenvalue(q: Rational, v: FockVector) -> Optional[Fraction]:
    """Eigenvalue of ``alpha_q(L_0)`` on ``v``, or None if ``v`` is not an eigenvector."""
    if v.is_zero():
        return None
    w = deformed_l_apply(q, 0, v)
    state, c = next(iter(v._terms.items()))
    lam = w._terms.get(state, ZERO) / c
    return to_fraction(lam) if w == v * lam else None


def graded_dimension(charge: int, q: Rational, cutoff: int) -> CharSeries:
    """``Tr P_charge t**alpha_q(L_0)`` counted on the truncated basis.

    The offset is the lowest ``alpha_q(L_0)`` eigenvalue in the sector and
    the body has order ``cutoff - charge**2``.
    """
    if cutoff < charge * charge:
        raise CutoffExceeded(f"charge {charge} needs cutoff >= {charge * charge}")
    q = Fraction(q)
    ground = (q + charge) ** 2
    counts: dict[int, int] = {}
    for lev in range(cutoff - charge * charge + 1):
        for lam in partitions(lev):
            state = (charge, lam)
            w = deformed_l_apply(q, 0, FockVector.basis(state, cutoff))
            eig = w.coefficient(state)
            if w != FockVector.basis(state, cutoff) * eig:
                raise AssertionError(f"alpha_q(L_0) not diagonal on {state}")
            gap = eig - ground
            if gap.denominator != 1 or gap < 0:
                raise AssertionError(f"eigenvalue {eig} off the grid above {ground}")
            counts[int(gap)] = counts.get(int(gap), 0) + 1
    return CharSeries(ground, QSeries(counts, cutoff - charge * charge))


def iter_admissible(charge_window: int, cutoff: int, margin: int) -> Iterator[FockVector]:
    """Basis vectors whose energy leaves ``margin`` below ``cutoff``."""
    if cutoff < margin:
        return
    for state in enumerate_basis(charge_window, cutoff - margin):
        yield FockVector.basis(state, cutoff)
