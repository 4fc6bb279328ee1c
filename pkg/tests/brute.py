"""Brute-force oracles kept independent of the library code paths."""

from fractions import Fraction
from itertools import product


def partitions_brute(n):
    """Every multiset of positive parts summing to n, via bounded multiplicity vectors."""
    if n == 0:
        return [()]
    out = []
    for mult in product(*[range(n // k + 1) for k in range(1, n + 1)]):
        if sum(k * m for k, m in zip(range(1, n + 1), mult)) == n:
            parts = []
            for k, m in zip(range(1, n + 1), mult):
                parts += [k] * m
            out.append(tuple(sorted(parts, reverse=True)))
    return out


def count_partitions(n, min_part=1):
    return sum(1 for p in partitions_brute(n) if all(k >= min_part for k in p))


def expand_poly_times_p(poly, order):
    """Coefficients of poly(t) * p(t) through order, poly given as {exp: coeff}."""
    p = [count_partitions(n) for n in range(order + 1)]
    out = [Fraction(0)] * (order + 1)
    for e, c in poly.items():
        for n in range(order + 1 - e):
            out[n + e] += c * p[n]
    return out
