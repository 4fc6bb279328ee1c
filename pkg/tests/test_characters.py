from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brute import count_partitions, expand_poly_times_p
from virc1.characters import (
    ConsistencyError,
    DomainError,
    NotDecomposable,
    SectorLabel,
    cartan_slice,
    classify,
    decompose,
    fuse,
    mixture_weights,
    product_state_energy,
    twisted_char,
    vacuum_affine_char,
    virasoro_char,
)
from virc1.fock import graded_dimension
from virc1.qseries import CharSeries, QSeries, WindowExceeded, char_combine, partition_series

charges = st.fractions(min_value=-4, max_value=4, max_denominator=12)


def test_classify_examples():
    half = classify(F(1, 2))
    assert half.degenerate and half.s == F(1, 2) and half.h == F(1, 4)
    vac = classify(0)
    assert vac.degenerate and vac.s == 0 and vac.h == 0
    third = classify(F(1, 3))
    assert not third.degenerate and third.h == F(1, 9)


@given(charges)
def test_classify_sign_symmetric(q):
    assert classify(q) == classify(-q)
    assert classify(q).s == classify(-q).s
    assert classify(q).degenerate == ((2 * q).denominator == 1)


def test_sector_label_rejects_negative():
    with pytest.raises(DomainError):
        SectorLabel(F(-1))


def test_virasoro_char_examples():
    assert virasoro_char(SectorLabel(0), 6).body.to_list() == [count_partitions(n, 2) for n in range(7)]
    assert virasoro_char(SectorLabel(0), 6).body.to_list() == [1, 0, 1, 1, 2, 2, 4]
    c = virasoro_char(SectorLabel(F(1, 9)), 3)
    assert c.offset == F(1, 9) and c.body.to_list() == [1, 1, 2, 3]
    c = virasoro_char(SectorLabel(F(1, 4)), 3)
    assert c.offset == F(1, 4) and c.body.to_list() == expand_poly_times_p({0: 1, 2: -1}, 3) == [1, 1, 1, 2]


def test_degenerate_character_is_a_difference_of_shifted_partition_functions():
    s = F(3, 2)
    a = CharSeries(s * s, partition_series(10))
    b = CharSeries((s + 1) ** 2, partition_series(10 - 5))
    assert virasoro_char(SectorLabel(s * s), 10) == char_combine(a, b, -1)


def test_vacuum_affine_char_examples():
    b = vacuum_affine_char(9)
    assert b[(0, 0)] == 1
    assert b[(1, 1)] == 1 and b[(-1, 1)] == 1
    assert b[(0, 4)] == 5
    assert b.grading_bound_holds()


@pytest.mark.parametrize("order", [0, 1, 4, 9, 16])
def test_vacuum_affine_char_z_symmetric_and_bounded(order):
    b = vacuum_affine_char(order)
    assert b.grading_bound_holds()
    for (m, n), c in b.coefficients.items():
        assert b[(-m, n)] == c


def test_cartan_slice_examples():
    b = vacuum_affine_char(5)
    s0 = cartan_slice(b, 0)
    assert s0.offset == 0 and s0.body == partition_series(5)
    s1 = cartan_slice(b, 1)
    assert s1.offset == 0
    assert s1.body.coefficients == {1: 1, 2: 1, 3: 2, 4: 3, 5: 5}
    with pytest.raises(WindowExceeded):
        cartan_slice(b, 3)


@pytest.mark.parametrize("order", [4, 9, 12])
def test_cartan_slices_are_shifted_partition_functions(order):
    b = vacuum_affine_char(order)
    for nu in range(b.z_window + 1):
        expected = CharSeries(0, partition_series(order - nu * nu).shift(nu * nu))
        assert cartan_slice(b, nu) == expected


def test_twisted_char_examples():
    c = twisted_char(F(3, 2), 1, 6)
    assert c.offset == F(1, 4) and c.body == partition_series(6)
    c = twisted_char(0, 0, 6)
    assert c.offset == 0 and c.body == partition_series(6)
    c = twisted_char(F(1, 3), 0, 6)
    assert c.offset == F(1, 9) and c.body == partition_series(6)


@given(charges, st.integers(0, 3), st.integers(0, 10))
@settings(max_examples=40, deadline=None)
def test_twisted_char_closed_form(q, nu, order):
    c = twisted_char(q, nu, order)
    assert c.offset == (q - nu) ** 2
    assert c.body.to_list() == partition_series(order).to_list()


def test_twisted_char_self_check_detects_mismatch(monkeypatch):
    import virc1.characters as mod

    real = mod.vacuum_affine_char

    def broken(order):
        b = real(order)
        coeffs = b.coefficients
        coeffs[(-1, 2)] = coeffs.get((-1, 2), 0) + 1
        return type(b)(coeffs, order)

    monkeypatch.setattr(mod, "vacuum_affine_char", broken)
    with pytest.raises(ConsistencyError):
        mod.twisted_char(F(1, 3), 1, 4)


def test_decompose_tower_from_h1():
    result = decompose(CharSeries(1, partition_series(20)))
    assert [lab.h for lab, _ in result.summands] == [1, 4, 9, 16]
    assert all(m == 1 for _, m in result.summands)
    assert result.unresolved_tail and result.verified_order == 20


def test_decompose_irreducible_reproduces_itself():
    result = decompose(virasoro_char(SectorLabel(F(1, 4)), 10))
    assert [(lab.h, m) for lab, m in result.summands] == [(F(1, 4), 1)]
    assert not result.unresolved_tail


def test_decompose_continuum():
    result = decompose(CharSeries(F(1, 9), partition_series(10)))
    ((label, mult),) = result.summands
    assert label.h == F(1, 9) and not label.degenerate and mult == 1


def test_decompose_sum_of_sectors():
    c = char_combine(virasoro_char(SectorLabel(0), 12), virasoro_char(SectorLabel(4), 8))
    c = char_combine(c, virasoro_char(SectorLabel(4), 8))
    result = decompose(c)
    assert [(lab.h, m) for lab, m in result.summands] == [(0, 1), (4, 2)]


@pytest.mark.parametrize(
    "series",
    [
        CharSeries(0, QSeries({0: 1, 1: -1}, 5) * partition_series(5) - partition_series(5)),
        CharSeries(0, partition_series(6) * F(1, 2)),
        CharSeries(0, partition_series(6) + QSeries.monomial(2, 1, 6) * partition_series(6)),
        CharSeries(F(1, 9), partition_series(6) * 2),
    ],
)
def test_decompose_rejects(series):
    with pytest.raises(NotDecomposable) as info:
        decompose(series)
    assert info.value.witness is not None


@given(st.integers(0, 8).map(lambda k: F(k, 2)), st.integers(0, 20))
@settings(max_examples=40, deadline=None)
def test_decompose_round_trip(s, order):
    if s * s > order:
        return
    result = decompose(virasoro_char(SectorLabel(s * s), order))
    assert [(lab.h, m) for lab, m in result.summands] == [(s * s, 1)]


@given(st.integers(-6, 6), st.integers(0, 3), st.integers(0, 16))
@settings(max_examples=40, deadline=None)
def test_decompose_twisted_half_integer_telescopes(two_q, nu, order):
    base = F(two_q, 2) - nu
    result = decompose(twisted_char(F(two_q, 2), nu, order))
    expected = []
    s = abs(base)
    while s * s <= base * base + order:
        expected.append(s * s)
        s += 1
    assert result.h_values() == expected
    assert all(m == 1 for _, m in result.summands)


def test_fuse_examples():
    assert fuse(F(1, 2), F(1, 3)).h_values() == [F(25, 36), F(1, 36)]
    assert fuse(0, F(1, 3)).h_values() == [F(1, 9)]
    assert fuse(1, F(1, 4)).h_values() == [F(25, 16), F(1, 16), F(9, 16)]


@pytest.mark.parametrize("q1,q2", [(F(1, 3), F(1, 3)), (-1, F(1, 3)), (F(1, 2), F(1, 2)), (1, 2)])
def test_fuse_domain(q1, q2):
    with pytest.raises(DomainError):
        fuse(q1, q2)


@given(st.integers(0, 6).map(lambda k: F(k, 2)), charges.filter(lambda q: (2 * q).denominator != 1))
def test_fuse_summands(q1, q2):
    result = fuse(q1, q2)
    assert result.total_multiplicity == 2 * q1 + 1
    assert all(not lab.degenerate for lab, _ in result.summands)
    expected = sorted((q1 + q2 - nu) ** 2 for nu in range(int(2 * q1) + 1))
    assert sorted(lab.h for lab, m in result.summands for _ in range(m)) == expected


@given(st.integers(0, 4).map(lambda k: F(k, 2)), charges.filter(lambda q: (2 * q).denominator != 1))
@settings(max_examples=20, deadline=None)
def test_fuse_matches_oracle_sectors(q1, q2):
    order = 6
    found = []
    for nu in range(int(2 * q1) + 1):
        (label, mult), = decompose(graded_dimension(-nu, q1 + q2, order + nu * nu)).summands
        found.append(label.h)
    assert sorted(found) == sorted(fuse(q1, q2).h_values())


def test_mixture_weights_examples():
    assert mixture_weights(F(1, 2), F(1, 3)).weights == (F(2, 3), F(1, 3))
    assert mixture_weights(1, F(1, 2)).weights == (F(1, 4), F(1, 2), F(1, 4))
    assert mixture_weights(F(3, 2), 0).weights == (1, 0, 0, 0)


@given(st.integers(0, 8).map(lambda k: F(k, 2)), st.fractions(0, 1, max_denominator=9))
def test_mixture_weights_convex(q1, r):
    w = mixture_weights(q1, r).weights
    assert sum(w) == 1
    assert all(x >= 0 for x in w)


@pytest.mark.parametrize("q1,r", [(F(1, 3), F(1, 2)), (1, F(3, 2)), (1, -1)])
def test_mixture_weights_domain(q1, r):
    with pytest.raises(DomainError):
        mixture_weights(q1, r)


def test_product_state_energy_examples():
    assert product_state_energy(F(1, 2), F(1, 3), 1) == F(1, 36)
    assert product_state_energy(1, F(1, 4), 1) == F(17, 16)
    assert product_state_energy(1, F(1, 4), 0) == F(25, 16)
    with pytest.raises(DomainError):
        product_state_energy(F(1, 2), F(1, 3), 2)
