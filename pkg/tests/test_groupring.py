from math import gcd

import pytest
from hypothesis import given, strategies as st

from rdskit.errors import InvariantViolation, ParameterError, StructuralError
from rdskit.groupring import (
    DesignParams,
    GroupRingElement,
    RdsParams,
    apply_numerical,
    complement_ds,
    convolve_with_inverse,
    correlation_vector,
    pairwise_difference_count,
    project,
    translate,
    verify_ds,
    verify_rds,
)


def elements(max_mod=24):
    @st.composite
    def build(draw, modulus=None):
        v = modulus or draw(st.integers(1, max_mod))
        coeffs = draw(st.dictionaries(st.integers(0, v - 1), st.integers(-4, 4), max_size=v))
        return GroupRingElement.from_dict(coeffs, v)
    return build


def triples(draw_mod=st.integers(1, 20)):
    @st.composite
    def build(draw):
        v = draw(draw_mod)
        make = elements()
        return tuple(draw(make(v)) for _ in range(3))
    return build()


def _dense_product(A, B):
    v = A.modulus
    out = [0] * v
    for i, a in enumerate(A.to_dense()):
        for j, b in enumerate(B.to_dense()):
            out[(i + j) % v] += a * b
    return out


@given(triples())
def test_ring_axioms(abc):
    A, B, C = abc
    assert A * B == B * A
    assert (A * B) * C == A * (B * C)
    assert A * (B + C) == A * B + A * C
    assert (A - A).terms == ()


@given(triples())
def test_product_matches_dense_convolution(abc):
    A, B, _ = abc
    assert (A * B).to_dense() == _dense_product(A, B)


@given(triples())
def test_correlation_is_product_with_inverse(abc):
    A, B, _ = abc
    assert convolve_with_inverse(A, B) == A * B.inverse_image()
    assert correlation_vector(A, B) == (A * B.inverse_image()).to_dense()


@given(st.integers(1, 30), st.data())
def test_numerical_map_is_a_ring_map_for_units(v, data):
    A = data.draw(elements()(v))
    B = data.draw(elements()(v))
    t = data.draw(st.sampled_from([t for t in range(1, v + 1) if gcd(t, v) == 1]))
    assert apply_numerical(A * B, t) == apply_numerical(A, t) * apply_numerical(B, t)


def test_large_coefficients_take_the_exact_path():
    big = 1 << 40
    A = GroupRingElement.from_dict({0: big, 1: big}, 3)
    assert correlation_vector(A, A) == [2 * big * big, big * big, big * big]


def test_moduli_must_match():
    with pytest.raises(StructuralError):
        GroupRingElement.from_set([0], 3) * GroupRingElement.from_set([0], 4)


def test_small_designs():
    assert verify_ds(GroupRingElement.from_set([0, 3, 5, 6], 7), DesignParams(7, 4, 2))
    assert verify_ds(GroupRingElement.from_set([1, 2, 4], 7), DesignParams(7, 3, 1))
    assert not verify_ds(GroupRingElement.from_set([0, 1, 2, 3], 7), DesignParams(7, 4, 2))
    assert verify_rds(GroupRingElement.from_set([0, 3, 5, 13], 14), RdsParams(7, 2, 4, 1))
    assert not verify_rds(GroupRingElement.from_set([0, 1, 5, 13], 14), RdsParams(7, 2, 4, 1))


def test_trivial_design_is_whole_group():
    assert verify_ds(GroupRingElement.whole_group(5), DesignParams(5, 5, 5))


def test_parameter_identities_are_enforced():
    with pytest.raises(ParameterError):
        DesignParams(7, 4, 1)
    with pytest.raises(ParameterError):
        RdsParams(7, 2, 4, 2)
    with pytest.raises(ParameterError):
        RdsParams.lifting(DesignParams(7, 4, 2), 3)


def test_verifier_rejects_wrong_shape():
    with pytest.raises(ParameterError):
        verify_ds(GroupRingElement.from_set([0, 1], 7), DesignParams(7, 4, 2))
    with pytest.raises(ParameterError):
        verify_ds(GroupRingElement.from_set([0, 3, 5, 6], 8), DesignParams(7, 4, 2))


def test_projection_recovers_base_design():
    R = GroupRingElement.from_set([0, 3, 5, 13], 14)
    img, q = project(R, RdsParams(7, 2, 4, 1), 2)
    assert q == RdsParams(7, 1, 4, 2)
    assert img.support == [0, 3, 5, 6]


def test_projection_of_a_non_rds_is_caught():
    R = GroupRingElement.from_set([0, 1, 2, 3], 14)
    with pytest.raises(InvariantViolation):
        project(R, RdsParams(7, 2, 4, 1), 2)


def test_complement():
    D, p = complement_ds(GroupRingElement.from_set([1, 2, 4], 7), DesignParams(7, 3, 1))
    assert D.support == [0, 3, 5, 6] and p == DesignParams(7, 4, 2)


@given(st.integers(2, 25), st.data())
def test_difference_counts_match_definition(v, data):
    S = data.draw(st.sets(st.integers(0, v - 1), min_size=1, max_size=v))
    A = GroupRingElement.from_set(S, v)
    conv = correlation_vector(A, A)
    ref = pairwise_difference_count(sorted(S), v)
    ref[0] += len(S)
    assert conv == ref


@given(st.integers(2, 25), st.integers(-50, 50), st.data())
def test_translation_preserves_correlation(v, s, data):
    A = data.draw(elements()(v))
    assert correlation_vector(translate(A, s), translate(A, s)) == correlation_vector(A, A)
