import pytest
from hypothesis import given, strategies as st

from rdskit.cwkit import SignedCirculant, cw_from_rds, is_proper, kronecker, singer_cw, verify_cw
from rdskit.errors import DomainError, ParameterError
from rdskit.fields import complement_singer_ds, singer_rds
from rdskit.groupring import GroupRingElement, RdsParams, correlation_vector
from rdskit.orbitsearch import lifts_up_to_translation
from test_orbitsearch import known_73_lift


def cw7():
    return cw_from_rds(GroupRingElement.from_set([0, 3, 5, 13], 14), RdsParams(7, 2, 4, 1))


def cw13():
    D, ds = complement_singer_ds(3, 3)
    R = lifts_up_to_translation(D, ds, 2)[0]
    return cw_from_rds(R, RdsParams(13, 2, 9, 3))


def dense_check(W: SignedCirculant) -> bool:
    """Row inner products of the full circulant matrix."""
    n = W.modulus
    row = [0] * n
    for r, s in W.signs:
        row[r] = s
    for shift in range(n):
        dot = sum(row[i] * row[(i + shift) % n] for i in range(n))
        if dot != (W.weight if shift == 0 else 0):
            return False
    return True


def test_cw7():
    W = cw7()
    assert (W.modulus, W.weight) == (7, 4)
    assert verify_cw(W) and dense_check(W) and is_proper(W)


def test_flipped_sign_breaks_it():
    W = cw7()
    for r in W.support:
        assert not verify_cw(W.flip(r))


def test_identity_is_cw_n_1():
    assert verify_cw(SignedCirculant.from_map({0: 1}, 9))
    assert verify_cw(SignedCirculant.from_map({0: -1}, 1))


def test_doubled_cw_is_improper():
    W = cw7()
    doubled = SignedCirculant.from_map({2 * r: s for r, s in W.signs}, 14)
    assert verify_cw(doubled)
    assert not is_proper(doubled)
    with pytest.raises(DomainError):
        is_proper(W.flip(W.support[0]))


def test_cw13_and_cw73():
    W = cw13()
    assert (W.modulus, W.weight) == (13, 9) and is_proper(W) and dense_check(W)
    W73 = cw_from_rds(known_73_lift(), RdsParams(73, 2, 64, 28))
    assert (W73.modulus, W73.weight) == (73, 64) and is_proper(W73)


def test_kronecker_91():
    W = kronecker(cw7(), cw13())
    assert (W.modulus, W.weight) == (91, 36)
    assert verify_cw(W) and is_proper(W) and dense_check(W)


def test_kronecker_with_unit():
    W = cw7()
    assert kronecker(W, SignedCirculant.from_map({0: 1}, 1)) == W


def test_kronecker_217():
    R, p = singer_rds(5, 3, 2)
    W31 = cw_from_rds(R, p)
    W = kronecker(cw7(), W31)
    assert (W.modulus, W.weight) == (217, 100) and verify_cw(W)


def test_kronecker_errors():
    W = cw7()
    with pytest.raises(ParameterError):
        kronecker(W, W)
    with pytest.raises(DomainError):
        kronecker(W.flip(W.support[0]), cw13())


def test_cw_from_rds_parity():
    R, p = singer_rds(5, 3, 4)
    with pytest.raises(ParameterError):
        cw_from_rds(R, p)
    with pytest.raises(DomainError):
        cw_from_rds(GroupRingElement.from_set([0, 1, 2, 3], 14), RdsParams(7, 2, 4, 1))


@pytest.mark.parametrize("q,d,n,order,weight", [
    (2, 7, 1, 127, 64),
    (3, 5, 1, 121, 81),
    (4, 3, 3, 21, 16),
    (2, 3, 1, 7, 4),
    (4, 3, 1, 63, 16),
    (7, 3, 1, 57, 49),
    (7, 3, 3, 171, 49),
])
def test_singer_cw(q, d, n, order, weight):
    W = singer_cw(q, d, n)
    assert (W.modulus, W.weight) == (order, weight)
    assert verify_cw(W) and is_proper(W)


def test_singer_cw_errors():
    with pytest.raises(ParameterError):
        singer_cw(2, 4, 1)
    with pytest.raises(ParameterError):
        singer_cw(6, 3, 1)
    with pytest.raises(ParameterError):
        singer_cw(5, 3, 3)
    with pytest.raises(ParameterError):
        singer_cw(5, 3, 2)


def test_signed_circulant_validation():
    with pytest.raises(ParameterError):
        SignedCirculant(5, ((0, 2),))
    with pytest.raises(ParameterError):
        SignedCirculant(5, ((3, 1), (1, 1)))
    with pytest.raises(ParameterError):
        SignedCirculant.from_lists([0, 5], [1, 1], 5)


@given(st.integers(1, 30), st.data())
def test_verify_cw_matches_dense_rows(n, data):
    size = data.draw(st.integers(0, n))
    residues = data.draw(st.lists(st.integers(0, n - 1), min_size=size, max_size=size,
                                  unique=True))
    signs = data.draw(st.lists(st.sampled_from([1, -1]), min_size=size, max_size=size))
    W = SignedCirculant.from_lists(residues, signs, n)
    assert verify_cw(W) == dense_check(W)


@given(st.sampled_from([1, 2, 3, 4, 5, 6]), st.integers(0, 6))
def test_cw_invariant_under_units_and_shifts(t, s):
    W = cw7()
    moved = SignedCirculant.from_map({(t * r + s) % 7: sign for r, sign in W.signs}, 7)
    assert verify_cw(moved) and is_proper(moved)
    conv = correlation_vector(moved.element(), moved.element())
    assert conv == [4] + [0] * 6
