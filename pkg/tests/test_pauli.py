import numpy as np
import pytest
from hypothesis import given, strategies as st

from mcsynth.pauli import (
    PauliError,
    PhasedPauli,
    SignedPauli,
    commutes,
    format_pauli,
    multiply,
    parse_pauli,
    single_pauli,
    weight,
)

from oracles import matrices_equal, phased_matrix, signed_matrix


def all_phased(n):
    for z in range(1 << n):
        for x in range(1 << n):
            for e in range(4):
                yield PhasedPauli(n, z, x, e)


def all_signed(n):
    for z in range(1 << n):
        for x in range(1 << n):
            for sign in (1, -1):
                yield SignedPauli(n, z, x, sign)


# -- parsing and formatting ----------------------------------------------------

def test_parse_examples():
    p = parse_pauli("+XIZ")
    assert (p.n, p.x, p.z, p.sign) == (3, 0b001, 0b100, 1)
    q = parse_pauli("-Y")
    assert (q.n, q.z, q.x, q.sign) == (1, 1, 1, -1)
    r = parse_pauli("+II")
    assert (r.n, r.z, r.x, r.sign) == (2, 0, 0, 1)


def test_format_examples():
    assert format_pauli(SignedPauli(1, 1, 1, 1)) == "+Y"
    assert format_pauli(SignedPauli(2, 0b01, 0b00, -1)) == "-ZI"
    assert format_pauli(SignedPauli(1, 0, 0, 1)) == "+I"


@pytest.mark.parametrize("text, position", [
    ("XIZ", 1),      # missing sign
    ("+XQZ", 3),     # bad letter
    ("+XZb", 4),
])
def test_parse_error_positions(text, position):
    with pytest.raises(PauliError, match=f"position {position}"):
        parse_pauli(text)


def test_parse_empty_and_signless():
    with pytest.raises(PauliError):
        parse_pauli("")
    with pytest.raises(PauliError, match="no body"):
        parse_pauli("+")


@given(st.integers(1, 9).flatmap(
    lambda n: st.tuples(st.just(n), st.integers(0, (1 << n) - 1),
                        st.integers(0, (1 << n) - 1), st.sampled_from((1, -1)))))
def test_roundtrip_format_parse(args):
    n, z, x, sign = args
    p = SignedPauli(n, z, x, sign)
    assert parse_pauli(format_pauli(p)) == p


@given(st.integers(1, 9).flatmap(
    lambda n: st.tuples(st.sampled_from("+-"),
                        st.text(alphabet="IXYZ", min_size=n, max_size=n))))
def test_roundtrip_parse_format(args):
    text = args[0] + args[1]
    assert format_pauli(parse_pauli(text)) == text


def test_single_pauli():
    assert format_pauli(single_pauli(3, 2, "X")) == "+IXI"
    assert format_pauli(single_pauli(2, 1, "Z", -1)) == "-ZI"
    with pytest.raises(PauliError):
        single_pauli(2, 3, "X")


# -- products -------------------------------------------------------------------

def test_multiply_examples():
    zx = multiply(parse_pauli("+Z"), parse_pauli("+X"))
    assert (zx.z, zx.x, zx.phase_exp) == (1, 1, 1)      # ZX = iY
    xz = multiply(parse_pauli("+X"), parse_pauli("+Z"))
    assert (xz.z, xz.x, xz.phase_exp) == (1, 1, 3)      # XZ = -iY
    for letter in "IXYZ":
        sq = multiply(parse_pauli("+" + letter), parse_pauli("+" + letter))
        assert (sq.z, sq.x, sq.phase_exp) == (0, 0, 0)


def test_multiply_dimension_error():
    with pytest.raises(PauliError):
        multiply(parse_pauli("+X"), parse_pauli("+XX"))


@pytest.mark.parametrize("n", [1, 2])
def test_multiply_matches_dense_exhaustively(n):
    ops = list(all_phased(n))
    for p in ops:
        mp = phased_matrix(p)
        for q in ops:
            r = multiply(p, q)
            assert matrices_equal(phased_matrix(r), mp @ phased_matrix(q)), (p, q)


def test_multiply_matches_dense_random_3q():
    rng = np.random.default_rng(7)
    for _ in range(300):
        p = PhasedPauli(3, int(rng.integers(8)), int(rng.integers(8)),
                        int(rng.integers(4)))
        q = PhasedPauli(3, int(rng.integers(8)), int(rng.integers(8)),
                        int(rng.integers(4)))
        r = multiply(p, q)
        assert matrices_equal(phased_matrix(r), phased_matrix(p) @ phased_matrix(q))


def test_multiply_associative_and_unital_1q():
    ops = list(all_phased(1))
    unit = PhasedPauli(1, 0, 0, 0)
    for p in ops:
        assert multiply(p, unit) == p
        assert multiply(unit, p) == p
    for p in ops:
        for q in ops:
            pq = multiply(p, q)
            for r in ops[::3]:
                assert multiply(pq, r) == multiply(p, multiply(q, r))


def test_multiply_commutation_phase_relation():
    # equal bits both ways; phases differ by twice the symplectic product
    for p in all_signed(2):
        for q in all_signed(2):
            pq = multiply(p, q)
            qp = multiply(q, p)
            assert (pq.z, pq.x) == (qp.z, qp.x)
            sym = ((p.z & q.x).bit_count() + (p.x & q.z).bit_count()) & 1
            assert (pq.phase_exp - qp.phase_exp) % 4 == 2 * sym


def test_hermiticity_closure():
    rng = np.random.default_rng(11)
    for _ in range(200):
        seq = [SignedPauli(3, int(rng.integers(8)), int(rng.integers(8)),
                           int(rng.integers(2)) * 2 - 1) for _ in range(4)]
        seq = seq + seq[::-1]     # even length, bits cancel pairwise
        acc = PhasedPauli(3, 0, 0, 0)
        for p in seq:
            acc = multiply(acc, p)
        assert (acc.z, acc.x) == (0, 0)
        assert acc.phase_exp in (0, 2)


# -- commutation and weight -------------------------------------------------------

def test_commutes_examples():
    assert not commutes(parse_pauli("+Z"), parse_pauli("+X"))
    assert commutes(parse_pauli("+ZI"), parse_pauli("+IX"))
    assert commutes(parse_pauli("+YY"), parse_pauli("+XX"))


def test_commutes_matches_dense_exhaustively_2q():
    ops = list(all_signed(2))[::2]    # signs do not affect commutation
    for p in ops:
        mp = signed_matrix(p)
        for q in ops:
            mq = signed_matrix(q)
            dense = matrices_equal(mp @ mq, mq @ mp)
            assert commutes(p, q) == dense, (p, q)


def test_commutes_dimension_error():
    with pytest.raises(PauliError):
        commutes(parse_pauli("+X"), parse_pauli("+XX"))


def test_weight():
    assert weight(parse_pauli("+XIZ")) == 2
    assert weight(parse_pauli("+III")) == 0
    assert weight(parse_pauli("-YYY")) == 3


# -- conversions ------------------------------------------------------------------

def test_signed_phased_conversions():
    p = parse_pauli("-XZ")
    assert p.phased().phase_exp == 2
    assert p.phased().signed() == p
    with pytest.raises(PauliError):
        PhasedPauli(1, 1, 1, 1).signed()


def test_constructor_validation():
    with pytest.raises(PauliError):
        SignedPauli(0, 0, 0, 1)
    with pytest.raises(PauliError):
        SignedPauli(1, 2, 0, 1)
    with pytest.raises(PauliError):
        SignedPauli(1, 0, 0, 2)
    with pytest.raises(PauliError):
        PhasedPauli(1, 0, 0, 4)
