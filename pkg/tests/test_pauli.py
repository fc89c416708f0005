import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from twistcc.pauli import (
    MalformedCode, PauliGroupBasis, PauliOperator, commutes, extract_logicals, from_check_matrix,
    in_group, min_weight_logical, multiply, rank, to_check_matrix,
)

from oracles import (
    anticommute, as_matrix, brute_logical_count, brute_min_weight, gf2_rank, letters_of,
    symplectic_rows,
)

P = PauliOperator.from_letters


def paulis(n):
    return st.builds(lambda x, z, s: PauliOperator(n, x, z, 0).unsigned() if s else
                     PauliOperator(n, x, z, 2 + bin(x & z).count("1")),
                     st.integers(0, 2 ** n - 1), st.integers(0, 2 ** n - 1), st.booleans())


def test_commutes_examples():
    assert not commutes(P("X"), P("Z"))
    assert commutes(P("X"), P("X"))
    assert commutes(P("YY"), P("ZZ"))


def test_multiply_examples():
    xz = multiply(P("X"), P("Z"))
    assert (xz.x, xz.z) == (1, 1)
    for w in ("XYZ", "YY", "ZIX"):
        sq = multiply(P(w), P(w))
        assert sq.is_identity() and sq.sign == 1


def test_product_with_one_shared_vertex_has_y():
    a = PauliOperator.from_support(5, [0, 1, 2], "X")
    b = PauliOperator.from_support(5, [2, 3, 4], "Z")
    assert (a * b).letter(2) == "Y"
    assert not commutes(a, b)


def test_rank_examples():
    assert rank([]) == 0
    assert rank([P("XI"), P("XX")]) == 2


def test_in_group_examples():
    gens = [P("XXI"), P("IZZ"), P("ZZI")]
    basis = PauliGroupBasis(3, gens)
    for i, g in enumerate(gens):
        assert in_group(g, basis) is not None
    assert in_group(PauliOperator.identity(3), basis) == []
    assert in_group(P("XII"), basis) is None


def test_extract_logicals_examples():
    assert extract_logicals([P("Z")], 1) == []
    pairs = extract_logicals([P("ZZ")], 2)
    assert len(pairs) == 1
    x, z = pairs[0]
    assert not commutes(x, z)
    assert commutes(x, P("ZZ")) and commutes(z, P("ZZ"))
    assert brute_logical_count(["ZZ"], 2) == 1


def test_extract_logicals_rejects_noncommuting():
    with pytest.raises(MalformedCode):
        extract_logicals([P("X"), P("Z")], 1)


def test_min_weight_two_qubit_code():
    res = min_weight_logical([P("ZZ")], [P("XX"), P("ZI")], 4)
    assert res.weight == brute_min_weight(["ZZ"], ["XX", "ZI"], 2, 4) == 1
    w = res.witness
    assert commutes(w, P("ZZ")) and not (commutes(w, P("XX")) and commutes(w, P("ZI")))


def test_min_weight_cap_sentinel():
    # five-qubit code, distance 3
    stabs = [P("XZZXI"), P("IXZZX"), P("XIXZZ"), P("ZXIXZ")]
    (x, z), = extract_logicals(stabs, 5)
    assert min_weight_logical(stabs, [x, z], 2).exceeded
    assert min_weight_logical(stabs, [x, z], 3).weight == brute_min_weight(
        [letters_of(s) for s in stabs], [letters_of(x), letters_of(z)], 5, 5) == 3


def test_check_matrix_round_trip():
    gens = [P("XXZI"), P("IYYZ"), P("ZIIX")]
    text = to_check_matrix(PauliGroupBasis(4, gens), 1)
    basis, k = from_check_matrix(text)
    assert k == 1
    assert [(g.x, g.z) for g in basis.generators] == [(g.x, g.z) for g in gens]
    assert to_check_matrix(basis, 1) == text


# properties --------------------------------------------------------------------------

@settings(max_examples=200, deadline=None)
@given(paulis(3), paulis(3), paulis(3))
def test_multiply_associative(a, b, c):
    lhs, rhs = (a * b) * c, a * (b * c)
    assert (lhs.x, lhs.z, lhs.phase) == (rhs.x, rhs.z, rhs.phase)


@settings(max_examples=200, deadline=None)
@given(paulis(3), paulis(3))
def test_multiply_matches_matrices(a, b):
    assert np.allclose(as_matrix(a * b), as_matrix(a) @ as_matrix(b))


@settings(max_examples=200, deadline=None)
@given(paulis(3), paulis(3), paulis(3))
def test_commutation_symmetric_and_bilinear(a, b, c):
    assert commutes(a, b) == commutes(b, a)
    assert commutes(a, b) != anticommute(a, b)
    # (a*b) vs c anticommutes iff exactly one of a, b does
    assert commutes(a * b, c) == (commutes(a, c) == commutes(b, c))


@settings(max_examples=100, deadline=None)
@given(st.lists(paulis(4), max_size=8))
def test_rank_matches_dense_oracle(ops):
    assert rank(ops) == gf2_rank(symplectic_rows(ops))


def _random_stabilizer_code(data, n):
    # draw commuting generators by rejection
    ops = []
    for _ in range(data.draw(st.integers(0, n))):
        p = data.draw(paulis(n))
        if not p.is_identity() and all(commutes(p, q) for q in ops):
            ops.append(p)
    return ops


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_extract_logicals_canonical(data):
    n = data.draw(st.integers(1, 4))
    stabs = _random_stabilizer_code(data, n)
    pairs = extract_logicals(stabs, n)
    assert len(pairs) + rank(stabs) == n
    ops = [p for pair in pairs for p in pair]
    for i, a in enumerate(ops):
        for j, b in enumerate(ops):
            want = (i // 2 == j // 2) and i != j
            assert (not commutes(a, b)) == want
        assert all(commutes(a, s) for s in stabs)
    assert len(pairs) == brute_logical_count([letters_of(s) for s in stabs], n)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_min_weight_matches_brute_force(data):
    n = data.draw(st.integers(1, 4))
    stabs = _random_stabilizer_code(data, n)
    pairs = extract_logicals(stabs, n)
    if not pairs:
        return
    logs = [p for pair in pairs for p in pair]
    got = min_weight_logical(stabs, logs, n).weight
    want = brute_min_weight([letters_of(s) for s in stabs], [letters_of(l) for l in logs], n, n)
    assert got == want
