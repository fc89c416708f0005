import pytest
from hypothesis import given, settings, strategies as st

from twistcc.charge_twists import equivalent_modulo
from twistcc.deform import (
    Braid, BraidError, BraidWord, DeformationState, ExchangeGeometry, LogicalAction, TwistDiagram,
    braid_lattice, braid_rewrite, classify_gate, deform_step, logical_action, named_action, slot_vector,
    small_braiding_code,
)
from twistcc.colex import dual

# claimed actions of braid words, as symplectic images on the canonical qubits
CLAIMS = [
    ("phase", 4, [(1, 2)], named_action("S", 1, (1,))),
    ("x-rotation", 4, [(1, 3)], named_action("√X", 1, (1,))),
    ("same-block entangler", 6, [(3, 4)], named_action("CZ·(S⊗S)", 2, (1, 2))),
    ("adjacent CZ", 6, [(3, 4), (1, 2), (5, 6)], named_action("CZ", 2, (1, 2))),
    # qubits in creation order: a = t1-3, c = t4-6, b = t7-9, d = t10-12
    ("nonadjacent CZ", 12, [(3, 9), (1, 2), (7, 8)], named_action("CZ", 4, (1, 3))),
    ("entangler a,d", 12, [(3, 10)], named_action("CZ·(S⊗S)", 4, (1, 4))),
    ("entangler b,c", 12, [(4, 9)], named_action("CZ·(S⊗S)", 4, (3, 2))),
    ("entangler b,d", 12, [(4, 10)], named_action("CZ·(S⊗S)", 4, (3, 4))),
]


@pytest.mark.parametrize("name,t,word,want", CLAIMS, ids=[c[0] for c in CLAIMS])
def test_claimed_braid_actions(name, t, word, want):
    got = logical_action(TwistDiagram(t), BraidWord.of(*word))
    assert got.is_symplectic()
    assert got.images == want.images, got.table()
    assert classify_gate(got) == classify_gate(want)


def test_named_actions_classify_to_themselves():
    for name in ("S", "√X", "H"):
        assert classify_gate(named_action(name)) == name
    for name in ("CZ", "CNOT", "CZ·(S⊗S)"):
        assert classify_gate(named_action(name, 2, (1, 2))) == name
    assert classify_gate(LogicalAction.identity(3)) == "identity"


def test_phase_squared_is_pauli_class():
    s = named_action("S")
    sq = s.then(s)
    assert sq.is_symplectic()
    assert sq.images == LogicalAction.identity(1).images
    assert classify_gate(sq) in ("identity", "Pauli")


def test_rewrite_keeps_enclosing_string():
    d = TwistDiagram(6)
    d.strings = {"b12": d.string("b", 1, 2), "g13": d.string("g", 1, 3), "g46": d.string("g", 4, 6)}
    after = braid_rewrite(d, Braid(1, 2))
    assert after.strings["b12"] == d.strings["b12"]
    assert after.strings["g13"] == slot_vector("g", (1, 2))
    after = braid_rewrite(d, Braid(3, 4))
    assert after.strings["g13"] == slot_vector("g", (0, 3))
    assert after.strings["g46"] == slot_vector("g", (2, 5))


def test_rewrite_is_symmetric_in_labels():
    d = TwistDiagram(4)
    assert d.string("r", 1, 3) == d.string("r", 3, 1)


def test_braid_script_parsing():
    word = BraidWord.parse("# demo\nbraid 1 2\nbraid 3 4 cw\n\nbraid 2 1 ccw  # back\n")
    assert [(b.i, b.j, b.ccw) for b in word] == [(1, 2, True), (3, 4, False), (2, 1, True)]
    for bad in ("swap 1 2", "braid 1", "braid 1 2 up"):
        with pytest.raises(BraidError):
            BraidWord.parse(bad)
    with pytest.raises(BraidError):
        BraidWord.of((1, 1)).validate(4)
    with pytest.raises(BraidError):
        BraidWord.of((1, 5)).validate(4)


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([4, 6, 12]), st.data())
def test_string_actions_are_symplectic(t, data):
    pairs = st.tuples(st.integers(1, t), st.integers(1, t)).filter(lambda p: p[0] != p[1])
    ws = data.draw(st.lists(pairs, min_size=1, max_size=5))
    act = logical_action(TwistDiagram(t), BraidWord.of(*ws))
    # the action on the whole frame (logical and gauge pairs) is symplectic;
    # the logical block alone is not when the braid trades logical for gauge
    assert LogicalAction(act.full_m, act.full).is_symplectic()
    if not act.is_symplectic():
        assert act.leaks and classify_gate(act) == "other"


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(7, 12), st.integers(7, 12)).filter(lambda p: p[0] != p[1]),
                min_size=1, max_size=4))
def test_braids_in_one_block_leave_other_blocks_alone(ws):
    act = logical_action(TwistDiagram(12), BraidWord.of(*ws))
    for q in (0, 1):
        assert act.images[q] == 1 << q
        assert act.images[4 + q] == 1 << (4 + q)


# lattice engine ------------------------------------------------------------------

@pytest.fixture(scope="module")
def small():
    return small_braiding_code(4)


def test_empty_word_is_identity(small):
    act = braid_lattice(small, BraidWord([]), ExchangeGeometry(2, 1))
    assert classify_gate(act) == "identity"


def test_double_exchange_is_pauli_class(small):
    act = braid_lattice(small, BraidWord.of((1, 2), (1, 2)), ExchangeGeometry(2, 1))
    assert act.is_symplectic()
    assert classify_gate(act) in ("identity", "Pauli")


def test_lattice_x_rotation_claim(small):
    act = braid_lattice(small, BraidWord.of((1, 3)), ExchangeGeometry(2, 1))
    assert classify_gate(act) == "√X"


def test_step_and_back_is_stabilizer_trivial(small):
    code = small
    from twistcc.deform import lattice_frame
    lf = lattice_frame(code)
    ops = [p for pair in lf.all_pairs for p in pair]
    state = DeformationState.start(code, ops)
    src = state.twists[0]
    adj = dual(code.lattice).adjacency()
    target = next(f for f in adj[src] if f != code.lattice.outer_face and f not in state.twists
                  and f not in code.wall_faces)
    there, _ = deform_step(state, 1, target)
    back, _ = deform_step(there, 1, src)
    assert back.cut == state.cut
    for a, b in zip(ops, back.tracked):
        assert equivalent_modulo(a, b, code.stabilizers)


def test_step_rejects_bad_targets(small):
    state = DeformationState.start(small)
    with pytest.raises(BraidError):
        deform_step(state, 1, small.lattice.outer_face)
    with pytest.raises(BraidError):
        deform_step(state, 1, state.twists[1])


def test_engines_agree(engine_comparison):
    _, rows = engine_comparison
    ran = [r for r in rows if r.executable]
    assert ran, "no braid word could be laid out"
    bad = [(tuple(str(b) for b in r.word), r.lattice_label, r.string_label) for r in ran if not r.agree]
    assert not bad, bad[:5]
