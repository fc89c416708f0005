import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from twistcc.deform import BraidWord, ExchangeGeometry, TwistDiagram, braid_lattice, classify_gate, logical_action
from twistcc.holes import expected_table
from twistcc.pauli import PauliOperator, commutes
from twistcc.protocols import (
    CORRECTIONS, INPUTS, STATES, StabilizerSim, StateVector, cnot_protocol, cnot_statevector,
    encoded_cnot_protocol, fidelity, inject_and_run, injected_action, magic_protocol,
    random_clifford_differential, smallest_color_code,
)

CNOT_INPUTS = [("0", "0"), ("0", "1"), ("1", "0"), ("1", "1"), ("+", "0"), ("0", "+")]
THETAS = [0.0, math.pi / 4, math.pi / 2]


def P(n, letters):
    return PauliOperator.from_letters(letters, n)


# simulators --------------------------------------------------------------------------

def test_tableau_bell_pair():
    sim = StabilizerSim(2)
    sim.h(0)
    sim.cnot(0, 1)
    assert sim.expectation(P(2, {0: "X", 1: "X"})) == 1
    assert sim.expectation(P(2, {0: "Z", 1: "Z"})) == 1
    assert sim.expectation(P(2, {0: "Z"})) == 0
    assert sim.consistent()


def test_tableau_forced_outcome_rejected_when_fixed():
    sim = StabilizerSim(1)
    assert sim.measure_z(0, 1)[0] is None
    assert sim.measure_z(0, 0)[0] == 0


def test_statevector_cap():
    with pytest.raises(ValueError):
        StateVector(5, cap=4)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_differential_random_seeds(seed):
    rep = random_clifford_differential(circuits=5, max_n=5, depth=25, seed=seed)
    assert rep.disagreements == []


def test_differential_default_seed_sample():
    assert random_clifford_differential(circuits=300).disagreements == []


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.sampled_from("hsc"), st.integers(0, 2), st.integers(0, 2)), max_size=15))
def test_statevector_keeps_norm(gates):
    sv = StateVector(3)
    for g, a, b in gates:
        if g == "h":
            sv.h(a)
        elif g == "s":
            sv.s(a)
        elif a != b:
            sv.cnot(a, b)
    assert abs(sv.norm() - 1) < 1e-12


# CNOT by measurement ----------------------------------------------------------------

@pytest.mark.parametrize("correction", CORRECTIONS)
@pytest.mark.parametrize("c,t", CNOT_INPUTS)
def test_cnot_every_branch(c, t, correction):
    tr = cnot_protocol(c, t, correction)
    assert len(tr.branches) == 8
    assert tr.ok, [(b.m_xx, b.m_zz, b.m_x, b.detail) for b in tr.branches if not b.ok]


@pytest.mark.parametrize("correction", CORRECTIONS)
@pytest.mark.parametrize("c,t", CNOT_INPUTS)
def test_cnot_tableau_matches_amplitudes(c, t, correction):
    tab = {(b.m_xx, b.m_zz, b.m_x): b.ok for b in cnot_protocol(c, t, correction).branches}
    amps = cnot_statevector(STATES[c], STATES[t], correction)
    assert {m for m, _, _ in amps} == set(tab)
    for m, p, f in amps:
        assert abs(p - 1 / 8) < 1e-12
        assert (f > 1 - 1e-10) == tab[m]


def test_cnot_basis_example():
    # |1>|0> goes to |1>|1> on every branch, with either correction
    for corr in CORRECTIONS:
        for _, _, f in cnot_statevector(STATES["1"], STATES["0"], corr):
            assert f > 1 - 1e-10


def test_cnot_makes_bell_pair():
    for b in cnot_protocol("+", "0", "derived").branches:
        assert b.ok
    for _, _, f in cnot_statevector(STATES["+"], STATES["0"], "derived"):
        assert f > 1 - 1e-10


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-1, 1), min_size=8, max_size=8).filter(lambda v: sum(x * x for x in v) > 1e-3))
def test_derived_correction_on_random_inputs(v):
    c = np.array([v[0] + 1j * v[1], v[2] + 1j * v[3]])
    t = np.array([v[4] + 1j * v[5], v[6] + 1j * v[7]])
    if np.linalg.norm(c) < 1e-3 or np.linalg.norm(t) < 1e-3:
        return
    out = cnot_statevector(c, t, "derived")
    assert abs(sum(p for _, p, _ in out) - 1) < 1e-9
    assert all(f > 1 - 1e-9 for _, _, f in out)


def test_cnot_rejects_bad_input():
    with pytest.raises(ValueError):
        cnot_protocol("2", "0")
    with pytest.raises(ValueError):
        cnot_protocol("0", "0", "guess")


# encoded CNOT ----------------------------------------------------------------------

TABLES = (expected_table("dual_t2t4"), expected_table("primal_frame_t3t4"))


@pytest.mark.parametrize("correction", CORRECTIONS)
@pytest.mark.parametrize("c,t", CNOT_INPUTS)
def test_encoded_cnot(c, t, correction):
    tr = encoded_cnot_protocol(c, t, *TABLES, correction=correction)
    assert len(tr.branches) == 8
    assert len(tr.parity_checks) == 8 and all(tr.parity_checks)
    assert tr.ok


def test_encoded_cnot_rejects_swapped_tables():
    with pytest.raises(ValueError):
        encoded_cnot_protocol("0", "0", TABLES[1], TABLES[0])


# phase-gate injection -------------------------------------------------------------

@pytest.mark.parametrize("theta", THETAS + [0.3])
@pytest.mark.parametrize("psi", ["0", "1", "+"])
def test_magic_branches(theta, psi):
    rep = magic_protocol(theta, psi)
    assert rep.ok(1e-10)
    assert [b.outcome for b in rep.branches] == [0, 1]


def test_magic_t_gate_correction():
    rep = magic_protocol(math.pi / 4, "+")
    one = rep.branches[1]
    assert one.corrected_fidelity > 1 - 1e-10
    # without the S the outcome-1 state is the conjugate rotation
    t = np.diag([1, np.exp(1j * math.pi / 4)]) @ STATES["+"]
    assert fidelity(one.state, t) < 0.9


@settings(max_examples=30, deadline=None)
@given(st.floats(0, 2 * math.pi), st.floats(0, math.pi), st.floats(0, 2 * math.pi))
def test_magic_outcome_zero_applies_rotation(theta, a, b):
    psi = np.array([math.cos(a / 2), np.exp(1j * b) * math.sin(a / 2)])
    rep = magic_protocol(theta, psi)
    assert abs(rep.branches[0].probability - 0.5) < 1e-10
    assert rep.branches[0].fidelity > 1 - 1e-10


def four_two_two():
    n = 4
    stabs = [P(n, {q: "X" for q in range(4)}), P(n, {q: "Z" for q in range(4)})]
    logicals = [(P(n, {0: "X", 1: "X"}), P(n, {0: "Z", 2: "Z"})),
                (P(n, {0: "X", 2: "X"}), P(n, {0: "Z", 1: "Z"}))]
    return stabs, logicals


@pytest.fixture(scope="module")
def color_code():
    return smallest_color_code()


def test_smallest_color_code_has_two_qubits(color_code):
    code, lg = color_code
    assert len(lg) == 2
    for x, z in lg:
        assert not commutes(x, z)
        assert all(commutes(x, s) and commutes(z, s) for s in code.stabilizers)


@pytest.mark.parametrize("theta", THETAS)
@pytest.mark.parametrize("psi", ["0", "1", "+"])
def test_injection_on_color_code(color_code, theta, psi):
    code, lg = color_code
    rep = inject_and_run(theta, code.stabilizers, lg, psi=psi)
    assert rep.route == "tableau" and rep.n == code.n
    assert rep.ok(1e-10)


@pytest.mark.parametrize("theta", THETAS + [1.1])
def test_injection_routes_agree(theta):
    stabs, lg = four_two_two()
    sv = inject_and_run(theta, stabs, lg, route="statevector")
    tab = inject_and_run(theta, stabs, lg, route="tableau")
    assert sv.ok() and tab.ok()
    for a, b in zip(sv.branches, tab.branches):
        assert abs(a.probability - b.probability) < 1e-12
        assert fidelity(a.state, b.state) > 1 - 1e-10


def test_injection_rejects_one_qubit():
    stabs, lg = four_two_two()
    with pytest.raises(ValueError):
        inject_and_run(0.0, stabs, lg[:1])


def test_injected_clifford_angles(color_code):
    code, lg = color_code
    assert classify_gate(injected_action(math.pi / 2, code.stabilizers, lg)) == "S"
    assert classify_gate(injected_action(0.0, code.stabilizers, lg)) == "identity"
    with pytest.raises(ValueError):
        injected_action(math.pi / 4, code.stabilizers, lg)


def test_injected_s_matches_braided_s(color_code):
    # two independent routes to the phase gate must act alike
    code, lg = color_code
    injected = injected_action(math.pi / 2, code.stabilizers, lg)
    braided = logical_action(TwistDiagram(4), BraidWord.of((1, 2)))
    assert injected.images == braided.images[:2]


def test_injected_s_matches_lattice_braid(color_code, engine_comparison):
    code, lg = color_code
    small, _ = engine_comparison
    injected = injected_action(math.pi / 2, code.stabilizers, lg)
    lattice = braid_lattice(small, BraidWord.of((1, 2)), ExchangeGeometry(2, 1))
    assert classify_gate(lattice) == classify_gate(injected)


def test_inputs_constant():
    assert INPUTS == ("0", "1", "+", "-")
