"""Exact checks of the measurement-based CNOT and the phase-gate injection.

Two simulators back the checks: a stabilizer tableau (destabilizer and
stabilizer rows held as PauliOperator values) and a dense state vector.
Every measurement branch is enumerated; nothing is sampled.
"""
from __future__ import annotations

import cmath
import itertools
import logging
import math
import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .pauli import PauliOperator, symplectic_product

log = logging.getLogger(__name__)

STATE_CAP = 12


# tableau ------------------------------------------------------------------

def _conj_h(p: PauliOperator, q: int) -> PauliOperator:
    x, z = (p.x >> q) & 1, (p.z >> q) & 1
    nx = (p.x & ~(1 << q)) | (z << q)
    nz = (p.z & ~(1 << q)) | (x << q)
    return PauliOperator(p.n, nx, nz, p.phase + 2 * (x & z))


def _conj_s(p: PauliOperator, q: int) -> PauliOperator:
    x = (p.x >> q) & 1
    return PauliOperator(p.n, p.x, p.z ^ (x << q), p.phase + x)


def _conj_cnot(p: PauliOperator, c: int, t: int) -> PauliOperator:
    x, z = p.x, p.z
    x ^= ((x >> c) & 1) << t
    z ^= ((z >> t) & 1) << c
    return PauliOperator(p.n, x, z, p.phase)


def _conj_pauli(p: PauliOperator, g: PauliOperator) -> PauliOperator:
    return PauliOperator(p.n, p.x, p.z, p.phase + 2 * symplectic_product(p, g))


class StabilizerSim:
    """Tableau simulator for stabilizer states on n qubits, starting in |0...0>."""

    def __init__(self, n: int):
        self.n = n
        self.destab = [PauliOperator(n, 1 << q, 0) for q in range(n)]
        self.stab = [PauliOperator(n, 0, 1 << q) for q in range(n)]

    def copy(self) -> "StabilizerSim":
        s = StabilizerSim.__new__(StabilizerSim)
        s.n, s.destab, s.stab = self.n, list(self.destab), list(self.stab)
        return s

    def _map(self, f) -> None:
        self.destab = [f(p) for p in self.destab]
        self.stab = [f(p) for p in self.stab]

    def h(self, q: int) -> None:
        self._map(lambda p: _conj_h(p, q))

    def s(self, q: int) -> None:
        self._map(lambda p: _conj_s(p, q))

    def sdg(self, q: int) -> None:
        for _ in range(3):
            self.s(q)

    def cnot(self, c: int, t: int) -> None:
        if c == t:
            raise ValueError("control and target coincide")
        self._map(lambda p: _conj_cnot(p, c, t))

    def cz(self, a: int, b: int) -> None:
        self.h(b)
        self.cnot(a, b)
        self.h(b)

    def pauli(self, g: PauliOperator) -> None:
        """Apply a Pauli operator to the state."""
        self._map(lambda p: _conj_pauli(p, g))

    def x(self, q: int) -> None:
        self.pauli(PauliOperator(self.n, 1 << q, 0))

    def z(self, q: int) -> None:
        self.pauli(PauliOperator(self.n, 0, 1 << q))

    def _deterministic(self, P: PauliOperator) -> Optional[int]:
        if any(symplectic_product(P, s) for s in self.stab):
            return None
        acc = PauliOperator.identity(self.n)
        for d, s in zip(self.destab, self.stab):
            if symplectic_product(P, d):
                acc = acc * s
        diff = (acc.phase - P.phase) % 4
        if diff not in (0, 2):
            raise ArithmeticError("non-Hermitian tableau row")
        return diff // 2

    def expectation(self, P: PauliOperator) -> int:
        """+1, -1, or 0 when the outcome is random."""
        d = self._deterministic(P)
        return 0 if d is None else (1 - 2 * d)

    def measure(self, P: PauliOperator, forced: Optional[int] = None) -> Tuple[Optional[int], bool]:
        """Measure a Hermitian Pauli.  Returns (outcome, was_random).

        ``forced`` picks the outcome of a random measurement; if the outcome
        is determined and differs, (None, False) marks an impossible branch.
        """
        d = self._deterministic(P)
        if d is not None:
            if forced is not None and forced != d:
                return None, False
            return d, False
        p = next(i for i, s in enumerate(self.stab) if symplectic_product(P, s))
        row = self.stab[p]
        for i in range(self.n):
            if i != p and symplectic_product(P, self.stab[i]):
                self.stab[i] = self.stab[i] * row
            if i != p and symplectic_product(P, self.destab[i]):
                self.destab[i] = self.destab[i] * row
        self.destab[p] = row
        out = 0 if forced is None else forced
        self.stab[p] = PauliOperator(self.n, P.x, P.z, P.phase + 2 * out)
        return out, True

    def measure_z(self, q: int, forced: Optional[int] = None):
        return self.measure(PauliOperator(self.n, 0, 1 << q), forced)

    def measure_x(self, q: int, forced: Optional[int] = None):
        return self.measure(PauliOperator(self.n, 1 << q, 0), forced)

    def stabilizers(self) -> List[PauliOperator]:
        return list(self.stab)

    def consistent(self) -> bool:
        for i in range(self.n):
            for j in range(self.n):
                if symplectic_product(self.stab[i], self.stab[j]):
                    return False
                if symplectic_product(self.destab[i], self.stab[j]) != (i == j):
                    return False
        return True


# state vector ---------------------------------------------------------------

class StateVector:
    """Dense amplitudes; qubit q is bit q of the basis index."""

    def __init__(self, n: int, cap: int = STATE_CAP):
        if n > cap:
            raise ValueError(f"{n} qubits exceed the state-vector cap of {cap}")
        self.n = n
        self.psi = np.zeros(1 << n, dtype=complex)
        self.psi[0] = 1.0
        self._idx = np.arange(1 << n)

    def copy(self) -> "StateVector":
        s = StateVector.__new__(StateVector)
        s.n, s.psi, s._idx = self.n, self.psi.copy(), self._idx
        return s

    @classmethod
    def from_amplitudes(cls, amps, cap: int = STATE_CAP) -> "StateVector":
        amps = np.asarray(amps, dtype=complex)
        n = int(round(math.log2(len(amps))))
        s = cls(n, cap)
        s.psi = amps / np.linalg.norm(amps)
        return s

    def norm(self) -> float:
        return float(np.linalg.norm(self.psi))

    def gate1(self, q: int, U) -> None:
        U = np.asarray(U, dtype=complex)
        bit = (self._idx >> q) & 1
        lo = self._idx[bit == 0]
        hi = lo | (1 << q)
        a, b = self.psi[lo].copy(), self.psi[hi].copy()
        self.psi[lo] = U[0, 0] * a + U[0, 1] * b
        self.psi[hi] = U[1, 0] * a + U[1, 1] * b

    def h(self, q: int) -> None:
        r = 1 / math.sqrt(2)
        self.gate1(q, [[r, r], [r, -r]])

    def s(self, q: int) -> None:
        self.phase(q, math.pi / 2)

    def phase(self, q: int, theta: float) -> None:
        """Apply diag(1, e^{i theta}) to qubit q."""
        self.gate1(q, [[1, 0], [0, cmath.exp(1j * theta)]])

    def cnot(self, c: int, t: int) -> None:
        sel = ((self._idx >> c) & 1).astype(bool)
        src = self._idx[sel]
        new = self.psi.copy()
        new[src] = self.psi[src ^ (1 << t)]
        self.psi = new

    def pauli(self, g: PauliOperator) -> None:
        self.psi = self.apply(g)

    def apply(self, g: PauliOperator) -> np.ndarray:
        """g|psi> without changing the state."""
        signs = np.array([(-1) ** bin(i & g.z).count("1") for i in range(1 << self.n)])
        out = np.empty_like(self.psi)
        out[self._idx ^ g.x] = self.psi * signs
        return out * (1j ** g.phase)

    def apply_to(self, vec: np.ndarray, g: PauliOperator) -> np.ndarray:
        keep = self.psi
        self.psi = vec
        try:
            return self.apply(g)
        finally:
            self.psi = keep

    def x(self, q: int) -> None:
        self.pauli(PauliOperator(self.n, 1 << q, 0))

    def z(self, q: int) -> None:
        self.pauli(PauliOperator(self.n, 0, 1 << q))

    def expectation(self, g: PauliOperator) -> float:
        return float(np.real(np.vdot(self.psi, self.apply(g))))

    def probability(self, g: PauliOperator, outcome: int) -> float:
        return (1 + (1 - 2 * outcome) * self.expectation(g)) / 2

    def measure(self, g: PauliOperator, outcome: int) -> float:
        """Project onto the given outcome; returns its probability (state left
        unnormalised only when the probability is zero)."""
        proj = (self.psi + (1 - 2 * outcome) * self.apply(g)) / 2
        p = float(np.real(np.vdot(proj, proj)))
        self.psi = proj / math.sqrt(p) if p > 1e-15 else proj
        return p

    def measure_z(self, q: int, outcome: int) -> float:
        return self.measure(PauliOperator(self.n, 0, 1 << q), outcome)

    def reduced(self, keep: Sequence[int]) -> np.ndarray:
        """Pure state of ``keep`` when the rest is in a product basis state."""
        rest = [q for q in range(self.n) if q not in keep]
        best = None
        for bits in itertools.product((0, 1), repeat=len(rest)):
            base = sum(b << q for b, q in zip(bits, rest))
            vec = np.array([self.psi[base | sum(((i >> k) & 1) << q for k, q in enumerate(keep))]
                            for i in range(1 << len(keep))])
            if best is None or np.linalg.norm(vec) > np.linalg.norm(best):
                best = vec
        return best / np.linalg.norm(best)


def fidelity(a, b) -> float:
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    return float(abs(np.vdot(a / np.linalg.norm(a), b / np.linalg.norm(b))) ** 2)


# random differential testing -----------------------------------------------------

@dataclass
class DiffReport:
    circuits: int
    disagreements: List[str] = field(default_factory=list)


def random_clifford_differential(circuits: int = 10_000, max_n: int = 8, depth: int = 20, seed: int = 7) -> DiffReport:
    """Run random Clifford circuits with measurements on both simulators and
    compare outcome probabilities and final stabilizer expectations."""
    rng = random.Random(seed)
    rep = DiffReport(circuits)
    for c in range(circuits):
        n = rng.randint(1, max_n)
        tab, sv = StabilizerSim(n), StateVector(n)
        for _ in range(depth):
            k = rng.random()
            q = rng.randrange(n)
            if k < 0.3:
                tab.h(q), sv.h(q)
            elif k < 0.55:
                tab.s(q), sv.s(q)
            elif k < 0.8 and n > 1:
                t = rng.choice([i for i in range(n) if i != q])
                tab.cnot(q, t), sv.cnot(q, t)
            elif k < 0.9:
                g = PauliOperator(n, rng.getrandbits(n), rng.getrandbits(n), 0)
                g = PauliOperator(n, g.x, g.z, g.phase + popcount_and(g.x, g.z))
                tab.pauli(g), sv.pauli(g)
            else:
                g = PauliOperator(n, rng.getrandbits(n), rng.getrandbits(n), 0)
                if not (g.x or g.z):
                    continue
                g = PauliOperator(n, g.x, g.z, popcount_and(g.x, g.z))
                exp_t = tab.expectation(g)
                p0 = sv.probability(g, 0)
                want = {1: 1.0, -1: 0.0, 0: 0.5}[exp_t]
                if abs(p0 - want) > 1e-9:
                    rep.disagreements.append(f"circuit {c}: outcome probability {p0} vs {want}")
                    break
                out = rng.randint(0, 1) if exp_t == 0 else (0 if exp_t == 1 else 1)
                tab.measure(g, out)
                sv.measure(g, out)
        for s in tab.stabilizers():
            e = sv.expectation(s)
            if abs(e - 1) > 1e-9:
                rep.disagreements.append(f"circuit {c}: stabilizer expectation {e} vs 1")
                break
        if abs(sv.norm() - 1) > 1e-12:
            rep.disagreements.append(f"circuit {c}: norm drift {sv.norm()}")
    return rep


def popcount_and(a: int, b: int) -> int:
    return bin(a & b).count("1")


# CNOT by joint measurements -------------------------------------------------------

INPUTS = ("0", "1", "+", "-")


def _prepare(sim, q: int, label: str) -> None:
    if label in ("1", "-"):
        sim.x(q)
    if label in ("+", "-"):
        sim.h(q)


@dataclass
class Branch:
    m_xx: int
    m_zz: int
    m_x: int
    ok: bool
    detail: str = ""


@dataclass
class CnotTranscript:
    control: str
    target: str
    branches: List[Branch]
    correction: str

    @property
    def ok(self) -> bool:
        return bool(self.branches) and all(b.ok for b in self.branches)


def _pauli(n: int, letters: Dict[int, str]) -> PauliOperator:
    return PauliOperator.from_letters(letters, n)


def _expected_stabilizers(c: str, t: str) -> List[PauliOperator]:
    """Stabilizers of CNOT|c>|t> (qubits 0, 1) with the ancilla (qubit 2) in |+>."""
    sim = StabilizerSim(3)
    _prepare(sim, 0, c)
    _prepare(sim, 1, t)
    sim.cnot(0, 1)
    sim.h(2)
    return sim.stabilizers()


CORRECTIONS = ("stated", "derived")


def _correct(sim, mxx: int, mzz: int, mx: int, correction: str, c: int = 0, t: int = 1, a: int = 2) -> None:
    """Undo the byproducts of the three measurements.

    ``stated``: X^m_zz and Z^m_xx on the target, Z^m_x on the ancilla.
    ``derived``: X^m_zz on the target, Z^(m_xx+m_x) on the control and
    Z^m_x on the ancilla, which is what branch enumeration demands once the
    inputs are superpositions.
    """
    if correction not in CORRECTIONS:
        raise ValueError(f"correction is one of {CORRECTIONS}")
    if mzz:
        sim.x(t)
    if correction == "stated":
        if mxx:
            sim.z(t)
    elif mxx ^ mx:
        sim.z(c)
    if mx:
        sim.z(a)


def cnot_protocol(c_state: str, t_state: str, correction: str = "stated") -> CnotTranscript:
    """Measurement-based CNOT on control 0, target 1, ancilla 2.

    Steps: ancilla |0>; measure X_t X_a (m_xx); measure Z_c Z_a (m_zz);
    read the ancilla out in the X basis (m_x); correct per ``correction``.
    Each reachable outcome triple is checked against CNOT|c>|t> with the
    ancilla left in |+>.
    """
    if c_state not in INPUTS or t_state not in INPUTS:
        raise ValueError("inputs are 0, 1, + or -")
    want = _expected_stabilizers(c_state, t_state)
    base = StabilizerSim(3)
    _prepare(base, 0, c_state)
    _prepare(base, 1, t_state)
    branches = []
    for mxx, mzz, mx in itertools.product((0, 1), repeat=3):
        sim = base.copy()
        r1, _ = sim.measure(_pauli(3, {1: "X", 2: "X"}), mxx)
        if r1 is None:
            continue
        r2, _ = sim.measure(_pauli(3, {0: "Z", 2: "Z"}), mzz)
        if r2 is None:
            continue
        r3, _ = sim.measure_x(2, mx)
        if r3 is None:
            continue
        _correct(sim, mxx, mzz, mx, correction)
        bad = [p for p in want if sim.expectation(p) != 1]
        branches.append(Branch(mxx, mzz, mx, not bad,
                               "" if not bad else "violated: " + ", ".join(str(p) for p in bad)))
    return CnotTranscript(c_state, t_state, branches, correction)


def cnot_statevector(c_amps, t_amps, correction: str = "stated") -> List[Tuple[Tuple[int, int, int], float, float]]:
    """The same protocol on amplitudes: (outcomes, probability, fidelity with CNOT)."""
    c_amps = np.asarray(c_amps, dtype=complex)
    t_amps = np.asarray(t_amps, dtype=complex)
    data = np.kron(t_amps, c_amps)  # index bit 0 = control, bit 1 = target
    init = np.kron(np.array([1, 0], dtype=complex), data)
    want = data.copy()
    for i in range(4):
        if i & 1:
            want[i] = data[i ^ 2]
    out = []
    for mxx, mzz, mx in itertools.product((0, 1), repeat=3):
        sv = StateVector.from_amplitudes(init)
        p = sv.measure(_pauli(3, {1: "X", 2: "X"}), mxx)
        p *= sv.measure(_pauli(3, {0: "Z", 2: "Z"}), mzz)
        p *= sv.measure(PauliOperator(3, 1 << 2, 0), mx)
        if p < 1e-12:
            continue
        _correct(sv, mxx, mzz, mx, correction)
        sv.h(2)  # ancilla |+> -> |0> so the data can be read off
        out.append(((mxx, mzz, mx), p, fidelity(sv.reduced([0, 1]), want)))
    return out


# encoded CNOT via hole braids ---------------------------------------------------------

@dataclass
class EncodedTranscript:
    inputs: Tuple[str, str]
    branches: List[Branch]
    parity_checks: List[bool]

    @property
    def ok(self) -> bool:
        return bool(self.branches) and all(b.ok for b in self.branches) and all(self.parity_checks)


def _table_gate(table: Dict[str, str]) -> str:
    """Name the two-qubit gate (twist T, hole H) a braid table realises."""
    from .holes import expected_table, same_table
    if same_table(table, expected_table("dual_t2t4")):
        return "x-parity"
    if same_table(table, expected_table("primal_frame_t3t4")):
        return "z-parity"
    raise ValueError(f"braid table is not a twist-controlled parity gate: {table}")


def _apply_braid_gate(sim: StabilizerSim, kind: str, twist: int, hole: int) -> None:
    if kind == "x-parity":
        sim.h(twist)
        sim.cnot(twist, hole)
        sim.h(twist)
    else:
        sim.cnot(twist, hole)


def encoded_cnot_protocol(c_state: str, t_state: str, x_table: Dict[str, str],
                          z_table: Dict[str, str], correction: str = "stated") -> EncodedTranscript:
    """Encoded CNOT on twist qubits C=0, T=1, A=2 and fresh hole qubits
    3, 4, 5, one per measurement step.

    ``x_table`` and ``z_table`` are hole-twist braid tables measured on the
    lattice.  A hole looped around the twists carrying X_T X_A acts as the
    ``x_table`` gate once per encircled twist qubit, and likewise for
    Z_C Z_A with ``z_table``.  The step-4 readout of the ancilla is a loop
    around the twists of X_A.  Each hole starts in |0> and is read in Z.
    """
    gx, gz = _table_gate(x_table), _table_gate(z_table)
    if gx != "x-parity" or gz != "z-parity":
        raise ValueError("tables are in the wrong roles")
    want = [PauliOperator(6, p.x, p.z, p.phase) for p in _expected_stabilizers(c_state, t_state)]
    base = StabilizerSim(6)
    _prepare(base, 0, c_state)
    _prepare(base, 1, t_state)
    branches, parity = [], []
    for mxx, mzz, mx in itertools.product((0, 1), repeat=3):
        sim = base.copy()
        _apply_braid_gate(sim, gx, 1, 3)
        _apply_braid_gate(sim, gx, 2, 3)
        before = sim.expectation(_pauli(6, {1: "X", 2: "X"}))
        r1, _ = sim.measure_z(3, mxx)
        if r1 is None:
            continue
        # the hole outcome is the X_T X_A parity, fixed or freshly projected
        after = sim.expectation(_pauli(6, {1: "X", 2: "X"}))
        parity.append(after == 1 - 2 * r1 and before in (0, after))
        _apply_braid_gate(sim, gz, 0, 4)
        _apply_braid_gate(sim, gz, 2, 4)
        r2, _ = sim.measure_z(4, mzz)
        if r2 is None:
            continue
        _apply_braid_gate(sim, gx, 2, 5)
        r3, _ = sim.measure_z(5, mx)
        if r3 is None:
            continue
        _correct(sim, mxx, mzz, mx, correction)
        bad = [p for p in want if sim.expectation(p) != 1]
        branches.append(Branch(mxx, mzz, mx, not bad,
                               "" if not bad else "violated: " + ", ".join(str(p) for p in bad)))
    return EncodedTranscript((c_state, t_state), branches, parity)


# phase-gate injection --------------------------------------------------------------

@dataclass
class MagicBranch:
    outcome: int
    probability: float
    fidelity: float
    corrected_fidelity: Optional[float] = None
    state: Optional[np.ndarray] = field(default=None, repr=False)


@dataclass
class MagicReport:
    theta: float
    branches: List[MagicBranch]

    def ok(self, tol: float = 1e-10) -> bool:
        if len(self.branches) != 2:
            return False
        for b in self.branches:
            if abs(b.probability - 0.5) > tol or b.fidelity < 1 - tol:
                return False
            if b.corrected_fidelity is not None and b.corrected_fidelity < 1 - tol:
                return False
        return True


STATES = {
    "0": np.array([1, 0], dtype=complex),
    "1": np.array([0, 1], dtype=complex),
    "+": np.array([1, 1], dtype=complex) / math.sqrt(2),
    "-": np.array([1, -1], dtype=complex) / math.sqrt(2),
}


def _lam(theta: float) -> np.ndarray:
    return np.diag([1, cmath.exp(1j * theta)])


def magic_protocol(theta: float, psi) -> MagicReport:
    """Data qubit 0 controls a CNOT onto the ancilla (|0> + e^{i theta}|1>)/sqrt2,
    which is then measured in Z.

    Outcome 0 leaves diag(1, e^{i theta}) psi, outcome 1 its conjugate up to
    phase; for theta = pi/4 an S on outcome 1 restores the T gate.
    """
    psi = STATES[psi] if isinstance(psi, str) else np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    anc = np.array([1, cmath.exp(1j * theta)], dtype=complex) / math.sqrt(2)
    init = np.kron(anc, psi)
    branches = []
    for m in (0, 1):
        sv = StateVector.from_amplitudes(init)
        sv.cnot(0, 1)
        p = sv.measure_z(1, m)
        branches.append(_branch(theta, m, sv.reduced([0]) * math.sqrt(p), psi))
    return MagicReport(theta, branches)


# encoded injection -------------------------------------------------------------------

@dataclass
class InjectionReport:
    theta: float
    n: int
    route: str
    branches: List[MagicBranch]
    deterministic_readout: bool

    def ok(self, tol: float = 1e-10) -> bool:
        return self.deterministic_readout and MagicReport(self.theta, self.branches).ok(tol)


def _basis_tableau(n: int, stabs: Sequence[PauliOperator], zbars: Sequence[PauliOperator],
                   bits: Sequence[int]) -> StabilizerSim:
    """Tableau of the logical basis state |bits>, reached from |+...+> by
    measuring every stabilizer (outcome 0) and each logical Z."""
    sim = StabilizerSim(n)
    for q in range(n):
        sim.h(q)
    for s in stabs:
        if sim.measure(s, 0)[0] is None:
            raise ValueError("stabilizers are inconsistent")
    for z, b in zip(zbars, bits):
        if sim.measure(z, b)[0] is None:
            raise ValueError("logical Z is fixed by the stabilizers")
    return sim


def _branch(theta: float, m: int, data: np.ndarray, psi: np.ndarray) -> MagicBranch:
    p = float(np.vdot(data, data).real)
    target = _lam(theta if m == 0 else -theta) @ psi
    b = MagicBranch(m, p, fidelity(data, target) if p > 1e-15 else 0.0)
    b.state = data / math.sqrt(p) if p > 1e-15 else data
    if m == 1 and abs(theta - math.pi / 4) < 1e-12:
        b.corrected_fidelity = fidelity(_lam(math.pi / 2) @ data, _lam(theta) @ psi)
    return b


def _inject_tableau(theta, stabilizers, logicals, psi, anc) -> Tuple[List[MagicBranch], bool]:
    n = logicals[0][0].n
    (_, z0), (x1, z1) = logicals[0], logicals[1]
    moved = {}
    for a, b in itertools.product((0, 1), repeat=2):
        sim = _basis_tableau(n, stabilizers, [z0, z1], [a, b])
        if a:
            sim.pauli(x1)  # encoded CNOT, data controls the ancilla
        moved[(a, b ^ a)] = (psi[a] * anc[b], sim)
    deterministic = True
    branches = []
    for m in (0, 1):
        data = np.zeros(2, dtype=complex)
        for (a, b), (amp, sim) in moved.items():
            e1, e0 = sim.expectation(z1), sim.expectation(z0)
            if e1 == 0 or e0 == 0 or (1 - e1) // 2 != b or (1 - e0) // 2 != a:
                deterministic = False
            if b == m:
                data[a] += amp
        branches.append(_branch(theta, m, data, psi))
    return branches, deterministic


def _inject_statevector(theta, stabilizers, logicals, psi, anc, cap) -> Tuple[List[MagicBranch], bool]:
    n = logicals[0][0].n
    (x0, z0), (x1, z1) = logicals[0], logicals[1]
    code = StateVector(n, cap)
    for q in range(n):
        code.h(q)
    for s in stabilizers:
        if code.measure(s, 0) < 1e-12:
            raise ValueError("stabilizers are inconsistent")
    code.measure(z0, 0)
    code.measure(z1, 0)
    basis = {}
    for a, b in itertools.product((0, 1), repeat=2):
        v = code.copy()
        if a:
            v.pauli(x0)
        if b:
            v.pauli(x1)
        basis[(a, b)] = v.psi
    sv = code.copy()
    sv.psi = sum(psi[a] * anc[b] * basis[(a, b)] for a, b in basis)
    # CNOT as (1 + Z0)/2 + (1 - Z0)/2 X1 built from logical operators
    low = (sv.psi + sv.apply(z0)) / 2
    high = (sv.psi - sv.apply(z0)) / 2
    sv.psi = low + sv.apply_to(high, x1)
    branches = []
    deterministic = True
    for m in (0, 1):
        w = sv.copy()
        p = w.measure(z1, m)
        data = np.array([np.vdot(basis[(a, m)], w.psi) for a in (0, 1)]) * math.sqrt(p)
        if abs(np.vdot(data, data).real - p) > 1e-9:
            deterministic = False
        branches.append(_branch(theta, m, data, psi))
    return branches, deterministic


def inject_and_run(theta: float, stabilizers: Sequence[PauliOperator],
                   logicals: Sequence[Tuple[PauliOperator, PauliOperator]], psi="+",
                   cap: int = STATE_CAP, route: Optional[str] = None) -> InjectionReport:
    """Phase-gate injection on a code with (at least) two logical qubits.

    Logical qubit 0 holds the data and qubit 1 the ancilla, prepared ideally
    in (|0> + e^{i theta}|1>)/sqrt2.  The encoded CNOT is the logical
    operator (1 + Z0)/2 + (1 - Z0)/2 X1, then Z1 is measured.

    ``statevector`` works on all n physical qubits and needs n <= cap.
    ``tableau`` keeps one physical stabilizer tableau per logical basis
    state and tracks the four amplitudes; it has no size limit.
    """
    if len(logicals) < 2:
        raise ValueError("need two logical qubits")
    n = logicals[0][0].n
    route = route or ("statevector" if n <= cap else "tableau")
    psi = STATES[psi] if isinstance(psi, str) else np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    anc = np.array([1, cmath.exp(1j * theta)]) / math.sqrt(2)
    if route == "statevector":
        branches, det = _inject_statevector(theta, stabilizers, logicals, psi, anc, cap)
    elif route == "tableau":
        branches, det = _inject_tableau(theta, stabilizers, logicals, psi, anc)
    else:
        raise ValueError(f"unknown route {route!r}")
    return InjectionReport(theta, n, route, branches, det)


def injected_action(theta: float, stabilizers, logicals, **kw):
    """Symplectic action of the outcome-0 logical map, for Clifford angles.

    The map is read off the branch states for inputs |0>, |1> and |+>.
    """
    from .deform import LogicalAction
    cols = []
    for label in ("0", "1"):
        st = inject_and_run(theta, stabilizers, logicals, psi=label, **kw).branches[0].state
        cols.append(st)
    plus = inject_and_run(theta, stabilizers, logicals, psi="+", **kw).branches[0].state
    U = np.column_stack(cols)
    # fix the relative phase of the columns with the |+> input
    rel = np.vdot(U[:, 1], plus) / np.vdot(U[:, 0], plus) if abs(np.vdot(U[:, 0], plus)) > 1e-12 else 1
    U[:, 1] *= rel / abs(rel)
    paulis = {0b01: np.array([[0, 1], [1, 0]]), 0b10: np.array([[1, 0], [0, -1]]),
              0b11: np.array([[0, -1j], [1j, 0]])}
    images = []
    for src in (0b01, 0b10):
        img = U @ paulis[src] @ U.conj().T
        hit = [w for w, P in paulis.items() if abs(abs(np.trace(P.conj().T @ img)) - 2) < 1e-8]
        if not hit:
            raise ValueError("the injected gate is not Clifford")
        images.append(hit[0])
    return LogicalAction(1, images)


def smallest_color_code():
    """Two red twist pairs on the smallest square-octagon patch that holds
    them: stabilizers and two logical pairs."""
    from .colex import build_square_octagon
    from .color_twists import insert_color_twists, linear_pairs, plan_paths
    from .pauli import extract_logicals
    lat = build_square_octagon(1, 2)
    code = insert_color_twists(lat, plan_paths(lat, "r", linear_pairs(lat, 2, 1, "r", gap=1)))
    return code, extract_logicals(code.stabilizers, code.n)
