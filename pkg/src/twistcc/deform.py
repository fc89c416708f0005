"""Braiding charge twists.

Two engines compute the logical action of a braid word.

The string engine works without a lattice.  A closed string of color c
around twists i and j is the vector c (x) (e_i + e_j), with the color
c in Z2^2 (r, g and b = r + g) and e_k the unit vector of twist slot k.
Two strings anticommute when the number of shared slots at which their
colors differ is odd.  An exchange of twists swaps their slots, which is
the relabelling W_{i,k} -> W_{j,k} applied to every string.

The lattice engine moves twist faces one face at a time.  The wall
configuration is kept as the set of edges the walls cross, so a move just
toggles the edge shared by the old and new twist face.  Logical
representatives are carried along by multiplying in old stabilizers, and
after each exchange the walls are restored by swapping Y and Z on the
region they swept.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .charge_twists import (ChargeTwistedCode, _shared_edges, code_from_cuts, complete_gauge, twist_string,
                            twist_triples, wall_cut_edges)
from .colex import Lattice, dual
from .pauli import Eliminator, PauliOperator, popcount, product, rank, symplectic_product

log = logging.getLogger(__name__)

COLOR_BITS = {"r": 1, "g": 2, "b": 3}


class BraidError(ValueError):
    pass


# braid words -------------------------------------------------------------------

@dataclass(frozen=True)
class Braid:
    """Exchange of twists ``i`` and ``j`` (1-based labels)."""

    i: int
    j: int
    ccw: bool = True

    def __str__(self) -> str:
        return f"braid {self.i} {self.j} {'ccw' if self.ccw else 'cw'}"


@dataclass
class BraidWord:
    braids: List[Braid] = field(default_factory=list)

    @classmethod
    def of(cls, *pairs) -> "BraidWord":
        out = []
        for p in pairs:
            out.append(p if isinstance(p, Braid) else Braid(*p))
        return cls(out)

    @classmethod
    def parse(cls, text: str) -> "BraidWord":
        """One move per line: ``braid i j [cw|ccw]``; ``#`` starts a comment."""
        out = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if parts[0] != "braid" or len(parts) not in (3, 4):
                raise BraidError(f"line {lineno}: expected 'braid i j [cw|ccw]'")
            ccw = True
            if len(parts) == 4:
                if parts[3] not in ("cw", "ccw"):
                    raise BraidError(f"line {lineno}: orientation must be cw or ccw")
                ccw = parts[3] == "ccw"
            out.append(Braid(int(parts[1]), int(parts[2]), ccw))
        return cls(out)

    def validate(self, t: int) -> None:
        for b in self.braids:
            if b.i == b.j or not (1 <= b.i <= t and 1 <= b.j <= t):
                raise BraidError(f"{b} does not name two distinct twists out of {t}")

    def __iter__(self):
        return iter(self.braids)

    def __len__(self) -> int:
        return len(self.braids)


# string calculus ---------------------------------------------------------------

def color_pairing(u: int, v: int) -> int:
    return int(u != 0 and v != 0 and u != v)


def slot_vector(color: str, slots: Iterable[int]) -> int:
    c = COLOR_BITS[color]
    v = 0
    for s in slots:
        v ^= c << (2 * s)
    return v


def string_form(a: int, b: int, t: int) -> int:
    s = 0
    for k in range(t):
        s ^= color_pairing((a >> (2 * k)) & 3, (b >> (2 * k)) & 3)
    return s


def swap_slots(v: int, p: int, q: int) -> int:
    a = (v >> (2 * p)) & 3
    b = (v >> (2 * q)) & 3
    v &= ~((3 << (2 * p)) | (3 << (2 * q)))
    return v | (a << (2 * q)) | (b << (2 * p))


StringLabel = Tuple[str, int, int]


@dataclass
class TwistDiagram:
    """Twists in slots 0..t-1 with walls joining slots (0,1), (2,3), ...

    ``slot_of[label-1]`` is the slot currently holding a twist; strings are
    kept as slot vectors.
    """

    t: int
    slot_of: List[int] = field(default_factory=list)
    strings: Dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.t % 2:
            raise ValueError("charge twists come in pairs")
        if not self.slot_of:
            self.slot_of = list(range(self.t))

    @property
    def walls(self) -> List[Tuple[int, int]]:
        return [(k, k + 1) for k in range(0, self.t, 2)]

    @property
    def blocks(self) -> List[Tuple[int, int, int]]:
        return twist_triples(self.t)

    def string(self, color: str, i: int, j: int) -> int:
        """W^color_{i,j} for the twists currently labelled i and j."""
        return slot_vector(color, (self.slot_of[i - 1], self.slot_of[j - 1]))

    def form(self, a: int, b: int) -> int:
        return string_form(a, b, self.t)

    def copy(self) -> "TwistDiagram":
        return TwistDiagram(self.t, list(self.slot_of), dict(self.strings))


def braid_rewrite(d: TwistDiagram, b: Braid) -> TwistDiagram:
    """Exchange twists b.i and b.j; every tracked string is dragged along."""
    if b.i == b.j or not (1 <= b.i <= d.t and 1 <= b.j <= d.t):
        raise BraidError(f"{b} does not name two distinct twists")
    out = d.copy()
    p, q = d.slot_of[b.i - 1], d.slot_of[b.j - 1]
    out.slot_of[b.i - 1], out.slot_of[b.j - 1] = q, p
    out.strings = {k: swap_slots(v, p, q) for k, v in d.strings.items()}
    return out


# frames: logical and gauge pairs named by strings ------------------------------

@dataclass
class FrameElement:
    """A product of strings, each given as (color, i, j) on the initial labels."""

    labels: FrozenSet[StringLabel]

    def vector(self) -> int:
        v = 0
        for c, i, j in self.labels:
            v ^= slot_vector(c, (i - 1, j - 1))
        return v


@dataclass
class Frame:
    t: int
    logicals: List[Tuple[FrameElement, FrameElement]]  # (X, Z)
    gauge: List[Tuple[FrameElement, FrameElement]]

    @property
    def pairs(self) -> List[Tuple[FrameElement, FrameElement]]:
        return self.logicals + self.gauge

    @property
    def m(self) -> int:
        return len(self.logicals)


def string_frame(t: int) -> Frame:
    """Z = W^b_{a,b}, X = W^g_{a,c} per triple; gauge pairs from the other strings.

    Gauge pairs come from a symplectic Gram-Schmidt pass over every string
    in a fixed order, so the same combinations can be built on a lattice.
    """
    triples = twist_triples(t)
    logicals = []
    for a, b, c in triples:
        x = FrameElement(frozenset({("g",) + tuple(sorted((a, c)))}))
        z = FrameElement(frozenset({("b",) + tuple(sorted((a, b)))}))
        logicals.append((x, z))

    def vec(lbls):
        return FrameElement(lbls).vector()

    pairs = [(set(x.labels), set(z.labels)) for x, z in logicals]

    def orth(lbls):
        v = set(lbls)
        for X, Z in pairs:
            if string_form(vec(frozenset(v)), vec(frozenset(Z)), t):
                v ^= X
            if string_form(vec(frozenset(v)), vec(frozenset(X)), t):
                v ^= Z
        return v

    pool = [{(c, i, j)} for i in range(1, t + 1) for j in range(i + 1, t + 1) for c in "rgb"]
    gauge = []
    while True:
        pool = [orth(p) for p in pool]
        vecs = [vec(frozenset(p)) for p in pool]
        found = None
        for ia, va in enumerate(vecs):
            for ib, vb in enumerate(vecs):
                if string_form(va, vb, t):
                    found = (ia, ib)
                    break
            if found:
                break
        if found is None:
            break
        a, b = pool[found[0]], pool[found[1]]
        pairs.append((set(a), set(b)))
        gauge.append((FrameElement(frozenset(a)), FrameElement(frozenset(b))))
    return Frame(t, logicals, gauge)


# logical actions -----------------------------------------------------------------

def _sp_form(a: int, b: int, m: int) -> int:
    mask = (1 << m) - 1
    return (popcount((a & mask) & (b >> m)) + popcount((a >> m) & (b & mask))) & 1


@dataclass
class LogicalAction:
    """Symplectic action on m logical qubits.

    ``images`` lists the images of X_1..X_m, Z_1..Z_m; vectors carry the
    X part in bits 0..m-1 and the Z part in bits m..2m-1.  ``full`` does the
    same for every frame pair, logical pairs first.
    """

    m: int
    images: List[int]
    full: Optional[List[int]] = None
    full_m: int = 0
    pauli: Optional[int] = None
    gauge_mixing: bool = False

    @classmethod
    def identity(cls, m: int) -> "LogicalAction":
        return cls(m, [1 << k for k in range(2 * m)])

    def is_symplectic(self) -> bool:
        for a in range(2 * self.m):
            for b in range(2 * self.m):
                if _sp_form(self.images[a], self.images[b], self.m) != _sp_form(1 << a, 1 << b, self.m):
                    return False
        return True

    def apply(self, v: int) -> int:
        out = 0
        for k in range(2 * self.m):
            if (v >> k) & 1:
                out ^= self.images[k]
        return out

    def then(self, other: "LogicalAction") -> "LogicalAction":
        """This action followed by ``other``."""
        return LogicalAction(self.m, [other.apply(v) for v in self.images])

    def image_string(self, k: int) -> str:
        return pauli_string(self.images[k], self.m)

    def table(self) -> List[Tuple[str, str]]:
        gens = [f"X{q + 1}" for q in range(self.m)] + [f"Z{q + 1}" for q in range(self.m)]
        return [(g, self.image_string(k)) for k, g in enumerate(gens)]

    def matrix(self) -> List[List[int]]:
        """Columns are images, rows are (x_1..x_m, z_1..z_m)."""
        return [[(self.images[c] >> r) & 1 for c in range(2 * self.m)] for r in range(2 * self.m)]

    @property
    def label(self) -> str:
        return classify_gate(self)

    @property
    def leaks(self) -> bool:
        """True when logical operators are sent partly outside the logical block."""
        return not self.is_symplectic()


def pauli_string(v: int, m: int) -> str:
    out = []
    for q in range(m):
        x, z = (v >> q) & 1, (v >> (m + q)) & 1
        if x or z:
            out.append({(1, 0): "X", (0, 1): "Z", (1, 1): "Y"}[(x, z)] + str(q + 1))
    return "".join(out) or "I"


def parse_pauli_string(s: str, m: int) -> int:
    v = 0
    i = 0
    while i < len(s):
        letter = s[i]
        j = i + 1
        while j < len(s) and s[j].isdigit():
            j += 1
        q = int(s[i + 1:j]) - 1
        if letter in "XY":
            v |= 1 << q
        if letter in "ZY":
            v |= 1 << (m + q)
        i = j
    return v


def action_from_table(m: int, table: Dict[str, str]) -> LogicalAction:
    """Build an action from images such as {'X1': 'Y1', 'Z1': 'Z1'}; unnamed generators are fixed."""
    images = [1 << k for k in range(2 * m)]
    for g, img in table.items():
        k = int(g[1:]) - 1 + (m if g[0] == "Z" else 0)
        images[k] = parse_pauli_string(img, m) if img != "I" else 0
    return LogicalAction(m, images)


_ONE_QUBIT = {
    "identity": {"X1": "X1", "Z1": "Z1"},
    "S": {"X1": "Y1", "Z1": "Z1"},
    "√X": {"X1": "X1", "Z1": "Y1"},
    "H": {"X1": "Z1", "Z1": "X1"},
}
_TWO_QUBIT = {
    "CZ": {"X1": "X1Z2", "X2": "Z1X2"},
    "CNOT": {"X1": "X1X2", "Z2": "Z1Z2"},
    "CZ·(S⊗S)": {"X1": "Y1Z2", "X2": "Z1Y2"},
    "H-conjugate": {"Z1": "Z1X2", "Z2": "X1Z2"},
}


def _restrict(a: LogicalAction, qubits: Sequence[int]) -> Optional[LogicalAction]:
    m, k = a.m, len(qubits)
    pos = {q: i for i, q in enumerate(qubits)}
    images = []
    for part in (0, 1):
        for q in qubits:
            v = a.images[q + part * m]
            w = 0
            for qq in range(m):
                x, z = (v >> qq) & 1, (v >> (m + qq)) & 1
                if (x or z) and qq not in pos:
                    return None
                if x:
                    w |= 1 << pos[qq]
                if z:
                    w |= 1 << (k + pos[qq])
            images.append(w)
    return LogicalAction(k, images)


def gate_support(a: LogicalAction) -> List[int]:
    touched = set()
    for k in range(2 * a.m):
        if a.images[k] != 1 << k:
            touched.add(k % a.m)
            v = a.images[k]
            for q in range(a.m):
                if (v >> q) & 1 or (v >> (a.m + q)) & 1:
                    touched.add(q)
    return sorted(touched)


def classify_gate(a: LogicalAction) -> str:
    """Name of the action modulo Paulis, or 'other'.

    An action that does not keep the logical block to itself (it trades
    logical and gauge degrees of freedom) is 'other'.
    """
    if a.full is not None and not LogicalAction(a.full_m, a.full).is_symplectic():
        raise ValueError("action is not symplectic")
    if not a.is_symplectic():
        if a.full is None:
            raise ValueError("action is not symplectic")
        return "other"
    supp = gate_support(a)
    if not supp:
        return "Pauli" if a.pauli else "identity"
    if len(supp) == 1:
        r = _restrict(a, supp)
        for name, tab in _ONE_QUBIT.items():
            if r.images == action_from_table(1, tab).images:
                return name
        return "other"
    if len(supp) == 2:
        for order in (supp, supp[::-1]):
            r = _restrict(a, order)
            for name, tab in _TWO_QUBIT.items():
                if r.images == action_from_table(2, tab).images:
                    return name
        return "other"
    return "other"


def named_action(name: str, m: int = 1, qubits: Sequence[int] = (1,)) -> LogicalAction:
    """The symplectic action of a named gate on the given 1-based qubits of m."""
    tab = _ONE_QUBIT.get(name) or _TWO_QUBIT.get(name)
    if tab is None:
        raise KeyError(name)
    k = 1 if name in _ONE_QUBIT else 2
    local = action_from_table(k, tab)
    images = [1 << j for j in range(2 * m)]
    for part in (0, 1):
        for i, q in enumerate(qubits):
            v = local.images[i + part * k]
            w = 0
            for ii, qq in enumerate(qubits):
                if (v >> ii) & 1:
                    w |= 1 << (qq - 1)
                if (v >> (k + ii)) & 1:
                    w |= 1 << (m + qq - 1)
            images[(q - 1) + part * m] = w
    return LogicalAction(m, images)


def _coords(form, v, pairs) -> List[Tuple[int, int]]:
    return [(form(v, z), form(v, x)) for x, z in pairs]


def _action_from_images(frame_m: int, coords_of_images: List[List[Tuple[int, int]]]) -> LogicalAction:
    """coords_of_images lists, for X_1..X_P then Z_1..Z_P over all P frame pairs,
    the (x, z) coordinates of the image on every pair."""
    P = len(coords_of_images) // 2

    def pack(co, limit):
        w = 0
        for q in range(limit):
            x, z = co[q]
            w |= x << q
            w |= z << (limit + q)
        return w

    full = [pack(co, P) for co in coords_of_images]
    m = frame_m
    images = [pack(coords_of_images[q], m) for q in range(m)] + [pack(coords_of_images[P + q], m) for q in range(m)]
    mixing = False
    for k, co in enumerate(coords_of_images):
        is_logical = (k % P) < m
        for q in range(P):
            if co[q] != (0, 0) and (q < m) != is_logical:
                mixing = True
    return LogicalAction(m, images, full=full, full_m=P, gauge_mixing=mixing)


def logical_action(d: TwistDiagram, word: BraidWord, frame: Optional[Frame] = None) -> LogicalAction:
    """Action of the braid word on the frame's logical qubits, modulo gauge."""
    word.validate(d.t)
    frame = frame or string_frame(d.t)
    elems = [x for x, _ in frame.pairs] + [z for _, z in frame.pairs]
    dd = d.copy()
    dd.strings = {str(k): e.vector() for k, e in enumerate(elems)}
    for b in word:
        dd = braid_rewrite(dd, b)
    pairs = [(x.vector(), z.vector()) for x, z in frame.pairs]
    form = lambda a, b: string_form(a, b, d.t)
    coords = [_coords(form, dd.strings[str(k)], pairs) for k in range(len(elems))]
    return _action_from_images(frame.m, coords)


# lattice-level deformation -------------------------------------------------------

@dataclass
class DeformationState:
    lattice: Lattice
    twists: List[int]  # face of twist label k+1
    cut: FrozenSet[int]
    code: ChargeTwistedCode
    tracked: List[PauliOperator]

    @classmethod
    def start(cls, code: ChargeTwistedCode, tracked: Sequence[PauliOperator] = ()) -> "DeformationState":
        cut = wall_cut_edges(code.lattice, code.walls) if code.walls else frozenset()
        c = code_from_cuts(code.lattice, code.twists, cut)
        return cls(code.lattice, list(code.twists), cut, c, list(tracked))


@dataclass
class TransportMap:
    """Old representative index -> stabilizer correction that was multiplied in."""

    corrections: List[PauliOperator]


def _face_generators(code: ChargeTwistedCode, faces: Iterable[int]) -> List[PauliOperator]:
    fs = set(faces)
    return [s for s, l in zip(code.stabilizers, code.labels) if l.face in fs]


def transport(old: ChargeTwistedCode, new: ChargeTwistedCode, ops: Sequence[PauliOperator],
              touched: Iterable[int]) -> Tuple[List[PauliOperator], TransportMap]:
    """Multiply each op by old stabilizers so that it commutes with the new ones.

    Only generators on ``touched`` faces change, so the correction is
    searched among old generators on those faces and their neighbours; the
    whole old group is the fallback.
    """
    touched = set(touched)
    lat = old.lattice
    adj = dual(lat).adjacency()
    changed = _face_generators(new, touched)
    near = set(touched)
    for f in touched:
        near.update(adj[f])
    out, corr = [], []
    for cands in (_face_generators(old, near), old.stabilizers):
        e = Eliminator()
        for c in cands:
            syn = 0
            for r, g in enumerate(changed):
                syn |= symplectic_product(c, g) << r
            e.add(syn)
        ok = True
        out, corr = [], []
        for L in ops:
            syn = 0
            for r, g in enumerate(changed):
                syn |= symplectic_product(L, g) << r
            res, combo = e.reduce(syn)
            if res:
                ok = False
                break
            s = PauliOperator.identity(old.n)
            idx = 0
            while combo:
                if combo & 1:
                    s = s * cands[idx]
                combo >>= 1
                idx += 1
            corr.append(s)
            out.append((L * s))
        if ok:
            return out, TransportMap(corr)
    raise BraidError("no stabilizer correction makes the operator commute with the deformed code")


def deform_step(state: DeformationState, label: int, target: int) -> Tuple[DeformationState, TransportMap]:
    """Move twist ``label`` onto the adjacent face ``target``."""
    lat = state.lattice
    src = state.twists[label - 1]
    if target == lat.outer_face:
        raise BraidError("a twist cannot move onto the unbounded face")
    if target in state.twists:
        raise BraidError(f"face {target} already holds a twist")
    shared = _shared_edges(lat, src, target)
    if len(shared) != 1:
        raise BraidError(f"faces {src} and {target} are not adjacent")
    cut = state.cut ^ frozenset(shared)
    twists = list(state.twists)
    twists[label - 1] = target
    code = code_from_cuts(lat, twists, cut)
    tracked, tm = transport(state.code, code, state.tracked, (src, target))
    return DeformationState(lat, twists, cut, code, tracked), tm


def swept_region(lat: Lattice, cut_a: FrozenSet[int], cut_b: FrozenSet[int]) -> FrozenSet[int]:
    """Vertices Q with cut_a + cut_b = boundary of Q, Q avoiding the outer face."""
    diff = cut_a ^ cut_b
    nbrs: Dict[int, List[Tuple[int, int]]] = {v: [] for v in lat.vertices}
    for e, (u, v, _c) in lat.edges.items():
        bit = int(e in diff)
        nbrs[u].append((v, bit))
        nbrs[v].append((u, bit))
    root = lat.faces[lat.outer_face].vertices[0]
    val = {root: 0}
    stack = [root]
    while stack:
        u = stack.pop()
        for v, bit in nbrs[u]:
            want = val[u] ^ bit
            if v not in val:
                val[v] = want
                stack.append(v)
            elif val[v] != want:
                raise BraidError("wall configurations differ by more than a swept region")
    if any(val[v] for v in lat.faces[lat.outer_face].vertices):
        raise BraidError("walls moved along the boundary")
    return frozenset(v for v, b in val.items() if b)


def swap_yz(p: PauliOperator, mask: int) -> PauliOperator:
    """Exchange Y and Z on the masked qubits (the symmetry the walls implement)."""
    x = p.x ^ (p.z & mask)
    return PauliOperator(p.n, x, p.z, popcount(x & p.z))


def restore_walls(state: DeformationState, cut0: FrozenSet[int]) -> Tuple[DeformationState, FrozenSet[int]]:
    """Move the walls back to ``cut0`` by swapping Y and Z on the swept region."""
    q = swept_region(state.lattice, state.cut, cut0)
    idx = state.code.qubit
    mask = 0
    for v in q:
        mask |= 1 << idx[v]
    code = code_from_cuts(state.lattice, state.twists, cut0)
    tracked = [swap_yz(p, mask) for p in state.tracked]
    return DeformationState(state.lattice, list(state.twists), cut0, code, tracked), q


# exchange paths -----------------------------------------------------------------

@dataclass
class ExchangeGeometry:
    """Rectangular exchange below the twist row.

    The twist that travels the outer side of the loop goes ``outer`` rows
    down, the other one ``inner`` rows down.
    """

    outer: int = 4
    inner: int = 2
    width: float = 0.8


def _row_step(lat: Lattice) -> float:
    d = dual(lat)
    steps = []
    for a, nb in d.adjacency().items():
        if a == lat.outer_face:
            continue
        ya = lat.centroid(a)[1]
        for b in nb:
            if b == lat.outer_face:
                continue
            dy = abs(lat.centroid(b)[1] - ya)
            if dy > 1e-6:
                steps.append(dy)
    steps.sort()
    return steps[len(steps) // 2]


def _seg_dist(p, a, b) -> float:
    ax, ay = a
    bx, by = b
    px, py = p
    dx, dy = bx - ax, by - ay
    L2 = dx * dx + dy * dy
    t = 0.0 if L2 == 0 else max(0.0, min(1.0, ((px - ax) * dx + (py - ay) * dy) / L2))
    cx, cy = ax + t * dx, ay + t * dy
    return ((px - cx) ** 2 + (py - cy) ** 2) ** 0.5


class ExchangePlanner:
    def __init__(self, lat: Lattice, geometry: Optional[ExchangeGeometry] = None):
        self.lat = lat
        self.geom = geometry or ExchangeGeometry()
        self.d = dual(lat)
        self.adj = self.d.adjacency()
        self.dy = _row_step(lat)
        self.cent = {f: lat.centroid(f) for f in lat.faces if f != lat.outer_face}
        self.edge_faces = {lat.outer_face} | set(self.adj[lat.outer_face])

    def nearest(self, x: float, y: float, blocked) -> int:
        cands = [f for f in self.cent if f not in blocked and len(self.lat.faces[f]) > 2]
        return min(cands, key=lambda f: ((self.cent[f][0] - x) ** 2 + (self.cent[f][1] - y) ** 2, f))

    def leg(self, start: int, end: int, blocked) -> List[int]:
        a, b = self.cent[start], self.cent[end]
        w = self.geom.width * self.dy / 0.8660254 if self.dy else self.geom.width
        corridor = {f for f, c in self.cent.items() if _seg_dist(c, a, b) <= w}
        corridor |= {start, end}
        outside = set(self.cent) - corridor
        path = self.d.shortest_path(start, end, blocked=set(blocked) | outside | {self.lat.outer_face})
        if path is None:
            path = self.d.shortest_path(start, end, blocked=set(blocked) | {self.lat.outer_face})
        if path is None:
            raise BraidError(f"no exchange path from face {start} to face {end}")
        return path

    def blocked_for(self, twists: Sequence[int], mover: int) -> set:
        out = set(self.edge_faces)
        for k, f in enumerate(twists):
            if k == mover:
                continue
            out.add(f)
            out.update(self.adj[f])
        return out

    def plan(self, twists: Sequence[int], i: int, j: int, ccw: bool = True) -> List[Tuple[int, int]]:
        """Moves (label, face) exchanging twists i and j around a rectangle below them."""
        faces = list(twists)
        li, lj = i - 1, j - 1
        if self.cent[faces[li]][0] > self.cent[faces[lj]][0]:
            li, lj = lj, li
        a, b = faces[li], faces[lj]
        (xa, ya), (xb, yb) = self.cent[a], self.cent[b]
        base = min(ya, yb)
        g = self.geom
        moves: List[Tuple[int, int]] = []

        def go(label_idx, waypoints):
            cur = faces[label_idx]
            for wp in waypoints:
                blocked = self.blocked_for(faces, label_idx)
                if isinstance(wp, tuple):
                    wp = self.nearest(wp[0], wp[1], blocked)
                if wp == cur:
                    continue
                path = self.leg(cur, wp, blocked - {wp})
                for f in path[1:]:
                    moves.append((label_idx + 1, f))
                cur = wp
                faces[label_idx] = cur

        y_out, y_in = base - g.outer * self.dy, base - g.inner * self.dy
        if ccw:
            go(li, [(xa, y_out), (xb, y_out)])
            go(lj, [(xb, y_in), (xa, y_in), a])
            go(li, [b])
        else:
            go(lj, [(xb, y_out), (xa, y_out)])
            go(li, [(xa, y_in), (xb, y_in), b])
            go(lj, [a])
        return moves


@dataclass
class LatticeRun:
    state: DeformationState
    swept: List[FrozenSet[int]]
    steps: int


def execute_braids(state: DeformationState, word: BraidWord, planner: ExchangePlanner,
                   cut0: Optional[FrozenSet[int]] = None) -> LatticeRun:
    """Run each exchange step by step and restore the walls after it."""
    cut0 = state.cut if cut0 is None else cut0
    swept = []
    steps = 0
    for b in word:
        moves = planner.plan(state.twists, b.i, b.j, b.ccw)
        for label, face in moves:
            state, _ = deform_step(state, label, face)
            steps += 1
        state, q = restore_walls(state, cut0)
        swept.append(q)
        inside = [k + 1 for k, f in enumerate(state.twists)
                  if all(v in q for v in state.lattice.faces[f].vertices)]
        if inside:
            raise BraidError(f"restoring the walls after {b} would sweep over twists {inside}")
    return LatticeRun(state, swept, steps)


def frame_operators(code: ChargeTwistedCode, frame: Frame) -> List[Tuple[PauliOperator, PauliOperator]]:
    """Lattice operators for the frame's string products."""
    cache: Dict[StringLabel, PauliOperator] = {}

    def op(elem: FrameElement) -> PauliOperator:
        ps = []
        for lbl in sorted(elem.labels):
            if lbl not in cache:
                cache[lbl] = twist_string(code, *lbl)
            ps.append(cache[lbl])
        return product(ps, code.n)

    return [(op(x), op(z)) for x, z in frame.pairs]


@dataclass
class LatticeFrame:
    frame: Frame
    string_pairs: List[Tuple[PauliOperator, PauliOperator]]
    extra_pairs: List[Tuple[PauliOperator, PauliOperator]]

    @property
    def all_pairs(self) -> List[Tuple[PauliOperator, PauliOperator]]:
        return self.string_pairs + self.extra_pairs


def lattice_frame(code: ChargeTwistedCode, frame: Optional[Frame] = None) -> LatticeFrame:
    frame = frame or string_frame(code.t)
    sp = frame_operators(code, frame)
    extra = complete_gauge(code.n, code.stabilizers, sp)
    return LatticeFrame(frame, sp, extra)


def braid_lattice(code: ChargeTwistedCode, word: BraidWord, geometry: Optional[ExchangeGeometry] = None,
                  frame: Optional[LatticeFrame] = None, planner: Optional[ExchangePlanner] = None) -> LogicalAction:
    """Logical action of a braid word computed by deforming the lattice code."""
    word.validate(code.t)
    lf = frame or lattice_frame(code)
    pairs = lf.all_pairs
    ops = [x for x, _ in pairs] + [z for _, z in pairs]
    state = DeformationState.start(code, ops)
    planner = planner or ExchangePlanner(code.lattice, geometry)
    run = execute_braids(state, word, planner)
    return lattice_action(lf, run.state.tracked, code)


def lattice_action(lf: LatticeFrame, images: Sequence[PauliOperator], code: ChargeTwistedCode) -> LogicalAction:
    pairs = lf.all_pairs
    P = len(pairs)
    form = lambda a, b: symplectic_product(a, b)
    coords = [_coords(form, img, pairs) for img in images]
    act = _action_from_images(lf.frame.m, coords)
    # the string-level frame only spans the string pairs; report on that block
    Ps = len(lf.string_pairs)
    sub = [co[:Ps] for k, co in enumerate(coords) if (k % P) < Ps]
    string_block = _action_from_images(lf.frame.m, sub)
    string_block.gauge_mixing = act.gauge_mixing
    boundary_moves = any(co[q] != (0, 0) for k, co in enumerate(coords) for q in range(Ps, P)
                         if (k % P) < Ps) or any(co[q] != (0, 0) for k, co in enumerate(coords)
                                                 for q in range(Ps) if (k % P) >= Ps)
    if boundary_moves:
        log.debug("braid mixes the boundary pair with the string pairs")
    string_block.pauli = None
    return string_block


def stabilizer_group_equal(a: Sequence[PauliOperator], b: Sequence[PauliOperator]) -> bool:
    ra, rb = rank(a), rank(b)
    return ra == rb == rank(list(a) + list(b))


# cross-checking the two engines ---------------------------------------------------

@dataclass
class WordComparison:
    word: Tuple[Braid, ...]
    executable: bool
    lattice_label: Optional[str] = None
    string_label: Optional[str] = None
    matrices_equal: Optional[bool] = None
    reason: str = ""

    @property
    def agree(self) -> bool:
        return (not self.executable) or (self.lattice_label == self.string_label and bool(self.matrices_equal))


def braid_generators(t: int) -> List[Braid]:
    return [Braid(i, j, ccw) for i in range(1, t + 1) for j in range(i + 1, t + 1) for ccw in (True, False)]


def compare_engines(code: ChargeTwistedCode, max_length: int = 3,
                    geometry: Optional[ExchangeGeometry] = None) -> List[WordComparison]:
    """Run every braid word up to ``max_length`` through both engines.

    Lattice states are shared between words with a common prefix.  Words
    whose exchange paths cannot be laid out are reported as not executable.
    """
    lf = lattice_frame(code)
    pairs = lf.all_pairs
    ops = [x for x, _ in pairs] + [z for _, z in pairs]
    planner = ExchangePlanner(code.lattice, geometry)
    start = DeformationState.start(code, ops)
    cut0 = start.cut
    gens = braid_generators(code.t)
    diagram = TwistDiagram(code.t)
    out: List[WordComparison] = []

    def rec(state: DeformationState, word: Tuple[Braid, ...]):
        for b in gens:
            w = word + (b,)
            try:
                nxt = execute_braids(state, BraidWord([b]), planner, cut0).state
            except BraidError as e:
                out.append(WordComparison(w, False, reason=str(e)))
                continue
            lat_act = lattice_action(lf, nxt.tracked, code)
            str_act = logical_action(diagram, BraidWord(list(w)), lf.frame)
            out.append(WordComparison(w, True, classify_gate(lat_act), classify_gate(str_act),
                                      lat_act.full == str_act.full))
            if len(w) < max_length:
                rec(nxt, w)

    rec(start, ())
    return out


def small_braiding_code(t: int = 4) -> ChargeTwistedCode:
    """The smallest hexagonal layout found with room for every exchange of t twists."""
    from .charge_twists import insert_charge_twists, linear_layout
    from .colex import build_hexagonal
    lat = build_hexagonal(2, 6 + 3 * (t - 4) // 2)
    ys = sorted({round(lat.centroid(f)[1], 2) for f in lat.faces if f != lat.outer_face})
    for y in ys:
        try:
            code = insert_charge_twists(lat, linear_layout(lat, t // 2, 3, gap=3, start=1, y_target=y))
            lattice_frame(code)
        except ValueError:
            continue
        return code
    raise ValueError("no row with room for strings around every twist pair")
