"""Holes in color-twisted codes and hole-twist braiding.

A hole is a set of faces whose stabilizers are not measured.  It grows
across an edge leaving one of its faces: the far end face joins the region
and ZZ and XX are measured on the edge.  Shrinking drops a face and
reinstates its stabilizers, so a one-face move is a grow followed by a
shrink.  Logical operators are carried along each step by multiplying in
stabilizers of the previous code.
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .colex import Lattice, build_hexagonal, dual, end_faces, shrunk
from .color_twists import ColorTwistedCode, four_twist_logicals, insert_color_twists, plan_paths
from .deform import LogicalAction, _action_from_images, _coords, classify_gate
from .pauli import Eliminator, PauliOperator, in_group, nullspace, product, rank, symplectic_product

log = logging.getLogger(__name__)


class HoleError(ValueError):
    pass


@dataclass(frozen=True)
class Hole:
    seed: int
    region: FrozenSet[int]
    edges: FrozenSet[int]
    color: str
    ledger: Tuple[Tuple[str, int], ...] = ()

    @property
    def face(self) -> int:
        """The single face of a one-face hole."""
        if len(self.region) != 1:
            raise HoleError("hole spans several faces")
        return next(iter(self.region))


@dataclass
class HoleCode:
    """A color-twisted code with some faces turned into holes."""

    base: ColorTwistedCode
    holes: List[Hole] = field(default_factory=list)
    stabilizers: List[PauliOperator] = field(default_factory=list)
    labels: List[Tuple[str, int, str]] = field(default_factory=list)

    def __post_init__(self):
        self.assign()

    @property
    def lattice(self) -> Lattice:
        return self.base.lattice

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def qubit(self) -> Dict[int, int]:
        return self.base.qubit

    @property
    def twists(self) -> List[int]:
        return self.base.twists

    def hole_faces(self) -> set:
        return {f for h in self.holes for f in h.region}

    def assign(self) -> None:
        off = self.hole_faces()
        self.stabilizers, self.labels = [], []
        for s, l in zip(self.base.stabilizers, self.base.labels):
            if l.face not in off:
                self.stabilizers.append(s)
                self.labels.append(("face", l.face, l.kind))
        for h in self.holes:
            for e in sorted(h.edges):
                u, v, _ = self.lattice.edges[e]
                qs = [self.qubit[u], self.qubit[v]]
                for k in ("Z", "X"):
                    self.stabilizers.append(PauliOperator.from_support(self.n, qs, k))
                    self.labels.append(("edge", e, k))

    def k(self) -> int:
        return self.n - rank(self.stabilizers)

    def generators_near(self, faces, edges=()) -> List[PauliOperator]:
        faces, edges = set(faces), set(edges)
        return [s for s, l in zip(self.stabilizers, self.labels)
                if (l[0] == "face" and l[1] in faces) or (l[0] == "edge" and l[1] in edges)]

    def with_holes(self, holes: List[Hole]) -> "HoleCode":
        return HoleCode(self.base, holes)


def _check_face(hc: HoleCode, face: int) -> None:
    lat = hc.lattice
    if face not in lat.faces:
        raise HoleError(f"face {face} does not exist")
    if face in hc.twists:
        raise HoleError(f"face {face} is a twist")
    if face == lat.outer_face:
        raise HoleError("the unbounded face cannot be a hole")
    if face in hc.hole_faces():
        raise HoleError(f"face {face} already belongs to a hole")


def as_hole_code(code) -> HoleCode:
    return code if isinstance(code, HoleCode) else HoleCode(code)


def create_hole(code, face: int) -> Tuple[HoleCode, Hole]:
    """Stop measuring the stabilizers of ``face``."""
    hc = as_hole_code(code)
    _check_face(hc, face)
    h = Hole(face, frozenset([face]), frozenset(), hc.lattice.faces[face].color, (("create", face),))
    return hc.with_holes(hc.holes + [h]), h


# transport -----------------------------------------------------------------

def transport_ops(old: HoleCode, new: HoleCode, ops: Sequence[PauliOperator], near_faces, near_edges=()) -> List[PauliOperator]:
    """Multiply each op by old stabilizers so it commutes with every new one."""
    old_set = {(s.x, s.z) for s in old.stabilizers}
    changed = [s for s in new.stabilizers if (s.x, s.z) not in old_set]
    if not changed:
        return list(ops)
    adj = dual(old.lattice).adjacency()
    wide = set(near_faces)
    for f in list(wide):
        wide.update(adj[f])
    for cands in (old.generators_near(wide, near_edges), old.stabilizers):
        e = Eliminator()
        for c in cands:
            syn = 0
            for r, g in enumerate(changed):
                syn |= symplectic_product(c, g) << r
            e.add(syn)
        out = []
        for L in ops:
            syn = 0
            for r, g in enumerate(changed):
                syn |= symplectic_product(L, g) << r
            res, combo = e.reduce(syn)
            if res:
                out = None
                break
            picks = [cands[i] for i in range(len(cands)) if (combo >> i) & 1]
            out.append(L * product(picks, old.n) if picks else L)
        if out is not None:
            return out
    raise HoleError("no stabilizer correction keeps the tracked operators logical")


def grow_hole(hc: HoleCode, index: int, edge: int, ops: Sequence[PauliOperator] = ()) -> Tuple[HoleCode, List[PauliOperator]]:
    """Extend hole ``index`` across ``edge`` to the end face beyond it."""
    h = hc.holes[index]
    lat = hc.lattice
    if edge not in lat.edges:
        raise HoleError(f"edge {edge} does not exist")
    a, b = end_faces(lat, edge)
    if a in h.region and b not in h.region:
        target = b
    elif b in h.region and a not in h.region:
        target = a
    else:
        raise HoleError(f"edge {edge} does not leave the hole")
    if target is None:
        raise HoleError(f"edge {edge} has no end face beyond the hole")
    _check_face(hc, target)
    h2 = Hole(h.seed, h.region | {target}, h.edges | {edge}, lat.faces[target].color,
              h.ledger + (("grow", edge),))
    holes = list(hc.holes)
    holes[index] = h2
    new = hc.with_holes(holes)
    return new, transport_ops(hc, new, ops, h2.region, h2.edges)


def shrink_hole(hc: HoleCode, index: int, face: int, ops: Sequence[PauliOperator] = ()) -> Tuple[HoleCode, List[PauliOperator]]:
    """Remove ``face`` from hole ``index`` and measure its stabilizers again."""
    h = hc.holes[index]
    if face not in h.region or len(h.region) == 1:
        raise HoleError(f"face {face} cannot be dropped from the hole")
    lat = hc.lattice
    fv = lat.faces[face].vertices
    keep = {e for e in h.edges if not set(lat.edges[e][:2]) & set(fv)}
    rest = h.region - {face}
    # the remaining faces must stay joined by the remaining edges
    links = {f: set() for f in rest}
    for e in keep:
        x, y = end_faces(lat, e)
        if x in links and y in links:
            links[x].add(y)
            links[y].add(x)
    seen, todo = set(), [next(iter(rest))]
    while todo:
        f = todo.pop()
        if f not in seen:
            seen.add(f)
            todo.extend(links[f] - seen)
    if seen != rest:
        raise HoleError(f"dropping face {face} would split the hole")
    color = lat.faces[next(iter(rest))].color if len(rest) == 1 else h.color
    h2 = Hole(h.seed, frozenset(rest), frozenset(keep), color, h.ledger + (("shrink", face),))
    holes = list(hc.holes)
    holes[index] = h2
    new = hc.with_holes(holes)
    return new, transport_ops(hc, new, ops, h.region, h.edges)


def move_hole(hc: HoleCode, index: int, edge: int, ops: Sequence[PauliOperator] = ()) -> Tuple[HoleCode, List[PauliOperator]]:
    """Move a one-face hole across ``edge``: grow, then drop the old face."""
    old = hc.holes[index].face
    hc, ops = grow_hole(hc, index, edge, ops)
    return shrink_hole(hc, index, old, ops)


# logical operators ----------------------------------------------------------

def _region_qubits(hc: HoleCode, region) -> List[int]:
    lat = hc.lattice
    return sorted({hc.qubit[v] for f in region for v in lat.faces[f].vertices})


def commuting_ops(hc: HoleCode, qubits: Sequence[int], kind: str) -> List[PauliOperator]:
    """Pure-``kind`` operators on ``qubits`` commuting with every stabilizer."""
    pos = {q: i for i, q in enumerate(qubits)}
    rows = []
    for s in hc.stabilizers:
        part = s.z if kind == "X" else s.x
        r = 0
        for q, i in pos.items():
            if (part >> q) & 1:
                r |= 1 << i
        if r:
            rows.append(r)
    out = []
    for v in nullspace(rows, len(qubits)):
        out.append(PauliOperator.from_support(hc.n, [q for q, i in pos.items() if (v >> i) & 1], kind))
    return out


def hole_net(hc: HoleCode, triple: Sequence[int], kind: str, loop: PauliOperator) -> PauliOperator:
    """A ``kind`` string net joining the three holes that anticommutes with ``loop``."""
    lat = hc.lattice
    d = dual(lat)
    adj = d.adjacency()
    blocked = set(hc.twists) | {lat.outer_face}
    for t in hc.twists:
        blocked.update(adj[t])
    faces = [hc.holes[i].face for i in triple]
    region = set(faces)
    for a in faces:
        for b in faces:
            if a < b:
                p = d.shortest_path(a, b, blocked=blocked - {a, b})
                if p is None:
                    raise HoleError("holes cannot be joined away from the twists")
                region.update(p)
    region |= {g for f in region for g in adj[f] if g not in blocked}
    stab = Eliminator()
    for s in hc.stabilizers:
        stab.add(s.word())
    for op in commuting_ops(hc, _region_qubits(hc, region), kind):
        if symplectic_product(op, loop) and stab.reduce(op.word())[0]:
            return op
    raise HoleError("no string net anticommutes with the hole loop")


@dataclass
class HoleQubit:
    holes: Tuple[int, int, int]
    kind: str  # 'primal' or 'dual'
    x: PauliOperator
    z: PauliOperator
    mover: int


def hole_qubits(hc: HoleCode, triple: Sequence[int], mover: int) -> Tuple[HoleQubit, HoleQubit]:
    """Primal (Z loop, X net) and dual (X loop, Z net) qubits of a hole triple.

    The loops are the stabilizers of the moving hole's face, which are no
    longer measured.
    """
    f = hc.holes[mover].face
    qs = [hc.qubit[v] for v in hc.lattice.faces[f].vertices]
    zl = PauliOperator.from_support(hc.n, qs, "Z")
    xl = PauliOperator.from_support(hc.n, qs, "X")
    xn = hole_net(hc, triple, "X", zl)
    zn = hole_net(hc, triple, "Z", xl)
    t = tuple(triple)
    return HoleQubit(t, "primal", xn, zl, mover), HoleQubit(t, "dual", xl, zn, mover)


def symplectic_reduce(pairs: Sequence[Tuple[PauliOperator, PauliOperator]]) -> List[Tuple[PauliOperator, PauliOperator]]:
    """Make the pairs mutually canonical, keeping earlier pairs fixed."""
    fixed: List[Tuple[PauliOperator, PauliOperator]] = []
    for x, z in pairs:
        if not symplectic_product(x, z):
            raise HoleError("a frame pair does not anticommute")
        for X, Z in fixed:
            if symplectic_product(x, Z):
                x = x * X
            if symplectic_product(x, X):
                x = x * Z
            if symplectic_product(z, Z):
                z = z * X
            if symplectic_product(z, X):
                z = z * Z
        fixed.append((x, z))
    return fixed


# Pauli frame -----------------------------------------------------------------

@dataclass(frozen=True)
class PauliFrame:
    """Classical relabelling of one logical qubit's X and Z."""

    ops: Tuple[str, ...] = ()

    def then(self, kind: str) -> "PauliFrame":
        if kind not in ("H", "S"):
            raise ValueError("frame updates are 'H' or 'S'")
        ops = self.ops + (kind,)
        # H twice and S four times are trivial
        changed = True
        while changed:
            changed = False
            for k in range(len(ops) - 1):
                if ops[k] == ops[k + 1] == "H":
                    ops = ops[:k] + ops[k + 2:]
                    changed = True
                    break
            for k in range(len(ops) - 3):
                if ops[k:k + 4] == ("S",) * 4:
                    ops = ops[:k] + ops[k + 4:]
                    changed = True
                    break
        return PauliFrame(ops)

    def label_map(self) -> Dict[str, str]:
        """Which physical operator carries each logical label."""
        m = {"X": "X", "Z": "Z", "Y": "Y"}
        for k in self.ops:
            if k == "H":
                m = {"X": m["Z"], "Z": m["X"], "Y": m["Y"]}
            else:
                m = {"X": m["Y"], "Z": m["Z"], "Y": m["X"]}
        return m

    @property
    def identity(self) -> bool:
        return not self.ops

    def measured(self, label: str) -> str:
        """Canonical operator to measure for a requested logical label."""
        return self.label_map()[label]


def pauli_frame_update(frame: Optional[PauliFrame], kind: str) -> PauliFrame:
    return (frame or PauliFrame()).then(kind)


def apply_frame(x: PauliOperator, z: PauliOperator, frame: PauliFrame) -> Tuple[PauliOperator, PauliOperator]:
    m = frame.label_map()
    ops = {"X": x, "Z": z, "Y": x * z}
    return ops[m["X"]], ops[m["Z"]]


# loops --------------------------------------------------------------------

def _crosses(p, q, anchor) -> bool:
    """Does segment p-q cross the downward ray from anchor?"""
    (x1, y1), (x2, y2), (ax, ay) = p, q, anchor
    if (x1 < ax) == (x2 < ax):
        return False
    y = y1 + (y2 - y1) * (ax - x1) / (x2 - x1)
    return y < ay


def plan_loop(hc: HoleCode, mover: int, enclose: Sequence[int], avoid_enclosing: Sequence[int] = ()) -> List[int]:
    """Shortest closed sequence of edges moving hole ``mover`` once around the
    faces in ``enclose`` and around none of ``avoid_enclosing``.

    Winding is tracked by the parity of crossings with a downward ray from
    each marked face.
    """
    lat = hc.lattice
    adj = dual(lat).adjacency()
    start = hc.holes[mover].face
    marks = list(enclose) + list(avoid_enclosing)
    anchors = [lat.centroid(f) for f in marks]
    goal = (1 << len(enclose)) - 1
    blocked = set(hc.twists) | {lat.outer_face} | set(adj[lat.outer_face])
    for i, h in enumerate(hc.holes):
        if i != mover:
            for f in h.region:
                blocked |= {f} | set(adj[f])
    fv, fe = lat.faces_of_vertex(), lat.faces_of_edge()
    moves: Dict[int, List[Tuple[int, int]]] = {}
    for e in lat.edges:
        a, b = end_faces(lat, e, fv, fe)
        if a is None or b is None or a == b:
            continue
        moves.setdefault(a, []).append((b, e))
        moves.setdefault(b, []).append((a, e))
    cent = {f: lat.centroid(f) for f in lat.faces}
    s0 = (start, 0)
    prev = {s0: None}
    q = deque([s0])
    while q:
        f, par = q.popleft()
        if f == start and par == goal and (f, par) != s0:
            break
        for g, e in sorted(moves.get(f, [])):
            if g in blocked:
                continue
            p2 = par
            for i, a in enumerate(anchors):
                if _crosses(cent[f], cent[g], a):
                    p2 ^= 1 << i
            st = (g, p2)
            if st not in prev:
                prev[st] = ((f, par), e)
                q.append(st)
    end = (start, goal)
    if end not in prev or goal == 0:
        raise HoleError("no loop around the requested faces")
    edges = []
    s = end
    while prev[s] is not None:
        s, e = prev[s]
        edges.append(e)
    return edges[::-1]


def loop_faces(hc: HoleCode, mover: int, edges: Sequence[int]) -> List[int]:
    lat = hc.lattice
    cur = hc.holes[mover].face
    out = [cur]
    for e in edges:
        a, b = end_faces(lat, e)
        cur = b if a == cur else a
        out.append(cur)
    return out


def wall_crossings(hc: HoleCode, mover: int, edges: Sequence[int]) -> int:
    """Number of steps on which the hole changes color."""
    lat = hc.lattice
    faces = loop_faces(hc, mover, edges)
    return sum(lat.faces[a].color != lat.faces[b].color for a, b in zip(faces, faces[1:]))


# braiding -----------------------------------------------------------------

@dataclass
class HoleBraid:
    action: LogicalAction
    label: str
    table: Dict[str, str]
    crossings: int
    steps: int
    witnesses_ok: bool
    colors: List[str]


def _frame_coords(pairs, img):
    return _coords(symplectic_product, img, pairs)


def braid_hole(hc: HoleCode, frame_pairs: Sequence[Tuple[PauliOperator, PauliOperator]], mover: int,
               loop: Sequence[int], m: int = 2, names: Sequence[str] = ("T", "H")) -> HoleBraid:
    """Move hole ``mover`` along ``loop`` (edges) and report the action on the frame.

    ``frame_pairs`` lists (X, Z) pairs, the first ``m`` being the logical
    qubits; the rest are gauge.  The loop must leave the hole's color as it
    was.
    """
    h0 = hc.holes[mover]
    crossings = wall_crossings(hc, mover, loop)
    faces = loop_faces(hc, mover, loop)
    if faces[-1] != faces[0]:
        raise HoleError("loop does not return the hole to its start")
    if crossings % 2:
        raise HoleError(f"loop leaves the hole color permuted ({crossings} color changes)")
    pairs = list(frame_pairs)
    ops = [x for x, _ in pairs] + [z for _, z in pairs]
    cur = hc
    colors = [hc.lattice.faces[faces[0]].color]
    for e in loop:
        cur, ops = move_hole(cur, mover, e, ops)
        colors.append(cur.holes[mover].color)
    if cur.holes[mover].color != h0.color:
        raise HoleError("hole color changed over the loop")
    if rank(cur.stabilizers) != rank(hc.stabilizers) or rank(cur.stabilizers + hc.stabilizers) != rank(hc.stabilizers):
        raise HoleError("loop did not restore the stabilizer group")
    coords = [_frame_coords(pairs, img) for img in ops]
    act = _action_from_images(m, coords)
    # each image must equal the frame product it names, up to stabilizers
    ok = True
    for img, co in zip(ops, coords):
        ref = PauliOperator.identity(hc.n)
        for (x, z), (cx, cz) in zip(pairs, co):
            if cx:
                ref = ref * x
            if cz:
                ref = ref * z
        if in_group(img * ref, hc.stabilizers) is None:
            ok = False
    table = {}
    for k in range(2 * m):
        g = ("X" if k < m else "Z") + names[k % m]
        v = act.images[k]
        out = ""
        for q in range(m):
            x, zb = (v >> q) & 1, (v >> (m + q)) & 1
            if x and zb:
                out += "Y" + names[q]
            elif x:
                out += "X" + names[q]
            elif zb:
                out += "Z" + names[q]
        table[g] = out or "I"
    try:
        label = classify_gate(act)
    except ValueError:
        label = "other"
    return HoleBraid(act, label, table, crossings, len(loop), ok, colors)


def expected_table(name: str) -> Dict[str, str]:
    """Hole-twist braid tables as stated, over (twist T, hole H)."""
    tables = {
        "dual_t2t4": {"XT": "XT", "XH": "XH", "ZT": "ZTXH", "ZH": "XTZH"},
        "primal_frame_t3t4": {"XT": "XTXH", "XH": "XH", "ZT": "ZT", "ZH": "ZTZH"},
        "primal_t2t4": {"XT": "XT", "XH": "XTXH", "ZT": "ZTZH", "ZH": "ZH"},
    }
    return tables[name]


def same_table(got: Dict[str, str], want: Dict[str, str]) -> bool:
    def norm(s):
        return sorted(s[i:i + 2] for i in range(0, len(s), 2)) if s != "I" else []
    return all(norm(got[k]) == norm(v) for k, v in want.items())


# a ready-made setting ---------------------------------------------------------

@dataclass
class TwistHoleSetup:
    code: HoleCode
    twist_pair: Tuple[PauliOperator, PauliOperator]
    primal: HoleQubit
    dual: HoleQubit
    triple: Tuple[int, int, int]
    mover: int


def four_twist_rows(lat: Lattice, color: str = "r", separation: int = 2, row_gap: int = 2,
                    margin: int = 4, center: Tuple[float, float] = (0.5, 0.5)) -> List[Tuple[int, int]]:
    """Two twist pairs, (t1, t2) above (t3, t4), with t2 roughly above t4.

    Each pair is ``separation`` steps apart in the c-shrunk lattice and the
    pairs are at least ``separation + row_gap`` steps from each other.
    """
    sg = shrunk(lat, color)
    dist_out = dual(lat).distances(lat.outer_face)
    nodes = sorted(f for f in sg.nodes if dist_out.get(f, 0) > margin)
    links: Dict[int, set] = {}
    for _, a, b in sg.links:
        links.setdefault(a, set()).add(b)
        links.setdefault(b, set()).add(a)
    cache: Dict[int, Dict[int, int]] = {}

    def steps(src):
        if src not in cache:
            dist = {src: 0}
            q = deque([src])
            while q:
                f = q.popleft()
                for g in links.get(f, ()):
                    if g not in dist:
                        dist[g] = dist[f] + 1
                        q.append(g)
            cache[src] = dist
        return cache[src]

    cx = {f: lat.centroid(f) for f in nodes}
    xs = [p[0] for p in cx.values()]
    ys = [p[1] for p in cx.values()]
    mid = (min(xs) + center[0] * (max(xs) - min(xs)), min(ys) + center[1] * (max(ys) - min(ys)))
    pairs = []
    for a in nodes:
        for b in nodes:
            if cx[b][0] > cx[a][0] + 0.5 and steps(a).get(b) == separation:
                try:
                    plan_paths(lat, color, [(a, b)])
                except ValueError:
                    continue
                pairs.append((a, b))
    far = separation + row_gap
    best = None
    for a, b in pairs:
        for c, d in pairs:
            if cx[d][1] > cx[b][1] - 1.0 or abs(cx[d][0] - cx[b][0]) > 1.6:
                continue
            if min(steps(x).get(y, 0) for x in (a, b) for y in (c, d)) < far:
                continue
            centre = ((cx[a][0] + cx[d][0]) / 2 - mid[0]) ** 2 + ((cx[a][1] + cx[d][1]) / 2 - mid[1]) ** 2
            score = (steps(b)[d], round(centre, 3), a, b, c, d)
            if best is None or score < best[0]:
                best = (score, [(a, b), (c, d)])
    if best is None:
        raise HoleError("lattice too small for two stacked twist pairs")
    try:
        plan_paths(lat, color, best[1])
    except ValueError as ex:
        raise HoleError(f"stacked twist pairs cannot be joined: {ex}")
    return best[1]


def twist_hole_setup(lat: Optional[Lattice] = None, separation: int = 2, row_gap: int = 2,
                     hole_offset: int = 3, letters: Tuple[str, str] = ("Z", "X")) -> TwistHoleSetup:
    """Four red twists plus a triple of holes to the right of them.

    The blue (or, failing that, green) hole nearest the twists is the one
    that moves.
    """
    lat = lat or build_hexagonal(8, 9)
    pairs = four_twist_rows(lat, "r", separation, row_gap, center=(0.3, 0.5))
    code = insert_color_twists(lat, plan_paths(lat, "r", pairs))
    L = code.lattice
    d = dual(L)
    adj = d.adjacency()
    t2, t4 = code.twists[1], code.twists[3]
    (x2, y2), (x4, y4) = L.centroid(t2), L.centroid(t4)
    busy = set(code.twists) | {L.outer_face} | set(adj[L.outer_face])
    busy |= {g for f in list(busy) for g in adj[f]}
    for p in code.paths:
        for f in p.waypoints:
            busy |= {f} | set(adj[f])
    dist = {t: d.distances(t) for t in code.twists}
    row_y = (y2 + y4) / 2

    def ok(f, color, taken):
        if f in busy or L.faces[f].color != color:
            return False
        if any(dist[t].get(f, 0) < hole_offset for t in code.twists):
            return False
        return all(d.distances(f).get(g, 0) >= 3 for g in taken)

    right = max(x2, x4)
    cands = sorted((f for f in L.faces if f not in busy and L.centroid(f)[0] > right),
                   key=lambda f: (round(abs(L.centroid(f)[1] - row_y) + abs(L.centroid(f)[0] - right), 3), f))
    faces = []
    for color in ("b", "g", "r"):
        pool = cands if not faces else sorted(
            (f for f in cands if L.centroid(f)[0] > L.centroid(faces[-1])[0] + 1.0),
            key=lambda f: (round(abs(L.centroid(f)[1] - row_y), 3), L.centroid(f)[0], f))
        pick = next((f for f in pool if ok(f, color, faces)), None)
        if pick is None:
            raise HoleError(f"no room for a {color} hole")
        faces.append(pick)
    hc = HoleCode(code)
    for f in faces:
        hc, _ = create_hole(hc, f)
    x, z = four_twist_logicals(code, letters=letters)
    primal, dual_q = hole_qubits(hc, (0, 1, 2), 0)
    return TwistHoleSetup(hc, (x, z), primal, dual_q, (0, 1, 2), 0)


def setup_frame(setup: TwistHoleSetup, qubit: HoleQubit, frame: Optional[PauliFrame] = None):
    """Canonical frame: twist qubit, hole qubit, then gauge pairs."""
    from .charge_twists import complete_gauge
    hx, hz = apply_frame(qubit.x, qubit.z, frame) if frame else (qubit.x, qubit.z)
    base = symplectic_reduce([setup.twist_pair, (hx, hz)])
    gauge = complete_gauge(setup.code.n, setup.code.stabilizers, base)
    return base + gauge


def run_table(setup: TwistHoleSetup, which: str) -> HoleBraid:
    """Run one of the named hole-twist braids on the setup."""
    hc = setup.code
    tw = hc.twists
    if which == "dual_t2t4":
        q, frame, enc = setup.dual, None, [tw[1], tw[3]]
    elif which == "primal_t2t4":
        q, frame, enc = setup.primal, None, [tw[1], tw[3]]
    elif which == "primal_frame_t3t4":
        q, frame, enc = setup.primal, PauliFrame().then("H"), [tw[2], tw[3]]
    else:
        raise KeyError(which)
    avoid = [t for t in tw if t not in enc] + [hc.holes[i].face for i in setup.triple if i != setup.mover]
    loop = plan_loop(hc, setup.mover, enc, avoid)
    return braid_hole(hc, setup_frame(setup, q, frame), setup.mover, loop)
