"""Color codes with X-type charge-permuting twists.

Twists are faces at the ends of domain walls.  A wall is a dual path of
faces; every interior face of the path is split by the wall into a left
vertex set and a right vertex set.  Stabilizers:

* normal faces carry an all-Z and an all-Y operator,
* wall faces carry Y(left)Z(right) and Z(left)Y(right),
* twist faces and the unbounded face carry a single all-X operator.

No lattice modification is needed.  String operators are found by solving
for the Pauli supported on the rim of a face region that commutes with
every stabilizer.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .colex import Lattice, dual
from .pauli import (Eliminator, PauliGroupBasis, PauliOperator, from_word,
                    nullspace, popcount, product, rank, symplectic_pairs, word_product)


class TwistPlacementError(ValueError):
    def __init__(self, path_id: int, reason: str):
        super().__init__(f"path {path_id}: {reason}")
        self.path_id = path_id
        self.reason = reason


@dataclass(frozen=True)
class DomainWallPath:
    faces: Tuple[int, ...]
    # interior face -> (left vertices, right vertices)
    partition: Dict[int, Tuple[FrozenSet[int], FrozenSet[int]]] = field(default_factory=dict, hash=False, compare=False)

    @property
    def ends(self) -> Tuple[int, int]:
        return self.faces[0], self.faces[-1]

    @property
    def interior(self) -> Tuple[int, ...]:
        return self.faces[1:-1]


def _shared_edges(lat: Lattice, a: int, b: int) -> List[int]:
    ea = set(lat.faces[a].edges)
    return sorted(e for e in lat.faces[b].edges if e in ea)


def wall_partition(lat: Lattice, prev: int, face: int, nxt: int) -> Tuple[FrozenSet[int], FrozenSet[int]]:
    """Split ``face`` along a wall entering from ``prev`` and leaving to ``nxt``.

    Faces are counterclockwise, so the vertices met going counterclockwise
    from the entry edge to the exit edge lie to the right of the wall.
    """
    f = lat.faces[face]
    e_in = _shared_edges(lat, prev, face)
    e_out = _shared_edges(lat, face, nxt)
    if not e_in or not e_out:
        raise ValueError("consecutive wall faces must share an edge")
    i, j = f.edges.index(e_in[0]), f.edges.index(e_out[0])
    m = len(f.vertices)
    right, left = [], []
    k = (i + 1) % m
    while True:
        right.append(f.vertices[k])
        if k == j:
            break
        k = (k + 1) % m
    k = (j + 1) % m
    while True:
        left.append(f.vertices[k])
        if k == i:
            break
        k = (k + 1) % m
    return frozenset(left), frozenset(right)


def make_wall(lat: Lattice, faces: Sequence[int]) -> DomainWallPath:
    faces = tuple(faces)
    part = {}
    for k in range(1, len(faces) - 1):
        part[faces[k]] = wall_partition(lat, faces[k - 1], faces[k], faces[k + 1])
    return DomainWallPath(faces, part)


@dataclass(frozen=True)
class StabLabel:
    face: int
    kind: str  # 'Z', 'Y', 'X', 'M1', 'M2'


@dataclass
class ChargeTwistedCode:
    lattice: Lattice
    walls: List[DomainWallPath]
    twists: List[int]
    wall_faces: Dict[int, int]  # face -> index of its wall, -1 when built from cut edges
    stabilizers: List[PauliOperator]
    labels: List[StabLabel]
    qubit: Dict[int, int]
    partitions: Dict[int, Tuple[FrozenSet[int], FrozenSet[int]]] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.qubit)

    @property
    def t(self) -> int:
        return len(self.twists)

    def basis(self) -> PauliGroupBasis:
        return PauliGroupBasis(self.n, list(self.stabilizers), [f"{l.kind}@{l.face}" for l in self.labels])

    def generators_of_face(self, face: int) -> List[PauliOperator]:
        return [s for s, l in zip(self.stabilizers, self.labels) if l.face == face]

    def side_of(self, face: int, v: int) -> Optional[int]:
        """0 for the left part, 1 for the right part of a wall face."""
        part = self.partitions.get(face)
        if part is None:
            return None
        return 0 if v in part[0] else 1


def classify_faces(code: ChargeTwistedCode) -> Dict[str, List[int]]:
    T = sorted(code.twists)
    M = sorted(code.wall_faces)
    U = sorted(f for f in code.lattice.faces if f not in code.wall_faces and f not in code.twists)
    return {"T": T, "M": M, "U": U}


def face_operator(code: ChargeTwistedCode, face: int, kind: str) -> PauliOperator:
    lat, q = code.lattice, code.qubit
    verts = lat.faces[face].vertices
    if kind in ("X", "Y", "Z"):
        return PauliOperator.from_support(code.n, [q[v] for v in verts], kind)
    left, right = code.partitions[face]
    a, b = ("Y", "Z") if kind == "M1" else ("Z", "Y")
    letters = {q[v]: (a if v in left else b) for v in verts}
    return PauliOperator.from_letters(letters, code.n)


def insert_charge_twists(lat: Lattice, paths: Sequence[Sequence[int] | DomainWallPath],
                         min_separation: int = 2) -> ChargeTwistedCode:
    """Assign the twisted stabilizer group for the given wall paths."""
    walls = [p if isinstance(p, DomainWallPath) else make_wall(lat, p) for p in paths]
    d = dual(lat)
    adj = d.adjacency()
    used: Dict[int, int] = {}
    twists: List[int] = []
    for pid, w in enumerate(walls):
        if len(w.faces) < 2:
            raise TwistPlacementError(pid, "a wall needs two distinct end faces")
        if w.faces[0] == w.faces[-1]:
            raise TwistPlacementError(pid, "end faces coincide")
        for a, b in zip(w.faces, w.faces[1:]):
            if b not in adj[a]:
                raise TwistPlacementError(pid, f"faces {a} and {b} are not adjacent")
        if lat.outer_face in w.faces:
            raise TwistPlacementError(pid, "wall touches the unbounded face")
        for f in w.faces:
            if f in used:
                raise TwistPlacementError(pid, f"crosses path {used[f]} at face {f}")
            used[f] = pid
        for f, (left, right) in w.partition.items():
            if not left or not right or left & right or (left | right) != set(lat.faces[f].vertices):
                raise TwistPlacementError(pid, f"inconsistent partition of face {f}")
        twists.extend(w.ends)
    for i in range(len(twists)):
        dist = d.distances(twists[i])
        for j in range(i + 1, len(twists)):
            if dist.get(twists[j], 10 ** 9) < min_separation:
                raise TwistPlacementError(i // 2, f"twists {twists[i]} and {twists[j]} closer than {min_separation}")
    wall_faces = {f: pid for pid, w in enumerate(walls) for f in w.interior}
    qubit = lat.vertex_index()
    partitions = {f: w.partition[f] for w in walls for f in w.interior}
    code = ChargeTwistedCode(lat, walls, twists, wall_faces, [], [], qubit, partitions)
    _assign_stabilizers(code)
    return code


def _assign_stabilizers(code: ChargeTwistedCode) -> None:
    lat = code.lattice
    tset = set(code.twists)
    for f in sorted(lat.faces):
        if f in tset or f == lat.outer_face:
            kinds = ["X"]
        elif f in code.partitions:
            kinds = ["M1", "M2"]
        else:
            kinds = ["Z", "Y"]
        for k in kinds:
            code.stabilizers.append(face_operator(code, f, k))
            code.labels.append(StabLabel(f, k))


def wall_cut_edges(lat: Lattice, walls: Sequence[DomainWallPath]) -> FrozenSet[int]:
    """Edges crossed by the walls: those shared by consecutive wall faces."""
    cut = set()
    for w in walls:
        for a, b in zip(w.faces, w.faces[1:]):
            cut ^= set(_shared_edges(lat, a, b))
    return frozenset(cut)


def code_from_cuts(lat: Lattice, twists: Sequence[int], cut: Iterable[int]) -> ChargeTwistedCode:
    """Twisted code from twist faces and the set of edges the walls cross.

    A face is split wherever the walls cross its boundary, so it needs an
    even number of cut edges unless it is a twist.  Walls are implicit here,
    which lets them cross and lets a twist move through any face.
    """
    cut = frozenset(cut)
    tset = set(twists)
    partitions = {}
    for f, face in lat.faces.items():
        if f in tset or f == lat.outer_face:
            continue
        side = [0]
        for e in face.edges[:-1]:
            side.append(side[-1] ^ (e in cut))
        if side[-1] ^ (face.edges[-1] in cut):
            raise TwistPlacementError(-1, f"odd number of cut edges on non-twist face {f}")
        if any(side):
            left = frozenset(v for v, sd in zip(face.vertices, side) if sd == side[0])
            right = frozenset(face.vertices) - left
            partitions[f] = (left, right)
    for f in tset:
        n_cut = sum(1 for e in lat.faces[f].edges if e in cut)
        if n_cut % 2 == 0:
            raise TwistPlacementError(-1, f"twist face {f} has an even number of cut edges")
    code = ChargeTwistedCode(lat, [], list(twists), {f: -1 for f in partitions}, [], [], lat.vertex_index(), partitions)
    _assign_stabilizers(code)
    return code


# invariants --------------------------------------------------------------------

def commutation_cases(code: ChargeTwistedCode) -> Dict[str, Tuple[int, int]]:
    """Count (checked, failed) adjacent-face generator pairs per category.

    Categories follow the face types: twist, wall face (on the wall), and
    normal face (off the wall).
    """
    lat = code.lattice
    tset = set(code.twists)

    def cat(f):
        if f in tset:
            return "tau"
        return "fD" if f in code.wall_faces else "fDbar"

    out: Dict[str, List[int]] = {}
    for a, nbrs in lat.face_adjacency().items():
        for b in nbrs:
            if b <= a:
                continue
            key = "x".join(sorted((cat(a), cat(b)), key=["tau", "fD", "fDbar"].index))
            rec = out.setdefault(key, [0, 0])
            for p in code.generators_of_face(a):
                for q in code.generators_of_face(b):
                    rec[0] += 1
                    if popcount(p.x & q.z) + popcount(p.z & q.x) & 1:
                        rec[1] += 1
    return {k: (v[0], v[1]) for k, v in out.items()}


def dependency_products(code: ChargeTwistedCode) -> Dict[str, PauliOperator]:
    """The two products over red+blue and red+green faces."""
    lat = code.lattice
    out = {}
    for name, cols in (("rb", "rb"), ("rg", "rg")):
        ops = []
        for s, l in zip(code.stabilizers, code.labels):
            if lat.faces[l.face].color in cols:
                ops.append(s)
        out[name] = product(ops, code.n)
    return out


@dataclass
class CodeParameters:
    n: int
    k: int
    gauge: int
    logical: int
    independent: int
    generators: int
    formula_k: int
    formula_gauge: int


def count_parameters(code: ChargeTwistedCode) -> CodeParameters:
    s = rank(code.stabilizers)
    n = code.n
    t = code.t
    k = n - s
    logical = t // 3 if t else 0
    return CodeParameters(n=n, k=k, gauge=k - logical, logical=logical, independent=s,
                          generators=len(code.stabilizers), formula_k=t - 1 if t else 0,
                          formula_gauge=(t - 1) - t // 3 if t else 0)


# strings ---------------------------------------------------------------------------

@dataclass
class ColorString:
    """A closed color string given by the face region it encloses.

    ``flavor`` is 'Z' (solid, letters flip Z<->Y across walls), 'Y' or 'X'.
    ``faces`` is the enclosed region; the string runs through the faces of
    its own color on the rim of that region.
    """

    color: str
    flavor: str
    faces: FrozenSet[int]
    name: str = ""


def rim_support(lat: Lattice, color: str, region: Iterable[int]) -> List[int]:
    """Vertices with exactly one of their two other-colored faces inside."""
    region = set(region)
    out = []
    for v, fs in lat.faces_of_vertex().items():
        others = [f for f in fs if lat.faces[f].color != color]
        inside = sum(1 for f in others if f in region)
        if inside == 1:
            out.append(v)
    return sorted(out)


def _commuting_on_support(stabs: Sequence[PauliOperator], n: int, qubits: Sequence[int]) -> List[int]:
    """Words supported on ``qubits`` commuting with every stabilizer."""
    m = len(qubits)
    rows = []
    for s in stabs:
        r = 0
        for i, q in enumerate(qubits):
            # variables: x_i at bit i, z_i at bit m + i
            if (s.z >> q) & 1:
                r |= 1 << i
            if (s.x >> q) & 1:
                r |= 1 << (m + i)
        if r:
            rows.append(r)
    sols = nullspace(rows, 2 * m)
    words = []
    for v in sols:
        x = z = 0
        for i, q in enumerate(qubits):
            if (v >> i) & 1:
                x |= 1 << q
            if (v >> (m + i)) & 1:
                z |= 1 << q
        words.append(x | (z << n))
    return words


class StringError(ValueError):
    pass


def string_to_pauli(code: ChargeTwistedCode, s: ColorString, stabilizers: Optional[Sequence[PauliOperator]] = None) -> PauliOperator:
    """Pauli operator of a closed string around a face region.

    X strings are all-X on the rim.  Z and Y strings use only Y and Z
    letters, flipping between them where the wall splits a face; the letter
    at the lowest rim qubit is fixed to the requested flavor.
    """
    stabs = code.stabilizers if stabilizers is None else stabilizers
    n = code.n
    verts = rim_support(code.lattice, s.color, s.faces)
    if not verts:
        return PauliOperator.identity(n)
    qs = sorted(code.qubit[v] for v in verts)
    supp = sum(1 << q for q in qs)
    if s.flavor == "X":
        p = PauliOperator(n, supp, 0, 0)
        if any(popcount(p.x & g.z) & 1 for g in stabs):
            raise StringError("X string does not commute with the stabilizers")
        return p
    sols = _commuting_on_support(stabs, n, qs)
    # need z-part equal to the full support; solve over the solution space
    target = supp
    e = Eliminator()
    for w in sols:
        e.add(w >> n)
    r, combo = e.reduce(target)
    if r:
        raise StringError("no Z/Y-flavored string on this rim; it encloses an odd number of walls")
    w = 0
    for i, sw in enumerate(sols):
        if (combo >> i) & 1:
            w ^= sw
    x, z = w & ((1 << n) - 1), w >> n
    q0 = qs[0]
    want_y = s.flavor == "Y"
    if ((x >> q0) & 1) != want_y:
        x ^= supp
    return PauliOperator(n, x, z, popcount(x & z))


def open_string(code: ChargeTwistedCode, color: str, edges: Sequence[int], flavor: str = "X") -> PauliOperator:
    """Open string along a chain of ``color`` edges of the shrunk lattice.

    The string ends on the ``color`` faces touched by an odd number of its
    edges.  X strings are all-X.  Z and Y strings pick Y or Z per qubit so
    that every stabilizer away from the ends commutes, which flips the
    letter where a wall separates consecutive qubits; the lowest qubit
    carries the requested flavor.
    """
    lat = code.lattice
    if flavor not in ("X", "Y", "Z"):
        raise StringError(f"unknown flavor {flavor!r}")
    qs: List[int] = []
    touched: Dict[int, int] = {}
    fov = lat.faces_of_vertex()
    for e in edges:
        u, v, c = lat.edges[e]
        if c != color:
            raise StringError(f"edge {e} has color {c}, not {color}")
        for w in (u, v):
            if code.qubit[w] in qs:
                raise StringError(f"edge {e} repeats a qubit")
            qs.append(code.qubit[w])
            for f in fov[w]:
                if lat.faces[f].color == color:
                    touched[f] = touched.get(f, 0) + 1
    ends = {f for f, k in touched.items() if k % 2}
    qs.sort()
    supp = sum(1 << q for q in qs)
    n = code.n
    if flavor == "X":
        return PauliOperator(n, supp, 0, 0)
    stabs = [s for s, l in zip(code.stabilizers, code.labels) if l.face not in ends]
    sols = _commuting_on_support(stabs, n, qs)
    e = Eliminator()
    for w in sols:
        e.add(w >> n)
    r, combo = e.reduce(supp)
    if r:
        raise StringError("no consistent Y/Z lettering along this path")
    w = 0
    for i, sw in enumerate(sols):
        if (combo >> i) & 1:
            w ^= sw
    x, z = w & ((1 << n) - 1), w >> n
    if ((x >> qs[0]) & 1) != (flavor == "Y"):
        x ^= supp
    return PauliOperator(n, x, z, popcount(x & z))


def region_around(code: ChargeTwistedCode, members: Sequence[int], route: Optional[Sequence[int]] = None,
                  below: bool = True, margin: int = 1) -> FrozenSet[int]:
    """A thickened dual path joining ``members`` that keeps other twists out.

    The connecting path stays clear of other twists and their neighbours;
    with ``below`` it passes under the twists lying between the endpoints.
    """
    lat = code.lattice
    d = dual(lat)
    adj = d.adjacency()
    others = [t for t in code.twists if t not in members]
    forbidden = set(others)
    for t in others:
        forbidden.update(adj[t])
    near_outer = {lat.outer_face} | set(adj[lat.outer_face])
    if route is None:
        route = [members[0]]
        for a, b in zip(members, members[1:]):
            blocked = set(forbidden) | near_outer
            xa, ya = lat.centroid(a)
            xb, yb = lat.centroid(b)
            lo_x, hi_x = min(xa, xb), max(xa, xb)
            ymid = (ya + yb) / 2
            if below:
                for f in lat.faces:
                    fx, fy = lat.centroid(f)
                    if lo_x < fx < hi_x and fy > ymid - 0.5 and f not in (a, b) and f not in adj[a] and f not in adj[b]:
                        if any(lo_x < lat.centroid(t)[0] < hi_x for t in others):
                            blocked.add(f)
            seg = d.shortest_path(a, b, blocked=blocked)
            if seg is None:
                raise StringError(f"no route between twists {a} and {b}")
            route.extend(seg[1:])
    region = set(route)
    for _ in range(margin):
        grown = set(region)
        for f in region:
            grown.update(adj[f])
        region = grown
    region.discard(lat.outer_face)
    # the rim must not touch a twist it is not meant to enclose
    for t in others:
        region -= set(adj[t])
    bad = region & set(others)
    if bad:
        raise StringError(f"region swallows twists {sorted(bad)}")
    return frozenset(region)


def twist_string(code: ChargeTwistedCode, color: str, i: int, j: int, flavor: str = "Z", below: bool = True) -> PauliOperator:
    """W^color_{i,j}: the string encircling twists ``i`` and ``j`` (1-based)."""
    ti, tj = code.twists[i - 1], code.twists[j - 1]
    region = region_around(code, [ti, tj], below=below)
    return string_to_pauli(code, ColorString(color, flavor, region, f"W{color}{i},{j}"))


# canonical logicals ---------------------------------------------------------

@dataclass
class LogicalBasis:
    """Logical pairs followed by gauge pairs, all mutually canonical."""

    logicals: List[Tuple[PauliOperator, PauliOperator]]
    gauge: List[Tuple[PauliOperator, PauliOperator]]
    triples: List[Tuple[int, int, int]]

    def bare_logicals(self) -> List[PauliOperator]:
        return [p for pair in self.logicals for p in pair]

    def gauge_ops(self) -> List[PauliOperator]:
        return [p for pair in self.gauge for p in pair]


def twist_triples(t: int) -> List[Tuple[int, int, int]]:
    """Qubit triples in creation order: blocks of six give (1,2,3) and
    (6,5,4); a remaining group of three gives its first three twists."""
    out = []
    base = 0
    while base + 6 <= t:
        out.append((base + 1, base + 2, base + 3))
        out.append((base + 6, base + 5, base + 4))
        base += 6
    if base + 3 <= t:
        out.append((base + 1, base + 2, base + 3))
    return out


def complete_gauge(n: int, stabs: Sequence[PauliOperator], logicals: Sequence[Tuple[PauliOperator, PauliOperator]]) -> List[Tuple[PauliOperator, PauliOperator]]:
    """Gauge pairs spanning the rest of the normalizer, orthogonal to the
    given logical pairs."""
    from .pauli import centralizer
    words = [s.word() for s in stabs]
    norm = centralizer(words, n)
    fixed = [p.word() for pair in logicals for p in pair]
    pool = []
    for v in norm:
        for a_op, b_op in logicals:
            a, b = a_op.word(), b_op.word()
            if word_product(n, v, b):
                v ^= a
            if word_product(n, v, a):
                v ^= b
        pool.append(v)
    pairs = symplectic_pairs(n, pool, words + fixed)
    return [(from_word(n, a), from_word(n, b)) for a, b in pairs]


def canonical_logicals(code: ChargeTwistedCode) -> LogicalBasis:
    """Z = W^b_{a,b}, X = W^g_{a,c} for every triple (a, b, c)."""
    triples = twist_triples(code.t)
    logicals = []
    for a, b, c in triples:
        z = twist_string(code, "b", a, b)
        x = twist_string(code, "g", a, c)
        logicals.append((x, z))
    gauge = complete_gauge(code.n, code.stabilizers, logicals)
    return LogicalBasis(logicals, gauge, triples)


def equivalent_modulo(p: PauliOperator, q: PauliOperator, group: Sequence[PauliOperator]) -> bool:
    """True when p*q lies in the group generated by ``group`` (up to phase)."""
    e = Eliminator()
    for g in group:
        e.add(g.word())
    return e.reduce(p.word() ^ q.word())[0] == 0


# layouts -------------------------------------------------------------------------

def face_row(lat: Lattice, y_target: Optional[float] = None) -> List[int]:
    """Faces of one horizontal row of the lattice, left to right, each
    adjacent to the next."""
    adj = dual(lat).adjacency()
    inner = [f for f in lat.faces if f != lat.outer_face and lat.outer_face not in adj[f]]
    ys = sorted(lat.centroid(f)[1] for f in inner)
    if y_target is None:
        y_target = ys[len(ys) // 2]
    best = min(inner, key=lambda f: abs(lat.centroid(f)[1] - y_target))
    y0 = lat.centroid(best)[1]
    row = sorted((f for f in inner if abs(lat.centroid(f)[1] - y0) < 0.25 and len(lat.faces[f]) > 2),
                 key=lambda f: lat.centroid(f)[0])
    chain = [row[0]]
    for f in row[1:]:
        if f in adj[chain[-1]]:
            chain.append(f)
        elif len(chain) < 2:
            chain = [f]
        else:
            break
    return chain


def linear_layout(lat: Lattice, pairs: int, separation: int, gap: Optional[int] = None,
                  start: int = 2, y_target: Optional[float] = None) -> List[List[int]]:
    """Wall paths for ``pairs`` twist pairs placed along one face row.

    Each pair spans ``separation`` steps of the row; consecutive pairs are
    ``gap`` steps apart (default: the separation).
    """
    gap = separation if gap is None else gap
    row = face_row(lat, y_target)
    need = start + pairs * separation + (pairs - 1) * gap + 2
    if len(row) < need:
        raise ValueError(f"row of {len(row)} faces too short; need {need}")
    paths = []
    pos = start
    for _ in range(pairs):
        paths.append(row[pos:pos + separation + 1])
        pos += separation + gap
    return paths
