"""Color-permuting twists made by lattice surgery.

A twist pair is created by deleting the two vertices of an edge that joins
two faces of color c and reconnecting their remaining neighbours.  Both
c faces lose a vertex, so they become odd (the twists), and the two faces
on either side of the deleted edge merge into one modified face.  Moving a
twist repeats the same step on the next c edge of its path, which turns
the old twist face even again.
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .colex import Face, Lattice, dual, end_faces, shrunk, third_color
from .pauli import (Eliminator, PauliOperator, product, rank, symplectic_product)

log = logging.getLogger(__name__)


class PathError(ValueError):
    """A twist path breaks one of the planning conditions."""

    def __init__(self, condition: str, reason: str):
        super().__init__(f"{condition}: {reason}")
        self.condition = condition


class SurgeryError(RuntimeError):
    def __init__(self, reason: str, trace: Sequence["SurgeryRecord"] = ()):
        super().__init__(reason)
        self.trace = list(trace)


# paths ----------------------------------------------------------------------

@dataclass(frozen=True)
class TwistPath:
    """c-colored faces ``waypoints`` joined in turn by the c edges ``edges``."""

    color: str
    waypoints: Tuple[int, ...]
    edges: Tuple[int, ...]

    @property
    def ends(self) -> Tuple[int, int]:
        return self.waypoints[0], self.waypoints[-1]


def _side_faces(lat: Lattice, e: int, fe=None) -> List[int]:
    fe = lat.faces_of_edge() if fe is None else fe
    return fe[e]


def check_path(lat: Lattice, path: TwistPath) -> List[str]:
    """Violated conditions, as 'C1: ...' / 'C2: ...' strings."""
    problems = []
    fv, fe = lat.faces_of_vertex(), lat.faces_of_edge()
    d = dual(lat)
    wp = path.waypoints
    if len(wp) < 2 or len(path.edges) != len(wp) - 1:
        return ["C1: a path needs at least one edge between two faces"]
    if wp[0] == wp[-1]:
        problems.append("C1: both ends are the same face")
    for k, e in enumerate(path.edges):
        if e not in lat.edges:
            problems.append(f"C1: edge {e} does not exist")
            continue
        u, v, _ = lat.edges[e]
        a, b = wp[k], wp[k + 1]
        sides = set(fe[e])
        ends = ({f for f in fv[u] if f not in sides}, {f for f in fv[v] if f not in sides})
        if not ((a in ends[0] and b in ends[1]) or (a in ends[1] and b in ends[0])):
            problems.append(f"C1: faces {a} and {b} are not joined by edge {e}")
    for f in wp:
        if lat.faces[f].color != path.color:
            problems.append(f"C1: waypoint {f} is not {path.color}")
    for k in range(len(wp) - 2):
        u, v, w = wp[k], wp[k + 1], wp[k + 2]
        dist = d.distances(u)
        if dist.get(v) == 2 and d.distances(v).get(w) == 2 and dist.get(w) == 2:
            problems.append(f"C2: waypoints {u}, {v}, {w} are pairwise at distance two")
    return problems


def plan_paths(lat: Lattice, color: str, pairs: Sequence[Tuple[int, int]], min_separation: int = 2) -> List[TwistPath]:
    """Shortest C1/C2-valid paths between the given face pairs, without overlaps."""
    d = dual(lat)
    adj = d.adjacency()
    ends = [f for p in pairs for f in p]
    if len(set(ends)) != len(ends):
        raise PathError("C1", "a face is used as an end twice")
    for f in ends:
        if lat.faces[f].color != color:
            raise PathError("C1", f"end face {f} is not {color}")
    for i, a in enumerate(ends):
        da = d.distances(a)
        for b in ends[i + 1:]:
            if da.get(b, 10 ** 9) < max(2, min_separation):
                raise PathError("separation", f"faces {a} and {b} are closer than {min_separation}")
    sg = shrunk(lat, color)
    fe = lat.faces_of_edge()
    links: Dict[int, List[Tuple[int, int]]] = {}
    for e, a, b in sg.links:
        if a is None or b is None:
            continue
        links.setdefault(a, []).append((b, e))
        links.setdefault(b, []).append((a, e))
    dist_cache: Dict[int, Dict[int, int]] = {}

    def dd(a, b):
        if a not in dist_cache:
            dist_cache[a] = d.distances(a)
        return dist_cache[a].get(b)

    near_outer = {lat.outer_face} | set(adj[lat.outer_face])
    used_faces: set = set()
    out = []
    for a, b in pairs:
        blocked = set(used_faces)
        for f in ends:
            if f not in (a, b):
                blocked.add(f)
        # search over (previous, current) so C2 can be enforced
        start = (None, a)
        prev = {start: None}
        q = deque([start])
        goal = None
        while q:
            state = q.popleft()
            p, cur = state
            if cur == b:
                goal = state
                break
            for nxt, e in sorted(links.get(cur, [])):
                if nxt in blocked or nxt in near_outer or nxt == p:
                    continue
                sides = fe[e]
                if any(s == lat.outer_face or s in used_faces for s in sides):
                    continue
                if p is not None and dd(p, cur) == 2 and dd(cur, nxt) == 2 and dd(p, nxt) == 2:
                    continue
                ns = (cur, nxt)
                if ns not in prev:
                    prev[ns] = (state, e)
                    q.append(ns)
        if goal is None:
            raise PathError("C1/C2", f"no valid path between faces {a} and {b}")
        faces, edges = [goal[1]], []
        s = goal
        while prev[s] is not None:
            ps, e = prev[s]
            edges.append(e)
            faces.append(ps[1])
            s = ps
        faces.reverse()
        edges.reverse()
        path = TwistPath(color, tuple(faces), tuple(edges))
        bad = check_path(lat, path)
        if bad:
            raise PathError(bad[0].split(":")[0], bad[0])
        for f in faces:
            used_faces.add(f)
        for e in edges:
            used_faces.update(fe[e])
        out.append(path)
    return out


# surgery ------------------------------------------------------------------------

@dataclass(frozen=True)
class SurgeryRecord:
    kind: str  # 'create', 'move' or 'parallel'
    edge: int
    removed: Tuple[int, ...]
    added_edges: Tuple[int, ...]
    merged: Tuple[int, ...]
    merged_into: int
    merged_color: str


def _rotate(face: Face, start_vertex: int, first_edge: int) -> Optional[List[Tuple[int, int]]]:
    pairs = list(zip(face.vertices, face.edges))
    for i, (v, e) in enumerate(pairs):
        if v == start_vertex and e == first_edge:
            return pairs[i:] + pairs[:i]
    return None


def _drop_vertex(face: Face, u: int, new_edge: int) -> Face:
    vs, es = list(face.vertices), list(face.edges)
    i = vs.index(u)
    es[i - 1] = new_edge
    del vs[i]
    del es[i]
    return Face(tuple(vs), tuple(es), face.color)


def _edge_color(a: str, b: str, fallback: str) -> str:
    return third_color(a, b) if a != b else fallback


def surgery_step(lat: Lattice, e: int, twist_color: str, merged_color: Optional[str] = None,
                 kind: str = "create", modified: Optional[Dict[int, str]] = None) -> Tuple[Lattice, SurgeryRecord, int]:
    """Delete both vertices of edge ``e`` and reconnect their neighbours.

    Returns the new lattice, the step record and the id of the merged face.
    ``merged_color`` picks the color of the merged face; by default a
    modified side face keeps its color, otherwise the face on the left of
    the edge (walking from its first to its second vertex) gives it.
    """
    modified = modified or {}
    lat = lat.copy()
    u, v, _ = lat.edges[e]
    fv, fe = lat.faces_of_vertex(), lat.faces_of_edge()
    sides = fe[e]
    if len(sides) != 2 or sides[0] == sides[1]:
        raise SurgeryError(f"edge {e} does not separate two faces")
    if lat.outer_face in sides:
        raise SurgeryError(f"edge {e} lies on the unbounded face")
    fu = [f for f in fv[u] if f not in sides]
    fw = [f for f in fv[v] if f not in sides]
    if len(fu) != 1 or len(fw) != 1:
        raise SurgeryError(f"vertices of edge {e} are not trivalent")
    f0, f1 = fu[0], fw[0]
    a_star = b_star = None
    for s in sides:
        ra = _rotate(lat.faces[s], u, e)
        if ra is not None and ra[1][0] == v:
            a_star = (s, ra)
        rb = _rotate(lat.faces[s], v, e)
        if rb is not None and rb[1][0] == u:
            b_star = (s, rb)
    if a_star is None or b_star is None or a_star[0] == b_star[0]:
        raise SurgeryError(f"faces beside edge {e} are not consistently oriented")
    (A, ra), (B, rb) = a_star, b_star
    if len(ra) < 4 or len(rb) < 4:
        raise SurgeryError(f"face beside edge {e} is too small to merge")
    x1, y1 = ra[-1][0], ra[2][0]
    x2, y2 = rb[2][0], rb[-1][0]
    if merged_color is None:
        if A in modified and B not in modified:
            merged_color = lat.faces[A].color
        elif B in modified and A not in modified:
            merged_color = lat.faces[B].color
        else:
            merged_color = lat.faces[A].color
    e1, e2 = lat.new_id("edge"), lat.new_id("edge")
    c0, c1 = lat.faces[f0].color, lat.faces[f1].color
    lat.edges[e1] = (x1, x2, _edge_color(c0, merged_color, twist_color))
    lat.edges[e2] = (y1, y2, _edge_color(c1, merged_color, twist_color))
    merged = [p for p in ra[2:]]
    merged[-1] = (merged[-1][0], e1)
    tail = [p for p in rb[2:]]
    tail[-1] = (tail[-1][0], e2)
    merged += tail
    mid = lat.new_id("face")
    lat.faces[f0] = _drop_vertex(lat.faces[f0], u, e1)
    lat.faces[f1] = _drop_vertex(lat.faces[f1], v, e2)
    del lat.faces[A]
    del lat.faces[B]
    lat.faces[mid] = Face(tuple(p[0] for p in merged), tuple(p[1] for p in merged), merged_color)
    for old in (e, ra[1][1], ra[-1][1], rb[1][1], rb[-1][1]):
        lat.edges.pop(old, None)
    del lat.vertices[u]
    del lat.vertices[v]
    rec = SurgeryRecord(kind, e, (u, v), (e1, e2), (A, B), mid, merged_color)
    return lat, rec, mid


def _resolve_parallel(lat: Lattice, new_edges: Iterable[int], twist_color: str) -> Tuple[Lattice, List[SurgeryRecord]]:
    """Remove digons created by surgery: drop both their vertices and join the neighbours."""
    recs = []
    pending = [e for e in new_edges if e in lat.edges]
    while pending:
        e = pending.pop()
        if e not in lat.edges:
            continue
        a, b, _ = lat.edges[e]
        par = [f for f, (p, q, _) in lat.edges.items() if f != e and {p, q} == {a, b}]
        if not par:
            continue
        lat = lat.copy()
        fe = lat.faces_of_edge()
        digon = [f for f in fe[e] if len(lat.faces[f]) == 2 and par[0] in lat.faces[f].edges]
        if not digon:
            raise SurgeryError(f"parallel edges {e}, {par[0]} do not bound a digon")
        D = digon[0]
        ends = []
        for x in (a, b):
            out = [(f, (p if q == x else q)) for f, (p, q, _) in lat.edges.items() if x in (p, q) and f not in (e, par[0])]
            if len(out) != 1:
                raise SurgeryError(f"vertex {x} on parallel edges is not trivalent")
            ends.append(out[0])
        (ea, a2), (eb, b2) = ends
        en = lat.new_id("edge")
        for fid, face in list(lat.faces.items()):
            if fid == D:
                continue
            vs, es = list(face.vertices), list(face.edges)
            if a not in vs and b not in vs:
                continue
            # the run x2 - (a, b in some order) - y2 collapses onto the new edge
            keep_v, keep_e = [], []
            m = len(vs)
            for i in range(m):
                if vs[i] in (a, b):
                    continue
                keep_v.append(vs[i])
                nxt = vs[(i + 1) % m]
                keep_e.append(en if nxt in (a, b) else es[i])
            lat.faces[fid] = Face(tuple(keep_v), tuple(keep_e), face.color)
        del lat.faces[D]
        for x in (e, par[0], ea, eb):
            lat.edges.pop(x, None)
        del lat.vertices[a]
        del lat.vertices[b]
        sides = [f for f, face in lat.faces.items() if en in face.edges]
        cols = [lat.faces[f].color for f in sides]
        lat.edges[en] = (a2, b2, _edge_color(cols[0], cols[-1], twist_color) if len(cols) == 2 else twist_color)
        recs.append(SurgeryRecord("parallel", e, (a, b), (en,), (D,), -1, ""))
        pending.append(en)
    return lat, recs


# codes ----------------------------------------------------------------------------

@dataclass(frozen=True)
class ColorStabLabel:
    face: int
    kind: str  # 'X', 'Z' or 'Y'


@dataclass
class ColorTwistedCode:
    lattice: Lattice
    color: str
    twists: List[int]
    modified: Dict[int, str] = field(default_factory=dict)
    removed: List[int] = field(default_factory=list)
    history: List[SurgeryRecord] = field(default_factory=list)
    paths: List[TwistPath] = field(default_factory=list)
    css_twists: Optional[str] = None
    stabilizers: List[PauliOperator] = field(default_factory=list)
    labels: List[ColorStabLabel] = field(default_factory=list)
    qubit: Dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.stabilizers:
            self.assign()

    @property
    def n(self) -> int:
        return len(self.lattice.vertices)

    @property
    def t(self) -> int:
        return len(self.twists)

    def assign(self) -> None:
        """X and Z on every even face, Y (or the CSS choice) on twist faces."""
        lat = self.lattice
        self.qubit = lat.vertex_index()
        self.stabilizers, self.labels = [], []
        tset = set(self.twists)
        for f in sorted(lat.faces):
            qs = [self.qubit[v] for v in lat.faces[f].vertices]
            kinds = [self.css_twists or "Y"] if f in tset else ["X", "Z"]
            for k in kinds:
                self.stabilizers.append(PauliOperator.from_support(self.n, qs, k))
                self.labels.append(ColorStabLabel(f, k))

    def odd_faces(self) -> List[int]:
        return sorted(f for f, face in self.lattice.faces.items() if len(face) % 2)

    def stabilizers_of(self, face: int) -> List[PauliOperator]:
        return [s for s, l in zip(self.stabilizers, self.labels) if l.face == face]


def _check_trivalent(lat: Lattice, trace) -> None:
    bad = sorted(v for v, d in lat.degree().items() if d != 3)
    if bad:
        raise SurgeryError(f"vertices {bad[:6]} are not trivalent after surgery", trace)


def create_twist_pair(lat: Lattice, path: TwistPath, merged_color: Optional[str] = None,
                      code: Optional[ColorTwistedCode] = None) -> ColorTwistedCode:
    """Run the creation step on the first path edge and move the second twist
    along the rest of the path."""
    bad = check_path(lat, path)
    if bad:
        raise PathError(bad[0].split(":")[0], bad[0])
    prior_mod = code.modified if code else {}
    lat2, rec, mid = surgery_step(lat, path.edges[0], path.color, merged_color, "create", prior_mod)
    history = (list(code.history) if code else []) + [rec]
    lat2, extra = _resolve_parallel(lat2, rec.added_edges, path.color)
    history += extra
    _check_trivalent(lat2, history)
    modified = {f: c for f, c in prior_mod.items() if f not in rec.merged}
    modified[mid] = rec.merged_color
    twists = (list(code.twists) if code else []) + [path.waypoints[0], path.waypoints[1]]
    removed = (list(code.removed) if code else []) + [v for r in [rec] + extra for v in r.removed]
    paths = (list(code.paths) if code else []) + [path]
    code2 = ColorTwistedCode(lat2, path.color, twists, modified, removed, history, paths,
                             code.css_twists if code else None)
    for e in path.edges[1:]:
        code2 = move_twist(code2, code2.twists[-1], e)
    return code2


def move_twist(code: ColorTwistedCode, twist: int, edge: int, merged_color: Optional[str] = None,
               enforce_c2: bool = True) -> ColorTwistedCode:
    """Move the twist on face ``twist`` across the c edge ``edge`` to the next c face."""
    lat = code.lattice
    if twist not in code.twists:
        raise PathError("C1", f"face {twist} holds no twist")
    label = code.twists.index(twist) + 1
    tw = twist
    if edge not in lat.edges:
        raise PathError("C1", f"edge {edge} does not exist")
    u, v, _ = lat.edges[edge]
    fv, fe = lat.faces_of_vertex(), lat.faces_of_edge()
    sides = set(fe[edge])
    ends = [[f for f in fv[x] if f not in sides] for x in (u, v)]
    if [tw] not in ends:
        raise PathError("C1", f"edge {edge} does not leave twist face {tw}")
    target = ends[1][0] if ends[0] == [tw] else ends[0][0]
    if target in code.twists:
        raise PathError("C1", f"face {target} already holds a twist")
    if lat.faces[target].color != code.color:
        raise PathError("C1", f"face {target} is not {code.color}")
    # C2 against the previous waypoint of this twist, when known
    prev = _previous_waypoint(code, label)
    if enforce_c2 and prev is not None and prev in lat.faces:
        d = dual(lat)
        if d.distances(prev).get(target) == 2 and d.distances(prev).get(tw) == 2 and d.distances(tw).get(target) == 2:
            raise PathError("C2", f"faces {prev}, {tw}, {target} are pairwise at distance two")
    lat2, rec, mid = surgery_step(lat, edge, code.color, merged_color, "move", code.modified)
    history = list(code.history) + [rec]
    lat2, extra = _resolve_parallel(lat2, rec.added_edges, code.color)
    history += extra
    _check_trivalent(lat2, history)
    modified = {f: c for f, c in code.modified.items() if f not in rec.merged}
    modified[mid] = rec.merged_color
    twists = list(code.twists)
    twists[label - 1] = target
    removed = list(code.removed) + [v for r in [rec] + extra for v in r.removed]
    return ColorTwistedCode(lat2, code.color, twists, modified, removed, history, list(code.paths), code.css_twists)


def twist_moves(code: ColorTwistedCode, twist: int) -> List[Tuple[int, int]]:
    """(edge, target face) for every c edge leaving a twist face towards a free c face."""
    lat = code.lattice
    fv, fe = lat.faces_of_vertex(), lat.faces_of_edge()
    out = []
    for e in sorted(lat.edges):
        if len(fe[e]) != 2 or lat.outer_face in fe[e]:
            continue
        a, b = end_faces(lat, e, fv, fe)
        if twist not in (a, b) or a == b:
            continue
        other = b if a == twist else a
        if other is not None and other not in code.twists and lat.faces[other].color == code.color:
            out.append((e, other))
    return out


def _previous_waypoint(code: ColorTwistedCode, label: int) -> Optional[int]:
    tw = code.twists[label - 1]
    for p in code.paths:
        if tw in p.waypoints:
            k = p.waypoints.index(tw)
            return p.waypoints[k - 1] if k > 0 else None
    return None


def insert_color_twists(lat: Lattice, paths: Sequence[TwistPath], merged_color: Optional[str] = None,
                        css_twists: Optional[str] = None) -> ColorTwistedCode:
    """Create every pair in turn."""
    if not paths:
        return ColorTwistedCode(lat, "r", [], css_twists=css_twists)
    colors = {p.color for p in paths}
    if len(colors) != 1:
        log.warning("twist pairs of different colors; parameter counts fall back to rank only")
    if css_twists not in (None, "X", "Z"):
        raise ValueError("css twist stabilizers must be 'X' or 'Z'")
    code = None
    cur = lat
    for p in paths:
        code = create_twist_pair(cur, p, merged_color, code)
        cur = code.lattice
    code.css_twists = css_twists
    code.assign()
    return code


# checks -----------------------------------------------------------------------------

def dependency_products(code: ColorTwistedCode, colors: Sequence[str] = ("b", "g")) -> Dict[str, PauliOperator]:
    """Products of X- and Z-type generators over every face of the given colors."""
    out = {}
    for kind in ("X", "Z"):
        ops = [s for s, l in zip(code.stabilizers, code.labels)
               if l.kind == kind and code.lattice.faces[l.face].color in colors and l.face not in code.twists]
        out[kind] = product(ops, code.n)
    return out


@dataclass
class ColorCodeParameters:
    n: int
    k: int
    gauge: int
    logical: int
    independent: int
    formula_k: Optional[int]
    formula_gauge: Optional[int]


def count_parameters(code: ColorTwistedCode) -> ColorCodeParameters:
    s = rank(code.stabilizers)
    k = code.n - s
    t = code.t
    same_color = len({code.lattice.faces[f].color for f in code.twists}) <= 1
    logical = t // 3
    if not same_color:
        log.warning("mixed twist colors: only the rank count is reported")
        return ColorCodeParameters(code.n, k, k - logical, logical, s, None, None)
    fk = t - 2 if t else 0
    return ColorCodeParameters(code.n, k, k - logical, logical, s, fk, fk - logical)


def find_t_line(code: ColorTwistedCode, pair: Tuple[int, int]) -> List[int]:
    """Edges joining a twist pair along which faces of one color meet.

    Walks from the first twist through c faces: at each face take an edge
    whose two sides share a color and whose far end is a c face, until the
    partner twist is reached.
    """
    lat = code.lattice
    if not code.twists:
        raise ValueError("untwisted lattice has no T-line")
    a, b = pair
    fv, fe = lat.faces_of_vertex(), lat.faces_of_edge()
    links: Dict[int, List[Tuple[int, int]]] = {}
    for e, (u, v, _) in lat.edges.items():
        sides = fe[e]
        if len(sides) != 2 or lat.outer_face in sides:
            continue
        if lat.faces[sides[0]].color != lat.faces[sides[1]].color:
            continue
        eu = [f for f in fv[u] if f not in sides]
        ev = [f for f in fv[v] if f not in sides]
        if len(eu) != 1 or len(ev) != 1:
            continue
        p, q = eu[0], ev[0]
        links.setdefault(p, []).append((q, e))
        links.setdefault(q, []).append((p, e))
    prev = {a: None}
    dq = deque([a])
    while dq:
        f = dq.popleft()
        if f == b:
            break
        for g, e in sorted(links.get(f, [])):
            if g not in prev and (g == b or g not in code.twists):
                prev[g] = (f, e)
                dq.append(g)
    if b not in prev:
        raise SurgeryError(f"no T-line between twist faces {a} and {b}")
    out = []
    f = b
    while prev[f] is not None:
        f, e = prev[f]
        out.append(e)
    return out[::-1]


def validate_t_line(code: ColorTwistedCode, pair: Tuple[int, int], edges: Sequence[int]) -> bool:
    lat = code.lattice
    fv, fe = lat.faces_of_vertex(), lat.faces_of_edge()
    cur = pair[0]
    for e in edges:
        u, v, _ = lat.edges[e]
        sides = fe[e]
        if lat.faces[sides[0]].color != lat.faces[sides[1]].color:
            return False
        eu = [f for f in fv[u] if f not in sides]
        ev = [f for f in fv[v] if f not in sides]
        if eu == [cur]:
            cur = ev[0]
        elif ev == [cur]:
            cur = eu[0]
        else:
            return False
    return cur == pair[1]


# logical operators ------------------------------------------------------------------

def _region_rim_qubits(code, region: Iterable[int]) -> List[int]:
    """Qubits on faces of the region that touch its outside."""
    lat = code.lattice
    region = set(region)
    adj = lat.face_adjacency()
    rim = [f for f in region if any(g not in region for g in adj[f])]
    return sorted({code.qubit[v] for f in rim for v in lat.faces[f].vertices})


def loop_operators(code, region: Iterable[int], kind: str) -> List[PauliOperator]:
    """Independent pure-``kind`` operators on the region's rim that commute with
    every stabilizer and are not stabilizers themselves."""
    qs = _region_rim_qubits(code, region)
    n = code.n
    m = len(qs)
    pos = {q: i for i, q in enumerate(qs)}
    rows = []
    for s in code.stabilizers:
        r = 0
        # a pure-kind operator anticommutes where s has the conjugate letter
        part = s.z if kind == "X" else s.x
        if kind == "Y":
            part = s.x ^ s.z
        for q, i in pos.items():
            if (part >> q) & 1:
                r |= 1 << i
        if r:
            rows.append(r)
    from .pauli import nullspace
    sols = nullspace(rows, m)
    e = Eliminator()
    for s in code.stabilizers:
        e.add(s.word())
    out = []
    for v in sols:
        mask = 0
        for i, q in enumerate(qs):
            if (v >> i) & 1:
                mask |= 1 << q
        p = PauliOperator.from_support(n, [q for q in qs if (mask >> q) & 1], kind)
        if e.add(p.word()):
            out.append(p)
    return out


def twist_region(code, members: Sequence[int], margin: int = 1) -> FrozenSet[int]:
    """Faces around a shortest dual path through ``members``, avoiding other twists."""
    lat = code.lattice
    d = dual(lat)
    adj = d.adjacency()
    others = [t for t in code.twists if t not in members]
    blocked = set(others) | {lat.outer_face}
    for t in others:
        blocked.update(adj[t])
    route = [members[0]]
    for a, b in zip(members, members[1:]):
        seg = d.shortest_path(a, b, blocked=blocked)
        if seg is None:
            raise ValueError(f"no route between faces {a} and {b}")
        route += seg[1:]
    region = set(route)
    for _ in range(margin):
        region |= {g for f in region for g in adj[f]}
    region.discard(lat.outer_face)
    for t in others:
        region -= set(adj[t]) | {t}
    return frozenset(region)


@dataclass
class ColorLogicals:
    logicals: List[Tuple[PauliOperator, PauliOperator]]  # (X, Z)
    gauge: List[Tuple[PauliOperator, PauliOperator]]
    triples: List[Tuple[int, int, int]]


def _loop(code, members, kind):
    ops = loop_operators(code, twist_region(code, members), kind)
    if not ops:
        raise ValueError(f"no {kind}-type loop around twists {members}")
    return ops


def four_twist_logicals(code: ColorTwistedCode, labels: Tuple[int, int, int, int] = (1, 2, 3, 4),
                        letters: Tuple[str, str] = ("X", "Z")) -> Tuple[PauliOperator, PauliOperator]:
    """(X, Z) for a four-twist qubit: Z loops the second created pair, X loops
    one twist of each pair (the second of each).  ``letters`` gives the Pauli
    letter of the X and Z loops."""
    t1, t2, t3, t4 = (code.twists[i - 1] for i in labels)
    zs = _loop(code, [t3, t4], letters[1])
    xs = _loop(code, [t2, t4], letters[0])
    for z in zs:
        for x in xs:
            if symplectic_product(x, z):
                return x, z
    raise ValueError("loops around the two twist pairs do not anticommute")


def canonical_logicals(code: ColorTwistedCode) -> ColorLogicals:
    """Per triple (a, b, c) of twists: Z loops (a, b), X loops (a, c).

    Z uses Z letters and X uses X letters, so each pair anticommutes through
    the odd overlap where strings of different color cross.
    """
    from .charge_twists import complete_gauge, twist_triples
    triples = twist_triples(code.t)
    logicals = []
    for k, (a, b, c) in enumerate(triples):
        ta, tb, tc = (code.twists[i - 1] for i in (a, b, c))
        zkind, xkind = ("Z", "X") if k % 2 == 0 else ("X", "Z")
        zs = _loop(code, [ta, tb], zkind)
        xs = _loop(code, [ta, tc], xkind)
        pair = None
        for z in zs:
            for x in xs:
                if symplectic_product(x, z):
                    pair = (x, z)
                    break
            if pair:
                break
        if pair is None:
            raise ValueError(f"no anticommuting loops for triple {(a, b, c)}")
        logicals.append(pair)
    # make the pairs mutually canonical
    fixed: List[Tuple[PauliOperator, PauliOperator]] = []
    for x, z in logicals:
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
    gauge = complete_gauge(code.n, code.stabilizers, fixed)
    return ColorLogicals(fixed, gauge, triples)


def linear_pairs(lat: Lattice, pairs: int, separation: int = 2, color: str = "r", gap: Optional[int] = None) -> List[Tuple[int, int]]:
    """End faces for ``pairs`` twist pairs laid out left to right along one
    row of c faces.  Distances count steps in the c-shrunk lattice."""
    sg = shrunk(lat, color)
    adj = dual(lat).adjacency()
    near_outer = {lat.outer_face} | set(adj[lat.outer_face])
    links: Dict[int, set] = {}
    for _, a, b in sg.links:
        links.setdefault(a, set()).add(b)
        links.setdefault(b, set()).add(a)

    def steps(src):
        dist = {src: 0}
        q = deque([src])
        while q:
            f = q.popleft()
            for g in links.get(f, ()):
                if g not in dist and g not in near_outer:
                    dist[g] = dist[f] + 1
                    q.append(g)
        return dist

    gap = separation if gap is None else gap
    nodes = [f for f in sg.nodes if f not in near_outer]
    ys = sorted({round(lat.centroid(f)[1], 3) for f in nodes})
    mid = (ys[0] + ys[-1]) / 2 if ys else 0.0
    for y in sorted(ys, key=lambda y: (abs(y - mid), y)):
        row = sorted((f for f in nodes if abs(lat.centroid(f)[1] - y) < 1e-3), key=lambda f: lat.centroid(f)[0])
        out, k, used = [], 0, []
        while len(out) < pairs and k < len(row):
            a = row[k]
            if used and any(steps(u).get(a, -1) < gap for u in used):
                k += 1
                continue
            da = steps(a)
            rest = [b for b in row[k + 1:] if da.get(b, -1) >= separation]
            if not rest:
                break
            b = rest[0]
            out.append((a, b))
            used += [a, b]
            k = row.index(b) + 1
        if len(out) == pairs:
            return out
    raise ValueError("lattice too small for the requested pairs")
