"""Bounded 2-colexes: trivalent planar lattices with three-colored faces.

Both lattice families are built the same way.  A planar triangulation whose
vertices carry a proper 3-coloring is taken from a periodic tiling, trimmed
so that its boundary avoids blue, and closed off with a blue apex vertex.
The dual of that triangulation is trivalent, its faces inherit the vertex
colors, and the apex becomes the unbounded blue face.

Faces keep both their vertex cycle and the matching edge cycle
(``edges[i]`` joins ``vertices[i]`` and ``vertices[i+1]``) so that parallel
edges, which appear around weight-two boundary faces and after surgery,
stay unambiguous.
"""
from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

COLORS = ("r", "g", "b")


def third_color(a: str, b: str) -> str:
    (c,) = set(COLORS) - {a, b}
    return c


@dataclass(frozen=True)
class Face:
    vertices: Tuple[int, ...]
    edges: Tuple[int, ...]
    color: str

    def __len__(self) -> int:
        return len(self.vertices)


@dataclass
class Lattice:
    vertices: Dict[int, Tuple[float, float]]
    edges: Dict[int, Tuple[int, int, str]]
    faces: Dict[int, Face]
    outer_face: int
    next_ids: Dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        for kind, table in (("vertex", self.vertices), ("edge", self.edges), ("face", self.faces)):
            self.next_ids.setdefault(kind, max(table, default=-1) + 1)

    # id allocation never reuses ids, even after deletions
    def new_id(self, kind: str) -> int:
        i = self.next_ids[kind]
        self.next_ids[kind] = i + 1
        return i

    def copy(self) -> "Lattice":
        return Lattice(dict(self.vertices), dict(self.edges), dict(self.faces),
                       self.outer_face, dict(self.next_ids))

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def vertex_index(self) -> Dict[int, int]:
        """Qubit index of each vertex id (sorted id order)."""
        return {v: i for i, v in enumerate(sorted(self.vertices))}

    def faces_of_vertex(self) -> Dict[int, List[int]]:
        out: Dict[int, List[int]] = {v: [] for v in self.vertices}
        for fid, f in self.faces.items():
            for v in f.vertices:
                out[v].append(fid)
        return out

    def faces_of_edge(self) -> Dict[int, List[int]]:
        out: Dict[int, List[int]] = {e: [] for e in self.edges}
        for fid, f in self.faces.items():
            for e in f.edges:
                out.setdefault(e, []).append(fid)
        return out

    def degree(self) -> Dict[int, int]:
        deg = {v: 0 for v in self.vertices}
        for u, v, _ in self.edges.values():
            deg[u] = deg.get(u, 0) + 1
            deg[v] = deg.get(v, 0) + 1
        return deg

    def face_adjacency(self) -> Dict[int, Dict[int, List[int]]]:
        """face -> neighbouring face -> shared edge ids."""
        adj: Dict[int, Dict[int, List[int]]] = {f: {} for f in self.faces}
        for e, fs in self.faces_of_edge().items():
            if len(fs) == 2 and fs[0] != fs[1]:
                a, b = fs
                adj[a].setdefault(b, []).append(e)
                adj[b].setdefault(a, []).append(e)
        return adj

    def faces_by_color(self, c: str) -> List[int]:
        return sorted(f for f, face in self.faces.items() if face.color == c)

    def centroid(self, fid: int) -> Tuple[float, float]:
        pts = [self.vertices[v] for v in self.faces[fid].vertices]
        return (sum(p[0] for p in pts) / len(pts), sum(p[1] for p in pts) / len(pts))

    # serialization
    def to_json(self) -> dict:
        return {
            "vertices": [{"id": v, "x": xy[0], "y": xy[1]} for v, xy in sorted(self.vertices.items())],
            "edges": [{"id": e, "u": u, "v": v, "color": c} for e, (u, v, c) in sorted(self.edges.items())],
            "faces": [{"id": f, "vertices": list(face.vertices), "edges": list(face.edges),
                       "color": face.color} for f, face in sorted(self.faces.items())],
            "outer_face": self.outer_face,
            "next_ids": dict(sorted(self.next_ids.items())),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1)

    @classmethod
    def from_json(cls, data: dict) -> "Lattice":
        vertices = {int(d["id"]): (float(d["x"]), float(d["y"])) for d in data["vertices"]}
        edges = {int(d["id"]): (int(d["u"]), int(d["v"]), d["color"]) for d in data["edges"]}
        faces = {}
        for d in data["faces"]:
            verts = tuple(int(v) for v in d["vertices"])
            if "edges" in d:
                es = tuple(int(e) for e in d["edges"])
            else:
                es = _edges_from_vertices(verts, edges)
            faces[int(d["id"])] = Face(verts, es, d["color"])
        lat = cls(vertices, edges, faces, int(data["outer_face"]),
                  {k: int(v) for k, v in data.get("next_ids", {}).items()})
        return lat

    @classmethod
    def loads(cls, text: str) -> "Lattice":
        return cls.from_json(json.loads(text))


def _edges_from_vertices(verts: Sequence[int], edges: Dict[int, Tuple[int, int, str]]) -> Tuple[int, ...]:
    lookup: Dict[frozenset, List[int]] = {}
    for e, (u, v, _) in edges.items():
        lookup.setdefault(frozenset((u, v)), []).append(e)
    out = []
    for i, a in enumerate(verts):
        b = verts[(i + 1) % len(verts)]
        cands = lookup.get(frozenset((a, b)), [])
        if len(cands) != 1:
            raise ValueError(f"face edges ambiguous between {a} and {b}; include 'edges'")
        out.append(cands[0])
    return tuple(out)


# validation ----------------------------------------------------------------

@dataclass
class ValidationReport:
    issues: List[Tuple[str, Tuple[int, ...]]] = field(default_factory=list)

    def add(self, what: str, ids: Iterable[int]) -> None:
        self.issues.append((what, tuple(ids)))

    @property
    def ok(self) -> bool:
        return not self.issues

    def kinds(self) -> List[str]:
        return [k for k, _ in self.issues]

    def __bool__(self) -> bool:
        return bool(self.issues)


def validate(lat: Lattice, *, check_edge_colors: bool = True, boundary_identity: bool = True) -> ValidationReport:
    """Check the colex axioms; returns an empty report for a valid lattice."""
    rep = ValidationReport()
    deg = lat.degree()
    bad_deg = sorted(v for v, d in deg.items() if d != 3)
    if bad_deg:
        rep.add("degree", bad_deg)
    dangling = sorted(e for e, (u, v, _) in lat.edges.items() if u not in lat.vertices or v not in lat.vertices)
    if dangling:
        rep.add("dangling-edge", dangling)
    # face cycles must follow real edges
    broken = []
    for fid, f in lat.faces.items():
        if len(f.vertices) != len(f.edges) or len(f.vertices) < 2:
            broken.append(fid)
            continue
        for i, e in enumerate(f.edges):
            if e not in lat.edges:
                broken.append(fid)
                break
            a, b = f.vertices[i], f.vertices[(i + 1) % len(f.vertices)]
            if {lat.edges[e][0], lat.edges[e][1]} != {a, b}:
                broken.append(fid)
                break
    if broken:
        rep.add("face-cycle", sorted(set(broken)))
    fe = lat.faces_of_edge()
    wrong_sides = sorted(e for e in lat.edges if len(fe.get(e, [])) != 2)
    if wrong_sides:
        rep.add("edge-sides", wrong_sides)
    clash = set()
    for e, fs in fe.items():
        if len(fs) == 2 and lat.faces[fs[0]].color == lat.faces[fs[1]].color:
            clash.update(fs)
    if clash:
        rep.add("coloring", sorted(clash))
    if check_edge_colors and not broken:
        fv = lat.faces_of_vertex()
        bad_ec = []
        for e, (u, v, c) in lat.edges.items():
            sides = set(fe.get(e, []))
            ends = [f for f in fv.get(u, []) + fv.get(v, []) if f not in sides]
            if any(lat.faces[f].color != c for f in ends) or any(lat.faces[f].color == c for f in sides):
                bad_ec.append(e)
        if bad_ec:
            rep.add("edge-color", sorted(bad_ec))
    v, e, f = len(lat.vertices), len(lat.edges), len(lat.faces)
    if v + f - e != 2:
        rep.add("euler", (v, e, f))
    if boundary_identity and 2 * f != v + 4:
        rep.add("2f=v+4", (v, f))
    if lat.outer_face not in lat.faces:
        rep.add("outer-face", (lat.outer_face,))
    return rep


# dual and shrunk graphs --------------------------------------------------------

@dataclass
class DualGraph:
    nodes: Dict[int, str]
    links: List[Tuple[int, int, int]]  # (edge id, face, face)

    def adjacency(self) -> Dict[int, List[int]]:
        adj: Dict[int, List[int]] = {f: [] for f in self.nodes}
        for _, a, b in self.links:
            if b not in adj[a]:
                adj[a].append(b)
            if a not in adj[b]:
                adj[b].append(a)
        for f in adj:
            adj[f].sort()
        return adj

    def distances(self, src: int, blocked: Iterable[int] = ()) -> Dict[int, int]:
        adj = self.adjacency()
        blocked = set(blocked)
        dist = {src: 0}
        q = deque([src])
        while q:
            u = q.popleft()
            for w in adj[u]:
                if w not in dist and w not in blocked:
                    dist[w] = dist[u] + 1
                    q.append(w)
        return dist

    def shortest_path(self, src: int, dst: int, blocked: Iterable[int] = ()) -> Optional[List[int]]:
        adj = self.adjacency()
        blocked = set(blocked) - {src, dst}
        prev = {src: None}
        q = deque([src])
        while q:
            u = q.popleft()
            if u == dst:
                break
            for w in adj[u]:
                if w not in prev and w not in blocked:
                    prev[w] = u
                    q.append(w)
        if dst not in prev:
            return None
        path = [dst]
        while prev[path[-1]] is not None:
            path.append(prev[path[-1]])
        return path[::-1]


@dataclass
class ShrunkGraph:
    color: str
    nodes: List[int]
    links: List[Tuple[int, int, int]]  # (edge id, face at u, face at v)


def dual(lat: Lattice) -> DualGraph:
    fe = lat.faces_of_edge()
    links = []
    for e in sorted(lat.edges):
        fs = fe.get(e, [])
        if len(fs) == 2:
            links.append((e, fs[0], fs[1]))
    return DualGraph({f: lat.faces[f].color for f in sorted(lat.faces)}, links)


def end_faces(lat: Lattice, e: int, fv=None, fe=None) -> Tuple[Optional[int], Optional[int]]:
    """Faces touching the endpoints of ``e`` without containing ``e``."""
    fv = lat.faces_of_vertex() if fv is None else fv
    fe = lat.faces_of_edge() if fe is None else fe
    u, v, _ = lat.edges[e]
    sides = set(fe[e])
    fu = [f for f in fv[u] if f not in sides]
    fw = [f for f in fv[v] if f not in sides]
    return (fu[0] if len(fu) == 1 else None, fw[0] if len(fw) == 1 else None)


def shrunk(lat: Lattice, c: str) -> ShrunkGraph:
    fv, fe = lat.faces_of_vertex(), lat.faces_of_edge()
    links = []
    for e in sorted(lat.edges):
        if lat.edges[e][2] != c:
            continue
        a, b = end_faces(lat, e, fv, fe)
        if a is not None and b is not None:
            links.append((e, a, b))
    return ShrunkGraph(c, lat.faces_by_color(c), links)


def twist_separation(d: DualGraph, f1: int, f2: int) -> int:
    dist = d.distances(f1)
    if f2 not in dist:
        raise ValueError("faces are disconnected in the dual")
    return dist[f2]


# construction --------------------------------------------------------------

def _prune_region(points: Dict[tuple, str], adj: Dict[tuple, set], tris: List[tuple], outer: str = "b"):
    """Trim a colored triangulated region until it is a disk whose boundary
    avoids ``outer`` colored points."""
    alive = set(points)
    tris = [t for t in tris]
    while True:
        live_tris = [t for t in tris if all(p in alive for p in t)]
        edge_count: Dict[frozenset, int] = {}
        by_vertex: Dict[tuple, List[tuple]] = {p: [] for p in alive}
        for t in live_tris:
            for i in range(3):
                edge_count[frozenset((t[i], t[(i + 1) % 3]))] = edge_count.get(frozenset((t[i], t[(i + 1) % 3])), 0) + 1
                by_vertex[t[i]].append(t)
        boundary = set()
        for ed, cnt in edge_count.items():
            if cnt == 1:
                boundary.update(ed)
        remove = set()
        for p in alive:
            if not by_vertex[p]:
                remove.add(p)
                continue
            if p in boundary and points[p] == outer:
                remove.add(p)
                continue
            # link must be a single cycle (interior) or a single path (boundary)
            link: Dict[tuple, List[tuple]] = {}
            for t in by_vertex[p]:
                a, b = [q for q in t if q != p]
                link.setdefault(a, []).append(b)
                link.setdefault(b, []).append(a)
            ends = [q for q, ns in link.items() if len(ns) == 1]
            if any(len(ns) > 2 for ns in link.values()) or len(ends) not in (0, 2):
                remove.add(p)
                continue
            seen = {next(iter(link))}
            stack = list(seen)
            while stack:
                u = stack.pop()
                for w in link[u]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            if len(seen) != len(link):
                remove.add(p)
                continue
            if p in boundary and not ends:
                remove.add(p)
        if not remove:
            break
        alive -= remove
    # keep the largest connected component
    comp_of = {}
    comps = []
    for p in sorted(alive):
        if p in comp_of:
            continue
        comp = {p}
        stack = [p]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w in alive and w not in comp:
                    comp.add(w)
                    stack.append(w)
        for q in comp:
            comp_of[q] = len(comps)
        comps.append(comp)
    if not comps:
        raise ValueError("region pruned away entirely")
    best = max(comps, key=len)
    return best, [t for t in tris if all(p in best for p in t)]


def _orient(t: tuple, coords: Dict[tuple, Tuple[float, float]]) -> tuple:
    (ax, ay), (bx, by), (cx, cy) = (coords[p] for p in t)
    area = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    return t if area > 0 else (t[0], t[2], t[1])


def _colex_from_triangulation(points: Dict[tuple, str], coords: Dict[tuple, Tuple[float, float]],
                              adj: Dict[tuple, set], tris: List[tuple]) -> Lattice:
    region, tris = _prune_region(points, adj, tris)
    tris = sorted(_orient(t, coords) for t in tris)
    directed: Dict[tuple, tuple] = {}
    for t in tris:
        for i in range(3):
            directed[(t[i], t[(i + 1) % 3])] = t
    # boundary edges are directed pairs whose reverse is absent: region on the left
    bnd = sorted((a, b) for (a, b) in directed if (b, a) not in directed)
    nxt = {a: b for a, b in bnd}
    if len(nxt) != len(bnd):
        raise ValueError("boundary is not a simple cycle")
    start = bnd[0][0]
    cycle = [start]
    while nxt[cycle[-1]] != start:
        cycle.append(nxt[cycle[-1]])
        if len(cycle) > len(bnd):
            raise ValueError("boundary is not a simple cycle")
    if len(cycle) != len(bnd):
        raise ValueError("boundary has several components")
    apex = ("apex",)
    all_tris = list(tris)
    tri_xy: Dict[tuple, Tuple[float, float]] = {}
    for t in tris:
        tri_xy[t] = (sum(coords[p][0] for p in t) / 3, sum(coords[p][1] for p in t) / 3)
    for a, b in bnd:
        t = (b, a, apex)
        all_tris.append(t)
        mx, my = (coords[a][0] + coords[b][0]) / 2, (coords[a][1] + coords[b][1]) / 2
        dx, dy = coords[b][0] - coords[a][0], coords[b][1] - coords[a][1]
        norm = math.hypot(dx, dy) or 1.0
        # the outside lies to the right of a -> b
        tri_xy[t] = (mx + 0.35 * dy / norm, my - 0.35 * dx / norm)
    directed = {}
    for t in all_tris:
        for i in range(3):
            directed[(t[i], t[(i + 1) % 3])] = t
    vid = {t: i for i, t in enumerate(all_tris)}
    face_keys = sorted(region) + [apex]
    fid = {p: i for i, p in enumerate(face_keys)}
    colors = dict(points)
    colors[apex] = "b"
    edge_id: Dict[frozenset, int] = {}
    edges: Dict[int, Tuple[int, int, str]] = {}
    faces: Dict[int, Face] = {}
    for p in face_keys:
        # walk the triangles around p counterclockwise
        first = next(t for t in all_tris if p in t)
        i = first.index(p)
        q = first[(i + 1) % 3]
        ring_t, ring_q = [], []
        cur = first
        while True:
            ring_t.append(cur)
            j = cur.index(p)
            r = cur[(j + 2) % 3]  # the vertex after cq going around p
            ring_q.append(r)
            cur = directed[(p, r)]
            if cur == first:
                break
        verts, es = [], []
        for k, t in enumerate(ring_t):
            verts.append(vid[t])
            nb = ring_q[k]
            key = frozenset((p, nb))
            if key not in edge_id:
                edge_id[key] = len(edge_id)
            es.append(edge_id[key])
        faces[fid[p]] = Face(tuple(verts), tuple(es), colors[p])
    # edges: the dual edge of triangulation edge (p, q) joins the two triangles containing it
    for key, e in edge_id.items():
        p, q = tuple(key)
        t1, t2 = directed[(p, q)], directed[(q, p)]
        edges[e] = (vid[t1], vid[t2], third_color(colors[p], colors[q]))
    vertices = {vid[t]: tri_xy[t] for t in all_tris}
    # renumber edges deterministically by sorted endpoints
    order = sorted(edges, key=lambda e: (min(edges[e][:2]), max(edges[e][:2]), e))
    remap = {e: i for i, e in enumerate(order)}
    edges = {remap[e]: val for e, val in edges.items()}
    faces = {f: Face(face.vertices, tuple(remap[e] for e in face.edges), face.color) for f, face in faces.items()}
    return Lattice(vertices, edges, faces, fid[apex])


def insert_digon(lat: Lattice, e: int) -> int:
    """Put a weight-two face on edge ``e`` between the outer face and an
    inner face; returns the new face id."""
    u, v, ecolor = lat.edges[e]
    fe = lat.faces_of_edge()
    sides = fe[e]
    if lat.outer_face not in sides:
        raise ValueError("digons go on outer-boundary edges")
    inner = [f for f in sides if f != lat.outer_face][0]
    a, b = lat.new_id("vertex"), lat.new_id("vertex")
    (ux, uy), (vx, vy) = lat.vertices[u], lat.vertices[v]
    lat.vertices[a] = (ux + (vx - ux) / 3, uy + (vy - uy) / 3)
    lat.vertices[b] = (ux + 2 * (vx - ux) / 3, uy + 2 * (vy - uy) / 3)
    inner_col = lat.faces[inner].color
    outer_col = lat.faces[lat.outer_face].color
    dcol = third_color(inner_col, outer_col)
    e_ua, e_bv = lat.new_id("edge"), lat.new_id("edge")
    e_in, e_out = lat.new_id("edge"), lat.new_id("edge")
    del lat.edges[e]
    lat.edges[e_ua] = (u, a, ecolor)
    lat.edges[e_bv] = (b, v, ecolor)
    lat.edges[e_in] = (a, b, outer_col)
    lat.edges[e_out] = (a, b, inner_col)

    def splice(face: Face, mid_edge: int) -> Face:
        vs, es = list(face.vertices), list(face.edges)
        k = es.index(e)
        if vs[k] == u:
            new_v = [u, a, b]
            new_e = [e_ua, mid_edge, e_bv]
        else:
            new_v = [v, b, a]
            new_e = [e_bv, mid_edge, e_ua]
        vs2 = vs[:k] + new_v + vs[k + 1:]
        es2 = es[:k] + new_e + es[k + 1:]
        return Face(tuple(vs2), tuple(es2), face.color)

    lat.faces[inner] = splice(lat.faces[inner], e_in)
    lat.faces[lat.outer_face] = splice(lat.faces[lat.outer_face], e_out)
    d = lat.new_id("face")
    # orientation: the digon runs opposite to the inner face along (a, b)
    inner_face = lat.faces[inner]
    k = inner_face.vertices.index(a)
    if inner_face.vertices[(k + 1) % len(inner_face.vertices)] == b:
        lat.faces[d] = Face((b, a), (e_in, e_out), dcol)
    else:
        lat.faces[d] = Face((a, b), (e_in, e_out), dcol)
    return d


def build_hexagonal(rows: int, cols: int, weight_two_boundary: bool = True) -> Lattice:
    """Bounded honeycomb colex with a blue unbounded face.

    Interior faces are hexagons.  With ``weight_two_boundary`` a two-qubit
    face is inserted on every outer edge whose inner face is green.
    """
    if rows < 1 or cols < 1:
        raise ValueError("rows and cols must be positive")
    names = {0: "b", 1: "r", 2: "g"}
    A, B = 2 * cols + 2, 2 * rows + 2
    points, coords, adj = {}, {}, {}
    for b in range(B + 1):
        for a in range(-(b // 2), A - (b // 2) + 1):
            p = (a, b)
            points[p] = names[(a - b) % 3]
            coords[p] = (a + b / 2.0, b * math.sqrt(3) / 2.0)
    for p in points:
        a, b = p
        adj[p] = {q for q in ((a + 1, b), (a - 1, b), (a, b + 1), (a, b - 1), (a + 1, b - 1), (a - 1, b + 1)) if q in points}
    tris = []
    for (a, b) in points:
        for t in (((a, b), (a + 1, b), (a, b + 1)), ((a + 1, b), (a + 1, b + 1), (a, b + 1))):
            if all(q in points for q in t):
                tris.append(t)
    lat = _colex_from_triangulation(points, coords, adj, tris)
    if weight_two_boundary:
        fe = lat.faces_of_edge()
        outer = lat.faces[lat.outer_face]
        for e in list(outer.edges):
            inner = [f for f in fe[e] if f != lat.outer_face][0]
            if lat.faces[inner].color == "g":
                insert_digon(lat, e)
    return lat


def build_square_octagon(rows: int, cols: int) -> Lattice:
    """Bounded 4.8.8 colex with a blue unbounded face.

    Squares are red and octagons alternate green and blue.  The region is
    a block of ``(2 rows + 1) x (2 cols + 1)`` octagon sites before blue
    boundary octagons are trimmed, which leaves shortened green and red
    faces along the boundary.
    """
    if rows < 1 or cols < 1:
        raise ValueError("rows and cols must be positive")
    W, H = 2 * cols + 2, 2 * rows + 2
    points, coords, adj = {}, {}, {}
    for i in range(W + 1):
        for j in range(H + 1):
            p = ("o", i, j)
            points[p] = "g" if (i + j) % 2 == 0 else "b"
            coords[p] = (float(i), float(j))
    for i in range(W):
        for j in range(H):
            p = ("s", i, j)
            points[p] = "r"
            coords[p] = (i + 0.5, j + 0.5)
    for p in points:
        adj[p] = set()
    tris = []
    for i in range(W + 1):
        for j in range(H + 1):
            for di, dj in ((1, 0), (0, 1)):
                q = ("o", i + di, j + dj)
                if q in points:
                    adj[("o", i, j)].add(q)
                    adj[q].add(("o", i, j))
    for i in range(W):
        for j in range(H):
            s = ("s", i, j)
            corners = [("o", i, j), ("o", i + 1, j), ("o", i + 1, j + 1), ("o", i, j + 1)]
            for k in range(4):
                a, b = corners[k], corners[(k + 1) % 4]
                adj[s].add(a)
                adj[a].add(s)
                tris.append((s, a, b))
    lat = _colex_from_triangulation(points, coords, adj, tris)
    return lat
