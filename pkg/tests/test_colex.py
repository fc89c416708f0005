import json

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from twistcc.charge_twists import insert_charge_twists
from twistcc.colex import (
    Face, Lattice, build_hexagonal, build_square_octagon, dual, shrunk, twist_separation, validate,
)
from twistcc.pauli import PauliOperator, rank

from oracles import dual_graph, gf2_rank, symplectic_rows, trace_faces

BUILDERS = {"hex": build_hexagonal, "488": build_square_octagon}
SIZES = [("hex", 1, 1), ("hex", 2, 2), ("hex", 3, 2), ("488", 1, 1), ("488", 2, 2), ("488", 2, 3)]


@pytest.fixture(scope="module", params=SIZES, ids=lambda s: f"{s[0]}-{s[1]}x{s[2]}")
def lattice(request):
    fam, r, c = request.param
    return BUILDERS[fam](r, c)


def test_generated_lattices_valid(lattice):
    assert validate(lattice).ok
    v, e, f = len(lattice.vertices), len(lattice.edges), len(lattice.faces)
    assert 3 * v == 2 * e
    assert 2 * f == v + 4
    assert v + f - e == 2
    assert lattice.faces[lattice.outer_face].color == "b"


def test_faces_match_traced_embedding(lattice):
    # face sizes recovered from coordinates alone; weight-two boundary faces
    # are parallel edge pairs, which a straight-line embedding cannot tell apart
    edges = sorted({tuple(sorted((u, v))) for u, v, _ in lattice.edges.values()})
    assert trace_faces(lattice.vertices, edges) == sorted(
        len(f.vertices) for f in lattice.faces.values() if len(f.vertices) > 2)


def test_proper_coloring(lattice):
    for a, nbrs in lattice.face_adjacency().items():
        for b in nbrs:
            assert lattice.faces[a].color != lattice.faces[b].color


@pytest.mark.parametrize("fam", ["hex", "488"])
def test_base_code_encodes_nothing(fam):
    lat = BUILDERS[fam](2, 2)
    f = len(lat.faces)
    q = lat.vertex_index()
    full = [PauliOperator.from_support(len(q), [q[v] for v in face.vertices], kind)
            for face in lat.faces.values() for kind in "XZ"]
    assert gf2_rank(symplectic_rows(full)) == rank(full) == 2 * f - 4
    code = insert_charge_twists(lat, [])
    r = gf2_rank(symplectic_rows(code.stabilizers))
    assert r == rank(code.stabilizers) == len(lat.vertices)


def test_validate_flags_deleted_edge():
    lat = build_hexagonal(2, 2)
    bad = lat.copy()
    e = sorted(bad.edges)[len(bad.edges) // 2]
    u, v, _ = bad.edges.pop(e)
    rep = validate(bad)
    assert not rep.ok
    deg = dict(rep.issues)["degree"]
    assert sorted(deg) == sorted((u, v))


def test_validate_flags_equal_neighbour_colors():
    lat = build_hexagonal(2, 2)
    bad = lat.copy()
    a = next(f for f in sorted(bad.faces) if f != bad.outer_face)
    b = next(iter(bad.face_adjacency()[a]))
    fa = bad.faces[a]
    bad.faces[a] = Face(fa.vertices, fa.edges, bad.faces[b].color)
    assert "coloring" in validate(bad).kinds()


def test_dual_counts(lattice):
    d = dual(lattice)
    assert len(d.nodes) == len(lattice.faces)
    assert len(d.links) == len(lattice.edges)


def test_dual_adjacency_matches_oracle(lattice):
    g = dual_graph(lattice)
    adj = dual(lattice).adjacency()
    assert {f: sorted(g.neighbors(f)) for f in g.nodes} == adj


@pytest.mark.parametrize("c", ["r", "g", "b"])
def test_shrunk_links_join_same_color(lattice, c):
    s = shrunk(lattice, c)
    assert set(s.nodes) == set(lattice.faces_by_color(c))
    for e, a, b in s.links:
        assert lattice.edges[e][2] == c
        assert lattice.faces[a].color == c and lattice.faces[b].color == c
    # degree in the shrunk graph counts incident c-edges
    deg = {f: 0 for f in s.nodes}
    for _, a, b in s.links:
        deg[a] += 1
        deg[b] += 1
    # each c edge off the face's boundary counts once per endpoint on the face
    for f in s.nodes:
        face = lattice.faces[f]
        ends = sum((u in face.vertices) + (v in face.vertices) for e, (u, v, col) in lattice.edges.items()
                   if col == c and e not in face.edges)
        assert deg[f] == ends


def test_twist_separation_examples():
    lat = build_hexagonal(2, 2)
    d = dual(lat)
    f = next(x for x in sorted(lat.faces) if x != lat.outer_face)
    assert twist_separation(d, f, f) == 0
    assert twist_separation(d, f, d.adjacency()[f][0]) == 1


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_twist_separation_is_a_metric(data):
    lat = build_square_octagon(2, 2)
    d = dual(lat)
    g = dual_graph(lat)
    faces = sorted(lat.faces)
    a, b, c = (data.draw(st.sampled_from(faces)) for _ in range(3))
    ab = twist_separation(d, a, b)
    assert ab == nx.shortest_path_length(g, a, b)
    assert ab == twist_separation(d, b, a)
    assert twist_separation(d, a, c) <= ab + twist_separation(d, b, c)


def test_json_round_trip(lattice):
    text = lattice.dumps()
    back = Lattice.loads(text)
    assert back.dumps() == text
    assert back.vertices == lattice.vertices and back.faces == lattice.faces
    doc = json.loads(text)
    assert {"vertices", "edges", "faces", "outer_face"} <= set(doc)


def test_ids_never_reused():
    lat = build_hexagonal(1, 1)
    before = lat.next_ids["vertex"]
    v = max(lat.vertices)
    del lat.vertices[v]
    assert lat.new_id("vertex") == before
    assert before > v


def test_rejects_nonpositive_size():
    with pytest.raises(ValueError):
        build_hexagonal(0, 2)
