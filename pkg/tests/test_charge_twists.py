import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from twistcc.charge_twists import (
    ColorString, StringError, TwistPlacementError, canonical_logicals, classify_faces,
    commutation_cases, count_parameters, dependency_products, equivalent_modulo, insert_charge_twists,
    linear_layout, make_wall, open_string, string_to_pauli, twist_string,
)
from twistcc.colex import build_hexagonal, build_square_octagon, dual, shrunk
from twistcc.pauli import commutes

from oracles import brute_logical_count, gf2_rank, letters_of, symplectic_rows


def hex_code(pairs, sep):
    for cols in range(4, 30):
        lat = build_hexagonal(3, cols)
        try:
            return insert_charge_twists(lat, linear_layout(lat, pairs, sep))
        except ValueError:
            continue
    raise AssertionError("no lattice fits")


@pytest.fixture(scope="module")
def six():
    lat = build_hexagonal(2, 12)
    ys = sorted({round(lat.centroid(f)[1], 2) for f in lat.faces if f != lat.outer_face})
    for y in ys:
        try:
            code = insert_charge_twists(lat, linear_layout(lat, 3, 3, gap=3, start=1, y_target=y))
            return code, canonical_logicals(code)
        except ValueError:
            continue
    raise AssertionError("no row fits three pairs")


def oracle_k(code):
    return code.n - gf2_rank(symplectic_rows(code.stabilizers))


def test_no_twists_all_faces_normal():
    lat = build_hexagonal(2, 2)
    code = insert_charge_twists(lat, [])
    cls = classify_faces(code)
    assert cls["T"] == [] and cls["M"] == []
    assert cls["U"] == sorted(lat.faces)
    assert oracle_k(code) == 0


def test_one_pair_encodes_one():
    code = hex_code(1, 3)
    p = count_parameters(code)
    assert p.k == oracle_k(code) == 1
    assert p.n == len(code.lattice.vertices)
    # the subsystem split puts this qubit in the gauge: floor(2/3) = 0 logical
    assert (p.logical, p.gauge) == (0, 1)


def test_square_octagon_two_pairs():
    lat = build_square_octagon(3, 6)
    code = insert_charge_twists(lat, linear_layout(lat, 2, 2))
    assert code.t == 4
    assert count_parameters(code).k == oracle_k(code) == 3


@pytest.mark.parametrize("pairs", [1, 2, 3, 4])
@pytest.mark.parametrize("sep", [2, 3])
def test_k_is_t_minus_one(pairs, sep):
    code = hex_code(pairs, sep)
    t = 2 * pairs
    p = count_parameters(code)
    assert p.k == oracle_k(code) == t - 1
    assert p.independent == p.n - t + 1
    assert p.gauge == (t - 1) - t // 3 == p.formula_gauge
    assert p.logical == t // 3


def test_six_twists_split(six):
    code, lb = six
    p = count_parameters(code)
    assert (p.k, p.logical, p.gauge) == (5, 2, 3)
    assert len(lb.logicals) == 2 and len(lb.gauge) == 3


def test_tiny_code_matches_enumeration():
    # a bounded three-face patch small enough to enumerate 4^n words
    lat = build_hexagonal(1, 1)
    code = insert_charge_twists(lat, [])
    if code.n <= 8:
        words = [letters_of(s) for s in code.stabilizers]
        assert brute_logical_count(words, code.n) == count_parameters(code).k


def test_classification_partitions_faces():
    code = hex_code(2, 3)
    cls = classify_faces(code)
    allf = cls["T"] + cls["M"] + cls["U"]
    assert sorted(allf) == sorted(code.lattice.faces)
    assert len(set(allf)) == len(allf)
    assert set(cls["T"]) == {f for w in code.walls for f in w.ends}
    assert set(cls["M"]) == {f for w in code.walls for f in w.interior}


def test_twin_pair_single_wall_face():
    code = hex_code(1, 2)
    assert len(classify_faces(code)["M"]) == 1
    assert oracle_k(code) == 1
    assert all(bad == 0 for _, bad in commutation_cases(code).values())


@pytest.mark.parametrize("pairs,sep", [(1, 2), (2, 3), (3, 2), (4, 3)])
def test_commutation_cases_and_dependencies(pairs, sep):
    code = hex_code(pairs, sep)
    cases = commutation_cases(code)
    # twists sit at least two apart, so twist-twist pairs never arise
    six_kinds = {"tauxtau", "tauxfD", "tauxfDbar", "fDxfD", "fDxfDbar", "fDbarxfDbar"}
    assert set(cases) <= six_kinds and "tauxtau" not in cases
    for name, (checked, bad) in cases.items():
        assert bad == 0, name
    deps = dependency_products(code)
    assert len(deps) == 2
    assert all(p.is_identity() for p in deps.values())


def test_detoured_wall_keeps_separation():
    lat = build_hexagonal(4, 8)
    d = dual(lat)
    straight = linear_layout(lat, 1, 4)[0]
    a, b = straight[0], straight[-1]
    blocked = set(straight[1:-1]) | {lat.outer_face}
    detour = d.shortest_path(a, b, blocked=blocked)
    assert len(detour) > len(straight)
    code = insert_charge_twists(lat, [detour])
    assert d.distances(a)[b] == 4
    assert oracle_k(code) == 1
    assert all(bad == 0 for _, bad in commutation_cases(code).values())


def test_rejects_close_endpoints():
    lat = build_hexagonal(3, 8)
    first, second = linear_layout(lat, 2, 2, gap=1)
    with pytest.raises(TwistPlacementError) as err:
        insert_charge_twists(lat, [first, second])
    assert err.value.path_id in (0, 1)


def test_rejects_crossing_paths():
    lat = build_hexagonal(3, 8)
    path = linear_layout(lat, 1, 4)[0]
    with pytest.raises(TwistPlacementError) as err:
        insert_charge_twists(lat, [path[:3], path[1:]])
    assert err.value.path_id == 1


def test_rejects_bad_partition():
    lat = build_hexagonal(3, 8)
    path = linear_layout(lat, 1, 3)[0]
    wall = make_wall(lat, path)
    f = wall.interior[0]
    everything = frozenset(lat.faces[f].vertices)
    wall.partition[f] = (everything, frozenset())
    with pytest.raises(TwistPlacementError) as err:
        insert_charge_twists(lat, [wall])
    assert err.value.path_id == 0


# strings ----------------------------------------------------------------------

def test_closed_string_around_one_face_is_its_stabilizer():
    code = hex_code(1, 3)
    lat = code.lattice
    f = next(f for f in classify_faces(code)["U"] if f != lat.outer_face and len(lat.faces[f].vertices) == 6)
    c = next(c for c in "rgb" if c != lat.faces[f].color)
    zf, yf = (next(s for s in code.generators_of_face(f) if set(letters_of(s)) - {"I"} == {k}) for k in "ZY")
    for flavor, want in (("Z", zf), ("Y", yf), ("X", zf * yf)):
        p = string_to_pauli(code, ColorString(c, flavor, frozenset([f])))
        assert (p.x, p.z) == (want.x, want.z)


def _terminal_faces(code, p):
    return {l.face for s, l in zip(code.stabilizers, code.labels) if not commutes(s, p)}


def test_open_x_string_is_two_qubit_hop():
    code = hex_code(1, 3)
    lat = code.lattice
    e, a, b = next(l for l in shrunk(lat, "r").links
                   if lat.outer_face not in l[1:] and not set(l[1:]) & set(code.twists))
    p = open_string(code, "r", [e], "X")
    u, v, _ = lat.edges[e]
    assert letters_of(p).replace("I", "") == "XX"
    assert {q for q in range(code.n) if p.letter(q) != "I"} == {code.qubit[u], code.qubit[v]}
    assert _terminal_faces(code, p) == {a, b}


def test_z_string_flips_at_wall():
    code = hex_code(1, 3)
    lat = code.lattice
    sides = lat.faces_of_edge()
    hits = 0
    for c in "rgb":
        for e, a, b in shrunk(lat, c).links:
            if a == b or lat.outer_face in (a, b) or {a, b} & set(code.twists):
                continue
            u, v, _ = lat.edges[e]
            split = any(f in code.partitions and code.side_of(f, u) != code.side_of(f, v) for f in sides[e])
            p = open_string(code, c, [e], "Z")
            word = letters_of(p).replace("I", "")
            assert sorted(word) == (["Y", "Z"] if split else ["Z", "Z"])
            assert _terminal_faces(code, p) == {a, b}
            hits += split
    assert hits > 0


def test_open_string_along_path_only_ends_light_up():
    code = hex_code(1, 3)
    lat = code.lattice
    g = nx.Graph()
    for e, a, b in shrunk(lat, "g").links:
        if lat.outer_face not in (a, b) and not {a, b} & set(code.twists):
            g.add_edge(a, b, e=e)
    nodes = sorted(g.nodes)
    src, dst = nodes[0], nodes[-1]
    path = nx.shortest_path(g, src, dst)
    assert set(path) & set(code.partitions), "path should run through a wall face"
    edges = [g.edges[a, b]["e"] for a, b in zip(path, path[1:])]
    for flavor in "XZ":
        assert _terminal_faces(code, open_string(code, "g", edges, flavor)) == {src, dst}


def test_string_rejects_wrong_color():
    code = hex_code(1, 3)
    e = next(e for e, (_, _, c) in code.lattice.edges.items() if c == "b")
    with pytest.raises(StringError):
        open_string(code, "r", [e])


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_closed_strings_commute_with_stabilizers(data):
    code = _PROP_CODE
    lat = code.lattice
    adj = dual(lat).adjacency()
    forbidden = set(code.twists) | {lat.outer_face}
    for t in code.twists:
        forbidden.update(adj[t])
    start = data.draw(st.sampled_from(sorted(set(lat.faces) - forbidden)))
    region = {start}
    for _ in range(data.draw(st.integers(0, 3))):
        region |= {g for f in region for g in adj[f]}
    region -= forbidden
    c = data.draw(st.sampled_from("rgb"))
    flavor = data.draw(st.sampled_from("XZY"))
    try:
        p = string_to_pauli(code, ColorString(c, flavor, frozenset(region)))
    except StringError:
        return
    assert all(commutes(p, s) for s in code.stabilizers)
    if not region & set(code.partitions):
        letters = set(letters_of(p)) - {"I"}
        assert letters <= {flavor}


_PROP_CODE = hex_code(2, 3)


# canonical logicals -------------------------------------------------------------

def test_canonical_pairs(six):
    code, lb = six
    ops = lb.bare_logicals() + lb.gauge_ops()
    for i, a in enumerate(ops):
        assert all(commutes(a, s) for s in code.stabilizers)
        for j, b in enumerate(ops):
            assert (not commutes(a, b)) == (i // 2 == j // 2 and i != j)
    assert lb.triples == [(1, 2, 3), (6, 5, 4)]


TABLE_V = [("b", 1, 2, "Z1"), ("r", 1, 2, "Z1"), ("g", 1, 3, "X1"), ("r", 1, 3, "X1"), ("r", 2, 3, "Y1"),
           ("b", 5, 6, "Z2"), ("g", 4, 6, "X2"), ("r", 4, 5, "Y2")]


@pytest.mark.parametrize("color,i,j,target", TABLE_V, ids=lambda v: str(v))
def test_table_of_string_logicals(six, color, i, j, target):
    code, lb = six
    (x1, z1), (x2, z2) = lb.logicals
    named = {"X1": x1, "Z1": z1, "Y1": x1 * z1, "X2": x2, "Z2": z2, "Y2": x2 * z2}
    w = twist_string(code, color, i, j)
    assert equivalent_modulo(w, named[target], code.stabilizers + lb.gauge_ops())


def test_adding_gauge_string_changes_color(six):
    code, lb = six
    green = twist_string(code, "g", 1, 2)
    assert all(commutes(green, p) for p in lb.bare_logicals())
    assert equivalent_modulo(twist_string(code, "b", 1, 2) * green, twist_string(code, "r", 1, 2), code.stabilizers)


def test_xz_product_is_red_string_up_to_gauge(six):
    code, lb = six
    x1, z1 = lb.logicals[0]
    red = twist_string(code, "r", 2, 3)
    assert equivalent_modulo(x1 * z1, red, code.stabilizers + lb.gauge_ops())
    assert not equivalent_modulo(x1 * z1, red, code.stabilizers)


def test_middle_pair_strings_mix_both_qubits(six):
    # stated relation: W^g_{2,3} ~ X1 Z2 and W^b_{2,3} ~ Z1 X2 modulo stabilizer and gauge
    code, lb = six
    (x1, z1), (x2, z2) = lb.logicals
    group = code.stabilizers + lb.gauge_ops()
    assert equivalent_modulo(twist_string(code, "g", 2, 3), x1 * z2, group)
    assert equivalent_modulo(twist_string(code, "b", 2, 3), z1 * x2, group)


def test_middle_pair_strings_measured_action(six):
    # what the construction gives: both strings act on the first qubit only
    code, lb = six
    (x1, z1), (x2, z2) = lb.logicals
    group = code.stabilizers + lb.gauge_ops()
    assert equivalent_modulo(twist_string(code, "g", 2, 3), x1, group)
    assert equivalent_modulo(twist_string(code, "b", 2, 3), z1, group)
