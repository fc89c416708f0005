import pytest
from hypothesis import given, settings, strategies as st

from twistcc.colex import build_hexagonal, build_square_octagon, dual, shrunk
from twistcc.color_twists import (
    PathError, TwistPath, canonical_logicals, check_path, count_parameters, create_twist_pair,
    dependency_products, find_t_line, four_twist_logicals, insert_color_twists, linear_pairs, move_twist,
    plan_paths, surgery_step, twist_moves, validate_t_line,
)
from twistcc.pauli import commutes

from oracles import gf2_rank, letters_of, symplectic_rows, t_line_length

BUILDERS = {"hex": build_hexagonal, "488": build_square_octagon}


def make(fam, pairs, sep=2):
    for size in range(2, 12):
        for r, c in ((max(2, size // 2), size), (size, size)):
            lat = BUILDERS[fam](r, c)
            try:
                return lat, insert_color_twists(lat, plan_paths(lat, "r", linear_pairs(lat, pairs, sep)))
            except ValueError:
                continue
    raise AssertionError("no lattice fits")


def oracle_k(code):
    return code.n - gf2_rank(symplectic_rows(code.stabilizers))


def trivalent(lat):
    return all(d == 3 for d in lat.degree().values())


@pytest.mark.parametrize("fam", ["hex", "488"])
@pytest.mark.parametrize("pairs", [1, 2, 3])
def test_k_is_t_minus_two(fam, pairs):
    _, code = make(fam, pairs)
    t = 2 * pairs
    p = count_parameters(code)
    assert code.t == t
    assert p.k == oracle_k(code) == t - 2 == p.formula_k
    assert p.gauge == (t - 2) - t // 3 == p.formula_gauge


@pytest.mark.parametrize("fam", ["hex", "488"])
@pytest.mark.parametrize("pairs", [1, 2, 3])
def test_structure_after_construction(fam, pairs):
    _, code = make(fam, pairs)
    assert trivalent(code.lattice)
    odd = code.odd_faces()
    assert sorted(odd) == sorted(code.twists)
    assert len(odd) % 2 == 0
    for f in code.twists:
        assert code.lattice.faces[f].color == "r"
        assert [l.kind for l in code.labels if l.face == f] == ["Y"]
    deps = dependency_products(code)
    assert all(p.is_identity() for p in deps.values())


@pytest.mark.parametrize("fam", ["hex", "488"])
def test_two_qubits_removed_per_step(fam):
    _, code = make(fam, 2)
    steps = [r for r in code.history if r.kind in ("create", "move")]
    assert all(len(r.removed) == 2 for r in steps)
    # ledger: the whole step, including any digon cleanup, counts
    assert len(code.removed) == 2 * len(steps)


def test_creation_step_shapes():
    lat = build_square_octagon(3, 4)
    path = plan_paths(lat, "r", linear_pairs(lat, 1, 2))[0]
    assert len(path.edges) == 2
    e = path.edges[0]
    u, v, _ = lat.edges[e]
    fv, fe = lat.faces_of_vertex(), lat.faces_of_edge()
    sides = fe[e]
    ends = [next(f for f in fv[x] if f not in sides) for x in (u, v)]
    assert sorted(ends) == sorted(path.waypoints[:2])
    lat2, rec, mid = surgery_step(lat, e, "r")
    assert set(rec.removed) == {u, v}
    assert len(lat2.vertices) == len(lat.vertices) - 2
    for f in ends:
        assert len(lat2.faces[f]) == len(lat.faces[f]) - 1
        assert len(lat2.faces[f]) % 2 == 1
    a, b = sides
    assert len(lat2.faces[mid]) == len(lat.faces[a]) + len(lat.faces[b]) - 4
    assert lat2.faces[mid].color in {lat.faces[a].color, lat.faces[b].color}
    untouched = set(lat.faces) - set(ends) - set(sides)
    assert all(lat2.faces[f] == lat.faces[f] for f in untouched if f in lat2.faces)
    assert trivalent(lat2)


def test_move_lands_on_next_red_face():
    lat = build_square_octagon(3, 4)
    path = plan_paths(lat, "r", linear_pairs(lat, 1, 2))[0]
    code = create_twist_pair(lat, path)
    assert code.twists == [path.waypoints[0], path.waypoints[-1]]
    assert code.lattice.faces[code.twists[1]].color == "r"
    assert oracle_k(code) == 0


@pytest.mark.parametrize("fam", ["hex", "488"])
def test_move_and_move_on_keeps_parameters(fam):
    lat = BUILDERS[fam](4, 6)
    code = insert_color_twists(lat, plan_paths(lat, "r", linear_pairs(lat, 2, 2)))
    k0 = oracle_k(code)
    tw = code.twists[0]
    e, target = twist_moves(code, tw)[0]
    moved = move_twist(code, tw, e)
    assert moved.twists[0] == target
    assert oracle_k(moved) == k0
    assert sorted(moved.odd_faces()) == sorted(moved.twists)
    e2, target2 = twist_moves(moved, target)[0]
    again = move_twist(moved, target, e2)
    assert again.twists[0] == target2
    assert oracle_k(again) == k0
    assert again.n < moved.n < code.n


def test_move_rejects_wrong_edge():
    lat = build_hexagonal(4, 6)
    code = insert_color_twists(lat, plan_paths(lat, "r", linear_pairs(lat, 1, 2)))
    far = next(e for e, (_, _, c) in code.lattice.edges.items()
               if c == "r" and e not in {m for m, _ in twist_moves(code, code.twists[0])})
    with pytest.raises(PathError):
        move_twist(code, code.twists[0], far)
    with pytest.raises(PathError):
        move_twist(code, -1, far)


@settings(max_examples=15, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 9)), min_size=1, max_size=4))
def test_random_moves_keep_invariants(moves):
    code = _MOVE_BASE
    for which, pick in moves:
        tw = code.twists[which]
        options = twist_moves(code, tw)
        if not options:
            continue
        e, target = options[pick % len(options)]
        try:
            code = move_twist(code, tw, e, enforce_c2=False)
        except PathError:
            continue
        assert trivalent(code.lattice)
        assert len(code.odd_faces()) % 2 == 0
        assert sorted(code.odd_faces()) == sorted(code.twists)
        assert oracle_k(code) == code.t - 2


_MOVE_BASE = make("hex", 2)[1]


# planning ----------------------------------------------------------------------

def test_plans_length_two_red_path_on_488():
    lat = build_square_octagon(3, 4)
    (path,) = plan_paths(lat, "r", linear_pairs(lat, 1, 2))
    assert len(path.edges) == 2 and len(path.waypoints) == 3
    assert check_path(lat, path) == []
    assert all(lat.edges[e][2] == "r" for e in path.edges)


def test_rejects_same_endpoint():
    lat = build_hexagonal(3, 4)
    f = next(f for f, face in lat.faces.items() if face.color == "r" and f != lat.outer_face)
    with pytest.raises(PathError):
        plan_paths(lat, "r", [(f, f)])


def test_rejects_wrong_color_end():
    lat = build_hexagonal(3, 4)
    a, b = linear_pairs(lat, 1, 2)[0]
    g = next(f for f, face in lat.faces.items() if face.color == "g")
    with pytest.raises(PathError):
        plan_paths(lat, "r", [(a, g)])


def _c2_triangle(lat):
    nb = {}
    for e, a, b in shrunk(lat, "r").links:
        if a is None or b is None or lat.outer_face in (a, b):
            continue
        nb.setdefault(a, {})[b] = e
        nb.setdefault(b, {})[a] = e
    for a in sorted(nb):
        for b in sorted(nb[a]):
            for c in sorted(nb[b]):
                if c != a and c in nb[a]:
                    return TwistPath("r", (a, b, c), (nb[a][b], nb[b][c]))
    raise AssertionError("no red triangle")


def test_c2_violation_detected():
    lat = build_hexagonal(4, 6)
    path = _c2_triangle(lat)
    d = dual(lat)
    a, b, c = path.waypoints
    assert d.distances(a)[b] == d.distances(b)[c] == d.distances(a)[c] == 2
    problems = check_path(lat, path)
    assert problems and problems[0].startswith("C2")
    with pytest.raises(PathError) as err:
        create_twist_pair(lat, path)
    assert err.value.condition == "C2"


# T-lines ------------------------------------------------------------------------

@pytest.mark.parametrize("fam", ["hex", "488"])
@pytest.mark.parametrize("pairs", [1, 2, 3])
def test_t_line_for_every_pair(fam, pairs):
    _, code = make(fam, pairs)
    for i in range(0, code.t, 2):
        pair = (code.twists[i], code.twists[i + 1])
        line = find_t_line(code, pair)
        assert validate_t_line(code, pair, line)
        assert len(line) == t_line_length(code.lattice, *pair, code.twists)


@pytest.mark.parametrize("fam,size,want", [("488", (2, 3), 3), ("hex", (3, 4), 4)])
def test_adjacent_pair_t_line(fam, size, want):
    # expected lengths frozen from the networkx oracle
    lat = BUILDERS[fam](*size)
    code = insert_color_twists(lat, plan_paths(lat, "r", linear_pairs(lat, 1, 1), min_separation=1))
    pair = tuple(code.twists)
    line = find_t_line(code, pair)
    assert validate_t_line(code, pair, line)
    assert len(line) == t_line_length(code.lattice, *pair, code.twists) == want


def test_no_t_line_without_twists():
    lat = build_hexagonal(2, 2)
    code = insert_color_twists(lat, [])
    with pytest.raises(ValueError):
        find_t_line(code, (0, 1))


# logical operators ---------------------------------------------------------------

def test_four_twist_qubit():
    _, code = make("hex", 2)
    x, z = four_twist_logicals(code)
    assert not commutes(x, z)
    for s in code.stabilizers:
        assert commutes(x, s) and commutes(z, s)
    assert set(letters_of(x)) <= {"I", "X"} and set(letters_of(z)) <= {"I", "Z"}


@pytest.mark.parametrize("fam", ["hex", "488"])
def test_six_twist_canonical_logicals(fam):
    _, code = make(fam, 3)
    lg = canonical_logicals(code)
    assert len(lg.logicals) == 2 and len(lg.gauge) == 2
    ops = [p for pair in lg.logicals + lg.gauge for p in pair]
    for i, a in enumerate(ops):
        assert all(commutes(a, s) for s in code.stabilizers)
        for j, b in enumerate(ops):
            assert (not commutes(a, b)) == (i // 2 == j // 2 and i != j)
    (x1, z1), (x2, z2) = lg.logicals
    # first qubit: Z letters on Z1; second qubit swaps the flavors
    assert set(letters_of(z1)) <= {"I", "Z"}
    assert set(letters_of(x1)) <= {"I", "X"}
    assert set(letters_of(z2)) <= {"I", "X"}
    assert set(letters_of(x2)) <= {"I", "Z"}
