import itertools
import json

import pytest
from hypothesis import given, strategies as st

from spindlehom.structures import (AxiomError, Multishelf, ShelfHom, StructureParseError,
                                   adjoin_trivial_op, all_homomorphisms, dump_structure, fixture,
                                   fixtures, find_axiom_violation, load_structure, multishelf,
                                   standard_family, strongest_level, validate_homomorphism)


def is_shelf(t):
    n = len(t)
    return all(t[t[x][y]][z] == t[t[x][z]][t[y][z]] for x, y, z in itertools.product(range(n), repeat=3))


def test_fixture_names():
    assert list(fixtures()) == ["T1", "T2", "T3", "R3", "RP2",
                                "T1+triv", "T2+triv", "T3+triv", "R3+triv", "RP2+triv"]


@pytest.mark.parametrize("name", list(fixtures()))
def test_fixtures_are_multispindles(name):
    X = fixture(name)
    assert X.is_spindle
    for t in X.ops:
        assert is_shelf(t)


def test_dihedral_table():
    R3 = standard_family("dihedral", 3)
    assert R3.ops[0] == ((0, 2, 1), (2, 1, 0), (1, 0, 2))
    assert R3.levels == ("quandle",)


def test_levels_detected():
    assert strongest_level(standard_family("dihedral", 3).ops[0]) == "quandle"
    assert strongest_level(standard_family("right_projection", 2).ops[0]) == "spindle"
    # a shelf that is neither idempotent nor bijective: x ⊳ y = 0
    assert strongest_level([[0, 0], [0, 0]]) == "shelf"
    # a rack that is not a quandle: x ⊳ y = x + 1 mod 2
    assert strongest_level([[1, 1], [0, 0]]) == "rack"
    assert strongest_level([[0, 1], [0, 0]]) is None


def test_right_projection_claimed_quandle_fails_with_witness():
    with pytest.raises(AxiomError) as e:
        Multishelf(2, [[[0, 1], [0, 1]]], ["quandle"])
    assert e.value.axiom == "bijectivity"
    x1, x2, y = e.value.witness
    assert x1 != x2 and y == 0


def test_non_shelf_witness():
    err = find_axiom_violation([[[0, 1], [0, 0]]], ["shelf"])
    assert err.axiom == "self-distributivity"
    x, y, z = err.witness
    t = [[0, 1], [0, 0]]
    assert t[t[x][y]][z] != t[t[x][z]][t[y][z]]


def test_parse_errors():
    with pytest.raises(StructureParseError):
        load_structure('{"size": 2, "ops": [[[0, 5], [1, 1]]], "level": "shelf"}')
    with pytest.raises(StructureParseError):
        load_structure("{not json")
    with pytest.raises(StructureParseError):
        load_structure('{"size": 2, "ops": [[[0, 1]]], "level": "shelf"}')


def test_round_trip():
    X = fixture("R3+triv")
    assert load_structure(dump_structure(X)) == X
    assert json.loads(dump_structure(X))["level"] == ["quandle", "quandle"]


def test_adjoined_op_is_trivial():
    Y = adjoin_trivial_op(fixture("R3"))
    assert Y.ops[1] == tuple(tuple([x] * 3) for x in range(3))


tables2 = st.lists(st.lists(st.integers(0, 1), min_size=2, max_size=2), min_size=2, max_size=2)
tables3 = st.lists(st.lists(st.integers(0, 2), min_size=3, max_size=3), min_size=3, max_size=3)


@given(st.one_of(tables2, tables3))
def test_shelf_check_matches_brute_force(t):
    ok = find_axiom_violation([t], ["shelf"]) is None
    assert ok == is_shelf(t)


def brute_homs(X, Y):
    out = []
    for f in itertools.product(range(Y.size), repeat=X.size):
        if all(f[X.ops[k][x][y]] == Y.ops[k][f[x]][f[y]]
               for k in range(X.nops) for x in range(X.size) for y in range(X.size)):
            out.append(f)
    return out


@pytest.mark.parametrize("a,b", [("R3", "R3"), ("R3", "T2"), ("T2", "R3"), ("T3", "T3"),
                                 ("RP2", "T2"), ("R3+triv", "T3+triv")])
def test_all_homomorphisms(a, b):
    X, Y = fixture(a), fixture(b)
    assert [h.map for h in all_homomorphisms(X, Y)] == brute_homs(X, Y)


def test_dihedral_automorphisms():
    # affine maps x -> ax + b with a a unit mod 3
    R3 = fixture("R3")
    bij = [h.map for h in all_homomorphisms(R3, R3) if h.is_bijective]
    assert sorted(bij) == sorted(tuple((a * x + b) % 3 for x in range(3))
                                 for a in (1, 2) for b in range(3))


def test_homomorphism_validation_witness():
    h = ShelfHom(fixture("R3"), fixture("R3"), (0, 0, 1))
    ok, wit = validate_homomorphism(h)
    assert not ok
    k, x, y = wit
    t = fixture("R3").ops[0]
    assert h.map[t[x][y]] != t[h.map[x]][h.map[y]]


def test_multishelf_helper_infers_levels():
    X = multishelf([[[0, 0], [1, 1]]])
    assert X.levels == ("quandle",)
