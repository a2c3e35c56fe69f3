import pytest
from hypothesis import given, strategies as st

import oracles
from spindlehom.chains import build_complex
from spindlehom.homology import (AbelianGroup, FieldHomologyBasis, direct_sum, homology,
                                 homology_action, homology_of, induced_on_homology, over_field,
                                 tensor, tor)
from spindlehom.chains import induced_chain_map
from spindlehom.modules import commuting_module_T2, trivial_module, validate_action
from spindlehom.rings import GF, QQ, ZZ
from spindlehom.structures import all_homomorphisms, fixture

G = AbelianGroup


def test_group_arithmetic():
    assert str(G(2, (2, 4))) == "Z^2+Z2+Z4"
    assert G(0, (2, 3)) == G(0, (6,))
    assert tensor(G(1, (2,)), G(0, (4,))) == G(0, (4, 2))
    assert tor(G(1, (6,)), G(0, (4,))) == G(0, (2,))
    assert direct_sum(G(1), G(0, (3,))) == G(1, (3,))
    assert over_field(G(1, (2, 3)), 2) == G(2)
    assert over_field(G(1, (2, 3)), 0) == G(1)
    assert G(1, (2,)) * 3 == G(3, (2, 2, 2))


def test_spec_tables():
    # rack weights on T1: every differential vanishes
    H = homology_of(fixture("T1+triv"), trivial_module(fixture("T1+triv"), 1, ZZ), (-1, 1), N=3)
    assert [str(H[d]) for d in range(4)] == ["Z", "Z", "Z", "Z"]
    # one-term on T1: ∂ alternates between 0 and the identity
    H = homology_of(fixture("T1"), trivial_module(fixture("T1"), 1, ZZ), (1,), N=3)
    assert [str(H[d]) for d in range(4)] == ["Z", "0", "0", "0"]


def oracle_homology(X, M, w, N):
    ops, n, m = X.ops, X.size, M.rank
    diffs = {d: oracles.differential(ops, n, w, M.action, m, d) for d in range(1, N + 2)}
    dims = {d: m * n ** (d + 1) for d in range(0, N + 2)}
    return oracles.homology_groups(dims, diffs, range(0, N + 1))


CASES = [("T2", (1,)), ("R3", (1,)), ("RP2", (1,)), ("T2+triv", (-1, 1)), ("R3+triv", (-1, 1)),
         ("R3+triv", (2, -3)), ("RP2+triv", (-1, 1))]


@pytest.mark.parametrize("name,w", CASES)
def test_integral_homology_matches_oracle(name, w):
    X = fixture(name)
    M = trivial_module(X, 1, ZZ)
    N = 3 if X.size < 3 else 2
    H = homology_of(X, M, w, N=N)
    expect = oracle_homology(X, M, w, N)
    for d in range(N + 1):
        assert (H[d].free_rank, sorted(H[d].torsion)) == expect[d]


def test_dihedral_rack_homology_has_torsion_consistent_with_oracle():
    X = fixture("R3+triv")
    H = homology_of(X, trivial_module(X, 1, ZZ), (-1, 1), N=3)
    assert any(H[d].torsion for d in range(4))


@pytest.mark.parametrize("p", [2, 3])
def test_field_homology_matches_oracle(p):
    X = fixture("R3+triv")
    M = trivial_module(X, 1, GF(p))
    H = homology_of(X, M, (-1, 1), N=3)
    diffs = {d: oracles.differential(X.ops, 3, (-1, 1), M.action, 1, d) for d in range(1, 5)}
    dims = {d: 3 ** (d + 1) for d in range(5)}
    expect = oracles.homology_dims(dims, diffs, range(4), p)
    assert [H[d].free_rank for d in range(4)] == [expect[d] for d in range(4)]


def test_commuting_module_homology_matches_oracle():
    M = commuting_module_T2(ZZ)
    X = M.structure
    H = homology_of(X, M, (1,), N=3)
    expect = oracle_homology(X, M, (1,), 3)
    for d in range(4):
        assert (H[d].free_rank, sorted(H[d].torsion)) == expect[d]


def test_field_basis_reps_are_independent_cycles():
    X = fixture("R3+triv")
    C = build_complex(X, trivial_module(X, 1, QQ), (-1, 1), "full", 3)
    for d in range(0, 3):
        HB = FieldHomologyBasis(C, d)
        assert HB.dim == homology(C)[d].free_rank
        for k, r in enumerate(HB.reps):
            if d > 0:
                assert not C.boundary(d).apply(r)
            coords = HB.coords(r)
            assert coords == [int(j == k) for j in range(HB.dim)]


def test_homology_action_is_a_module_with_vanishing_compound_action():
    X = fixture("R3+triv")
    for d in (-1, 0, 1):
        H = homology_action(X, trivial_module(X, 1, QQ), (-1, 1), d)
        assert validate_action(H)[0]
        from spindlehom.modules import has_vanishing_compound_action
        assert has_vanishing_compound_action(H, (-1, 1))


@pytest.mark.parametrize("ring", [ZZ, QQ])
def test_identity_induces_isomorphisms(ring):
    X = fixture("R3")
    h = all_homomorphisms(X, X)[0]
    M = trivial_module(X, 1, ring)
    C = build_complex(X, M, (1,), "degenerate", 4)
    f = induced_chain_map(h, M, "degenerate", (1,), 4)
    res = induced_on_homology(f, C, C)
    assert all(iso for _, iso in res.values())


def test_collapse_map_on_homology():
    # T3 -> T1 with rack weights: ∂ = 0 on both sides, so H_0 = Z^3 -> Z sums coordinates
    X, Y = fixture("T3+triv"), fixture("T1+triv")
    h = all_homomorphisms(X, Y)[0]
    M = trivial_module(Y, 1, ZZ)
    from spindlehom.chains import pullback_complex
    C = pullback_complex(h, M, (-1, 1), "full", 2)
    D = build_complex(Y, M, (-1, 1), "full", 2)
    f = induced_chain_map(h, M, "full", (-1, 1), 2)
    res = induced_on_homology(f, C, D)
    mat, iso = res[0]
    assert mat == [[1, 1, 1]] and not iso
    # the one-point identity is an isomorphism in every degree
    g = induced_chain_map(all_homomorphisms(Y, Y)[0], M, "full", (-1, 1), 2)
    assert all(ok for _, ok in induced_on_homology(g, D, D).values())
