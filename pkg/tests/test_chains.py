import itertools

import pytest
from hypothesis import given, strategies as st

import oracles
from spindlehom import chains as ch
from spindlehom.modules import commuting_module_T2, extend_by_identity, trivial_module
from spindlehom.rings import GF, QQ, ZZ
from spindlehom.structures import all_homomorphisms, fixture, fixtures

NAMES = list(fixtures())


def module_for(X, kind):
    if kind == "commuting":
        M = commuting_module_T2(ZZ)
        return M if X == M.structure else extend_by_identity(M, X)
    return trivial_module(X, 1, ZZ)


MODULE_CASES = [(n, "trivial") for n in NAMES] + [("T2", "commuting"), ("T2+triv", "commuting")]


@pytest.mark.parametrize("name,kind", MODULE_CASES)
def test_faces_match_definition(name, kind):
    X = fixture(name)
    M = module_for(X, kind)
    for k in range(X.nops):
        for d in range(1, 4):
            for i in range(d + 1):
                w = [0] * X.nops
                D = [[0] * (M.rank * X.size ** (d + 1)) for _ in range(M.rank * X.size ** d)]
                for s, seq in enumerate(oracles.sequences(X.size, d)):
                    new, xi = oracles.face(X.ops, k, seq, i)
                    A = M.action[k][xi]
                    for t in range(M.rank):
                        for u in range(M.rank):
                            D[oracles.index(new, X.size) * M.rank + u][s * M.rank + t] += A[u][t]
                assert ch.face_matrix(X, M, k, i, d).to_dense() == D


weights = st.lists(st.integers(-3, 3), min_size=2, max_size=2)


@given(st.sampled_from(MODULE_CASES), weights, st.integers(1, 3))
def test_differential_matches_definition(case, w, d):
    name, kind = case
    X = fixture(name)
    M = module_for(X, kind)
    w = tuple(w[:X.nops])
    expect = oracles.differential(X.ops, X.size, w, M.action, M.rank, d)
    assert ch.differential_matrix(X, M, w, d).to_dense() == expect


@given(st.sampled_from(MODULE_CASES), weights, st.integers(2, 4))
def test_square_zero(case, w, d):
    name, kind = case
    X = fixture(name)
    M = module_for(X, kind)
    w = tuple(w[:X.nops])
    assert (ch.differential_matrix(X, M, w, d - 1) @ ch.differential_matrix(X, M, w, d)).is_zero()


@given(st.sampled_from(MODULE_CASES), weights)
def test_augmentation(case, w):
    name, kind = case
    X = fixture(name)
    M = module_for(X, kind)
    w = tuple(w[:X.nops])
    A = ch.augmentation_matrix(X, M, w)
    assert A.to_dense() == oracles.augmentation(X.size, w, M.action, M.rank)
    assert (A @ ch.differential_matrix(X, M, w, 1)).is_zero()


def test_sequence_encoding():
    for n, d in [(2, 3), (3, 2)]:
        for idx, seq in enumerate(oracles.sequences(n, d)):
            assert ch.seq_of(idx, n, d) == seq
            assert ch.seq_index(seq, n) == idx
            assert ch.filtration_level(seq) == oracles.level(seq)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_part_sizes(n):
    for d in range(0, 4):
        seqs = oracles.sequences(n, d)
        norm = [s for s in seqs if oracles.level(s) is None]
        late = [s for s in seqs if oracles.level(s) is not None and oracles.level(s) <= d - 2]
        assert len(ch.part_sequences(n, d, "normalized")) == len(norm) == ch.cn_rank(n, d)
        assert len(ch.part_sequences(n, d, "degenerate")) == len(seqs) - len(norm)
        assert len(ch.part_sequences(n, d, "late")) == len(late)


@pytest.mark.parametrize("name", NAMES)
def test_degenerate_and_filtration_parts_are_subcomplexes(name):
    X = fixture(name)
    M = trivial_module(X, 1, ZZ)
    for k in range(X.nops):
        w = tuple(int(j == k) for j in range(X.nops))
        ch.build_complex(X, M, w, "degenerate", 4)
        for p in range(0, 4):
            ch.build_complex(X, M, w, ("filtration", p), 4)


@pytest.mark.parametrize("name", [n for n in NAMES if n.endswith("+triv")])
def test_late_part_for_zero_weight_sum(name):
    X = fixture(name)
    C = ch.build_complex(X, trivial_module(X, 1, ZZ), (-1, 1), "late", 4)
    assert C.meta["weight_sum_zero"] and C.meta["vanishing_compound_action"]
    assert C.check_square_zero()[0]


def test_late_part_refused_with_witness():
    X = fixture("T2+triv")
    M = module_for(X, "commuting")
    with pytest.raises(ch.PartError) as e:
        ch.build_complex(X, M, (-1, 1), "late", 3)
    wit = e.value.witness
    seq, hits = wit["sequence"], wit["hits"]
    d = wit["degree"]
    assert oracles.level(seq) <= d - 2           # a late generator ...
    assert oracles.level(hits) is None or oracles.level(hits) > d - 3   # ... hitting outside CL
    with pytest.raises(ch.PartError):
        ch.build_complex(fixture("R3"), trivial_module(fixture("R3"), 1, ZZ), (1,), "late", 3)


def test_memory_budget_refusal():
    X = fixture("R3")
    with pytest.raises(ch.MemoryBudgetExceeded) as e:
        ch.build_complex(X, trivial_module(X, 1, ZZ), (1,), "full", 10, memory_budget=10**6)
    assert e.value.required > 10**6


def hw_oracle(n, m, d, wit):
    """m ⊗ (x_d..x_0) -> (-1)^d m ⊗ (x_d..x_0, wit)."""
    cols = m * (n ** (d + 1) if d >= 0 else 1)
    H = [[0] * cols for _ in range(m * n ** (d + 2))]
    seqs = oracles.sequences(n, d) if d >= 0 else [()]
    for s, seq in enumerate(seqs):
        r = oracles.index(seq + (wit,), n)
        for t in range(m):
            H[r * m + t][s * m + t] = (-1) ** d
    return H


@pytest.mark.parametrize("name,kind", MODULE_CASES)
def test_homotopy_identity(name, kind):
    X = fixture(name)
    M = module_for(X, kind)
    n, m = X.size, M.rank
    ws = [tuple(int(j == k) for j in range(X.nops)) for k in range(X.nops)]
    if X.nops == 2:
        ws += [(-1, 1), (2, -3)]
    for w in ws:
        D = {d: oracles.differential(X.ops, n, w, M.action, m, d) for d in range(1, 5)}
        D[0] = oracles.augmentation(n, w, M.action, m)
        for y in range(n):
            for d in range(-1, 3):
                lhs = oracles.matmul(D[d + 1], hw_oracle(n, m, d, y))
                if d >= 0:
                    rhs = oracles.matmul(hw_oracle(n, m, d - 1, y), D[d])
                    lhs = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(lhs, rhs)]
                # minus the entrywise action Σ w_k (m ⊳_k y) ⊗ (x ⊳_k y)
                expect = [[0] * len(lhs[0]) for _ in lhs]
                seqs = oracles.sequences(n, d) if d >= 0 else [()]
                for s, seq in enumerate(seqs):
                    for k, a in enumerate(w):
                        r = oracles.index(tuple(X.ops[k][x][y] for x in seq), n)
                        A = M.action[k][y]
                        for t in range(m):
                            for u in range(m):
                                expect[r * m + u][s * m + t] -= a * A[u][t]
                assert lhs == expect
                assert ch.homotopy_hw(X, M, w, d, y).to_dense() == hw_oracle(n, m, d, y)


def test_homotopy_identity_via_package():
    from spindlehom.verify import homotopy_identity
    X = fixture("R3+triv")
    assert all(homotopy_identity(X, trivial_module(X, 2, GF(3)), (2, -3), y, 4) for y in range(3))


@pytest.mark.parametrize("src,dst", [("T3", "T2"), ("R3", "R3"), ("R3", "T1"), ("T2+triv", "R3+triv"),
                                     ("R3+triv", "T3+triv")])
def test_induced_maps_are_chain_maps(src, dst):
    X, Y = fixture(src), fixture(dst)
    w = (1,) if X.nops == 1 else (-1, 1)
    M = trivial_module(Y, 1, ZZ)
    for h in all_homomorphisms(X, Y):
        for part in ("full", "degenerate", "normalized"):
            C = ch.pullback_complex(h, M, w, part, 3)
            D = ch.build_complex(Y, M, w, part, 3)
            f = ch.induced_chain_map(h, M, part, w, 3)
            assert ch.is_chain_map(f, C, D)[0]


@pytest.mark.parametrize("name", ["T2", "R3", "RP2", "R3+triv"])
def test_graded_quotient_intertwines(name):
    X = fixture(name)
    M = trivial_module(X, 1, ZZ)
    w = tuple(int(j == 0) for j in range(X.nops))
    for n_deg in range(1, 5):
        for p in range(0, n_deg):
            assert ch.check_graded_intertwining(X, M, w, p, n_deg)


def test_graded_quotient_is_a_bijection():
    X = fixture("R3")
    M = trivial_module(X, 2, QQ)
    for n_deg in range(1, 5):
        total = sum(len(ch.graded_quotient_iso(X, M, p, n_deg)) for p in range(n_deg))
        assert total == len(ch.part_indices(3, n_deg, 2, "degenerate"))
        for p in range(n_deg):
            left = 3 ** (n_deg - p - 1) if n_deg - p - 2 >= 0 else 1
            assert len(ch.graded_quotient_iso(X, M, p, n_deg)) == 2 * left * ch.cn_rank(3, p)


@pytest.mark.parametrize("name", ["T2+triv", "R3+triv"])
def test_total_complex_square_zero(name):
    X = fixture(name)
    B = ch.bicomplex(X, trivial_module(X, 1, ZZ), (-1, 1), 4)
    T = ch.total_complex(B)
    assert T.check_square_zero()[0]
    for n_deg in range(0, 5):
        assert T.dim(n_deg) == len(ch.part_indices(X.size, n_deg, 1, "degenerate"))
