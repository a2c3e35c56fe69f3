"""Theorem-verification suites over the built-in fixtures.

Every check yields :class:`Entry` records with status ``pass``, ``fail`` or
``vacuous`` (an implication whose hypothesis does not hold).  Results are
produced in a fixed order so reports are reproducible byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from . import chains as ch
from .homology import (AbelianGroup, FieldHomologyBasis, direct_sum, homology, homology_action,
                       homology_of, induced_matrix_field, induced_on_homology)
from .isomaps import (count_multiplicity, kunneth_check, one_term_iso, one_term_naturality,
                      pull_through_line_check, recursive_count, two_term_iso,
                      verify_one_term_theorem)
from .modules import (ActionModule, commuting_module_T2, extend_by_identity,
                      has_vanishing_compound_action, pullback_module, rack_weights, trivial_module)
from .rings import GF, QQ, ZZ
from .spectral import (SpectralSequence, check_page_invariants, check_region_invariants,
                       degenerate_filtration, e2_formula_check, filtered_map_from_hom,
                       lemma_harness, random_lemma_suite)
from .structures import Multishelf, adjoin_trivial_op, all_homomorphisms, fixtures


@dataclass
class Entry:
    check: str
    case: str
    status: str
    detail: dict = field(default_factory=dict)

    @property
    def ok(self):
        return self.status != "fail"


def _status(ok):
    return "pass" if ok else "fail"


def _implication(hyp, concl):
    if not hyp:
        return "vacuous"
    return _status(concl)


# --------------------------------------------------------------------------
# inputs

def _fixture_list(names=None):
    fx = fixtures()
    if names is None:
        return list(fx.values())
    unknown = [n for n in names if n not in fx]
    if unknown:
        raise KeyError(f"unknown fixture(s): {', '.join(unknown)}")
    return [fx[n] for n in names]


def _has_trivial_top(X: Multishelf):
    return X.nops == 2 and all(X.ops[1][x][y] == x for x in range(X.size) for y in range(X.size))


def _rack_targets(structs):
    """Structures carrying rack weights: the given ones, single-op ones with ▷ adjoined."""
    out, seen = [], set()
    for X in structs:
        if not _has_trivial_top(X):
            if X.nops != 1:
                continue
            X = adjoin_trivial_op(X)
        if X.name not in seen:
            seen.add(X.name)
            out.append(X)
    return out


def _commuting(X: Multishelf, ring=ZZ):
    """The commuting-matrix module on T2, extended to T2+triv; None elsewhere."""
    M = commuting_module_T2(ring)
    if X == M.structure:
        return M
    if X.nops == 2 and X.ops[:1] == M.structure.ops:
        return extend_by_identity(M, X)
    return None


def coefficient_modules(X: Multishelf, rings=(ZZ, QQ, GF(2), GF(3)), ranks=(1, 2)):
    out = [trivial_module(X, m, R) for R in rings for m in ranks]
    C = _commuting(X)
    if C is not None:
        out.append(C)
    return out


def weight_choices(X: Multishelf, generic=False):
    """Each single operation, the rack weights when defined, optionally (2, -3)."""
    out = []
    for k in range(X.nops):
        w = [0] * X.nops
        w[k] = 1
        out.append(tuple(w))
    if _has_trivial_top(X):
        out.append(rack_weights(X))
    if generic and X.nops == 2:
        out.append((2, -3))
    return out


def _mname(M: ActionModule):
    if M.is_trivial:
        return f"{M.ring}^{M.rank}"
    return f"{M.ring}^{M.rank}(commuting)"


def _wname(w):
    return "(" + ",".join(str(a) for a in w) + ")"


def _case(*parts):
    return " ".join(str(p) for p in parts if p != "")


@lru_cache(maxsize=None)
def _hom(X, M, w, part, N, augmented=False):
    return homology_of(X, M, w, part, N, augmented)


# --------------------------------------------------------------------------
# criterion 1: axioms

def check_axioms(structs, N=5):
    for X in structs:
        mods = [trivial_module(X, 1, ZZ)]
        C = _commuting(X)
        if C is not None:
            mods.append(C)
        for M in mods:
            presimp = all(
                ch.face_matrix(X, M, k, i, d - 1) @ ch.face_matrix(X, M, k, j, d)
                == ch.face_matrix(X, M, k, j - 1, d - 1) @ ch.face_matrix(X, M, k, i, d)
                for k in range(X.nops) for d in range(2, N + 1)
                for j in range(d + 1) for i in range(j))
            yield Entry("axioms", _case(X.name, _mname(M), "presimplicial"), _status(presimp),
                        {"degrees": N})
            for w in weight_choices(X, generic=True):
                sq = all((ch.differential_matrix(X, M, w, d - 1) @ ch.differential_matrix(X, M, w, d)).is_zero()
                         for d in range(2, N + 1))
                yield Entry("axioms", _case(X.name, _mname(M), "square-zero", _wname(w)), _status(sq),
                            {"degrees": N})
            for i in range(X.nops):
                for j in range(i + 1, X.nops):
                    ei = tuple(int(k == i) for k in range(X.nops))
                    ej = tuple(int(k == j) for k in range(X.nops))
                    ok = True
                    for d in range(2, N + 1):
                        a = ch.differential_matrix(X, M, ei, d - 1) @ ch.differential_matrix(X, M, ej, d)
                        b = ch.differential_matrix(X, M, ej, d - 1) @ ch.differential_matrix(X, M, ei, d)
                        if not (a + b).is_zero():
                            ok = False
                            break
                    yield Entry("axioms", _case(X.name, _mname(M), f"anticommute {i},{j}"), _status(ok),
                                {"degrees": N})


# --------------------------------------------------------------------------
# criterion 2: H = HN ⊕ HD

def check_splitting(structs, N=4):
    for X in structs:
        for M in coefficient_modules(X):
            for w in weight_choices(X):
                H = _hom(X, M, w, "full", N)
                HN = _hom(X, M, w, "normalized", N)
                HD = _hom(X, M, w, "degenerate", N)
                bad = [n for n in range(N + 1) if H[n] != direct_sum(HN[n], HD[n])]
                yield Entry("splitting", _case(X.name, _mname(M), _wname(w)), _status(not bad),
                            {"degrees": N, "mismatch": bad})


# --------------------------------------------------------------------------
# criterion 3: late splitting and the doubling isomorphism

def doubling_quotient_check(X, M, w, N):
    """s: CN_d -> CD_{d+1}/CL_{d+1} is a bijection of bases and a chain map, d <= N."""
    n, m = X.size, M.rank
    norm = {d: ch.part_indices(n, d, m, "normalized") for d in range(0, N + 1)}

    def quotient(d):
        late = set(ch.part_indices(n, d, m, "late"))
        return [g for g in ch.part_indices(n, d, m, "degenerate") if g not in late]

    quo = {d: quotient(d) for d in range(1, N + 2)}
    S = {}
    for d in range(0, N + 1):
        s = ch.doubling_map(X, M, w, d).submatrix(quo[d + 1], norm[d])
        if s.nrows != s.ncols:
            return False
        # a signed permutation: one ±1 per column, rows hit once
        seen = set()
        for c in s.cols:
            if len(c) != 1:
                return False
            (i, v), = c.items()
            if i in seen or v not in (1, -1, M.ring.coerce(-1)):
                return False
            seen.add(i)
        S[d] = s
    for d in range(1, N + 1):
        full_q = ch.differential_matrix(X, M, w, d + 1).submatrix(quo[d], quo[d + 1])
        full_n = ch.differential_matrix(X, M, w, d).submatrix(norm[d - 1], norm[d])
        if full_q @ S[d] != S[d - 1] @ full_n:
            return False
    return True


def check_late(structs, N=3):
    for X in _rack_targets(structs):
        w = rack_weights(X)
        mods = [trivial_module(X, m, R) for R in (ZZ, QQ, GF(2), GF(3)) for m in (1, 2)]
        C = _commuting(X)
        if C is not None:
            mods.append(C)
        for M in mods:
            if not has_vanishing_compound_action(M, w):
                # CL(M;X) need not be a subcomplex here
                yield Entry("late-splitting", _case(X.name, _mname(M)), "vacuous",
                            {"reason": "compound action does not vanish"})
                continue
            HD = _hom(X, M, w, "degenerate", N + 1)
            HN = _hom(X, M, w, "normalized", N + 1)
            HL = _hom(X, M, w, "late", N + 1)
            bad = [n for n in range(0, N + 1) if HD[n + 1] != direct_sum(HN[n], HL[n + 1])]
            yield Entry("late-splitting", _case(X.name, _mname(M)), _status(not bad),
                        {"degrees": N, "mismatch": bad})
            ok = doubling_quotient_check(X, M, w, N)
            yield Entry("late-splitting", _case(X.name, _mname(M), "doubling iso"), _status(ok),
                        {"degrees": N})


# --------------------------------------------------------------------------
# criterion 4: ∂h + h∂ = -(compound action)

def homotopy_identity(X, M, w, wit, N):
    def D(d):
        if d == 0:
            return ch.augmentation_matrix(X, M, w)
        return ch.differential_matrix(X, M, w, d)

    for d in range(-1, N + 1):
        lhs = D(d + 1) @ ch.homotopy_hw(X, M, w, d, wit)
        if d >= 0:
            lhs = lhs + ch.homotopy_hw(X, M, w, d - 1, wit) @ D(d)
        if lhs != ch.action_chain_map(X, M, w, d, wit).scale(-1):
            return False
    return True


def check_homotopy(structs, N=4):
    for X in structs:
        mods = [trivial_module(X, 1, ZZ), trivial_module(X, 2, GF(3))]
        C = _commuting(X)
        if C is not None:
            mods.append(C)
        for M in mods:
            for w in weight_choices(X, generic=True):
                ok = all(homotopy_identity(X, M, w, y, N) for y in range(X.size))
                yield Entry("homotopy", _case(X.name, _mname(M), _wname(w)), _status(ok),
                            {"degrees": N})


# --------------------------------------------------------------------------
# criterion 5: spectral sequence

SPECTRAL_FIXTURES = ("T2", "R3", "T2+triv", "R3+triv")


def check_spectral(structs, N=5):
    for X in structs:
        if X.name not in SPECTRAL_FIXTURES:
            continue
        w = rack_weights(X) if _has_trivial_top(X) else (1,)
        for R in (QQ, GF(2)):
            M = trivial_module(X, 1, R)
            rep = e2_formula_check(X, M, w, N)
            case = _case(X.name, _mname(M), _wname(w))
            yield Entry("spectral", case + " E1", _status(rep["E1_match"]), {"degrees": N})
            yield Entry("spectral", case + " E2", _status(rep["E2_match"]), {"degrees": N})
            yield Entry("spectral", case + " E-infinity", _status(rep["convergence_match"]),
                        {"degrees": N})
            S = SpectralSequence(degenerate_filtration(X, M, w, N), track=False)
            inv = check_page_invariants(S)
            yield Entry("spectral", case + " page invariants", _status(all(inv.values())),
                        {k: inv[k] for k in sorted(inv)})


# --------------------------------------------------------------------------
# criterion 6: one-term isomorphism

def _single(X, k):
    return tuple(int(j == k) for j in range(X.nops))


def check_one_term(structs, N=5):
    for X in structs:
        mods = [trivial_module(X, 1, ZZ)]
        C = _commuting(X)
        if C is not None:
            mods.append(C)
        for k in range(X.nops):
            w = _single(X, k)
            for M in mods:
                E = one_term_iso(X, M, N, w)
                ok = all(all(v.values()) for v in E.ledger.values())
                bad = {d: sorted(k2 for k2, v in E.ledger[d].items() if not v)
                       for d in E.ledger if not all(E.ledger[d].values())}
                yield Entry("one-term-iso", _case(X.name, _mname(M), f"op {k}", "ledger"), _status(ok),
                            {"degrees": N, "failed": bad})
                rows = verify_one_term_theorem(X, M, N, w)
                bad = [n for n, _, _, match in rows if not match]
                yield Entry("one-term-iso", _case(X.name, _mname(M), f"op {k}", "decomposition"),
                            _status(not bad), {"degrees": N, "mismatch": bad})
            if X.size <= 3:
                ok = all(pull_through_line_check(X, p, k) for p in range(0, 4))
                yield Entry("one-term-iso", _case(X.name, f"op {k}", "pull-through"), _status(ok),
                            {"p_max": 3})
    names = {X.name for X in structs}
    fx = fixtures()
    for X in fx.values():
        for Y in fx.values():
            if X.nops != Y.nops or (X.name not in names and Y.name not in names):
                continue
            M = trivial_module(Y, 1, ZZ)
            for h in all_homomorphisms(X, Y):
                if len(set(h.map)) != X.size:
                    continue
                for k in range(X.nops):
                    nat = one_term_naturality(h, M, min(N, 4), _single(X, k))
                    yield Entry("one-term-iso",
                                _case(f"{X.name}->{Y.name}", _hname(h), f"op {k}", "naturality"),
                                _status(all(nat.values())), {"degrees": min(N, 4)})


def _hname(h):
    return "[" + "".join(str(v) for v in h.map) + "]"


# --------------------------------------------------------------------------
# criterion 7: recursive count

def check_count(structs, N=5):
    mult = [count_multiplicity(2, p) for p in (1, 2, 3)]
    yield Entry("recursive-count", "multiplicities |X|=2 p=1..3", _status(mult == [2, 2, 6]),
                {"values": mult})
    for X in structs:
        for k in range(X.nops):
            w = _single(X, k)
            M = trivial_module(X, 1, ZZ)
            HD = _hom(X, M, w, "degenerate", N)
            yield Entry("recursive-count", _case(X.name, f"op {k}", "HD_1 = 0"),
                        _status(HD[1].is_zero), {})
            if X.size not in (2, 3):
                continue
            hn = _hom(X, M, w, "normalized", N, True).groups
            bad = [n for n in range(0, N + 1) if recursive_count(X.size, hn, n) != HD[n]]
            yield Entry("recursive-count", _case(X.name, f"op {k}"), _status(not bad),
                        {"degrees": N, "mismatch": bad})


# --------------------------------------------------------------------------
# criterion 8: two-term isomorphism and Künneth

def check_two_term(structs, N=4):
    for X in _rack_targets(structs):
        w = rack_weights(X)
        mods = [trivial_module(X, 1, ZZ)]
        C = _commuting(X)
        if C is not None:
            mods.append(C)
        for M in mods:
            E = two_term_iso(X, M, N, w)
            ok = all(all(v.values()) for v in E.ledger.values())
            bad = {d: sorted(k for k, v in E.ledger[d].items() if not v)
                   for d in E.ledger if not all(E.ledger[d].values())}
            yield Entry("two-term-iso", _case(X.name, _mname(M)), _status(ok),
                        {"degrees": N, "failed": bad})


def check_kunneth(structs, N=4):
    for X in _rack_targets(structs):
        w = rack_weights(X)
        mods = [trivial_module(X, m, R) for R in (ZZ, QQ, GF(2)) for m in (1, 2)]
        C = _commuting(X)
        if C is not None:
            mods.append(C)
        for M in mods:
            rows = kunneth_check(X, M, N, w)
            bad = [n for n, _, _, match in rows if not match]
            yield Entry("kunneth", _case(X.name, _mname(M)), _status(not bad),
                        {"degrees": N, "mismatch": bad})
        if X.name == "T1+triv":
            HD = _hom(X, trivial_module(X, 1, ZZ), w, "degenerate", N)
            Z = AbelianGroup(1)
            ok = HD[0].is_zero and all(HD[n] == Z for n in range(1, N + 1))
            yield Entry("kunneth", "T1+triv closed form", _status(ok),
                        {"HD": [str(HD[n]) for n in range(N + 1)]})


# --------------------------------------------------------------------------
# criterion 9: corollaries

def _field_map_iso(f, C, D, degrees):
    res = induced_on_homology(f, C, D, degrees)
    return all(res[d][1] for d in degrees)


def _hd_iso(h, M, w, N):
    """φ_* iso on HD_n for 1 <= n <= N (over M's ring)."""
    Cs = ch.build_complex(h.source, pullback_module(M, h), w, "degenerate", N + 1)
    Ct = ch.build_complex(h.target, M, w, "degenerate", N + 1)
    f = ch.induced_chain_map(h, M, "degenerate", w, N + 1)
    return _field_map_iso(f, Cs, Ct, range(0, N + 1))


def _hn_iso(h, M, w, P):
    Cs = ch.build_complex(h.source, pullback_module(M, h), w, "normalized", P + 1)
    Ct = ch.build_complex(h.target, M, w, "normalized", P + 1)
    f = ch.induced_chain_map(h, M, "normalized", w, P + 1)
    return _field_map_iso(f, Cs, Ct, range(0, P + 1))


def _hat_module_map(h, M, w, k):
    """Ĥ_k(M^φ;X), Ĥ_k(M;X') as modules and the matrix of φ_* between them."""
    X, Y = h.source, h.target
    Mp = pullback_module(M, h)
    Hs = homology_action(X, Mp, w, k)
    Ht = homology_action(Y, M, w, k)
    Cs = ch.build_complex(X, Mp, w, "full", k + 1, True)
    Ct = ch.build_complex(Y, M, w, "full", k + 1, True)
    f = ch.induced_chain_map(h, M, "full", w, k + 1, True)
    g = induced_matrix_field(f[k], FieldHomologyBasis(Cs, k), FieldHomologyBasis(Ct, k))
    return Hs, Ht, g


def cor_hd_from_hn_hat(h, M, w, N):
    """Finite form: φ_* iso on HN_p(Ĥ_k) for k <= N-2, p + k + 2 <= 2N-1 ⇒ HD_n iso, n <= N."""
    hyp = True
    for k in range(-1, N - 1):
        Hs, Ht, g = _hat_module_map(h, M, w, k)
        P = 2 * N - 3 - k
        Cs = ch.build_complex(h.source, Hs, w, "normalized", P + 1)
        Ct = ch.build_complex(h.target, Ht, w, "normalized", P + 1)
        f = ch.induced_chain_map(h, Ht, "normalized", w, P + 1, module_map=g, source_rank=Hs.rank)
        if not _field_map_iso(f, Cs, Ct, range(0, P + 1)):
            hyp = False
            break
    concl = _hd_iso(h, M, w, N) if hyp else None
    return hyp, concl


def sampled_hypothesis(h, M, w, N):
    """HN iso for M and for sampled modules with vanishing compound action ⇒ HD iso, n <= N."""
    Y = h.target
    P = 2 * N - 1
    sample = [trivial_module(Y, m, M.ring) for m in (1, 2)]
    sample = [S for S in sample if has_vanishing_compound_action(S, w)]
    for k in range(-1, N - 1):
        H = homology_action(Y, M, w, k)
        if H.rank:
            sample.append(H)
    hyp = _hn_iso(h, M, w, P) and all(_hn_iso(h, S, w, P) for S in sample)
    concl = _hd_iso(h, M, w, N) if hyp else None
    return hyp, concl, len(sample)


def check_corollaries(structs, N=3):
    names = {X.name for X in structs}
    fx = fixtures()
    # per structure: vanishing and point-like augmented normalized homology
    for X in structs:
        for w in weight_choices(X):
            M = trivial_module(X, 1, ZZ)
            hn = _hom(X, M, w, "normalized", N - 1, True)
            HD = _hom(X, M, w, "degenerate", N)
            hyp = all(hn[k].is_zero for k in range(-1, N - 1))
            concl = all(HD[n].is_zero for n in range(0, N + 1))
            yield Entry("corollaries", _case("vanishing", X.name, _wname(w)), _implication(hyp, concl),
                        {"degrees": N})
            if w == (-1, 1) and _has_trivial_top(X):
                for R in (ZZ, QQ):
                    M = trivial_module(X, 1, R)
                    hn = _hom(X, M, w, "normalized", N - 1, True)
                    HD = _hom(X, M, w, "degenerate", N)
                    one = AbelianGroup(1)
                    hyp = hn[-1] == one and hn[0] == one and all(hn[k].is_zero for k in range(1, N))
                    concl = all(HD[n] == one for n in range(1, N + 1))
                    yield Entry("corollaries", _case("point-like", X.name, R), _implication(hyp, concl),
                                {"degrees": N})
    for X in fx.values():
        for Y in fx.values():
            if X.nops != Y.nops or (X.name not in names and Y.name not in names):
                continue
            for h in all_homomorphisms(X, Y):
                yield from _hom_corollaries(h, N)


def _hom_corollaries(h, N):
    X, Y = h.source, h.target
    tag = _case(f"{X.name}->{Y.name}", _hname(h))
    bij = h.is_bijective
    if X.nops == 1:
        # isomorphism detection, one-term, trivial integral coefficients
        M = trivial_module(Y, 1, ZZ)
        hn = _hom(X, trivial_module(X, 1, ZZ), (1,), "normalized", N - 1, True)
        low = [p for p in range(-1, N) if not hn[p].is_zero]
        hyp = bool(low) and low[0] <= N - 1
        if hyp:
            iso = _hd_iso(h, M, (1,), N)
            status = _status(iso == bij)
        else:
            status, iso = "vacuous", None
        yield Entry("corollaries", _case("detection", tag), status,
                    {"bijective": bij, "HD_iso": iso, "degrees": N})
    weights = [(1,)] if X.nops == 1 else [rack_weights(Y)] if _has_trivial_top(Y) else []
    for w in weights:
        mods = [trivial_module(Y, 1, QQ)]
        C = _commuting(Y, QQ)
        if C is not None:
            mods.append(C)
        for M in mods:
            hyp, concl = cor_hd_from_hn_hat(h, M, w, N)
            yield Entry("corollaries", _case("HN(H)", tag, _mname(M), _wname(w)),
                        _implication(hyp, concl), {"degrees": N})
            hyp, concl, size = sampled_hypothesis(h, M, w, N)
            yield Entry("corollaries", _case("sampled hypothesis", tag, _mname(M), _wname(w)),
                        _implication(hyp, concl), {"degrees": N, "sample": size})
        if w == (-1, 1):
            mods = [trivial_module(Y, 1, ZZ)]
            C = _commuting(Y, ZZ)
            if C is not None:
                mods.append(C)
            T = trivial_module(Y, 1, ZZ)
            base = _hn_iso(h, T, w, N)
            for M in mods:
                hyp = base and _hn_iso(h, M, w, N)
                concl = _hd_iso(h, M, w, N) if hyp else None
                yield Entry("corollaries", _case("rack", tag, _mname(M)), _implication(hyp, concl),
                            {"degrees": N})


# --------------------------------------------------------------------------
# criterion 10: staircase lemma

def check_lemma(structs, N=3, seed=0, count=100):
    reg = check_region_invariants(8, 8)
    ok = not reg["failures"]
    yield Entry("lemma", "region invariants r<=8 N<=8", _status(ok),
                {k: reg[k] for k in ("diagonal", "base", "nested", "step")})
    suite = random_lemma_suite(count=count, first_seed=seed)
    yield Entry("lemma", f"random instances seed {seed}", _status(suite["ok"]),
                {"substantive": suite["substantive"], "vacuous": suite["vacuous"],
                 "failed": [s for s, _ in suite["failed"]]})
    names = {X.name for X in structs}
    fx = fixtures()
    for X in fx.values():
        for Y in fx.values():
            if X.nops != Y.nops or (X.name not in names and Y.name not in names):
                continue
            if X.nops == 1:
                w = (1,)
            elif _has_trivial_top(Y):
                w = rack_weights(Y)
            else:
                continue
            M = trivial_module(Y, 1, QQ)
            for h in all_homomorphisms(X, Y):
                f, F, G = filtered_map_from_hom(h, M, w, N + 2)
                for n in range(1, N + 1):
                    rep = lemma_harness(f, F, G, n)
                    yield Entry("lemma", _case(f"{X.name}->{Y.name}", _hname(h), f"N={n}"),
                                rep["verdict"], {"regions": rep["regions"], "step": rep["region_step"]})


# --------------------------------------------------------------------------
# registry

CHECKS = {
    "axioms": (check_axioms, 5),
    "splitting": (check_splitting, 4),
    "late-splitting": (check_late, 3),
    "homotopy": (check_homotopy, 4),
    "spectral": (check_spectral, 5),
    "one-term-iso": (check_one_term, 5),
    "recursive-count": (check_count, 5),
    "two-term-iso": (check_two_term, 4),
    "kunneth": (check_kunneth, 4),
    "corollaries": (check_corollaries, 3),
    "lemma": (check_lemma, 3),
}


class UnknownSelector(KeyError):
    pass


def resolve_selectors(selectors):
    if not selectors or selectors == ["all"]:
        return list(CHECKS)
    bad = [s for s in selectors if s not in CHECKS]
    if bad:
        raise UnknownSelector(f"unknown selector(s): {', '.join(bad)}; known: {', '.join(CHECKS)}")
    return list(selectors)


def run_verify(selectors=None, N=None, seed=0, structures=None):
    """Run the selected checks; returns a list of entries in a fixed order."""
    structs = _fixture_list(structures)
    out = []
    for name in resolve_selectors(selectors):
        fn, default = CHECKS[name]
        kw = {"N": default if N is None else N}
        if name == "lemma":
            kw["seed"] = seed
        out.extend(fn(structs, **kw))
    return out
