"""Chain complexes of multishelves with coefficients, as sparse exact matrices.

A sequence (x_d, ..., x_0) has index ``Σ x_i n^i`` (x_d most significant)
and the basis of ``M ⊗ C_d`` is ordered sequence-major: the element
``e_t ⊗ x`` sits at ``index(x) * rank(M) + t``.  Position 0 is the
rightmost entry.  Part bases (degenerate, normalized, ...) are ordered
lists of indices into that full basis, so inclusions are literal column
selections.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .modules import ActionModule, compound_action, has_vanishing_compound_action, pullback_module
from .rings import Ring
from .sparse import SparseMatrix
from .structures import Multishelf, ShelfHom

DEFAULT_MAX_DEGREE = 5
DEFAULT_MEMORY_BUDGET = 2 * 1024**3


class PartError(ValueError):
    """A requested part is not a subcomplex; carries a witness generator."""

    def __init__(self, msg, witness=None):
        self.witness = witness
        super().__init__(msg if witness is None else f"{msg}; witness {witness}")


class MemoryBudgetExceeded(MemoryError):
    def __init__(self, required, budget):
        self.required = required
        self.budget = budget
        super().__init__(f"estimated {required} bytes needed, budget is {budget} bytes")


# --------------------------------------------------------------------------
# sequences

def seq_index(seq, n):
    """Index of (x_d, ..., x_0) given leftmost first."""
    idx = 0
    for x in seq:
        idx = idx * n + x
    return idx


def seq_of(idx, n, d):
    """(x_d, ..., x_0) for an index in degree d."""
    out = [0] * (d + 1)
    for j in range(d, -1, -1):
        idx, out[j] = divmod(idx, n)
    return tuple(out)


@lru_cache(maxsize=None)
def _digits(n, d):
    """For every index in degree d, its entries by position (x_0 first)."""
    out = []
    for idx in range(n ** (d + 1)):
        pos = []
        for _ in range(d + 1):
            idx, r = divmod(idx, n)
            pos.append(r)
        out.append(tuple(pos))
    return tuple(out)


def filtration_level(seq):
    """Least i with x_i = x_{i+1}, or None; ``seq`` is (x_d, ..., x_0)."""
    pos = seq[::-1]
    for i in range(len(pos) - 1):
        if pos[i] == pos[i + 1]:
            return i
    return None


@lru_cache(maxsize=None)
def _levels(n, d):
    out = []
    for pos in _digits(n, d):
        lv = None
        for i in range(d):
            if pos[i] == pos[i + 1]:
                lv = i
                break
        out.append(lv)
    return tuple(out)


def level_of_index(idx, n, d):
    return _levels(n, d)[idx]


@lru_cache(maxsize=None)
def _face_targets(ops, n, k, i, d):
    """(target index, acting element) of the face d_i^k for every index in degree d."""
    t = ops[k]
    out = []
    for pos in _digits(n, d):
        xi = pos[i]
        new = 0
        for j in range(d, i, -1):
            new = new * n + t[pos[j]][xi]
        for j in range(i - 1, -1, -1):
            new = new * n + pos[j]
        out.append((new, xi))
    return tuple(out)


# --------------------------------------------------------------------------
# parts

PARTS = ("full", "degenerate", "normalized", "late")


def parse_part(part):
    """Normalize a part selector to a string or ("filtration", p)."""
    if isinstance(part, tuple):
        if part[0] != "filtration" or part[1] < 0:
            raise ValueError(f"bad part {part!r}")
        return ("filtration", int(part[1]))
    if part in PARTS:
        return part
    if isinstance(part, str) and part.startswith("filtration:"):
        return ("filtration", int(part.split(":", 1)[1]))
    raise ValueError(f"unknown part {part!r}")


def part_name(part):
    part = parse_part(part)
    return f"filtration:{part[1]}" if isinstance(part, tuple) else part


def _seq_in_part(level, d, part):
    if part == "full":
        return True
    if part == "normalized":
        return level is None
    if level is None:
        return False
    if part == "degenerate":
        return True
    if part == "late":
        # the first repetition is not the leftmost pair
        return level <= d - 2
    return level <= part[1]


def part_sequences(n, d, part):
    """Sorted sequence indices of degree d in the part."""
    part = parse_part(part)
    lv = _levels(n, d)
    return [s for s in range(n ** (d + 1)) if _seq_in_part(lv[s], d, part)]


def part_indices(n, d, m, part):
    return [s * m + t for s in part_sequences(n, d, part) for t in range(m)]


def cn_rank(n, p):
    """Rank of the normalized group CN_p: n(n-1)^p."""
    return n * (n - 1) ** p


# --------------------------------------------------------------------------
# matrices

def _check_budget(X, M, degrees, budget):
    if budget is None:
        return
    n, m, r = X.size, M.rank, X.nops
    total = 0
    for d in degrees:
        if d < 0:
            continue
        cols = m * n ** (d + 1)
        total += cols * (200 + 120 * r * (d + 1) * max(m, 1))
    if total > budget:
        raise MemoryBudgetExceeded(total, budget)


def face_matrix(X: Multishelf, M: ActionModule, k: int, i: int, d: int) -> SparseMatrix:
    """Matrix of d_i^{⊳_k}: C_d(M;X) -> C_{d-1}(M;X) on full bases."""
    if not 0 <= k < X.nops:
        raise IndexError(f"operation index {k} out of range")
    if not 0 <= i <= d or d < 1:
        raise IndexError(f"position {i} out of range for degree {d}")
    n, m, p = X.size, M.rank, M.ring.p
    targets = _face_targets(X.ops, n, k, i, d)
    cols = []
    act = M.action[k]
    for s, (new, xi) in enumerate(targets):
        A = act[xi]
        base = new * m
        for t in range(m):
            cols.append({base + u: A[u][t] for u in range(m) if A[u][t]})
    return SparseMatrix(m * n ** d, m * n ** (d + 1), cols, p)


def differential_matrix(X: Multishelf, M: ActionModule, w, d: int) -> SparseMatrix:
    """Σ_k w_k Σ_i (-1)^(d-i) d_i^k on full bases, degree d -> d-1 (d >= 1)."""
    if d < 1:
        raise ValueError("the non-augmented differential starts in degree 1")
    n, m, R = X.size, M.rank, M.ring
    p = R.p
    ncols = m * n ** (d + 1)
    cols = [dict() for _ in range(ncols)]
    for k, a in enumerate(w):
        if not a:
            continue
        act = M.action[k]
        for i in range(d + 1):
            sign = a if (d - i) % 2 == 0 else -a
            targets = _face_targets(X.ops, n, k, i, d)
            for s, (new, xi) in enumerate(targets):
                A = act[xi]
                base = new * m
                for t in range(m):
                    col = cols[s * m + t]
                    for u in range(m):
                        v = A[u][t]
                        if v:
                            key = base + u
                            nv = col.get(key, 0) + sign * v
                            if p:
                                nv %= p
                            if nv:
                                col[key] = R.coerce(nv) if not p else nv
                            else:
                                col.pop(key, None)
    return SparseMatrix(m * n ** d, ncols, cols, p)


def augmentation_matrix(X: Multishelf, M: ActionModule, w) -> SparseMatrix:
    """∂_0: C_0(M;X) -> M, m ⊗ (x) ↦ compound action of x on m."""
    n, m = X.size, M.rank
    cols = []
    for x in range(n):
        C = compound_action(M, w, x)
        for t in range(m):
            cols.append({u: C[u][t] for u in range(m) if C[u][t]})
    return SparseMatrix(m, m * n, cols, M.ring.p)


# --------------------------------------------------------------------------
# complexes

@dataclass
class ChainComplex:
    """Degrees lo..hi with dims and differentials ∂_d: d -> d-1 for lo < d <= hi."""

    ring: Ring
    lo: int
    hi: int
    dims: dict
    diffs: dict
    labels: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def dim(self, d):
        return self.dims.get(d, 0)

    def boundary(self, d) -> SparseMatrix:
        """∂_d (zero matrix outside the stored range)."""
        if d in self.diffs:
            return self.diffs[d]
        return SparseMatrix.zeros(self.dim(d - 1), self.dim(d), self.ring.p)

    def degrees(self):
        return range(self.lo, self.hi + 1)

    def check_square_zero(self):
        for d in range(self.lo + 2, self.hi + 1):
            prod = self.boundary(d - 1) @ self.boundary(d)
            if not prod.is_zero():
                return False, d
        return True, None


def build_complex(X: Multishelf, M: ActionModule, w, part="full", N=DEFAULT_MAX_DEGREE,
                  augmented=False, memory_budget=DEFAULT_MEMORY_BUDGET,
                  check_closure=True) -> ChainComplex:
    """Chain complex of (X, M, w) restricted to a part, degrees 0..N (or -1..N).

    Subcomplex parts use the restricted differential (closure is verified),
    the normalized part uses the quotient differential on repetition-free
    sequences.
    """
    part = parse_part(part)
    R = M.ring
    n, m = X.size, M.rank
    w = tuple(R.coerce(a) for a in w)
    if len(w) != X.nops:
        raise ValueError(f"expected {X.nops} weights, got {len(w)}")
    flags = {}
    if part == "late":
        wsum_zero = R.coerce(sum(w)) == 0
        vanishing = has_vanishing_compound_action(M, w)
        if not (wsum_zero or vanishing):
            raise PartError("late part requires zero weight sum or vanishing compound action")
        flags = {"weight_sum_zero": wsum_zero, "vanishing_compound_action": vanishing}
    lo = -1 if augmented else 0
    _check_budget(X, M, range(0, N + 1), memory_budget)
    labels, dims, diffs = {}, {}, {}
    for d in range(0, N + 1):
        labels[d] = part_indices(n, d, m, part)
        dims[d] = len(labels[d])
    if augmented:
        labels[-1] = list(range(m))
        dims[-1] = m
        aug = augmentation_matrix(X, M, w)
        diffs[0] = aug.submatrix(labels[-1], labels[0])
    for d in range(1, N + 1):
        full = differential_matrix(X, M, w, d)
        cols, rows = labels[d], labels[d - 1]
        if part != "full" and part != "normalized" and check_closure:
            bad = full.entries_outside(rows, cols)
            if bad:
                i, j, _ = bad[0]
                raise PartError(
                    f"part {part_name(part)} is not closed under the differential in degree {d}",
                    witness={"degree": d, "sequence": seq_of(j // m, n, d), "coefficient": j % m,
                             "hits": seq_of(i // m, n, d - 1)})
        diffs[d] = full.submatrix(rows, cols)
    meta = {"structure": X.name or str(X), "ring": str(R), "weights": list(w),
            "part": part_name(part), "augmented": augmented, "size": n, "rank": m}
    meta.update(flags)
    return ChainComplex(R, lo, N, dims, diffs, labels, meta)


def complex_from_matrices(ring: Ring, diffs: dict, dims: dict, lo=None, hi=None, meta=None):
    lo = min(dims) if lo is None else lo
    hi = max(dims) if hi is None else hi
    return ChainComplex(ring, lo, hi, dict(dims), dict(diffs), {}, meta or {})


# --------------------------------------------------------------------------
# structural maps

def doubling_map(X: Multishelf, M: ActionModule, w, d: int) -> SparseMatrix:
    """s(m ⊗ (x_d, ..., x_0)) = (-1)^d m ⊗ (x_d, x_d, ..., x_0), full bases d -> d+1."""
    if not has_vanishing_compound_action(M, w):
        raise ValueError("doubling map needs a vanishing compound action")
    n, m = X.size, M.rank
    sign = 1 if d % 2 == 0 else -1
    cols = []
    top = n ** (d + 1)
    for s in range(n ** (d + 1)):
        new = (s // n ** d) * top + s
        for t in range(m):
            cols.append({new * m + t: sign})
    return SparseMatrix(m * n ** (d + 2), m * n ** (d + 1), cols, M.ring.p)


def homotopy_hw(X: Multishelf, M: ActionModule, w, d: int, wit: int) -> SparseMatrix:
    """h^w(m ⊗ x) = (-1)^d m ⊗ (x, w), full bases d -> d+1 (d = -1 allowed)."""
    n, m = X.size, M.rank
    sign = 1 if d % 2 == 0 else -1
    count = n ** (d + 1) if d >= 0 else 1
    cols = []
    for s in range(count):
        new = s * n + wit
        for t in range(m):
            cols.append({new * m + t: sign})
    return SparseMatrix(m * n ** (d + 2), m * count, cols, M.ring.p)


def action_chain_map(X: Multishelf, M: ActionModule, w, d: int, y: int) -> SparseMatrix:
    """m ⊗ x ↦ Σ_k w_k (m ⊳_k y) ⊗ (x ⊳_k y) entrywise, on degree d (d = -1: compound action)."""
    n, m, R = X.size, M.rank, M.ring
    if d < 0:
        C = compound_action(M, w, y)
        return SparseMatrix.from_dense(C, m, p=R.p)
    count = n ** (d + 1)
    cols = [dict() for _ in range(count * m)]
    digits = _digits(n, d)
    for k, a in enumerate(w):
        if not a:
            continue
        t_op = X.ops[k]
        A = M.action[k][y]
        for s in range(count):
            pos = digits[s]
            new = 0
            for j in range(d, -1, -1):
                new = new * n + t_op[pos[j]][y]
            for t in range(m):
                col = cols[s * m + t]
                for u in range(m):
                    if A[u][t]:
                        key = new * m + u
                        col[key] = R.coerce(col.get(key, 0) + a * A[u][t])
                        if not col[key]:
                            del col[key]
    return SparseMatrix(count * m, count * m, cols, R.p)


def entrywise_action_map(X: Multishelf, M: ActionModule, d: int, k: int, y: int) -> SparseMatrix:
    """m ⊗ x ↦ (m ⊳_k y) ⊗ (x ⊳_k y) for a single operation (degree -1: the module action)."""
    w = [0] * X.nops
    w[k] = 1
    return action_chain_map(X, M, w, d, y)


def induced_chain_map(h: ShelfHom, M: ActionModule, part="full", w=None, N=DEFAULT_MAX_DEGREE,
                      augmented=False, module_map=None, source_rank=None):
    """Matrices of φ_*: C(M^φ; X) -> C(M; X') on part bases, degrees (-1 or 0)..N.

    With ``module_map`` (a dense matrix from a source module of rank
    ``source_rank`` to M) the coefficients are pushed through it as well,
    giving g ⊗ φ_* for an equivariant module map g.
    """
    part = parse_part(part)
    if part not in ("full", "degenerate", "normalized", "late") and not isinstance(part, tuple):
        raise ValueError(f"unsupported part {part!r}")
    X, Y = h.source, h.target
    if M.structure != Y:
        raise ValueError("module must live over the homomorphism target")
    n, n2, m = X.size, Y.size, M.rank
    ms = m if module_map is None else source_rank
    if module_map is None:
        coeff = [{t: 1} for t in range(m)]
    else:
        coeff = [{u: module_map[u][t] for u in range(m) if module_map[u][t]} for t in range(ms)]
    f = h.map
    out = {}
    lo = -1 if augmented else 0
    for d in range(lo, N + 1):
        if d == -1:
            out[d] = SparseMatrix(m, ms, [dict(c) for c in coeff], M.ring.p)
            continue
        src = part_indices(n, d, ms, part)
        dst = part_indices(n2, d, m, part)
        dpos = {g: k for k, g in enumerate(dst)}
        digits = _digits(n, d)
        cols = []
        for g in src:
            s, t = divmod(g, ms)
            new = 0
            for j in range(d, -1, -1):
                new = new * n2 + f[digits[s][j]]
            col = {}
            for u, a in coeff[t].items():
                tgt = dpos.get(new * m + u)
                if tgt is None:
                    if part != "normalized":
                        raise ValueError("homomorphism does not preserve the part")
                    continue
                col[tgt] = a
            cols.append(col)
        out[d] = SparseMatrix(len(dst), len(src), cols, M.ring.p)
    return out


def pullback_complex(h: ShelfHom, M: ActionModule, w, part="full", N=DEFAULT_MAX_DEGREE,
                     augmented=False):
    return build_complex(h.source, pullback_module(M, h), w, part, N, augmented)


def is_chain_map(f: dict, C: ChainComplex, D: ChainComplex, degrees=None):
    """Check ∂^D f_d = f_{d-1} ∂^C_d; returns (ok, first bad degree)."""
    degrees = degrees if degrees is not None else range(C.lo + 1, C.hi + 1)
    for d in degrees:
        if d not in f or d - 1 not in f:
            continue
        lhs = D.boundary(d) @ f[d]
        rhs = f[d - 1] @ C.boundary(d)
        if lhs != rhs:
            return False, d
    return True, None


# --------------------------------------------------------------------------
# associated graded

def graded_quotient_iso(X: Multishelf, M: ActionModule, p: int, n_deg: int):
    """Bijection gr_p CD_n <-> Ĉ_{n-p-2}(M;X) ⊗ CN_p(X).

    Returns a list of triples (index in C_n(M;X), index in Ĉ_{n-p-2}(M;X),
    index of (x_p, ..., x_0) in C_p(X)), ordered by the first entry.
    """
    if not 0 <= p < n_deg:
        raise ValueError("need 0 <= p < n")
    n, m = X.size, M.rank
    lv = _levels(n, n_deg)
    low = n ** (p + 2)
    out = []
    for s in range(n ** (n_deg + 1)):
        if lv[s] != p:
            continue
        left, right_block = divmod(s, low)
        right = right_block % n ** (p + 1)
        for t in range(m):
            out.append((s * m + t, left * m + t, right))
    return out


def graded_differential(X, M, w, p, n_deg):
    """The differential of gr_p CD in degree n, on gr_p bases (rows level exactly p)."""
    m = M.rank
    cols = [g for g, _, _ in graded_quotient_iso(X, M, p, n_deg)]
    rows = ([g for g, _, _ in graded_quotient_iso(X, M, p, n_deg - 1)]
            if n_deg - 1 > p else [])
    full = differential_matrix(X, M, w, n_deg)
    return full.submatrix(rows, cols)


def check_graded_intertwining(X, M, w, p, n_deg):
    """gr_p differential equals (augmented differential) ⊗ id under the bijection."""
    n, m = X.size, M.rank
    src = graded_quotient_iso(X, M, p, n_deg)
    tgt = graded_quotient_iso(X, M, p, n_deg - 1) if n_deg - 1 > p else []
    G = graded_differential(X, M, w, p, n_deg)
    q = n_deg - p - 2  # left degree
    if q == -1:
        return G.is_zero()
    if q == 0:
        L = augmentation_matrix(X, M, w)
    else:
        L = differential_matrix(X, M, w, q)
    tpos = {(a, b): k for k, (_, a, b) in enumerate(tgt)}
    for j, (_, a, b) in enumerate(src):
        expect = {}
        for i, v in L.cols[a].items():
            expect[tpos[(i, b)]] = v
        if G.cols[j] != expect:
            return False
    return True


# --------------------------------------------------------------------------
# bicomplex for the rack-type differential

@dataclass
class Bicomplex:
    """B_{pq} = Ĉ_{q-2}(M;X) ⊗ CN_p(X), left factor index major."""

    ring: Ring
    N: int
    left_dims: dict      # Ĉ degree -> rank
    right_seqs: dict     # p -> normalized sequence indices of C_p(X)
    vertical: dict       # Ĉ differential: degree e -> e-1 (full augmented)
    horizontal: dict     # CN differential: p -> p-1
    weights: tuple
    horizontal_weights: tuple

    def dim(self, p, q):
        if p < 0 or q < 1:
            return 0
        return self.left_dims.get(q - 2, 0) * len(self.right_seqs.get(p, ()))

    def blocks(self, n):
        """(p, q, offset) of the summands of Tot_n, ordered by p."""
        out, off = [], 0
        for p in range(0, n):
            q = n - p
            dpq = self.dim(p, q)
            out.append((p, q, off))
            off += dpq
        return out, off


def bicomplex(X: Multishelf, M: ActionModule, w, N: int) -> Bicomplex:
    """Bicomplex for weights w = (a, b) on (⊳, ▷); horizontal part is CN(X, b·∂^R)."""
    if X.nops != 2:
        raise ValueError("the bicomplex needs a structure (⊳, ▷) with two operations")
    R = M.ring
    w = tuple(R.coerce(a) for a in w)
    b = w[1]
    hw = (R.coerce(-b), b)
    from .modules import trivial_module
    T = trivial_module(X, 1, R)
    n, m = X.size, M.rank
    left_dims = {-1: m}
    vertical = {0: augmentation_matrix(X, M, w)}
    for e in range(0, N - 1):
        left_dims[e] = m * n ** (e + 1)
        if e >= 1:
            vertical[e] = differential_matrix(X, M, w, e)
    right_seqs, horizontal = {}, {}
    for p in range(0, N):
        right_seqs[p] = part_sequences(n, p, "normalized")
        if p >= 1:
            full = differential_matrix(X, T, hw, p)
            horizontal[p] = full.submatrix(right_seqs[p - 1], right_seqs[p])
    return Bicomplex(R, N, left_dims, right_seqs, vertical, horizontal, w, hw)


def total_complex(B: Bicomplex) -> ChainComplex:
    """Tot(B)_n = ⊕_{p+q=n} B_{pq}; D(a⊗b) = ∂a⊗b - (-1)^q a⊗∂b."""
    R, N = B.ring, B.N
    dims, diffs = {}, {}
    for n in range(0, N + 1):
        dims[n] = B.blocks(n)[1]
    for n in range(1, N + 1):
        src, _ = B.blocks(n)
        tgt, _ = B.blocks(n - 1)
        toff = {(p, q): off for p, q, off in tgt}
        cols = []
        for p, q, off in src:
            rp = len(B.right_seqs[p])
            e = q - 2
            ldim = B.left_dims[e]
            sign = -1 if q % 2 == 0 else 1
            V = B.vertical.get(e) if e >= 0 else None
            H = B.horizontal.get(p)
            rpm = len(B.right_seqs.get(p - 1, ())) if p >= 1 else 0
            for a in range(ldim):
                for bidx in range(rp):
                    col = {}
                    if V is not None and (p, q - 1) in toff:
                        base = toff[(p, q - 1)]
                        for i, v in V.cols[a].items():
                            col[base + i * rp + bidx] = v
                    if H is not None and (p - 1, q) in toff:
                        base = toff[(p - 1, q)]
                        for i, v in H.cols[bidx].items():
                            key = base + a * rpm + i
                            nv = col.get(key, 0) + sign * v
                            if R.p:
                                nv %= R.p
                            if nv:
                                col[key] = nv
                            else:
                                col.pop(key, None)
                    cols.append(col)
        diffs[n] = SparseMatrix(dims[n - 1], dims[n], cols, R.p)
    meta = {"weights": list(B.weights), "horizontal_weights": list(B.horizontal_weights),
            "part": "total", "ring": str(R)}
    return ChainComplex(R, 0, N, dims, diffs, {}, meta)
