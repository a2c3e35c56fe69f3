"""Homology of chain complexes over Z, Q and F_p.

Groups are :class:`AbelianGroup` values in invariant-factor form.  Plain
homology tables only need ranks and elementary divisors, which come from
the sparse elimination in :mod:`linalg`.  Induced maps need explicit
generators; those come from dense Smith forms over Z and from echelon
bases over fields.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from . import linalg
from .chains import ChainComplex, build_complex, entrywise_action_map
from .linalg import Field, Reducer, smith_normal_form, normalize_invariants
from .modules import ActionModule
from .rings import Ring
from .sparse import SparseMatrix


# --------------------------------------------------------------------------
# finitely generated abelian groups

@dataclass(frozen=True)
class AbelianGroup:
    free_rank: int = 0
    torsion: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(normalize_invariants(self.torsion)))
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")

    @classmethod
    def from_orders(cls, orders):
        """Direct sum of cyclic groups Z/d (d = 0 meaning Z)."""
        orders = list(orders)
        return cls(sum(1 for d in orders if d == 0), tuple(d for d in orders if d))

    @property
    def is_zero(self):
        return self.free_rank == 0 and not self.torsion

    def __str__(self):
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        for t in self.torsion:
            parts.append(f"Z{t}")
        return "+".join(parts) if parts else "0"

    def orders(self):
        return [0] * self.free_rank + list(self.torsion)

    def __add__(self, other):
        return direct_sum(self, other)

    def __mul__(self, k: int):
        return AbelianGroup(self.free_rank * k, self.torsion * k)

    __rmul__ = __mul__


def isomorphic(A: AbelianGroup, B: AbelianGroup) -> bool:
    return A == B


def direct_sum(*groups) -> AbelianGroup:
    return AbelianGroup(sum(g.free_rank for g in groups),
                        tuple(t for g in groups for t in g.torsion))


def tensor(A: AbelianGroup, B: AbelianGroup) -> AbelianGroup:
    # Z^a ⊗ Z^b = Z^ab, Z ⊗ Z_t = Z_t, Z_t ⊗ Z_s = Z_gcd
    tors = [t for t in A.torsion for _ in range(B.free_rank)]
    tors += [s for s in B.torsion for _ in range(A.free_rank)]
    tors += [gcd(t, s) for t in A.torsion for s in B.torsion]
    return AbelianGroup(A.free_rank * B.free_rank, tuple(tors))


def tor(A: AbelianGroup, B: AbelianGroup) -> AbelianGroup:
    return AbelianGroup(0, tuple(gcd(t, s) for t in A.torsion for s in B.torsion))


def group_ops(A: AbelianGroup, B: AbelianGroup) -> dict:
    return {"isomorphic": isomorphic(A, B), "direct_sum": direct_sum(A, B),
            "tensor": tensor(A, B), "tor": tor(A, B)}


def over_field(A: AbelianGroup, p: int) -> AbelianGroup:
    """Dimension bookkeeping: free rank over Q (p = 0) or dim of A ⊗ F_p."""
    if p == 0:
        return AbelianGroup(A.free_rank)
    return AbelianGroup(A.free_rank + sum(1 for t in A.torsion if t % p == 0))


# --------------------------------------------------------------------------
# homology tables

@dataclass
class HomologyTable:
    ring: Ring
    groups: dict
    provenance: dict = field(default_factory=dict)

    def __getitem__(self, d):
        return self.groups[d]

    def degrees(self):
        return sorted(self.groups)


def _rank(mat: SparseMatrix, ring: Ring) -> int:
    if mat.ncols == 0 or mat.nrows == 0:
        return 0
    return linalg.rank(mat, ring.p)


def homology(C: ChainComplex, degrees=None) -> HomologyTable:
    """H_d for d in lo..hi-1 (the top degree lacks its incoming boundary)."""
    R = C.ring
    degrees = list(degrees) if degrees is not None else list(range(C.lo, C.hi))
    ranks, divisors = {}, {}

    def info(d):
        if d in ranks:
            return ranks[d]
        B = C.boundary(d)
        if B.ncols == 0 or B.nrows == 0:
            ranks[d], divisors[d] = 0, []
        elif R.kind == "Z":
            ed = linalg.elementary_divisors(B)
            ranks[d], divisors[d] = len(ed), [e for e in ed if e > 1]
        else:
            ranks[d], divisors[d] = _rank(B, R), []
        return ranks[d]

    groups = {}
    for d in degrees:
        r_out = info(d) if d > C.lo else 0
        r_in = info(d + 1)
        free = C.dim(d) - r_out - r_in
        groups[d] = AbelianGroup(free, tuple(divisors[d + 1]) if R.kind == "Z" else ())
    return HomologyTable(R, groups, dict(C.meta))


def homology_of(X, M, w, part="full", N=5, augmented=False, memory_budget=None):
    """H_d for degrees (-1 or 0)..N; builds the complex one degree higher."""
    kw = {} if memory_budget is None else {"memory_budget": memory_budget}
    C = build_complex(X, M, w, part, N + 1, augmented, **kw)
    return homology(C)


# --------------------------------------------------------------------------
# explicit homology over fields

class FieldHomologyBasis:
    """Basis of H_d over a field with representative cycles and coordinates."""

    def __init__(self, C: ChainComplex, d: int):
        F = Field(C.ring.p)
        self.field = F
        self.degree = d
        red = Reducer(F)
        Bd1 = C.boundary(d + 1) if d + 1 <= C.hi else SparseMatrix.zeros(C.dim(d), 0, C.ring.p)
        for j, col in enumerate(Bd1.cols):
            red.add(col, label=("b", j))
        kernel = linalg.nullspace(C.boundary(d), F) if d > C.lo else [
            {i: 1} for i in range(C.dim(d))]
        self.reps = []
        for z in kernel:
            if red.add(z, label=("h", len(self.reps))) is None:
                self.reps.append(F.vec(z))
        self._red = red
        self.dim = len(self.reps)

    def coords(self, cycle: dict):
        """Coordinates of a cycle's class in terms of ``reps``."""
        F = self.field
        v, c = self._red.reduce(F.vec(cycle))
        if v:
            raise ValueError("vector is not a cycle modulo boundaries")
        out = [0] * self.dim
        for (kind, k), a in c.items():
            if kind == "h":
                out[k] = F.norm(-a)
        return out


def induced_matrix_field(f: SparseMatrix, HB: FieldHomologyBasis, HC: FieldHomologyBasis):
    """Dense matrix of the map on homology induced by the chain-level matrix f."""
    cols = [HC.coords(f.apply(r)) for r in HB.reps]
    return [[cols[j][i] for j in range(len(cols))] for i in range(HC.dim)]


def dense_rank_field(rows, p):
    if not rows or not rows[0]:
        return 0
    F = Field(p)
    red = Reducer(F, track=False)
    for j in range(len(rows[0])):
        red.add({i: rows[i][j] for i in range(len(rows)) if rows[i][j]})
    return len(red)


def homology_action(X, M: ActionModule, w, d: int, augmented=True, N=None) -> ActionModule:
    """The action of X on H_d(M;X) (augmented by default) over a field ring."""
    R = M.ring
    if not R.is_field:
        raise ValueError("homology_action needs a field ring")
    top = d + 1 if N is None else max(N, d + 1)
    C = build_complex(X, M, w, "full", top, augmented)
    HB = FieldHomologyBasis(C, d)
    action = []
    for k in range(X.nops):
        row = []
        for y in range(X.size):
            f = entrywise_action_map(X, M, d, k, y)
            row.append(induced_matrix_field(f, HB, HB))
        action.append(row)
    return ActionModule(X, R, HB.dim, action)


# --------------------------------------------------------------------------
# explicit homology over Z

def _mat_vec(A, v):
    return [sum(a * b for a, b in zip(row, v)) for row in A]


class IntegralHomologyPresentation:
    """H_d over Z as ⊕ Z/o_i with generator cycles and a coordinate map."""

    def __init__(self, C: ChainComplex, d: int):
        if C.ring.kind != "Z":
            raise ValueError("integral presentation needs Z coefficients")
        self.degree = d
        n = C.dim(d)
        if d > C.lo and C.dim(d - 1) and n:
            snf = smith_normal_form(C.boundary(d).to_dense())
            r = snf.rank
            V, Vinv = snf.V, snf.Vinv
        else:
            r = 0
            V = [[int(i == j) for j in range(n)] for i in range(n)]
            Vinv = V
        self._r = r
        self._Vinv_tail = Vinv[r:]  # kernel coordinates of a cycle
        K = [[V[i][j] for j in range(r, n)] for i in range(n)]  # kernel basis as columns
        z = n - r
        up = C.boundary(d + 1) if d + 1 <= C.hi else SparseMatrix.zeros(n, 0)
        P = [[0] * up.ncols for _ in range(z)]
        for j, col in enumerate(up.cols):
            coords = [0] * z
            for i, v in col.items():
                for a in range(z):
                    if self._Vinv_tail[a][i]:
                        coords[a] += self._Vinv_tail[a][i] * v
            for a in range(z):
                P[a][j] = coords[a]
        if z and up.ncols:
            snf2 = smith_normal_form(P)
            U2, U2inv, diag = snf2.U, snf2.Uinv, snf2.diagonal
        else:
            U2 = [[int(i == j) for j in range(z)] for i in range(z)]
            U2inv, diag = U2, []
        orders = [diag[i] if i < len(diag) else 0 for i in range(z)]
        self._U2 = U2
        self.keep = [i for i in range(z) if orders[i] != 1]
        self.orders = [orders[i] for i in self.keep]
        # generator cycles: K @ U2inv[:, i]
        self.gens = []
        for i in self.keep:
            colv = [U2inv[a][i] for a in range(z)]
            g = {}
            for row in range(n):
                s = sum(K[row][a] * colv[a] for a in range(z) if colv[a])
                if s:
                    g[row] = s
            self.gens.append(g)
        self.group = AbelianGroup.from_orders(self.orders)

    def coords(self, cycle: dict):
        tail = self._Vinv_tail
        y = [sum(tail[a][i] * v for i, v in cycle.items()) for a in range(len(tail))]
        c = _mat_vec(self._U2, y) if y else []
        out = []
        for i, o in zip(self.keep, self.orders):
            out.append(c[i] % o if o else c[i])
        return out


def induced_on_homology(f: dict, C: ChainComplex, D: ChainComplex, degrees=None):
    """Per degree: (matrix on homology generators, iso flag).

    Over Z the map is an isomorphism iff the groups are isomorphic and the
    map is onto (finitely generated abelian groups are Hopfian); ontoness is
    read off the Smith form of [matrix | relations of the target].
    """
    from .chains import is_chain_map
    ok, bad = is_chain_map(f, C, D)
    if not ok:
        raise ValueError(f"not a chain map (degree {bad})")
    degrees = list(degrees) if degrees is not None else [d for d in range(C.lo, C.hi) if d in f]
    out = {}
    for d in degrees:
        if C.ring.kind == "Z":
            HB = IntegralHomologyPresentation(C, d)
            HC = IntegralHomologyPresentation(D, d)
            cols = [HC.coords(f[d].apply(g)) for g in HB.gens]
            mat = [[cols[j][i] for j in range(len(cols))] for i in range(len(HC.gens))]
            out[d] = (mat, _integral_iso(mat, HB.group, HC.group, HC.orders))
        else:
            HB = FieldHomologyBasis(C, d)
            HC = FieldHomologyBasis(D, d)
            mat = induced_matrix_field(f[d], HB, HC)
            iso = HB.dim == HC.dim and dense_rank_field(mat, C.ring.p) == HC.dim
            out[d] = (mat, iso)
    return out


def _integral_iso(mat, A: AbelianGroup, B: AbelianGroup, target_orders):
    if A != B:
        return False
    g = len(target_orders)
    if g == 0:
        return True
    rel = [[target_orders[i] if i == j else 0 for j in range(g)] for i in range(g)]
    aug = [list(mat[i]) + rel[i] for i in range(g)]
    diag = smith_normal_form(aug, transforms=False).diagonal
    return len(diag) == g and all(x == 1 for x in diag)
