"""Linear actions of multishelves on free modules.

``action[k][y]`` is the matrix of ``m ↦ m ⊳_k y``.  Matrices act on column
vectors, so "A then B" is the product ``B @ A``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .rings import Ring
from .sparse import SparseMatrix
from .structures import Multishelf, ShelfHom, structure_from_dict, structure_to_dict, load_structure


class ModuleError(ValueError):
    pass


def _dense_mul(a, b, ring):
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        for t in range(k):
            v = ai[t]
            if v:
                bt = b[t]
                for j in range(m):
                    if bt[j]:
                        out[i][j] += v * bt[j]
    return [[ring.coerce(v) for v in row] for row in out]


def determinant(mat):
    """Exact determinant by fraction-free elimination (entries int or Fraction)."""
    n = len(mat)
    a = [[Fraction(v) for v in row] for row in mat]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            if a[r][c]:
                f = a[r][c] / a[c][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return int(det) if det.denominator == 1 else det


@dataclass(frozen=True)
class ActionModule:
    structure: Multishelf
    ring: Ring
    rank: int
    action: tuple

    def __post_init__(self):
        X, m, R = self.structure, self.rank, self.ring
        if m < 0:
            raise ModuleError("rank must be nonnegative")
        act = self.action
        if len(act) != X.nops or any(len(row) != X.size for row in act):
            raise ModuleError(f"action must be a {X.nops}x{X.size} array of matrices")
        fixed = []
        for row in act:
            frow = []
            for A in row:
                if len(A) != m or any(len(r) != m for r in A):
                    raise ModuleError(f"action matrices must be {m}x{m}")
                frow.append(tuple(tuple(R.coerce(v) for v in r) for r in A))
            fixed.append(tuple(frow))
        object.__setattr__(self, "action", tuple(fixed))

    def matrix(self, k, y):
        return self.action[k][y]

    def sparse(self, k, y) -> SparseMatrix:
        return SparseMatrix.from_dense(self.action[k][y], self.rank, p=self.ring.p)

    @property
    def is_trivial(self):
        eye = tuple(tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank))
        return all(A == eye for row in self.action for A in row)


def trivial_module(X: Multishelf, rank: int, ring: Ring) -> ActionModule:
    eye = [[int(i == j) for j in range(rank)] for i in range(rank)]
    return ActionModule(X, ring, rank, [[eye] * X.size for _ in range(X.nops)])


def validate_action(M: ActionModule):
    """(True, None) or (False, witness).

    The witness is (i, j, x, y) for a failure of the mixed distributivity
    law ``action[j][y] @ action[i][x] == action[i][x ⊳_j y] @ action[j][y]``
    and (k, y) for a non-invertible matrix at a quandle operation.
    """
    X, R = M.structure, M.ring
    A = M.action
    for i in range(X.nops):
        for j in range(X.nops):
            for x in range(X.size):
                for y in range(X.size):
                    lhs = _dense_mul(A[j][y], A[i][x], R)
                    rhs = _dense_mul(A[i][X.ops[j][x][y]], A[j][y], R)
                    if lhs != rhs:
                        return False, (i, j, x, y)
    for k, level in enumerate(X.levels):
        if level != "quandle":
            continue
        for y in range(X.size):
            if M.rank and not R.is_unit(determinant(A[k][y])):
                return False, (k, y)
    return True, None


def parse_weights(text_or_seq, ring: Ring, nops: int):
    """Weights from a comma-separated string or a sequence, coerced into the ring."""
    if isinstance(text_or_seq, str):
        items = [s for s in text_or_seq.split(",") if s.strip()]
    else:
        items = list(text_or_seq)
    w = tuple(ring.coerce(v) for v in items)
    if len(w) != nops:
        raise ModuleError(f"expected {nops} weights, got {len(w)}")
    return w


def rack_weights(X: Multishelf):
    """Weights of the rack differential ∂^▷ - ∂^⊳ on a structure (⊳, ▷)."""
    if X.nops != 2:
        raise ModuleError("rack weights need exactly two operations (⊳, then the trivial ▷)")
    triv = all(X.ops[1][x][y] == x for x in range(X.size) for y in range(X.size))
    if not triv:
        raise ModuleError("the second operation must be the trivial one")
    return (-1, 1)


def compound_action(M: ActionModule, w, y):
    """Dense matrix of ``m ↦ Σ_k w_k (m ⊳_k y)``."""
    R, m = M.ring, M.rank
    out = [[0] * m for _ in range(m)]
    for k, a in enumerate(w):
        if not a:
            continue
        A = M.action[k][y]
        for i in range(m):
            for j in range(m):
                out[i][j] += a * A[i][j]
    return [[R.coerce(v) for v in row] for row in out]


def has_vanishing_compound_action(M: ActionModule, w) -> bool:
    return all(not any(any(r) for r in compound_action(M, w, y))
               for y in range(M.structure.size))


def pullback_module(M: ActionModule, h: ShelfHom) -> ActionModule:
    if M.structure != h.target:
        raise ModuleError("module structure is not the homomorphism target")
    X = h.source
    act = [[M.action[k][h(x)] for x in range(X.size)] for k in range(X.nops)]
    return ActionModule(X, M.ring, M.rank, act)


def extend_by_identity(M: ActionModule, X2: Multishelf) -> ActionModule:
    """Module over X with one extra (trivial) operation acting by the identity."""
    if X2.nops != M.structure.nops + 1 or X2.ops[:-1] != M.structure.ops:
        raise ModuleError("target must be the structure with one appended operation")
    eye = [[int(i == j) for j in range(M.rank)] for i in range(M.rank)]
    return ActionModule(X2, M.ring, M.rank, list(M.action) + [[eye] * X2.size])


def commuting_module_T2(ring: Ring) -> ActionModule:
    """Rank-2 module over the trivial quandle on two elements: 0 acts by I, 1 by the swap."""
    from .structures import standard_family
    X = standard_family("trivial", 2)
    return ActionModule(X, ring, 2, [[[[1, 0], [0, 1]], [[0, 1], [1, 0]]]])


# --------------------------------------------------------------------------
# module files
#
# JSON object: {"ring": "Z"|"Q"|"Fp:<p>", "rank": m, "action": [[matrix]*n]*r,
#               "structure": {...} | "structure_path": "..."}
# Matrix entries are integers or strings "p/q".

def _entry_to_json(v):
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    return v


def module_to_dict(M: ActionModule, inline_structure=True, structure_path=None) -> dict:
    d = {"ring": str(M.ring), "rank": M.rank,
         "action": [[[[_entry_to_json(v) for v in r] for r in A] for A in row] for row in M.action]}
    if inline_structure:
        d["structure"] = structure_to_dict(M.structure)
    else:
        d["structure_path"] = structure_path
    return d


def load_module(data, base_dir=".", structure: Multishelf | None = None) -> ActionModule:
    import os
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        d = json.loads(data)
    except json.JSONDecodeError as e:
        raise ModuleError(f"malformed module file: {e}") from None
    for key in ("ring", "rank", "action"):
        if key not in d:
            raise ModuleError(f"missing field {key!r}")
    ring = Ring.parse(d["ring"])
    if "structure" in d:
        X = structure_from_dict(d["structure"])
    elif "structure_path" in d:
        with open(os.path.join(base_dir, d["structure_path"]), "rb") as fh:
            X = load_structure(fh.read())
    elif structure is not None:
        X = structure
    else:
        raise ModuleError("module file names no structure")
    if structure is not None and X != structure:
        raise ModuleError("module structure differs from the given structure")
    return ActionModule(X, ring, int(d["rank"]), d["action"])
