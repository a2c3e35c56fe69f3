"""Finite multishelves given by operation tables.

Carrier elements are 0..n-1 and ``table[x][y]`` is ``x ⊳ y``.  A
multishelf carries several mutually distributive operations, each tagged
with the level (shelf, spindle, rack, quandle) it claims to satisfy.
Construction validates every claim exhaustively.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

LEVELS = ("shelf", "spindle", "rack", "quandle")


class StructureParseError(ValueError):
    pass


class AxiomError(ValueError):
    """An axiom fails; carries the axiom name, operation index and a witness."""

    def __init__(self, axiom, op, witness, detail=""):
        self.axiom = axiom
        self.op = op
        self.witness = witness
        msg = f"{axiom} fails for operation {op} at {witness}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


def _is_idempotent_level(level):
    return level in ("spindle", "quandle")


def _is_invertible_level(level):
    return level in ("rack", "quandle")


def find_axiom_violation(ops, levels):
    """First violated axiom as an :class:`AxiomError`, or None.

    Checks, in order: entry range, self-distributivity, mutual
    distributivity, idempotence and column bijectivity where claimed.
    """
    n = len(ops[0])
    for k, t in enumerate(ops):
        if len(t) != n or any(len(row) != n for row in t):
            return AxiomError("shape", k, None, f"table is not {n}x{n}")
        for x in range(n):
            for y in range(n):
                v = t[x][y]
                if not isinstance(v, int) or not 0 <= v < n:
                    return AxiomError("range", k, (x, y), f"entry {v!r} outside [0, {n})")
    for k, t in enumerate(ops):
        for x, y, z in itertools.product(range(n), repeat=3):
            lhs = t[t[x][y]][z]
            rhs = t[t[x][z]][t[y][z]]
            if lhs != rhs:
                return AxiomError("self-distributivity", k, (x, y, z),
                                  f"(x⊳y)⊳z = {lhs} but (x⊳z)⊳(y⊳z) = {rhs}")
    for i, j in itertools.permutations(range(len(ops)), 2):
        ti, tj = ops[i], ops[j]
        for x, y, z in itertools.product(range(n), repeat=3):
            lhs = tj[ti[x][y]][z]
            rhs = ti[tj[x][z]][tj[y][z]]
            if lhs != rhs:
                return AxiomError("mutual-distributivity", (i, j), (x, y, z),
                                  f"(x⊳_{i}y)⊳_{j}z = {lhs} but (x⊳_{j}z)⊳_{i}(y⊳_{j}z) = {rhs}")
    for k, (t, level) in enumerate(zip(ops, levels)):
        if _is_idempotent_level(level):
            for x in range(n):
                if t[x][x] != x:
                    return AxiomError("idempotence", k, (x,), f"x⊳x = {t[x][x]}")
        if _is_invertible_level(level):
            for y in range(n):
                col = [t[x][y] for x in range(n)]
                if len(set(col)) != n:
                    x1, x2 = next((a, b) for a, b in itertools.combinations(range(n), 2)
                                  if col[a] == col[b])
                    return AxiomError("bijectivity", k, (x1, x2, y),
                                      f"x ↦ x⊳{y} is not injective")
    return None


def strongest_level(table):
    """The strongest level a single table satisfies (None if not a shelf)."""
    if find_axiom_violation([table], ["shelf"]) is not None:
        return None
    n = len(table)
    idem = all(table[x][x] == x for x in range(n))
    bij = all(len({table[x][y] for x in range(n)}) == n for y in range(n))
    if idem and bij:
        return "quandle"
    if bij:
        return "rack"
    return "spindle" if idem else "shelf"


@dataclass(frozen=True)
class Multishelf:
    size: int
    ops: tuple
    levels: tuple
    name: str = ""

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("size must be positive")
        if not self.ops:
            raise ValueError("at least one operation is required")
        ops = tuple(tuple(tuple(row) for row in t) for t in self.ops)
        object.__setattr__(self, "ops", ops)
        object.__setattr__(self, "levels", tuple(self.levels))
        if len(self.levels) != len(ops):
            raise ValueError("one level per operation is required")
        for lv in self.levels:
            if lv not in LEVELS:
                raise ValueError(f"unknown level {lv!r}")
        if any(len(t) != self.size for t in ops):
            raise AxiomError("shape", 0, None, f"tables must be {self.size}x{self.size}")
        err = find_axiom_violation(ops, self.levels)
        if err is not None:
            raise err

    @property
    def nops(self):
        return len(self.ops)

    def op(self, k, x, y):
        return self.ops[k][x][y]

    @property
    def is_spindle(self):
        return all(t[x][x] == x for t in self.ops for x in range(self.size))

    def __str__(self):
        return self.name or f"multishelf(size={self.size}, ops={self.nops})"


def multishelf(tables, levels=None, name=""):
    tables = [[list(r) for r in t] for t in tables]
    if levels is None:
        levels = [strongest_level(t) or "shelf" for t in tables]
    return Multishelf(len(tables[0]), tables, levels, name)


# --------------------------------------------------------------------------
# standard families

def standard_family(name: str, size: int) -> Multishelf:
    if not isinstance(size, int) or size < 1:
        raise ValueError(f"size must be a positive integer, got {size!r}")
    n = size
    if name == "trivial":
        return multishelf([[[x] * n for x in range(n)]], ["quandle"], f"T{n}")
    if name == "dihedral":
        if n < 2:
            raise ValueError("dihedral family needs size >= 2")
        t = [[(2 * y - x) % n for y in range(n)] for x in range(n)]
        return multishelf([t], ["quandle"], f"R{n}")
    if name == "right_projection":
        t = [list(range(n)) for _ in range(n)]
        level = "quandle" if n == 1 else "spindle"
        return multishelf([t], [level], f"RP{n}")
    if name == "trivial_pair":
        t = [[x] * n for x in range(n)]
        return multishelf([t, t], ["quandle", "quandle"], f"T{n}x2")
    raise ValueError(f"unknown family {name!r}")


def adjoin_trivial_op(X: Multishelf) -> Multishelf:
    """Append the trivial operation x▷y = x (revalidated on construction)."""
    t = tuple(tuple([x] * X.size) for x in range(X.size))
    name = f"{X.name}+triv" if X.name else ""
    return Multishelf(X.size, X.ops + (t,), X.levels + ("quandle",), name)


# --------------------------------------------------------------------------
# homomorphisms

@dataclass(frozen=True)
class ShelfHom:
    source: Multishelf
    target: Multishelf
    map: tuple

    def __post_init__(self):
        object.__setattr__(self, "map", tuple(self.map))
        if len(self.map) != self.source.size:
            raise ValueError("map length must equal the source size")
        if any(not 0 <= v < self.target.size for v in self.map):
            raise ValueError("map values must lie in the target")

    def __call__(self, x):
        return self.map[x]

    @property
    def is_bijective(self):
        return self.source.size == self.target.size and len(set(self.map)) == self.source.size

    def compose(self, other: "ShelfHom") -> "ShelfHom":
        """``other ∘ self`` (first self, then other)."""
        if other.source != self.target:
            raise ValueError("maps are not composable")
        return ShelfHom(self.source, other.target, [other.map[v] for v in self.map])


def validate_homomorphism(h: ShelfHom):
    """(True, None) or (False, (k, x, y)) for the first failing triple."""
    X, Y = h.source, h.target
    if X.nops != Y.nops:
        raise ValueError(f"operation counts differ: {X.nops} vs {Y.nops}")
    f = h.map
    for k in range(X.nops):
        s, t = X.ops[k], Y.ops[k]
        for x in range(X.size):
            for y in range(X.size):
                if f[s[x][y]] != t[f[x]][f[y]]:
                    return False, (k, x, y)
    return True, None


def identity_hom(X):
    return ShelfHom(X, X, range(X.size))


def all_homomorphisms(X: Multishelf, Y: Multishelf):
    """Every homomorphism X -> Y, by brute force (lexicographic order of maps)."""
    if X.nops != Y.nops:
        return []
    out = []
    for f in itertools.product(range(Y.size), repeat=X.size):
        h = ShelfHom(X, Y, f)
        if validate_homomorphism(h)[0]:
            out.append(h)
    return out


# --------------------------------------------------------------------------
# structure files
#
# JSON object: {"size": n, "ops": [table, ...], "level": [str, ...], "name": str}
# with every table an n x n list of integers, table[x][y] = x ⊳ y.

def structure_to_dict(X: Multishelf) -> dict:
    d = {"size": X.size, "ops": [[list(r) for r in t] for t in X.ops],
         "level": list(X.levels)}
    if X.name:
        d["name"] = X.name
    return d


def dump_structure(X: Multishelf) -> str:
    return json.dumps(structure_to_dict(X), separators=(",", ":")) + "\n"


def structure_from_dict(d) -> Multishelf:
    if not isinstance(d, dict):
        raise StructureParseError("structure must be a JSON object")
    for key in ("size", "ops", "level"):
        if key not in d:
            raise StructureParseError(f"missing field {key!r}")
    size, ops, levels = d["size"], d["ops"], d["level"]
    if isinstance(levels, str):
        levels = [levels] * (len(ops) if isinstance(ops, list) else 1)
    if not isinstance(size, int) or isinstance(size, bool) or size < 1:
        raise StructureParseError("size must be a positive integer")
    if not isinstance(ops, list) or not ops:
        raise StructureParseError("ops must be a nonempty list of tables")
    if not isinstance(levels, list) or len(levels) != len(ops):
        raise StructureParseError("level must list one entry per operation")
    for k, t in enumerate(ops):
        if (not isinstance(t, list) or len(t) != size
                or any(not isinstance(r, list) or len(r) != size for r in t)):
            raise StructureParseError(f"op {k} is not a {size}x{size} table")
        for r in t:
            for v in r:
                if not isinstance(v, int) or isinstance(v, bool):
                    raise StructureParseError(f"op {k} has a non-integer entry {v!r}")
                if not 0 <= v < size:
                    raise StructureParseError(f"op {k} has entry {v} outside [0, {size})")
    for lv in levels:
        if lv not in LEVELS:
            raise StructureParseError(f"unknown level {lv!r}")
    return Multishelf(size, ops, levels, d.get("name", ""))


def load_structure(data) -> Multishelf:
    """Parse a structure file (bytes or str); raises on parse or axiom errors."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        d = json.loads(data)
    except json.JSONDecodeError as e:
        raise StructureParseError(f"malformed structure file: {e}") from None
    return structure_from_dict(d)


# --------------------------------------------------------------------------
# fixtures

def fixtures(with_adjoined=True) -> dict:
    """Small structures used throughout the checks, keyed by name."""
    base = [
        standard_family("trivial", 1),
        standard_family("trivial", 2),
        standard_family("trivial", 3),
        standard_family("dihedral", 3),
        standard_family("right_projection", 2),
    ]
    out = {X.name: X for X in base}
    if with_adjoined:
        for X in base:
            Y = adjoin_trivial_op(X)
            out[Y.name] = Y
    return out


def fixture(name: str) -> Multishelf:
    fx = fixtures()
    if name not in fx:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(fx)}")
    return fx[name]
