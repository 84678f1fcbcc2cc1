"""Finite additively idempotent semirings as pairs of Cayley tables.

Elements are the indices 0..n-1; ``add`` and ``mul`` are n x n tables of
element indices. Tables are immutable tuples so algebras are hashable
and safe to share between workers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

Table = tuple[tuple[int, ...], ...]


class TableFormatError(ValueError):
    """Structurally malformed table: wrong shape or out-of-range entry."""


class AxiomError(ValueError):
    """The structure is not an additively idempotent semiring."""

    def __init__(self, report: "AxiomReport", name: str | None):
        self.report = report
        label = name or "algebra"
        super().__init__(f"{label} fails: {', '.join(report.failed_laws())}")


class CongruenceError(ValueError):
    """The supplied partition is not compatible with the operations."""


class ResourceBudgetError(RuntimeError):
    """A configured search/evaluation budget was exhausted (not a verdict)."""


LAWS = (
    "commutative_add",
    "idempotent_add",
    "associative_add",
    "associative_mul",
    "left_distributive",
    "right_distributive",
)


@dataclass(frozen=True)
class AxiomReport:
    commutative_add: bool
    idempotent_add: bool
    associative_add: bool
    associative_mul: bool
    left_distributive: bool
    right_distributive: bool
    witnesses: dict[str, tuple[int, ...]] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(getattr(self, law) for law in LAWS)

    def failed_laws(self) -> list[str]:
        return [law for law in LAWS if not getattr(self, law)]


def _freeze_table(rows: Iterable[Sequence[int]], n: int, which: str) -> Table:
    out = []
    for row in rows:
        row = tuple(int(x) for x in row)
        if len(row) != n:
            raise TableFormatError(f"{which} row has length {len(row)}, expected {n}")
        for x in row:
            if not 0 <= x < n:
                raise TableFormatError(f"{which} entry {x} out of range 0..{n - 1}")
        out.append(row)
    if len(out) != n:
        raise TableFormatError(f"{which} has {len(out)} rows, expected {n}")
    return tuple(out)


class FiniteAlgebra:
    """Carrier 0..n-1 with addition and multiplication tables.

    Construction only checks table shape; semantic validation runs on
    first use (or via :meth:`validate`) and is cached. Operations that
    assume the axioms refuse algebras that fail them.
    """

    __slots__ = ("order", "add", "mul", "name", "_report")

    def __init__(self, order: int, add, mul, name: str | None = None):
        if order < 1:
            raise TableFormatError("order must be positive")
        self.order = order
        self.add = _freeze_table(add, order, "add")
        self.mul = _freeze_table(mul, order, "mul")
        self.name = name
        self._report: AxiomReport | None = None

    # -- identity is table identity; names are labels only
    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FiniteAlgebra)
            and self.order == other.order
            and self.add == other.add
            and self.mul == other.mul
        )

    def __hash__(self) -> int:
        return hash((self.order, self.add, self.mul))

    def __repr__(self) -> str:
        label = self.name or f"order-{self.order}"
        return f"FiniteAlgebra({label})"

    @property
    def is_validated(self) -> bool:
        return self._report is not None and self._report.ok

    def axiom_report(self) -> AxiomReport:
        if self._report is None:
            self._report = verify_axioms(self)
        return self._report

    def validate(self) -> "FiniteAlgebra":
        """Check the axioms (cached); raise AxiomError on failure."""
        report = self.axiom_report()
        if not report.ok:
            raise AxiomError(report, self.name)
        return self

    def renamed(self, name: str | None) -> "FiniteAlgebra":
        other = FiniteAlgebra(self.order, self.add, self.mul, name)
        other._report = self._report
        return other


def verify_axioms(a: FiniteAlgebra) -> AxiomReport:
    """Exhaustively check the six defining laws.

    Witnesses record the first failing tuple in row-major scan order,
    keyed by law name.
    """
    n, add, mul = a.order, a.add, a.mul
    flags = dict.fromkeys(LAWS, True)
    witnesses: dict[str, tuple[int, ...]] = {}

    def fail(law: str, witness: tuple[int, ...]):
        if flags[law]:
            flags[law] = False
            witnesses[law] = witness

    rng = range(n)
    for x in rng:
        if add[x][x] != x:
            fail("idempotent_add", (x,))
    for x in rng:
        for y in rng:
            if add[x][y] != add[y][x]:
                fail("commutative_add", (x, y))
    for x in rng:
        for y in rng:
            for z in rng:
                if add[add[x][y]][z] != add[x][add[y][z]]:
                    fail("associative_add", (x, y, z))
                if mul[mul[x][y]][z] != mul[x][mul[y][z]]:
                    fail("associative_mul", (x, y, z))
                if mul[x][add[y][z]] != add[mul[x][y]][mul[x][z]]:
                    fail("left_distributive", (x, y, z))
                if mul[add[x][y]][z] != add[mul[x][z]][mul[y][z]]:
                    fail("right_distributive", (x, y, z))
    return AxiomReport(witnesses=witnesses, **flags)


@dataclass(frozen=True)
class OrderRelation:
    """The natural partial order: a <= b iff a + b = b."""

    leq: tuple[tuple[bool, ...], ...]

    def is_leq(self, a: int, b: int) -> bool:
        return self.leq[a][b]

    def top(self) -> int:
        n = len(self.leq)
        for b in range(n):
            if all(self.leq[a][b] for a in range(n)):
                return b
        raise ValueError("no top element")  # impossible for a validated algebra


def natural_order(a: FiniteAlgebra) -> OrderRelation:
    a.validate()
    n, add = a.order, a.add
    return OrderRelation(
        tuple(tuple(add[x][y] == y for y in range(n)) for x in range(n))
    )


def direct_product(a: FiniteAlgebra, b: FiniteAlgebra) -> FiniteAlgebra:
    """Componentwise product on pairs, encoded as i*|b| + j."""
    a.validate()
    b.validate()
    m = b.order

    def enc(i: int, j: int) -> int:
        return i * m + j

    pairs = [(i, j) for i in range(a.order) for j in range(m)]
    add = [[enc(a.add[i][k], b.add[j][l]) for (k, l) in pairs] for (i, j) in pairs]
    mul = [[enc(a.mul[i][k], b.mul[j][l]) for (k, l) in pairs] for (i, j) in pairs]
    name = f"{a.name or '?'}x{b.name or '?'}"
    return FiniteAlgebra(len(pairs), add, mul, name).validate()


def subalgebra_generated(
    a: FiniteAlgebra, seed: Iterable[int]
) -> tuple[tuple[int, ...], FiniteAlgebra]:
    """Close the seed under both operations.

    Returns the closed subset (in order of first appearance, seed first)
    and the induced algebra relabeled along that order.
    """
    a.validate()
    elements = list(dict.fromkeys(seed))
    if not elements:
        raise ValueError("seed must be nonempty")
    for e in elements:
        if not 0 <= e < a.order:
            raise ValueError(f"seed element {e} out of range")
    seen = set(elements)
    queue = list(elements)
    while queue:
        x = queue.pop(0)
        for y in list(elements):
            for z in (a.add[x][y], a.add[y][x], a.mul[x][y], a.mul[y][x]):
                if z not in seen:
                    seen.add(z)
                    elements.append(z)
                    queue.append(z)
    index = {e: i for i, e in enumerate(elements)}
    add = [[index[a.add[x][y]] for y in elements] for x in elements]
    mul = [[index[a.mul[x][y]] for y in elements] for x in elements]
    sub = FiniteAlgebra(len(elements), add, mul).validate()
    return tuple(elements), sub


@dataclass(frozen=True)
class Congruence:
    """A partition given as a block index per element, blocks numbered
    by first appearance."""

    block_of: tuple[int, ...]

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]], order: int) -> "Congruence":
        assignment = [-1] * order
        for i, block in enumerate(blocks):
            for e in block:
                if not 0 <= e < order:
                    raise ValueError(f"element {e} out of range")
                if assignment[e] != -1:
                    raise ValueError(f"element {e} in two blocks")
                assignment[e] = i
        if -1 in assignment:
            raise ValueError("partition does not cover the carrier")
        # renumber blocks by first appearance so the encoding is canonical
        remap: dict[int, int] = {}
        out = []
        for b in assignment:
            if b not in remap:
                remap[b] = len(remap)
            out.append(remap[b])
        return cls(tuple(out))

    @property
    def block_count(self) -> int:
        return max(self.block_of) + 1


def congruence_quotient(a: FiniteAlgebra, c: Congruence) -> FiniteAlgebra:
    """Quotient by a congruence; raises CongruenceError naming a violating
    pair if the partition is not compatible with some operation."""
    a.validate()
    if len(c.block_of) != a.order:
        raise ValueError("partition size does not match the carrier")
    blk = c.block_of
    n = a.order
    for x in range(n):
        for y in range(n):
            if blk[x] != blk[y]:
                continue
            for z in range(n):
                for op, table in (("add", a.add), ("mul", a.mul)):
                    if blk[table[x][z]] != blk[table[y][z]]:
                        raise CongruenceError(
                            f"{op}({x},{z}) and {op}({y},{z}) land in different blocks"
                        )
                    if blk[table[z][x]] != blk[table[z][y]]:
                        raise CongruenceError(
                            f"{op}({z},{x}) and {op}({z},{y}) land in different blocks"
                        )
    k = c.block_count
    rep = [blk.index(b) for b in range(k)]
    add = [[blk[a.add[rep[i]][rep[j]]] for j in range(k)] for i in range(k)]
    mul = [[blk[a.mul[rep[i]][rep[j]]] for j in range(k)] for i in range(k)]
    return FiniteAlgebra(k, add, mul).validate()


def dual(a: FiniteAlgebra) -> FiniteAlgebra:
    """Same addition, transposed multiplication."""
    a.validate()
    n = a.order
    mul = [[a.mul[y][x] for y in range(n)] for x in range(n)]
    name = f"dual({a.name})" if a.name else None
    return FiniteAlgebra(n, a.add, mul, name).validate()


def relabel(a: FiniteAlgebra, perm: Sequence[int]) -> FiniteAlgebra:
    """Rename element x to perm[x] in both tables."""
    n = a.order
    if sorted(perm) != list(range(n)):
        raise ValueError("not a permutation of the carrier")
    inv = [0] * n
    for x, px in enumerate(perm):
        inv[px] = x
    add = [[perm[a.add[inv[i]][inv[j]]] for j in range(n)] for i in range(n)]
    mul = [[perm[a.mul[inv[i]][inv[j]]] for j in range(n)] for i in range(n)]
    return FiniteAlgebra(n, add, mul, a.name)


# ---------------------------------------------------------------------------
# canonical forms and isomorphism


@dataclass(frozen=True)
class CanonicalForm:
    """Lexicographically least (add || mul) row-major flattening over all
    relabelings, plus one permutation that achieves it."""

    key: tuple[int, ...]
    perm: tuple[int, ...]


def _flatten(tables: Sequence[Table], n: int, perm: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * n
    for x, px in enumerate(perm):
        inv[px] = x
    out = []
    for t in tables:
        for i in range(n):
            row = t[inv[i]]
            out.extend(perm[row[inv[j]]] for j in range(n))
    return tuple(out)


def canonical_tables(tables: Sequence[Table], n: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Minimal flattening of the given tables over all relabelings.

    Branch and bound over the inverse permutation: a branch dies as soon
    as some fully-determined prefix cell already exceeds the best known
    key. Returns (key, permutation old->new); ties on the key pick the
    lexicographically least permutation.
    """
    if n == 1:
        return _flatten(tables, 1, (0,)), (0,)

    best_key = _flatten(tables, n, tuple(range(n)))
    best_perm = tuple(range(n))
    cells = [(ti, i, j) for ti in range(len(tables)) for i in range(n) for j in range(n)]

    def descend(chosen: list[int], used: set[int]):
        nonlocal best_key, best_perm
        r = len(chosen)
        if r == n:
            perm = [0] * n
            for new, old in enumerate(chosen):
                perm[old] = new
            key = _flatten(tables, n, perm)
            if key < best_key or (key == best_key and tuple(perm) < best_perm):
                best_key, best_perm = key, tuple(perm)
            return
        pos = {old: new for new, old in enumerate(chosen)}
        for nxt in range(n):
            if nxt in used:
                continue
            pos[nxt] = r
            # Compare determined prefix cells against the best key; stop at
            # the first undetermined or unequal cell. Pruning on ">" is
            # sound because all earlier cells compared equal.
            prune = False
            for idx, (ti, i, j) in enumerate(cells):
                if i > r or j > r:
                    break
                src = tables[ti][chosen[i] if i < r else nxt][chosen[j] if j < r else nxt]
                val = pos.get(src)
                if val is None:
                    break
                if val != best_key[idx]:
                    prune = val > best_key[idx]
                    break
            del pos[nxt]
            if not prune:
                descend(chosen + [nxt], used | {nxt})

    descend([], set())
    return best_key, best_perm


def canonical_form(a: FiniteAlgebra) -> CanonicalForm:
    key, perm = canonical_tables((a.add, a.mul), a.order)
    return CanonicalForm(key, perm)


def are_isomorphic(
    a: FiniteAlgebra, b: FiniteAlgebra
) -> tuple[bool, tuple[int, ...] | None]:
    """Decide isomorphism via canonical forms; on success also return a
    permutation carrying a onto b."""
    if a.order != b.order:
        return False, None
    ca, cb = canonical_form(a), canonical_form(b)
    if ca.key != cb.key:
        return False, None
    inv_b = [0] * b.order
    for x, px in enumerate(cb.perm):
        inv_b[px] = x
    witness = tuple(inv_b[ca.perm[x]] for x in range(a.order))
    moved = relabel(a, witness)
    assert moved.add == b.add and moved.mul == b.mul
    return True, witness


def automorphisms(tables: Sequence[Table], n: int) -> list[tuple[int, ...]]:
    """All permutations preserving every given table (identity included)."""
    out = []
    for perm in itertools.permutations(range(n)):
        if all(
            perm[t[x][y]] == t[perm[x]][perm[y]]
            for t in tables
            for x in range(n)
            for y in range(n)
        ):
            out.append(perm)
    return out


def find_subalgebra_isomorphic(
    a: FiniteAlgebra, target: FiniteAlgebra
) -> tuple[int, ...] | None:
    """Lexicographically least closed subset of `a` inducing an algebra
    isomorphic to `target`, or None."""
    a.validate()
    target.validate()
    k = target.order
    if k > a.order:
        return None
    for subset in itertools.combinations(range(a.order), k):
        inside = set(subset)
        if any(
            a.add[x][y] not in inside or a.mul[x][y] not in inside
            for x in subset
            for y in subset
        ):
            continue
        index = {e: i for i, e in enumerate(subset)}
        add = [[index[a.add[x][y]] for y in subset] for x in subset]
        mul = [[index[a.mul[x][y]] for y in subset] for x in subset]
        induced = FiniteAlgebra(k, add, mul)
        if are_isomorphic(induced, target)[0]:
            return subset
    return None


TRIVIAL = FiniteAlgebra(1, ((0,),), ((0,),), "trivial").validate()
