"""Finitely generated varieties: free algebras, membership, lattices.

Membership uses the classic finite decision procedure: a candidate A
with carrier a_0..a_{k-1} lies in the variety generated by S_1..S_m iff
the map sending the free generator x_i to a_i is well defined on the
relatively free algebra of rank k = |A|. That free algebra is realized
inside the product of copies of the generators, one copy per assignment
of k variables; its elements are evaluation vectors, each carrying one
witness term.

Vectors are packed into bytes and the componentwise operations run
through int/bytes translation tables, which keeps rank-4 free algebras
over 4-element generators comfortably fast in pure Python. Generators
whose combined carrier exceeds 16 elements fall back to a plain tuple
representation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .algebra import FiniteAlgebra, ResourceBudgetError
from .satisfaction import CATALOG, satisfies
from .terms import Identity, TermNF

DEFAULT_CLOSURE_LIMIT = 10**7
DEFAULT_CELL_LIMIT = 10**7


@dataclass(frozen=True)
class VarietySpec:
    """A variety presented by finitely many finite generators."""

    label: str
    generators: tuple[FiniteAlgebra, ...]

    def __post_init__(self):
        if not self.generators:
            raise ValueError("a variety spec needs at least one generator")
        for g in self.generators:
            g.validate()

    def key(self) -> tuple:
        return tuple((g.order, g.add, g.mul) for g in self.generators)


def _variable(i: int) -> str:
    return f"x{i + 1}"


class _Universe:
    """The rank-k free algebra of V(generators), with witnesses.

    Elements are indexed in discovery order of the deterministic
    closure; `add_tab`/`mul_tab` are complete operation tables on those
    indices.
    """

    def __init__(self, generators, k, closure_limit, cell_limit):
        self.generators = generators
        self.k = k
        blocks = []
        offset = 0
        width = 0
        for g in generators:
            count = g.order**k
            blocks.append((g, offset, count))
            width += count
            offset += g.order
        self.alphabet = offset
        self.width = width
        if width * max(1, k) > cell_limit:
            raise ResourceBudgetError(
                f"evaluation vectors of length {width} exceed the cell budget"
            )
        self._packed = self.alphabet <= 16
        if self._packed:
            self._add_pair, self._mul_pair = self._pair_tables(blocks)
        else:
            self._add_map, self._mul_map = self._pair_dicts(blocks)

        seeds = self._seed_vectors(blocks)
        self._close(seeds, closure_limit, cell_limit)

    # -- vector construction -------------------------------------------------

    def _seed_vectors(self, blocks):
        seeds = []
        for i in range(self.k):
            entries = []
            for g, offset, _count in blocks:
                for assignment in itertools.product(range(g.order), repeat=self.k):
                    entries.append(offset + assignment[i])
            seeds.append(self._pack(entries))
        return seeds

    def _pack(self, entries):
        return bytes(entries) if self._packed else tuple(entries)

    def decode(self, vector) -> tuple[int, ...]:
        """Vector entries as local generator elements (offsets removed)."""
        out = []
        pos = 0
        for g, offset, count in self._blocks_for_decode():
            for _ in range(count):
                out.append(vector[pos] - offset)
                pos += 1
        return tuple(out)

    def _blocks_for_decode(self):
        blocks = []
        offset = 0
        for g in self.generators:
            blocks.append((g, offset, g.order**self.k))
            offset += g.order
        return blocks

    def _pair_tables(self, blocks):
        add = bytearray(256)
        mul = bytearray(256)
        for g, offset, _count in blocks:
            for a in range(g.order):
                for b in range(g.order):
                    code = (offset + a) << 4 | (offset + b)
                    add[code] = offset + g.add[a][b]
                    mul[code] = offset + g.mul[a][b]
        return bytes(add), bytes(mul)

    def _pair_dicts(self, blocks):
        add: dict[tuple[int, int], int] = {}
        mul: dict[tuple[int, int], int] = {}
        for g, offset, _count in blocks:
            for a in range(g.order):
                for b in range(g.order):
                    add[offset + a, offset + b] = offset + g.add[a][b]
                    mul[offset + a, offset + b] = offset + g.mul[a][b]
        return add, mul

    def vec_add(self, u, v):
        if self._packed:
            iu = int.from_bytes(u, "big")
            iv = int.from_bytes(v, "big")
            paired = (iu << 4 | iv).to_bytes(self.width, "big")
            return paired.translate(self._add_pair)
        return tuple(self._add_map[a, b] for a, b in zip(u, v))

    def vec_mul(self, u, v):
        if self._packed:
            iu = int.from_bytes(u, "big")
            iv = int.from_bytes(v, "big")
            paired = (iu << 4 | iv).to_bytes(self.width, "big")
            return paired.translate(self._mul_pair)
        return tuple(self._mul_map[a, b] for a, b in zip(u, v))

    # -- closure --------------------------------------------------------------

    def _close(self, seeds, closure_limit, cell_limit):
        """Worklist closure of the seed vectors under both operations.

        Elements are indexed in discovery order (seeds first, then new
        vectors as the deterministic add/mul/mul-flipped sweep produces
        them); each element records how it was first derived, so witness
        terms can be rebuilt on demand without allocating terms here.
        """
        vectors: list = []
        parents: list[tuple] = []  # ("x", i) or ("+"/"*", left_idx, right_idx)
        index: dict = {}
        for i, vec in enumerate(seeds):
            if vec not in index:
                index[vec] = len(vectors)
                vectors.append(vec)
                parents.append(("x", i, -1))
        pos = 0
        while pos < len(vectors):
            u = vectors[pos]
            for j in range(pos + 1):
                v = vectors[j]
                for vec, op, left, right in (
                    (self.vec_add(u, v), "+", pos, j),
                    (self.vec_mul(u, v), "*", pos, j),
                    (self.vec_mul(v, u), "*", j, pos),
                ):
                    if vec not in index:
                        if (
                            len(vectors) >= closure_limit
                            or (len(vectors) + 1) * self.width > cell_limit
                        ):
                            raise ResourceBudgetError(
                                "free-algebra closure exceeded the configured budget"
                            )
                        index[vec] = len(vectors)
                        vectors.append(vec)
                        parents.append((op, left, right))
            pos += 1
        self.vectors = vectors
        self.index = index
        self._parents = parents
        self._witnesses: dict[int, TermNF] = {}
        size = len(vectors)
        self.add_tab = [[0] * size for _ in range(size)]
        self.mul_tab = [[0] * size for _ in range(size)]
        for i in range(size):
            for j in range(i, size):
                s = index[self.vec_add(vectors[i], vectors[j])]
                self.add_tab[i][j] = s
                self.add_tab[j][i] = s
            for j in range(size):
                self.mul_tab[i][j] = index[self.vec_mul(vectors[i], vectors[j])]
        self.seed_ids = [index[v] for v in seeds]

    def witness(self, idx: int) -> TermNF:
        """A term that evaluates to element idx, following its first
        derivation."""
        hit = self._witnesses.get(idx)
        if hit is not None:
            return hit
        op, left, right = self._parents[idx]
        if op == "x":
            term = TermNF([(_variable(left),)])
        elif op == "+":
            term = self.witness(left) + self.witness(right)
        else:
            term = self.witness(left) * self.witness(right)
        self._witnesses[idx] = term
        return term

    @property
    def size(self) -> int:
        return len(self.vectors)


_universe_cache: dict[tuple, _Universe] = {}


def _universe(
    generators: tuple[FiniteAlgebra, ...],
    k: int,
    closure_limit: int = DEFAULT_CLOSURE_LIMIT,
    cell_limit: int = DEFAULT_CELL_LIMIT,
) -> _Universe:
    key = (tuple((g.order, g.add, g.mul) for g in generators), k)
    width = sum(g.order**k for g in generators)
    if width * max(1, k) > cell_limit:
        raise ResourceBudgetError(
            f"evaluation vectors of length {width} exceed the cell budget"
        )
    if key not in _universe_cache:
        _universe_cache[key] = _Universe(generators, k, closure_limit, cell_limit)
    uni = _universe_cache[key]
    # enforce the caller's budget even when the closure is already cached,
    # so budget errors do not depend on call order
    if uni.size > closure_limit or uni.size * width > cell_limit:
        raise ResourceBudgetError(
            f"free-algebra closure of size {uni.size} exceeds the configured budget"
        )
    return uni


@dataclass(frozen=True)
class FreeAlgebraResult:
    """Relatively free algebra of a variety on k generators.

    `witnesses[i]` is a term that evaluates to element i under every
    interpretation; `vectors[i]` is its evaluation vector over all
    generator assignments (entries are generator elements, blocks in
    generator order, assignments in lexicographic order).
    """

    algebra: FiniteAlgebra
    rank: int
    witnesses: tuple[TermNF, ...]
    vectors: tuple[tuple[int, ...], ...]


def free_algebra(
    spec: VarietySpec,
    k: int,
    closure_limit: int = DEFAULT_CLOSURE_LIMIT,
    cell_limit: int = DEFAULT_CELL_LIMIT,
) -> FreeAlgebraResult:
    if k < 1:
        raise ValueError("rank must be positive")
    uni = _universe(spec.generators, k, closure_limit, cell_limit)
    algebra = FiniteAlgebra(
        uni.size, uni.add_tab, uni.mul_tab, f"F({spec.label},{k})"
    )
    if algebra.order <= 100:
        algebra.validate()
    return FreeAlgebraResult(
        algebra=algebra,
        rank=k,
        witnesses=tuple(uni.witness(i) for i in range(uni.size)),
        vectors=tuple(uni.decode(v) for v in uni.vectors),
    )


@dataclass(frozen=True)
class MembershipResult:
    """Outcome of the Birkhoff membership test.

    When `member` is false, `separating_identity` holds in every
    generator of the variety and fails in the candidate under
    `assignment` (variable x{i+1} denotes carrier element i).
    """

    member: bool
    separating_identity: Identity | None
    assignment: dict[str, int]

    def __bool__(self) -> bool:
        return self.member


_member_cache: dict[tuple, MembershipResult] = {}


def member(
    a: FiniteAlgebra,
    spec: VarietySpec,
    closure_limit: int = DEFAULT_CLOSURE_LIMIT,
    cell_limit: int = DEFAULT_CELL_LIMIT,
) -> MembershipResult:
    """Decide whether `a` lies in the variety generated by the spec.

    Pairs each free-algebra element with its value in `a`; the induced
    map x_i -> a_i is well defined exactly when no free element receives
    two values, and a clash yields the separating identity.
    """
    a.validate()
    k = a.order
    uni = _universe(spec.generators, k, closure_limit, cell_limit)
    cache_key = ((a.order, a.add, a.mul), spec.key())
    hit = _member_cache.get(cache_key)
    if hit is not None:
        return hit
    assignment = {_variable(i): i for i in range(k)}

    # Walk pairs (free element, candidate value); derivations are kept as
    # parent pointers and turned into terms only if a clash shows up.
    values: dict[int, int] = {}
    settled: list[int] = []
    derivation: dict[int, tuple] = {}
    pending: list[tuple[int, int, tuple]] = [
        (fid, i, ("x", i, -1)) for i, fid in enumerate(uni.seed_ids)
    ]

    def term_of(parent: tuple) -> TermNF:
        op, left, right = parent
        if op == "x":
            return TermNF([(_variable(left),)])
        lt = term_of(derivation[left])
        rt = term_of(derivation[right])
        return lt + rt if op == "+" else lt * rt

    result = None
    pos = 0
    while pos < len(pending):
        fid, val, parent = pending[pos]
        pos += 1
        if fid in values:
            if values[fid] != val:
                separating = Identity(term_of(derivation[fid]), term_of(parent))
                result = MembershipResult(False, separating, assignment)
                break
            continue
        values[fid] = val
        derivation[fid] = parent
        settled.append(fid)
        add_row, mul_row = uni.add_tab[fid], uni.mul_tab[fid]
        for other in settled:
            oval = values[other]
            pending.append((add_row[other], a.add[val][oval], ("+", fid, other)))
            pending.append((mul_row[other], a.mul[val][oval], ("*", fid, other)))
            pending.append((uni.mul_tab[other][fid], a.mul[oval][val], ("*", other, fid)))
    if result is None:
        result = MembershipResult(True, None, assignment)
    _member_cache[cache_key] = result
    return result


EQUAL = "equal"
LEFT_IN_RIGHT = "left-in-right"
RIGHT_IN_LEFT = "right-in-left"
INCOMPARABLE = "incomparable"


def compare(v1: VarietySpec, v2: VarietySpec, **budgets) -> str:
    """Mutual inclusion of two finitely generated varieties.

    V2 contains V1 iff every generator of V1 is a member of V2.
    """
    left_in_right = all(member(g, v2, **budgets).member for g in v1.generators)
    right_in_left = all(member(g, v1, **budgets).member for g in v2.generators)
    if left_in_right and right_in_left:
        return EQUAL
    if left_in_right:
        return LEFT_IN_RIGHT
    if right_in_left:
        return RIGHT_IN_LEFT
    return INCOMPARABLE


class LatticeIncompleteError(ValueError):
    """The given spec list is not closed or not a lattice; carries the
    offending pair as evidence."""


@dataclass(frozen=True)
class VarietyLattice:
    specs: tuple[VarietySpec, ...]
    leq: tuple[tuple[bool, ...], ...]
    hasse_edges: tuple[tuple[int, int], ...]
    join_table: tuple[tuple[int, ...], ...]
    meet_table: tuple[tuple[int, ...], ...]
    distributive: bool

    def labels(self) -> tuple[str, ...]:
        return tuple(s.label for s in self.specs)

    def bottom(self) -> int:
        for i in range(len(self.specs)):
            if all(self.leq[i][j] for j in range(len(self.specs))):
                return i
        raise LatticeIncompleteError("no least element")

    def atoms(self) -> tuple[int, ...]:
        bot = self.bottom()
        return tuple(j for i, j in self.hasse_edges if i == bot)


def build_lattice(specs: list[VarietySpec], **budgets) -> VarietyLattice:
    """Inclusion order, covers, joins, meets and distributivity of a
    finite family of variety specs.

    Joins are computed semantically (union of generator lists) and must
    land on a listed spec; a join or meet escaping the list raises
    LatticeIncompleteError with the offending pair.
    """
    m = len(specs)
    rel = [[None] * m for _ in range(m)]
    for i in range(m):
        for j in range(m):
            if i == j:
                rel[i][j] = EQUAL
            elif j > i:
                rel[i][j] = compare(specs[i], specs[j], **budgets)
            else:
                flipped = {
                    EQUAL: EQUAL,
                    LEFT_IN_RIGHT: RIGHT_IN_LEFT,
                    RIGHT_IN_LEFT: LEFT_IN_RIGHT,
                    INCOMPARABLE: INCOMPARABLE,
                }
                rel[i][j] = flipped[rel[j][i]]
    for i in range(m):
        for j in range(i + 1, m):
            if rel[i][j] == EQUAL:
                raise LatticeIncompleteError(
                    f"specs {specs[i].label!r} and {specs[j].label!r} "
                    "generate the same variety"
                )
    leq = tuple(
        tuple(rel[i][j] in (EQUAL, LEFT_IN_RIGHT) for j in range(m)) for i in range(m)
    )

    hasse = []
    for i in range(m):
        for j in range(m):
            if i == j or not leq[i][j]:
                continue
            if any(k not in (i, j) and leq[i][k] and leq[k][j] for k in range(m)):
                continue
            hasse.append((i, j))

    # The semantic join is V(generators of both). If it is listed at all
    # it must be the least listed upper bound, so that single candidate
    # is checked for equality; anything else means the join escapes.
    join_table = [[0] * m for _ in range(m)]
    for i in range(m):
        for j in range(i, m):
            if leq[i][j]:
                join_table[i][j] = join_table[j][i] = j
                continue
            if leq[j][i]:
                join_table[i][j] = join_table[j][i] = i
                continue
            upper = [t for t in range(m) if leq[i][t] and leq[j][t]]
            least = None
            for t in upper:
                if all(leq[t][s] for s in upper):
                    least = t
                    break
            merged = VarietySpec(
                f"{specs[i].label}+{specs[j].label}",
                specs[i].generators + specs[j].generators,
            )
            if least is None or compare(merged, specs[least], **budgets) != EQUAL:
                raise LatticeIncompleteError(
                    f"join of {specs[i].label!r} and {specs[j].label!r} "
                    "is not among the listed specs"
                )
            join_table[i][j] = join_table[j][i] = least

    meet_table = [[0] * m for _ in range(m)]
    for i in range(m):
        for j in range(m):
            lower = [t for t in range(m) if leq[t][i] and leq[t][j]]
            best = None
            for t in lower:
                if all(leq[s][t] for s in lower):
                    best = t
                    break
            if best is None:
                raise LatticeIncompleteError(
                    f"meet of {specs[i].label!r} and {specs[j].label!r} "
                    "does not exist in the listed order"
                )
            meet_table[i][j] = best

    distributive = all(
        meet_table[x][join_table[y][z]]
        == join_table[meet_table[x][y]][meet_table[x][z]]
        for x in range(m)
        for y in range(m)
        for z in range(m)
    )
    return VarietyLattice(
        specs=tuple(specs),
        leq=leq,
        hasse_edges=tuple(sorted(hasse)),
        join_table=tuple(tuple(row) for row in join_table),
        meet_table=tuple(tuple(row) for row in meet_table),
        distributive=distributive,
    )


# ---------------------------------------------------------------------------
# the ten standard subvarieties of the row-constant class


def standard_subvariety_specs() -> list[VarietySpec]:
    from . import catalog

    g = catalog.get
    return [
        VarietySpec("T", (g("trivial"),)),
        VarietySpec("V(L2)", (g("L2"),)),
        VarietySpec("V(N2)", (g("N2"),)),
        VarietySpec("V(T2)", (g("T2"),)),
        VarietySpec("V(L2,N2)", (g("L2"), g("N2"))),
        VarietySpec("V(N2,T2)", (g("N2"), g("T2"))),
        VarietySpec("V(L2,T2)", (g("L2"), g("T2"))),
        VarietySpec("V(L2,N2,T2)", (g("L2"), g("N2"), g("T2"))),
        VarietySpec("V(S58)", (g("S58"),)),
        VarietySpec("R", (g("S4_475"),)),
    ]


# Expected satisfaction pattern on (L, N, T, lt03, lnt02) for each of the
# ten varieties; an algebra in the row-constant class must land on one
# of these.
CLASSIFICATION_PATTERNS: dict[tuple[bool, ...], str] = {
    (True, True, True, True, True): "T",
    (False, True, True, True, True): "V(L2)",
    (True, False, True, False, True): "V(N2)",
    (True, True, False, True, True): "V(T2)",
    (False, False, True, False, True): "V(L2,N2)",
    (True, False, False, False, True): "V(N2,T2)",
    (False, True, False, True, True): "V(L2,T2)",
    (False, False, False, False, True): "V(L2,N2,T2)",
    (False, True, False, False, False): "V(S58)",
    (False, False, False, False, False): "R",
}

_PATTERN_LABELS = ("L", "N", "T", "lt03", "lnt02")


class ClassificationError(ValueError):
    """An algebra's satisfaction pattern escapes the ten known
    subvarieties, or the two classification routes disagree; carries the
    algebra as a finding."""

    def __init__(self, message: str, algebra: FiniteAlgebra):
        super().__init__(message)
        self.algebra = algebra


def classify_generated(a: FiniteAlgebra, cross_validate: bool = True) -> str:
    """Label of the variety generated by a row-constant algebra.

    Computes the satisfaction pattern on the five separating identities
    and, unless disabled, cross-checks it against the least of the ten
    standard specs containing the algebra by the membership test.
    """
    a.validate()
    if not satisfies(a, CATALOG["id0703"][0]).holds:
        raise ValueError("classification requires an algebra satisfying xy = xz")
    pattern = tuple(
        satisfies(a, CATALOG[label][0]).holds for label in _PATTERN_LABELS
    )
    label = CLASSIFICATION_PATTERNS.get(pattern)
    if label is None:
        raise ClassificationError(
            f"satisfaction pattern {pattern} on {_PATTERN_LABELS} matches none "
            "of the ten known subvarieties",
            a,
        )
    if cross_validate:
        specs = standard_subvariety_specs()
        containing = [i for i, s in enumerate(specs) if member(a, s).member]
        leq = _standard_inclusion()
        least = None
        for i in containing:
            if all(leq[i][j] for j in containing):
                least = i
                break
        if least is None or specs[least].label != label:
            got = specs[least].label if least is not None else "none"
            raise ClassificationError(
                f"pattern route gives {label!r} but membership route gives {got!r}",
                a,
            )
    return label


@lru_cache(maxsize=1)
def _standard_inclusion() -> tuple[tuple[bool, ...], ...]:
    specs = standard_subvariety_specs()
    m = len(specs)
    out = []
    for i in range(m):
        row = []
        for j in range(m):
            row.append(
                i == j or compare(specs[i], specs[j]) in (EQUAL, LEFT_IN_RIGHT)
            )
        out.append(tuple(row))
    return tuple(out)
