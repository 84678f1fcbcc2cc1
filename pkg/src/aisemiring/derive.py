"""Bounded equational derivations with replayable proof objects.

A rewrite step applies a substitution instance of a basis identity (in
either direction) at an occurrence inside a normal-form term: either a
subset of summands or a factor span inside one word. Renormalization
after each step absorbs the ai-semiring axioms themselves, so only the
basis identities appear as rewrite rules. Because summands form a set,
a step may keep the matched occurrence alongside the replacement
(additive idempotency) or replace it.

`derive_bounded` searches for a rewrite chain from one side of the
target to the other by iterative deepening; if no direct chain exists
within the depth bound it falls back to the sum decomposition, proving
each absorption piece separately and assembling the results with
congruence and transitivity steps. Either way the result replays
step by step, independently of the search.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .terms import (
    DecomposedPiece,
    Identity,
    TermNF,
    Word,
    decompose_identity,
    parse_identity,
    substitute,
    word_str,
)


class DeriveError(ValueError):
    pass


@dataclass(frozen=True)
class Occurrence:
    """Where a rewrite happened.

    mode "summands": `matched` lists the words of the matched instance.
    mode "factor": the span `span` inside the word `word` was matched.
    `keep` records whether the matched occurrence stayed in place
    (idempotent duplication) or was removed.
    """

    mode: str
    keep: bool
    matched: tuple[Word, ...] = ()
    word: Word | None = None
    span: tuple[int, int] | None = None


@dataclass(frozen=True)
class ProofStep:
    kind: str
    result: Identity
    premises: tuple[int, ...] = ()
    axiom: str | None = None
    direction: str | None = None
    substitution: tuple[tuple[str, TermNF], ...] | None = None
    occurrence: Occurrence | None = None
    context: TermNF | None = None
    left_factor: TermNF | None = None
    right_factor: TermNF | None = None


@dataclass(frozen=True)
class Proof:
    basis: tuple[tuple[str, Identity], ...]
    target: Identity
    steps: tuple[ProofStep, ...]
    depth: int
    nodes: int

    def rewrite_chain(self) -> list[Identity]:
        return [s.result for s in self.steps if s.kind == "axiom-instance"]


# ---------------------------------------------------------------------------
# matching


def _match_word(pattern: Word, subject: Word, sigma: dict[str, Word]):
    """All extensions of sigma mapping the pattern word onto the whole
    subject word; variables bind nonempty factors."""

    def walk(pi: int, si: int):
        if pi == len(pattern):
            if si == len(subject):
                yield dict(sigma)
            return
        var = pattern[pi]
        bound = sigma.get(var)
        if bound is not None:
            end = si + len(bound)
            if subject[si:end] == bound:
                yield from walk(pi + 1, end)
            return
        slack = len(subject) - si - (len(pattern) - pi - 1)
        for length in range(1, slack + 1):
            sigma[var] = subject[si : si + length]
            yield from walk(pi + 1, si + length)
            del sigma[var]

    yield from walk(0, 0)


def _match_summands(pwords: tuple[Word, ...], subject: TermNF):
    """Substitutions sending every pattern word onto some summand."""

    def walk(i: int, sigma: dict[str, Word]):
        if i == len(pwords):
            yield dict(sigma)
            return
        for w in subject.words:
            for extended in _match_word(pwords[i], w, sigma):
                yield from walk(i + 1, extended)

    seen = set()
    for sigma in walk(0, {}):
        key = tuple(sorted(sigma.items()))
        if key not in seen:
            seen.add(key)
            yield sigma


def _word_term(sigma: dict[str, Word]) -> dict[str, TermNF]:
    return {v: TermNF([w]) for v, w in sigma.items()}


def _apply_occurrence(
    state: TermNF, matched_instance: TermNF, replacement: TermNF, occ: Occurrence
) -> TermNF:
    """Recompute the rewrite described by an occurrence; used both by the
    searcher and, independently, by replay."""
    if occ.mode == "summands":
        if not state.contains(matched_instance):
            raise DeriveError("matched summands are not present in the term")
        if set(occ.matched) != set(matched_instance.words):
            raise DeriveError("occurrence does not list the matched instance")
        if occ.keep:
            return state + replacement
        remaining = [w for w in state.words if w not in set(occ.matched)]
        if remaining:
            return TermNF(remaining) + replacement
        return replacement
    if occ.mode == "factor":
        if occ.word is None or occ.span is None:
            raise DeriveError("factor occurrence needs a word and a span")
        if len(matched_instance.words) != 1:
            raise DeriveError("factor rewrites need a one-word instance")
        i, j = occ.span
        w = occ.word
        if w not in set(state.words) or w[i:j] != matched_instance.words[0]:
            raise DeriveError("factor occurrence does not match the term")
        new_words = [w[:i] + u + w[j:] for u in replacement.words]
        if occ.keep:
            return state + TermNF(new_words)
        remaining = [x for x in state.words if x != w]
        if remaining:
            return TermNF(remaining) + TermNF(new_words)
        return TermNF(new_words)
    raise DeriveError(f"unknown occurrence mode {occ.mode!r}")


# ---------------------------------------------------------------------------
# successor generation


@dataclass(frozen=True)
class _Rule:
    label: str
    direction: str
    src: TermNF
    dst: TermNF


def _directed_rules(basis: Sequence[tuple[str, Identity]]) -> list[_Rule]:
    rules = []
    for label, ident in basis:
        rules.append(_Rule(label, "lr", ident.lhs, ident.rhs))
        rules.append(_Rule(label, "rl", ident.rhs, ident.lhs))
    return rules


def _fresh_assignments(rule: _Rule, sigma: dict[str, Word], candidates):
    fresh = [v for v in rule.dst.variables() if v not in sigma]
    if not fresh:
        yield sigma
        return
    for combo in itertools.product(candidates, repeat=len(fresh)):
        extended = dict(sigma)
        extended.update({v: (c,) for v, c in zip(fresh, combo)})
        yield extended


def _successors(state: TermNF, rules, candidates, size_cap):
    """Deterministically ordered (next_state, step) rewrites of state."""
    out = []
    seen = set()
    for rule in rules:
        matches = []
        for sigma in _match_summands(rule.src.words, state):
            matches.append(("summands", sigma, None, None))
        if len(rule.src.words) == 1:
            pattern = rule.src.words[0]
            for w in state.words:
                for i in range(len(w)):
                    # a span must host one nonempty factor per pattern variable
                    for j in range(i + len(pattern), len(w) + 1):
                        if (i, j) == (0, len(w)):
                            continue  # whole-word spans are summand matches
                        for sigma in _match_word(pattern, w[i:j], {}):
                            matches.append(("factor", sigma, w, (i, j)))
        for mode, sigma, w, span in matches:
            for full in _fresh_assignments(rule, sigma, candidates):
                subst = _word_term(full)
                matched = substitute(rule.src, subst)
                replacement = substitute(rule.dst, subst)
                for keep in (False, True):
                    occ = Occurrence(
                        mode=mode,
                        keep=keep,
                        matched=tuple(matched.words) if mode == "summands" else (),
                        word=w,
                        span=span,
                    )
                    try:
                        new = _apply_occurrence(state, matched, replacement, occ)
                    except DeriveError:
                        continue
                    if new == state or new.size() > size_cap or new in seen:
                        continue
                    seen.add(new)
                    step = ProofStep(
                        kind="axiom-instance",
                        result=Identity(state, new),
                        axiom=rule.label,
                        direction=rule.direction,
                        substitution=tuple(sorted(subst.items())),
                        occurrence=occ,
                    )
                    out.append((new, step))
    return out


# ---------------------------------------------------------------------------
# the searcher


class _Search:
    def __init__(self, rules, candidates, size_cap, node_budget):
        self.rules = rules
        self.candidates = candidates
        self.size_cap = size_cap
        self.node_budget = node_budget
        self.nodes = 0
        self._succ_cache: dict[TermNF, list] = {}

    def successors(self, state: TermNF):
        cached = self._succ_cache.get(state)
        if cached is None:
            self.nodes += 1
            if self.node_budget is not None and self.nodes > self.node_budget:
                raise DeriveError("node budget exhausted")
            cached = _successors(state, self.rules, self.candidates, self.size_cap)
            self._succ_cache[state] = cached
        return cached

    def chain(self, start: TermNF, goal: TermNF, depth: int):
        """Shortest rewrite chain start -> goal, as a list of steps."""
        if start == goal:
            return []
        for limit in range(1, depth + 1):
            best_seen: dict[TermNF, int] = {start: limit}
            path = self._dfs(start, goal, limit, best_seen)
            if path is not None:
                return path
        return None

    def _dfs(self, state, goal, remaining, best_seen):
        try:
            successors = self.successors(state)
        except DeriveError:
            return None
        for new, step in successors:
            if new == goal:
                return [step]
        if remaining <= 1:
            return None
        for new, step in successors:
            if best_seen.get(new, -1) >= remaining - 1:
                continue
            best_seen[new] = remaining - 1
            rest = self._dfs(new, goal, remaining - 1, best_seen)
            if rest is not None:
                return [step] + rest
        return None


class _Builder:
    def __init__(self):
        self.steps: list[ProofStep] = []

    def add(self, step: ProofStep) -> int:
        self.steps.append(step)
        return len(self.steps) - 1

    def chain_into_one(self, indices: list[int]) -> int:
        """Fold consecutive links with transitivity; returns the index of
        the combined conclusion."""
        acc = indices[0]
        for nxt in indices[1:]:
            combined = Identity(self.steps[acc].result.lhs, self.steps[nxt].result.rhs)
            acc = self.add(
                ProofStep(kind="transitivity", result=combined, premises=(acc, nxt))
            )
        return acc


def _normalize_basis(basis) -> tuple[tuple[str, Identity], ...]:
    out = []
    for i, entry in enumerate(basis):
        if isinstance(entry, str):
            entry = parse_identity(entry)
        if isinstance(entry, Identity):
            out.append((f"b{i + 1}", entry))
        else:
            label, ident = entry
            if isinstance(ident, str):
                ident = parse_identity(ident)
            out.append((label, ident))
    return tuple(out)


def derive_bounded(
    basis: Iterable,
    target: Identity | str,
    depth: int = 8,
    size_factor: int = 4,
    node_budget: int | None = 200_000,
) -> Proof | None:
    """Search for a replayable derivation of the target from the basis.

    Returns None when no proof is found within the bounds; that is a
    bounded verdict, never a refutation.
    """
    if isinstance(target, str):
        target = parse_identity(target)
    named = _normalize_basis(basis)
    if depth < 1:
        raise ValueError("depth must be at least 1")
    if size_factor < 1:
        raise ValueError("size cap misconfigured: factor must be at least 1")

    if target.trivial:
        step = ProofStep(kind="reflexivity", result=target)
        return Proof(named, target, (step,), depth=0, nodes=0)

    rules = _directed_rules(named)
    candidates = tuple(target.variables())
    size_cap = size_factor * max(target.lhs.size(), target.rhs.size(), 2)
    search = _Search(rules, candidates, size_cap, node_budget)

    # direct chain from left to right
    links = search.chain(target.lhs, target.rhs, depth)
    if links is not None:
        builder = _Builder()
        conclusion = builder.chain_into_one([builder.add(s) for s in links])
        assert builder.steps[conclusion].result == target
        return Proof(
            named, target, tuple(builder.steps), depth=len(links), nodes=search.nodes
        )

    # sum decomposition fallback
    pieces = decompose_identity(target)
    proved: dict[tuple[TermNF, Word], list[ProofStep]] = {}
    longest = 0
    for piece in pieces:
        if piece.trivial:
            continue
        extra = [
            w for w in piece.identity.rhs.words if w not in set(piece.identity.lhs.words)
        ]
        links = search.chain(piece.identity.lhs, piece.identity.rhs, depth)
        if links is None:
            return None
        longest = max(longest, len(links))
        proved[(piece.identity.lhs, extra[0])] = links
    builder = _Builder()
    side_ids = []
    for side, other in ((target.lhs, target.rhs), (target.rhs, target.lhs)):
        side_ids.append(_assemble_side(builder, side, other, pieces, proved))
    sym = builder.add(
        ProofStep(
            kind="symmetry",
            result=builder.steps[side_ids[1]].result.swapped(),
            premises=(side_ids[1],),
        )
    )
    final = builder.add(
        ProofStep(
            kind="transitivity",
            result=Identity(target.lhs, target.rhs),
            premises=(side_ids[0], sym),
        )
    )
    assert builder.steps[final].result == target
    return Proof(
        named, target, tuple(builder.steps), depth=longest, nodes=search.nodes
    )


def _assemble_side(
    builder: _Builder,
    side: TermNF,
    other: TermNF,
    pieces: list[DecomposedPiece],
    proved: dict,
) -> int:
    """Fold the absorption pieces of one side into side = side + other."""
    whole = side + other
    acc = side
    acc_idx = None
    for piece in pieces:
        if piece.identity.lhs != side or piece.trivial:
            continue
        extra = [w for w in piece.identity.rhs.words if w not in set(side.words)][0]
        links = proved[(side, extra)]
        piece_idx = builder.chain_into_one([builder.add(s) for s in links])
        if acc_idx is None:
            acc_idx = piece_idx
        else:
            grown = acc + TermNF([extra])
            cong = builder.add(
                ProofStep(
                    kind="add-congruence",
                    result=Identity(acc, grown),
                    premises=(piece_idx,),
                    context=acc,
                )
            )
            acc_idx = builder.add(
                ProofStep(
                    kind="transitivity",
                    result=Identity(side, grown),
                    premises=(acc_idx, cong),
                )
            )
        acc = acc + TermNF([extra])
    if acc_idx is None:
        return builder.add(ProofStep(kind="reflexivity", result=Identity(side, whole)))
    assert acc == whole
    return acc_idx


# ---------------------------------------------------------------------------
# replay


def replay_proof(proof: Proof) -> tuple[bool, int | None]:
    """Re-execute every step independently of the search.

    Returns (True, None) when all steps check out and the conclusion is
    the target, else (False, index-of-first-invalid-step).
    """
    named = dict(proof.basis)
    for i, step in enumerate(proof.steps):
        if any(p >= i or p < 0 for p in step.premises):
            return False, i
        if not _replay_step(step, proof.steps, named):
            return False, i
    last = proof.steps[-1]
    if last.result != proof.target:
        return False, len(proof.steps) - 1
    return True, None


def _replay_step(step: ProofStep, steps, named: dict[str, Identity]) -> bool:
    kind = step.kind
    res = step.result
    if kind in ("reflexivity", "normalize"):
        # normal forms make normalization a structural equality check
        return res.lhs == res.rhs
    if kind == "symmetry":
        (p,) = step.premises
        prem = steps[p].result
        return res == Identity(prem.rhs, prem.lhs)
    if kind == "transitivity":
        p1, p2 = step.premises
        a, b = steps[p1].result, steps[p2].result
        return a.rhs == b.lhs and res == Identity(a.lhs, b.rhs)
    if kind == "add-congruence":
        (p,) = step.premises
        prem = steps[p].result
        if step.context is None:
            return False
        return res == Identity(prem.lhs + step.context, prem.rhs + step.context)
    if kind == "mul-congruence":
        (p,) = step.premises
        prem = steps[p].result
        lhs, rhs = prem.lhs, prem.rhs
        if step.left_factor is not None:
            lhs, rhs = step.left_factor * lhs, step.left_factor * rhs
        if step.right_factor is not None:
            lhs, rhs = lhs * step.right_factor, rhs * step.right_factor
        return res == Identity(lhs, rhs)
    if kind == "substitution-instance":
        (p,) = step.premises
        prem = steps[p].result
        if step.substitution is None:
            return False
        sigma = dict(step.substitution)
        try:
            return res == Identity(
                substitute(prem.lhs, sigma), substitute(prem.rhs, sigma)
            )
        except KeyError:
            return False
    if kind == "axiom-instance":
        if step.axiom not in named or step.substitution is None or step.occurrence is None:
            return False
        ident = named[step.axiom]
        src, dst = (
            (ident.lhs, ident.rhs) if step.direction == "lr" else (ident.rhs, ident.lhs)
        )
        sigma = dict(step.substitution)
        try:
            matched = substitute(src, sigma)
            replacement = substitute(dst, sigma)
            rebuilt = _apply_occurrence(res.lhs, matched, replacement, step.occurrence)
        except (KeyError, DeriveError):
            return False
        return rebuilt == res.rhs
    return False


# ---------------------------------------------------------------------------
# rendering

_KIND_TAGS = {
    "axiom-instance": "by",
    "reflexivity": "refl",
    "symmetry": "sym",
    "transitivity": "trans",
    "add-congruence": "+cong",
    "mul-congruence": "*cong",
    "substitution-instance": "subst",
    "normalize": "norm",
}


def format_proof(proof: Proof) -> str:
    lines = [f"target: {proof.target}"]
    for label, ident in proof.basis:
        lines.append(f"basis {label}: {ident}")
    chain = proof.rewrite_chain()
    if chain:
        pretty = [str(chain[0].lhs)] + [str(s.rhs) for s in chain]
        lines.append("chain: " + " ≈ ".join(pretty))
    for i, step in enumerate(proof.steps):
        tag = _KIND_TAGS.get(step.kind, step.kind)
        detail = ""
        if step.kind == "axiom-instance":
            sub = ", ".join(f"{v}↦{t}" for v, t in step.substitution)
            arrow = "l→r" if step.direction == "lr" else "r→l"
            keep = "+keep" if step.occurrence.keep else ""
            detail = f" [{tag} {step.axiom} {arrow}{keep}; {sub}]"
        elif step.premises:
            detail = f" [{tag} {','.join(str(p + 1) for p in step.premises)}]"
        else:
            detail = f" [{tag}]"
        lines.append(f"{i + 1:3d}. {step.result}{detail}")
    return "\n".join(lines)


def proof_to_json_dict(proof: Proof) -> dict:
    def term(t: TermNF) -> str:
        return str(t)

    return {
        "schema": 1,
        "basis": [{"label": l, "identity": str(i)} for l, i in proof.basis],
        "target": str(proof.target),
        "depth": proof.depth,
        "nodes": proof.nodes,
        "steps": [
            {
                "kind": s.kind,
                "result": str(s.result),
                "premises": list(s.premises),
                "axiom": s.axiom,
                "direction": s.direction,
                "substitution": (
                    {v: term(t) for v, t in s.substitution}
                    if s.substitution is not None
                    else None
                ),
                "occurrence": (
                    {
                        "mode": s.occurrence.mode,
                        "keep": s.occurrence.keep,
                        "matched": [word_str(w) for w in s.occurrence.matched],
                        "word": word_str(s.occurrence.word) if s.occurrence.word else None,
                        "span": list(s.occurrence.span) if s.occurrence.span else None,
                    }
                    if s.occurrence is not None
                    else None
                ),
                "context": term(s.context) if s.context is not None else None,
                "left_factor": (
                    term(s.left_factor) if s.left_factor is not None else None
                ),
                "right_factor": (
                    term(s.right_factor) if s.right_factor is not None else None
                ),
            }
            for s in proof.steps
        ],
    }
