"""Shared random generators for the test suite."""

import random

from aisemiring.terms import Identity, TermNF


def random_absorption_identity(rng: random.Random) -> Identity:
    """Random nontrivial u = u + q: at most 4 summands, words of length
    at most 4, at most 4 variables.

    Both u and q are redrawn together until q escapes u, so the loop
    terminates even when the alphabet is a single variable (where u can
    cover all four possible words).
    """
    variables = "wxyz"[: rng.randint(1, 4)]

    def word():
        return tuple(rng.choice(variables) for _ in range(rng.randint(1, 4)))

    while True:
        u = {word() for _ in range(rng.randint(1, 4))}
        q = word()
        if q not in u:
            break
    lhs = TermNF(u)
    return Identity(lhs, lhs + TermNF([q]))


def random_identity(rng: random.Random, max_vars: int = 4) -> Identity:
    """Random identity with small sides over at most `max_vars` variables."""
    variables = "wxyz"[: rng.randint(1, max_vars)]

    def word():
        return tuple(rng.choice(variables) for _ in range(rng.randint(1, 3)))

    def side():
        return TermNF({word() for _ in range(rng.randint(1, 3))})

    return Identity(side(), side())
