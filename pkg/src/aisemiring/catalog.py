"""Built-in algebras, stored verbatim in the text file format.

The two-element catalog covers all six isomorphism classes of that
order. Four of them carry their conventional names (L2, R2, N2, T2);
the remaining two are the lattice-like ones whose multiplication is the
meet (M2_or_D2_a) respectively the join (M2_or_D2_b) of the additive
order. Which of the traditional names M2/D2 belongs to which table is
not fixed here, so both are exposed under explicit placeholder names;
they are exactly the two that fail xy = xz.
"""

from __future__ import annotations

from .algebra import FiniteAlgebra
from .fileformat import load_one

_SOURCES = {
    "trivial": """
        name trivial
        order 1
        add
        0
        mul
        0
    """,
    "L2": """
        name L2
        order 2
        elements 0 1
        add
        0 1
        1 1
        mul
        0 0
        1 1
    """,
    "R2": """
        name R2
        order 2
        elements 0 1
        add
        0 1
        1 1
        mul
        0 1
        0 1
    """,
    "N2": """
        name N2
        order 2
        elements 0 1
        add
        0 1
        1 1
        mul
        0 0
        0 0
    """,
    "T2": """
        name T2
        order 2
        elements 0 1
        add
        0 1
        1 1
        mul
        1 1
        1 1
    """,
    "M2_or_D2_a": """
        name M2_or_D2_a
        order 2
        elements 0 1
        add
        0 1
        1 1
        mul
        0 0
        0 1
    """,
    "M2_or_D2_b": """
        name M2_or_D2_b
        order 2
        elements 0 1
        add
        0 1
        1 1
        mul
        0 1
        1 1
    """,
    "S7": """
        name S7
        order 3
        elements inf a 1
        add
        inf inf inf
        inf a inf
        inf inf 1
        mul
        inf inf inf
        inf inf a
        inf a 1
    """,
    "S56": """
        name S56
        order 3
        elements 1 2 3
        add
        1 1 3
        1 2 3
        3 3 3
        mul
        3 2 3
        3 2 3
        3 2 3
    """,
    "S58": """
        name S58
        order 3
        elements 1 2 3
        add
        1 1 3
        1 2 3
        3 3 3
        mul
        3 3 3
        2 2 2
        3 3 3
    """,
    "S4_475": """
        name S4_475
        order 4
        elements 1 2 3 4
        add
        1 1 1 1
        1 2 3 4
        1 3 3 1
        1 4 1 4
        mul
        3 3 3 3
        2 2 2 2
        3 3 3 3
        3 3 3 3
    """,
    "S4_477": """
        name S4_477
        order 4
        elements 1 2 3 4
        add
        1 1 1 1
        1 2 3 4
        1 3 3 1
        1 4 1 4
        mul
        3 2 3 3
        3 2 3 3
        3 2 3 3
        3 2 3 3
    """,
}

_ALIASES = {
    "S(4,475)": "S4_475",
    "S(4,477)": "S4_477",
}

_cache: dict[str, FiniteAlgebra] = {}


def builtin_names() -> list[str]:
    return list(_SOURCES)


def builtin_source(name: str) -> str:
    return _SOURCES[resolve_name(name)]


def resolve_name(name: str) -> str:
    name = _ALIASES.get(name, name)
    if name not in _SOURCES:
        known = ", ".join(builtin_names())
        raise KeyError(f"unknown builtin algebra {name!r}; known: {known}")
    return name


def get(name: str) -> FiniteAlgebra:
    name = resolve_name(name)
    if name not in _cache:
        _cache[name] = load_one(_SOURCES[name])
    return _cache[name]
