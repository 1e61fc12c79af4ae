"""Reference semantics written directly from the definitions.

Nothing here touches the package's bitmask machinery: models are plain
sets and dicts, thresholds are compared as Fractions, and formulas are
walked with their macros fully expanded.  Tests compare the package
against this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from netlogic.formula import (
    And, Bottom, Dyn, Edge, Has, Iff, Implies, Not, Or, Pressure, Psi, Sim, Top,
)
from netlogic.model import Mode, Op


@dataclass(frozen=True)
class Ref:
    agents: tuple
    features: tuple
    edges: frozenset  # (a, b): a influences b
    val: tuple  # sorted (agent, frozenset of features)
    omega: Fraction
    tau: Fraction
    mode: Mode

    @property
    def V(self) -> dict:
        return dict(self.val)


def ref(model) -> Ref:
    """Convert through the public, name-based accessors only."""
    v = model.valuation
    return Ref(tuple(model.agents), tuple(model.features), frozenset(model.influence),
               tuple(sorted((a, frozenset(v[a])) for a in model.agents)),
               model.omega, model.tau, model.mode)


def influencers(m: Ref, a: str) -> set:
    return {b for (b, c) in m.edges if c == a}


def pressured(m: Ref, a: str, f: str) -> bool:
    nbrs = influencers(m, a)
    if not nbrs:
        return False
    adopters = {b for b in nbrs if f in m.V[b]}
    return Fraction(len(adopters), len(nbrs)) >= m.tau


def similarity(m: Ref, a: str, b: str) -> Fraction:
    va, vb = m.V[a], m.V[b]
    agree = (va & vb) | (set(m.features) - (va | vb))
    return Fraction(len(agree), len(m.features))


def similar(m: Ref, a: str, b: str) -> bool:
    return similarity(m, a, b) >= m.omega


def _with(m: Ref, edges=None, V=None) -> Ref:
    return Ref(m.agents, m.features, m.edges if edges is None else frozenset(edges),
               m.val if V is None else tuple(sorted((a, frozenset(V[a])) for a in m.agents)),
               m.omega, m.tau, m.mode)


def _new_V(m: Ref) -> dict:
    return {a: m.V[a] | {f for f in m.features if pressured(m, a, f)} for a in m.agents}


def _new_edges(m: Ref) -> set:
    skip_self = m.mode is Mode.IRREFLEXIVE
    return set(m.edges) | {(a, b) for a in m.agents for b in m.agents
                           if similar(m, a, b) and not (skip_self and a == b)}


def diff(m: Ref) -> Ref:
    return _with(m, V=_new_V(m))


def net(m: Ref) -> Ref:
    return _with(m, edges=_new_edges(m))


def sync(m: Ref) -> Ref:
    return _with(m, edges=_new_edges(m), V=_new_V(m))


STEP = {Op.DIFF: diff, Op.NET: net, Op.SYNC: sync}


def run(m: Ref, ops) -> Ref:
    for op in ops:
        m = STEP[Op.coerce(op)](m)
    return m


def canonical(kind: str, n: int = 0) -> list:
    return {"diff": [Op.DIFF], "net": [Op.NET], "diffnet": [Op.DIFF, Op.NET]}.get(
        kind, [Op.NET] + [Op.DIFF] * n)


# -- psi conditions, read off the definitions -----------------------------------


def psi(m: Ref, kind: str, n: int = 0) -> bool:
    pairs = [(a, b) for a in m.agents for b in m.agents
             if not (m.mode is Mode.IRREFLEXIVE and a == b)]
    cells = [(a, f) for a in m.agents for f in m.features]
    if kind == "diff":
        return all((a, b) in m.edges or not similar(m, a, b) for a, b in pairs)
    if kind == "net":
        return all(f in m.V[a] or not pressured(m, a, f) for a, f in cells)
    if kind == "diffnet":
        d = diff(m)
        return all((a, b) in m.edges or similar(m, a, b) == similar(d, a, b)
                   for a, b in pairs)
    stages = [run(m, [Op.NET] + [Op.DIFF] * i) for i in range(n)]
    return all(f in m.V[a]
               or pressured(m, a, f) == any(pressured(s, a, f) for s in stages)
               for a, f in cells)


# -- formulas -------------------------------------------------------------------


def holds(m: Ref, phi) -> bool:
    """Satisfaction with macros decided semantically by this module."""
    match phi:
        case Top():
            return True
        case Bottom():
            return False
        case Edge(a, b):
            return (a, b) in m.edges
        case Has(a, f):
            return f in m.V[a]
        case Sim(a, b):
            return similar(m, a, b)
        case Pressure(a, f):
            return pressured(m, a, f)
        case Psi(kind, n):
            return psi(m, kind, n)
        case Not(x):
            return not holds(m, x)
        case And(x, y):
            return holds(m, x) and holds(m, y)
        case Or(x, y):
            return holds(m, x) or holds(m, y)
        case Implies(x, y):
            return not holds(m, x) or holds(m, y)
        case Iff(x, y):
            return holds(m, x) == holds(m, y)
        case Dyn(op, x):
            return holds(STEP[op](m), x)
    raise TypeError(phi)


# -- brute force ----------------------------------------------------------------


def all_async(max_len: int):
    """Every sequence over {diff, net} of length 1..max_len, length-lex."""
    for k in range(1, max_len + 1):
        yield from product([Op.DIFF, Op.NET], repeat=k)


def replaceable(m: Ref, max_len: int) -> bool:
    target = sync(m)
    return any(run(m, s) == target for s in all_async(max_len))
