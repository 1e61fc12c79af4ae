"""Syntactic expansion of the ``pressure``, ``sim`` and ``psi_*`` macros.

The expansions are plain formulas over ``N``/``has`` atoms, so they give an
evaluation route that never touches the numeric predicates in
:mod:`netlogic.model`.  They grow exponentially (``3**|A|`` disjuncts for
pressure, ``2**|F|`` for similarity); callers should build them once per
signature rather than inside loops.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .errors import UnknownKind
from .formula import (
    And, Dyn, Edge, Formula, Has, Iff, Implies, Not, Or, Pressure, Psi, Sim,
    conj, disj, dyn_seq,
)
from .model import Mode, Op, Signature

KIND_ALIASES = {
    "diff": "diff", "△": "diff", "psi_diff": "diff",
    "net": "net", "□": "net", "psi_net": "net",
    "diffnet": "diffnet", "△□": "diffnet", "psi_diffnet": "diffnet",
    "netdiff": "netdiff", "□△": "netdiff", "□△^n": "netdiff", "psi_netdiff": "netdiff",
}


def normalize_kind(kind: str) -> str:
    try:
        return KIND_ALIASES[kind]
    except (KeyError, TypeError):
        raise UnknownKind(f"unknown psi kind {kind!r}") from None


def _subsets(items):
    for r in range(len(items) + 1):
        yield from combinations(items, r)


def _candidates(a: str, sig: Signature, mode: Mode) -> list[str]:
    if Mode(mode) is Mode.IRREFLEXIVE:
        return [b for b in sig.agents if b != a]
    return list(sig.agents)


def expand_pressure(a: str, f: str, sig: Signature, tau: Fraction,
                    mode: Mode = Mode.LITERAL) -> Formula:
    """Disjunction over exact neighbourhoods ``N`` and adopters ``G`` with |G|/|N| >= tau."""
    sig.agent(a)
    sig.feature(f)
    pool = _candidates(a, sig, mode)
    disjuncts = []
    for nbrs in _subsets(pool):
        if not nbrs:
            continue
        outside = [b for b in pool if b not in nbrs]
        for adopters in _subsets(nbrs):
            if Fraction(len(adopters), len(nbrs)) < tau:
                continue
            disjuncts.append(conj([Edge(b, a) for b in nbrs]
                                  + [Not(Edge(b, a)) for b in outside]
                                  + [Has(b, f) for b in adopters]))
    return disj(disjuncts)


def expand_similarity(a: str, b: str, sig: Signature, omega: Fraction) -> Formula:
    """Disjunction over feature sets ``E`` with |E|/|F| >= omega of agreement on ``E``."""
    sig.agent(a)
    sig.agent(b)
    total = len(sig.features)
    disjuncts = [conj(Iff(Has(a, f), Has(b, f)) for f in chosen)
                 for chosen in _subsets(sig.features)
                 if Fraction(len(chosen), total) >= omega]
    return disj(disjuncts)


def psi_formula(kind: str, n: int, sig: Signature, omega: Fraction, tau: Fraction,
                mode: Mode = Mode.LITERAL, expand: bool = False) -> Formula:
    """Build the condition under which the synchronous update equals a canonical sequence.

    ``kind`` is one of ``diff``, ``net``, ``diffnet``, ``netdiff`` (or the
    symbols △, □, △□, □△).  For ``netdiff`` with ``n == 0`` the inner
    disjunction is empty, giving a formula equivalent to the ``net`` one.
    ``sim``/``pressure`` stay as macro nodes unless ``expand`` is set.
    """
    kind = normalize_kind(kind)
    if n < 0:
        raise ValueError("psi index must be non-negative")
    mode = Mode(mode)

    def sim(a, b):
        return expand_similarity(a, b, sig, omega) if expand else Sim(a, b)

    def press(a, f):
        return expand_pressure(a, f, sig, tau, mode) if expand else Pressure(a, f)

    pairs = [(a, b) for a in sig.agents for b in sig.agents
             if not (a == b and mode is Mode.IRREFLEXIVE)]
    cells = [(a, f) for a in sig.agents for f in sig.features]
    if kind == "diff":
        return conj(Or(Edge(a, b), Not(sim(a, b))) for a, b in pairs)
    if kind == "net":
        return conj(Or(Has(a, f), Not(press(a, f))) for a, f in cells)
    if kind == "diffnet":
        return conj(Implies(Not(Edge(a, b)), Iff(sim(a, b), Dyn(Op.DIFF, sim(a, b))))
                    for a, b in pairs)
    return conj(
        Implies(Not(Has(a, f)),
                Iff(press(a, f),
                    disj(dyn_seq([Op.NET] + [Op.DIFF] * i, press(a, f)) for i in range(n))))
        for a, f in cells)


def expand_macros(phi: Formula, sig: Signature, omega: Fraction, tau: Fraction,
                  mode: Mode = Mode.LITERAL) -> Formula:
    """Replace every macro atom in ``phi`` by its primitive expansion.

    Subtrees without macros are returned as the same objects, and shared
    subtrees are expanded once.
    """
    memo: dict[int, tuple[Formula, Formula]] = {}

    def walk(node: Formula) -> Formula:
        hit = memo.get(id(node))
        if hit is not None:
            return hit[1]
        match node:
            case Sim(a, b):
                out = expand_similarity(a, b, sig, omega)
            case Pressure(a, f):
                out = expand_pressure(a, f, sig, tau, mode)
            case Psi(kind, n):
                out = psi_formula(kind, n, sig, omega, tau, mode, expand=True)
            case Not(arg) | Dyn(_, arg):
                new = walk(arg)
                out = node if new is arg else (
                    Not(new) if isinstance(node, Not) else Dyn(node.op, new))
            case And() | Or() | Implies() | Iff():
                left, right = walk(node.left), walk(node.right)
                out = node if left is node.left and right is node.right \
                    else type(node)(left, right)
            case _:
                out = node
        memo[id(node)] = (node, out)
        return out

    return walk(phi)
