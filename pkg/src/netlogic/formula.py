"""Formula AST for the dynamic network logic and its canonical printer.

Atoms are ``N(a,b)`` (a influences b) and ``has(a,f)``.  Besides the
primitive connectives ``!`` and ``&`` the tree keeps ``|``, ``->`` and ``<->``
as sugar nodes.  ``sim``, ``pressure`` and the ``psi_*`` family are macro
atoms: the evaluator interprets them directly and :mod:`netlogic.macros`
expands them into primitive formulas on demand.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Iterator, Union

from .model import Op

PSI_KINDS = ("diff", "net", "diffnet", "netdiff")


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bottom:
    pass


@dataclass(frozen=True)
class Edge:
    """``N(src,dst)``: ``src`` is an influencer of ``dst``."""
    src: str
    dst: str


@dataclass(frozen=True)
class Has:
    """``has(agent,feature)``."""
    agent: str
    feature: str


@dataclass(frozen=True)
class Sim:
    a: str
    b: str


@dataclass(frozen=True)
class Pressure:
    agent: str
    feature: str


@dataclass(frozen=True)
class Psi:
    kind: str
    n: int = 0

    def __post_init__(self):
        if self.kind not in PSI_KINDS:
            raise ValueError(f"unknown psi kind {self.kind!r}")
        if self.n < 0 or (self.kind != "netdiff" and self.n):
            raise ValueError(f"bad index {self.n} for psi kind {self.kind!r}")


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Dyn:
    op: Op
    arg: "Formula"


Atom = Union[Edge, Has]
Formula = Union[Top, Bottom, Edge, Has, Sim, Pressure, Psi, Not, And, Or, Implies, Iff, Dyn]
BINARY = (And, Or, Implies, Iff)
ATOMIC = (Top, Bottom, Edge, Has, Sim, Pressure, Psi)
TOP, BOTTOM = Top(), Bottom()


def conj(parts: Iterable[Formula]) -> Formula:
    """Left-nested conjunction; the empty conjunction is ``true``."""
    parts = list(parts)
    return reduce(And, parts) if parts else TOP


def disj(parts: Iterable[Formula]) -> Formula:
    """Left-nested disjunction; the empty disjunction is ``false``."""
    parts = list(parts)
    return reduce(Or, parts) if parts else BOTTOM


def dyn_seq(ops: Iterable[Op], arg: Formula) -> Formula:
    """``ops[0] ops[1] ... arg``: the first operator is outermost."""
    for op in reversed(list(ops)):
        arg = Dyn(op, arg)
    return arg


def children(phi: Formula) -> tuple[Formula, ...]:
    if isinstance(phi, (Not, Dyn)):
        return (phi.arg,)
    if isinstance(phi, BINARY):
        return (phi.left, phi.right)
    return ()


def subformulas(phi: Formula) -> Iterator[Formula]:
    """Pre-order traversal."""
    stack = [phi]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


def size(phi: Formula) -> int:
    return sum(1 for _ in subformulas(phi))


def dynamic_depth(phi: Formula) -> int:
    if isinstance(phi, Dyn):
        return 1 + dynamic_depth(phi.arg)
    return max((dynamic_depth(c) for c in children(phi)), default=0)


def names(phi: Formula) -> tuple[set[str], set[str]]:
    """Agent and feature names mentioned in ``phi``."""
    agents: set[str] = set()
    feats: set[str] = set()
    for node in subformulas(phi):
        if isinstance(node, Edge):
            agents.update((node.src, node.dst))
        elif isinstance(node, Sim):
            agents.update((node.a, node.b))
        elif isinstance(node, (Has, Pressure)):
            agents.add(node.agent)
            feats.add(node.feature)
    return agents, feats


# -- printing ---------------------------------------------------------------

_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}
_UNARY_PREC = 5
_BIN_TOKEN = {Iff: "<->", Implies: "->", Or: "|", And: "&"}
_DYN_TOKEN = {Op.DIFF: "[diff]", Op.NET: "[net]", Op.SYNC: "[sync]"}


def _prec(phi: Formula) -> int:
    return _PREC.get(type(phi), _UNARY_PREC)


def to_text(phi: Formula) -> str:
    """Canonical ASCII concrete syntax with minimal parentheses."""
    match phi:
        case Top():
            return "true"
        case Bottom():
            return "false"
        case Edge(src, dst):
            return f"N({src},{dst})"
        case Has(agent, feature):
            return f"has({agent},{feature})"
        case Sim(a, b):
            return f"sim({a},{b})"
        case Pressure(agent, feature):
            return f"pressure({agent},{feature})"
        case Psi(kind, n):
            return f"psi_netdiff({n})" if kind == "netdiff" else f"psi_{kind}"
        case Not(arg):
            return "!" + _wrap(arg, _UNARY_PREC)
        case Dyn(op, arg):
            return _DYN_TOKEN[op] + " " + _wrap(arg, _UNARY_PREC)
    prec = _PREC[type(phi)]
    if isinstance(phi, Implies):  # right-associative
        left, right = _wrap(phi.left, prec + 1), _wrap(phi.right, prec)
    else:
        left, right = _wrap(phi.left, prec), _wrap(phi.right, prec + 1)
    return f"{left} {_BIN_TOKEN[type(phi)]} {right}"


def _wrap(phi: Formula, needed: int) -> str:
    text = to_text(phi)
    return text if _prec(phi) >= needed else f"({text})"
