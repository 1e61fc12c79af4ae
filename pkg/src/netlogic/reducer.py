"""Rewrite dynamic formulas into the static fragment using the reduction axioms.

Axioms, for each operator ``X`` in {[diff], [net], [sync]}::

    [net] N(a,b)  <-> N(a,b) | sim(a,b)      [diff] N(a,b) <-> N(a,b)
    [sync] N(a,b) <-> N(a,b) | sim(a,b)      [net] has(a,f) <-> has(a,f)
    [diff] has(a,f) <-> has(a,f) | pressure(a,f)
    [sync] has(a,f) <-> has(a,f) | pressure(a,f)
    X (p & q) <-> X p & X q                  X !p <-> !X p

Strategy: innermost dynamic operator first, leftmost first among equals.
An operator meeting ``|``, ``->`` or ``<->`` rewrites it by definition into
``!``/``&``; meeting a macro atom, it expands the macro.  Only formulas under
an operator are desugared, so static input passes through unchanged.  Repeated work on shared subtrees is logged as a single ``repeat``
step.  In
irreflexive mode the network operators never add self-loops, so
``X N(a,a)`` rewrites to ``N(a,a)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .formula import (
    And, Bottom, Dyn, Edge, Formula, Has, Iff, Implies, Not, Or, Pressure, Psi, Sim, Top,
    children,
)
from .macros import expand_macros, expand_pressure, expand_similarity, psi_formula
from .model import Mode, Op, Signature

_OP_NAME = {Op.DIFF: "diff", Op.NET: "net", Op.SYNC: "sync"}


@dataclass
class RewriteTrace:
    """Ordered ``(rule, before, after)`` steps; each rewrites the first
    pre-order occurrence of ``before``."""

    steps: list[tuple[str, Formula, Formula]] = field(default_factory=list)

    def add(self, rule: str, before: Formula, after: Formula) -> None:
        self.steps.append((rule, before, after))

    def __len__(self):
        return len(self.steps)

    def replay(self, phi: Formula) -> Formula:
        static: dict[int, tuple[Formula, bool]] = {}

        def settled(node: Formula) -> bool:
            hit = static.get(id(node))
            if hit is None:
                own = is_static(node) if isinstance(node, Psi) else not isinstance(node, Dyn)
                hit = static[id(node)] = (node, own and all(map(settled, children(node))))
            return hit[1]

        for _, before, after in self.steps:
            # a static subtree cannot contain a dynamic ``before``; skipping
            # them keeps the search off the already rewritten, shared parts
            skip = settled if not is_static(before) else None
            phi, done = _replace_first(phi, before, after, skip)
            if not done:
                raise ValueError(f"trace step does not apply: {before!r}")
        return phi


def _replace_first(phi, before, after, skip) -> tuple[Formula, bool]:
    if phi is before or phi == before:
        return after, True
    if skip is not None and skip(phi):
        return phi, False
    match phi:
        case Not(arg):
            new, done = _replace_first(arg, before, after, skip)
            return (Not(new), True) if done else (phi, False)
        case Dyn(op, arg):
            new, done = _replace_first(arg, before, after, skip)
            return (Dyn(op, new), True) if done else (phi, False)
        case And() | Or() | Implies() | Iff():
            new, done = _replace_first(phi.left, before, after, skip)
            if done:
                return type(phi)(new, phi.right), True
            new, done = _replace_first(phi.right, before, after, skip)
            return (type(phi)(phi.left, new), True) if done else (phi, False)
    return phi, False


def is_static(phi: Formula) -> bool:
    """No dynamic operator, and no psi macro whose definition contains one."""
    seen: set[int] = set()
    stack = [phi]
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        if isinstance(node, Dyn):
            return False
        if isinstance(node, Psi) and (node.kind == "diffnet"
                                      or (node.kind == "netdiff" and node.n > 0)):
            return False
        stack.extend(children(node))
    return True


def desugar(phi: Formula) -> Formula:
    """One definitional step from ``|``, ``->``, ``<->`` to ``!`` and ``&``.

    A left-nested chain of ``|`` is rewritten as a whole, which keeps the
    nesting depth of long macro disjunctions linear.
    """
    p, q = phi.left, phi.right
    match phi:
        case Or():
            spine = [q]
            while isinstance(p, Or):
                spine.append(p.right)
                p = p.left
            out = Not(p)
            for x in reversed(spine):
                out = And(out, Not(x))
            return Not(out)
        case Implies():
            return Not(And(p, Not(q)))
        case Iff():
            return And(Not(And(p, Not(q))), Not(And(q, Not(p))))
    raise TypeError(f"not a derived connective: {phi!r}")


_ATOMS = (Edge, Has, Sim, Pressure, Psi, Top, Bottom)


def _key(phi: Formula):
    # atoms hash cheaply, so equal atoms from different places share work;
    # compound nodes are keyed by identity
    return phi if isinstance(phi, _ATOMS) else id(phi)


class _Reducer:
    # Outputs share subtrees, so their unfolded size can be exponential in the
    # input.  Both memo tables are keyed by node identity (the node itself is
    # kept alive next to the result) so that work stays proportional to the
    # number of distinct nodes.
    def __init__(self, sig, omega, tau, mode, expand):
        self.sig, self.omega, self.tau = sig, omega, tau
        self.mode, self.expand = Mode(mode), expand
        self.trace = RewriteTrace()
        self.reduced: dict[object, tuple[Formula, Formula]] = {}
        self.pushed: dict[tuple[Op, object], tuple[Formula, Formula]] = {}
        # one object per macro definition, so that pushes into it are shared
        self.definitions: dict[Formula, Formula] = {}

    def reduce(self, phi: Formula) -> Formula:
        hit = self.reduced.get(_key(phi))
        if hit is not None:
            seen, out = hit
            if out is seen:
                return phi
            # the rewrites that produced ``out`` happened at an earlier copy
            return self.step("repeat", phi, out)
        out = self._reduce(phi)
        self.reduced[_key(phi)] = (phi, out)
        return out

    def _reduce(self, phi: Formula) -> Formula:
        match phi:
            case Dyn(op, arg):
                return self.push(op, self.reduce(arg))
            case Not(arg):
                new = self.reduce(arg)
                return phi if new is arg else Not(new)
            case And() | Or() | Implies() | Iff():
                left = self.reduce(phi.left)
                right = self.reduce(phi.right)
                if left is phi.left and right is phi.right:
                    return phi
                return type(phi)(left, right)
            case Psi(kind, n) if not is_static(phi):
                after = psi_formula(kind, n, self.sig, self.omega, self.tau, self.mode)
                self.trace.add("expand-psi", phi, after)
                return self.reduce(after)
            case Edge(a, b) | Sim(a, b):
                self.sig.agent(a)
                self.sig.agent(b)
            case Has(a, f) | Pressure(a, f):
                self.sig.agent(a)
                self.sig.feature(f)
        return phi

    def step(self, rule: str, before: Formula, after: Formula) -> Formula:
        self.trace.steps.append((rule, before, after))
        return after

    def push(self, op: Op, phi: Formula) -> Formula:
        """Rewrite ``Dyn(op, phi)`` for static ``phi`` into a static formula."""
        here = Dyn(op, phi)
        hit = self.pushed.get((op, _key(phi)))
        if hit is not None:
            # same rewrites as the first time; logged as one step
            return self.step("repeat", here, hit[1])
        out = self._push(op, phi, here)
        self.pushed[op, _key(phi)] = (phi, out)
        return out

    def _push(self, op: Op, phi: Formula, here: Dyn) -> Formula:
        name = _OP_NAME[op]
        match phi:
            case Edge(a, b):
                self.sig.agent(a)
                self.sig.agent(b)
                if op is Op.DIFF or (a == b and self.mode is Mode.IRREFLEXIVE):
                    return self.step(f"{name}-edge", here, phi)
                return self.step(f"{name}-edge", here, Or(phi, self.sim(a, b)))
            case Has(a, f):
                self.sig.agent(a)
                self.sig.feature(f)
                if op is Op.NET:
                    return self.step(f"{name}-feature", here, phi)
                return self.step(f"{name}-feature", here, Or(phi, self.pressure(a, f)))
            case Not(arg):
                self.step(f"{name}-neg", here, Not(Dyn(op, arg)))
                return Not(self.push(op, arg))
            case And(left, right):
                self.step(f"{name}-and", here, And(Dyn(op, left), Dyn(op, right)))
                left = self.push(op, left)
                return And(left, self.push(op, right))
            case Or() | Implies() | Iff():
                # only negation and conjunction have axioms; the rest are
                # rewritten by definition, sharing both operands
                return self.redefine(f"desugar-{type(phi).__name__.lower()}", op, phi,
                                     desugar(phi))
            case Sim() | Pressure() | Psi():
                rule = f"expand-{type(phi).__name__.lower()}"
                return self.redefine(rule, op, phi, self.define(phi))
            case Top() | Bottom():
                return self.step(f"{name}-const", here, phi)
        raise TypeError(f"not a static formula: {phi!r}")

    def redefine(self, rule: str, op: Op, phi: Formula, definition: Formula) -> Formula:
        self.step(rule, Dyn(op, phi), Dyn(op, definition))
        return self.push(op, definition)

    def define(self, macro: Formula) -> Formula:
        out = self.definitions.get(macro)
        if out is None:
            match macro:
                case Sim(a, b):
                    out = expand_similarity(a, b, self.sig, self.omega)
                case Pressure(a, f):
                    out = expand_pressure(a, f, self.sig, self.tau, self.mode)
                case Psi(kind, n):
                    out = psi_formula(kind, n, self.sig, self.omega, self.tau, self.mode,
                                      expand=True)
            self.definitions[macro] = out
        return out

    def sim(self, a: str, b: str) -> Formula:
        return self.define(Sim(a, b)) if self.expand else Sim(a, b)

    def pressure(self, a: str, f: str) -> Formula:
        return self.define(Pressure(a, f)) if self.expand else Pressure(a, f)


def reduce(phi: Formula, sig: Signature, omega: Fraction, tau: Fraction,
           mode: Mode = Mode.LITERAL, expand: bool = False) -> tuple[Formula, RewriteTrace]:
    """Translate ``phi`` into an equivalent static formula.

    With ``expand`` the result is additionally free of macro atoms.
    """
    r = _Reducer(sig, Fraction(omega), Fraction(tau), mode, expand)
    out = r.reduce(phi)
    if expand:
        expanded = expand_macros(out, sig, r.omega, r.tau, r.mode)
        if expanded is not out:
            r.trace.add("expand-macros", out, expanded)
        out = expanded
    return out, r.trace
