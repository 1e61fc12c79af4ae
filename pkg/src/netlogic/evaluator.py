"""Satisfaction of formulas on models, and update-sequence equivalence."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import SignatureMismatch
from .formula import (
    And, Atom, Bottom, Dyn, Edge, Formula, Has, Iff, Implies, Not, Or, Pressure, Psi, Sim, Top,
)
from .macros import KIND_ALIASES, normalize_kind
from .model import (
    Mode, Model, Op, Signature, UPDATES, apply_sequence, diffusion_update, network_update,
    pressure_masks, similar_masks,
)


def satisfies(model: Model, phi: Formula) -> bool:
    """Whether ``phi`` holds in ``model``."""
    kind = type(phi)
    if kind in _TREE:
        # plain recursion is cheapest for ordinary formulas; reduced formulas
        # share subtrees and may unfold exponentially, so past a visit budget
        # the evaluation restarts with memoization
        try:
            return _TREE[kind](model, phi, [_TREE_BUDGET])
        except _OutOfBudget:
            return _Shared().holds(model, phi)
    handler = _HANDLERS.get(kind)
    if handler is None:
        raise TypeError(f"not a formula: {phi!r}")
    return handler(model, phi)


_TREE_BUDGET = 20_000


class _OutOfBudget(Exception):
    pass


def _tree(m: Model, phi: Formula, budget: list[int]) -> bool:
    kind = type(phi)
    walk = _TREE.get(kind)
    if walk is None:
        return satisfies(m, phi)
    budget[0] -= 1
    if budget[0] < 0:
        raise _OutOfBudget
    return walk(m, phi, budget)


_TREE = {
    Not: lambda m, phi, b: not _tree(m, phi.arg, b),
    And: lambda m, phi, b: _tree(m, phi.left, b) and _tree(m, phi.right, b),
    Or: lambda m, phi, b: _tree(m, phi.left, b) or _tree(m, phi.right, b),
    Implies: lambda m, phi, b: not _tree(m, phi.left, b) or _tree(m, phi.right, b),
    Iff: lambda m, phi, b: _tree(m, phi.left, b) == _tree(m, phi.right, b),
    # successors are cached on the model, so repeated operators cost nothing
    Dyn: lambda m, phi, b: _tree(UPDATES[phi.op](m), phi.arg, b),
}
_CONNECTIVES = frozenset(_TREE)


class _Shared:
    # Remembering each compound (model, node) pair keeps evaluation linear in
    # the number of distinct nodes.  Both keys stay alive for the whole call:
    # nodes through the root formula, successor models through the cache on
    # their parent.
    def __init__(self):
        self.memo: dict[tuple[int, int], bool] = {}

    def holds(self, m: Model, phi: Formula) -> bool:
        if type(phi) not in _CONNECTIVES:
            return satisfies(m, phi)
        key = (id(m), id(phi))
        hit = self.memo.get(key)
        if hit is None:
            hit = self.memo[key] = self._compound(m, phi)
        return hit

    def _compound(self, m: Model, phi: Formula) -> bool:
        holds = self.holds
        match phi:
            case Not(arg):
                return not holds(m, arg)
            case And(left, right):
                return holds(m, left) and holds(m, right)
            case Or(left, right):
                return holds(m, left) or holds(m, right)
            case Implies(left, right):
                return not holds(m, left) or holds(m, right)
            case Iff(left, right):
                return holds(m, left) == holds(m, right)
            case Dyn(op, arg):
                return holds(UPDATES[op](m), arg)


def _edge(m: Model, phi: Edge) -> bool:
    sig = m.signature
    return bool(m.in_masks[sig.agent(phi.dst)] >> sig.agent(phi.src) & 1)


def _has(m: Model, phi: Has) -> bool:
    sig = m.signature
    return bool(m.val_masks[sig.agent(phi.agent)] >> sig.feature(phi.feature) & 1)


def _sim(m: Model, phi: Sim) -> bool:
    sig = m.signature
    return bool(similar_masks(m)[sig.agent(phi.a)] >> sig.agent(phi.b) & 1)


def _pressure(m: Model, phi: Pressure) -> bool:
    sig = m.signature
    return bool(pressure_masks(m)[sig.agent(phi.agent)] >> sig.feature(phi.feature) & 1)


_HANDLERS = {
    Top: lambda m, phi: True,
    Bottom: lambda m, phi: False,
    Edge: _edge,
    Has: _has,
    Sim: _sim,
    Pressure: _pressure,
    Psi: lambda m, phi: psi_holds(m, phi.kind, phi.n),
}


def _self_bits(model: Model) -> list[int]:
    # pairs (j, j) are exempt in irreflexive mode
    n = len(model.val_masks)
    if model.mode is Mode.IRREFLEXIVE:
        return [1 << j for j in range(n)]
    return [0] * n


def psi_holds(model: Model, kind: str, n: int = 0) -> bool:
    """Evaluate a psi condition directly from its definition.

    Same truth value as evaluating ``psi_formula(kind, n, ...)`` with
    :func:`satisfies`, without building the formula.
    """
    kind = KIND_ALIASES.get(kind) or normalize_kind(kind)
    in_masks, val_masks = model.in_masks, model.val_masks
    # column j of the influence relation: influencers of j must cover every
    # agent i that is similar to j (or whose similarity to j changes)
    own = _self_bits(model)
    if kind == "diff":
        return all(s & ~(m | o) == 0 for s, m, o in zip(similar_masks(model), in_masks, own))
    if kind == "net":
        return all(p & ~v == 0 for p, v in zip(pressure_masks(model), val_masks))
    if kind == "diffnet":
        after = similar_masks(diffusion_update(model))
        return all((s ^ t) & ~(m | o) == 0
                   for s, t, m, o in zip(similar_masks(model), after, in_masks, own))
    # netdiff: for every unadopted (a, f), pressure now iff pressure at some
    # stage i < n of the run net, diff, diff, ...
    later = [0] * len(val_masks)
    stage = network_update(model)
    for _ in range(n):
        later = [x | p for x, p in zip(later, pressure_masks(stage))]
        stage = diffusion_update(stage)
    return all((p ^ x) & ~v == 0 for p, x, v in zip(pressure_masks(model), later, val_masks))


def atoms(sig: Signature, mode: Mode = Mode.LITERAL) -> list[Atom]:
    """All admissible atoms in witness order: edges first, then features."""
    skip_self = Mode(mode) is Mode.IRREFLEXIVE
    edges = [Edge(a, b) for a in sig.agents for b in sig.agents if not (skip_self and a == b)]
    return edges + [Has(a, f) for a in sig.agents for f in sig.features]


def _compatible(m1: Model, m2: Model) -> None:
    if (m1.signature, m1.omega, m1.tau, m1.mode) != (m2.signature, m2.omega, m2.tau, m2.mode):
        raise SignatureMismatch("models differ in signature, thresholds or mode")


def first_difference(m1: Model, m2: Model) -> Optional[Atom]:
    _compatible(m1, m2)
    for atom in atoms(m1.signature, Mode.LITERAL):
        if satisfies(m1, atom) != satisfies(m2, atom):
            return atom
    return None


def atomic_agreement(m1: Model, m2: Model) -> bool:
    """True iff both models satisfy exactly the same atoms."""
    return first_difference(m1, m2) is None


@dataclass(frozen=True)
class EquivalenceReport:
    equivalent: bool
    witness: Optional[Atom] = None

    def __post_init__(self):
        if self.equivalent != (self.witness is None):
            raise ValueError("a witness is present exactly when the sequences differ")


def sequences_equivalent(model: Model, s1: Iterable[Op | str],
                         s2: Iterable[Op | str]) -> EquivalenceReport:
    """Compare the models reached by two update sequences."""
    witness = first_difference(apply_sequence(model, s1), apply_sequence(model, s2))
    return EquivalenceReport(witness is None, witness)
