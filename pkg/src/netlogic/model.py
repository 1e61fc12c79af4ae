"""Social-network models and the three monotone update operators.

A model fixes a finite set of agents and features, a directed influence
relation (``(a, b)`` means *a influences b*), the set of features each agent
has adopted, and two exact rational thresholds: ``omega`` (similarity needed
to link) and ``tau`` (fraction of influencers needed to adopt).

Internally agents and features are indexed by their position in the sorted
name tuples of the model's :class:`Signature`; the influence relation is kept
as one bitmask of *influencers* per agent and the valuation as one feature
bitmask per agent.  All update functions are pure and read only the pre-update
model, so every agent decides simultaneously.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Mapping

from .errors import (
    DuplicateName,
    EmptyAgents,
    EmptyFeatures,
    EmptySequence,
    InvalidIdentifier,
    SelfLoopNotAllowed,
    ThresholdOutOfRange,
    UnknownAgent,
    UnknownFeature,
)

IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class Mode(str, Enum):
    """Whether the network update may link an agent to itself."""

    LITERAL = "literal"
    IRREFLEXIVE = "irreflexive"


class Op(Enum):
    DIFF = "diff"
    NET = "net"
    SYNC = "sync"

    # members are singletons; identity hashing keeps successor lookups cheap
    __hash__ = object.__hash__

    @property
    def symbol(self) -> str:
        return _SYMBOLS[self]

    @classmethod
    def coerce(cls, value: "Op | str") -> "Op":
        if isinstance(value, Op):
            return value
        try:
            return _OP_ALIASES[value.strip()]
        except KeyError:
            raise ValueError(f"unknown update operator {value!r}") from None

    def __str__(self) -> str:
        return self.symbol


_SYMBOLS = {Op.DIFF: "△", Op.NET: "□", Op.SYNC: "○"}
_OP_ALIASES = {
    "diff": Op.DIFF, "△": Op.DIFF, "[diff]": Op.DIFF,
    "net": Op.NET, "□": Op.NET, "[net]": Op.NET,
    "sync": Op.SYNC, "○": Op.SYNC, "[sync]": Op.SYNC,
}


class UpdateSequence(tuple):
    """A non-empty, immutable sequence of update operators."""

    def __new__(cls, ops: Iterable[Op | str] = ()):
        ops = tuple(Op.coerce(op) for op in ops)
        if not ops:
            raise EmptySequence("update sequences must be non-empty")
        return super().__new__(cls, ops)

    @classmethod
    def parse(cls, text: str) -> "UpdateSequence":
        """Parse ``"diff,net,sync"`` or a run of symbols such as ``"△□○"``."""
        text = text.strip()
        if "," in text or text.isalpha():
            tokens = [t for t in text.split(",") if t.strip()]
        else:
            tokens = [ch for ch in text if not ch.isspace()]
        return cls(tokens)

    def words(self) -> str:
        return ",".join(op.value for op in self)

    def __add__(self, other):
        return UpdateSequence(tuple(self) + tuple(other))

    def __str__(self) -> str:
        return "".join(op.symbol for op in self)

    def __repr__(self) -> str:
        return f"UpdateSequence({str(self)!r})"


def _check_names(names: Iterable[str], what: str) -> tuple[str, ...]:
    names = tuple(names)
    for name in names:
        if not isinstance(name, str) or not IDENTIFIER.match(name):
            raise InvalidIdentifier(f"invalid {what} name {name!r}")
    if len(set(names)) != len(names):
        raise DuplicateName(f"duplicate {what} names in {names!r}")
    return tuple(sorted(names))


@dataclass(frozen=True)
class Signature:
    """The agents and features a model or formula ranges over (sorted)."""

    agents: tuple[str, ...]
    features: tuple[str, ...]

    def __post_init__(self):
        agents = _check_names(self.agents, "agent")
        features = _check_names(self.features, "feature")
        if not agents:
            raise EmptyAgents("a signature needs at least one agent")
        if not features:
            raise EmptyFeatures("a signature needs at least one feature")
        object.__setattr__(self, "agents", agents)
        object.__setattr__(self, "features", features)

    @cached_property
    def agent_index(self) -> dict[str, int]:
        return {a: i for i, a in enumerate(self.agents)}

    @cached_property
    def feature_index(self) -> dict[str, int]:
        return {f: i for i, f in enumerate(self.features)}

    def agent(self, name: str) -> int:
        try:
            return self.agent_index[name]
        except KeyError:
            raise UnknownAgent(f"unknown agent {name!r}") from None

    def feature(self, name: str) -> int:
        try:
            return self.feature_index[name]
        except KeyError:
            raise UnknownFeature(f"unknown feature {name!r}") from None


def to_rational(value: Fraction | int | str) -> Fraction:
    """Exact rational from a Fraction, int, or ``"p/q"``/``"p"`` string."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not thresholds")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str) and re.fullmatch(r"\s*-?\d+\s*(/\s*\d+\s*)?", value):
        return Fraction(value.replace(" ", ""))
    raise ValueError(f"not an exact rational: {value!r}")


@lru_cache(maxsize=4096)
def bit_list(mask: int) -> tuple[int, ...]:
    """Indices of the set bits of ``mask``, ascending."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


class Model:
    """An immutable social-network model.

    Use :func:`new_model` to build one from names; the constructor itself
    trusts its (index-based) arguments and is meant for the update functions.
    """

    __slots__ = ("signature", "in_masks", "val_masks", "omega", "tau", "mode",
                 "_hash", "_pressure", "_similar", "_next")

    def __init__(self, signature: Signature, in_masks: tuple[int, ...],
                 val_masks: tuple[int, ...], omega: Fraction, tau: Fraction,
                 mode: Mode = Mode.LITERAL):
        self.signature = signature
        self.in_masks = in_masks
        self.val_masks = val_masks
        self.omega = omega
        self.tau = tau
        self.mode = mode
        self._hash = None
        self._pressure = None
        self._similar = None
        self._next = None

    @property
    def agents(self) -> tuple[str, ...]:
        return self.signature.agents

    @property
    def features(self) -> tuple[str, ...]:
        return self.signature.features

    @property
    def influence(self) -> frozenset[tuple[str, str]]:
        agents = self.signature.agents
        return frozenset((agents[i], agents[j])
                         for j, mask in enumerate(self.in_masks) for i in bit_list(mask))

    @property
    def valuation(self) -> dict[str, frozenset[str]]:
        feats = self.signature.features
        return {a: frozenset(feats[f] for f in bit_list(mask))
                for a, mask in zip(self.signature.agents, self.val_masks)}

    def edges(self) -> list[tuple[str, str]]:
        """Influence pairs in canonical (lexicographic) order."""
        return sorted(self.influence)

    def has_edge(self, a: str, b: str) -> bool:
        sig = self.signature
        return bool(self.in_masks[sig.agent(b)] >> sig.agent(a) & 1)

    def has_feature(self, a: str, f: str) -> bool:
        sig = self.signature
        return bool(self.val_masks[sig.agent(a)] >> sig.feature(f) & 1)

    def replace(self, in_masks=None, val_masks=None) -> "Model":
        out = Model(self.signature,
                    self.in_masks if in_masks is None else tuple(in_masks),
                    self.val_masks if val_masks is None else tuple(val_masks),
                    self.omega, self.tau, self.mode)
        if out.val_masks == self.val_masks:
            out._similar = self._similar
        return out

    def _key(self):
        return (self.signature, self.in_masks, self.val_masks, self.omega, self.tau, self.mode)

    def __eq__(self, other):
        if not isinstance(other, Model):
            return NotImplemented
        return (self.in_masks == other.in_masks and self.val_masks == other.val_masks
                and (self.signature is other.signature or self.signature == other.signature)
                and (self.omega is other.omega or self.omega == other.omega)
                and (self.tau is other.tau or self.tau == other.tau)
                and self.mode is other.mode)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self):
        val = {a: sorted(fs) for a, fs in self.valuation.items()}
        return (f"Model(agents={list(self.agents)}, features={list(self.features)}, "
                f"edges={self.edges()}, valuation={val}, omega={self.omega}, "
                f"tau={self.tau}, mode={self.mode.value})")


def new_model(agents: Iterable[str], features: Iterable[str],
              influence: Iterable[tuple[str, str]],
              valuation: Mapping[str, Iterable[str]],
              omega: Fraction | int | str, tau: Fraction | int | str,
              mode: Mode | str = Mode.LITERAL) -> Model:
    """Validate raw components and build a :class:`Model`.

    Agents missing from ``valuation`` have adopted no features.
    """
    mode = Mode(mode)
    agents, features = tuple(agents), tuple(features)
    if not agents:
        raise EmptyAgents("a model needs at least one agent")
    if not features:
        raise EmptyFeatures("a model needs at least one feature")
    sig = Signature(agents, features)
    omega, tau = to_rational(omega), to_rational(tau)
    if not 0 <= omega <= 1:
        raise ThresholdOutOfRange(f"omega must lie in [0, 1], got {omega}")
    if not 0 < tau <= 1:
        raise ThresholdOutOfRange(f"tau must lie in (0, 1], got {tau}")

    in_masks = [0] * len(sig.agents)
    for a, b in influence:
        i, j = sig.agent(a), sig.agent(b)
        if i == j and mode is Mode.IRREFLEXIVE:
            raise SelfLoopNotAllowed(f"self-influence ({a}, {b}) in irreflexive mode")
        in_masks[j] |= 1 << i
    val_masks = [0] * len(sig.agents)
    for a, feats in valuation.items():
        i = sig.agent(a)
        for f in feats:
            val_masks[i] |= 1 << sig.feature(f)
    return Model(sig, tuple(in_masks), tuple(val_masks), omega, tau, mode)


def with_mode(model: Model, mode: Mode | str) -> Model:
    """Re-validate ``model`` under another mode."""
    return new_model(model.agents, model.features, model.influence, model.valuation,
                     model.omega, model.tau, mode)


def influencers(model: Model, a: str) -> frozenset[str]:
    agents = model.signature.agents
    return frozenset(agents[i] for i in bit_list(model.in_masks[model.signature.agent(a)]))


def pressure_masks(model: Model) -> tuple[int, ...]:
    """Per agent, the bitmask of features it is pressured to adopt (cached)."""
    out = model._pressure
    if out is None:
        tau = model.tau
        p, q = tau.numerator, tau.denominator
        vals = model.val_masks
        # holders[f]: bitmask of agents having feature f
        holders = []
        for f in range(len(model.signature.features)):
            col = 0
            for i, v in enumerate(vals):
                if v >> f & 1:
                    col |= 1 << i
            holders.append(col)
        masks = []
        for nbrs in model.in_masks:
            mask = 0
            if nbrs:
                need = p * nbrs.bit_count()
                bit = 1
                for col in holders:
                    if (col & nbrs).bit_count() * q >= need:
                        mask |= bit
                    bit <<= 1
            masks.append(mask)
        out = model._pressure = tuple(masks)
    return out


def pressure_mask(model: Model, i: int) -> int:
    return pressure_masks(model)[i]


def has_pressure(model: Model, a: str, f: str) -> bool:
    """True iff ``a`` has influencers and at least a ``tau`` share of them have ``f``."""
    i, k = model.signature.agent(a), model.signature.feature(f)
    return bool(pressure_mask(model, i) >> k & 1)


def similarity(model: Model, a: str, b: str) -> Fraction:
    """Fraction of features on which ``a`` and ``b`` agree (both have or both lack)."""
    sig = model.signature
    i, j = sig.agent(a), sig.agent(b)
    nf = len(sig.features)
    return Fraction(nf - (model.val_masks[i] ^ model.val_masks[j]).bit_count(), nf)


def similar_masks(model: Model) -> tuple[int, ...]:
    """Per agent ``i``, the bitmask of agents similar to ``i`` (cached; includes ``i``)."""
    if model._similar is None:
        nf = len(model.signature.features)
        p, q = model.omega.numerator, model.omega.denominator
        max_disagree = nf - (-(-p * nf // q))
        vals = model.val_masks
        n = len(vals)
        out = [0] * n
        for i in range(n):
            vi = vals[i]
            for j in range(i, n):
                if (vi ^ vals[j]).bit_count() <= max_disagree:
                    out[i] |= 1 << j
                    out[j] |= 1 << i
        model._similar = tuple(out)
    return model._similar


def similar_index(model: Model, i: int, j: int) -> bool:
    return bool(similar_masks(model)[i] >> j & 1)


def are_similar(model: Model, a: str, b: str) -> bool:
    sig = model.signature
    return similar_index(model, sig.agent(a), sig.agent(b))


def _diffused(model: Model) -> tuple[int, ...]:
    return tuple(v | p for v, p in zip(model.val_masks, pressure_masks(model)))


def _linked(model: Model) -> tuple[int, ...]:
    sim = similar_masks(model)
    if model.mode is Mode.IRREFLEXIVE:
        return tuple(m | (s & ~(1 << j)) for j, (m, s) in enumerate(zip(model.in_masks, sim)))
    return tuple(m | s for m, s in zip(model.in_masks, sim))


def _successor(model: Model, op: "Op") -> Model:
    # models are immutable, so each successor is computed at most once
    cache = model._next
    if cache is None:
        cache = model._next = {}
    nxt = cache.get(op)
    if nxt is None:
        in_masks, val_masks = model.in_masks, model.val_masks
        if op is not Op.NET:
            val_masks = _diffused(model)
        if op is not Op.DIFF:
            in_masks = _linked(model)
        nxt = Model(model.signature, in_masks, val_masks, model.omega, model.tau, model.mode)
        if val_masks == model.val_masks:
            nxt._similar = model._similar
        cache[op] = nxt
    return nxt


def diffusion_update(model: Model) -> Model:
    """Every agent adopts each feature it is pressured to adopt."""
    return _successor(model, Op.DIFF)


def network_update(model: Model) -> Model:
    """Every sufficiently similar ordered pair becomes linked."""
    return _successor(model, Op.NET)


def synchronous_update(model: Model) -> Model:
    """Diffusion and network update computed from the same pre-state."""
    return _successor(model, Op.SYNC)


UPDATES = {Op.DIFF: diffusion_update, Op.NET: network_update, Op.SYNC: synchronous_update}


def apply_update(model: Model, op: Op | str) -> Model:
    return UPDATES[Op.coerce(op)](model)


def apply_sequence(model: Model, seq: Iterable[Op | str]) -> Model:
    """Apply the operators of ``seq`` left to right."""
    ops = seq if isinstance(seq, UpdateSequence) else [Op.coerce(op) for op in seq]
    if not ops:
        raise EmptySequence("cannot apply an empty update sequence")
    for op in ops:
        model = UPDATES[op](model)
    return model


def stabilize(model: Model, op: Op | str) -> tuple[Model, int]:
    """Iterate ``op`` to its fixpoint; return it with the number of changing steps.

    Both updates only ever add features or links, so at most
    ``|A|*|F| + |A|**2`` applications can change the model.
    """
    update = UPDATES[Op.coerce(op)]
    bound = len(model.agents) * len(model.features) + len(model.agents) ** 2
    steps = 0
    while True:
        nxt = update(model)
        if nxt == model:
            return model, steps
        model = nxt
        steps += 1
        if steps > bound:  # pragma: no cover - excluded by monotonicity
            raise RuntimeError("update failed to stabilise within the monotone bound")
