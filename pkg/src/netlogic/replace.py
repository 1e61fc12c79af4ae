"""When can the synchronous update be replaced by diffusion/network sequences?

The canonical candidates are △, □, △□ and □△ⁿ.  Each has a psi condition
that holds on a model exactly when that candidate reaches the same model as
○; the decision procedure tries them in order and every sequence returned
here is re-checked against ○ before it leaves the module.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional

from .corpus import canonical_key, enumerate_models, random_model
from .errors import (
    BadIndex, BudgetExceeded, InvariantViolation, SearchExhausted, ThresholdOutOfRange,
)
from .evaluator import psi_holds, satisfies
from .formula import And, Dyn, Edge, Has, Not
from .macros import normalize_kind
from .model import (
    Mode, Model, Op, UpdateSequence, apply_sequence, diffusion_update, network_update,
    synchronous_update, to_rational,
)

log = logging.getLogger(__name__)

ASYNC_OPS = (Op.DIFF, Op.NET)


@lru_cache(maxsize=None)
def canonical_sequence(kind: str, n: int = 0) -> UpdateSequence:
    kind = normalize_kind(kind)
    if kind == "diff":
        return UpdateSequence([Op.DIFF])
    if kind == "net":
        return UpdateSequence([Op.NET])
    if kind == "diffnet":
        return UpdateSequence([Op.DIFF, Op.NET])
    return UpdateSequence([Op.NET] + [Op.DIFF] * n)


@lru_cache(maxsize=None)
def kind_label(kind: str, n: int = 0) -> str:
    kind = normalize_kind(kind)
    return f"□△^{n}" if kind == "netdiff" else str(canonical_sequence(kind))


@lru_cache(maxsize=None)
def canonical_kinds(n_agents: int) -> tuple[tuple[str, int], ...]:
    """Disjunct order used by :func:`find_replacement`: △, □, △□, □△^1 .. □△^(|A|-1)."""
    return (("diff", 0), ("net", 0), ("diffnet", 0)) + tuple(("netdiff", n) for n in range(1, n_agents))


def check_psi(model: Model, kind: str, n: int = 0) -> bool:
    """Evaluate the psi condition of a canonical kind on ``model``."""
    kind = normalize_kind(kind)
    if kind == "netdiff":
        if not 0 <= n < len(model.signature.agents):
            raise BadIndex(f"netdiff index must satisfy 0 <= n < {len(model.agents)}, got {n}")
    elif n != 0:
        raise BadIndex(f"psi kind {kind!r} takes no index")
    return psi_holds(model, kind, n)


@dataclass(frozen=True)
class ReplaceabilityVerdict:
    replaceable: bool
    sequence: Optional[UpdateSequence] = None
    failed_conditions: tuple[str, ...] = ()

    def __post_init__(self):
        if self.replaceable != (self.sequence is not None):
            raise ValueError("a sequence is present exactly when replaceable")


def _verified(model: Model, seq: UpdateSequence, target: Model, why: str) -> UpdateSequence:
    if apply_sequence(model, seq) != target:
        raise InvariantViolation(f"{why}: {seq} does not reproduce the target on {model!r}")
    return seq


def find_replacement(model: Model) -> ReplaceabilityVerdict:
    """Return the first canonical sequence whose psi condition holds, if any."""
    failed = []
    for kind, n in canonical_kinds(len(model.signature.agents)):
        if check_psi(model, kind, n):
            seq = canonical_sequence(kind, n)
            _verified(model, seq, synchronous_update(model), f"psi_{kind_label(kind, n)} held")
            return ReplaceabilityVerdict(True, seq)
        failed.append(kind_label(kind, n))
    return ReplaceabilityVerdict(False, None, tuple(failed))


def brute_force_replaceable(model: Model, max_len: int | None = None,
                            cap: int = 1 << 16) -> Optional[UpdateSequence]:
    """First sequence over {△, □} (length-lex, △ < □) reaching the ○-model."""
    if max_len is None:
        max_len = len(model.agents) + 1
    if max_len < 1:
        raise ValueError("max_len must be positive")
    if 2 ** (max_len + 1) > cap:
        raise BudgetExceeded(f"2^{max_len + 1} sequences exceed the cap of {cap}")
    target = synchronous_update(model)
    goal = (target.in_masks, target.val_masks)
    level: list[tuple[tuple[Op, ...], Model]] = [((), model)]
    for _ in range(max_len):
        # prefixes reaching the same state have the same extensions, so only
        # the first one in length-lex order is kept; the answer is unchanged
        nxt, seen = [], set()
        for prefix, reached in level:
            for op in ASYNC_OPS:
                m = diffusion_update(reached) if op is Op.DIFF else network_update(reached)
                state = (m.in_masks, m.val_masks)
                if state == goal:
                    return UpdateSequence(prefix + (op,))
                if state not in seen:
                    seen.add(state)
                    nxt.append((prefix + (op,), m))
        level = nxt
    return None


def classify_sequence(model: Model, seq: Iterable[Op | str]) -> Optional[tuple[str, int]]:
    """Canonical kind equivalent on ``model`` to a ○-free ``seq`` that matches ○.

    Returns ``None`` when ``seq`` does not reach the ○-model.  The kind is
    predicted from the shape of ``seq``: only □ gives □, only △ gives △,
    mixed starting with △ gives △□, mixed starting with □ gives □△ⁿ for the
    least n that works.
    """
    seq = UpdateSequence(seq)
    if Op.SYNC in seq:
        raise ValueError("classify_sequence takes sequences over △ and □ only")
    reached = apply_sequence(model, seq)
    if reached != synchronous_update(model):
        return None
    ops = set(seq)
    if ops == {Op.NET}:
        predicted = [("net", 0)]
    elif ops == {Op.DIFF}:
        predicted = [("diff", 0)]
    elif seq[0] is Op.DIFF:
        predicted = [("diffnet", 0)]
    else:
        predicted = [("netdiff", n) for n in range(1, seq.count(Op.DIFF) + 1)]
    for kind, n in predicted:
        if apply_sequence(model, canonical_sequence(kind, n)) == reached:
            return kind, n
    raise InvariantViolation(f"{seq} matches ○ on {model!r} but no canonical sequence does")


def find_replacement_multi(model: Model, m: int) -> Optional[UpdateSequence]:
    """Concatenate stage-wise replacements of ○ for ○^m, or ``None``.

    Stage ``i`` works on ○^i(model).  Failure at any stage yields ``None``
    even though some other sequence may still reproduce ○^m.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    parts: list[Op] = []
    stage = model
    for _ in range(m):
        verdict = find_replacement(stage)
        if not verdict.replaceable:
            return None
        parts.extend(verdict.sequence)
        stage = synchronous_update(stage)
    result = UpdateSequence(parts)
    return _verified(model, result, stage, f"stage-wise replacement of ○^{m}")


# -- counterexample search ----------------------------------------------------


@dataclass(frozen=True)
class SearchConfig:
    agent_count: int = 3
    feature_count: int = 3
    omega: Fraction = Fraction(1, 2)
    tau: Fraction = Fraction(1, 2)
    mode: Mode = Mode.LITERAL
    seed: int = 0
    budget: int = 100_000
    exhaustive: bool = False
    require_proof_facts: bool = True

    def __post_init__(self):
        object.__setattr__(self, "omega", to_rational(self.omega))
        object.__setattr__(self, "tau", to_rational(self.tau))
        object.__setattr__(self, "mode", Mode(self.mode))
        if not 0 <= self.omega <= 1:
            raise ThresholdOutOfRange(f"omega must lie in [0, 1], got {self.omega}")
        if not 0 < self.tau <= 1:
            raise ThresholdOutOfRange(f"tau must lie in (0, 1], got {self.tau}")
        if self.agent_count < 1 or self.feature_count < 1:
            raise ValueError("agent and feature counts must be positive")
        if self.budget < 1:
            raise ValueError("budget must be positive")
        if self.exhaustive and self.agent_count * self.feature_count > 9:
            raise ValueError("exhaustive search is limited to |A|*|F| <= 9")


PROOF_FACTS = (
    "diff_misses_sync_edge",
    "diffnet_misses_that_edge",
    "net_misses_sync_feature",
    "diffnet_model_stable",
    "net_model_stable",
)


def proof_facts(model: Model) -> dict[str, bool]:
    """The facts the irreplaceability argument relies on, checked on ``model``.

    1. some pair (x,y) with not △N_xy but ○N_xy;
    2. for such a pair also not △□N_xy;
    3. some (z,h) with not □h_z but ○h_z;
    4. the △□-model is fixed by both △ and □;
    5. the □-model is fixed by both △ and □.
    """
    sig = model.signature
    pairs = [Edge(x, y) for x in sig.agents for y in sig.agents]
    missed = [e for e in pairs
              if satisfies(model, And(Not(Dyn(Op.DIFF, e)), Dyn(Op.SYNC, e)))]
    cells = [Has(z, h) for z in sig.agents for h in sig.features]
    after_dn = apply_sequence(model, [Op.DIFF, Op.NET])
    after_n = network_update(model)

    def stable(m: Model) -> bool:
        return diffusion_update(m) == m and network_update(m) == m

    return {
        "diff_misses_sync_edge": bool(missed),
        "diffnet_misses_that_edge": any(
            not satisfies(model, Dyn(Op.DIFF, Dyn(Op.NET, e))) for e in missed),
        "net_misses_sync_feature": any(
            satisfies(model, And(Not(Dyn(Op.NET, c)), Dyn(Op.SYNC, c))) for c in cells),
        "diffnet_model_stable": stable(after_dn),
        "net_model_stable": stable(after_n),
    }


@dataclass(frozen=True)
class SearchResult:
    model: Model
    facts: dict[str, bool] = field(default_factory=dict)
    candidates: int = 0


def _candidates(cfg: SearchConfig):
    if cfg.exhaustive:
        yield from enumerate_models(cfg.agent_count, cfg.feature_count,
                                    [cfg.omega], [cfg.tau], cfg.mode)
        return
    rng = random.Random(cfg.seed)
    total = (1 << (cfg.agent_count * (cfg.agent_count + cfg.feature_count)))
    for _ in range(min(total * 8, cfg.budget * 50)):
        yield random_model(rng, cfg.agent_count, cfg.feature_count, cfg.omega, cfg.tau,
                           cfg.mode, edge_density=rng.choice([0.2, 0.35, 0.5]))


def search_irreplaceable(cfg: SearchConfig) -> SearchResult:
    """Look for a model on which no △/□ sequence reproduces ○.

    Candidates are de-duplicated up to relabelling of agents and features;
    each distinct candidate counts against the budget.  With
    ``require_proof_facts`` the witness must also satisfy every entry of
    :func:`proof_facts`.
    """
    seen: set = set()
    tried = 0
    for model in _candidates(cfg):
        key = canonical_key(model)
        if key in seen:
            continue
        seen.add(key)
        tried += 1
        if tried > cfg.budget:
            break
        if find_replacement(model).replaceable:
            continue
        if brute_force_replaceable(model) is not None:
            raise InvariantViolation(f"psi conditions all failed but brute force succeeded on {model!r}")
        facts = proof_facts(model)
        if cfg.require_proof_facts and not all(facts.values()):
            continue
        log.info("irreplaceable witness after %d candidates", tried)
        return SearchResult(model, facts, tried)
    raise SearchExhausted(f"no witness among {min(tried, cfg.budget)} candidates")
