"""Enumeration and seeded sampling of small models."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import permutations, product
from typing import Iterable, Iterator, Sequence

from .model import Mode, Model, Signature

THRESHOLDS = (Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), Fraction(1))


def agent_names(n: int) -> list[str]:
    return list("abcde")[:n] if n <= 5 else [f"a{i}" for i in range(n)]


def feature_names(k: int) -> list[str]:
    return list("fghij")[:k] if k <= 5 else [f"f{i}" for i in range(k)]


def signature(n_agents: int, n_features: int) -> Signature:
    return Signature(tuple(agent_names(n_agents)), tuple(feature_names(n_features)))


def enumerate_models(n_agents: int, n_features: int,
                     omegas: Iterable[Fraction] = THRESHOLDS,
                     taus: Iterable[Fraction] = THRESHOLDS,
                     mode: Mode = Mode.LITERAL) -> Iterator[Model]:
    """Every model over the standard signature of the given size."""
    mode = Mode(mode)
    sig = signature(n_agents, n_features)
    omegas, taus = list(omegas), list(taus)
    per_agent = []
    for i in range(n_agents):
        masks = range(1 << n_agents)
        if mode is Mode.IRREFLEXIVE:
            masks = [m for m in masks if not m >> i & 1]
        per_agent.append(list(masks))
    vals = list(product(range(1 << n_features), repeat=n_agents))
    for in_masks in product(*per_agent):
        for val_masks in vals:
            for omega in omegas:
                for tau in taus:
                    yield Model(sig, in_masks, val_masks, omega, tau, mode)


def random_model(rng: random.Random, n_agents: int, n_features: int,
                 omega: Fraction, tau: Fraction, mode: Mode = Mode.LITERAL,
                 edge_density: float | None = None) -> Model:
    mode = Mode(mode)
    sig = signature(n_agents, n_features)
    density = rng.random() if edge_density is None else edge_density
    in_masks = []
    for j in range(n_agents):
        mask = 0
        for i in range(n_agents):
            if (i != j or mode is Mode.LITERAL) and rng.random() < density:
                mask |= 1 << i
        in_masks.append(mask)
    val_masks = tuple(rng.getrandbits(n_features) for _ in range(n_agents))
    return Model(sig, tuple(in_masks), val_masks, omega, tau, mode)


def random_models(seed: int, count: int, max_agents: int = 4, max_features: int = 3,
                  thresholds: Sequence[Fraction] | None = None,
                  modes: Sequence[Mode] = (Mode.LITERAL,)) -> list[Model]:
    """``count`` seeded random models with up to the given sizes.

    Thresholds default to ``0, 1/4, 1/3, 1/2, 2/3, 3/4, 1`` (``tau`` skips 0).
    """
    rng = random.Random(seed)
    if thresholds is None:
        thresholds = [Fraction(0), Fraction(1, 4), *THRESHOLDS[:2], Fraction(2, 3),
                      Fraction(3, 4), Fraction(1)]
    taus = [t for t in thresholds if t > 0]
    out = []
    for _ in range(count):
        out.append(random_model(rng, rng.randint(1, max_agents), rng.randint(1, max_features),
                                rng.choice(list(thresholds)), rng.choice(taus),
                                rng.choice(list(modes))))
    return out


def permute(model: Model, agent_perm: Sequence[int], feature_perm: Sequence[int]) -> Model:
    """Relabel positions: agent ``i`` moves to ``agent_perm[i]``, likewise features."""
    n = len(agent_perm)
    in_masks = [0] * n
    val_masks = [0] * n
    for j, mask in enumerate(model.in_masks):
        new = 0
        for i in range(n):
            if mask >> i & 1:
                new |= 1 << agent_perm[i]
        in_masks[agent_perm[j]] = new
    for i, mask in enumerate(model.val_masks):
        new = 0
        for f, g in enumerate(feature_perm):
            if mask >> f & 1:
                new |= 1 << g
        val_masks[agent_perm[i]] = new
    return model.replace(in_masks=in_masks, val_masks=val_masks)


def canonical_key(model: Model) -> tuple:
    """Smallest (in_masks, val_masks) over all agent and feature relabellings."""
    n, k = len(model.agents), len(model.features)
    return min((m.in_masks, m.val_masks)
               for ap in permutations(range(n)) for fp in permutations(range(k))
               for m in [permute(model, ap, fp)])
