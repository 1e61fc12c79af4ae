import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

import oracle
from netlogic import (
    Mode, Op, UnknownAgent, UnknownFeature, is_static, parse, reduce, satisfies, to_text,
)
from netlogic.corpus import enumerate_models, random_models, signature
from netlogic.formula import (
    And, Dyn, Edge, Has, Not, Pressure, Psi, Sim, dynamic_depth, size, subformulas,
)
from netlogic.macros import expand_pressure, expand_similarity
from strategies import models, random_formula

HALF = Fraction(1, 2)
SIG = signature(2, 1)
THIRDS = [Fraction(1, 3), HALF, Fraction(1)]


def _reduce(text, mode=Mode.LITERAL, expand=False):
    return reduce(parse(text), SIG, HALF, HALF, mode, expand)


@pytest.mark.parametrize("text, expected", [
    ("[diff] N(a,b)", "N(a,b)"),
    ("[net] has(a,f)", "has(a,f)"),
    ("[sync] !(N(a,b) & has(a,f))", "!((N(a,b) | sim(a,b)) & (has(a,f) | pressure(a,f)))"),
    ("[net] N(a,b)", "N(a,b) | sim(a,b)"),
    ("[diff] has(a,f)", "has(a,f) | pressure(a,f)"),
    ("[sync] N(a,b)", "N(a,b) | sim(a,b)"),
    ("[diff] N(a,b) & [net] has(b,f)", "N(a,b) & has(b,f)"),
])
def test_examples(text, expected):
    out, _ = _reduce(text)
    assert to_text(out) == expected


def test_sync_example_trace():
    out, trace = _reduce("[sync] !(N(a,b) & has(a,f))")
    assert [rule for rule, _, _ in trace.steps] == \
        ["sync-neg", "sync-and", "sync-edge", "sync-feature"]
    assert trace.replay(parse("[sync] !(N(a,b) & has(a,f))")) == out


@pytest.mark.parametrize("text, static", [
    ("N(a,b) | sim(a,b)", True),
    ("[sync] N(a,b)", False),
    ("psi_netdiff(2)", False),
    ("psi_netdiff(0) & psi_diff & psi_net", True),
    ("psi_diffnet", False),
    ("!(pressure(a,f) -> true)", True),
])
def test_is_static(text, static):
    assert is_static(parse(text)) is static


def test_innermost_operator_first():
    _, trace = _reduce("[net] [diff] N(a,b)")
    assert trace.steps[0][0] == "diff-edge"
    assert trace.steps[1] == ("net-edge", Dyn(Op.NET, Edge("a", "b")),
                              parse("N(a,b) | sim(a,b)"))


def test_leftmost_first_among_equals():
    _, trace = _reduce("[diff] N(a,b) & [net] N(b,a)")
    assert [rule for rule, _, _ in trace.steps] == ["diff-edge", "net-edge"]


def test_unknown_names():
    with pytest.raises(UnknownAgent):
        _reduce("[diff] N(a,z)")
    with pytest.raises(UnknownFeature):
        _reduce("[net] has(a,q)")
    with pytest.raises(UnknownAgent):
        _reduce("N(z,a)")


def test_irreflexive_self_loop_is_frozen():
    out, trace = _reduce("[net] N(a,a)", Mode.IRREFLEXIVE)
    assert out == Edge("a", "a") and len(trace) == 1
    out, _ = _reduce("[sync] N(a,b)", Mode.IRREFLEXIVE)
    assert to_text(out) == "N(a,b) | sim(a,b)"


def test_static_input_is_untouched():
    phi = parse("(N(a,b) -> sim(a,b)) <-> !pressure(b,f) | psi_diff")
    out, trace = reduce(phi, SIG, HALF, HALF)
    assert out is phi and len(trace) == 0


def test_expand_mode_removes_macros():
    out, trace = _reduce("[sync] (sim(a,b) | pressure(b,f)) & psi_diffnet", expand=True)
    assert not {type(node) for node in subformulas(out)} & {Sim, Pressure, Psi, Dyn}
    assert {rule for rule, _, _ in trace.steps} >= {"expand-sim", "expand-pressure",
                                                    "expand-psi", "desugar-or"}
    phi = parse("[sync] (sim(a,b) | pressure(b,f)) & psi_diffnet")
    for m in enumerate_models(2, 1, [HALF], [HALF]):
        assert satisfies(m, out) == satisfies(m, phi)


def test_psi_macros_are_unfolded_only_when_dynamic():
    out, trace = _reduce("psi_diffnet & psi_diff")
    assert is_static(out) and trace.steps[0][0] == "expand-psi"
    assert isinstance(out, And) and out.right == Psi("diff")


@pytest.mark.parametrize("mode", list(Mode))
def test_each_axiom_is_valid(mode):
    for m in random_models(17, 150, 3, 2, modes=(mode,)):
        sig = m.signature
        press = {(a, f): expand_pressure(a, f, sig, m.tau, mode)
                 for a in sig.agents for f in sig.features}
        for a in sig.agents:
            for b in sig.agents:
                sim = expand_similarity(a, b, sig, m.omega)
                edge = Edge(a, b)
                grown = satisfies(m, edge) or satisfies(m, sim)
                if mode is Mode.IRREFLEXIVE and a == b:
                    grown = satisfies(m, edge)
                assert satisfies(m, Dyn(Op.DIFF, edge)) == satisfies(m, edge)
                assert satisfies(m, Dyn(Op.NET, edge)) == grown
                assert satisfies(m, Dyn(Op.SYNC, edge)) == grown
            for f in sig.features:
                x = Has(a, f)
                grown = satisfies(m, x) or satisfies(m, press[a, f])
                assert satisfies(m, Dyn(Op.NET, x)) == satisfies(m, x)
                assert satisfies(m, Dyn(Op.DIFF, x)) == grown
                assert satisfies(m, Dyn(Op.SYNC, x)) == grown


def test_preservation_exhaustive_small_models():
    # every model over two agents and one feature, formulas of dynamic depth <= 3
    rng = random.Random(11)
    formulas = [random_formula(rng, SIG, rng.randint(2, 9), 3) for _ in range(40)]
    for mode in Mode:
        for omega in THIRDS:
            for tau in THIRDS:
                corpus = list(enumerate_models(2, 1, [omega], [tau], mode))
                for phi in formulas:
                    out, _ = reduce(phi, SIG, omega, tau, mode)
                    assert is_static(out)
                    for m in corpus:
                        assert satisfies(m, out) == satisfies(m, phi)


def test_preservation_against_reference():
    rng = random.Random(23)
    for m in random_models(29, 150, 3, 2, modes=tuple(Mode)):
        phi = random_formula(rng, m.signature, rng.randint(1, 10), 3)
        out, _ = reduce(phi, m.signature, m.omega, m.tau, m.mode)
        assert satisfies(m, out) == oracle.holds(oracle.ref(m), phi)


@given(models(max_agents=3, max_features=2))
def test_idempotent(m):
    rng = random.Random(repr((m.in_masks, m.val_masks)))
    phi = random_formula(rng, m.signature, 8, 3)
    out, _ = reduce(phi, m.signature, m.omega, m.tau, m.mode)
    again, trace = reduce(out, m.signature, m.omega, m.tau, m.mode)
    assert again is out and len(trace) == 0


@settings(max_examples=50)
@given(models(max_agents=3, max_features=2))
def test_trace_replays(m):
    # replay rebuilds the output as a tree, so keep the inputs small
    rng = random.Random(repr((m.in_masks, m.val_masks)))
    phi = random_formula(rng, m.signature, 5, 2)
    for expand in (False, True):
        out, trace = reduce(phi, m.signature, m.omega, m.tau, m.mode, expand)
        assert trace.replay(phi) == out


def test_replay_rejects_foreign_trace():
    _, trace = _reduce("[diff] N(a,b)")
    with pytest.raises(ValueError):
        trace.replay(parse("N(b,a)"))


def test_termination_bound_on_axiom_fragment():
    # one operator over negation, conjunction and primitive atoms: every
    # step consumes one node below the operator
    rng = random.Random(31)
    for m in random_models(37, 300, 4, 3, modes=tuple(Mode)):
        phi = _plain(rng, m.signature, rng.randint(1, 12))
        phi = Dyn(rng.choice(list(Op)), phi)
        _, trace = reduce(phi, m.signature, m.omega, m.tau, m.mode)
        assert len(trace) <= size(phi) * dynamic_depth(phi)


def test_nested_operators_terminate():
    # nested operators expand the macros introduced by inner ones, so the
    # step count grows with the size of those definitions, but stays finite
    rng = random.Random(41)
    for m in random_models(43, 100, 3, 2, modes=tuple(Mode)):
        phi = random_formula(rng, m.signature, rng.randint(4, 10), 4)
        out, trace = reduce(phi, m.signature, m.omega, m.tau, m.mode)
        assert is_static(out)
        rules = {rule for rule, _, _ in trace.steps}
        assert all(rule.split("-")[0] in {"diff", "net", "sync", "expand", "desugar",
                                          "repeat"} for rule in rules)


def _plain(rng, sig, size):
    if size <= 1:
        a, b = rng.choice(sig.agents), rng.choice(sig.agents)
        return rng.choice([Edge(a, b), Has(a, rng.choice(sig.features))])
    if rng.random() < 0.3:
        return Not(_plain(rng, sig, size - 1))
    left = rng.randint(1, size - 1)
    return And(_plain(rng, sig, left), _plain(rng, sig, size - left))
