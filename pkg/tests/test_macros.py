from fractions import Fraction
from pathlib import Path

import pytest

import oracle
from netlogic import Mode, UnknownAgent, UnknownKind, new_model, parse, satisfies, to_text
from netlogic.corpus import enumerate_models, signature
from netlogic.evaluator import psi_holds
from netlogic.formula import Bottom, Or, Top, subformulas
from netlogic.macros import expand_macros, expand_pressure, expand_similarity, psi_formula

GOLDEN = Path(__file__).parent / "golden"
HALF = Fraction(1, 2)


def test_pressure_expansion_on_mt(mt):
    phi = expand_pressure("b", "f", mt.signature, HALF)
    assert satisfies(mt, phi)
    assert not satisfies(mt, expand_pressure("a", "f", mt.signature, HALF))


def test_pressure_expansion_disjunct_count():
    sig = signature(2, 1)
    # neighbourhoods {a}, {b}, {a,b}; adopters meeting 1/2: 1 + 1 + 3
    phi = expand_pressure("b", "f", sig, HALF)
    assert to_text(phi).count("|") == 4
    # unanimity keeps only G = N
    phi = expand_pressure("b", "f", sig, Fraction(1))
    assert to_text(phi).count("|") == 2


def test_pressure_expansion_false_without_influencers():
    sig = signature(3, 1)
    phi = expand_pressure("a", "f", sig, Fraction(1, 3))
    for m in enumerate_models(3, 1, [HALF], [Fraction(1, 3)]):
        if m.in_masks[0] == 0:
            assert not satisfies(m, phi)


def test_similarity_expansion():
    sig = signature(2, 2)
    assert satisfies(new_model("ab", "fg", [], {"a": ["f"]}, "1/2", "1/2"),
                     expand_similarity("a", "b", sig, HALF))
    tautology = expand_similarity("a", "b", sig, Fraction(0))
    assert all(satisfies(m, tautology) for m in enumerate_models(2, 2, [0], [1]))
    self_sim = expand_similarity("a", "a", sig, Fraction(1))
    assert all(satisfies(m, self_sim) for m in enumerate_models(2, 2, [1], [1]))
    with pytest.raises(UnknownAgent):
        expand_similarity("a", "z", sig, HALF)


def test_expansions_match_semantics_exhaustively():
    sig = signature(3, 2)
    for omega, tau in [(HALF, HALF), (Fraction(1, 3), Fraction(2, 3)), (Fraction(1), Fraction(1))]:
        press = {(a, f): expand_pressure(a, f, sig, tau) for a in sig.agents for f in sig.features}
        sim = {(a, b): expand_similarity(a, b, sig, omega) for a in sig.agents for b in sig.agents}
        for m in enumerate_models(3, 2, [omega], [tau]):
            if m.val_masks[2]:  # a quarter of the corpus keeps this well under a second
                continue
            r = oracle.ref(m)
            for (a, f), phi in press.items():
                assert satisfies(m, phi) == oracle.pressured(r, a, f)
            for (a, b), phi in sim.items():
                assert satisfies(m, phi) == oracle.similar(r, a, b)


@pytest.mark.parametrize("kind, n", [("diff", 0), ("net", 0), ("diffnet", 0),
                                     ("netdiff", 0), ("netdiff", 1)])
def test_psi_golden(kind, n):
    expected = (GOLDEN / f"psi_{kind}_{n}.txt").read_text().strip()
    assert to_text(psi_formula(kind, n, signature(2, 1), HALF, HALF)) == expected
    assert parse(expected) == psi_formula(kind, n, signature(2, 1), HALF, HALF)


def test_psi_kind_aliases():
    sig = signature(2, 1)
    assert psi_formula("△□", 0, sig, HALF, HALF) == psi_formula("diffnet", 0, sig, HALF, HALF)
    with pytest.raises(UnknownKind):
        psi_formula("sideways", 0, sig, HALF, HALF)


def test_psi_irreflexive_skips_self_pairs():
    sig = signature(2, 1)
    text = to_text(psi_formula("diff", 0, sig, HALF, HALF, Mode.IRREFLEXIVE))
    assert text == "(N(a,b) | !sim(a,b)) & (N(b,a) | !sim(b,a))"


def test_netdiff_zero_equivalent_to_net():
    for m in enumerate_models(2, 1, [HALF], [HALF, Fraction(1)]):
        assert psi_holds(m, "netdiff", 0) == psi_holds(m, "net", 0)


def test_psi_semantics_agree_with_constructed_formulas():
    # direct evaluation, macro formula, fully expanded formula, reference
    for n_agents, n_features in [(2, 1), (2, 2), (3, 1)]:
        sig = signature(n_agents, n_features)
        for mode in Mode:
            for omega, tau in [(HALF, HALF), (Fraction(1, 3), Fraction(1))]:
                kinds = [("diff", 0), ("net", 0), ("diffnet", 0)] + \
                    [("netdiff", n) for n in range(n_agents)]
                built = {k: (psi_formula(*k, sig, omega, tau, mode),
                             psi_formula(*k, sig, omega, tau, mode, expand=True)) for k in kinds}
                for i, m in enumerate(enumerate_models(n_agents, n_features, [omega], [tau], mode)):
                    if i % 7:
                        continue
                    r = oracle.ref(m)
                    for k, (macro, expanded) in built.items():
                        truth = oracle.psi(r, *k)
                        assert psi_holds(m, *k) == truth
                        assert satisfies(m, macro) == truth
                        assert satisfies(m, expanded) == truth


def test_expand_macros_leaves_no_macro_atoms(mt):
    phi = parse("[sync] (sim(a,b) -> pressure(b,f)) & psi_netdiff(1) | psi_diffnet")
    out = expand_macros(phi, mt.signature, mt.omega, mt.tau)
    kinds = {type(node).__name__ for node in subformulas(out)}
    assert not kinds & {"Sim", "Pressure", "Psi"}
    assert satisfies(mt, out) == satisfies(mt, phi)


def test_empty_junctions():
    sig = signature(1, 1)
    # a single agent can only be influenced by itself
    phi = expand_pressure("a", "f", sig, HALF, Mode.IRREFLEXIVE)
    assert phi == Bottom()
    assert isinstance(expand_similarity("a", "a", sig, Fraction(0)), (Or, Top))
