"""Dynamic logic of threshold opinion diffusion and similarity-driven link formation.

Models carry agents, features, an influence relation and a valuation together
with exact rational thresholds; formulas are built from atoms, boolean
connectives and the update operators ``[diff]``, ``[net]`` and ``[sync]``.
"""

from .errors import *  # noqa: F401,F403
from .evaluator import (
    EquivalenceReport, atomic_agreement, first_difference, psi_holds, satisfies,
    sequences_equivalent,
)
from .formula import (
    And, Bottom, Dyn, Edge, Has, Iff, Implies, Not, Or, Pressure, Psi, Sim, Top, to_text,
)
from .io import (
    dumps_model, export_dot, load_model, loads_model, model_from_document, model_to_document,
    save_model,
)
from .macros import expand_macros, psi_formula
from .model import (
    Mode, Model, Op, Signature, UpdateSequence, apply_sequence, diffusion_update,
    network_update, new_model, similarity, stabilize, synchronous_update,
)
from .parser import parse
from .reducer import RewriteTrace, is_static, reduce
from .replace import (
    ReplaceabilityVerdict, SearchConfig, SearchResult, brute_force_replaceable, check_psi,
    classify_sequence, find_replacement, find_replacement_multi, search_irreplaceable,
)

__version__ = "0.1.0"
