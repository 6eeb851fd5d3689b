"""Toolkit for the logic of knowing and publicly inspecting values.

Parse and evaluate knowing-value formulas over pointed epistemic models,
apply public-inspection updates, decide satisfiability and entailment via
dependency closure with canonical-model synthesis, check bisimilarity,
and verify Hilbert-style proofs.
"""

from knowval.syntax import (
    And,
    DepAtom,
    Formula,
    FormulaError,
    Inspect,
    Kv,
    Not,
    ParseError,
    RESERVED_AGENT,
    TOP,
    Top,
    agents_of,
    all_formulas,
    parse_formula,
    print_formula,
    signature_of,
    translate,
)
from knowval.semantics import (
    Model,
    ModelError,
    PointedModel,
    enumerate_models,
    enumerate_models_exact,
    evaluate,
    extend_signature,
    globally_true,
    inspect_update,
    load_model,
    load_pointed,
    make_model,
    model_from_dict,
    model_to_dict,
    pointed_models,
    validate_model,
)
from knowval.dependency import (
    FD,
    FDSet,
    FormulaTooLargeError,
    Literal,
    attribute_closure,
    entails,
    fd_implied,
    literals_consistent,
    satisfiable,
)
from knowval.canonical import (
    CanonicalModelSpec,
    canonical_model_multi,
    canonical_model_single,
    closed_sets,
)
from knowval.bisim import (
    BisimRelation,
    bisimilar_multi,
    bisimilar_single,
    difference_pattern,
    logically_equivalent,
)
from knowval.proofcheck import Proof, ProofLine, Verdict, check_proof
from knowval.derivations import builtin_derivations
from knowval.kernel import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"
