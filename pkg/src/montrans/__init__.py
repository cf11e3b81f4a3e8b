"""Subsequential transducers with outputs in a pluggable monoid.

The package provides the output-monoid algebra (``montrans.monoid``), the
machine model with evaluation and serialization (``montrans.transducer``),
four-stage minimization (``montrans.minimize``), exact equivalence and
isomorphism oracles (``montrans.oracle``), an active learner
(``montrans.learner``) and a command-line interface (``montrans.cli``).
"""

from .errors import (
    BudgetExceeded,
    InternalInconsistency,
    IterationBudgetExceeded,
    MalformedElement,
    MontransError,
    NotDivisible,
    NotInvertible,
    NotMinimalInput,
    SchemaError,
    SearchBoundExceeded,
    UnknownGenerator,
    UnknownLetter,
)
from .learner import (
    Defect,
    DefectKind,
    LearnLimits,
    LearnStats,
    ObservationTable,
    apply_defect,
    build_hypothesis,
    find_defect,
    learn,
    process_counterexample,
)
from .minimize import (
    StagedMinimization,
    check_minimal,
    minimize,
    observe,
    prefix,
    reach,
    state_lgcds,
    total,
)
from .monoid import (
    CommutativeMonoid,
    CyclicGroup,
    FreeMonoid,
    Monoid,
    NatAddMonoid,
    TraceMonoid,
    factor_left_invertible,
    left_divide_partial,
    lgcd_family,
    make_monoid,
    monoid_from_wire,
    mul_partial,
    red_row,
    render_partial,
    rows_equal_up_to_left_invertible,
)
from .oracle import (
    CounterExample,
    adversarial_oracle,
    brute_force_diff,
    equivalence_oracle,
    iso_check,
    membership_oracle,
    words_in_length_lex,
)
from .transducer import Transducer, Word, deserialize, parse_word, render_word

__all__ = [
    "BudgetExceeded",
    "CommutativeMonoid",
    "CounterExample",
    "CyclicGroup",
    "Defect",
    "DefectKind",
    "FreeMonoid",
    "InternalInconsistency",
    "IterationBudgetExceeded",
    "LearnLimits",
    "LearnStats",
    "MalformedElement",
    "Monoid",
    "MontransError",
    "NatAddMonoid",
    "NotDivisible",
    "NotInvertible",
    "NotMinimalInput",
    "ObservationTable",
    "SchemaError",
    "SearchBoundExceeded",
    "StagedMinimization",
    "TraceMonoid",
    "Transducer",
    "UnknownGenerator",
    "UnknownLetter",
    "Word",
    "adversarial_oracle",
    "apply_defect",
    "brute_force_diff",
    "build_hypothesis",
    "check_minimal",
    "deserialize",
    "equivalence_oracle",
    "factor_left_invertible",
    "find_defect",
    "iso_check",
    "learn",
    "left_divide_partial",
    "lgcd_family",
    "make_monoid",
    "membership_oracle",
    "minimize",
    "monoid_from_wire",
    "mul_partial",
    "observe",
    "parse_word",
    "prefix",
    "process_counterexample",
    "reach",
    "red_row",
    "render_partial",
    "render_word",
    "rows_equal_up_to_left_invertible",
    "state_lgcds",
    "total",
    "words_in_length_lex",
]

__version__ = "0.1.0"
