"""Finite-universe engine for multivalued functions, relational
constraints, their closure operators, and the Galois connections
between them."""

from .universe import (
    ArityMismatchError,
    Relation,
    Universe,
    UniverseMismatchError,
    compose_tuple,
    empty_relation,
    equality_relation,
    extend_compose,
    full_relation,
    relation_from_tuples,
    tuple_rank,
    tuple_unrank,
)
from .multifunction import (
    FunctionClass,
    MultiFunction,
    covering_closure,
    empty_valued,
    function_class,
    image_of_columns,
    image_of_relation,
    is_value_restriction,
    single_valued,
    substitution_closure,
    substitution_instances,
    total_substitution_closure,
)
from .constraint import (
    Bounds,
    Constraint,
    ConstraintSet,
    Scheme,
    canonical_scheme,
    compose_schemes,
    constraint_set,
    empty_constraint,
    equality_constraint,
    identity_scheme,
    is_conjunctive_minor,
    is_finite_relaxation,
    is_relaxation,
    is_weak_conjunctive_minor,
    local_closure,
    minor_closure,
    tight_conjunctive_minor,
    trivial_constraint,
    weak_minor_closure,
)
from .enumerators import (
    Budget,
    BudgetExceededError,
    all_constraints,
    all_functions,
    all_relations,
    all_schemes,
    sample_class,
    sample_constraint_set,
    sample_function,
    sample_relation,
)
from .galois import (
    ConstraintFactorizationReport,
    FunctionFactorizationReport,
    SatisfactionTable,
    SeparationReport,
    definability_closure,
    function_side_closure,
    satisfied_constraints,
    satisfies,
    satisfies_all,
    satisfying_functions,
    satisfying_predicate,
    separating_constraint,
    separating_function,
    separating_partial_function,
    separating_total_function,
    verify_constraint_factorization,
    verify_function_factorization,
)

__version__ = "0.1.0"
