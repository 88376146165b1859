"""Dividing and forking independence over generic K_n-free graphs.

A library and CLI that decides dividing of conjunctive formula instances and
dividing/forking/edge independence of vertex sets in the theory of the
generic K_n-free graph, through finite graph-theoretic criteria, and
cross-validates every criterion against a definition-level brute-force
oracle at desk scale.
"""

from .formula import (
    ConjFormula,
    EdgeConstraints,
    FormulaClass,
    FormulaError,
    InconsistentInstanceError,
    OptimalCandidate,
    conj,
    edge_constraints,
    formula_from_json,
    formula_to_json,
    instantiate,
    is_consistent,
    optimal_candidate,
    positive_edge_support,
    union_constraints,
    validate,
)
from .graph import (
    CliqueWitness,
    Graph,
    GraphError,
    PointedGraph,
    find_clique,
    graph_from_json,
    graph_to_json,
    is_kn_free,
    qf_type_equal_over,
    random_kn_free,
)
from .independence import (
    BoundWitness,
    DividesVerdict,
    FormulaBoundWitness,
    Violation,
    dividing_indep,
    divides_formula,
    divides_formula_t0,
    edge_indep,
    forking_indep,
    forks_disjunction,
    formula_kn_bound,
    full_existence,
    kn_bound,
)
from .oracle import (
    OracleVerdict,
    TemplateSpace,
    dividing_indep_oracle,
    divides_oracle,
    divides_oracle_t0,
    full_diagram_formula,
)
from .problem import ProblemError, ProblemFile, load_problem, save_problem
from .sequences import (
    BaseType,
    SequenceTemplate,
    SequenceWindow,
    base_type_of,
    build_fork_nondivide_example,
    check_k_inconsistent,
    dichotomy_scan,
    enumerate_templates,
    gamma,
    gamma_template,
    is_template_valid,
    realize_template,
    verify_fork_nondivide,
    verify_fork_nondivide_instance,
)

__version__ = "0.1.0"
