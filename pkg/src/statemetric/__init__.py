"""Metrics on state spaces of finite-dimensional C*-algebras from compact group actions."""
from .algebra import (Algebra, DensityState, HermitianBasis, basis_state, hermitian_basis, maximally_mixed,
                      numerical_radius, operator_norm, pair_state, random_hermitian, random_state)
from .errors import ConstructionError, InfeasibleError, InputError, KernelError
from .groups import (FiniteGroup, LengthFunction, LieGenerators, UnitaryImplementedAction, act,
                     conditional_expectation, cyclic_group, is_ergodic, product_group, word_length)
from .instances import commutative, cyclic_commutative, fuzzy_sphere, fuzzy_torus
from .metric import (DistanceProblem, DistanceResult, MetricContext, diameter_bound, distance_matrix, quotient_radius,
                     spectral_distance)
from .report import Report, export, load_report, run_scenario
from .scenario import Scenario, ScenarioError, load_scenario, parse_scenario
from .seminorms import (DiracSeminorm, LengthLipschitzSeminorm, LieSeminorm, ScaledSeminorm, build_dirac_matrix,
                        dirac_seminorm, holder_seminorm, length_lipschitz_seminorm, lie_seminorm,
                        scale_seminorm)
from .suite import SuiteResult, Verdict, verify_suite

__version__ = "0.1.0"

__all__ = [
    "act",
    "Algebra",
    "basis_state",
    "build_dirac_matrix",
    "commutative",
    "conditional_expectation",
    "ConstructionError",
    "cyclic_commutative",
    "cyclic_group",
    "DensityState",
    "diameter_bound",
    "dirac_seminorm",
    "DiracSeminorm",
    "distance_matrix",
    "DistanceProblem",
    "DistanceResult",
    "export",
    "FiniteGroup",
    "fuzzy_sphere",
    "fuzzy_torus",
    "hermitian_basis",
    "HermitianBasis",
    "holder_seminorm",
    "InfeasibleError",
    "InputError",
    "is_ergodic",
    "KernelError",
    "length_lipschitz_seminorm",
    "LengthFunction",
    "LengthLipschitzSeminorm",
    "lie_seminorm",
    "LieGenerators",
    "LieSeminorm",
    "load_report",
    "load_scenario",
    "maximally_mixed",
    "MetricContext",
    "numerical_radius",
    "operator_norm",
    "pair_state",
    "parse_scenario",
    "product_group",
    "quotient_radius",
    "random_hermitian",
    "random_state",
    "Report",
    "run_scenario",
    "scale_seminorm",
    "ScaledSeminorm",
    "Scenario",
    "ScenarioError",
    "spectral_distance",
    "SuiteResult",
    "UnitaryImplementedAction",
    "Verdict",
    "verify_suite",
    "word_length",
]
