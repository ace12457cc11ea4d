from .chow import (
    DegreeReport,
    KernelResult,
    ResolutionProblem,
    ValidatedProblem,
    Witness,
    base_change_cokernel,
    base_change_kernel,
    chow_group,
    degree_report,
    degree_reports,
    h1,
    ideal_I,
    is_special,
    j_cohomology,
    oracle_check,
    validate,
)
from .exceptions import (
    CrossCheckMismatchError,
    DegreeTooLargeError,
    GammaSetTooLargeError,
    GroupTooLargeError,
    InputError,
    InvariantViolationError,
    PreconditionError,
    ProblemParseError,
    RankDeficientError,
    ResourceBoundError,
    TorsionQuotientError,
    TorusChowError,
    UnstableSublatticeError,
    ValidationError,
)
from .groups import (
    FiniteActionGroup,
    MatrixAction,
    SignedPermutation,
    SubgroupHandle,
    all_subgroups,
    all_subgroups_up_to_conjugacy,
    close_group,
    quaternion_group,
    symmetric_group,
)
from .lattice import (
    AbelianGroupStructure,
    IntegerMatrix,
    SmithDecomposition,
    Sublattice,
    intersect,
    kernel_basis,
    membership,
    quotient_structure,
    smith_normal_form,
    sublattice_from_generators,
)
from .limits import Limits, get_limits, set_limits, switch_limits
from .problems import (
    ProblemFile,
    bundled_problem,
    norm_one_problem,
    parse_problem,
    permutation_problem,
    quaternion_problem,
    signed_symmetric_problem,
    split_problem,
)
from .symalg import HomogeneousElement, induce, invariants, monomial_basis, symmetric_power_action
from .weil import GammaSet, StratumDescriptor, lemma12_check, strata

__all__ = [
    "AbelianGroupStructure",
    "CrossCheckMismatchError",
    "DegreeReport",
    "DegreeTooLargeError",
    "FiniteActionGroup",
    "GammaSet",
    "GammaSetTooLargeError",
    "GroupTooLargeError",
    "HomogeneousElement",
    "InputError",
    "IntegerMatrix",
    "InvariantViolationError",
    "KernelResult",
    "Limits",
    "MatrixAction",
    "PreconditionError",
    "ProblemFile",
    "ProblemParseError",
    "RankDeficientError",
    "ResolutionProblem",
    "ResourceBoundError",
    "SignedPermutation",
    "SmithDecomposition",
    "StratumDescriptor",
    "SubgroupHandle",
    "Sublattice",
    "TorsionQuotientError",
    "TorusChowError",
    "UnstableSublatticeError",
    "ValidatedProblem",
    "ValidationError",
    "Witness",
    "all_subgroups",
    "all_subgroups_up_to_conjugacy",
    "base_change_cokernel",
    "base_change_kernel",
    "bundled_problem",
    "chow_group",
    "close_group",
    "degree_report",
    "degree_reports",
    "get_limits",
    "h1",
    "ideal_I",
    "induce",
    "intersect",
    "invariants",
    "is_special",
    "j_cohomology",
    "kernel_basis",
    "lemma12_check",
    "membership",
    "monomial_basis",
    "norm_one_problem",
    "oracle_check",
    "parse_problem",
    "permutation_problem",
    "quaternion_group",
    "quaternion_problem",
    "quotient_structure",
    "set_limits",
    "signed_symmetric_problem",
    "smith_normal_form",
    "split_problem",
    "strata",
    "sublattice_from_generators",
    "switch_limits",
    "symmetric_group",
    "symmetric_power_action",
]
