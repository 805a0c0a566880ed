"""Numerical tools for Lie systems with compatible multisymplectic forms."""

from .errors import (
    ChartMismatchError,
    DegenerateFrameError,
    DegreeError,
    DimensionMismatchError,
    DomainExitError,
    IncompatibleReductionsError,
    MultisymError,
    NotBasicError,
    NotClosedError,
    NotProjectableError,
    UnknownExampleError,
    VarianceMismatchError,
)
from .exterior import (
    CONTRAVARIANT,
    COVARIANT,
    AlternatingTensor,
    annihilator,
    contraction_matrix_for_form,
    contraction_matrix_for_multivector,
    interior,
    matrix_rank,
    multi_indices,
    nondegeneracy_order,
    null_space,
    wedge,
    wedge_all,
)
from .calculus import (
    Chart,
    ChartMap,
    DiffBackend,
    DifferentialForm,
    MultiVectorField,
    VectorField,
    combine_fields,
    contract_field,
    exterior_derivative,
    lie_bracket,
    lie_derivative_form,
    lie_derivative_multivector,
    pullback,
)
from .liealg import (
    FieldFamily,
    LieSystem,
    StructureConstants,
    casimir_tensor,
    dual_coframe,
    invariant_volume,
    is_locally_automorphic,
    is_unimodular,
    lie_symmetry_residual,
    structure_constants,
)
from .msys import (
    Check,
    HamiltonianPair,
    MultisymplecticLieSystem,
    Report,
    bracket_hamiltonian_forms,
    bracket_hamiltonian_k1_forms,
    locally_hamiltonian_residual,
    one_nondegenerate_at,
    validate_system,
    verify_hamiltonian_form,
)
from .integrate import (
    TimeCoefficients,
    Trajectory,
    closed_form_schwarz_reduced,
    flow,
    integrate,
    monitor_invariant,
    symmetry_flow_test,
    write_csv,
)
from .reduction import (
    QuotientChart,
    ReductionScheme,
    momentum_map,
    project_field,
    reduce_form,
    reduce_system,
    relative_equilibria,
    verify_reduction_scheme,
)
from .reconstruction import (
    annihilator_intersection_dim,
    kernel_intersection_dim,
    reconstruct_field,
    reconstruct_form,
)
from .gallery import EXAMPLE_IDS, ExampleBundle, golden_check, load_example, reduced_system

__version__ = "0.1.0"
