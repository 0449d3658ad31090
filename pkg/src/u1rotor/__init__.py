"""Walsh-series circuit synthesis and Trotter evolution for a 2+1D U(1) rotor lattice."""

from .walsh import (
    DiagonalValues,
    WalshSeries,
    binary_to_gray,
    bit_reverse,
    embed,
    fwt,
    gray_rank,
    inverse_fwt,
    l1_norm,
    merge,
    sequency_sorted,
    series_from_state_values,
    state_values,
    threshold_truncate,
    walsh_value,
)
from .lattice import (
    Digitization,
    LatticeSpec,
    ResourceLimitError,
    WeaveMatrix,
    WeaveUnavailableError,
    b_grid,
    b_max_compact,
    b_max_noncompact,
    builtin_weave,
    digitize,
    embed_positions,
    identity_weave,
    load_weave,
    r_grid,
    save_weave,
    weave_from_matrix,
)
from .hamiltonian import (
    BilinearTerm,
    CosineTerm,
    HamiltonianModel,
    build_model,
    cosine_rows,
    dense_diagonals,
    dense_electric,
    dense_matrix,
    diagonal_of_term,
    electric_quadratic_form,
    electric_terms,
    ft_matrix,
    ground_state,
    magnetic_quadratic_form,
    magnetic_terms,
    noncompact_mode_frequencies,
    noncompact_spectrum_oracle,
    plaquette_expectation,
)
from .circuits import (
    Circuit,
    Gate,
    exact_circuit,
    exp_walsh,
    export_qasm,
    gate_count,
    qft_circuit,
    sequency_gate_counts,
    simplify_cnots,
    truncated_circuit,
)
from .trotter import (
    ErrorBudget,
    NDropReport,
    ThetaPolicy,
    TrotterPlan,
    error_bound,
    factor_series,
    hamiltonian_series,
    n_drop_monotonicity_check,
    step_circuit,
)
from .simulator import (
    apply,
    circuit_unitary,
    electric_ground_state,
    exact_evolution,
    load_qasm,
    loschmidt,
    read_qasm,
)

__version__ = "0.1.0"
