"""Gate-encoded quantum memory simulation.

Store a matrix as per-block gate amplitudes, apply it to a state by
simulating a circuit whose gates are selected by the memory content,
and recover H @ psi on the post-selected branch together with the
success probability. A small VQE driver evaluates Pauli-term
Hamiltonians through the same pipeline.
"""

from .blockdecomp import (
    BlockDecomposition,
    block_diagonal,
    hi_times_pi,
    permutation_for,
    permutation_matrix,
    reconstruct,
    split_blocks,
    split_blocks_sparse,
)
from .circuit import (
    ApplyResult,
    Circuit,
    ProbabilityReport,
    RegisterLayout,
    build_circuit,
    prepare_input,
    run_and_extract,
    success_probability_bound_check,
)
from .encoding import (
    EncodedMemory,
    decode_gatevector,
    decode_memory,
    encode_block,
    encode_matrix,
    encode_memory,
    memory_from_gates,
    read_memory_file,
    unit_block,
    write_memory_file,
)
from .statevec import (
    GATE_BANK,
    GATE_LABELS,
    StateVector,
    apply_controlled_bank,
    apply_controlled_xmask,
    apply_cswap,
    apply_cz,
    apply_gate_1q,
    apply_hadamards,
    inner_product,
    norm,
    project_register,
    ry,
)
from .vqe import (
    AnsatzSpec,
    PauliTerm,
    RewrittenTerm,
    VqeConfig,
    VqeResult,
    ansatz_state,
    energy_curve,
    expectation,
    parse_hamiltonian,
    rewrite_term,
    vqe_minimize,
)

__version__ = "0.1.0"
