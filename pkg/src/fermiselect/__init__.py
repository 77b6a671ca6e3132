"""Log-depth SELECT circuits for Jordan-Wigner Hamiltonians.

The package turns second-quantized fermionic Hamiltonians into
Clifford+T circuits applying the selected Pauli string of a linear
combination of unitaries, without ancilla qubits, and checks the
synthesized circuits against an independent Pauli oracle.
"""

from .pauli import (
    FermionHamiltonian,
    FermionTerm,
    Lower,
    Number,
    PauliLCU,
    PauliString,
    Raise,
    identity_string,
    jw_transform,
    jw_transform_term,
    pauli_apply,
    pauli_mul,
)
from .circuit_ir import (
    Circuit,
    Gate,
    ResourceReport,
    add_global_controls,
    asap_layers,
    chain_depth,
    compose,
    count_extension_points,
    emit_text,
    expand_macro,
    inverse,
    lower_macros,
    schedule,
)
from .gadgets import (
    GADGETS,
    address_bits,
    fanout_cnot,
    inject,
    inject_select_p,
    inject_select_q,
    inject_star_z,
    ladder_cascade,
    ladder_tree,
    multi_target_controlled_swap,
    select_p,
    select_q,
    swap_up,
    swap_up_star,
)
from .select_synth import (
    DecodeError,
    EncodingError,
    SelectionLayout,
    controlled_select,
    decode_index,
    encode_lcu,
    encode_term,
    slots_needed,
    synth_select_general,
    synth_select_k2,
)
from .simulator import (
    apply_circuit,
    apply_classical_control,
    basis_state,
    random_state,
    unitary_of,
    verify_select,
    zero_state,
)
from .resources import FORMULAS, check_against_formulas, measure

__version__ = "0.1.0"

__all__ = [
    "FermionHamiltonian",
    "FermionTerm",
    "Lower",
    "Number",
    "PauliLCU",
    "PauliString",
    "Raise",
    "identity_string",
    "jw_transform",
    "jw_transform_term",
    "pauli_apply",
    "pauli_mul",
    "Circuit",
    "Gate",
    "ResourceReport",
    "add_global_controls",
    "asap_layers",
    "chain_depth",
    "compose",
    "count_extension_points",
    "emit_text",
    "expand_macro",
    "inverse",
    "lower_macros",
    "schedule",
    "GADGETS",
    "address_bits",
    "fanout_cnot",
    "inject",
    "inject_select_p",
    "inject_select_q",
    "inject_star_z",
    "ladder_cascade",
    "ladder_tree",
    "multi_target_controlled_swap",
    "select_p",
    "select_q",
    "swap_up",
    "swap_up_star",
    "DecodeError",
    "EncodingError",
    "SelectionLayout",
    "controlled_select",
    "decode_index",
    "encode_lcu",
    "encode_term",
    "slots_needed",
    "synth_select_general",
    "synth_select_k2",
    "apply_circuit",
    "apply_classical_control",
    "basis_state",
    "random_state",
    "unitary_of",
    "verify_select",
    "zero_state",
    "FORMULAS",
    "check_against_formulas",
    "measure",
    "__version__",
]
