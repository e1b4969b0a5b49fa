"""Simulation of the memory-application circuit.

Register order, most significant first: the i-register (r qubits,
indexing positions in the memory's shift table), the 3-qubit gate
register, the (n-1)-qubit block-row register and the n-qubit system
register. The input state spreads the stored amplitudes over the first
three registers with the system carrying psi; the circuit applies the
shift permutation controlled by the i-register, the gate bank
controlled by the gate register (acting on the last system qubit), and
Hadamards over the i and gate registers. The all-zero branch of those
registers then carries H @ psi at the points (k = s // 2, system = s),
scaled by 1 / (zeta * 2^((r+3)/2)).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .blockdecomp import reconstruct
from .encoding import EncodedMemory, decode_memory
from .statevec import (
    HADAMARD,
    StateVector,
    apply_controlled_bank,
    apply_controlled_xmask,
    apply_gate_1q,
    norm,
)


@dataclass(frozen=True)
class RegisterLayout:
    """Qubit ranges of the four registers for a given memory."""

    r: int
    n: int

    @property
    def total_qubits(self) -> int:
        return self.r + 3 + (self.n - 1) + self.n

    @property
    def i_register(self) -> range:
        return range(0, self.r)

    @property
    def gate_register(self) -> range:
        return range(self.r, self.r + 3)

    @property
    def k_register(self) -> range:
        return range(self.r + 3, self.r + 3 + self.n - 1)

    @property
    def system_register(self) -> range:
        return range(self.r + 3 + self.n - 1, self.total_qubits)

    @property
    def last_system_qubit(self) -> int:
        return self.total_qubits - 1


@dataclass
class Circuit:
    """Ordered primitive operations: permutation column, gate bank,
    Hadamard column."""

    layout: RegisterLayout
    ops: list

    @property
    def operation_count(self) -> int:
        return len(self.ops)


@dataclass
class ApplyResult:
    output: np.ndarray
    success_probability: float
    scale: float
    oracle_error: float | None = None


@dataclass
class ProbabilityReport:
    probability: float
    zeta_sq: float
    r: int
    expected: float
    error: float
    ok: bool


def _check_input_state(mem: EncodedMemory, psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if psi.size != 1 << mem.n:
        raise ValueError("state has %d amplitudes, memory needs %d" % (psi.size, 1 << mem.n))
    if abs(np.linalg.norm(psi) - 1.0) > 1e-10:
        raise ValueError("input state must have unit norm")
    return psi


def prepare_input(mem: EncodedMemory, psi) -> StateVector:
    """Load the memory and the system state into the full register.

    The amplitude at basis point (m, slot, k, s) is raw_amp / zeta *
    psi[s], with m the position of the record's shift in i_table.
    """
    psi = _check_input_state(mem, psi)
    layout = RegisterLayout(mem.r, mem.n)
    position = {i: m for m, i in enumerate(mem.i_table)}
    nk = mem.n - 1
    amps = np.zeros(1 << layout.total_qubits, dtype=complex)
    for (i, k), vector in mem.records.items():
        for slot in range(8):
            amplitude = vector[slot]
            if amplitude:
                base = ((((position[i] << 3) | slot) << nk) | k) << mem.n
                amps[base : base + (1 << mem.n)] = (amplitude / mem.zeta) * psi
    return StateVector(layout.total_qubits, amps)


def build_circuit(mem: EncodedMemory) -> Circuit:
    """Permutation column (skipped when the only shift is 0), gate bank,
    then Hadamards on the i and gate registers."""
    layout = RegisterLayout(mem.r, mem.n)
    ops = []
    if mem.i_table != (0,):
        table = {m: 2 * i for m, i in enumerate(mem.i_table)}
        ops.append(("xmask", table))
    ops.append(("bank",))
    for qubit in layout.i_register:
        ops.append(("h", qubit))
    for qubit in layout.gate_register:
        ops.append(("h", qubit))
    return Circuit(layout, ops)


def run_circuit(circuit: Circuit, state: StateVector) -> StateVector:
    layout = circuit.layout
    for op in circuit.ops:
        if op[0] == "xmask":
            state = apply_controlled_xmask(state, layout.i_register, op[1], layout.system_register)
        elif op[0] == "bank":
            state = apply_controlled_bank(state, layout.gate_register, layout.last_system_qubit)
        elif op[0] == "h":
            state = apply_gate_1q(state, op[1], HADAMARD)
        else:
            raise ValueError("unknown operation %r" % (op[0],))
    return state


def run_and_extract(mem: EncodedMemory, psi, verify: bool = False) -> ApplyResult:
    """Simulate the circuit and read off the output points.

    output[s] sits at basis point (i = 0, gate = 0, k = s // 2,
    system = s) and equals scale * (H @ psi)[s]; the post-selection
    success probability is the squared norm of the output.
    """
    psi = _check_input_state(mem, psi)
    circuit = build_circuit(mem)
    state = run_circuit(circuit, prepare_input(mem, psi))
    if abs(norm(state) - 1.0) > 1e-9:
        raise RuntimeError("state norm drifted during simulation")
    n = mem.n
    s = np.arange(1 << n)
    output = state.amps[((s >> 1) << n) | s].copy()
    scale = 1.0 / (mem.zeta * 2.0 ** ((mem.r + 3) / 2.0))
    probability = float(np.sum(np.abs(output) ** 2))
    oracle_error = None
    if verify:
        matrix = reconstruct(decode_memory(mem))
        oracle_error = float(np.max(np.abs(output / scale - matrix @ psi)))
    return ApplyResult(output, probability, scale, oracle_error)


def success_probability_bound_check(mem: EncodedMemory, psi) -> ProbabilityReport:
    """Compare the measured post-selection probability against
    ||H psi||^2 / (zeta^2 * 2^(r+3))."""
    psi = _check_input_state(mem, psi)
    result = run_and_extract(mem, psi)
    matrix = reconstruct(decode_memory(mem))
    expected = float(np.linalg.norm(matrix @ psi) ** 2 / (mem.zeta**2 * 2.0 ** (mem.r + 3)))
    error = abs(result.success_probability - expected)
    return ProbabilityReport(
        probability=result.success_probability,
        zeta_sq=mem.zeta**2,
        r=mem.r,
        expected=expected,
        error=error,
        ok=error <= 1e-12,
    )
