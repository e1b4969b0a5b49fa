"""Dense statevector engine for small multi-register circuits.

Qubit ordering is big-endian throughout: qubit 0 is the most significant
bit of a computational-basis index, matching top-to-bottom circuit wires.
Registers are contiguous qubit ranges. Every operation returns a new
StateVector and never mutates its input. Gates are plain 2x2 complex
arrays and are not required to be unitary; oracle paths apply
projector-like blocks directly.
"""

from __future__ import annotations

import numpy as np

I2 = np.eye(2, dtype=complex)
X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
XZ = X @ Z  # [[0,-1],[1,0]]
ZX = Z @ X  # [[0,1],[-1,0]]
MINUS_Z = -Z
MINUS_I = -I2
HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / np.sqrt(2.0)

# Canonical 8-slot gate bank addressed by the 3-qubit gate register.
# Slot 7 is an identity filler: zero blocks are never stored, so no
# encoder output ever addresses it.
GATE_BANK = (X, Z, MINUS_Z, XZ, ZX, MINUS_I, I2, I2)
GATE_LABELS = ("X", "Z", "-Z", "XZ", "ZX", "-I", "I", "I")


def ry(theta: float) -> np.ndarray:
    """Rotation about Y: [[cos t/2, -sin t/2], [sin t/2, cos t/2]]."""
    c = np.cos(theta / 2.0)
    s = np.sin(theta / 2.0)
    return np.array([[c, -s], [s, c]], dtype=complex)


class StateVector:
    """Amplitudes of a register of ``num_qubits`` qubits."""

    __slots__ = ("num_qubits", "amps")

    def __init__(self, num_qubits: int, amps):
        amps = np.asarray(amps, dtype=complex)
        if amps.shape != (1 << num_qubits,):
            raise ValueError(
                "amplitude vector has length %d, expected %d"
                % (amps.size, 1 << num_qubits)
            )
        self.num_qubits = num_qubits
        self.amps = amps

    @classmethod
    def zero(cls, num_qubits: int) -> "StateVector":
        amps = np.zeros(1 << num_qubits, dtype=complex)
        amps[0] = 1.0
        return cls(num_qubits, amps)

    @classmethod
    def basis(cls, num_qubits: int, index: int) -> "StateVector":
        amps = np.zeros(1 << num_qubits, dtype=complex)
        amps[index] = 1.0
        return cls(num_qubits, amps)

    def __repr__(self):
        return "StateVector(num_qubits=%d)" % self.num_qubits


def norm(state: StateVector) -> float:
    return float(np.linalg.norm(state.amps))


def inner_product(a: StateVector, b: StateVector) -> complex:
    """Conjugate-linear in the first argument."""
    if a.num_qubits != b.num_qubits:
        raise ValueError("states have different qubit counts")
    return complex(np.vdot(a.amps, b.amps))


def _check_qubit(state: StateVector, qubit: int):
    if not 0 <= qubit < state.num_qubits:
        raise IndexError("qubit %d out of range for %d qubits" % (qubit, state.num_qubits))


def _check_register(state: StateVector, register) -> list:
    qubits = list(register)
    for q in qubits:
        _check_qubit(state, q)
    return qubits


def _to_front(state: StateVector, axes: list):
    """Tensor view with ``axes`` moved to the front, plus the inverse
    permutation that undoes the move."""
    tensor = state.amps.reshape((2,) * state.num_qubits)
    rest = [a for a in range(state.num_qubits) if a not in axes]
    perm = axes + rest
    return tensor.transpose(perm), np.argsort(perm)


def apply_gate_1q(state: StateVector, qubit: int, g) -> StateVector:
    """Apply a 2x2 matrix to one qubit, identity elsewhere."""
    _check_qubit(state, qubit)
    g = np.asarray(g, dtype=complex)
    view = state.amps.reshape(1 << qubit, 2, -1)
    out = np.empty_like(view)
    out[:, 0, :] = g[0, 0] * view[:, 0, :] + g[0, 1] * view[:, 1, :]
    out[:, 1, :] = g[1, 0] * view[:, 0, :] + g[1, 1] * view[:, 1, :]
    return StateVector(state.num_qubits, out.reshape(-1))


def apply_hadamards(state: StateVector, register) -> StateVector:
    for qubit in _check_register(state, register):
        state = apply_gate_1q(state, qubit, HADAMARD)
    return state


def apply_controlled_bank(state: StateVector, ctrl_register, target: int, bank=GATE_BANK) -> StateVector:
    """For each computational value v of the control register, apply
    bank[v] to the target qubit on that branch."""
    ctrl = _check_register(state, ctrl_register)
    _check_qubit(state, target)
    if target in ctrl:
        raise ValueError("target qubit overlaps the control register")
    if len(bank) != 1 << len(ctrl):
        raise ValueError("bank size %d does not match register width %d" % (len(bank), len(ctrl)))
    tensor, inv = _to_front(state, ctrl + [target])
    shape = tensor.shape
    block = tensor.reshape(len(bank), 2, -1).copy()
    for v, g in enumerate(bank):
        a0 = block[v, 0].copy()
        a1 = block[v, 1]
        block[v, 0] = g[0, 0] * a0 + g[0, 1] * a1
        block[v, 1] = g[1, 0] * a0 + g[1, 1] * a1
    out = block.reshape(shape).transpose(inv).reshape(-1)
    return StateVector(state.num_qubits, out)


def apply_controlled_xmask(state: StateVector, ctrl_register, table, system_register) -> StateVector:
    """For control value m, XOR the system register's basis indices with
    table[m]. Masks must leave the last system qubit untouched (their
    lowest bit is zero). An empty control register applies table[0]
    unconditionally."""
    ctrl = _check_register(state, ctrl_register)
    system = _check_register(state, system_register)
    if set(ctrl) & set(system):
        raise ValueError("control and system registers overlap")
    width = len(system)
    for m, mask in table.items():
        if not 0 <= m < 1 << len(ctrl):
            raise ValueError("control value %d out of range" % m)
        if not 0 <= mask < 1 << width:
            raise ValueError("mask %d does not fit the system register" % mask)
        if mask & 1:
            raise ValueError("mask %d touches the last system qubit" % mask)
    tensor, inv = _to_front(state, ctrl + system)
    shape = tensor.shape
    block = tensor.reshape(1 << len(ctrl), 1 << width, -1).copy()
    indices = np.arange(1 << width)
    for m, mask in table.items():
        if mask:
            block[m] = block[m][indices ^ mask]
    out = block.reshape(shape).transpose(inv).reshape(-1)
    return StateVector(state.num_qubits, out)


def apply_cz(state: StateVector, qubit_a: int, qubit_b: int) -> StateVector:
    """Phase -1 where both qubits are 1."""
    _check_qubit(state, qubit_a)
    _check_qubit(state, qubit_b)
    if qubit_a == qubit_b:
        raise ValueError("controlled-Z needs two distinct qubits")
    tensor = state.amps.reshape((2,) * state.num_qubits).copy()
    sel = [slice(None)] * state.num_qubits
    sel[qubit_a] = 1
    sel[qubit_b] = 1
    tensor[tuple(sel)] *= -1.0
    return StateVector(state.num_qubits, tensor.reshape(-1))


def apply_cswap(state: StateVector, control: int, reg_a, reg_b) -> StateVector:
    """Swap two equal-width registers on the branch where ``control`` is 1."""
    _check_qubit(state, control)
    qa = _check_register(state, reg_a)
    qb = _check_register(state, reg_b)
    if len(qa) != len(qb):
        raise ValueError("swap registers must have equal width")
    if {control} & set(qa) or {control} & set(qb) or set(qa) & set(qb):
        raise ValueError("swap registers overlap")
    tensor, inv = _to_front(state, [control] + qa + qb)
    shape = tensor.shape
    block = tensor.reshape(2, 1 << len(qa), 1 << len(qb), -1).copy()
    block[1] = block[1].transpose(1, 0, 2)
    out = block.reshape(shape).transpose(inv).reshape(-1)
    return StateVector(state.num_qubits, out)


def project_register(state: StateVector, register, value: int):
    """Zero every branch where the register differs from ``value``.

    Returns the unnormalized projected state (full length) and its
    squared norm, the probability of observing ``value``.
    """
    qubits = _check_register(state, register)
    if not 0 <= value < 1 << len(qubits):
        raise ValueError("value %d out of range for a %d-qubit register" % (value, len(qubits)))
    tensor, inv = _to_front(state, qubits)
    shape = tensor.shape
    block = tensor.reshape(1 << len(qubits), -1).copy()
    keep = block[value].copy()
    block[:] = 0.0
    block[value] = keep
    out = block.reshape(shape).transpose(inv).reshape(-1)
    probability = float(np.sum(np.abs(keep) ** 2))
    return StateVector(state.num_qubits, out), probability
