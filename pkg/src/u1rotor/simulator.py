"""Dense statevector execution and exact reference evolution.

Basis states are little-endian: bit q of the state index is qubit q.  Gate
application is sparse (index arithmetic per gate, no gate matrices); the
recorded global phase of a circuit is applied, so a circuit reproduces its
represented unitary exactly.
"""

from __future__ import annotations

import re

import numpy as np

from .circuits import Circuit
from .hamiltonian import (
    DENSE_LIMIT_QUBITS,
    HamiltonianModel,
    dense_matrix,
    ft_matrix,
)
from .lattice import r_grid
from .trotter import TrotterPlan, step_circuit


def _apply_gates(circuit: Circuit, arr: np.ndarray) -> np.ndarray:
    """Apply a circuit to (dim, batch) amplitudes, gate by gate."""
    width = circuit.width
    dim = 1 << width
    idx = np.arange(dim)
    inv_sqrt2 = 1.0 / np.sqrt(2.0)
    for g in circuit.gates:
        if g.name == "rz":
            q = g.qubits[0]
            sign = 2 * ((idx >> q) & 1) - 1  # -1 on |0>, +1 on |1>
            arr = arr * np.exp(0.5j * g.angle * sign)[:, None]
        elif g.name == "cx":
            c, t = g.qubits
            src = np.where((idx >> c) & 1 == 1, idx ^ (1 << t), idx)
            arr = arr[src]
        elif g.name == "h":
            q = g.qubits[0]
            shaped = arr.reshape(1 << (width - 1 - q), 2, -1)
            lo = shaped[:, 0, :].copy()
            hi = shaped[:, 1, :].copy()
            shaped[:, 0, :] = (lo + hi) * inv_sqrt2
            shaped[:, 1, :] = (lo - hi) * inv_sqrt2
            arr = shaped.reshape(dim, -1)
        elif g.name == "cu1":
            a, b = g.qubits
            both = ((idx >> a) & (idx >> b) & 1).astype(bool)
            arr[both] = arr[both] * np.exp(1j * g.angle)
        elif g.name == "swap":
            a, b = g.qubits
            differ = (((idx >> a) ^ (idx >> b)) & 1).astype(bool)
            src = np.where(differ, idx ^ ((1 << a) | (1 << b)), idx)
            arr = arr[src]
    return arr * np.exp(1j * circuit.global_phase)


def apply(circuit: Circuit, state: np.ndarray) -> np.ndarray:
    """Return circuit |state>; the input vector is not modified."""
    state = np.asarray(state, dtype=complex)
    if state.shape != (1 << circuit.width,):
        raise ValueError(
            f"state has {state.shape} amplitudes, circuit expects {1 << circuit.width}"
        )
    return _apply_gates(circuit, state.copy()[:, None])[:, 0]


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    """Dense unitary of a circuit, global phase included."""
    dim = 1 << circuit.width
    return _apply_gates(circuit, np.eye(dim, dtype=complex))


def electric_ground_state(model: HamiltonianModel) -> np.ndarray:
    """All-rotors-zero electric ground state, expressed in the magnetic basis.

    Every plaquette register sits at rotor index N/2 (the grid's single
    zero); the per-plaquette Fourier rotation maps the product state to the
    magnetic basis.
    """
    d = model.digitization
    big_n = d.n_states
    if big_n % 2 != 0:
        raise ValueError("rotor grid has no zero for odd sample counts")
    for p in range(model.n_p):
        if abs(r_grid(d, p).values[big_n // 2]) > 1e-12:
            raise AssertionError("rotor grid zero is not at index N/2")
    f_column = ft_matrix(d.n_q)[:, big_n // 2]
    psi = np.ones(1, dtype=complex)
    for _ in range(model.n_p):
        psi = np.kron(f_column, psi)  # plaquette 0 least significant
    return psi


def loschmidt(model: HamiltonianModel, plan: TrotterPlan) -> float:
    """|<psi_E| U(t) |psi_E>|^2 from repeated application of the step circuit."""
    psi0 = electric_ground_state(model)
    if plan.steps == 0:
        return 1.0
    step = step_circuit(model, plan)
    psi = psi0
    for _ in range(plan.steps):
        psi = apply(step, psi)
    return float(abs(np.vdot(psi0, psi)) ** 2)


def exact_evolution(
    model: HamiltonianModel, t: float, limit: int = DENSE_LIMIT_QUBITS
) -> np.ndarray:
    """Dense exp(-i H t) via eigendecomposition; the error-measurement oracle."""
    h = dense_matrix(model, limit)
    vals, vecs = np.linalg.eigh(h)
    return (vecs * np.exp(-1j * vals * t)[None, :]) @ vecs.conj().T


_QASM_PHASE = re.compile(r"^//\s*global_phase:\s*([-+0-9.eE]+)\s*$")
_QASM_QREG = re.compile(r"^qreg\s+q\[(\d+)\];$")
_QASM_1Q = re.compile(r"^(h)\s+q\[(\d+)\];$")
_QASM_1Q_ANGLE = re.compile(r"^(rz)\(([-+0-9.eE]+)\)\s+q\[(\d+)\];$")
_QASM_2Q = re.compile(r"^(cx|swap)\s+q\[(\d+)\],q\[(\d+)\];$")
_QASM_2Q_ANGLE = re.compile(r"^(cu1)\(([-+0-9.eE]+)\)\s+q\[(\d+)\],q\[(\d+)\];$")


def read_qasm(text: str) -> Circuit:
    """Parse the OpenQASM 2.0 subset written by `circuits.export_qasm`."""
    circ = None
    phase = 0.0
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("OPENQASM") or line.startswith("include"):
            continue
        m = _QASM_PHASE.match(line)
        if m:
            phase = float(m.group(1))
            continue
        if line.startswith("//"):
            continue
        m = _QASM_QREG.match(line)
        if m:
            circ = Circuit(int(m.group(1)), global_phase=phase)
            continue
        if circ is None:
            raise ValueError(f"gate before qreg declaration: {line!r}")
        m = _QASM_1Q.match(line)
        if m:
            circ.h(int(m.group(2)))
            continue
        m = _QASM_1Q_ANGLE.match(line)
        if m:
            circ.rz(float(m.group(2)), int(m.group(3)))
            continue
        m = _QASM_2Q.match(line)
        if m:
            a, b = int(m.group(2)), int(m.group(3))
            circ.cx(a, b) if m.group(1) == "cx" else circ.swap(a, b)
            continue
        m = _QASM_2Q_ANGLE.match(line)
        if m:
            circ.cu1(float(m.group(2)), int(m.group(3)), int(m.group(4)))
            continue
        raise ValueError(f"unsupported QASM line: {line!r}")
    if circ is None:
        raise ValueError("no qreg declaration found")
    return circ


def load_qasm(path) -> Circuit:
    with open(path) as fh:
        return read_qasm(fh.read())
