"""Dense statevector simulator for the small gate set used by the neurons.

Qubit ordering is big-endian: qubit 0 is the most significant bit of a
basis index, so on three qubits ``|100>`` is index 4.  The amplitude
vector is viewed as a ``(2,) * q`` tensor whose axis ``k`` is qubit ``k``.

Circuit metrics follow a logical (untranspiled) convention: every gate,
multi-controlled ones included, is one operation occupying all of its
qubits for one time step, and a measurement is one more operation on its
qubit.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import InvalidArgumentError

__all__ = [
    "MAX_QUBITS",
    "GateKind",
    "Gate",
    "Circuit",
    "StateVector",
    "hadamard",
    "pauli_x",
    "phase",
    "mcx",
    "mcphase",
    "new_zero_state",
    "apply_gate",
    "run",
    "one_probability",
    "sample_shots",
    "depth",
    "size",
]

# 12 data qubits plus one ancilla.
MAX_QUBITS = 13

_NORM_TOL = 1e-10
_SQRT1_2 = 1.0 / math.sqrt(2.0)


class GateKind(str, enum.Enum):
    HADAMARD = "h"
    PAULI_X = "x"
    PHASE = "p"
    MCX = "mcx"
    MCPHASE = "mcp"


_SINGLE = {GateKind.HADAMARD, GateKind.PAULI_X, GateKind.PHASE}
_ANGLED = {GateKind.PHASE, GateKind.MCPHASE}


@dataclass(frozen=True)
class Gate:
    """One gate: a target qubit, optional controls and an optional angle."""

    kind: GateKind
    target: int
    controls: tuple[int, ...] = ()
    angle: float | None = None

    def __post_init__(self):
        kind = GateKind(self.kind)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "controls", tuple(int(c) for c in self.controls))
        if kind in _SINGLE and self.controls:
            raise InvalidArgumentError(f"{kind.name} takes no controls")
        if kind not in _SINGLE and not self.controls:
            raise InvalidArgumentError(f"{kind.name} needs at least one control")
        if kind in _ANGLED:
            if self.angle is None or not math.isfinite(self.angle):
                raise InvalidArgumentError(f"{kind.name} needs a finite angle")
            object.__setattr__(self, "angle", float(self.angle))
        elif self.angle is not None:
            raise InvalidArgumentError(f"{kind.name} takes no angle")
        qubits = self.qubits
        if len(set(qubits)) != len(qubits):
            raise InvalidArgumentError(f"repeated qubit index in {qubits}")
        if min(qubits) < 0:
            raise InvalidArgumentError(f"negative qubit index in {qubits}")

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.controls + (self.target,)


def hadamard(q: int) -> Gate:
    return Gate(GateKind.HADAMARD, q)


def pauli_x(q: int) -> Gate:
    return Gate(GateKind.PAULI_X, q)


def phase(q: int, angle: float) -> Gate:
    return Gate(GateKind.PHASE, q, angle=angle)


def mcx(controls: Iterable[int], target: int) -> Gate:
    return Gate(GateKind.MCX, target, tuple(controls))


def mcphase(controls: Iterable[int], target: int, angle: float) -> Gate:
    return Gate(GateKind.MCPHASE, target, tuple(controls), angle)


@dataclass
class Circuit:
    """Ordered gate list on ``num_qubits`` qubits with an optional measurement."""

    num_qubits: int
    gates: list[Gate] = field(default_factory=list)
    measured_qubit: int | None = None

    def __post_init__(self):
        if self.num_qubits < 1:
            raise InvalidArgumentError("a circuit needs at least one qubit")
        self.gates = list(self.gates)
        for g in self.gates:
            self._check(g)
        if self.measured_qubit is not None:
            self._check_index(self.measured_qubit)

    def _check_index(self, q: int) -> None:
        if not 0 <= q < self.num_qubits:
            raise InvalidArgumentError(
                f"qubit {q} out of range for {self.num_qubits}-qubit circuit")

    def _check(self, gate: Gate) -> None:
        for q in gate.qubits:
            self._check_index(q)

    def append(self, gate: Gate) -> "Circuit":
        self._check(gate)
        self.gates.append(gate)
        return self

    def extend(self, gates: Iterable[Gate]) -> "Circuit":
        for g in gates:
            self.append(g)
        return self

    def measure(self, qubit: int) -> "Circuit":
        self._check_index(qubit)
        self.measured_qubit = qubit
        return self

    def depth(self) -> int:
        return depth(self)

    def size(self) -> int:
        return size(self)


class StateVector:
    """Normalized amplitudes over ``num_qubits`` qubits.

    The amplitude array is read-only; gate application returns a new state.
    """

    __slots__ = ("num_qubits", "amplitudes")

    def __init__(self, amplitudes, num_qubits: int | None = None, *, check: bool = True):
        amps = np.array(amplitudes, dtype=np.complex128).ravel()
        n = int(round(math.log2(amps.size))) if amps.size else -1
        if amps.size == 0 or 2**n != amps.size:
            raise InvalidArgumentError("amplitude count must be a power of two")
        if num_qubits is not None and num_qubits != n:
            raise InvalidArgumentError(
                f"{amps.size} amplitudes do not describe {num_qubits} qubits")
        if n < 1 or n > MAX_QUBITS:
            raise InvalidArgumentError(f"qubit count must be in [1, {MAX_QUBITS}]")
        if check:
            norm = float(np.vdot(amps, amps).real)
            if abs(norm - 1.0) > _NORM_TOL:
                raise InvalidArgumentError(f"state is not normalized (norm^2={norm!r})")
        amps.flags.writeable = False
        self.num_qubits = n
        self.amplitudes = amps

    def __repr__(self):
        return f"StateVector(num_qubits={self.num_qubits}, amplitudes={self.amplitudes!r})"

    def __eq__(self, other):
        if not isinstance(other, StateVector):
            return NotImplemented
        return self.num_qubits == other.num_qubits and np.array_equal(
            self.amplitudes, other.amplitudes)

    def norm(self) -> float:
        return float(np.sqrt(np.vdot(self.amplitudes, self.amplitudes).real))

    def fidelity(self, other) -> float:
        """Return ``|<self|other>|``, which ignores global phase."""
        b = other.amplitudes if isinstance(other, StateVector) else np.asarray(other)
        return float(abs(np.vdot(self.amplitudes, b)))


def new_zero_state(q: int) -> StateVector:
    if not 1 <= q <= MAX_QUBITS:
        raise InvalidArgumentError(f"qubit count must be in [1, {MAX_QUBITS}], got {q}")
    amps = np.zeros(2**q, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(amps, q, check=False)


def _apply_inplace(psi: np.ndarray, gate: Gate) -> None:
    # psi is the (2,)*q tensor view; controls pin their axes to 1.
    q = psi.ndim
    idx: list = [slice(None)] * q
    for c in gate.controls:
        idx[c] = 1
    idx0 = list(idx)
    idx1 = list(idx)
    idx0[gate.target] = 0
    idx1[gate.target] = 1
    s0, s1 = tuple(idx0), tuple(idx1)
    kind = gate.kind
    if kind is GateKind.HADAMARD:
        a = psi[s0].copy()
        b = psi[s1]
        psi[s0] = (a + b) * _SQRT1_2
        psi[s1] = (a - b) * _SQRT1_2
    elif kind in (GateKind.PAULI_X, GateKind.MCX):
        a = psi[s0].copy()
        psi[s0] = psi[s1]
        psi[s1] = a
    else:
        psi[s1] *= np.exp(1j * gate.angle)


def _check_gate(gate: Gate, num_qubits: int) -> None:
    for qb in gate.qubits:
        if not 0 <= qb < num_qubits:
            raise InvalidArgumentError(
                f"gate {gate.kind.name} touches qubit {qb}, state has {num_qubits}")


def apply_gate(state: StateVector, gate: Gate) -> StateVector:
    _check_gate(gate, state.num_qubits)
    psi = state.amplitudes.copy().reshape((2,) * state.num_qubits)
    _apply_inplace(psi, gate)
    return StateVector(psi, state.num_qubits, check=False)


def run(circuit: Circuit, state: StateVector | None = None) -> StateVector:
    """Apply the circuit's gates in order; start from ``|0...0>`` if no state given."""
    if state is None:
        state = new_zero_state(circuit.num_qubits)
    if circuit.num_qubits != state.num_qubits:
        raise InvalidArgumentError(
            f"circuit has {circuit.num_qubits} qubits, state has {state.num_qubits}")
    psi = state.amplitudes.copy().reshape((2,) * state.num_qubits)
    for g in circuit.gates:
        _check_gate(g, state.num_qubits)
        _apply_inplace(psi, g)
    return StateVector(psi, state.num_qubits, check=False)


def one_probability(state: StateVector, qubit: int) -> float:
    """Probability that measuring ``qubit`` yields 1."""
    if not 0 <= qubit < state.num_qubits:
        raise InvalidArgumentError(f"qubit {qubit} out of range")
    psi = state.amplitudes.reshape((2,) * state.num_qubits)
    ones = np.take(psi, 1, axis=qubit)
    p = float(np.sum(ones.real**2 + ones.imag**2))
    return min(max(p, 0.0), 1.0)


def _check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise InvalidArgumentError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return seed


def sample_shots(state: StateVector, qubit: int, shots: int, seed: int) -> int:
    """Count 1-outcomes over ``shots`` measurements of ``qubit``.

    Draws one binomial variate from numpy's PCG64 generator seeded with
    ``seed`` (``numpy.random.default_rng``), so counts are reproducible
    across platforms for a fixed numpy major version.
    """
    if shots < 1:
        raise InvalidArgumentError(f"shots must be positive, got {shots}")
    p = one_probability(state, qubit)
    rng = np.random.default_rng(_check_seed(seed))
    return int(rng.binomial(int(shots), p))


def depth(circuit: Circuit) -> int:
    frontier = [0] * circuit.num_qubits
    for g in circuit.gates:
        t = max(frontier[q] for q in g.qubits) + 1
        for q in g.qubits:
            frontier[q] = t
    if circuit.measured_qubit is not None:
        frontier[circuit.measured_qubit] += 1
    return max(frontier)


def size(circuit: Circuit) -> int:
    return len(circuit.gates) + (circuit.measured_qubit is not None)

