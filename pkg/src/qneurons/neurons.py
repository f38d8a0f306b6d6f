"""The four neuron kinds: feature maps, closed-form activations and gates.

Amplitude-encoded neurons (BVQN, CVQN) store ``m = 2**n`` components in
``n`` qubits and need one multi-controlled block per component.
Qubit-encoded neurons (CDQN, PCDQN) spend one qubit per component and a
single phase gate per qubit, so their depth does not grow with ``m``.

All closed-form activations act on the last axis and broadcast over the
leading ones, so ``activation(X[None], W[:, None])`` scores every sample
against every candidate weight in one call.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError
from .framework import NeuronModel, as_vector
from .statevector import MAX_QUBITS, Gate, mcphase, pauli_x, phase

__all__ = [
    "PcdqnParams",
    "bvqn_activation",
    "bvqn_gates",
    "cvqn_feature_map",
    "cvqn_activation",
    "cvqn_gates",
    "cdqn_feature_map",
    "cdqn_activation_full",
    "cdqn_activation_product",
    "pcdqn_activation",
    "pcdqn_gates",
    "pcdqn_fused_gates",
    "BVQN",
    "CVQN",
    "CDQN",
    "PCDQN",
    "NEURON_KINDS",
    "make_neuron",
]

# Largest input arity for qubit encoding: every data qubit plus the ancilla.
MAX_QUBIT_ENCODED = MAX_QUBITS - 1


@dataclass(frozen=True)
class PcdqnParams:
    """Multiplicative factor ``tau`` and additive shift ``delta`` (radians)."""

    tau: float = 1.0
    delta: float = 0.0

    def __post_init__(self):
        for name in ("tau", "delta"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise InvalidArgumentError(f"{name} must be finite")
            object.__setattr__(self, name, value)


def _pair(theta, phi) -> tuple[np.ndarray, np.ndarray]:
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    if theta.ndim == 0 or phi.ndim == 0 or theta.shape[-1] != phi.shape[-1]:
        raise InvalidArgumentError(
            f"input and weight lengths differ: {np.shape(theta)} vs {np.shape(phi)}")
    if theta.shape[-1] == 0:
        raise InvalidArgumentError("vectors must have at least one component")
    return theta, phi


def _amplitude_qubits(m: int) -> int:
    """``n`` with ``m == 2**n``, for amplitude encoding (``m >= 2``)."""
    n = m.bit_length() - 1
    if m < 2 or 2**n != m:
        raise InvalidArgumentError(f"amplitude encoding needs m = 2**n >= 2, got m={m}")
    if n + 1 > MAX_QUBITS:
        raise InvalidArgumentError(f"m={m} exceeds the simulator cap")
    return n


def _qubit_encoded(m: int) -> int:
    if not 1 <= m <= MAX_QUBIT_ENCODED:
        raise InvalidArgumentError(f"qubit encoding supports 1 <= m <= {MAX_QUBIT_ENCODED}, got {m}")
    return m


def _basis_block(j: int, n: int, angle: float) -> list[Gate]:
    """Multiply the amplitude of basis state ``|j>`` by ``exp(i*angle)``.

    X gates map ``|j>`` to ``|1...1>``, where a fully controlled phase
    (target: last data qubit) acts, then the X gates are undone.
    """
    zeros = [q for q in range(n) if not (j >> (n - 1 - q)) & 1]
    flips = [pauli_x(q) for q in zeros]
    if n == 1:
        core = phase(0, angle)
    else:
        core = mcphase(range(n - 1), n - 1, angle)
    return flips + [core] + list(flips)


# --- BVQN -----------------------------------------------------------------

def _binary(v, name="vector") -> np.ndarray:
    arr = np.asarray(v, dtype=float)
    if not np.all((arr == 1.0) | (arr == -1.0)):
        raise InvalidArgumentError(f"{name} components must be -1 or +1")
    return arr


def bvqn_activation(theta, phi):
    theta, phi = _pair(_binary(theta, "theta"), _binary(phi, "phi"))
    _amplitude_qubits(theta.shape[-1])
    return np.abs(np.mean(theta * phi, axis=-1)) ** 2


def bvqn_gates(v, invert: bool = False) -> list[Gate]:
    """Sign-flip blocks for every ``-1`` component; self-inverse, so ``invert`` is ignored."""
    v = _binary(as_vector(v))
    n = _amplitude_qubits(v.size)
    gates: list[Gate] = []
    for j in np.flatnonzero(v < 0):
        gates += _basis_block(int(j), n, math.pi)
    return gates


# --- CVQN -----------------------------------------------------------------

def cvqn_feature_map(v) -> np.ndarray:
    v = as_vector(v)
    _amplitude_qubits(v.size)
    return np.exp(1j * v) / math.sqrt(v.size)


def cvqn_activation(theta, phi):
    theta, phi = _pair(theta, phi)
    _amplitude_qubits(theta.shape[-1])
    return np.abs(np.mean(np.exp(1j * (theta - phi)), axis=-1)) ** 2


def cvqn_gates(v, invert: bool = False, pruned: bool = False) -> list[Gate]:
    """One phase block per component; negative angles when decoding.

    With ``pruned`` the blocks for zero angles are skipped.
    """
    v = as_vector(v)
    n = _amplitude_qubits(v.size)
    sign = -1.0 if invert else 1.0
    gates: list[Gate] = []
    for j, angle in enumerate(v):
        if pruned and angle == 0.0:
            continue
        gates += _basis_block(j, n, sign * float(angle))
    return gates


# --- CDQN / PCDQN ---------------------------------------------------------

def _bits(m: int) -> np.ndarray:
    """``(2**m, m)`` matrix; row ``s`` holds the big-endian bits of ``s``."""
    s = np.arange(2**m)[:, None]
    shifts = np.arange(m - 1, -1, -1)[None, :]
    return (s >> shifts) & 1


def cdqn_feature_map(v) -> np.ndarray:
    v = as_vector(v)
    m = _qubit_encoded(v.size)
    return np.exp(1j * (_bits(m) @ v)) / math.sqrt(2**m)


def cdqn_activation_full(theta, phi):
    """Sum over all ``2**m`` basis states of the bit-selected phase products."""
    theta, phi = _pair(theta, phi)
    m = _qubit_encoded(theta.shape[-1])
    phases = (theta - phi) @ _bits(m).T
    return np.abs(np.mean(np.exp(1j * phases), axis=-1)) ** 2


def cdqn_activation_product(theta, phi):
    """Product of the ``m`` local inner products ``(1 + e^{i d_j}) / 2``."""
    theta, phi = _pair(theta, phi)
    local = (1.0 + np.exp(1j * (theta - phi))) / 2.0
    return np.abs(np.prod(local, axis=-1)) ** 2


def pcdqn_activation(theta, phi, params: PcdqnParams = PcdqnParams()):
    theta, phi = _pair(theta, phi)
    local = (1.0 + np.exp(1j * (params.tau * (theta - phi) + params.delta))) / 2.0
    return np.abs(np.prod(local, axis=-1)) ** 2


def pcdqn_gates(v, params: PcdqnParams = PcdqnParams(), invert: bool = False) -> list[Gate]:
    """Expanded PCDQN gates for one vector.

    Encoding gives ``P(tau*v_j)`` on qubit ``j``.  Decoding gives
    ``P(-tau*v_j)`` followed by a ``P(delta)`` layer on every qubit.
    """
    v = as_vector(v)
    _qubit_encoded(v.size)
    if not invert:
        return [phase(j, params.tau * a) for j, a in enumerate(v)]
    gates = [phase(j, -params.tau * a) for j, a in enumerate(v)]
    return gates + [phase(j, params.delta) for j in range(v.size)]


def pcdqn_fused_gates(theta, phi, params: PcdqnParams = PcdqnParams()) -> list[Gate]:
    """One ``P(tau*(theta_j - phi_j) + delta)`` per qubit."""
    theta, phi = as_vector(theta, "theta"), as_vector(phi, "phi")
    if theta.size != phi.size:
        raise InvalidArgumentError("input and weight lengths differ")
    _qubit_encoded(theta.size)
    angles = params.tau * (theta - phi) + params.delta
    return [phase(j, a) for j, a in enumerate(angles)]


# --- models -----------------------------------------------------------------

@dataclass(frozen=True)
class BVQN(NeuronModel):
    kind = "bvqn"

    def num_data_qubits(self, m: int) -> int:
        return _amplitude_qubits(m)

    def map_to_feature(self, v) -> np.ndarray:
        v = _binary(as_vector(v))
        _amplitude_qubits(v.size)
        return v.astype(np.complex128) / math.sqrt(v.size)

    def encoder_gates(self, theta):
        return bvqn_gates(theta)

    def decoder_gates(self, phi):
        return bvqn_gates(phi, invert=True)

    def activation(self, theta, phi):
        return bvqn_activation(theta, phi)


@dataclass(frozen=True)
class CVQN(NeuronModel):
    pruned: bool = False
    kind = "cvqn"

    def num_data_qubits(self, m: int) -> int:
        return _amplitude_qubits(m)

    def map_to_feature(self, v) -> np.ndarray:
        return cvqn_feature_map(v)

    def encoder_gates(self, theta):
        return cvqn_gates(theta, pruned=self.pruned)

    def decoder_gates(self, phi):
        return cvqn_gates(phi, invert=True, pruned=self.pruned)

    def activation(self, theta, phi):
        return cvqn_activation(theta, phi)


@dataclass(frozen=True)
class CDQN(NeuronModel):
    kind = "cdqn"

    def num_data_qubits(self, m: int) -> int:
        return _qubit_encoded(m)

    def map_to_feature(self, v) -> np.ndarray:
        return cdqn_feature_map(v)

    def encoder_gates(self, theta):
        return [phase(j, a) for j, a in enumerate(as_vector(theta))]

    def decoder_gates(self, phi):
        return [phase(j, -a) for j, a in enumerate(as_vector(phi))]

    def activation(self, theta, phi):
        return cdqn_activation_product(theta, phi)


@dataclass(frozen=True)
class PCDQN(NeuronModel):
    """Parametrized CDQN.

    The input map is the CDQN map of ``tau*theta``; the weight map is the
    CDQN map of ``tau*phi - delta``, which is what the decoder (including
    its ``P(delta)`` layer) sends back to ``|+>^m``.
    """

    params: PcdqnParams = PcdqnParams()
    fused: bool = False
    kind = "pcdqn"

    def num_data_qubits(self, m: int) -> int:
        return _qubit_encoded(m)

    def map_to_feature(self, v) -> np.ndarray:
        return cdqn_feature_map(self.params.tau * as_vector(v))

    def map_weight_to_feature(self, v) -> np.ndarray:
        return cdqn_feature_map(self.params.tau * as_vector(v) - self.params.delta)

    def encoder_gates(self, theta):
        return pcdqn_gates(theta, self.params)

    def decoder_gates(self, phi):
        return pcdqn_gates(phi, self.params, invert=True)

    def body_gates(self, theta, phi):
        if self.fused:
            return pcdqn_fused_gates(theta, phi, self.params)
        return super().body_gates(theta, phi)

    def activation(self, theta, phi):
        return pcdqn_activation(theta, phi, self.params)


NEURON_KINDS = ("bvqn", "cvqn", "cdqn", "pcdqn")


def make_neuron(kind: str, tau: float | None = None, delta: float | None = None,
                fused: bool = False) -> NeuronModel:
    kind = kind.lower()
    if kind == "pcdqn":
        params = PcdqnParams(1.0 if tau is None else tau, 0.0 if delta is None else delta)
        return PCDQN(params, fused=fused)
    if tau is not None or delta is not None:
        raise InvalidArgumentError(f"{kind} takes no tau/delta")
    if kind == "bvqn":
        return BVQN()
    if kind == "cvqn":
        return CVQN()
    if kind == "cdqn":
        return CDQN()
    raise InvalidArgumentError(f"unknown neuron kind {kind!r}; expected one of {NEURON_KINDS}")
