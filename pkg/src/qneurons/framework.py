"""Kernel-machine neuron framework.

A neuron is defined by a feature map and two gate builders: an encoder
that prepares ``Phi(theta)`` from ``|+>^n`` and a decoder that takes
``Phi(phi)`` back to ``|+>^n``.  The framework circuit is

    H^n . E(theta) . D(phi) . H^n . X^n . MCX(data -> ancilla) . measure

and the ancilla fires with probability ``|<Phi(phi)|Phi(theta)>|^2``.
New neurons only need to subclass :class:`NeuronModel`.
"""

from __future__ import annotations

import abc

import numpy as np

from .errors import InvalidArgumentError
from .statevector import Circuit, Gate, hadamard, mcx, one_probability, pauli_x, run

__all__ = [
    "NeuronModel",
    "activation_closed_form",
    "build_framework_circuit",
    "activation_from_circuit",
    "as_vector",
]


def as_vector(v, name: str = "vector") -> np.ndarray:
    """Coerce to a finite 1-D float array with at least one component."""
    arr = np.asarray(v, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidArgumentError(f"{name} must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(arr)):
        raise InvalidArgumentError(f"{name} has non-finite components")
    return arr


class NeuronModel(abc.ABC):
    """Capability every neuron kind provides to the framework."""

    kind: str = ""

    @abc.abstractmethod
    def num_data_qubits(self, m: int) -> int:
        """Data qubits needed for ``m`` inputs; raises on an arity violation."""

    @abc.abstractmethod
    def map_to_feature(self, v) -> np.ndarray:
        """Feature vector of an input vector."""

    def map_weight_to_feature(self, v) -> np.ndarray:
        """Feature vector of a weight vector (same map unless overridden)."""
        return self.map_to_feature(v)

    @abc.abstractmethod
    def encoder_gates(self, theta) -> list[Gate]:
        ...

    @abc.abstractmethod
    def decoder_gates(self, phi) -> list[Gate]:
        ...

    @abc.abstractmethod
    def activation(self, theta, phi):
        """Closed-form firing probability; broadcasts over leading axes."""

    def body_gates(self, theta, phi) -> list[Gate]:
        """Gates between the two Hadamard layers."""
        return self.encoder_gates(theta) + self.decoder_gates(phi)

    def check_pair(self, theta, phi) -> tuple[np.ndarray, np.ndarray, int]:
        theta = as_vector(theta, "theta")
        phi = as_vector(phi, "phi")
        if theta.size != phi.size:
            raise InvalidArgumentError(
                f"input has {theta.size} components, weight has {phi.size}")
        return theta, phi, self.num_data_qubits(theta.size)


def activation_closed_form(w, i) -> float:
    """``|w* . i|^2`` for two feature vectors of equal length."""
    w = np.asarray(w, dtype=np.complex128).ravel()
    i = np.asarray(i, dtype=np.complex128).ravel()
    if w.shape != i.shape:
        raise InvalidArgumentError(f"length mismatch: {w.size} vs {i.size}")
    return float(abs(np.vdot(w, i)) ** 2)


def build_framework_circuit(neuron: NeuronModel, theta, phi) -> Circuit:
    """Assemble the framework circuit; the ancilla is the last qubit."""
    theta, phi, n = neuron.check_pair(theta, phi)
    data = range(n)
    circ = Circuit(n + 1)
    circ.extend(hadamard(q) for q in data)
    circ.extend(neuron.body_gates(theta, phi))
    circ.extend(hadamard(q) for q in data)
    circ.extend(pauli_x(q) for q in data)
    circ.append(mcx(data, n))
    circ.measure(n)
    return circ


def activation_from_circuit(neuron: NeuronModel, theta, phi) -> float:
    """Simulate the framework circuit and return the ancilla's 1-probability."""
    circ = build_framework_circuit(neuron, theta, phi)
    return one_probability(run(circ), circ.measured_qubit)
