import math

import numpy as np
import pytest

from qneurons.errors import InvalidArgumentError
from qneurons.framework import (
    NeuronModel,
    activation_closed_form,
    activation_from_circuit,
    build_framework_circuit,
)
from qneurons.neurons import BVQN, CDQN, CVQN, PCDQN, PcdqnParams
from qneurons.statevector import Circuit, GateKind, hadamard, new_zero_state, phase, run

S = 1 / math.sqrt(2)
HALF_PI = math.pi / 2


def random_pair(neuron, m, rng):
    if isinstance(neuron, BVQN):
        return rng.choice([-1.0, 1.0], m), rng.choice([-1.0, 1.0], m)
    return rng.uniform(-math.pi, math.pi, m), rng.uniform(-math.pi, math.pi, m)


NEURONS = [
    (BVQN(), [2, 4, 8]),
    (CVQN(), [2, 4, 8]),
    (CVQN(pruned=True), [2, 4]),
    (CDQN(), [1, 2, 3, 5]),
    (PCDQN(PcdqnParams(2.0, 1.1)), [1, 2, 3, 5]),
    (PCDQN(PcdqnParams(0.25, 5 * math.pi / 4), fused=True), [1, 2, 4]),
]
IDS = ["bvqn", "cvqn", "cvqn-pruned", "cdqn", "pcdqn", "pcdqn-fused"]


def test_closed_form_examples():
    v = np.array([0.3 + 0.4j, 0.5, -0.2j, 0.1])
    v = v / np.linalg.norm(v)
    assert activation_closed_form(v, v) == pytest.approx(1.0, abs=1e-15)
    assert activation_closed_form([1, 0], [0, 1]) == 0.0
    assert activation_closed_form([S, S], [1, 0]) == pytest.approx(0.5, abs=1e-15)
    with pytest.raises(InvalidArgumentError):
        activation_closed_form([1, 0], [1, 0, 0, 0])


def test_closed_form_conjugates_the_weight():
    w = np.array([S, 1j * S])
    i = np.array([S, 1j * S])
    # w* . i = 1; without conjugation it would be 0
    assert activation_closed_form(w, i) == pytest.approx(1.0)


def test_cdqn_circuit_gate_layout():
    c = build_framework_circuit(CDQN(), [0.1, 0.2], [0.3, 0.4])
    kinds = [(g.kind, g.qubits, g.angle) for g in c.gates]
    assert c.num_qubits == 3 and c.measured_qubit == 2
    assert kinds == [
        (GateKind.HADAMARD, (0,), None), (GateKind.HADAMARD, (1,), None),
        (GateKind.PHASE, (0,), 0.1), (GateKind.PHASE, (1,), 0.2),
        (GateKind.PHASE, (0,), -0.3), (GateKind.PHASE, (1,), -0.4),
        (GateKind.HADAMARD, (0,), None), (GateKind.HADAMARD, (1,), None),
        (GateKind.PAULI_X, (0,), None), (GateKind.PAULI_X, (1,), None),
        (GateKind.MCX, (0, 1, 2), None),
    ]


@pytest.mark.parametrize("neuron,ms", NEURONS, ids=IDS)
def test_equal_vectors(neuron, ms, rng):
    # certain firing, except that a PCDQN shift leaves cos^2(delta/2) per qubit
    for m in ms:
        theta, _ = random_pair(neuron, m, rng)
        expected = 1.0
        if isinstance(neuron, PCDQN):
            expected = math.cos(neuron.params.delta / 2) ** (2 * m)
        assert activation_from_circuit(neuron, theta, theta) == pytest.approx(expected, abs=1e-10)
    if isinstance(neuron, PCDQN):
        unshifted = PCDQN(PcdqnParams(neuron.params.tau, 0.0), fused=neuron.fused)
        assert activation_from_circuit(unshifted, theta, theta) == pytest.approx(1.0, abs=1e-10)


def test_circuit_activation_examples():
    assert activation_from_circuit(CVQN(), [0, HALF_PI], [0, 0]) == pytest.approx(0.5, abs=1e-12)
    assert activation_from_circuit(PCDQN(), [0.3, 1.1], [0.3, 1.1]) == pytest.approx(1.0, abs=1e-9)
    assert activation_from_circuit(CDQN(), [HALF_PI], [0]) == pytest.approx(0.5, abs=1e-12)
    assert activation_from_circuit(BVQN(), [1, -1], [1, 1]) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("neuron,ms", NEURONS, ids=IDS)
def test_inner_product_extraction(neuron, ms, rng):
    # oracle: direct inner product of the analytic feature vectors
    for _ in range(40):
        m = int(rng.choice(ms))
        theta, phi = random_pair(neuron, m, rng)
        expected = abs(np.vdot(neuron.map_weight_to_feature(phi), neuron.map_to_feature(theta))) ** 2
        assert activation_from_circuit(neuron, theta, phi) == pytest.approx(expected, abs=1e-9)
        assert float(neuron.activation(theta, phi)) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("neuron,ms", NEURONS[:5], ids=IDS[:5])
def test_encoder_prepares_feature_vector(neuron, ms, rng):
    for m in ms:
        theta, _ = random_pair(neuron, m, rng)
        n = neuron.num_data_qubits(m)
        c = Circuit(n, [hadamard(q) for q in range(n)]).extend(neuron.encoder_gates(theta))
        state = run(c)
        assert state.fidelity(neuron.map_to_feature(theta)) == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("neuron,ms", NEURONS[:5], ids=IDS[:5])
def test_decoder_returns_uniform_state(neuron, ms, rng):
    for m in ms:
        _, phi = random_pair(neuron, m, rng)
        n = neuron.num_data_qubits(m)
        from qneurons.statevector import StateVector
        start = StateVector(neuron.map_weight_to_feature(phi))
        out = run(Circuit(n, neuron.decoder_gates(phi)), start)
        plus = np.full(2**n, 1 / math.sqrt(2**n))
        assert out.fidelity(plus) == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("neuron,ms", [NEURONS[i] for i in (0, 1, 3)], ids=["bvqn", "cvqn", "cdqn"])
def test_symmetry_under_swap(neuron, ms, rng):
    for _ in range(50):
        theta, phi = random_pair(neuron, int(rng.choice(ms)), rng)
        assert neuron.activation(theta, phi) == pytest.approx(neuron.activation(phi, theta), abs=1e-12)


@pytest.mark.parametrize("delta", [0.0, math.pi])
def test_pcdqn_symmetric_for_even_shifts(delta, rng):
    neuron = PCDQN(PcdqnParams(2.0, delta))
    for _ in range(50):
        theta, phi = random_pair(neuron, 3, rng)
        assert neuron.activation(theta, phi) == pytest.approx(neuron.activation(phi, theta), abs=1e-12)


def test_pcdqn_not_symmetric_for_generic_shift():
    neuron = PCDQN(PcdqnParams(1.0, math.pi / 2))
    a = neuron.activation([0.5], [0.0])
    b = neuron.activation([0.0], [0.5])
    assert abs(a - b) > 0.1


@pytest.mark.parametrize("neuron,theta,phi", [
    (CDQN(), [0.1, 0.2], [0.1]),
    (CVQN(), [0.1, 0.2, 0.3], [0.1, 0.2, 0.3]),
    (BVQN(), [1], [1]),
    (BVQN(), [1, 0.5], [1, 1]),
    (CDQN(), np.zeros(13), np.zeros(13)),
])
def test_arity_violations(neuron, theta, phi):
    with pytest.raises(InvalidArgumentError):
        build_framework_circuit(neuron, theta, phi)


def test_custom_neuron_plugs_into_framework():
    # an RZ-style local map (e^{-ia/2}, e^{ia/2}) differs from CDQN only by global phase
    class Shifted(NeuronModel):
        kind = "shifted"

        def num_data_qubits(self, m):
            return m

        def map_to_feature(self, v):
            from functools import reduce
            return reduce(np.kron, [np.array([np.exp(-0.5j * a), np.exp(0.5j * a)]) / math.sqrt(2)
                                    for a in v])

        def encoder_gates(self, theta):
            return [phase(j, a) for j, a in enumerate(theta)]

        def decoder_gates(self, phi):
            return [phase(j, -a) for j, a in enumerate(phi)]

        def activation(self, theta, phi):
            return float(np.prod(np.cos((np.asarray(theta) - phi) / 2) ** 2))

    n = Shifted()
    assert activation_from_circuit(n, [0.4, 1.0], [1.2, 0.1]) == pytest.approx(
        n.activation([0.4, 1.0], [1.2, 0.1]), abs=1e-12)


def test_circuit_starts_from_zero_state():
    c = build_framework_circuit(CDQN(), [0.0], [0.0])
    assert run(c, new_zero_state(2)) == run(c)
