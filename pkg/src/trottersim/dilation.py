"""Ancilla-assisted gate realizations of the qubit channels.

A dilation circuit acts on the 4-dimensional composite space ancilla (x) data
(ancilla is the first Kronecker factor), starting from ancilla |g> and ending
with an ancilla reset (trace out, reload |g>). Tracing the ancilla yields the
induced data-qubit channel; the circuits below reproduce the dephasing and
damping channels exactly, with angle-to-rate mappings

    gamma_phi = -ln(2 cos^2(theta1/2) - 1) / tau0
    gamma1    = -ln(cos^2(theta2)) / tau0
    omega     = theta3 / (2 pi tau0)      (theta3 in radians)

Optional injected noise models imperfect hardware: ancilla amplitude decay
with some probability after every two-qubit gate, plus one data-qubit
depolarization event per composite unitary (per circuit application).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import I2, SIGMA_X, SIGMA_Z, dag, kron, partial_trace, vec
from .liouvillian import CanonicalRates

__all__ = [
    "Gate",
    "DilationCircuit",
    "AngleParams",
    "NoiseParams",
    "gate_unitary",
    "dephasing_circuit",
    "damping_circuit",
    "rotation_circuit",
    "run_circuit",
    "induced_channel",
    "angle_to_rates",
    "rates_to_angles",
    "predict_coherence",
    "depolarization_equivalent_time",
]

_UNITARY_KINDS = ("ancilla_rx", "cz", "cnot_ancilla_ctrl", "data_x")
_KINDS = _UNITARY_KINDS + ("reset_ancilla",)

_PROJ_G = np.diag([1.0, 0.0]).astype(complex)
_PROJ_E = np.diag([0.0, 1.0]).astype(complex)


@dataclass(frozen=True)
class Gate:
    """One circuit element on the ancilla (x) data composite space.

    kind is one of ancilla_rx (x rotation by theta on the ancilla), cz,
    cnot_ancilla_ctrl (ancilla-controlled X on the data), data_x (x rotation
    by theta on the data), or reset_ancilla (trace out and reload |g>).
    """

    kind: str
    theta: float = 0.0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if not np.isfinite(self.theta):
            raise ValueError("gate angle must be finite")


def _rx(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def gate_unitary(gate: Gate) -> np.ndarray:
    """4x4 unitary of a non-reset gate in ancilla (x) data ordering."""
    if gate.kind == "ancilla_rx":
        return kron(_rx(gate.theta), I2)
    if gate.kind == "data_x":
        return kron(I2, _rx(gate.theta))
    if gate.kind == "cz":
        return np.diag([1.0, 1.0, 1.0, -1.0]).astype(complex)
    if gate.kind == "cnot_ancilla_ctrl":
        return kron(_PROJ_G, I2) + kron(_PROJ_E, SIGMA_X)
    raise ValueError(f"gate {gate.kind!r} has no unitary realization")


@dataclass(frozen=True)
class DilationCircuit:
    """Ordered gate list with exactly one ancilla reset, placed last."""

    gates: tuple[Gate, ...]
    label: str = ""

    def __post_init__(self):
        gates = tuple(self.gates)
        resets = [i for i, g in enumerate(gates) if g.kind == "reset_ancilla"]
        if len(resets) != 1 or resets[0] != len(gates) - 1:
            raise ValueError("circuit must contain exactly one reset_ancilla, last")
        object.__setattr__(self, "gates", gates)


@dataclass(frozen=True)
class NoiseParams:
    """Injected imperfections: data depolarization probability per composite
    unitary (p_grape) and ancilla decay probability per two-qubit gate."""

    p_grape: float = 0.0
    p_ancilla_decay: float = 0.0

    def __post_init__(self):
        for name in ("p_grape", "p_ancilla_decay"):
            v = float(getattr(self, name))
            if not 0 <= v <= 1:
                raise ValueError(f"{name} must be a probability in [0, 1], got {v}")
            object.__setattr__(self, name, v)


@dataclass(frozen=True)
class AngleParams:
    """Per-step circuit angles (radians) and the step period tau0 (us).

    theta1 steers dephasing, theta2 damping, theta3 the x rotation;
    theta1 and theta2 live in [0, pi/2].
    """

    theta1: float = 0.0
    theta2: float = 0.0
    theta3: float = 0.0
    tau0: float = 3.56

    def __post_init__(self):
        for name in ("theta1", "theta2"):
            v = float(getattr(self, name))
            if not 0 <= v <= np.pi / 2:
                raise ValueError(f"{name} must lie in [0, pi/2], got {v}")
        if self.tau0 <= 0:
            raise ValueError(f"tau0 must be positive, got {self.tau0}")

    @classmethod
    def from_degrees(
        cls, theta1: float, theta2: float, theta3: float, tau0: float = 3.56
    ) -> "AngleParams":
        return cls(np.radians(theta1), np.radians(theta2), np.radians(theta3), tau0)


def dephasing_circuit(theta1: float) -> DilationCircuit:
    """Ancilla rotation by theta1, CZ, reset: dephases the data qubit.

    The circuit applies sigma_z to the data with probability sin^2(theta1/2),
    shrinking off-diagonals by cos(theta1) = 2 cos^2(theta1/2) - 1.
    """
    return DilationCircuit(
        (Gate("ancilla_rx", theta1), Gate("cz"), Gate("reset_ancilla")),
        label="dephasing",
    )


def damping_circuit(theta2: float) -> DilationCircuit:
    """Rotation, CZ, counter-rotation, adaptive CNOT, reset: amplitude damping.

    Induces the damping channel with E0 = diag(1, cos(theta2)) and
    E1 proportional to [[0, sin(theta2)], [0, 0]]: the data qubit relaxes
    from |1> to |0> with probability sin^2(theta2).
    """
    return DilationCircuit(
        (
            Gate("ancilla_rx", theta2),
            Gate("cz"),
            Gate("ancilla_rx", -theta2),
            Gate("cnot_ancilla_ctrl"),
            Gate("reset_ancilla"),
        ),
        label="damping",
    )


def rotation_circuit(theta3: float) -> DilationCircuit:
    """Plain data-qubit x rotation by theta3 (ancilla untouched)."""
    return DilationCircuit(
        (Gate("data_x", theta3), Gate("reset_ancilla")), label="rotation"
    )


def _apply_kraus_pair(rho: np.ndarray, ops: tuple[np.ndarray, ...]) -> np.ndarray:
    out = np.zeros_like(rho)
    for e in ops:
        out += e @ rho @ dag(e)
    return out


def _ancilla_decay_ops(p: float) -> tuple[np.ndarray, np.ndarray]:
    e0 = kron(np.diag([1.0, np.sqrt(1.0 - p)]).astype(complex), I2)
    e1 = np.zeros((2, 2), dtype=complex)
    e1[0, 1] = np.sqrt(p)
    return e0, kron(e1, I2)


def run_circuit(
    circuit: DilationCircuit,
    rho_data: np.ndarray,
    noise: NoiseParams | None = None,
    adaptive: str = "coherent",
) -> np.ndarray:
    """Execute a dilation circuit on a data-qubit operator.

    Args:
        circuit: Gate sequence ending in the ancilla reset.
        rho_data: 2x2 data operator (any matrix; the map is linear).
        noise: Optional injected imperfections; ancilla decay fires after
            every two-qubit gate, one depolarization event fires on the data
            after the whole composite unitary.
        adaptive: "coherent" keeps the CNOT unitary; "feedforward" replaces
            it by an ancilla z measurement with a conditional data X (the
            induced channel is identical).

    Returns:
        The resulting 2x2 data operator after the ancilla reset.
    """
    if adaptive not in ("coherent", "feedforward"):
        raise ValueError(f"adaptive must be 'coherent' or 'feedforward', got {adaptive!r}")
    rho_data = np.asarray(rho_data, dtype=complex)
    if rho_data.shape != (2, 2):
        raise ValueError(f"data operator must be 2x2, got {rho_data.shape}")
    rho = kron(_PROJ_G, rho_data)
    for gate in circuit.gates:
        if gate.kind == "reset_ancilla":
            out = partial_trace(rho, (2, 2), keep=1)
            if noise is not None and noise.p_grape > 0:
                out = (1 - noise.p_grape) * out + noise.p_grape * np.trace(out) * I2 / 2
            return out
        if gate.kind == "cnot_ancilla_ctrl" and adaptive == "feedforward":
            rho = _apply_kraus_pair(rho, (kron(_PROJ_G, I2), kron(_PROJ_E, SIGMA_X)))
        else:
            u = gate_unitary(gate)
            rho = u @ rho @ dag(u)
        if (
            noise is not None
            and noise.p_ancilla_decay > 0
            and gate.kind in ("cz", "cnot_ancilla_ctrl")
        ):
            rho = _apply_kraus_pair(rho, _ancilla_decay_ops(noise.p_ancilla_decay))
    raise AssertionError("unreachable: circuits always end in reset_ancilla")


def induced_channel(
    circuit: DilationCircuit,
    noise: NoiseParams | None = None,
    adaptive: str = "coherent",
) -> np.ndarray:
    """Column-stacking superoperator of the data-qubit channel the circuit induces."""
    s = np.empty((4, 4), dtype=complex)
    for col in range(4):
        basis = np.zeros(4)
        basis[col] = 1.0
        out = run_circuit(circuit, basis.reshape(2, 2, order="F"), noise, adaptive)
        s[:, col] = vec(out)
    return s


def angle_to_rates(params: AngleParams) -> CanonicalRates:
    """Map per-step circuit angles to canonical rates.

    gamma_phi = -ln(2cos^2(theta1/2) - 1)/tau0, gamma1 = -ln(cos^2 theta2)/tau0,
    omega = theta3/(2 pi tau0).

    Raises:
        ValueError: When theta1 >= pi/2 or theta2 = pi/2 (the logarithm
            argument hits zero; no finite rate reproduces the step).
    """
    # The thresholds guard the logarithm domain against rounding at pi/2.
    arg_phi = 2 * np.cos(params.theta1 / 2) ** 2 - 1
    if arg_phi <= 1e-12:
        raise ValueError(
            f"theta1 must be below pi/2 for a finite dephasing rate, got {params.theta1}"
        )
    arg_damp = np.cos(params.theta2) ** 2
    if arg_damp <= 1e-12:
        raise ValueError(
            f"theta2 must be below pi/2 for a finite damping rate, got {params.theta2}"
        )
    return CanonicalRates(
        gamma1=-np.log(arg_damp) / params.tau0,
        gamma_phi=-np.log(arg_phi) / params.tau0,
        omega=params.theta3 / (2 * np.pi * params.tau0),
    )


def rates_to_angles(rates: CanonicalRates, tau0: float = 3.56) -> AngleParams:
    """Inverse of :func:`angle_to_rates`: per-step angles realizing the rates over tau0."""
    if tau0 <= 0:
        raise ValueError(f"tau0 must be positive, got {tau0}")
    theta1 = np.arccos(min(1.0, np.exp(-rates.gamma_phi * tau0)))
    theta2 = np.arccos(min(1.0, np.exp(-rates.gamma1 * tau0 / 2)))
    theta3 = 2 * np.pi * rates.omega * tau0
    return AngleParams(theta1, theta2, theta3, tau0)


def predict_coherence(
    params: AngleParams,
    t1_intrinsic: float = np.inf,
    t2_intrinsic: float = np.inf,
) -> tuple[float, float]:
    """Simulated coherence times including intrinsic hardware decay.

    1/T1 = gamma1 + 1/T1_intrinsic and 1/T2 = gamma_phi + gamma1/2
    + 1/T2_intrinsic; infinities drop the intrinsic contribution.

    Returns:
        (T1, T2) in us.
    """
    if t1_intrinsic <= 0 or t2_intrinsic <= 0:
        raise ValueError("intrinsic times must be positive (np.inf for ideal)")
    rates = angle_to_rates(params)
    inv_t1 = rates.gamma1 + (0.0 if np.isinf(t1_intrinsic) else 1.0 / t1_intrinsic)
    inv_t2 = (
        rates.gamma_phi
        + rates.gamma1 / 2
        + (0.0 if np.isinf(t2_intrinsic) else 1.0 / t2_intrinsic)
    )
    t1 = np.inf if inv_t1 == 0 else 1.0 / inv_t1
    t2 = np.inf if inv_t2 == 0 else 1.0 / inv_t2
    return t1, t2


def depolarization_equivalent_time(p_grape: float, tau0: float = 3.56) -> float:
    """Coherence-limit equivalent of one depolarization event per step.

    A per-step depolarization probability p shrinks Bloch components by
    (1 - p) each tau0, i.e. a decay time tau0 / (-ln(1 - p)).
    """
    if not 0 <= p_grape < 1:
        raise ValueError(f"p_grape must be in [0, 1), got {p_grape}")
    if tau0 <= 0:
        raise ValueError(f"tau0 must be positive, got {tau0}")
    if p_grape == 0:
        return np.inf
    return tau0 / (-np.log1p(-p_grape))
