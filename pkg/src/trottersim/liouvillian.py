"""Lindblad superoperators and exact reference evolution of a driven lossy qubit.

Conventions fixed here and used across the package:

* Master equation: d(rho)/dt = sum_j -i[H_j, rho] + sum_k (2 L_k rho L_k^dag
  - {L_k^dag L_k, rho}). Note the dissipator carries a factor 2 on the
  sandwich term and no 1/2 on the anticommutator.
* Canonical rates: ``gamma1`` is the population decay rate of |1> (its
  occupation falls as e^{-gamma1 t}), ``gamma_phi`` the pure-dephasing rate.
  Off-diagonals then decay as e^{-(gamma1/2 + gamma_phi) t}, i.e.
  1/T1 = gamma1 and 1/T2 = gamma1/2 + gamma_phi.
* Drive Hamiltonian H = pi * omega * sigma_x with ``omega`` a full-cycle
  Rabi frequency in MHz: a step of duration tau rotates by 2*pi*omega*tau.
* Basis |0>, |1> with <sigma_z>(|0>) = +1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import I2, SIGMA_MINUS, SIGMA_X, SIGMA_Y, SIGMA_Z, dag, expm, kron, vec

__all__ = [
    "GeneratorSpec",
    "CanonicalRates",
    "EvolutionTrace",
    "coherent",
    "jump",
    "dephasing_generator",
    "damping_generator",
    "drive_generator",
    "qubit_generators",
    "lindblad_superop",
    "propagator",
    "pauli_expectations",
    "target_trace",
]


@dataclass(frozen=True)
class GeneratorSpec:
    """One additive term of a Lindblad generator.

    kind is "coherent" (matrix = Hamiltonian H, contributes -i[H, rho]) or
    "jump" (matrix = jump operator L, contributes 2 L rho L^dag -
    {L^dag L, rho}).
    """

    kind: str
    matrix: np.ndarray
    label: str = ""

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"generator matrix must be square, got {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("generator matrix contains non-finite entries")
        if self.kind == "coherent":
            if np.abs(m - dag(m)).max() > 1e-12:
                raise ValueError("coherent generator requires a Hermitian matrix")
        elif self.kind != "jump":
            raise ValueError(f"unknown generator kind {self.kind!r}")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def coherent(h: np.ndarray, label: str = "") -> GeneratorSpec:
    """Coherent term -i[H, rho] from a Hermitian H."""
    return GeneratorSpec("coherent", h, label)


def jump(l: np.ndarray, label: str = "") -> GeneratorSpec:
    """Dissipative term 2 L rho L^dag - {L^dag L, rho}."""
    return GeneratorSpec("jump", l, label)


@dataclass(frozen=True)
class CanonicalRates:
    """Physical rates of the driven lossy qubit in canonical convention.

    Attributes:
        gamma1: Population decay rate of |1> in 1/us; P(1) ~ e^{-gamma1 t}.
        gamma_phi: Pure-dephasing rate in 1/us; off-diagonals pick up
            e^{-gamma_phi t} on top of the gamma1/2 decay.
        omega: Rabi rate in MHz (full cycles per us) about the x axis.
    """

    gamma1: float = 0.0
    gamma_phi: float = 0.0
    omega: float = 0.0

    def __post_init__(self):
        for name in ("gamma1", "gamma_phi", "omega"):
            v = float(getattr(self, name))
            if not np.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v}")
            object.__setattr__(self, name, v)
        if self.gamma1 < 0 or self.gamma_phi < 0:
            raise ValueError("rates must be nonnegative")

    @property
    def t1(self) -> float:
        """Population relaxation time 1/gamma1 (inf when undamped)."""
        return np.inf if self.gamma1 == 0 else 1.0 / self.gamma1

    @property
    def t2(self) -> float:
        """Coherence time 1/(gamma1/2 + gamma_phi) (inf when lossless)."""
        total = self.gamma1 / 2 + self.gamma_phi
        return np.inf if total == 0 else 1.0 / total


def dephasing_generator(gamma_phi: float) -> GeneratorSpec:
    """Jump term L = (sqrt(gamma_phi)/2) sigma_z giving e^{-gamma_phi t} coherence decay."""
    return jump(np.sqrt(gamma_phi) / 2 * SIGMA_Z, label="dephasing")


def damping_generator(gamma1: float) -> GeneratorSpec:
    """Jump term L = sqrt(gamma1/2) sigma_minus giving e^{-gamma1 t} population decay."""
    return jump(np.sqrt(gamma1 / 2) * SIGMA_MINUS, label="damping")


def drive_generator(omega: float) -> GeneratorSpec:
    """Coherent term H = pi*omega*sigma_x (omega in MHz, full-cycle Rabi rate)."""
    return coherent(np.pi * omega * SIGMA_X, label="rotation")


def qubit_generators(rates: CanonicalRates) -> list[GeneratorSpec]:
    """The three generator terms (dephasing, damping, drive) for given rates."""
    return [
        dephasing_generator(rates.gamma_phi),
        damping_generator(rates.gamma1),
        drive_generator(rates.omega),
    ]


def lindblad_superop(generators: list[GeneratorSpec], dim: int = 2) -> np.ndarray:
    """Assemble the d^2 x d^2 Lindblad superoperator in column-stacking form.

    Args:
        generators: Additive coherent/jump terms of consistent dimension.
        dim: Hilbert-space dimension used when generators is empty.

    Returns:
        S with S @ vec(rho) = vec(sum_j -i[H_j,rho]
        + sum_k (2 L_k rho L_k^dag - {L_k^dag L_k, rho})).

    Raises:
        ValueError: On mixed generator dimensions.
    """
    if generators:
        dim = generators[0].dim
    eye = np.eye(dim, dtype=complex)
    s = np.zeros((dim * dim, dim * dim), dtype=complex)
    for g in generators:
        if g.dim != dim:
            raise ValueError(f"generator dimension {g.dim} does not match {dim}")
        m = g.matrix
        if g.kind == "coherent":
            s += -1j * (kron(eye, m) - kron(m.T, eye))
        else:
            mm = dag(m) @ m
            s += 2 * kron(np.conj(m), m) - kron(eye, mm) - kron(mm.T, eye)
    return s


def propagator(superop: np.ndarray, t: float) -> np.ndarray:
    """Exact channel superoperator expm(S*t) for evolution time t >= 0."""
    if t < 0:
        raise ValueError(f"propagation time must be nonnegative, got {t}")
    return expm(np.asarray(superop, dtype=complex) * t)


def pauli_expectations(rho: np.ndarray) -> tuple[float, float, float]:
    """(<sigma_x>, <sigma_y>, <sigma_z>) of a qubit state, real parts."""
    return (
        float(np.real(np.trace(SIGMA_X @ rho))),
        float(np.real(np.trace(SIGMA_Y @ rho))),
        float(np.real(np.trace(SIGMA_Z @ rho))),
    )


@dataclass(frozen=True)
class EvolutionTrace:
    """Bloch-vector record of a stepped qubit evolution.

    times holds N+1 sample instants (t=0 included); sx, sy, sz are the
    matching Pauli expectation values.
    """

    times: np.ndarray
    sx: np.ndarray
    sy: np.ndarray
    sz: np.ndarray
    label: str = ""

    def __post_init__(self):
        for name in ("times", "sx", "sy", "sz"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        n = self.times.size
        if any(getattr(self, k).size != n for k in ("sx", "sy", "sz")):
            raise ValueError("trace component lengths differ")

    def __len__(self) -> int:
        return int(self.times.size)

    def as_matrix(self) -> np.ndarray:
        """(N+1, 3) array with columns sx, sy, sz."""
        return np.column_stack([self.sx, self.sy, self.sz])

    def bloch_norms(self) -> np.ndarray:
        """Euclidean Bloch-vector norms, one per sample; <= 1 for physical states."""
        return np.sqrt(self.sx**2 + self.sy**2 + self.sz**2)


def target_trace(
    rates: CanonicalRates,
    rho0: np.ndarray,
    tau0: float,
    n_steps: int,
    label: str = "target",
) -> EvolutionTrace:
    """Exact master-equation reference evolution sampled every tau0.

    Args:
        rates: Canonical qubit rates.
        rho0: Initial density matrix.
        tau0: Step duration in us (> 0).
        n_steps: Number of steps N >= 1; the trace has N+1 points.
        label: Tag stored on the returned trace.

    Returns:
        EvolutionTrace of the exact propagator applied step by step.
    """
    if n_steps < 1:
        raise ValueError(f"n_steps must be >= 1, got {n_steps}")
    if tau0 <= 0:
        raise ValueError(f"tau0 must be positive, got {tau0}")
    s = lindblad_superop(qubit_generators(rates))
    step = propagator(s, tau0)
    rho_v = vec(np.asarray(rho0, dtype=complex))
    times = np.arange(n_steps + 1) * tau0
    sx = np.empty(n_steps + 1)
    sy = np.empty(n_steps + 1)
    sz = np.empty(n_steps + 1)
    for j in range(n_steps + 1):
        rho = rho_v.reshape(2, 2, order="F")
        sx[j], sy[j], sz[j] = pauli_expectations(rho)
        if j < n_steps:
            rho_v = step @ rho_v
    return EvolutionTrace(times, sx, sy, sz, label=label)
