"""Tests for ancilla dilation circuits, induced channels, and angle mappings."""

import numpy as np
import pytest

from trottersim.channels import (
    channel_distance,
    damping_channel,
    dephasing_channel,
    identity_channel,
    is_cptp,
    to_superop,
    unitary_channel,
)
from trottersim.dilation import (
    AngleParams,
    DilationCircuit,
    Gate,
    NoiseParams,
    angle_to_rates,
    damping_circuit,
    dephasing_circuit,
    depolarization_equivalent_time,
    gate_unitary,
    induced_channel,
    predict_coherence,
    rates_to_angles,
    rotation_circuit,
    run_circuit,
)
from trottersim.linalg import KET_1, SIGMA_Z, dag, density, unvec, vec
from trottersim.liouvillian import CanonicalRates

TAU0 = 3.56
THETA_GRID_DEG = np.arange(5, 90, 5)  # 5..85 degrees


# ------------------------------------------------------------------ gates


def test_gate_unitaries_are_unitary():
    for gate in (
        Gate("ancilla_rx", 0.7),
        Gate("cz"),
        Gate("cnot_ancilla_ctrl"),
        Gate("data_x", -1.3),
    ):
        u = gate_unitary(gate)
        np.testing.assert_allclose(u @ dag(u), np.eye(4), atol=1e-12)


def test_reset_gate_has_no_unitary():
    with pytest.raises(ValueError):
        gate_unitary(Gate("reset_ancilla"))


def test_unknown_gate_kind_rejected():
    with pytest.raises(ValueError, match="kind"):
        Gate("hadamard")


def test_circuit_requires_single_trailing_reset():
    with pytest.raises(ValueError, match="reset"):
        DilationCircuit((Gate("cz"),))
    with pytest.raises(ValueError, match="reset"):
        DilationCircuit((Gate("reset_ancilla"), Gate("cz")))
    with pytest.raises(ValueError, match="reset"):
        DilationCircuit(
            (Gate("reset_ancilla"), Gate("cz"), Gate("reset_ancilla"))
        )


def test_circuit_layouts():
    deph = dephasing_circuit(0.3)
    assert [g.kind for g in deph.gates] == ["ancilla_rx", "cz", "reset_ancilla"]
    damp = damping_circuit(0.4)
    assert [g.kind for g in damp.gates] == [
        "ancilla_rx",
        "cz",
        "ancilla_rx",
        "cnot_ancilla_ctrl",
        "reset_ancilla",
    ]
    assert damp.gates[0].theta == pytest.approx(0.4)
    assert damp.gates[2].theta == pytest.approx(-0.4)


# ------------------------------------------------------- induced channels


def test_zero_angle_circuits_are_identity():
    for circ in (dephasing_circuit(0.0), damping_circuit(0.0), rotation_circuit(0.0)):
        s = induced_channel(circ)
        np.testing.assert_allclose(s, np.eye(4), atol=1e-12)


def test_complete_dephasing_at_right_angle():
    s = induced_channel(dephasing_circuit(np.pi / 2))
    rho = unvec(s @ vec(np.array([[0.5, 0.5], [0.5, 0.5]])))
    np.testing.assert_allclose(rho, np.diag([0.5, 0.5]), atol=1e-12)


def test_dephasing_off_diagonal_multiplier_20_degrees():
    s = induced_channel(dephasing_circuit(np.radians(20)))
    rho = unvec(s @ vec(np.array([[0.5, 0.5], [0.5, 0.5]])))
    assert rho[0, 1].real == pytest.approx(0.5 * 0.93969262, abs=1e-7)


def test_damping_circuit_30_degrees_matches_kraus_pair():
    s = induced_channel(damping_circuit(np.radians(30)))
    e0 = np.diag([1.0, np.cos(np.radians(30))])
    e1 = np.zeros((2, 2))
    e1[0, 1] = np.sin(np.radians(30))
    from trottersim.channels import KrausChannel

    assert channel_distance(s, KrausChannel((e0.astype(complex), e1.astype(complex)))) < 1e-12
    assert e0[1, 1] == pytest.approx(0.86603, abs=1e-5)


def test_damping_circuit_right_angle_fully_relaxes():
    s = induced_channel(damping_circuit(np.pi / 2))
    rho = unvec(s @ vec(density(KET_1)))
    np.testing.assert_allclose(rho, np.diag([1.0, 0.0]), atol=1e-12)


@pytest.mark.parametrize("theta_deg", THETA_GRID_DEG)
def test_dephasing_circuit_matches_mapped_channel(theta_deg):
    theta = np.radians(theta_deg)
    gamma_phi = -np.log(2 * np.cos(theta / 2) ** 2 - 1) / TAU0
    d = channel_distance(
        induced_channel(dephasing_circuit(theta)), dephasing_channel(gamma_phi, TAU0)
    )
    assert d < 1e-10


@pytest.mark.parametrize("theta_deg", THETA_GRID_DEG)
def test_damping_circuit_matches_mapped_channel(theta_deg):
    theta = np.radians(theta_deg)
    gamma1 = -np.log(np.cos(theta) ** 2) / TAU0
    d = channel_distance(
        induced_channel(damping_circuit(theta)), damping_channel(gamma1, TAU0)
    )
    assert d < 1e-10


def test_induced_channels_are_cptp():
    rng = np.random.default_rng(31)
    for _ in range(20):
        theta = rng.uniform(0, np.pi / 2)
        for circ in (dephasing_circuit(theta), damping_circuit(theta)):
            assert is_cptp(induced_channel(circ))
            assert is_cptp(
                induced_channel(circ, noise=NoiseParams(0.01, 0.01))
            )


def test_measurement_feedforward_equivalence():
    for theta_deg in (10, 30, 55, 80):
        circ = damping_circuit(np.radians(theta_deg))
        coherent = induced_channel(circ, adaptive="coherent")
        feedforward = induced_channel(circ, adaptive="feedforward")
        assert np.abs(coherent - feedforward).max() < 1e-12


def test_run_circuit_rejects_bad_adaptive_mode():
    with pytest.raises(ValueError, match="adaptive"):
        run_circuit(damping_circuit(0.3), np.eye(2) / 2, adaptive="magic")


def test_dephasing_circuit_is_probabilistic_phase_flip():
    for theta in (0.2, 0.9, 1.4):
        s = induced_channel(dephasing_circuit(theta))
        p = np.sin(theta / 2) ** 2
        mix = (1 - p) * to_superop(identity_channel()) + p * to_superop(
            unitary_channel(SIGMA_Z)
        )
        assert np.abs(s - mix).max() < 1e-12


def test_rotation_circuit_is_x_rotation():
    theta = np.radians(51.4)
    s = induced_channel(rotation_circuit(theta))
    from trottersim.linalg import SIGMA_X, expm

    u = expm(-1j * theta / 2 * SIGMA_X)
    assert channel_distance(s, unitary_channel(u)) < 1e-12


# ------------------------------------------------------------------ noise


def test_ancilla_decay_stays_small_relative_to_target():
    # Injected ancilla decay between CZ and CNOT perturbs the damping
    # channel by well under 5% of the channel's distance from identity.
    ident = to_superop(identity_channel())
    for theta_deg in (10, 20, 30):
        circ = damping_circuit(np.radians(theta_deg))
        clean = induced_channel(circ)
        noisy = induced_channel(circ, noise=NoiseParams(p_ancilla_decay=0.01))
        ratio = channel_distance(noisy, clean) / channel_distance(clean, ident)
        assert ratio < 0.05


def test_depolarization_shrinks_bloch_vector():
    p = 0.02
    s = induced_channel(rotation_circuit(0.0), noise=NoiseParams(p_grape=p))
    rho = unvec(s @ vec(density(KET_1)))
    np.testing.assert_allclose(rho, np.diag([p / 2, 1 - p / 2]), atol=1e-12)


def test_noise_params_validation():
    with pytest.raises(ValueError):
        NoiseParams(p_grape=1.5)
    with pytest.raises(ValueError):
        NoiseParams(p_ancilla_decay=-0.1)


# --------------------------------------------------------- angle mappings


def test_angle_to_rates_zero():
    r = angle_to_rates(AngleParams(0.0, 0.0, 0.0, TAU0))
    assert (r.gamma1, r.gamma_phi, r.omega) == (0.0, 0.0, 0.0)


def test_angle_to_rates_damping_20_degrees():
    r = angle_to_rates(AngleParams.from_degrees(0, 20, 0, TAU0))
    assert r.gamma1 == pytest.approx(0.0349452, abs=1e-6)
    assert 1 / r.gamma1 == pytest.approx(28.616, abs=2e-3)


def test_angle_to_rates_rabi_anchor():
    r = angle_to_rates(AngleParams.from_degrees(0, 0, 38.6, TAU0))
    assert r.omega * 1e3 == pytest.approx(30.1186, abs=1e-3)  # kHz


def test_angle_to_rates_rejects_domain_boundary():
    with pytest.raises(ValueError, match="theta1"):
        angle_to_rates(AngleParams(theta1=np.pi / 2))
    with pytest.raises(ValueError, match="theta2"):
        angle_to_rates(AngleParams(theta2=np.pi / 2))


def test_angle_params_range_validation():
    with pytest.raises(ValueError):
        AngleParams(theta1=-0.1)
    with pytest.raises(ValueError):
        AngleParams(theta2=2.0)
    with pytest.raises(ValueError):
        AngleParams(tau0=0.0)


def test_rates_to_angles_round_trip():
    rng = np.random.default_rng(37)
    for _ in range(50):
        params = AngleParams(
            theta1=rng.uniform(0, 1.4),
            theta2=rng.uniform(0, 1.4),
            theta3=rng.uniform(0, 2 * np.pi),
            tau0=rng.uniform(0.5, 10),
        )
        back = rates_to_angles(angle_to_rates(params), params.tau0)
        assert back.theta1 == pytest.approx(params.theta1, abs=1e-10)
        assert back.theta2 == pytest.approx(params.theta2, abs=1e-10)
        assert back.theta3 == pytest.approx(params.theta3, abs=1e-10)


def test_predict_coherence_ideal_passthrough():
    t1, t2 = predict_coherence(AngleParams(0, 0, 0.3), 114.0, 80.0)
    assert t1 == pytest.approx(114.0)
    assert t2 == pytest.approx(80.0)


def test_predict_coherence_with_intrinsic_decay():
    t1, _ = predict_coherence(AngleParams.from_degrees(0, 20, 0), t1_intrinsic=114.0)
    assert t1 == pytest.approx(22.874, abs=2e-3)


def test_predict_coherence_combined_formula():
    params = AngleParams.from_degrees(25, 35, 10)
    rates = angle_to_rates(params)
    _, t2 = predict_coherence(params)
    assert 1 / t2 == pytest.approx(rates.gamma_phi + rates.gamma1 / 2, rel=1e-12)


def test_depolarization_equivalent_time_anchors():
    assert depolarization_equivalent_time(0.01, TAU0) == pytest.approx(354.217, abs=1e-3)
    assert depolarization_equivalent_time(0.02, TAU0) == pytest.approx(176.214, abs=1e-3)
    assert depolarization_equivalent_time(0.0, TAU0) == np.inf
    with pytest.raises(ValueError):
        depolarization_equivalent_time(1.0, TAU0)
