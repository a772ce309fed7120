"""Protocol composition: runs, ideal reference, decomposition, suppression."""

import math

import numpy as np
import pytest

from zenolab.hilbert import (
    ComplexOperator,
    DensityMatrix,
    encode_codeword,
    hermitian_exponential,
    maximally_mixed,
    partial_trace_bath,
    random_hermitian,
    spectral_norm,
    tensor_product,
    trace_distance,
)
from zenolab.measurement import MeasurementStrength
from zenolab.pauli import (
    PauliOperator,
    build_detection_code,
    logical_operator,
    pauli_to_matrix,
)
from zenolab.protocol import (
    ExperimentSpec,
    HamiltonianModel,
    ProtocolConfig,
    build_experiment_model,
    build_one_local_coupling,
    decompose_hamiltonian,
    deviation,
    ideal_evolve,
    run_protocol,
    run_experiment,
    suppression_factor,
    write_sim_csv,
)

P = PauliOperator.from_string


@pytest.fixture(scope="module")
def setup():
    spec = ExperimentSpec(seed=11)
    code, model, rho_sb = build_experiment_model(spec)
    return spec, code, model, rho_sb


class TestHamiltonianModel:
    def test_norm_invariants(self, setup):
        spec, code, model, _ = setup
        assert abs(2 * spectral_norm(model.h0_matrix()) - spec.j0) < 1e-9
        assert abs(2 * spectral_norm(model.h_sb) - spec.j1) < 1e-12

    def test_code_compatibility(self, setup):
        _, code, model, _ = setup
        model.check_code_compatible(code)

    def test_incompatible_h_s_rejected(self, setup):
        _, code, model, _ = setup
        bad = HamiltonianModel(
            h_s=ComplexOperator((2,) * 4, pauli_to_matrix(P("XIII"))),
            h_b=model.h_b,
            h_sb=model.h_sb,
            j0=2.5,
            j1=0.1,
        )
        with pytest.raises(ValueError, match="commute"):
            bad.check_code_compatible(code)

    def test_norm_bound_violation_rejected(self, setup):
        _, _, model, _ = setup
        with pytest.raises(ValueError, match="exceeds"):
            HamiltonianModel(
                h_s=model.h_s, h_b=model.h_b, h_sb=model.h_sb, j0=1e-3, j1=0.1
            )


class TestRunProtocol:
    def test_no_coupling_no_deviation(self, setup):
        # with HSB = 0 every variant preserves the encoded state perfectly
        spec, code, model, rho_sb = setup
        zero = ComplexOperator(model.h_sb.dims, np.zeros_like(model.h_sb.matrix), bath=True)
        free = HamiltonianModel(model.h_s, model.h_b, zero, spec.j0, 0.0)
        ideal = ideal_evolve(rho_sb, free, spec.tau)
        for variant in ("group", "generators", "strong", "none"):
            cfg = ProtocolConfig(code, MeasurementStrength(2.0), spec.tau, 4, variant)
            real = run_protocol(rho_sb, free, cfg)
            assert deviation(real, ideal) < 1e-12

    def test_zero_strength_equals_no_measurement(self, setup):
        spec, code, model, rho_sb = setup
        out_eps0 = run_protocol(
            rho_sb, model, ProtocolConfig(code, MeasurementStrength(0.0), 1.0, 5, "group")
        )
        out_none = run_protocol(
            rho_sb, model, ProtocolConfig(code, MeasurementStrength(0.0), 1.0, 5, "none")
        )
        assert np.max(np.abs(out_eps0.matrix - out_none.matrix)) < 1e-12

    def test_strong_variant_ignores_strength(self, setup):
        spec, code, model, rho_sb = setup
        a = run_protocol(
            rho_sb, model, ProtocolConfig(code, MeasurementStrength(1.0), 1.0, 3, "strong")
        )
        b = run_protocol(
            rho_sb,
            model,
            ProtocolConfig(code, MeasurementStrength.strong(), 1.0, 3, "group"),
        )
        assert np.max(np.abs(a.matrix - b.matrix)) < 1e-12

    def test_zeno_suppression_with_m(self, setup):
        spec, code, model, rho_sb = setup
        ideal = ideal_evolve(rho_sb, model, spec.tau)
        devs = {}
        for m in (1, 32):
            cfg = ProtocolConfig(code, MeasurementStrength.strong(), spec.tau, m, "strong")
            devs[m] = deviation(run_protocol(rho_sb, model, cfg), ideal)
        assert devs[32] < devs[1]

    def test_zeno_convergence_chain_group(self, setup):
        # group variant at strength >= 3: deviation strictly improves along
        # M = 1 -> 8 -> 64
        spec, code, model, rho_sb = setup
        ideal = ideal_evolve(rho_sb, model, spec.tau)
        devs = {}
        for m in (1, 8, 64):
            cfg = ProtocolConfig(code, MeasurementStrength(3.0), spec.tau, m, "group")
            devs[m] = deviation(run_protocol(rho_sb, model, cfg), ideal)
        assert devs[64] < devs[8] < devs[1]


class TestIdealEvolve:
    def test_zero_time(self, setup):
        _, _, model, rho_sb = setup
        out = ideal_evolve(rho_sb, model, 0.0)
        assert np.max(np.abs(out.matrix - rho_sb.matrix)) < 1e-14

    def test_system_bath_factorization(self, setup):
        # [L_S, L_B] = 0: evolving under H_S then H_B equals evolving under H_0
        spec, _, model, rho_sb = setup
        d_s, d_b = model.system_dim, model.bath_dim
        u_s = hermitian_exponential(model.h_s.matrix, -1j * spec.tau)
        u_b = hermitian_exponential(model.h_b.matrix, -1j * spec.tau)
        u_seq = np.kron(u_s, np.eye(d_b)) @ np.kron(np.eye(d_s), u_b)
        expect = u_seq @ rho_sb.matrix @ u_seq.conj().T
        out = ideal_evolve(rho_sb, model, spec.tau)
        assert np.max(np.abs(out.matrix - expect)) < 1e-12

    def test_logical_rotation_stays_in_code_space(self, setup):
        spec, code, model, rho_sb = setup
        out = partial_trace_bath(ideal_evolve(rho_sb, model, spec.tau))
        for s in code.group:
            sm = pauli_to_matrix(s)
            expect = np.trace(sm @ out.matrix).real
            assert abs(expect - 1.0) < 1e-12


class TestDecompose:
    def test_components_sum(self, setup, code4):
        _, _, model, _ = setup
        total = model.total_matrix()
        omegas = [
            np.kron(pauli_to_matrix(g), np.eye(model.bath_dim)) for g in code4.group[1:3]
        ]
        parts = decompose_hamiltonian(total, omegas)
        assert len(parts) == 4
        recon = sum(parts.values())
        assert np.max(np.abs(recon - total)) < 1e-13

    def test_commutation_pattern(self, setup, code4):
        _, _, model, _ = setup
        total = model.total_matrix()
        omegas = [
            np.kron(pauli_to_matrix(g), np.eye(model.bath_dim)) for g in code4.group[1:3]
        ]
        for pattern, mat in decompose_hamiltonian(total, omegas).items():
            for bit, w in zip(pattern, omegas):
                comm = mat @ w - w @ mat if bit == 0 else mat @ w + w @ mat
                assert np.max(np.abs(comm)) < 1e-12

    def test_commuting_hamiltonian_single_component(self, code4):
        h = pauli_to_matrix(logical_operator(code4, "X", 1))
        omegas = [pauli_to_matrix(g) for g in code4.generators]
        parts = decompose_hamiltonian(h, omegas)
        assert np.max(np.abs(parts[(0, 0)] - h)) < 1e-14
        for pattern in ((0, 1), (1, 0), (1, 1)):
            assert np.max(np.abs(parts[pattern])) < 1e-14

    def test_x1_lands_in_single_sector(self, code4):
        # X on qubit 1 commutes with X^4, anticommutes with Z^4
        h = pauli_to_matrix(P("XIII"))
        omegas = [pauli_to_matrix(g) for g in code4.generators]
        parts = decompose_hamiltonian(h, omegas)
        assert np.max(np.abs(parts[(0, 1)] - h)) < 1e-14
        assert all(
            np.max(np.abs(parts[p])) < 1e-14 for p in ((0, 0), (1, 0), (1, 1))
        )

    def test_norms_bounded(self, setup, code4):
        _, _, model, _ = setup
        total = model.total_matrix()
        omegas = [
            np.kron(pauli_to_matrix(g), np.eye(model.bath_dim)) for g in code4.generators
        ]
        parts = decompose_hamiltonian(total, omegas)
        top = spectral_norm(total)
        for pattern, mat in parts.items():
            assert spectral_norm(mat) <= top + 1e-12
            if pattern != (0, 0):
                # nonzero patterns contain only coupling terms
                assert spectral_norm(mat) <= model.j1 / 2 + 1e-12

    def test_components_orthogonal(self, setup, code4):
        # observation: distinct sectors are Hilbert-Schmidt orthogonal
        _, _, model, _ = setup
        total = model.total_matrix()
        omegas = [
            np.kron(pauli_to_matrix(g), np.eye(model.bath_dim)) for g in code4.generators
        ]
        parts = list(decompose_hamiltonian(total, omegas).values())
        for i, a in enumerate(parts):
            for b in parts[i + 1 :]:
                assert abs(np.trace(a.conj().T @ b)) < 1e-10

    def test_non_involution_rejected(self):
        with pytest.raises(ValueError, match="involution"):
            decompose_hamiltonian(np.eye(2), [np.array([[1, 1], [0, 1]])])


class TestOneLocalCoupling:
    def test_hermitian_and_norm(self):
        op = build_one_local_coupling(4, 2, 3, 0.25)
        assert op.is_hermitian()
        assert abs(2 * spectral_norm(op) - 0.25) < 1e-12

    def test_deterministic(self):
        a = build_one_local_coupling(4, 2, 9, 0.1)
        b = build_one_local_coupling(4, 2, 9, 0.1)
        assert np.array_equal(a.matrix, b.matrix)

    def test_every_term_detectable(self, code4):
        # each sigma_i^alpha anticommutes with at least one generator
        from zenolab.pauli import anticommuting_count

        for qubit in range(4):
            for letter in "XYZ":
                err = PauliOperator.single(4, qubit, letter)
                assert anticommuting_count(err, code4, "generators") >= 1


@pytest.fixture()
def codeword(code4):
    return encode_codeword(code4, "00")


class TestSuppressionFactor:

    def test_group_scales_by_zeta_squared(self, code4, codeword, rng):
        s = MeasurementStrength(1.3)
        bath_op = random_hermitian(2, rng)
        for qubit in range(4):
            for letter in "XYZ":
                err = PauliOperator.single(4, qubit, letter)
                got = suppression_factor(
                    codeword, err, code4, s, 1, "group", maximally_mixed(2), bath_op
                )
                assert abs(got - s.zeta**2) < 1e-12

    def test_generators_scale_by_anticommuting_count(self, code4, codeword, rng):
        from zenolab.pauli import anticommuting_count

        s = MeasurementStrength(0.6)
        bath_op = random_hermitian(2, rng)
        for qubit in range(4):
            for letter in "XYZ":
                err = PauliOperator.single(4, qubit, letter)
                q_e = anticommuting_count(err, code4, "generators")
                got = suppression_factor(
                    codeword, err, code4, s, 1, "generators", maximally_mixed(2), bath_op
                )
                assert abs(got - s.zeta**q_e) < 1e-12

    def test_repeated_rounds_compound(self, code4, codeword):
        s = MeasurementStrength(0.9)
        err = P("IYII")
        for j in (1, 2, 3):
            got = suppression_factor(codeword, err, code4, s, j, "group")
            assert abs(got - s.zeta ** (2 * j)) < 1e-12

    def test_zero_strength_is_transparent(self, code4, codeword):
        got = suppression_factor(codeword, P("XIII"), code4, MeasurementStrength(0.0))
        assert abs(got - 1.0) < 1e-14

    def test_zero_input_rejected(self, code4, codeword):
        # a stabilizer fixes the codeword, so the commutator input vanishes
        with pytest.raises(ValueError, match="zero"):
            suppression_factor(codeword, P("XXXX"), code4, MeasurementStrength(1.0))

    @pytest.mark.parametrize("seed", [0, 1, 2, 3, 4, 5])
    def test_random_codes_scale_by_half_the_group(self, seed):
        # the zeta^q identity is not specific to the detection code: on a
        # random code the group channel scales any detectable-error
        # commutator by zeta^{(Q+1)/2}, the generator channel by zeta^{q_E}
        from zenolab.pauli import StabilizerCode, all_paulis_of_weight, anticommuting_count
        from zenolab.verify import random_stabilizer_generators

        rng = np.random.default_rng(seed)
        n = int(rng.integers(3, 5))
        qbar = int(rng.integers(1, 3))
        code = StabilizerCode.from_generators(random_stabilizer_generators(n, qbar, rng))
        # maximally mixed state on the code space; stabilized by the group
        proj = np.eye(2**n, dtype=complex)
        for g in code.generators:
            proj = proj @ (np.eye(2**n) + pauli_to_matrix(g)) / 2
        rho = DensityMatrix((2,) * n, proj / np.trace(proj))
        s = MeasurementStrength(0.8)
        checked = 0
        for err in all_paulis_of_weight(n, (1,)):
            q_e = anticommuting_count(err, code, "generators")
            if q_e == 0:
                continue
            got_group = suppression_factor(rho, err, code, s, 1, "group")
            assert abs(got_group - s.zeta ** code.q_group) < 1e-12
            got_gen = suppression_factor(rho, err, code, s, 1, "generators")
            assert abs(got_gen - s.zeta**q_e) < 1e-12
            checked += 1
        assert checked > 0


class TestExperiment:
    def test_rows_satisfy_bounds(self, setup):
        spec, *_ = setup
        rows = run_experiment(spec)
        assert rows
        for r in rows:
            assert r.ok is True

    def test_deviation_below_unprotected(self):
        spec = ExperimentSpec(
            m_list=(8,), epsilon_list=(3.0,), variant_list=("group", "none"), seed=5
        )
        rows = run_experiment(spec)
        dev = {r.variant: r.deviation for r in rows}
        assert dev["group"] < dev["none"]

    def test_spec_json_roundtrip(self):
        spec = ExperimentSpec(epsilon_list=(1.0, math.inf))
        back = ExperimentSpec.from_json(spec.to_json())
        assert back == spec

    def test_csv_deterministic(self, tmp_path):
        spec = ExperimentSpec(m_list=(1, 2), epsilon_list=(1.0,), variant_list=("group",))
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        write_sim_csv(run_experiment(spec), str(p1))
        write_sim_csv(run_experiment(spec), str(p2))
        assert p1.read_bytes() == p2.read_bytes()

    def test_j0_not_greater_than_j1_warns(self):
        spec = ExperimentSpec(j0=0.1, j1=0.2, m_list=(1,))
        with pytest.warns(UserWarning, match="hypothesis"):
            build_experiment_model(spec)
