"""Dense numerics: tensor products, partial trace, distances, evolution, codewords."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zenolab.hilbert import (
    ComplexOperator,
    DensityMatrix,
    FactorizationError,
    encode_codeword,
    evolve_unitary,
    maximally_mixed,
    partial_trace_bath,
    random_density,
    spectral_norm,
    tensor_product,
    trace_distance,
)
from zenolab.pauli import PauliOperator, pauli_to_matrix

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
KET0 = np.array([[1, 0], [0, 0]], dtype=complex)
KET1 = np.array([[0, 0], [0, 1]], dtype=complex)
PLUS = np.full((2, 2), 0.5, dtype=complex)


def dm(mat, dims=None, bath=False):
    mat = np.asarray(mat, dtype=complex)
    return DensityMatrix(dims or (mat.shape[0],), mat, bath)


class TestDensityMatrixInvariants:
    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError, match="Hermitian"):
            dm([[0.5, 0.5], [0.0, 0.5]])

    def test_rejects_bad_trace(self):
        with pytest.raises(ValueError, match="trace"):
            dm([[1.0, 0], [0, 1.0]])

    def test_rejects_negative(self):
        with pytest.raises(ValueError, match="PSD"):
            dm([[1.5, 0], [0, -0.5]])

    def test_tolerates_roundoff_negativity(self):
        dm([[1 + 5e-11, 0], [0, -5e-11]])


class TestTensorProduct:
    def test_identity_factors(self):
        out = tensor_product(
            ComplexOperator((2,), I2), ComplexOperator((2,), I2)
        )
        assert out.dims == (2, 2)
        assert np.array_equal(out.matrix, np.eye(4))

    def test_projector_product(self):
        out = tensor_product(dm(KET0), dm(KET1))
        assert np.allclose(np.diag(out.matrix), [0, 1, 0, 0])
        assert isinstance(out, DensityMatrix)

    def test_matches_pauli_matrix(self):
        out = tensor_product(
            ComplexOperator((2,), X), ComplexOperator((2,), Z)
        )
        assert np.allclose(out.matrix, pauli_to_matrix(PauliOperator.from_string("XZ")))

    def test_bath_must_stay_last(self):
        a = ComplexOperator((2, 2), np.eye(4), bath=True)
        with pytest.raises(FactorizationError):
            tensor_product(a, ComplexOperator((2,), I2))


class TestPartialTrace:
    def test_product_state(self, rng):
        rho_s = random_density(4, rng)
        rho_b = random_density(3, rng)
        joint = DensityMatrix((4, 3), np.kron(rho_s, rho_b), bath=True)
        out = partial_trace_bath(joint)
        assert np.max(np.abs(out.matrix - rho_s)) < 1e-12

    def test_maximally_entangled(self):
        vec = np.zeros(4, dtype=complex)
        vec[0] = vec[3] = 1 / math.sqrt(2)
        joint = DensityMatrix((2, 2), np.outer(vec, vec.conj()), bath=True)
        assert np.allclose(partial_trace_bath(joint).matrix, I2 / 2)

    def test_trace_preserved_random(self, rng):
        joint = DensityMatrix((4, 2), random_density(8, rng), bath=True)
        out = partial_trace_bath(joint)
        assert abs(np.trace(out.matrix) - 1) < 1e-14

    def test_requires_bath(self, rng):
        with pytest.raises(FactorizationError):
            partial_trace_bath(dm(random_density(4, rng), dims=(2, 2)))


class TestTraceDistance:
    def test_self_distance(self, rng):
        rho = dm(random_density(4, rng), dims=(4,))
        assert trace_distance(rho, rho) == 0

    def test_orthogonal_pure_states(self):
        assert abs(trace_distance(dm(KET0), dm(KET1)) - 1) < 1e-14

    def test_zero_vs_plus(self):
        # 2x2 eigenvalue oracle: eigenvalues of the difference are +-1/sqrt(2)
        assert abs(trace_distance(dm(KET0), dm(PLUS)) - 1 / math.sqrt(2)) < 1e-14

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 10_000))
    def test_symmetry_and_triangle(self, seed):
        rng = np.random.default_rng(seed)
        a, b, c = (dm(random_density(2, rng)) for _ in range(3))
        assert abs(trace_distance(a, b) - trace_distance(b, a)) < 1e-12
        assert trace_distance(a, c) <= trace_distance(a, b) + trace_distance(b, c) + 1e-10
        assert -1e-12 <= trace_distance(a, b) <= 1 + 1e-12


class TestSpectralNorm:
    def test_pauli_x(self):
        assert abs(spectral_norm(ComplexOperator((2,), X)) - 1) < 1e-14

    def test_scaling(self):
        zz = np.kron(Z, Z)
        assert abs(spectral_norm(ComplexOperator((2, 2), 3 * zz)) - 3) < 1e-13

    def test_matches_power_iteration(self, rng):
        from zenolab.hilbert import random_hermitian

        h = random_hermitian(8, rng)
        vec = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        for _ in range(3000):
            vec = h @ vec
            vec /= np.linalg.norm(vec)
        estimate = abs(vec.conj() @ h @ vec)
        assert abs(spectral_norm(h) - estimate) < 1e-10


class TestEvolveUnitary:
    def test_zero_time(self, rng):
        rho = dm(random_density(4, rng), dims=(2, 2))
        h = ComplexOperator((2, 2), np.kron(X, Z))
        out = evolve_unitary(rho, h, 0.0)
        assert np.max(np.abs(out.matrix - rho.matrix)) < 1e-14

    def test_z_rotation_closed_form(self):
        # 2x2 closed form: exp(-iZt)|+> ~ |0> + exp(2it)|1>, so t = pi/4 lands
        # on (I+Y)/2, t = pi/2 on (I-X)/2, and t = 3pi/4 on (I-Y)/2
        plus = dm(PLUS)
        h = ComplexOperator((2,), Z)
        for t, target in [
            (math.pi / 4, (I2 + Y) / 2),
            (math.pi / 2, (I2 - X) / 2),
            (3 * math.pi / 4, (I2 - Y) / 2),
        ]:
            out = evolve_unitary(plus, h, t)
            assert np.max(np.abs(out.matrix - target)) < 1e-14

    def test_spectrum_preserved(self, rng):
        from zenolab.hilbert import random_hermitian

        rho = dm(random_density(4, rng), dims=(4,))
        h = ComplexOperator((4,), random_hermitian(4, rng))
        out = evolve_unitary(rho, h, 0.37)
        assert np.max(np.abs(
            np.linalg.eigvalsh(out.matrix) - np.linalg.eigvalsh(rho.matrix)
        )) < 1e-12

    def test_composition(self, rng):
        from zenolab.hilbert import random_hermitian

        rho = dm(random_density(4, rng), dims=(4,))
        h = ComplexOperator((4,), random_hermitian(4, rng))
        once = evolve_unitary(rho, h, 0.9)
        twice = evolve_unitary(evolve_unitary(rho, h, 0.4), h, 0.5)
        assert np.max(np.abs(once.matrix - twice.matrix)) < 1e-10

    def test_rejects_non_hermitian(self, rng):
        rho = dm(random_density(2, rng))
        with pytest.raises(ValueError, match="Hermitian"):
            evolve_unitary(rho, ComplexOperator((2,), [[0, 1], [0, 0]]), 1.0)


class TestEncodeCodeword:
    def test_all_zero_string(self, code4):
        rho = encode_codeword(code4, "0000")
        vec_expect = np.zeros(16)
        vec_expect[0] = vec_expect[15] = 1 / math.sqrt(2)
        assert np.max(np.abs(rho.matrix - np.outer(vec_expect, vec_expect))) < 1e-14

    def test_stabilized_by_group(self, code4):
        rho = encode_codeword(code4, "0000")
        for s in code4.group:
            sm = pauli_to_matrix(s)
            assert np.max(np.abs(sm @ rho.matrix - rho.matrix)) < 1e-14

    def test_x_0011(self, code4):
        rho = encode_codeword(code4, "0011")
        idx, idx_bar = 0b0011, 0b1100
        assert abs(rho.matrix[idx, idx] - 0.5) < 1e-14
        assert abs(rho.matrix[idx, idx_bar] - 0.5) < 1e-14

    def test_odd_weight_rejected(self, code4):
        with pytest.raises(ValueError, match="odd weight"):
            encode_codeword(code4, "0001")

    def test_logical_label_eigenvalues(self, code4):
        from zenolab.pauli import logical_operator

        for label in ("00", "01", "10", "11"):
            rho = encode_codeword(code4, label)
            for j, bit in enumerate(label, start=1):
                zj = pauli_to_matrix(logical_operator(code4, "Z", j))
                expect = 1.0 if bit == "0" else -1.0
                val = np.trace(zj @ rho.matrix).real
                assert abs(val - expect) < 1e-12

    def test_smallest_code_bell_state(self):
        from zenolab.pauli import build_detection_code

        code2 = build_detection_code(2)
        rho = encode_codeword(code2, "")  # k = 0: empty logical label
        vec = np.zeros(4)
        vec[0] = vec[3] = 1 / math.sqrt(2)
        assert np.max(np.abs(rho.matrix - np.outer(vec, vec))) < 1e-14
        # stabilized by the signed group element -YY as well
        for s in code2.group:
            sm = pauli_to_matrix(s)
            assert np.max(np.abs(sm @ rho.matrix - rho.matrix)) < 1e-14


class TestSerialization:
    def test_roundtrip(self, rng):
        op = ComplexOperator((2, 2), random_density(4, rng), bath=True)
        back = ComplexOperator.from_json(op.to_json())
        assert back.dims == op.dims and back.bath == op.bath
        assert np.max(np.abs(back.matrix - op.matrix)) < 1e-15
