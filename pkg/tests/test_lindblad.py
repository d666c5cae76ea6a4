import numpy as np
import pytest
import scipy.linalg as la

from hnlsqec import operators as ops
from hnlsqec.code import build_example_code
from hnlsqec.errors import DimensionCapError, NumericalError
from hnlsqec.lindblad import (LindbladModel, apply_product_channel, apply_superop, channel,
                              check_density, evolve_exact, kraus_first_order, lift_model,
                              liouvillian, unvec, vec)
from hnlsqec.protocol import ghz_input

from conftest import SX, SZ, random_density, random_hermitian, random_matrix


def direct_generator(model, omega, rho):
    out = -1j * omega * (model.H @ rho - rho @ model.H)
    for L in model.lindblads:
        Ld = L.conj().T
        out += L @ rho @ Ld - 0.5 * (Ld @ L @ rho + rho @ Ld @ L)
    return out


def test_liouvillian_commutator_only():
    model = LindbladModel(SZ)
    rho = np.array([[0, 1], [0, 0]], dtype=complex)
    out = unvec(liouvillian(model, 1.0) @ vec(rho), 2)
    np.testing.assert_allclose(out, -2j * rho)


def test_liouvillian_identity_fixed_point():
    model = LindbladModel(np.zeros((2, 2)), (SZ,))
    out = liouvillian(model, 0.0) @ vec(np.eye(2) / 2)
    np.testing.assert_allclose(out, 0, atol=1e-15)


def test_liouvillian_matches_direct_formula(rng):
    for d in (2, 3):
        model = LindbladModel(random_hermitian(rng, d),
                              tuple(random_matrix(rng, d) for _ in range(2)))
        rho = random_density(rng, d)
        got = unvec(liouvillian(model, 0.7) @ vec(rho), d)
        np.testing.assert_allclose(got, direct_generator(model, 0.7, rho), atol=1e-12)
        # trace functional is a left null vector
        np.testing.assert_allclose(vec(np.eye(d)) @ liouvillian(model, 0.7), 0, atol=1e-12)


def test_evolve_exact_zero_time(rng, three_level):
    rho = random_density(rng, 3)
    np.testing.assert_allclose(evolve_exact(three_level, 1.0, rho, 0.0), rho, atol=1e-14)


def test_evolve_exact_unitary_oracle(rng):
    H = random_hermitian(rng, 3)
    model = LindbladModel(H)
    rho = random_density(rng, 3)
    w, vecs = ops.eig_hermitian(H)
    t, omega = 0.8, 1.3
    U = sum(np.exp(-1j * omega * t * l) * np.outer(v, v.conj()) for l, v in zip(w, vecs))
    expected = U @ rho @ U.conj().T
    assert ops.trace_distance(evolve_exact(model, omega, rho, t), expected) <= 1e-10


@pytest.mark.parametrize("t", [0.1, 0.5, 2.0])
def test_dephasing_closed_form(t):
    gamma = 0.7
    model = LindbladModel(np.zeros((2, 2)), (np.sqrt(gamma) * SZ,))
    plus = np.full((2, 2), 0.5, dtype=complex)
    out = evolve_exact(model, 0.0, plus, t)
    assert out[0, 1] == pytest.approx(0.5 * np.exp(-2 * gamma * t), abs=1e-12)
    assert out[0, 0] == pytest.approx(0.5, abs=1e-12)


def test_evolve_exact_semigroup_and_physicality(rng, three_level):
    rho = random_density(rng, 3)
    once = evolve_exact(three_level, 1.0, rho, 0.7)
    twice = evolve_exact(three_level, 1.0, evolve_exact(three_level, 1.0, rho, 0.3), 0.4)
    assert ops.trace_distance(once, twice) <= 1e-9
    assert abs(np.trace(once) - 1) <= 1e-10
    np.testing.assert_allclose(once, once.conj().T, atol=1e-10)


def test_evolve_exact_errors(three_level):
    with pytest.raises(ValueError):
        evolve_exact(three_level, 1.0, np.eye(2) / 2, 1.0)
    with pytest.raises(ValueError):
        evolve_exact(three_level, 1.0, np.eye(3) / 3, -1.0)


def test_check_density_rejects_negative():
    with pytest.raises(NumericalError):
        check_density(np.diag([1.1, -0.1]))


def test_kraus_noiseless_single_probe():
    ks = kraus_first_order(LindbladModel(SX), 2.0, 1, 0.01)
    np.testing.assert_allclose(ks.K0, np.eye(2) - 2j * SX * 0.01)
    assert ks.Kerr == {}


def test_kraus_completeness_defect_quadratic(three_level):
    dts = [1e-2, 1e-3, 1e-4]
    C = [kraus_first_order(three_level, 1.0, 1, dt).completeness_defect() / dt ** 2 for dt in dts]
    assert all(np.isfinite(C)) and max(C) < 100
    # defect is exactly quadratic: K0^dag K0 - 1 + sum K^dag K = (i w H + G/2)^dag(...) dt^2
    np.testing.assert_allclose(C, C[0], rtol=1e-6)


def test_kraus_lifted_operators(three_level):
    ks = kraus_first_order(three_level, 1.0, 2, 0.01)
    assert sorted(ks.Kerr) == [(n, k) for n in (1, 2) for k in (1, 2, 3)]
    np.testing.assert_allclose(ks.Kerr[(2, 3)], ops.lift(three_level.lindblads[2], 2, 2) * 0.1)
    with pytest.raises(DimensionCapError):
        kraus_first_order(three_level, 1.0, 8, 0.01)
    with pytest.raises(ValueError):
        kraus_first_order(three_level, 1.0, 1, 0.0)


def test_kraus_vs_exact_channel_quadratic(rng, three_level):
    rhos = [random_density(rng, 3) for _ in range(4)]
    errs = []
    for dt in (1e-2, 5e-3, 2.5e-3):
        ks = kraus_first_order(three_level, 1.0, 1, dt)
        errs.append(max(ops.trace_distance(ks.apply(r), evolve_exact(three_level, 1.0, r, dt))
                        for r in rhos))
    for a, b in zip(errs, errs[1:]):
        assert b <= 0.3 * a


def test_product_channel_identity(rng):
    rho = random_density(rng, 8)
    np.testing.assert_allclose(apply_product_channel(np.eye(4), rho, 3), rho, atol=1e-15)


def test_product_channel_on_product_state(rng, three_level):
    S = channel(three_level, 1.0, 0.3)
    r1, r2 = random_density(rng, 3), random_density(rng, 3)
    out = apply_product_channel(S, np.kron(r1, r2), 2)
    expected = np.kron(apply_superop(S, r1), apply_superop(S, r2))
    assert ops.trace_distance(out, expected) <= 1e-10


def test_product_channel_matches_dense_superoperator(three_level, rng):
    dt = 0.05
    code = build_example_code(3)
    psi = ghz_input(code)
    rho = np.outer(psi, psi.conj())
    dense = la.expm(dt * liouvillian(lift_model(three_level, 3), 1.0))
    expected = unvec(dense @ vec(rho), 27)
    out = apply_product_channel(channel(three_level, 1.0, dt), rho, 3)
    np.testing.assert_allclose(out, expected, atol=1e-9)
    # asymmetric random state catches axis-ordering mistakes
    rho = random_density(rng, 27)
    np.testing.assert_allclose(apply_product_channel(channel(three_level, 1.0, dt), rho, 3),
                               unvec(dense @ vec(rho), 27), atol=1e-9)


def test_product_channel_nonidentical_factor_order(rng):
    # a non-unital channel distinguishes rows from columns and factor order
    model = LindbladModel(random_hermitian(rng, 2), (random_matrix(rng, 2),))
    S = channel(model, 0.9, 0.4)
    rho = random_density(rng, 4)
    full = la.expm(0.4 * liouvillian(lift_model(model, 2), 0.9))
    np.testing.assert_allclose(apply_product_channel(S, rho, 2), unvec(full @ vec(rho), 4),
                               atol=1e-10)


def test_product_channel_dimension_errors(rng):
    with pytest.raises(ValueError):
        apply_product_channel(np.eye(4), random_density(rng, 4), 3)
    with pytest.raises(ValueError):
        apply_product_channel(np.eye(5), random_density(rng, 4), 2)


def test_model_validation_and_json(three_level):
    with pytest.raises(ValueError):
        LindbladModel(np.array([[0, 1], [0, 0]]))
    with pytest.raises(ValueError):
        LindbladModel(SZ, (np.eye(3),))
    back = LindbladModel.from_json(three_level.to_json())
    np.testing.assert_array_equal(back.H, three_level.H)
    assert back.R == 3 and back.label == "paper-3level"
    with pytest.raises(ValueError):
        LindbladModel.from_json({"H": three_level.to_json()["H"]})
