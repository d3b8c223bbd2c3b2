import numpy as np
import pytest

from atompair import (BathKind, CoefficientSet, DegenerateGeneratorError,
                      DomainError, InvalidStateError, Propagator, XState,
                      asymptotic_state, basis_transform, build_generator,
                      catalogue_state, evolve)
from atompair import kernels
from conftest import AXES, random_coeffs, random_xstate, rk4_evolve
from scipy.linalg import expm as scipy_expm

VACUUM = CoefficientSet(A1=0.25, B1=0.25, A2=0.0, B2=0.0)


def thermal_xy(a):
    # orthogonal dipoles: A2 = B2 = 0 with thermal occupation
    from atompair import SystemParams, assemble
    params = SystemParams(a_over_omega=a, omega_L=1.0, dipole1=AXES["x"],
                          dipole2=AXES["y"], bath=BathKind.THERMAL_AT_UNRUH)
    return assemble(params)


def test_xstate_catalogue():
    assert catalogue_state("G") == XState(1.0, 0.0, 0.0, 0.0)
    assert catalogue_state("A").pAA == 1.0
    assert catalogue_state("S").pSS == 1.0
    assert catalogue_state("E").pEE == 1.0
    psi1 = catalogue_state("psi1", 0.25)
    assert psi1.pAA == 0.25 and psi1.pSS == 0.75
    assert psi1.cAS == pytest.approx(np.sqrt(0.25 * 0.75))
    psi2 = catalogue_state("psi2", 0.8)
    assert psi2.pGG == 0.8 and psi2.pEE == pytest.approx(0.2)
    assert psi2.cGE == pytest.approx(np.sqrt(0.8 * 0.2))
    with pytest.raises(DomainError):
        catalogue_state("psi1")
    with pytest.raises(DomainError):
        catalogue_state("psi2", 1.0)
    with pytest.raises(DomainError):
        catalogue_state("A", 0.3)
    with pytest.raises(DomainError):
        catalogue_state("nope")


def test_xstate_validation():
    XState(0.25, 0.25, 0.25, 0.25).validate()
    with pytest.raises(InvalidStateError):
        XState(0.5, 0.5, 0.5, -0.5).validate()  # trace 1 but negative population
    with pytest.raises(InvalidStateError):
        XState(0.3, 0.3, 0.3, 0.3).validate()   # trace off
    with pytest.raises(InvalidStateError):
        XState(0.5, 0.0, 0.0, 0.5, cAS=0.3).validate()  # coherence outside block
    with pytest.raises(InvalidStateError):
        XState(0.5, 0.0, 0.0, 0.5, cGE=0.6).validate()


def test_generator_vacuum_structure():
    gen = build_generator(VACUUM).matrix
    # downward cascade at rate 2(A1+B1) = 1 per channel, no upward rates
    assert gen[1, 3] == pytest.approx(1.0)
    assert gen[2, 3] == pytest.approx(1.0)
    assert gen[0, 1] == pytest.approx(1.0)
    assert gen[0, 2] == pytest.approx(1.0)
    assert gen[1, 0] == gen[2, 0] == gen[3, 1] == gen[3, 2] == 0.0
    assert gen[3, 3] == pytest.approx(-2.0)


def test_generator_columns_sum_to_zero(rng):
    for _ in range(25):
        cs = random_coeffs(rng)
        sums = build_generator(cs).column_sums()
        assert np.abs(sums).max() == 0.0


def test_generator_off_diagonal_rates_nonnegative(rng):
    for _ in range(40):
        gen = build_generator(random_coeffs(rng)).matrix
        off = gen[~np.eye(4, dtype=bool)]
        assert off.min() >= -1e-15


def test_evolve_identity_at_zero():
    state = catalogue_state("psi1", 0.3)
    out = evolve(state, VACUUM, 0.0)
    assert out == state


def test_evolve_vacuum_closed_form():
    state = catalogue_state("A")
    for tau in (0.1, 0.7, 2.5):
        out = evolve(state, VACUUM, tau)
        assert out.pAA == pytest.approx(np.exp(-tau), abs=1e-12)
        assert out.pGG == pytest.approx(1.0 - np.exp(-tau), abs=1e-12)
        assert out.pSS == 0.0 and abs(out.pEE) < 1e-15


def test_evolve_rejects_negative_time():
    with pytest.raises(DomainError):
        evolve(catalogue_state("A"), VACUUM, -0.1)


def test_coherence_decay_rate(rng):
    cs = random_coeffs(rng)
    state = catalogue_state("psi2", 0.4)
    out = evolve(state, cs, 0.8)
    assert out.cGE == pytest.approx(state.cGE * np.exp(-4.0 * cs.A1 * 0.8), rel=1e-12)


def test_trace_preservation_and_positivity(rng):
    taus = np.linspace(0.0, 50.0, 21)
    for _ in range(30):
        cs = random_coeffs(rng)
        state = random_xstate(rng)
        prop = Propagator(cs)
        for tau in taus:
            out = prop.evolve(state, float(tau))
            assert abs(out.trace - 1.0) < 1e-10
            eigs = np.linalg.eigvalsh(basis_transform(out))
            assert eigs.min() >= -1e-9


def test_semigroup_property(rng):
    for _ in range(15):
        cs = random_coeffs(rng)
        state = random_xstate(rng)
        t1, t2 = rng.uniform(0.05, 3.0, size=2)
        one = evolve(evolve(state, cs, t1), cs, t2)
        two = evolve(state, cs, t1 + t2)
        for attr in ("pGG", "pAA", "pSS", "pEE", "cAS", "cGE"):
            assert abs(getattr(one, attr) - getattr(two, attr)) < 1e-10


def test_exact_propagator_matches_rk4(rng):
    for _ in range(3):
        cs = random_coeffs(rng)
        state = random_xstate(rng)
        exact = evolve(state, cs, 5.0)
        oracle = rk4_evolve(state, cs, 5.0, steps=50_000)
        for attr in ("pGG", "pAA", "pSS", "pEE", "cAS", "cGE"):
            assert abs(getattr(exact, attr) - getattr(oracle, attr)) < 1e-6


def test_long_time_matches_asymptotic(rng):
    cs = random_coeffs(rng, bath=BathKind.ACCELERATED_VACUUM)
    state = random_xstate(rng)
    late = evolve(state, cs, 1e3)
    asym = asymptotic_state(cs)
    for attr in ("pGG", "pAA", "pSS", "pEE"):
        assert abs(getattr(late, attr) - getattr(asym, attr)) < 1e-8
    assert abs(late.cAS) < 1e-8 and abs(late.cGE) < 1e-8


def test_asymptotic_equals_printed_closed_form(rng):
    for _ in range(25):
        cs = random_coeffs(rng)
        asym = asymptotic_state(cs)
        num = -(-cs.A1 ** 3 + cs.A1 * cs.A2 ** 2 + cs.A1 * cs.B1 ** 2 - cs.A1 * cs.B2 ** 2)
        den = 4.0 * (cs.A1 ** 3 - cs.A1 * cs.A2 ** 2 - cs.A2 * cs.B1 * cs.B2
                     + cs.A1 * cs.B2 ** 2)
        assert asym.pAA == pytest.approx(num / den, abs=1e-10)
        assert asym.pSS == pytest.approx(num / den, abs=1e-10)
        assert asym.cAS == 0.0 and asym.cGE == 0.0


def test_asymptotic_gibbs_product_state():
    for a in (0.5, 1.0, 2.0):
        asym = asymptotic_state(thermal_xy(a))
        x = np.pi / a
        gibbs_paa = 1.0 / (4.0 * np.cosh(x) ** 2)
        assert asym.pAA == pytest.approx(gibbs_paa, abs=1e-12)
        assert asym.pSS == pytest.approx(gibbs_paa, abs=1e-12)
        pe = np.exp(-x) / (2.0 * np.cosh(x))
        assert asym.pEE == pytest.approx(pe * pe, abs=1e-12)


def test_asymptotic_zero_acceleration_is_ground():
    asym = asymptotic_state(thermal_xy(1e-6))
    assert asym.pGG == pytest.approx(1.0, abs=1e-12)


def test_asymptotic_degenerate_generator():
    cs = CoefficientSet(A1=0.5, B1=0.25, A2=0.5, B2=0.25)  # A2 = A1 exactly
    with pytest.raises(DegenerateGeneratorError):
        asymptotic_state(cs)


def test_basis_transform_catalogue():
    rho_a = basis_transform(catalogue_state("A"))
    assert rho_a[1, 1] == pytest.approx(0.5)
    assert rho_a[2, 2] == pytest.approx(0.5)
    assert rho_a[1, 2] == pytest.approx(-0.5)
    assert rho_a[2, 1] == pytest.approx(-0.5)
    rho_g = basis_transform(catalogue_state("G"))
    assert np.allclose(rho_g, np.diag([1.0, 0.0, 0.0, 0.0]))
    corner = basis_transform(XState(0.5, 0.0, 0.0, 0.5, cGE=0.5))
    assert corner[0, 3] == 0.5 and corner[3, 0] == 0.5


def test_basis_transform_preserves_x_structure(rng):
    mask = np.zeros((4, 4), dtype=bool)
    mask[0, 1] = mask[0, 2] = mask[1, 0] = mask[2, 0] = True
    mask[1, 3] = mask[2, 3] = mask[3, 1] = mask[3, 2] = True
    for _ in range(20):
        state = evolve(random_xstate(rng), random_coeffs(rng), rng.uniform(0.0, 5.0))
        rho = basis_transform(state)
        assert np.abs(rho[mask]).max() < 1e-14
        assert np.trace(rho).real == pytest.approx(1.0, abs=1e-10)
        assert np.abs(rho - rho.conj().T).max() == 0.0


def test_expm_fallback_matches_scipy(rng):
    for _ in range(10):
        M = build_generator(random_coeffs(rng)).matrix
        tau = rng.uniform(0.0, 5.0)
        assert np.allclose(kernels.expm_kernel(M * tau), scipy_expm(M * tau),
                           atol=1e-13)


def test_expm_path_matches_eigendecomposition(rng):
    cs = random_coeffs(rng)
    M = build_generator(cs).matrix
    w, V, Vinv, _ = kernels.eig_decompose(M)
    p0 = random_xstate(rng).populations()
    c = Vinv @ p0.astype(np.complex128)
    for tau in (0.3, 2.0, 11.0):
        via_eig = kernels.pops_at(w, V, c, M, False, p0, tau)
        via_expm = kernels.pops_at(w, V, c, M, True, p0, tau)
        assert np.abs(via_eig - via_expm).max() < 1e-12


def test_propagator_cache_reuses_instances():
    from atompair import propagator_for
    cs = CoefficientSet(A1=0.3, B1=0.25, A2=0.1, B2=0.05)
    assert propagator_for(cs) is propagator_for(CoefficientSet(A1=0.3, B1=0.25,
                                                               A2=0.1, B2=0.05))
