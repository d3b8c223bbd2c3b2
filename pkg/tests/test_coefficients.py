import numpy as np
import pytest

from atompair import (BathKind, CoefficientSet, DipoleOrientation, DomainError,
                      SystemParams, assemble, coth_stable, f11)
from conftest import AXES, random_params


def make_params(a, L, d1="z", d2="z", bath=BathKind.ACCELERATED_VACUUM):
    return SystemParams(a_over_omega=a, omega_L=L,
                        dipole1=AXES[d1], dipole2=AXES[d2], bath=bath)


def test_coth_stable_values():
    assert coth_stable(20.0) == pytest.approx(1.0 + 2.0 * np.exp(-40.0), rel=1e-15)
    assert coth_stable(1.0) == pytest.approx(1.3130352854993313, abs=1e-12)
    assert coth_stable(1e-8) == pytest.approx(1e8, rel=1e-9)


def test_coth_stable_domain():
    for bad in (0.0, -1.0, float("nan")):
        with pytest.raises(DomainError):
            coth_stable(bad)


def test_dipole_validation():
    with pytest.raises(DomainError):
        DipoleOrientation((1.0, 1.0, 0.0))
    d = DipoleOrientation.normalized([1.0, 1.0, 0.0])
    assert np.isclose(np.dot(d.as_array(), d.as_array()), 1.0, atol=1e-15)
    with pytest.raises(DomainError):
        DipoleOrientation.normalized([0.0, 0.0, 0.0])
    with pytest.raises(DomainError):
        DipoleOrientation.from_axis("w")


def test_system_params_validation():
    with pytest.raises(DomainError):
        make_params(-0.1, 1.0)
    with pytest.raises(DomainError):
        make_params(1.0, 0.0)
    with pytest.raises(DomainError):
        SystemParams(a_over_omega=1.0, omega_L=1.0, dipole1=AXES["z"],
                     dipole2=AXES["z"], bath=BathKind.ACCELERATED_VACUUM,
                     gamma0_over_omega=0.0)


def test_coefficient_set_ordering():
    with pytest.raises(DomainError):
        CoefficientSet(A1=0.2, B1=0.25, A2=0.0, B2=0.0)
    with pytest.raises(DomainError):
        CoefficientSet(A1=0.25, B1=0.0, A2=0.0, B2=0.0)


def test_limit_small_acceleration_large_separation():
    cs = assemble(make_params(1e-8, 1e4))
    assert cs.A1 == pytest.approx(0.25, abs=1e-3)
    assert cs.B1 == pytest.approx(0.25, abs=1e-3)
    assert abs(cs.A2) < 1e-4
    assert abs(cs.B2) < 1e-4


def test_orthogonal_dipoles_kill_cross_terms():
    for bath in BathKind:
        cs = assemble(make_params(1.3, 0.8, "x", "y", bath))
        assert cs.A2 == 0.0
        assert cs.B2 == 0.0


def test_crossed_dipole_order_flips_sign():
    zx = assemble(make_params(1.0, 1.0, "z", "x"))
    xz = assemble(make_params(1.0, 1.0, "x", "z"))
    assert zx.A2 == pytest.approx(-xz.A2, rel=1e-14)
    assert zx.B2 == pytest.approx(-xz.B2, rel=1e-14)
    assert zx.A2 != 0.0


def test_thermal_ratio_is_f11():
    for a in (0.3, 1.0, 2.5):
        acc = assemble(make_params(a, 1.2))
        th = assemble(make_params(a, 1.2, bath=BathKind.THERMAL_AT_UNRUH))
        assert th.A1 == pytest.approx(acc.A1 / f11(1.0, a), rel=1e-13)
        assert th.B1 == pytest.approx(acc.B1 / f11(1.0, a), rel=1e-13)


def test_modes_converge_at_small_acceleration():
    # dipole pairs touching only the diagonal shapes converge at O(a^2);
    # the crossed pair picks up the O(a) skew component, so its gap closes
    # linearly (~ a L / 4) instead
    for L in (0.4, 1.0, 3.0):
        for d1, d2 in (("z", "z"), ("y", "y"), ("x", "x")):
            acc = assemble(make_params(1e-4, L, d1, d2))
            th = assemble(make_params(1e-4, L, d1, d2, BathKind.THERMAL_AT_UNRUH))
            diff = max(abs(acc.A1 - th.A1), abs(acc.B1 - th.B1),
                       abs(acc.A2 - th.A2), abs(acc.B2 - th.B2))
            assert diff < 1e-6
        acc = assemble(make_params(1e-4, L, "z", "x"))
        th = assemble(make_params(1e-4, L, "z", "x", BathKind.THERMAL_AT_UNRUH))
        assert abs(acc.A2 - th.A2) < 1e-4 * L
        assert abs(acc.A1 - th.A1) < 1e-6


def test_zero_acceleration():
    cs = assemble(make_params(0.0, 1.0))
    assert cs.A1 == cs.B1 == 0.25
    th = assemble(make_params(0.0, 1.0, bath=BathKind.THERMAL_AT_UNRUH))
    assert th.A1 == th.B1 == 0.25
    assert cs.A2 == pytest.approx(th.A2, abs=1e-15)


def test_relabeling_symmetry(rng):
    # dipole1 <-> dipole2 together with atom order 12 <-> 21 changes nothing
    # (up to the reordered multiplication chain's roundoff)
    for _ in range(20):
        params = random_params(rng)
        swapped = SystemParams(
            a_over_omega=params.a_over_omega, omega_L=params.omega_L,
            dipole1=params.dipole2, dipole2=params.dipole1, bath=params.bath)
        cs = assemble(params, 12)
        sw = assemble(swapped, 21)
        assert cs.A1 == sw.A1 and cs.B1 == sw.B1
        assert cs.A2 == pytest.approx(sw.A2, rel=1e-13, abs=1e-15)
        assert cs.B2 == pytest.approx(sw.B2, rel=1e-13, abs=1e-15)


def test_positivity_bound_over_sweep():
    # |A2| <= A1 and |B2| <= B1 over the swept box (empirical invariant)
    for bath in BathKind:
        for a in np.linspace(0.0, 3.0, 13):
            for L in np.linspace(0.05, 5.0, 21):
                for d1, d2 in (("z", "z"), ("y", "y"), ("x", "x"), ("z", "x")):
                    cs = assemble(make_params(float(a), float(L), d1, d2, bath))
                    assert abs(cs.A2) <= cs.A1 + 1e-15
                    assert abs(cs.B2) <= cs.B1 + 1e-15


def test_invalid_atom_order():
    with pytest.raises(DomainError):
        assemble(make_params(1.0, 1.0), atom_order=21.5)
