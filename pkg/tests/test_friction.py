import math

import numpy as np
import pytest

from src.errors import AccuracyError, DomainError
from src.physics.dissipation import PlateConfig
from src.physics.friction import (
    DiscSpec,
    FrictionLaw,
    LawKind,
    TabulatedLaw,
    coefficient_T0,
    coefficient_finiteT,
    frictional_power,
    law_for,
    regime_ok,
    torque_finiteT,
    torque_numeric,
    torque_T0,
)
from src.physics.response import DrudeMetal, ThermalState

UNIT_DISC = DiscSpec(radius=1.0, omega=1.0)
CUBIC = FrictionLaw(LawKind.T0_CUBIC, 1.0)
LINEAR = FrictionLaw(LawKind.FINITE_T_LINEAR, 1.0)


def test_closed_forms_at_unit_parameters(unit_metal, cold_plates, warm_plates):
    assert torque_T0(UNIT_DISC, 1.0) == pytest.approx(-math.pi / 3.0, rel=1e-12)
    assert torque_finiteT(UNIT_DISC, 1.0) == pytest.approx(-math.pi / 2.0, rel=1e-12)
    assert coefficient_T0(unit_metal, cold_plates, dissipation_constant=1.0) == pytest.approx(
        15.0 * math.pi ** 2 / 64.0, rel=1e-12)
    assert coefficient_finiteT(unit_metal, warm_plates, dissipation_constant=1.0) == pytest.approx(
        math.pi ** 4 / 4.0, rel=1e-12)


def test_coefficient_uses_metal_constant(unit_metal, cold_plates):
    d = unit_metal.dissipation_constant
    assert coefficient_T0(unit_metal, cold_plates) == pytest.approx(15.0 * math.pi ** 2 / 64.0 * d * d)


def test_linear_coefficient_needs_temperature(unit_metal, cold_plates):
    with pytest.raises(DomainError):
        coefficient_finiteT(unit_metal, cold_plates)


def test_regime_warning(unit_metal, warm_plates, capsys):
    assert regime_ok(warm_plates, 1e-3)
    assert not regime_ok(warm_plates, 0.5)
    coefficient_finiteT(unit_metal, warm_plates, velocities=[1e-3, 0.5])
    err = capsys.readouterr().err
    assert err.count("WARNING") == 1
    assert "outside its range" in err


def test_law_for(unit_metal, cold_plates, warm_plates):
    assert law_for(unit_metal, cold_plates).kind is LawKind.T0_CUBIC
    assert law_for(unit_metal, warm_plates).kind is LawKind.FINITE_T_LINEAR


def test_rho_d_invariance():
    config = PlateConfig(1.3, 2.0, 2.0, ThermalState(2.0))
    doubled = PlateConfig(1.3, 4.0, 4.0, ThermalState(2.0))
    metal = DrudeMetal(1.0, 1.0, 1.0)
    assert coefficient_T0(metal, doubled, 0.5) == pytest.approx(coefficient_T0(metal, config, 1.0))
    assert coefficient_finiteT(metal, doubled, 0.5) == pytest.approx(coefficient_finiteT(metal, config, 1.0))


def test_friction_law_force():
    assert CUBIC.force(2.0) == -8.0
    assert LINEAR.force(-2.0) == 2.0
    np.testing.assert_allclose(CUBIC.force(np.array([1.0, -1.0])), [-1.0, 1.0])
    with pytest.raises(DomainError):
        FrictionLaw(LawKind.T0_CUBIC, -1.0)


@pytest.mark.parametrize("law, expected", [(CUBIC, -math.pi / 3.0), (LINEAR, -math.pi / 2.0)])
def test_adaptive_torque(law, expected):
    estimate = torque_numeric(UNIT_DISC, law)
    assert estimate.value == pytest.approx(expected, rel=1e-9)
    assert estimate.n_annuli is None


def test_single_annulus_is_coarse():
    estimate = torque_numeric(UNIT_DISC, CUBIC, n_annuli=1)
    assert abs(estimate.value / (-math.pi / 3.0) - 1.0) == pytest.approx(0.8125)
    with pytest.raises(AccuracyError) as info:
        torque_numeric(UNIT_DISC, CUBIC, n_annuli=1, tolerance=1e-3)
    assert info.value.estimate == pytest.approx(estimate.value)


def test_annulus_refinement_converges():
    coarse = torque_numeric(UNIT_DISC, CUBIC, n_annuli=16)
    fine = torque_numeric(UNIT_DISC, CUBIC, n_annuli=64)
    exact = -math.pi / 3.0
    assert abs(fine.value - exact) < abs(coarse.value - exact)
    # Richardson estimate brackets the true error within a factor of two
    assert 0.5 < abs(fine.value - exact) / fine.error < 2.0
    with pytest.raises(DomainError):
        torque_numeric(UNIT_DISC, CUBIC, n_annuli=0)


def test_torque_exponents():
    for law, exponent in ((CUBIC, 3), (LINEAR, 1)):
        slow = torque_numeric(DiscSpec(1.0, 1.0), law).value
        fast = torque_numeric(DiscSpec(1.0, 2.0), law).value
        assert math.log(fast / slow) / math.log(2.0) == pytest.approx(exponent, abs=1e-9)
    wide = torque_numeric(DiscSpec(2.0, 1.0), CUBIC).value
    assert wide / torque_numeric(UNIT_DISC, CUBIC).value == pytest.approx(64.0, rel=1e-9)


def test_power_balance():
    disc = DiscSpec(radius=0.8, omega=1.7)
    for law in (FrictionLaw(LawKind.T0_CUBIC, 2.5), FrictionLaw(LawKind.FINITE_T_LINEAR, 0.4)):
        torque = torque_numeric(disc, law).value
        assert -torque * disc.omega == pytest.approx(frictional_power(disc, law), rel=1e-12)


def test_tabulated_law():
    v = np.linspace(0.0, 2.0, 11)
    law = TabulatedLaw(tuple(v), tuple(-v))
    assert law.force(-1.5) == pytest.approx(1.5)
    assert law.force(0.3) == pytest.approx(-0.3)
    with pytest.raises(DomainError):
        law.force(2.5)
    with pytest.raises(DomainError):
        TabulatedLaw((0.0, 0.0), (0.0, 1.0))
    # linear interpolation reproduces a linear law exactly
    estimate = torque_numeric(DiscSpec(1.0, 2.0), law)
    assert estimate.value == pytest.approx(torque_finiteT(DiscSpec(1.0, 2.0), 1.0), rel=1e-9)


def test_disc_validation():
    with pytest.raises(DomainError):
        DiscSpec(radius=0.0, omega=1.0)
    assert DiscSpec(2.0, -3.0).rim_speed == 6.0
