import math

import pytest
from pydantic import ValidationError

from app.exceptions import DomainError
from app.schemas.schemas import ParticlePair
from app.services.units_service import (
    ATOMIC_UNITS,
    CONSTANTS,
    ELECTRON_VOLT,
    PROTON_ELECTRON_MASS_RATIO,
    atomic_unit,
    bohr_radius_from_constants,
    derive_pair,
    electron_proton_pair,
    equal_mass_pair,
    from_atomic,
    hartree_from_constants,
    response_couplings,
    to_atomic,
)


def test_equal_masses_have_no_asymmetry():
    pair = equal_mass_pair()
    assert pair.m_delta == 0.0
    assert pair.m == pytest.approx(CONSTANTS.m_electron / 2, rel=1e-15)


def test_electron_proton_pair():
    pair = electron_proton_pair()
    ratio = PROTON_ELECTRON_MASS_RATIO
    assert pair.m == pytest.approx(CONSTANTS.m_electron * ratio / (ratio + 1), rel=1e-12)
    assert pair.m_delta / pair.M == pytest.approx(0.99891, abs=1e-5)


def test_heavy_partner_limit():
    me = CONSTANTS.m_electron
    pair = derive_pair(me, 1e12 * me, CONSTANTS.e_charge)
    assert pair.m / me == pytest.approx(1.0, rel=1e-11)
    assert pair.m_delta / pair.M == pytest.approx(1.0, rel=1e-11)


def test_pair_identities_hold_exactly():
    pair = derive_pair(1.3e-30, 7.7e-27, 2.0e-19)
    assert pair.M == pair.m1 + pair.m2
    assert pair.m == pair.m1 * pair.m2 / pair.M
    assert pair.m_delta == pair.m2 - pair.m1


@pytest.mark.parametrize("m1, m2, e", [(0.0, 1.0, 1.0), (1.0, -1.0, 1.0), (1.0, 1.0, 0.0)])
def test_non_positive_inputs_rejected(m1, m2, e):
    with pytest.raises(DomainError):
        derive_pair(m1, m2, e)


def test_inconsistent_pair_rejected():
    with pytest.raises(ValidationError):
        ParticlePair(m1=1.0, m2=2.0, e=1.0, M=4.0, m=2.0 / 3.0, m_delta=1.0)


def test_atomic_length_and_energy():
    assert to_atomic(CONSTANTS.bohr_radius, "length") == pytest.approx(1.0, rel=1e-15)
    assert to_atomic(-13.605693 * ELECTRON_VOLT, "energy") == pytest.approx(-0.5, rel=1e-7)


def test_atomic_magnetic_field():
    assert to_atomic(10.0, "bfield") == pytest.approx(4.2544e-5, rel=1e-3)


@pytest.mark.parametrize("kind", sorted(ATOMIC_UNITS))
def test_round_trip(kind):
    for value in (1.0e-30, 3.7, -2.5e12):
        assert from_atomic(to_atomic(value, kind), kind) == pytest.approx(value, rel=1e-12)


def test_unknown_kind():
    with pytest.raises(DomainError):
        to_atomic(1.0, "temperature")


def test_constants_are_cross_consistent():
    assert bohr_radius_from_constants() == pytest.approx(CONSTANTS.bohr_radius, rel=1e-9)
    assert hartree_from_constants() == pytest.approx(CONSTANTS.hartree, rel=1e-9)


def test_response_unit():
    expected = CONSTANTS.e_charge ** 2 * CONSTANTS.bohr_radius ** 3 / CONSTANTS.hbar
    assert atomic_unit("response") == pytest.approx(expected, rel=1e-15)


def test_couplings():
    pair = electron_proton_pair()
    m = pair.m / CONSTANTS.m_electron
    limit = response_couplings(pair, mass_ratio_limit=True)
    assert limit.k_l == pytest.approx(1.0 / m ** 2, rel=1e-14)
    assert limit.k_q == pytest.approx(-1.0 / (4.0 * m), rel=1e-14)

    exact = response_couplings(pair)
    ratio = pair.m_delta / pair.M
    assert exact.k_l == pytest.approx(ratio ** 2 / m ** 2, rel=1e-14)
    assert math.copysign(1.0, exact.k_q) == -1.0


def test_couplings_vanish_for_equal_masses():
    couplings = response_couplings(equal_mass_pair())
    assert couplings.k_l == 0.0
    assert couplings.k_q == 0.0
