"""
Physical constants, SI <-> atomic-unit conversion and two-body kinematics.

Internally everything runs in Hartree atomic units (hbar = e = m_e = 4 pi eps0 = 1);
SI values only enter and leave through ``to_atomic`` / ``from_atomic``.
"""
import math

from ..exceptions import DomainError
from ..schemas.schemas import Constants, ParticlePair, ResponseCouplings

# CODATA 2018
CONSTANTS = Constants(
    hbar=1.054571817646e-34,
    e_charge=1.602176634e-19,
    eps0=8.8541878128e-12,
    c_light=299792458.0,
    m_electron=9.1093837015e-31,
    bohr_radius=5.29177210903e-11,
    hartree=4.3597447222071e-18,
)

PROTON_ELECTRON_MASS_RATIO = 1836.15267343
ELECTRON_VOLT = 1.602176634e-19


def _unit_table(constants: Constants) -> dict:
    hbar = constants.hbar
    e = constants.e_charge
    a0 = constants.bohr_radius
    eh = constants.hartree
    return {
        "length": a0,
        "energy": eh,
        "frequency": eh / hbar,
        "time": hbar / eh,
        "efield": eh / (e * a0),
        "bfield": hbar / (e * a0 ** 2),
        "mass": constants.m_electron,
        "dipole": e * a0,
        "volume": a0 ** 3,
        # induced dipole per unit magnetic field
        "response": e ** 2 * a0 ** 3 / hbar,
    }


ATOMIC_UNITS = _unit_table(CONSTANTS)


def atomic_unit(kind: str) -> float:
    """SI size of one atomic unit of ``kind``."""
    try:
        return ATOMIC_UNITS[kind]
    except KeyError:
        raise DomainError(
            f"unknown quantity kind {kind!r}; expected one of {sorted(ATOMIC_UNITS)}"
        ) from None


def to_atomic(value, kind: str):
    """Convert an SI value (scalar or array) to atomic units."""
    return value / atomic_unit(kind)


def from_atomic(value, kind: str):
    """Convert an atomic-unit value (scalar or array) to SI."""
    return value * atomic_unit(kind)


def bohr_radius_from_constants(constants: Constants = CONSTANTS) -> float:
    """a0 = 4 pi eps0 hbar^2 / (m_e e^2)."""
    return (
        4.0 * math.pi * constants.eps0 * constants.hbar ** 2
        / (constants.m_electron * constants.e_charge ** 2)
    )


def hartree_from_constants(constants: Constants = CONSTANTS) -> float:
    """E_h = m_e e^4 / ((4 pi eps0)^2 hbar^2)."""
    return (
        constants.m_electron * constants.e_charge ** 4
        / ((4.0 * math.pi * constants.eps0) ** 2 * constants.hbar ** 2)
    )


def derive_pair(m1: float, m2: float, e: float) -> ParticlePair:
    """
    Build a ParticlePair and its derived masses.

    Args:
        m1: mass of particle 1 (kg)
        m2: mass of particle 2 (kg)
        e: magnitude of each charge (C)

    Returns:
        ParticlePair with M = m1 + m2, m = m1 m2 / M and m_delta = m2 - m1
    """
    if not (m1 > 0 and m2 > 0 and e > 0):
        raise DomainError(f"masses and charge must be positive, got m1={m1}, m2={m2}, e={e}")
    total = m1 + m2
    return ParticlePair(
        m1=m1, m2=m2, e=e, M=total, m=m1 * m2 / total, m_delta=m2 - m1
    )


def electron_proton_pair() -> ParticlePair:
    me = CONSTANTS.m_electron
    return derive_pair(me, PROTON_ELECTRON_MASS_RATIO * me, CONSTANTS.e_charge)


def equal_mass_pair(mass: float = CONSTANTS.m_electron) -> ParticlePair:
    return derive_pair(mass, mass, CONSTANTS.e_charge)


def response_couplings(
    pair: ParticlePair,
    mass_ratio_limit: bool = False,
    ket_weight: float = 1.0,
    bra_weight: float = 1.0,
) -> ResponseCouplings:
    """
    Coupling constants of the two response channels, atomic units.

    k_L = e^4 (m_delta/M)^2 / m^2 multiplies the angular-momentum double sum,
    k_Q = -e^4 (m_delta/M)^2 / (4 m) the quadrupole sum. With
    ``mass_ratio_limit`` the ratio m_delta/M is replaced by 1.

    k_Q carries a single 1/m where k_L has 1/m^2, it is not e^4/(4 m^2): the
    A^2 coupling brings one reduced mass fewer than the A.p coupling, and only
    then are both sums in the same units. The oscillator quadrupole closed form, prefactor
    -e^4 m_delta^2 / (4 omega0^2 m^3 M^2), fixes its sign and the factor 1/4.
    """
    e = pair.e / CONSTANTS.e_charge
    m = pair.m / CONSTANTS.m_electron
    ratio = 1.0 if mass_ratio_limit else pair.m_delta / pair.M
    return ResponseCouplings(
        k_l=e ** 4 * ratio ** 2 / m ** 2,
        k_q=-(e ** 4) * ratio ** 2 / (4.0 * m),
        ket_weight=ket_weight,
        bra_weight=bra_weight,
    )
