"""
Closed-form magneto-electric response of a charged pair in an isotropic
harmonic trap.

Two independent routes to the full response are kept: the sum of the
angular-momentum and quadrupole parts, and a direct transcription of the
combined final expression. Tests compare them.
"""
import logging

import numpy as np

from ..exceptions import PoleError
from ..schemas.schemas import HOModel, ResponseTensor
from .units_service import CONSTANTS, from_atomic, to_atomic

logger = logging.getLogger(__name__)

# |omega^2 - omega0^2| below this fraction of omega0^2 counts as on the pole
POLE_WINDOW = 1e-9


def _atomic_inputs(model: HOModel):
    """Trap frequency, fields and masses of the model in atomic units."""
    omega0 = to_atomic(model.omega0, "frequency")
    e_field = to_atomic(model.fields.e_vector, "efield")
    b_field = to_atomic(model.fields.b_vector, "bfield")
    charge = model.pair.e / CONSTANTS.e_charge
    m = model.pair.m / CONSTANTS.m_electron
    big_m = model.pair.M / CONSTANTS.m_electron
    m_delta = model.pair.m_delta / CONSTANTS.m_electron
    return omega0, e_field, b_field, charge, m, big_m, m_delta


def ho_prefactor(model: HOModel) -> float:
    """e^4 m_delta^2 / (omega0^2 m^3 M^2) in atomic units."""
    omega0, _, _, charge, m, big_m, m_delta = _atomic_inputs(model)
    return charge ** 4 * m_delta ** 2 / (omega0 ** 2 * m ** 3 * big_m ** 2)


def _check_pole(omega_au: float, omega0_au: float, omega_si: float, omega0_si: float):
    if abs(omega_au ** 2 - omega0_au ** 2) < POLE_WINDOW * omega0_au ** 2:
        raise PoleError(omega_si, omega0_si)


def _l_structure(e_field: np.ndarray, b_field: np.ndarray) -> np.ndarray:
    # E_i B_j - (E.B) delta_ij
    return np.outer(e_field, b_field) - np.dot(e_field, b_field) * np.eye(3)


def _quad_structure(e_field: np.ndarray, b_field: np.ndarray) -> np.ndarray:
    # 4 E_i B_j - E_j B_i - (E.B) delta_ij
    return (
        4.0 * np.outer(e_field, b_field)
        - np.outer(b_field, e_field)
        - np.dot(e_field, b_field) * np.eye(3)
    )


def _to_tensor(entries_au: np.ndarray, omega: float) -> ResponseTensor:
    return ResponseTensor(entries=from_atomic(entries_au, "response"), frequency=omega)


def ho_chi_L(model: HOModel, omega: float) -> ResponseTensor:
    """
    Angular-momentum part of the oscillator response.

    Args:
        model: trap, pair and static fields
        omega: probe frequency (rad/s)

    Returns:
        K (E_i B_j - (E.B) delta_ij) (omega^2 + omega0^2) / (omega0^2 - omega^2)^2
    """
    omega0, e_field, b_field, *_ = _atomic_inputs(model)
    w = to_atomic(omega, "frequency")
    _check_pole(w, omega0, omega, model.omega0)
    factor = ho_prefactor(model) * (w ** 2 + omega0 ** 2) / (omega0 ** 2 - w ** 2) ** 2
    return _to_tensor(factor * _l_structure(e_field, b_field), omega)


def ho_chi_quad(model: HOModel, omega: float) -> ResponseTensor:
    """Quadrupole part: -(K/4) (4 E_i B_j - E_j B_i - (E.B) delta_ij) / (omega0^2 - omega^2)."""
    omega0, e_field, b_field, *_ = _atomic_inputs(model)
    w = to_atomic(omega, "frequency")
    _check_pole(w, omega0, omega, model.omega0)
    factor = -ho_prefactor(model) / 4.0 / (omega0 ** 2 - w ** 2)
    return _to_tensor(factor * _quad_structure(e_field, b_field), omega)


def ho_chi_final(model: HOModel, omega: float) -> ResponseTensor:
    """Direct transcription of the combined final-form response."""
    omega0, e_field, b_field, *_ = _atomic_inputs(model)
    w = to_atomic(omega, "frequency")
    _check_pole(w, omega0, omega, model.omega0)
    dot = np.dot(e_field, b_field) * np.eye(3)
    eb = np.outer(e_field, b_field)
    be = np.outer(b_field, e_field)
    resonant = -(w ** 2 + omega0 ** 2) / (omega0 ** 2 - w ** 2) ** 2 * (eb - dot)
    single = 1.0 / (omega0 ** 2 - w ** 2) * (eb - 0.25 * be - 0.25 * dot)
    return _to_tensor(-ho_prefactor(model) * (resonant + single), omega)


def ho_chi_total(model: HOModel, omega: float) -> ResponseTensor:
    """Full oscillator response, angular-momentum plus quadrupole part."""
    return ho_chi_L(model, omega) + ho_chi_quad(model, omega)


def ho_resonance(model: HOModel) -> float:
    """Undamped resonance (rad/s); identical to the trap frequency."""
    return model.omega0


def ho_polarizability_volume(model: HOModel) -> float:
    """Static polarisability volume e^2 / (4 pi eps0 m omega0^2) in m^3."""
    return model.pair.e ** 2 / (
        4.0 * np.pi * CONSTANTS.eps0 * model.pair.m * model.omega0 ** 2
    )


def ho_high_frequency_limit(model: HOModel) -> np.ndarray:
    """lim omega^2 chi(omega) as omega -> infinity, SI units times (rad/s)^2."""
    _, e_field, b_field, *_ = _atomic_inputs(model)
    limit_au = ho_prefactor(model) * (
        _l_structure(e_field, b_field) + 0.25 * _quad_structure(e_field, b_field)
    )
    return from_atomic(limit_au, "response") * from_atomic(1.0, "frequency") ** 2


def ho_chi_total_grid(model: HOModel, omegas: np.ndarray) -> np.ndarray:
    """Full response on a grid, complex array (F, 3, 3) in SI."""
    logger.debug("evaluating oscillator response at %d frequencies", len(omegas))
    return np.stack([ho_chi_total(model, float(w)).entries for w in omegas])
