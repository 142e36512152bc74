"""
Frequency sweeps over either model, plus the order-of-magnitude estimates.
"""
import logging
import math
from typing import Callable, Tuple

import numpy as np
from joblib import Parallel, delayed

from .. import config
from ..exceptions import DomainError
from ..schemas.schemas import HOModel, HydrogenModel, ParticlePair, StaticFieldConfig, SweepConfig, SweepResult
from .ho_service import ho_chi_total_grid, ho_polarizability_volume
from .hydrogen_service import HydrogenResponse
from .tensor_service import hydrogen_volume
from .units_service import CONSTANTS, derive_pair, electron_proton_pair

logger = logging.getLogger(__name__)


def frequency_grid(omega_min: float, omega_max: float, points: int, spacing: str = "log") -> np.ndarray:
    """Strictly increasing grid in rad/s."""
    if points < 2 or not omega_min < omega_max:
        raise DomainError("a grid needs points >= 2 and omega_min < omega_max")
    if spacing == "log":
        if omega_min <= 0:
            raise DomainError("log spacing needs omega_min > 0")
        return np.logspace(math.log10(omega_min), math.log10(omega_max), points)
    if spacing == "linear":
        return np.linspace(omega_min, omega_max, points)
    raise DomainError(f"unknown spacing {spacing!r}")


def figure_grid(
    omega_min: float,
    omega_max: float,
    resonances,
    background_per_decade: int = 40,
    resonance_per_decade: int = 400,
    half_width_decades: float = 0.05,
) -> np.ndarray:
    """
    Log grid with a dense stretch around every resonance.

    Background points are spaced at ``background_per_decade``; inside
    +-half_width_decades of a resonance the density rises to
    ``resonance_per_decade``.
    """
    low, high = math.log10(omega_min), math.log10(omega_max)
    pieces = [np.logspace(low, high, max(2, int(round((high - low) * background_per_decade)) + 1))]
    for resonance in resonances:
        centre = math.log10(resonance)
        start, stop = max(low, centre - half_width_decades), min(high, centre + half_width_decades)
        if start < stop:
            count = int(round((stop - start) * resonance_per_decade)) + 1
            pieces.append(np.logspace(start, stop, count))
    return np.unique(np.concatenate(pieces))


def zoom_grid(resonance: float, gamma: float, half_width: float = 20.0, points: int = 401) -> np.ndarray:
    """Linear grid of +-half_width line widths around one resonance (rad/s)."""
    if gamma <= 0:
        raise DomainError("a zoom grid needs a positive line width")
    return resonance + gamma * np.linspace(-half_width, half_width, points)


def _pair(sweep: SweepConfig) -> ParticlePair:
    if sweep.m1 is None and sweep.m2 is None:
        return electron_proton_pair()
    me = CONSTANTS.m_electron
    return derive_pair(sweep.m1 or me, sweep.m2 or me, CONSTANTS.e_charge)


def build_model(sweep: SweepConfig):
    """The HOModel or HydrogenModel a sweep configuration describes."""
    pair = _pair(sweep)
    if sweep.model == "ho":
        return HOModel(pair=pair, omega0=sweep.omega0, fields=sweep.fields)
    return HydrogenModel(pair=pair, fields=sweep.fields, gamma=sweep.gamma, n_max=sweep.n_max)


def build_evaluator(sweep: SweepConfig) -> Tuple[Callable[[np.ndarray], np.ndarray], float]:
    """
    Vectorised evaluator (rad/s grid -> SI tensors) and the reference volume
    for the dimensionless column.
    """
    model = build_model(sweep)
    if sweep.model == "ho":
        volume = ho_polarizability_volume(model) * sweep.volume_scale

        def evaluate(omegas):
            return ho_chi_total_grid(model, omegas)

        return evaluate, volume
    response = HydrogenResponse(model)
    return response.evaluate, hydrogen_volume()


def run_sweep(sweep: SweepConfig, chunk_size: int = None) -> SweepResult:
    """
    Evaluate the full response on the configured grid.

    Frequencies are split into fixed chunks and handed to a thread pool;
    results are gathered and ordered by frequency.
    """
    omegas = frequency_grid(sweep.omega_min, sweep.omega_max, sweep.points, sweep.spacing)
    evaluate, volume = build_evaluator(sweep)
    chunk_size = chunk_size or config.CHUNK_SIZE
    chunks = [omegas[k:k + chunk_size] for k in range(0, len(omegas), chunk_size)]
    logger.info(
        "sweeping %s over %d frequencies in %d chunks (%d workers)",
        sweep.model, len(omegas), len(chunks), sweep.workers,
    )
    blocks = Parallel(n_jobs=sweep.workers, prefer="threads")(
        delayed(evaluate)(chunk) for chunk in chunks
    )
    tensors = np.concatenate(blocks, axis=0)
    order = np.argsort(omegas, kind="stable")
    tensors = tensors[order]
    chi12 = tensors[:, 0, 1] / (CONSTANTS.eps0 * CONSTANTS.c_light * volume)
    return SweepResult(omega=omegas[order], tensors=tensors, chi12_dimless=chi12, axis=sweep.axis)


def polarizability_scale(omega0: float, pair: ParticlePair) -> float:
    """e^2 / (eps0 m omega0^2) in m^3."""
    return pair.e ** 2 / (CONSTANTS.eps0 * pair.m * omega0 ** 2)


def estimate_beta(fields: StaticFieldConfig, omega0: float, pair: ParticlePair) -> float:
    """
    Dimensionless field factor e^2 |B0| |E0| / (c m^2 omega0^2).

    Args:
        fields: static fields (SI)
        omega0: characteristic frequency (rad/s)
        pair: particle pair; m is its reduced mass
    """
    if not omega0 > 0:
        raise DomainError(f"omega0 must be positive, got {omega0}")
    magnitude = np.linalg.norm(fields.b_vector) * np.linalg.norm(fields.e_vector)
    return float(pair.e ** 2 * magnitude / (CONSTANTS.c_light * pair.m ** 2 * omega0 ** 2))


def estimate_delta_n(number_density: float, chi12):
    """Refractive-index difference (N/V) chi_12 / (eps0 c)."""
    if not number_density > 0:
        raise DomainError(f"number density must be positive, got {number_density}")
    return number_density * chi12 / (CONSTANTS.eps0 * CONSTANTS.c_light)
