from typing import Tuple

import numpy as np

from ..exceptions import DomainError
from ..schemas.schemas import ResponseTensor
from .units_service import CONSTANTS


def zero_tensor(frequency: float) -> ResponseTensor:
    return ResponseTensor(entries=np.zeros((3, 3), dtype=complex), frequency=frequency)


def tensor_add(a: ResponseTensor, b: ResponseTensor) -> ResponseTensor:
    """Entrywise sum; both tensors must belong to the same frequency."""
    if a.frequency != b.frequency:
        raise DomainError(
            f"cannot add tensors at different frequencies ({a.frequency} vs {b.frequency})"
        )
    return ResponseTensor(entries=a.entries + b.entries, frequency=a.frequency)


def split_sym_antisym(t: ResponseTensor) -> Tuple[ResponseTensor, ResponseTensor]:
    """
    Split into symmetric and antisymmetric parts.

    Both halves are computed from the same pair (t_ij, t_ji), so sym is exactly
    symmetric and antisym exactly antisymmetric.
    """
    transposed = t.entries.T
    sym = (t.entries + transposed) / 2.0
    antisym = (t.entries - transposed) / 2.0
    return (
        ResponseTensor(entries=sym, frequency=t.frequency),
        ResponseTensor(entries=antisym, frequency=t.frequency),
    )


def antisymmetric_vector(t: ResponseTensor) -> np.ndarray:
    """Axial vector a with antisym_ij = eps_ijk a_k."""
    _, antisym = split_sym_antisym(t)
    a = antisym.entries
    return np.array([a[1, 2], a[2, 0], a[0, 1]])


def bianisotropic_12(t: ResponseTensor) -> complex:
    """Entry (1,2): dipole along x induced by a probe field along y."""
    return complex(t.entries[0, 1])


def dimensionless(t: ResponseTensor, volume: float) -> np.ndarray:
    """t / (eps0 c V) with V in m^3."""
    if not volume > 0:
        raise DomainError(f"reference volume must be positive, got {volume}")
    return t.entries / (CONSTANTS.eps0 * CONSTANTS.c_light * volume)


def hydrogen_volume() -> float:
    """Atomic volume (4/3) pi a0^3 used for the hydrogen dimensionless response."""
    return 4.0 / 3.0 * np.pi * CONSTANTS.bohr_radius ** 3


def relative_error(value: np.ndarray, reference: np.ndarray) -> float:
    """Largest entry deviation divided by the largest reference entry."""
    value = np.asarray(value)
    reference = np.asarray(reference)
    scale = np.max(np.abs(reference))
    deviation = np.max(np.abs(value - reference))
    if scale == 0:
        return float(deviation)
    return float(deviation / scale)
