"""
Brute-force validators for the response calculations.

Everything here is rebuilt from scratch: radial integrals use Gauss-Laguerre
rules on explicit Laguerre series, angular factors use direct quadrature over
the sphere, and the response sums are plain matrix products on dense finite
bases. Nothing is cached and nothing is imported from the main hydrogen code.
"""
import logging
import math
from typing import Sequence

import numpy as np
from numpy.polynomial import Polynomial
from numpy.polynomial.laguerre import laggauss
from numpy.polynomial.legendre import leggauss
from scipy.special import lpmv

from ..schemas.schemas import DenseBasis, HState, ParticlePair, ResponseCouplings, ResponseTensor, StaticFieldConfig
from .units_service import CONSTANTS, from_atomic, response_couplings, to_atomic

logger = logging.getLogger(__name__)

# sphere grid: Gauss-Legendre in cos(theta) times uniform phi
THETA_NODES = 32
PHI_NODES = 32


# -- radial ---------------------------------------------------------------

def _radial_polynomial(n: int, l: int):
    """R_nl(r) = norm * exp(-r/n) * poly(r), poly as an explicit series."""
    k = n - l - 1
    alpha = 2 * l + 1
    scale = 2.0 / n
    coefficients = np.zeros(n)
    for i in range(k + 1):
        coefficients[l + i] = (-1) ** i * math.comb(k + alpha, k - i) / math.factorial(i) * scale ** (l + i)
    norm = math.sqrt(scale ** 3 * math.factorial(k) / (2.0 * n * math.factorial(n + l)))
    return norm, Polynomial(coefficients)


def quadrature_radial(n1: int, l1: int, n2: int, l2: int, power: int) -> float:
    """
    Radial integral of R_{n1 l1} r^power R_{n2 l2} r^2 by Gauss-Laguerre.

    The integrand is a polynomial times exp(-(1/n1 + 1/n2) r), so a rule with
    enough nodes is exact up to rounding.
    """
    norm1, poly1 = _radial_polynomial(n1, l1)
    norm2, poly2 = _radial_polynomial(n2, l2)
    integrand = poly1 * poly2 * Polynomial([0.0] * (2 + power) + [1.0])
    rate = 1.0 / n1 + 1.0 / n2
    nodes, weights = laggauss(integrand.degree() // 2 + 2)
    return float(norm1 * norm2 * np.sum(weights * integrand(nodes / rate)) / rate)


# -- angular --------------------------------------------------------------

def _sphere_grid():
    x, theta_weights = leggauss(THETA_NODES)
    phi = 2.0 * np.pi * np.arange(PHI_NODES) / PHI_NODES
    cos_theta = np.repeat(x, PHI_NODES)
    phi_grid = np.tile(phi, THETA_NODES)
    weights = np.repeat(theta_weights, PHI_NODES) * (2.0 * np.pi / PHI_NODES)
    return cos_theta, phi_grid, weights


def spherical_harmonic(l: int, m: int, cos_theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """Y_lm with the Condon-Shortley phase (carried by lpmv)."""
    if m < 0:
        return (-1) ** (-m) * np.conj(spherical_harmonic(l, -m, cos_theta, phi))
    norm = math.sqrt((2 * l + 1) / (4.0 * math.pi) * math.factorial(l - m) / math.factorial(l + m))
    return norm * lpmv(m, l, cos_theta) * np.exp(1j * m * phi)


def angular_quadrature_gaunt(l1: int, m1: int, L: int, M: int, l2: int, m2: int) -> float:
    """Integral of conj(Y_{l1 m1}) Y_{L M} Y_{l2 m2} by sphere quadrature."""
    cos_theta, phi, weights = _sphere_grid()
    product = (
        np.conj(spherical_harmonic(l1, m1, cos_theta, phi))
        * spherical_harmonic(L, M, cos_theta, phi)
        * spherical_harmonic(l2, m2, cos_theta, phi)
    )
    return float(np.sum(weights * product).real)


# -- dense bases ----------------------------------------------------------

def build_hydrogen_basis(n_cap: int) -> DenseBasis:
    """All bound states with n <= n_cap and their operator matrices."""
    if n_cap > 5:
        logger.warning("hydrogen oracle with n_cap=%d will be slow", n_cap)
    labels = [
        HState(n=n, l=l, m=m)
        for n in range(1, n_cap + 1)
        for l in range(n)
        for m in range(-l, l + 1)
    ]
    size = len(labels)
    cos_theta, phi, weights = _sphere_grid()
    sin_theta = np.sqrt(1.0 - cos_theta ** 2)
    unit = np.array([sin_theta * np.cos(phi), sin_theta * np.sin(phi), cos_theta])
    harmonics = {
        (l, m): spherical_harmonic(l, m, cos_theta, phi)
        for l in range(n_cap)
        for m in range(-l, l + 1)
    }

    x = np.zeros((3, size, size), dtype=complex)
    l_ops = np.zeros((3, size, size), dtype=complex)
    q = np.zeros((3, 3, size, size), dtype=complex)
    # upper triangle only; the lower one is its mirror
    for a, bra in enumerate(labels):
        conj_bra = np.conj(harmonics[(bra.l, bra.m)]) * weights
        for b in range(a, size):
            ket = labels[b]
            overlap_density = conj_bra * harmonics[(ket.l, ket.m)]
            r1 = quadrature_radial(bra.n, bra.l, ket.n, ket.l, 1)
            r2 = quadrature_radial(bra.n, bra.l, ket.n, ket.l, 2)
            for i in range(3):
                x[i, a, b] = r1 * np.sum(overlap_density * unit[i])
                for j in range(3):
                    delta = 1.0 if i == j else 0.0
                    q[i, j, a, b] = r2 * np.sum(overlap_density * (delta - unit[i] * unit[j]))
            if bra.l == ket.l:
                l_ops[:, a, b] = quadrature_radial(bra.n, bra.l, ket.n, ket.l, 0) * _angular_momentum_block(
                    bra.l, bra.m, ket.m
                )
    for operator in (x, l_ops, q):
        upper = np.triu(operator)
        diagonal = np.diagonal(operator, axis1=-2, axis2=-1).real.copy()
        operator[...] = upper + np.conj(np.swapaxes(upper, -1, -2))
        operator[..., np.arange(size), np.arange(size)] = diagonal
    energies = np.array([-0.5 / state.n ** 2 for state in labels])
    return DenseBasis(kind="hydrogen", labels=labels, energies=energies, x=x, l=l_ops, q=q)


def _angular_momentum_block(l: int, m_bra: int, m_ket: int) -> np.ndarray:
    # (L_x, L_y, L_z) between |l m_ket> and <l m_bra|
    up = math.sqrt(l * (l + 1) - m_ket * (m_ket + 1)) if m_bra == m_ket + 1 else 0.0
    down = math.sqrt(l * (l + 1) - m_ket * (m_ket - 1)) if m_bra == m_ket - 1 else 0.0
    lz = float(m_ket) if m_bra == m_ket else 0.0
    return np.array([(up + down) / 2.0, (up - down) / 2j, lz])


def build_fock_basis(n_cap: int, pair: ParticlePair, omega0: float) -> DenseBasis:
    """
    Three-dimensional oscillator states with total quanta <= n_cap.

    Args:
        n_cap: highest total excitation kept
        pair: particle pair (reduced mass sets the oscillator length)
        omega0: trap frequency (rad/s)
    """
    labels = sorted(
        ((nx, ny, nz) for nx in range(n_cap + 1) for ny in range(n_cap + 1) for nz in range(n_cap + 1)
         if nx + ny + nz <= n_cap),
        key=lambda triple: (sum(triple), triple),
    )
    index = {label: k for k, label in enumerate(labels)}
    size = len(labels)
    omega0_au = to_atomic(omega0, "frequency")
    mass = pair.m / CONSTANTS.m_electron
    length = math.sqrt(1.0 / (2.0 * mass * omega0_au))

    lowering = np.zeros((3, size, size))
    for label, k in index.items():
        for axis in range(3):
            if label[axis] > 0:
                lower = list(label)
                lower[axis] -= 1
                lowering[axis, index[tuple(lower)], k] = math.sqrt(label[axis])
    raising = np.swapaxes(lowering, 1, 2)

    x = length * (lowering + raising).astype(complex)
    l_ops = np.zeros((3, size, size), dtype=complex)
    levi = _levi_civita()
    for i in range(3):
        for j in range(3):
            for k in range(3):
                if levi[i, j, k]:
                    l_ops[i] += -1j * levi[i, j, k] * raising[j] @ lowering[k]
    radius_sq = sum(x[m] @ x[m] for m in range(3))
    q = np.zeros((3, 3, size, size), dtype=complex)
    for i in range(3):
        for j in range(3):
            q[i, j] = (radius_sq if i == j else 0.0) - (x[i] @ x[j] + x[j] @ x[i]) / 2.0
    energies = omega0_au * np.array([float(sum(label)) for label in labels])
    return DenseBasis(kind="fock", labels=labels, energies=energies, x=x, l=l_ops, q=q)


def _levi_civita() -> np.ndarray:
    levi = np.zeros((3, 3, 3))
    levi[0, 1, 2] = levi[1, 2, 0] = levi[2, 0, 1] = 1.0
    levi[0, 2, 1] = levi[2, 1, 0] = levi[1, 0, 2] = -1.0
    return levi


def permute_basis(basis: DenseBasis, order: Sequence[int]) -> DenseBasis:
    """Same basis with states reordered; order[k] is the old index of new state k."""
    order = np.asarray(order)
    grid = np.ix_(order, order)
    return DenseBasis(
        kind=basis.kind,
        labels=[basis.labels[k] for k in order],
        energies=basis.energies[order],
        x=np.stack([m[grid] for m in basis.x]),
        l=np.stack([m[grid] for m in basis.l]),
        q=np.stack([np.stack([m[grid] for m in row]) for row in basis.q]),
        ground_index=int(np.flatnonzero(order == basis.ground_index)[0]),
    )


def oscillator_couplings(pair: ParticlePair) -> ResponseCouplings:
    """Couplings under which the Fock-basis sums reproduce the oscillator closed forms."""
    return response_couplings(pair, mass_ratio_limit=False, ket_weight=2.0, bra_weight=0.0)


def hydrogen_couplings(pair: ParticlePair, mass_ratio_limit: bool = True) -> ResponseCouplings:
    return response_couplings(pair, mass_ratio_limit=mass_ratio_limit)


# -- dense response sums --------------------------------------------------

def _dense_inputs(basis: DenseBasis, fields: StaticFieldConfig, omega: float, gamma: float):
    g = basis.ground_index
    e_field = to_atomic(fields.e_vector, "efield")
    b_field = to_atomic(fields.b_vector, "bfield")
    w = to_atomic(omega, "frequency")
    width = to_atomic(gamma, "frequency")
    excitation = basis.energies - basis.energies[g]
    excited = np.arange(basis.size) != g
    minus = np.zeros(basis.size, dtype=complex)
    plus = np.zeros(basis.size, dtype=complex)
    minus[excited] = 1.0 / (excitation[excited] + 1j * width - w)
    plus[excited] = 1.0 / (excitation[excited] + 1j * width + w)
    dressing = np.zeros(basis.size, dtype=complex)
    field_dipole = sum(e_field[l] * basis.x[l] for l in range(3))
    dressing[excited] = field_dipole[excited, g] / excitation[excited]
    return g, b_field, minus, plus, dressing


def dense_chi_L(
    basis: DenseBasis,
    fields: StaticFieldConfig,
    omega: float,
    gamma: float,
    couplings: ResponseCouplings,
) -> ResponseTensor:
    """Angular-momentum channel as X R (L.B) R L |dressed ground>, plus the conjugate family."""
    g, b_field, minus, plus, dressing = _dense_inputs(basis, fields, omega, gamma)
    field_l = sum(b_field[k] * basis.l[k] for k in range(3))
    chi = np.zeros((3, 3), dtype=complex)
    for i in range(3):
        ground_row = basis.x[i][g, :]
        for j in range(3):
            probe = basis.l[j] @ dressing
            left = ground_row * minus
            right = minus * probe
            chi[i, j] = left @ field_l @ right
            chi[i, j] += (np.conj(ground_row) * plus) @ np.conj(field_l) @ (plus * np.conj(probe))
    return ResponseTensor(entries=from_atomic(couplings.k_l * chi, "response"), frequency=omega)


def dense_chi_quad(
    basis: DenseBasis,
    fields: StaticFieldConfig,
    omega: float,
    gamma: float,
    couplings: ResponseCouplings,
) -> ResponseTensor:
    """Quadrupole channel with a single resolvent, ket- and bra-dressed blocks plus conjugates."""
    g, b_field, minus, plus, dressing = _dense_inputs(basis, fields, omega, gamma)
    chi = np.zeros((3, 3), dtype=complex)
    for i in range(3):
        ground_row = basis.x[i][g, :]
        dressed_row = np.conj(dressing) @ basis.x[i]
        for j in range(3):
            field_q = sum(b_field[k] * basis.q[k, j] for k in range(3))
            ket_block = ground_row * (field_q @ dressing)
            bra_block = dressed_row * field_q[:, g]
            numerator = couplings.ket_weight * ket_block + couplings.bra_weight * bra_block
            chi[i, j] = np.sum(numerator * minus + np.conj(numerator) * plus)
    return ResponseTensor(entries=from_atomic(couplings.k_q * chi, "response"), frequency=omega)


def dense_chi_total(basis, fields, omega, gamma, couplings) -> ResponseTensor:
    return dense_chi_L(basis, fields, omega, gamma, couplings) + dense_chi_quad(
        basis, fields, omega, gamma, couplings
    )
