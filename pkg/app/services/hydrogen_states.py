"""
Hydrogen bound-state data in atomic units.

Radial integrals come from adaptive quadrature and are cached per quantum
numbers; angular factors come from exact Racah arithmetic. Matrix elements of
the position, angular momentum and quadrupole operators are assembled from the
two through spherical components and a fixed spherical-to-Cartesian table.
"""
import logging
import math
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Tuple

import mpmath
import numpy as np
from scipy import integrate, special

from ..exceptions import DomainError
from ..schemas.schemas import HState

logger = logging.getLogger(__name__)

# Ground-state energy (hartree)
E1 = -0.5

# Radial quadrature extends to R_MAX_SCALE * n^2 bohr
R_MAX_SCALE = 40.0
RADIAL_EPSREL = 1e-12
RADIAL_EPSABS = 1e-14
RADIAL_POWERS = (0, 1, 2)

SQRT_HALF = 1.0 / math.sqrt(2.0)

# Cartesian axis -> {spherical component q: coefficient}, x_i = sum_q U[i][q] x_q
CARTESIAN_FROM_SPHERICAL = (
    {-1: SQRT_HALF, 1: -SQRT_HALF},
    {-1: 1j * SQRT_HALF, 1: 1j * SQRT_HALF},
    {0: 1.0},
)


def cartesian_position_table():
    """The spherical-to-Cartesian table for rank-1 operators (x, y, z rows)."""
    return CARTESIAN_FROM_SPHERICAL


def _check_quantum_numbers(n: int, l: int):
    if n < 1 or l < 0 or l > n - 1:
        raise DomainError(f"invalid hydrogen quantum numbers n={n}, l={l}")


def energy(n: int) -> float:
    """Bound-state energy E_1 / n^2 in hartree."""
    if n < 1:
        raise DomainError(f"principal quantum number must be >= 1, got {n}")
    return E1 / n ** 2


def transition_energy(n: int) -> float:
    """E_n - E_1 in hartree."""
    return energy(n) - E1


def radial_wavefunction(n: int, l: int, r):
    """
    Normalised radial function R_nl(r), r in bohr.

    Args:
        n: principal quantum number
        l: orbital quantum number, 0 <= l <= n - 1
        r: radius or array of radii (bohr), non-negative

    Returns:
        R_nl(r) in bohr^(-3/2)
    """
    _check_quantum_numbers(n, l)
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise DomainError("radius must be non-negative")
    rho = 2.0 * r / n
    norm = math.sqrt(
        (2.0 / n) ** 3 * math.factorial(n - l - 1) / (2.0 * n * math.factorial(n + l))
    )
    return norm * np.exp(-rho / 2.0) * rho ** l * special.eval_genlaguerre(n - l - 1, 2 * l + 1, rho)


def expectation_r(n: int, l: int, power: int) -> float:
    """Closed-form <r^power> for power in {0, 1, 2}."""
    _check_quantum_numbers(n, l)
    if power == 0:
        return 1.0
    if power == 1:
        return (3 * n ** 2 - l * (l + 1)) / 2.0
    if power == 2:
        return n ** 2 * (5 * n ** 2 + 1 - 3 * l * (l + 1)) / 2.0
    raise DomainError(f"unsupported power {power}")


def _quadrature_radial(n1: int, l1: int, n2: int, l2: int, power: int) -> float:
    scale = max(n1, n2) ** 2

    def integrand(r):
        return radial_wavefunction(n1, l1, r) * radial_wavefunction(n2, l2, r) * r ** (2 + power)

    edges = scale * np.array([0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, R_MAX_SCALE])
    total = 0.0
    for lower, upper in zip(edges[:-1], edges[1:]):
        value, _ = integrate.quad(
            integrand, lower, upper, epsabs=RADIAL_EPSABS, epsrel=RADIAL_EPSREL, limit=200
        )
        total += value
    return total


class RadialCache:
    """
    Radial integrals keyed by (n1, l1, n2, l2, power).

    Keys are stored with the smaller (n, l) pair first so that swapped
    requests return the identical float. Filled once (warm-up or lazily from
    a single thread) and read-only afterwards.
    """

    def __init__(self, values: Dict[Tuple[int, int, int, int, int], float] = None):
        self._values = dict(values or {})

    @staticmethod
    def key(n1: int, l1: int, n2: int, l2: int, power: int):
        if (n2, l2) < (n1, l1):
            n1, l1, n2, l2 = n2, l2, n1, l1
        return (n1, l1, n2, l2, power)

    def get(self, n1: int, l1: int, n2: int, l2: int, power: int) -> float:
        _check_quantum_numbers(n1, l1)
        _check_quantum_numbers(n2, l2)
        if power not in RADIAL_POWERS:
            raise DomainError(f"radial power must be one of {RADIAL_POWERS}, got {power}")
        key = self.key(n1, l1, n2, l2, power)
        value = self._values.get(key)
        if value is None:
            value = _quadrature_radial(*key)
            self._values[key] = value
        return value

    def warm_up(self, n_max: int, l_max: int = 3, powers: Iterable[int] = RADIAL_POWERS):
        """Fill every integral with n <= n_max and l <= l_max."""
        pairs = [(n, l) for n in range(1, n_max + 1) for l in range(min(n - 1, l_max) + 1)]
        before = len(self._values)
        for index, (n1, l1) in enumerate(pairs):
            for n2, l2 in pairs[index:]:
                for power in powers:
                    self.get(n1, l1, n2, l2, power)
        logger.info("radial cache warm-up: %d new integrals (n_max=%d)", len(self._values) - before, n_max)
        return self

    def items(self):
        return sorted(self._values.items())

    def update(self, other: "RadialCache"):
        self._values.update(other._values)
        return self

    def dump(self, path: str):
        from ..db.storage import write_radial_table

        write_radial_table(self.items(), path)

    @classmethod
    def load(cls, path: str) -> "RadialCache":
        from ..db.storage import read_radial_table

        return cls(read_radial_table(path))

    def __len__(self):
        return len(self._values)

    def __contains__(self, key):
        return self.key(*key) in self._values


DEFAULT_CACHE = RadialCache()


def radial_integral(n1: int, l1: int, n2: int, l2: int, power: int, cache: RadialCache = None) -> float:
    """Integral of R_{n1 l1} r^power R_{n2 l2} r^2 over r (bohr^power)."""
    return (cache or DEFAULT_CACHE).get(n1, l1, n2, l2, power)


def gordon_dipole_radial(n: int, l: int, n_prime: int) -> float:
    """
    Closed form of the integral of R_{n l} R_{n' l-1} r^3 over r.

    Hypergeometric (Gordon) expression, evaluated with mpmath. Valid for
    l >= 1 and n != n'.
    """
    _check_quantum_numbers(n, l)
    _check_quantum_numbers(n_prime, l - 1)
    if n == n_prime:
        raise DomainError("the closed form needs n != n'")
    with mpmath.workdps(30):
        return float(_gordon_terms(n, l, n_prime))


def _gordon_terms(n: int, l: int, n_prime: int):
    f = mpmath.factorial
    diff = mpmath.mpf(n - n_prime)
    total = mpmath.mpf(n + n_prime)
    z = -4 * mpmath.mpf(n) * n_prime / diff ** 2
    front = (-1) ** (n_prime - l) / (4 * f(2 * l - 1))
    root = mpmath.sqrt(f(n + l) * f(n_prime + l - 1) / (f(n - l - 1) * f(n_prime - l)))
    powers = (4 * mpmath.mpf(n) * n_prime) ** (l + 1) * diff ** (n + n_prime - 2 * l - 2) / total ** (n + n_prime)
    bracket = mpmath.hyp2f1(-n + l + 1, -n_prime + l, 2 * l, z) - (diff / total) ** 2 * mpmath.hyp2f1(
        -n + l - 1, -n_prime + l, 2 * l, z
    )
    return front * root * powers * bracket


def _factorial(k: int) -> int:
    return math.factorial(k)


@lru_cache(maxsize=None)
def wigner_3j_exact(j1: int, j2: int, j3: int, m1: int, m2: int, m3: int) -> Tuple[int, Fraction]:
    """
    Racah form of the 3j symbol for integer arguments.

    Returns (sign, square) with 3j = sign * sqrt(square); sign is 0 when the
    symbol vanishes.
    """
    if m1 + m2 + m3 != 0:
        return 0, Fraction(0)
    if abs(m1) > j1 or abs(m2) > j2 or abs(m3) > j3:
        return 0, Fraction(0)
    if j3 < abs(j1 - j2) or j3 > j1 + j2:
        return 0, Fraction(0)
    t1 = j2 - m1 - j3
    t2 = j1 + m2 - j3
    t3 = j1 + j2 - j3
    t4 = j1 - m1
    t5 = j2 + m2
    series = Fraction(0)
    for t in range(max(0, t1, t2), min(t3, t4, t5) + 1):
        denominator = (
            _factorial(t) * _factorial(t - t1) * _factorial(t - t2)
            * _factorial(t3 - t) * _factorial(t4 - t) * _factorial(t5 - t)
        )
        series += Fraction((-1) ** t, denominator)
    if series == 0:
        return 0, Fraction(0)
    triangle = Fraction(
        _factorial(j1 + j2 - j3) * _factorial(j1 - j2 + j3) * _factorial(-j1 + j2 + j3),
        _factorial(j1 + j2 + j3 + 1),
    )
    moments = (
        _factorial(j1 + m1) * _factorial(j1 - m1) * _factorial(j2 + m2)
        * _factorial(j2 - m2) * _factorial(j3 + m3) * _factorial(j3 - m3)
    )
    sign = (-1) ** ((j1 - j2 - m3) % 2) * (1 if series > 0 else -1)
    return sign, triangle * moments * series ** 2


@lru_cache(maxsize=None)
def gaunt(l1: int, m1: int, L: int, M: int, l2: int, m2: int) -> float:
    """
    Integral of conj(Y_{l1 m1}) Y_{L M} Y_{l2 m2} over the sphere.

    Condon-Shortley phases. Combinations forbidden by the selection rules
    return 0.0.
    """
    if abs(m1) > l1 or abs(M) > L or abs(m2) > l2:
        return 0.0
    if (l1 + L + l2) % 2 or -m1 + M + m2 != 0:
        return 0.0
    sign_a, square_a = wigner_3j_exact(l1, L, l2, 0, 0, 0)
    sign_b, square_b = wigner_3j_exact(l1, L, l2, -m1, M, m2)
    if sign_a == 0 or sign_b == 0:
        return 0.0
    square = Fraction((2 * l1 + 1) * (2 * L + 1) * (2 * l2 + 1)) * square_a * square_b
    sign = (-1) ** (m1 % 2) * sign_a * sign_b
    return sign * math.sqrt(float(square) / (4.0 * math.pi))


@lru_cache(maxsize=None)
def _dipole_angular(la: int, ma: int, lb: int, mb: int, axis: int) -> complex:
    value = 0j
    for q, coefficient in CARTESIAN_FROM_SPHERICAL[axis].items():
        value += coefficient * gaunt(la, ma, 1, q, lb, mb)
    return math.sqrt(4.0 * math.pi / 3.0) * value


@lru_cache(maxsize=None)
def _quadrupole_angular(la: int, ma: int, lb: int, mb: int, k: int, j: int) -> complex:
    # <la ma| delta_kj - x_k x_j / r^2 |lb mb>
    product = 0j
    for q, u_kq in CARTESIAN_FROM_SPHERICAL[k].items():
        for p, u_jp in CARTESIAN_FROM_SPHERICAL[j].items():
            for L in (0, 2):
                M = q + p
                coupling = gaunt(L, M, 1, q, 1, p)
                if coupling:
                    product += u_kq * u_jp * coupling * gaunt(la, ma, L, M, lb, mb)
    product *= 4.0 * math.pi / 3.0
    trace = 1.0 if (k == j and la == lb and ma == mb) else 0.0
    return trace - product


def _ladder(l: int, ma: int, mb: int, step: int) -> float:
    if ma != mb + step:
        return 0.0
    return math.sqrt(l * (l + 1) - mb * (mb + step))


def position_element(a: HState, i: int, b: HState, cache: RadialCache = None) -> complex:
    """<a| x_i |b> in bohr; i = 0, 1, 2 for x, y, z."""
    if abs(a.l - b.l) != 1 or abs(a.m - b.m) > 1:
        return 0j
    angular = _dipole_angular(a.l, a.m, b.l, b.m, i)
    if angular == 0:
        return 0j
    return radial_integral(a.n, a.l, b.n, b.l, 1, cache) * angular


def angular_momentum_element(a: HState, i: int, b: HState, cache: RadialCache = None) -> complex:
    """<a| L_i |b> in units of hbar, including the radial overlap."""
    if a.l != b.l or abs(a.m - b.m) > 1:
        return 0j
    l = a.l
    if i == 2:
        angular = complex(b.m if a.m == b.m else 0.0)
    else:
        raising = _ladder(l, a.m, b.m, 1)
        lowering = _ladder(l, a.m, b.m, -1)
        if i == 0:
            angular = complex((raising + lowering) / 2.0)
        else:
            angular = (raising - lowering) / 2j
    if angular == 0:
        return 0j
    return radial_integral(a.n, l, b.n, l, 0, cache) * angular


def quadrupole_element(a: HState, k: int, j: int, b: HState, cache: RadialCache = None) -> complex:
    """<a| r^2 delta_kj - x_k x_j |b> in bohr^2."""
    if abs(a.l - b.l) not in (0, 2) or abs(a.m - b.m) > 2:
        return 0j
    angular = _quadrupole_angular(a.l, a.m, b.l, b.m, k, j)
    if angular == 0:
        return 0j
    return radial_integral(a.n, a.l, b.n, b.l, 2, cache) * angular


def bound_states(n_max: int, l_max: int = 3, n_min: int = 1):
    """All |n, l, m> with n_min <= n <= n_max and l <= min(n - 1, l_max), ordered by n, l, m."""
    return [
        HState(n=n, l=l, m=m)
        for n in range(n_min, n_max + 1)
        for l in range(min(n - 1, l_max) + 1)
        for m in range(-l, l + 1)
    ]
