import math

import numpy as np
import pytest
from pydantic import ValidationError
from scipy import integrate
from sympy.physics.wigner import gaunt as sympy_gaunt
from sympy.physics.wigner import wigner_3j as sympy_wigner_3j

from app.exceptions import ConfigError, DomainError
from app.schemas.schemas import HState
from app.services.hydrogen_states import (
    RadialCache,
    angular_momentum_element,
    bound_states,
    cartesian_position_table,
    energy,
    expectation_r,
    gaunt,
    gordon_dipole_radial,
    position_element,
    quadrupole_element,
    radial_integral,
    radial_wavefunction,
    wigner_3j_exact,
)

DIPOLE_1S_2P = 768.0 / (243.0 * math.sqrt(6.0))


@pytest.mark.parametrize("n, expected", [(1, -0.5), (2, -0.125), (5, -0.02)])
def test_energy(n, expected):
    assert energy(n) == pytest.approx(expected, rel=1e-15)


def test_energy_rejects_zero():
    with pytest.raises(DomainError):
        energy(0)


def test_radial_wavefunction_at_origin():
    assert radial_wavefunction(1, 0, 0.0) == pytest.approx(2.0, rel=1e-15)


def test_radial_wavefunction_normalised():
    value, _ = integrate.quad(lambda r: radial_wavefunction(2, 1, r) ** 2 * r ** 2, 0, np.inf)
    assert value == pytest.approx(1.0, abs=1e-10)
    assert radial_integral(2, 1, 2, 1, 0) == pytest.approx(1.0, abs=1e-10)


def test_2p_peaks():
    r = np.linspace(0.001, 20.0, 200001)
    amplitude = radial_wavefunction(2, 1, r)
    # R_21 itself peaks at 2 bohr, the radial density r^2 R_21^2 at 4 bohr
    assert r[np.argmax(amplitude)] == pytest.approx(2.0, abs=1e-3)
    assert r[np.argmax(r ** 2 * amplitude ** 2)] == pytest.approx(4.0, abs=1e-3)


@pytest.mark.parametrize("n, l", [(2, 2), (0, 0), (3, -1)])
def test_invalid_quantum_numbers(n, l):
    with pytest.raises(DomainError):
        radial_wavefunction(n, l, 1.0)


def test_negative_radius():
    with pytest.raises(DomainError):
        radial_wavefunction(1, 0, -1.0)


@pytest.mark.parametrize(
    "args, expected",
    [
        ((1, 0, 1, 0, 1), 1.5),
        ((1, 0, 2, 1, 1), DIPOLE_1S_2P),
        ((1, 0, 1, 0, 2), 3.0),
        ((2, 1, 2, 1, 2), 30.0),
    ],
)
def test_radial_integral_values(args, expected):
    assert radial_integral(*args) == pytest.approx(expected, rel=1e-8)


def test_radial_integrals_match_closed_form_moments():
    for n in range(1, 6):
        for l in range(n):
            for power in (1, 2):
                assert radial_integral(n, l, n, l, power) == pytest.approx(expectation_r(n, l, power), rel=1e-10)


def test_radial_cache_is_symmetric():
    cache = RadialCache()
    first = cache.get(1, 0, 3, 1, 1)
    assert cache.get(3, 1, 1, 0, 1) == first
    assert len(cache) == 1
    assert (3, 1, 1, 0, 1) in cache


def test_radial_cache_rejects_unknown_power():
    with pytest.raises(DomainError):
        RadialCache().get(1, 0, 1, 0, 3)


def test_radial_cache_round_trip(tmp_path):
    cache = RadialCache().warm_up(3)
    path = tmp_path / "radial.csv"
    cache.dump(str(path))
    assert path.read_text().splitlines()[0] == "# radial-cache v1"
    loaded = RadialCache.load(str(path))
    assert loaded.items() == cache.items()


def test_radial_cache_rejects_foreign_table(tmp_path):
    path = tmp_path / "other.csv"
    path.write_text("n1,l1,n2,l2,power,value\n")
    with pytest.raises(ConfigError):
        RadialCache.load(str(path))


def test_gordon_closed_form_values():
    assert abs(gordon_dipole_radial(2, 1, 1)) == pytest.approx(DIPOLE_1S_2P, rel=1e-12)
    assert abs(gordon_dipole_radial(3, 1, 2)) == pytest.approx(3.0648, rel=1e-4)


def test_gordon_matches_quadrature():
    for n in range(2, 8):
        for l in range(1, n):
            for n_prime in range(l, 8):
                if n_prime == n:
                    continue
                closed = gordon_dipole_radial(n, l, n_prime)
                assert abs(radial_integral(n, l, n_prime, l - 1, 1)) == pytest.approx(abs(closed), rel=1e-8)


def test_gordon_rejects_same_shell():
    with pytest.raises(DomainError):
        gordon_dipole_radial(3, 1, 3)


def test_gaunt_orthonormality():
    assert gaunt(0, 0, 0, 0, 0, 0) == pytest.approx(1.0 / math.sqrt(4 * math.pi), rel=1e-15)
    assert gaunt(1, 0, 1, 0, 0, 0) == pytest.approx(1.0 / math.sqrt(4 * math.pi), rel=1e-15)


def test_gaunt_matches_sympy():
    for l1 in range(4):
        for l2 in range(4):
            for L in range(3):
                for m1 in range(-l1, l1 + 1):
                    for M in range(-L, L + 1):
                        m2 = m1 - M
                        if abs(m2) > l2:
                            continue
                        # conj(Y_l1m1) = (-1)^m1 Y_l1,-m1
                        reference = (-1) ** (m1 % 2) * float(sympy_gaunt(l1, L, l2, -m1, M, m2))
                        assert gaunt(l1, m1, L, M, l2, m2) == pytest.approx(reference, abs=1e-14)


def test_gaunt_selection_rules():
    assert gaunt(1, 0, 1, 0, 1, 0) == 0.0
    assert gaunt(1, 1, 1, 0, 1, 0) == 0.0
    assert gaunt(0, 0, 2, 0, 0, 0) == 0.0
    assert gaunt(1, 2, 1, 0, 1, 0) == 0.0


@pytest.mark.parametrize(
    "j1, j2, j3, m1, m2, m3",
    [(1, 1, 0, 0, 0, 0), (1, 1, 2, 1, -1, 0), (2, 2, 2, 0, 0, 0), (3, 2, 1, -2, 1, 1), (2, 1, 3, 1, 1, -2)],
)
def test_wigner_3j_matches_sympy(j1, j2, j3, m1, m2, m3):
    sign, square = wigner_3j_exact(j1, j2, j3, m1, m2, m3)
    value = sign * math.sqrt(float(square))
    assert value == pytest.approx(float(sympy_wigner_3j(j1, j2, j3, m1, m2, m3)), abs=1e-15)


def test_cartesian_table_rows():
    table = cartesian_position_table()
    assert len(table) == 3
    assert table[2] == {0: 1.0}


def test_position_element_values():
    ground = HState(n=1, l=0, m=0)
    assert position_element(ground, 2, HState(n=2, l=1, m=0)) == pytest.approx(DIPOLE_1S_2P / math.sqrt(3))
    assert position_element(ground, 0, HState(n=2, l=1, m=0)) == 0
    for m in range(-2, 3):
        for axis in range(3):
            assert position_element(ground, axis, HState(n=3, l=2, m=m)) == 0


def test_angular_momentum_element_values():
    assert angular_momentum_element(HState(n=2, l=1, m=1), 2, HState(n=2, l=1, m=1)) == pytest.approx(1.0)
    assert angular_momentum_element(HState(n=3, l=1, m=1), 0, HState(n=3, l=1, m=0)) == pytest.approx(
        1.0 / math.sqrt(2.0)
    )
    for m in (-1, 0, 1):
        for m_prime in (-1, 0, 1):
            for axis in range(3):
                value = angular_momentum_element(HState(n=2, l=1, m=m), axis, HState(n=3, l=1, m=m_prime))
                assert abs(value) < 1e-10
    assert angular_momentum_element(HState(n=3, l=1, m=0), 2, HState(n=3, l=2, m=0)) == 0


def test_quadrupole_element_values():
    ground = HState(n=1, l=0, m=0)
    for k in range(3):
        for j in range(3):
            expected = 2.0 if k == j else 0.0
            assert quadrupole_element(ground, k, j, ground) == pytest.approx(expected, abs=1e-10)
            assert quadrupole_element(ground, k, j, HState(n=2, l=1, m=0)) == 0
    p0 = HState(n=2, l=1, m=0)
    # r^2 - z^2 in 2p0: <r^2> (1 - 3/5)
    assert quadrupole_element(p0, 2, 2, p0) == pytest.approx(12.0, rel=1e-9)


def test_elements_are_hermitian():
    states = bound_states(4)
    rng = np.random.default_rng(11)
    for _ in range(200):
        a, b = (states[k] for k in rng.integers(len(states), size=2))
        i, j = (int(v) for v in rng.integers(3, size=2))
        pairs = [
            (position_element(a, i, b), position_element(b, i, a)),
            (angular_momentum_element(a, i, b), angular_momentum_element(b, i, a)),
            (quadrupole_element(a, i, j, b), quadrupole_element(b, i, j, a)),
        ]
        for forward, backward in pairs:
            assert abs(forward - np.conj(backward)) <= 1e-12 * max(1.0, abs(forward))


def test_selection_rule_zeros_are_exact():
    states = bound_states(4)
    rng = np.random.default_rng(5)
    checked = 0
    while checked < 200:
        a, b = (states[k] for k in rng.integers(len(states), size=2))
        i, j = (int(v) for v in rng.integers(3, size=2))
        if abs(a.l - b.l) != 1 or abs(a.m - b.m) > 1:
            assert position_element(a, i, b) == 0
        if a.l != b.l or abs(a.m - b.m) > 1:
            assert angular_momentum_element(a, i, b) == 0
        if abs(a.l - b.l) not in (0, 2) or abs(a.m - b.m) > 2:
            assert quadrupole_element(a, i, j, b) == 0
        checked += 1


def test_bound_dipole_sum_rule():
    ground = HState(n=1, l=0, m=0)
    total = sum(
        abs(position_element(ground, 2, HState(n=n, l=1, m=m))) ** 2 for n in range(2, 21) for m in (-1, 0, 1)
    )
    # the continuum carries the rest of <1s|z^2|1s> = 1
    assert 0.65 < total < 1.0


def test_bound_states_ordering():
    states = bound_states(3, l_max=1, n_min=2)
    assert [str(s) for s in states[:4]] == ["|2,0,0>", "|2,1,-1>", "|2,1,0>", "|2,1,1>"]
    assert len(states) == 8


def test_state_bounds():
    with pytest.raises(ValidationError):
        HState(n=1, l=1, m=0)
    with pytest.raises(ValidationError):
        HState(n=3, l=1, m=2)
