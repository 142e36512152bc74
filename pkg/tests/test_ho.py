import numpy as np
import pytest

from app.exceptions import DomainError, PoleError
from app.schemas.schemas import HOModel, StaticFieldConfig
from app.services.ho_service import (
    ho_chi_final,
    ho_chi_L,
    ho_chi_quad,
    ho_chi_total,
    ho_chi_total_grid,
    ho_high_frequency_limit,
    ho_polarizability_volume,
    ho_prefactor,
    ho_resonance,
)
from app.services.oracle_service import build_fock_basis, dense_chi_L, dense_chi_quad, oscillator_couplings
from app.services.tensor_service import relative_error
from app.services.units_service import (
    CONSTANTS,
    electron_proton_pair,
    equal_mass_pair,
    from_atomic,
    response_couplings,
    to_atomic,
)
from app.services.validation_service import oscillator_frequencies

from .conftest import OMEGA0, assert_tensor_close


def _static_scale(model):
    """K E B / omega0^2 in SI for fields along x and y."""
    e_field = to_atomic(np.linalg.norm(model.fields.e_vector), "efield")
    b_field = to_atomic(np.linalg.norm(model.fields.b_vector), "bfield")
    omega0 = to_atomic(model.omega0, "frequency")
    return from_atomic(ho_prefactor(model) * e_field * b_field / omega0 ** 2, "response")


def test_angular_momentum_part_static(ho_model):
    chi = ho_chi_L(ho_model, 0.0).entries
    assert chi[0, 1] == pytest.approx(_static_scale(ho_model), rel=1e-12)
    mask = np.ones((3, 3), dtype=bool)
    mask[0, 1] = False
    assert np.all(chi[mask] == 0)


def test_angular_momentum_part_at_ten_omega0(ho_model):
    ratio = ho_chi_L(ho_model, 10 * OMEGA0).entries[0, 1] / ho_chi_L(ho_model, 0.0).entries[0, 1]
    assert ratio.real == pytest.approx(101.0 / 9801.0, rel=1e-12)


def test_quadrupole_part_static(ho_model):
    chi = ho_chi_quad(ho_model, 0.0).entries
    scale = _static_scale(ho_model)
    assert chi[0, 1] == pytest.approx(-scale, rel=1e-12)
    assert chi[1, 0] == pytest.approx(scale / 4.0, rel=1e-12)


def test_quadrupole_parallel_fields(pair):
    model = HOModel(pair=pair, omega0=OMEGA0, fields=StaticFieldConfig(E0=(0, 0, 1e5), B0=(0, 0, 10.0)))
    chi = ho_chi_quad(model, 0.0).entries
    scale = _static_scale(model)
    assert chi[2, 2] == pytest.approx(-scale / 2.0, rel=1e-12)
    assert chi[0, 0] == pytest.approx(scale / 4.0, rel=1e-12)
    assert chi[1, 1] == pytest.approx(scale / 4.0, rel=1e-12)
    assert np.all(chi[~np.eye(3, dtype=bool)] == 0)


def test_static_total_is_sum_of_parts(ho_model):
    total = ho_chi_total(ho_model, 0.0).entries
    scale = _static_scale(ho_model)
    # the two parts cancel in (1,2) and leave a quarter in (2,1)
    assert abs(total[0, 1]) <= 1e-12 * scale
    assert total[1, 0] == pytest.approx(scale / 4.0, rel=1e-12)


def test_parts_match_final_form(generic_ho_model):
    for omega in oscillator_frequencies(OMEGA0):
        parts = ho_chi_total(generic_ho_model, omega).entries
        final = ho_chi_final(generic_ho_model, omega).entries
        assert relative_error(parts, final) <= 1e-12


@pytest.mark.parametrize("factor", [1.0, 1.0 + 1e-12, -1.0])
def test_pole_is_rejected(ho_model, factor):
    with pytest.raises(PoleError) as info:
        ho_chi_total(ho_model, factor * OMEGA0)
    assert not isinstance(info.value, DomainError)
    assert info.value.resonance == OMEGA0


def test_off_pole_is_finite(ho_model):
    assert np.all(np.isfinite(ho_chi_total(ho_model, 1.01 * OMEGA0).entries))


def test_null_cases(pair, generic_fields):
    equal = HOModel(pair=equal_mass_pair(), omega0=OMEGA0, fields=generic_fields)
    no_e = HOModel(pair=pair, omega0=OMEGA0, fields=StaticFieldConfig(B0=(1.0, 2.0, 3.0)))
    no_b = HOModel(pair=pair, omega0=OMEGA0, fields=StaticFieldConfig(E0=(1e5, 2e5, 3e5)))
    for model in (equal, no_e, no_b):
        for omega in (0.0, 0.3 * OMEGA0, 7.0 * OMEGA0):
            assert np.all(ho_chi_total(model, omega).entries == 0)
            assert np.all(ho_chi_final(model, omega).entries == 0)


def test_bilinear_in_fields(generic_ho_model):
    scaled = generic_ho_model.model_copy(update={"fields": generic_ho_model.fields.scaled(2.0, -3.0)})
    for omega in (0.0, 0.5 * OMEGA0, 20 * OMEGA0):
        assert_tensor_close(
            ho_chi_total(scaled, omega).entries, -6.0 * ho_chi_total(generic_ho_model, omega).entries, 1e-12
        )


def test_high_frequency_tail(ho_model):
    tail = [w ** 2 * ho_chi_total(ho_model, w).entries[0, 1] for w in (1e3 * OMEGA0, 1e4 * OMEGA0)]
    assert abs(tail[1] - tail[0]) < 1e-3 * abs(tail[1])
    limit = ho_high_frequency_limit(ho_model)
    assert_tensor_close((1e4 * OMEGA0) ** 2 * ho_chi_total(ho_model, 1e4 * OMEGA0).entries, limit, 1e-6)


def test_static_limit_is_even(generic_ho_model):
    static = ho_chi_total(generic_ho_model, 0.0).entries
    deviations = [
        np.max(np.abs(ho_chi_total(generic_ho_model, w).entries - static)) for w in (1e-3 * OMEGA0, 1e-4 * OMEGA0)
    ]
    assert deviations[0] < 1e-4 * np.max(np.abs(static))
    # O(omega^2): a tenfold smaller frequency gives a hundredfold smaller change
    assert deviations[1] / deviations[0] == pytest.approx(1e-2, rel=1e-2)


def test_grid_matches_pointwise(ho_model):
    omegas = np.array([0.0, 0.1 * OMEGA0, 3.0 * OMEGA0])
    grid = ho_chi_total_grid(ho_model, omegas)
    for k, omega in enumerate(omegas):
        assert np.array_equal(grid[k], ho_chi_total(ho_model, omega).entries)


def test_resonance_and_volume(ho_model):
    assert ho_resonance(ho_model) == OMEGA0
    expected = CONSTANTS.e_charge ** 2 / (4 * np.pi * CONSTANTS.eps0 * ho_model.pair.m * OMEGA0 ** 2)
    assert ho_polarizability_volume(ho_model) == pytest.approx(expected, rel=1e-14)


@pytest.fixture(scope="module")
def fock_basis():
    return build_fock_basis(6, electron_proton_pair(), OMEGA0)


def test_closed_forms_match_fock_sums(generic_ho_model, fock_basis):
    couplings = oscillator_couplings(generic_ho_model.pair)
    for omega in oscillator_frequencies(OMEGA0, 20):
        assert_tensor_close(
            dense_chi_L(fock_basis, generic_ho_model.fields, omega, 0.0, couplings).entries,
            ho_chi_L(generic_ho_model, omega).entries,
            1e-8,
        )
        assert_tensor_close(
            dense_chi_quad(fock_basis, generic_ho_model.fields, omega, 0.0, couplings).entries,
            ho_chi_quad(generic_ho_model, omega).entries,
            1e-8,
        )


def test_bra_dressed_block_adds_a_second_pole(generic_ho_model, fock_basis):
    # with both quadrupole blocks at unit weight the Fock sum picks up a 2 omega0 pole
    couplings = response_couplings(generic_ho_model.pair, ket_weight=1.0, bra_weight=1.0)
    omega = 1.5 * OMEGA0
    dense = dense_chi_quad(fock_basis, generic_ho_model.fields, omega, 0.0, couplings).entries
    assert relative_error(dense, ho_chi_quad(generic_ho_model, omega).entries) > 1e-3
