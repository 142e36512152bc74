"""
Oracle-versus-main-path comparisons behind the ``validate`` command.

Each check returns a CheckResult; ``perturb`` scales the main-path values of
named checks so that a failing run can be provoked on purpose.
"""
import logging
from typing import Callable, Dict, Iterable, List, Optional

import numpy as np
import pandas as pd

from ..exceptions import DomainError, ValidationFailure
from ..schemas.schemas import CheckResult, HOModel, HydrogenModel, StaticFieldConfig
from .ho_service import ho_chi_final, ho_chi_L, ho_chi_quad
from .hydrogen_service import HydrogenResponse
from .hydrogen_states import gaunt, gordon_dipole_radial, radial_integral
from .oracle_service import (
    angular_quadrature_gaunt,
    build_fock_basis,
    build_hydrogen_basis,
    dense_chi_L,
    dense_chi_quad,
    hydrogen_couplings,
    oscillator_couplings,
    quadrature_radial,
)
from .tensor_service import relative_error
from .units_service import electron_proton_pair, from_atomic

logger = logging.getLogger(__name__)

FAMILIES = ("ho", "hydrogen", "radial", "gaunt")

# generic static fields: every tensor entry nonzero
CHECK_FIELDS = StaticFieldConfig(E0=(1e5, 2e4, -3e4), B0=(1.0, 10.0, 2.0))
CHECK_OMEGA0 = 1e16
CHECK_GAMMA = 1e8


def oscillator_check_model() -> HOModel:
    return HOModel(pair=electron_proton_pair(), omega0=CHECK_OMEGA0, fields=CHECK_FIELDS)


def hydrogen_check_model(n_max: int = 4) -> HydrogenModel:
    return HydrogenModel(pair=electron_proton_pair(), fields=CHECK_FIELDS, gamma=CHECK_GAMMA, n_max=n_max)


def oscillator_frequencies(omega0: float, points: int = 100) -> np.ndarray:
    """Log grid over [1e-3, 1e3] omega0 without the (0.99, 1.01) omega0 window."""
    dense = np.logspace(-3, 3, 10 * points + 1) * omega0
    dense = dense[(dense < 0.99 * omega0) | (dense > 1.01 * omega0)]
    # even subsample of what is left keeps both ends of the range
    picks = np.round(np.linspace(0, dense.size - 1, points)).astype(int)
    return dense[picks]


def hydrogen_check_frequencies(count: int = 20, seed: int = 7) -> np.ndarray:
    """Random frequencies between 0.01 and 0.6 hartree, one placed next to the 1s-2p line."""
    rng = np.random.default_rng(seed)
    omegas = rng.uniform(0.01, 0.6, count - 1)
    near_resonance = 0.375 * (1.0 + 1e-7)
    return from_atomic(np.sort(np.append(omegas, near_resonance)), "frequency")


def _result(name: str, family: str, error: float, tolerance: float) -> CheckResult:
    return CheckResult(
        name=name, family=family, max_rel_error=float(error), tolerance=tolerance, passed=bool(error <= tolerance)
    )


def _check_ho(factor: Callable[[str], float]) -> List[CheckResult]:
    model = oscillator_check_model()
    results = []

    errors = []
    for omega in oscillator_frequencies(model.omega0):
        parts = (ho_chi_L(model, omega) + ho_chi_quad(model, omega)).entries * factor("ho_final_form")
        errors.append(relative_error(parts, ho_chi_final(model, omega).entries))
    results.append(_result("ho_final_form", "ho", max(errors), 1e-12))

    basis = build_fock_basis(6, model.pair, model.omega0)
    couplings = oscillator_couplings(model.pair)
    grid = oscillator_frequencies(model.omega0, 20)
    for name, closed, dense in (
        ("ho_fock_L", ho_chi_L, dense_chi_L),
        ("ho_fock_quad", ho_chi_quad, dense_chi_quad),
    ):
        errors = [
            relative_error(
                closed(model, omega).entries * factor(name),
                dense(basis, model.fields, omega, 0.0, couplings).entries,
            )
            for omega in grid
        ]
        results.append(_result(name, "ho", max(errors), 1e-8))
    return results


def _check_hydrogen(factor: Callable[[str], float]) -> List[CheckResult]:
    model = hydrogen_check_model(4)
    response = HydrogenResponse(model)
    basis = build_hydrogen_basis(4)
    couplings = hydrogen_couplings(model.pair, model.mass_ratio_limit)
    omegas = hydrogen_check_frequencies()
    results = []
    for name, part, dense in (
        ("hydrogen_dense_L", "L", dense_chi_L),
        ("hydrogen_dense_quad", "quad", dense_chi_quad),
    ):
        main = response.evaluate(omegas, part) * factor(name)
        errors = [
            relative_error(main[k], dense(basis, model.fields, omega, model.gamma, couplings).entries)
            for k, omega in enumerate(omegas)
        ]
        results.append(_result(name, "hydrogen", max(errors), 1e-10))
    return results


def _check_radial(factor: Callable[[str], float]) -> List[CheckResult]:
    errors = []
    levels = [(n, l) for n in range(1, 6) for l in range(n)]
    for index, (n1, l1) in enumerate(levels):
        for n2, l2 in levels[index:]:
            for power in (0, 1, 2):
                reference = quadrature_radial(n1, l1, n2, l2, power)
                value = radial_integral(n1, l1, n2, l2, power) * factor("radial_quadrature")
                errors.append(abs(value - reference) / max(abs(reference), 1.0))
    results = [_result("radial_quadrature", "radial", max(errors), 1e-10)]

    errors = []
    for n in range(2, 11):
        for l in range(1, n):
            for n_prime in range(l, 11):
                if n_prime == n:
                    continue
                reference = gordon_dipole_radial(n, l, n_prime)
                value = radial_integral(n, l, n_prime, l - 1, 1) * factor("radial_gordon")
                errors.append(abs(abs(value) - abs(reference)) / abs(reference))
    results.append(_result("radial_gordon", "radial", max(errors), 1e-8))
    return results


def _check_gaunt(factor: Callable[[str], float]) -> List[CheckResult]:
    errors = []
    for l1 in range(4):
        for l2 in range(4):
            for L in range(3):
                for m1 in range(-l1, l1 + 1):
                    for M in range(-L, L + 1):
                        m2 = m1 - M
                        if abs(m2) > l2:
                            continue
                        value = gaunt(l1, m1, L, M, l2, m2) * factor("gaunt_quadrature")
                        errors.append(abs(value - angular_quadrature_gaunt(l1, m1, L, M, l2, m2)))
    return [_result("gaunt_quadrature", "gaunt", max(errors), 1e-12)]


CHECKS = {
    "ho": _check_ho,
    "hydrogen": _check_hydrogen,
    "radial": _check_radial,
    "gaunt": _check_gaunt,
}


def validate(families: Optional[Iterable[str]] = None, perturb: Optional[Dict[str, float]] = None) -> pd.DataFrame:
    """
    Run the oracle comparisons.

    Args:
        families: subset of FAMILIES to run (all when None)
        perturb: check name -> relative offset applied to the main-path values

    Returns:
        DataFrame with one row per check (name, family, max_rel_error,
        tolerance, passed)
    """
    selected = list(families) if families else list(FAMILIES)
    unknown = [family for family in selected if family not in CHECKS]
    if unknown:
        raise DomainError(f"unknown validation families {unknown}; expected {list(FAMILIES)}")
    offsets = dict(perturb or {})

    def factor(name: str) -> float:
        return 1.0 + offsets.get(name, 0.0)

    rows = []
    for family in selected:
        logger.info("running %s checks", family)
        for result in CHECKS[family](factor):
            logger.info(
                "%s: max error %.3e (tolerance %.1e) %s",
                result.name, result.max_rel_error, result.tolerance, "ok" if result.passed else "FAILED",
            )
            rows.append(result.model_dump())
    return pd.DataFrame(rows, columns=list(CheckResult.model_fields))


def raise_on_failure(report: pd.DataFrame):
    failed = report.loc[~report["passed"], "name"].tolist()
    if failed:
        raise ValidationFailure(failed)
