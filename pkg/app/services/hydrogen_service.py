"""
Magneto-electric response of hydrogen from bound-state sums.

The ground state is first dressed by the static electric field; the probe
response then splits into an angular-momentum channel (two resolvents) and a
quadrupole channel (one resolvent). All frequency-independent numerators are
assembled once per model and aggregated by principal quantum number, so any
frequency grid is evaluated with a few vectorised contractions.
"""
import logging
from functools import lru_cache
from typing import Dict, Iterable, List, Tuple

import numpy as np
import pandas as pd

from ..exceptions import DomainError, PoleError
from ..schemas.schemas import HState, HydrogenModel, PerturbedGround, ResponseTensor, StaticFieldConfig
from .hydrogen_states import (
    RadialCache,
    angular_momentum_element,
    bound_states,
    position_element,
    quadrupole_element,
    transition_energy,
)
from .units_service import CONSTANTS, electron_proton_pair, from_atomic, response_couplings, to_atomic

logger = logging.getLogger(__name__)

GROUND = HState(n=1, l=0, m=0)

# Highest orbital quantum number kept in the intermediate sums
L_MAX = 3

# Same relative window as the oscillator pole guard
POLE_WINDOW = 1e-9

PARTS = ("total", "L", "quad")


def _charge_au(model: HydrogenModel) -> float:
    return model.pair.e / CONSTANTS.e_charge


def build_perturbed_ground(model: HydrogenModel, cache: RadialCache = None) -> PerturbedGround:
    """
    Stark-dressed ground state to first order in the static field.

    Only n p states couple to |1,0,0> through the dipole operator, so the
    admixture runs over (n, 1, m) with 2 <= n <= n_max.
    """
    e_field = to_atomic(model.fields.e_vector, "efield")
    charge = _charge_au(model)
    states = tuple(HState(n=n, l=1, m=m) for n in range(2, model.n_max + 1) for m in (-1, 0, 1))
    coefficients = []
    for state in states:
        coupling = sum(
            e_field[axis] * position_element(state, axis, GROUND, cache)
            for axis in range(3)
            if e_field[axis] != 0
        )
        coefficients.append(-charge * coupling / transition_energy(state.n))
    return PerturbedGround(
        states=states,
        coefficients=np.array(coefficients, dtype=complex),
        field_au=tuple(e_field),
    )


def static_polarizability(n_max: int = 20, cache: RadialCache = None) -> float:
    """
    Bound-state part of alpha / (4 pi eps0) in bohr^3.

    Built from the ground-state admixture in a unit field along z.
    """
    unit_field = from_atomic(1.0, "efield")
    model = HydrogenModel(
        pair=electron_proton_pair(),
        fields=StaticFieldConfig(E0=(0.0, 0.0, unit_field)),
        n_max=n_max,
    )
    ground = build_perturbed_ground(model, cache)
    induced = sum(
        position_element(GROUND, 2, state, cache) * coefficient
        for state, coefficient in zip(ground.states, ground.coefficients)
    )
    return float(-2.0 * induced.real)


def resonance_frequencies(n_max: int) -> np.ndarray:
    """(E_n - E_1) / hbar for n = 2..n_max, in rad/s."""
    return from_atomic(np.array([transition_energy(n) for n in range(2, n_max + 1)]), "frequency")


class HydrogenResponse:
    """
    Precomputed response sums for one HydrogenModel.

    Construction evaluates every matrix element the sums need (single
    threaded); afterwards ``evaluate`` is a pure function of the frequency
    grid and may be called from several workers at once.
    """

    def __init__(self, model: HydrogenModel, cache: RadialCache = None):
        self.model = model
        self.cache = cache
        self.couplings = response_couplings(model.pair, model.mass_ratio_limit)
        self.e_field = to_atomic(model.fields.e_vector, "efield")
        self.b_field = to_atomic(model.fields.b_vector, "bfield")
        self.gamma = to_atomic(model.gamma, "frequency")
        self.principal = np.arange(2, model.n_max + 1)
        self.transitions = np.array([transition_energy(n) for n in self.principal])
        self.states = bound_states(model.n_max, l_max=L_MAX, n_min=2)
        self.ground = build_perturbed_ground(model, cache)

        # state index -> principal-number index
        self._shell = np.array([state.n - 2 for state in self.states])
        self._l = np.array([state.l for state in self.states])

        logger.info(
            "building hydrogen response sums: n_max=%d, %d intermediate states",
            model.n_max,
            len(self.states),
        )
        self._build_vectors()
        self._build_angular_momentum_numerators()
        self._build_quadrupole_numerators()

    # -- frequency-independent pieces -------------------------------------

    def _build_vectors(self):
        size = len(self.states)
        self.dressing = np.zeros(size, dtype=complex)
        self.ground_dipole = np.zeros((3, size), dtype=complex)
        for index, state in enumerate(self.states):
            for axis in range(3):
                self.ground_dipole[axis, index] = position_element(GROUND, axis, state, self.cache)
                if self.e_field[axis] != 0:
                    self.dressing[index] += (
                        self.e_field[axis] * position_element(state, axis, GROUND, self.cache)
                    )
            self.dressing[index] /= transition_energy(state.n)
        self._dressed = np.flatnonzero(self.dressing)
        self._dipole_support = np.flatnonzero(np.any(self.ground_dipole != 0, axis=0))

    def _field_quadrupole(self, bra: HState, j: int, ket: HState) -> complex:
        # sum_k B_k <bra| Q_kj |ket>
        return sum(
            self.b_field[k] * quadrupole_element(bra, k, j, ket, self.cache)
            for k in range(3)
            if self.b_field[k] != 0
        )

    def _build_angular_momentum_numerators(self):
        size = len(self.states)
        field_l = np.zeros((size, size), dtype=complex)
        probe_l = np.zeros((3, size), dtype=complex)
        for a in self._dipole_support:
            for b in range(size):
                field_l[a, b] = sum(
                    self.b_field[k] * angular_momentum_element(self.states[a], k, self.states[b], self.cache)
                    for k in range(3)
                    if self.b_field[k] != 0
                )
        for b in range(size):
            for j in range(3):
                probe_l[j, b] = sum(
                    angular_momentum_element(self.states[b], j, self.states[s], self.cache) * self.dressing[s]
                    for s in self._dressed
                )
        shells = self._shell_indicator()
        # P[p, q, i, j]: shells p (first resolvent) and q (second resolvent)
        self.angular_numerators = self.couplings.k_l * np.einsum(
            "pa,ia,ab,jb,qb->pqij", shells, self.ground_dipole, field_l, probe_l, shells, optimize=True
        )

    def _build_quadrupole_numerators(self):
        size = len(self.states)
        ket_terms = np.zeros((L_MAX + 1, size, 3, 3), dtype=complex)
        bra_terms = np.zeros((L_MAX + 1, size, 3, 3), dtype=complex)
        field_ground = np.zeros((3, size), dtype=complex)
        for a in range(size):
            for j in range(3):
                field_ground[j, a] = self._field_quadrupole(self.states[a], j, GROUND)
        for s in self._dressed:
            channel = self.states[s].l
            weight = self.dressing[s]
            for a in self._dipole_support:
                column = np.array(
                    [self._field_quadrupole(self.states[a], j, self.states[s]) for j in range(3)]
                )
                ket_terms[channel, a] += np.outer(self.ground_dipole[:, a], column) * weight
            for a in range(size):
                row = np.array(
                    [position_element(self.states[s], i, self.states[a], self.cache) for i in range(3)]
                )
                bra_terms[channel, a] += np.outer(np.conj(weight) * row, field_ground[:, a])
        self.quadrupole_terms = self.couplings.k_q * (
            self.couplings.ket_weight * ket_terms + self.couplings.bra_weight * bra_terms
        )
        self.quadrupole_numerators = np.einsum(
            "pa,aij->pij", self._shell_indicator(), self.quadrupole_terms.sum(axis=0)
        )

    def _shell_indicator(self) -> np.ndarray:
        shells = np.zeros((len(self.principal), len(self.states)))
        shells[self._shell, np.arange(len(self.states))] = 1.0
        return shells

    # -- frequency-dependent evaluation -----------------------------------

    def _resolvents(self, omegas: np.ndarray):
        omegas_au = to_atomic(np.asarray(omegas, dtype=float), "frequency")
        if self.gamma == 0:
            detuning = np.abs(self.transitions[None, :] - np.abs(omegas_au)[:, None])
            hits = detuning < POLE_WINDOW * self.transitions[None, :]
            if np.any(hits):
                row, shell = np.argwhere(hits)[0]
                raise PoleError(
                    float(np.asarray(omegas)[row]),
                    float(from_atomic(self.transitions[shell], "frequency")),
                )
        shifted = self.transitions[None, :] + 1j * self.gamma
        minus = 1.0 / (shifted - omegas_au[:, None])
        plus = 1.0 / (shifted + omegas_au[:, None])
        return minus, plus

    def evaluate_angular_momentum(self, omegas: np.ndarray) -> np.ndarray:
        """Angular-momentum channel on a grid, atomic units, shape (F, 3, 3)."""
        minus, plus = self._resolvents(omegas)
        numerators = self.angular_numerators
        return np.einsum("fp,fq,pqij->fij", minus, minus, numerators) + np.einsum(
            "fp,fq,pqij->fij", plus, plus, np.conj(numerators)
        )

    def evaluate_quadrupole(self, omegas: np.ndarray) -> np.ndarray:
        """Quadrupole channel on a grid, atomic units, shape (F, 3, 3)."""
        minus, plus = self._resolvents(omegas)
        numerators = self.quadrupole_numerators
        return np.einsum("fp,pij->fij", minus, numerators) + np.einsum(
            "fp,pij->fij", plus, np.conj(numerators)
        )

    def evaluate(self, omegas: np.ndarray, part: str = "total") -> np.ndarray:
        """
        Response on a frequency grid (rad/s) in SI, complex array (F, 3, 3).

        Args:
            omegas: probe frequencies (rad/s)
            part: "total", "L" or "quad"
        """
        if part not in PARTS:
            raise DomainError(f"unknown response part {part!r}; expected one of {PARTS}")
        omegas = np.atleast_1d(np.asarray(omegas, dtype=float))
        if part == "L":
            values = self.evaluate_angular_momentum(omegas)
        elif part == "quad":
            values = self.evaluate_quadrupole(omegas)
        else:
            values = self.evaluate_angular_momentum(omegas) + self.evaluate_quadrupole(omegas)
        return from_atomic(values, "response")

    def tensor(self, omega: float, part: str = "total") -> ResponseTensor:
        return ResponseTensor(entries=self.evaluate([omega], part)[0], frequency=omega)

    def quadrupole_channels(self, omega: float) -> Dict[Tuple[int, int], np.ndarray]:
        """
        Quadrupole sum split by (L, L1).

        L is the orbital quantum number of the field-dressing state, L1 that of
        the resonant intermediate state. Values in SI; they add up to the
        quadrupole part.
        """
        minus, plus = self._resolvents(np.array([omega], dtype=float))
        minus_state = minus[0, self._shell]
        plus_state = plus[0, self._shell]
        channels = {}
        for L in range(L_MAX + 1):
            terms = self.quadrupole_terms[L]
            for L1 in range(L_MAX + 1):
                mask = self._l == L1
                value = np.einsum("a,aij->ij", minus_state[mask], terms[mask]) + np.einsum(
                    "a,aij->ij", plus_state[mask], np.conj(terms[mask])
                )
                channels[(L, L1)] = from_atomic(value, "response")
        return channels


@lru_cache(maxsize=8)
def get_response(model: HydrogenModel) -> HydrogenResponse:
    """Shared evaluator per model (models are immutable and hashable)."""
    return HydrogenResponse(model)


def chi_L_hydrogen(model: HydrogenModel, omega: float) -> ResponseTensor:
    """Angular-momentum channel of the hydrogen response at one frequency."""
    return get_response(model).tensor(omega, "L")


def chi_quad_hydrogen(model: HydrogenModel, omega: float) -> ResponseTensor:
    """Quadrupole channel of the hydrogen response at one frequency."""
    return get_response(model).tensor(omega, "quad")


def chi_total_hydrogen(model: HydrogenModel, omega: float) -> ResponseTensor:
    """Full hydrogen response, the sum of both channels."""
    return chi_L_hydrogen(model, omega) + chi_quad_hydrogen(model, omega)


def quadrupole_channels(model: HydrogenModel, omega: float) -> Dict[Tuple[int, int], np.ndarray]:
    return get_response(model).quadrupole_channels(omega)


def convergence_report(
    model: HydrogenModel,
    omega: float,
    n_max_list: Iterable[int],
    part: str = "total",
    tolerance: float = 1e-3,
) -> pd.DataFrame:
    """
    chi_12 as a function of the truncation n_max.

    Args:
        model: base model; its n_max is replaced by each entry of n_max_list
        omega: probe frequency (rad/s)
        n_max_list: strictly increasing truncations, each >= 2
        part: "total", "L" or "quad"
        tolerance: relative change between the last two rows above which the
            report is flagged

    Returns:
        DataFrame with columns n_max, re_chi12, im_chi12, rel_change, flagged
    """
    n_values: List[int] = list(n_max_list)
    if not n_values:
        raise DomainError("n_max_list must not be empty")
    if any(b <= a for a, b in zip(n_values, n_values[1:])):
        raise DomainError(f"n_max_list must be strictly increasing, got {n_values}")
    if n_values[0] < 2:
        raise DomainError("every n_max must be at least 2")

    rows = []
    previous = None
    for n_max in n_values:
        truncated = model.model_copy(update={"n_max": n_max})
        value = complex(HydrogenResponse(truncated).evaluate([omega], part)[0, 0, 1])
        if previous is None:
            change = float("nan")
        else:
            change = abs(value - previous) / abs(value) if value != 0 else abs(value - previous)
        rows.append({"n_max": n_max, "re_chi12": value.real, "im_chi12": value.imag, "rel_change": change})
        logger.debug("convergence n_max=%d chi12=%r", n_max, value)
        previous = value

    report = pd.DataFrame(rows)
    report["flagged"] = False
    if len(report) > 1 and report["rel_change"].iloc[-1] > tolerance:
        report.loc[report.index[-1], "flagged"] = True
    return report
