from typing import List, Literal, Optional, Tuple, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

Vector3 = Tuple[float, float, float]

AXES = ("x", "y", "z")


class Constants(BaseModel):
    """SI values of the constants the atomic-unit system is built from."""

    model_config = ConfigDict(frozen=True)

    hbar: float = Field(..., gt=0, description="Reduced Planck constant (J s)")
    e_charge: float = Field(..., gt=0, description="Elementary charge (C)")
    eps0: float = Field(..., gt=0, description="Vacuum permittivity (F/m)")
    c_light: float = Field(..., gt=0, description="Speed of light (m/s)")
    m_electron: float = Field(..., gt=0, description="Electron mass (kg)")
    bohr_radius: float = Field(..., gt=0, description="Bohr radius a0 (m)")
    hartree: float = Field(..., gt=0, description="Hartree energy (J)")


class ParticlePair(BaseModel):
    """Two oppositely charged particles bound by the Coulomb or trap potential."""

    model_config = ConfigDict(frozen=True)

    m1: float = Field(..., gt=0, description="Mass of particle 1 (kg)")
    m2: float = Field(..., gt=0, description="Mass of particle 2 (kg)")
    e: float = Field(..., gt=0, description="Magnitude of each charge (C)")
    M: float = Field(..., gt=0, description="Total mass m1 + m2 (kg)")
    m: float = Field(..., gt=0, description="Reduced mass m1 m2 / M (kg)")
    m_delta: float = Field(..., description="Mass difference m2 - m1 (kg)")

    @model_validator(mode="after")
    def _check_identities(self):
        if self.M != self.m1 + self.m2:
            raise ValueError("M must equal m1 + m2")
        if self.m != self.m1 * self.m2 / self.M:
            raise ValueError("m must equal m1 m2 / M")
        if self.m_delta != self.m2 - self.m1:
            raise ValueError("m_delta must equal m2 - m1")
        return self


class StaticFieldConfig(BaseModel):
    """Static fields the pair is placed in before probing."""

    model_config = ConfigDict(frozen=True)

    E0: Vector3 = Field((0.0, 0.0, 0.0), description="Static electric field (V/m)")
    B0: Vector3 = Field((0.0, 0.0, 0.0), description="Static magnetic field (T)")

    @field_validator("E0", "B0")
    @classmethod
    def _finite(cls, value):
        if not np.all(np.isfinite(value)):
            raise ValueError("field components must be finite")
        return tuple(float(v) for v in value)

    @property
    def e_vector(self) -> np.ndarray:
        return np.asarray(self.E0, dtype=float)

    @property
    def b_vector(self) -> np.ndarray:
        return np.asarray(self.B0, dtype=float)

    def scaled(self, alpha: float = 1.0, beta: float = 1.0) -> "StaticFieldConfig":
        """Return a copy with E0 scaled by alpha and B0 by beta."""
        return StaticFieldConfig(
            E0=tuple(alpha * v for v in self.E0),
            B0=tuple(beta * v for v in self.B0),
        )


class ResponseTensor(BaseModel):
    """
    Complex 3x3 magneto-electric response chi_ij at one frequency.

    Row i is the induced-dipole axis, column j the probe-field axis. Entries are
    SI (C m / T) and carry the frequency (rad/s) they were evaluated at.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    entries: np.ndarray
    frequency: float

    @field_validator("entries", mode="before")
    @classmethod
    def _as_complex_matrix(cls, value):
        array = np.array(value, dtype=np.complex128)
        if array.shape != (3, 3):
            raise ValueError(f"response tensor must be 3x3, got shape {array.shape}")
        if not np.all(np.isfinite(array)):
            raise ValueError("response tensor entries must be finite")
        array.setflags(write=False)
        return array

    def __add__(self, other: "ResponseTensor") -> "ResponseTensor":
        from ..services.tensor_service import tensor_add

        return tensor_add(self, other)

    def to_si_components(self) -> List[float]:
        """Flatten into re/im pairs in row-major order (the CSV column order)."""
        values = []
        for value in self.entries.reshape(-1):
            values.extend([value.real, value.imag])
        return values


class HOModel(BaseModel):
    """Pair bound in an isotropic harmonic trap."""

    model_config = ConfigDict(frozen=True)

    pair: ParticlePair
    omega0: float = Field(..., gt=0, description="Trap frequency (rad/s)")
    fields: StaticFieldConfig


class HState(BaseModel):
    """Hydrogenic bound state |n, l, m>."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=1)
    l: int = Field(..., ge=0)
    m: int

    @model_validator(mode="after")
    def _check_bounds(self):
        if self.l > self.n - 1:
            raise ValueError(f"l={self.l} exceeds n-1 for n={self.n}")
        if abs(self.m) > self.l:
            raise ValueError(f"|m|={abs(self.m)} exceeds l={self.l}")
        return self

    def __str__(self):
        return f"|{self.n},{self.l},{self.m}>"


class HydrogenModel(BaseModel):
    """Hydrogen in static fields, with phenomenological line width and truncation."""

    model_config = ConfigDict(frozen=True)

    pair: ParticlePair
    fields: StaticFieldConfig
    gamma: float = Field(0.0, ge=0, description="Line width Gamma (rad/s)")
    n_max: int = Field(20, ge=2, description="Highest principal quantum number kept")
    mass_ratio_limit: bool = Field(True, description="Replace m_delta/M by 1")


class PerturbedGround(BaseModel):
    """
    First-order Stark admixture of the n p states into |1,0,0>.

    coefficients[k] multiplies states[k]; values are in atomic units and
    already include the static field.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    ground: HState = HState(n=1, l=0, m=0)
    states: Tuple[HState, ...]
    coefficients: np.ndarray
    field_au: Vector3

    @field_validator("coefficients", mode="before")
    @classmethod
    def _finite(cls, value):
        array = np.array(value, dtype=np.complex128)
        if not np.all(np.isfinite(array)):
            raise ValueError("perturbed-ground coefficients must be finite")
        array.setflags(write=False)
        return array

    def coefficient(self, state: HState) -> complex:
        return complex(self.coefficients[self.states.index(state)])


class ResponseCouplings(BaseModel):
    """Channel coupling constants in atomic units and quadrupole dressing weights."""

    model_config = ConfigDict(frozen=True)

    k_l: float = Field(..., description="Angular-momentum channel constant")
    k_q: float = Field(..., description="Quadrupole channel constant")
    ket_weight: float = Field(1.0, description="Weight of the ket-dressed quadrupole block")
    bra_weight: float = Field(1.0, description="Weight of the bra-dressed quadrupole block")


class DenseBasis(BaseModel):
    """Finite basis with explicit operator matrices (atomic units)."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kind: Literal["hydrogen", "fock"]
    labels: List[Union[HState, Tuple[int, int, int]]]
    energies: np.ndarray
    x: np.ndarray
    l: np.ndarray
    q: np.ndarray
    ground_index: int = 0

    @model_validator(mode="after")
    def _check_hermitian(self):
        size = len(self.labels)
        if self.energies.shape != (size,):
            raise ValueError("energy vector does not match the basis size")
        for name, operator in (("x", self.x), ("l", self.l), ("q", self.q)):
            matrices = operator.reshape(-1, size, size)
            error = np.max(np.abs(matrices - np.conj(np.swapaxes(matrices, -1, -2))))
            if error > 1e-12:
                raise ValueError(f"operator {name} is not Hermitian (max error {error:.3e})")
        return self

    @property
    def size(self) -> int:
        return len(self.labels)


class SweepConfig(BaseModel):
    """Frequency sweep request."""

    model_config = ConfigDict(frozen=True)

    model: Literal["ho", "hydrogen"] = "hydrogen"
    omega_min: float = Field(1e12, ge=0, description="Lowest frequency (rad/s)")
    omega_max: float = Field(1e20, gt=0, description="Highest frequency (rad/s)")
    points: int = Field(400, ge=2)
    spacing: Literal["log", "linear"] = "log"
    fields: StaticFieldConfig = StaticFieldConfig(E0=(1e5, 0.0, 0.0), B0=(0.0, 10.0, 0.0))
    omega0: Optional[float] = Field(None, gt=0, description="Trap frequency (rad/s), oscillator only")
    gamma: float = Field(1e8, ge=0, description="Line width (rad/s), hydrogen only")
    n_max: int = Field(20, ge=2)
    m1: Optional[float] = Field(None, gt=0, description="Mass of particle 1 (kg)")
    m2: Optional[float] = Field(None, gt=0, description="Mass of particle 2 (kg)")
    volume_scale: float = Field(1.0, gt=0, description="Multiplier on the oscillator reference volume")
    out: Optional[str] = None
    svg: Optional[str] = None
    svg_quantity: Literal["re", "im", "abs"] = "re"
    axis: Literal["rad_s", "hz"] = "rad_s"
    workers: int = Field(1, ge=1)

    @model_validator(mode="after")
    def _check_grid(self):
        if not self.omega_min < self.omega_max:
            raise ValueError("omega_min must be smaller than omega_max")
        if self.spacing == "log" and self.omega_min <= 0:
            raise ValueError("log spacing needs omega_min > 0")
        if self.model == "ho" and self.omega0 is None:
            raise ValueError("the oscillator model needs omega0")
        return self


class SweepResult(BaseModel):
    """Tensors along a frequency grid, sorted by frequency."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    omega: np.ndarray
    tensors: np.ndarray
    chi12_dimless: np.ndarray
    axis: Literal["rad_s", "hz"] = "rad_s"

    @model_validator(mode="after")
    def _check_rows(self):
        if self.tensors.shape != (len(self.omega), 3, 3):
            raise ValueError("tensor stack does not match the frequency grid")
        if np.any(np.diff(self.omega) <= 0):
            raise ValueError("sweep rows must be strictly increasing in omega")
        return self

    @property
    def points(self) -> int:
        return len(self.omega)

    def to_frame(self) -> pd.DataFrame:
        """One row per frequency with re/im column pairs."""
        omega_column = self.omega / (2.0 * np.pi) if self.axis == "hz" else self.omega
        data = {"omega": omega_column}
        for i in range(3):
            for j in range(3):
                data[f"re_chi_{i + 1}{j + 1}"] = self.tensors[:, i, j].real
                data[f"im_chi_{i + 1}{j + 1}"] = self.tensors[:, i, j].imag
        data["re_chi12_dimless"] = self.chi12_dimless.real
        data["im_chi12_dimless"] = self.chi12_dimless.imag
        return pd.DataFrame(data)


class CheckResult(BaseModel):
    """Outcome of one oracle comparison."""

    name: str
    family: str
    max_rel_error: float
    tolerance: float
    passed: bool
