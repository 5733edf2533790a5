"""Two-qubit density matrices, analyzer settings, and the measured EPR
probabilities obtained from them by Pauli-operator traces.

A measurement direction n defines the dichotomic observable sigma.n with
eigenvalues +-1; the probability of outcome +1 is tr(rho * Pi) with
Pi = (I + sigma.n)/2 on the relevant qubit, identity on the other.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import UsageError, ValidationError
from .experiments import ExperimentalProbs

HERMITICITY_ATOL = 1e-9
TRACE_ATOL = 1e-9
PSD_ATOL = 1e-9
NORM_ATOL = 1e-9
PROB_ATOL = 1e-9

_I2 = np.eye(2, dtype=complex)
_PAULI = (
    np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
)

Vec3 = tuple[float, float, float]


class Particle(enum.Enum):
    FIRST = "first"
    SECOND = "second"


def _as_unit_vector(name: str, direction) -> Vec3:
    vec = tuple(float(c) for c in direction)
    if len(vec) != 3:
        raise ValidationError(f"{name} must have 3 components, got {len(vec)}")
    norm = math.sqrt(sum(c * c for c in vec))
    if abs(norm - 1.0) > NORM_ATOL:
        raise ValidationError(f"{name} has norm {norm!r}, expected a unit vector")
    return vec


@dataclass(frozen=True)
class Observable:
    """A spin observable sigma.n acting on one of the two qubits."""

    particle: Particle
    direction: Vec3

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "direction", _as_unit_vector("observable direction", self.direction)
        )


@dataclass(frozen=True)
class AnalyzerSettings:
    """The four measurement directions n_A, n_A', n_B, n_B'."""

    n_a: Vec3
    n_ap: Vec3
    n_b: Vec3
    n_bp: Vec3

    def __post_init__(self) -> None:
        labels = {"n_a": "n_A", "n_ap": "n_A'", "n_b": "n_B", "n_bp": "n_B'"}
        for name, label in labels.items():
            object.__setattr__(self, name, _as_unit_vector(label, getattr(self, name)))

    def observables(self) -> tuple[Observable, Observable, Observable, Observable]:
        return (
            Observable(Particle.FIRST, self.n_a),
            Observable(Particle.FIRST, self.n_ap),
            Observable(Particle.SECOND, self.n_b),
            Observable(Particle.SECOND, self.n_bp),
        )


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated 4x4 two-qubit density matrix.

    Invariants: Hermitian, unit trace, positive semidefinite.  Positivity is
    checked through the explicit eigenvalues of the Hermitian part
    (numpy.linalg.eigvalsh), requiring min eigenvalue >= -PSD_ATOL.
    """

    matrix: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.shape != (4, 4):
            raise ValidationError(f"density matrix must be 4x4, got shape {mat.shape}")
        herm_defect = np.max(np.abs(mat - mat.conj().T))
        if herm_defect > HERMITICITY_ATOL:
            raise ValidationError(f"density matrix is not Hermitian (defect {herm_defect!r})")
        trace = mat.trace()
        if abs(trace - 1.0) > TRACE_ATOL:
            raise ValidationError(f"density matrix trace is {trace!r}, expected 1")
        min_eig = float(np.linalg.eigvalsh(mat).min())
        if min_eig < -PSD_ATOL:
            raise ValidationError(
                f"density matrix is not positive semidefinite (min eigenvalue {min_eig!r})"
            )
        mat = mat.copy()
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)


def singlet() -> DensityMatrix:
    """The maximally entangled state (|01> - |10>)/sqrt(2); <AB> = -n_A.n_B."""
    ket = np.array([0.0, 1.0, -1.0, 0.0], dtype=complex) / math.sqrt(2.0)
    return DensityMatrix(np.outer(ket, ket.conj()))


def ket_state(bits: str) -> DensityMatrix:
    """Computational-basis product state |b1 b2><b1 b2| for bits in {00,01,10,11}."""
    if bits not in ("00", "01", "10", "11"):
        raise ValidationError(f"unsupported basis ket {bits!r}, expected two bits")
    ket = np.zeros(4, dtype=complex)
    ket[int(bits, 2)] = 1.0
    return DensityMatrix(np.outer(ket, ket.conj()))


def ket00() -> DensityMatrix:
    return ket_state("00")


def maximally_mixed() -> DensityMatrix:
    return DensityMatrix(np.eye(4, dtype=complex) / 4.0)


def werner(p: float) -> DensityMatrix:
    """Werner mixture p * singlet + (1-p) * I/4; violates CHSH iff p > 1/sqrt(2)."""
    return DensityMatrix(p * singlet().matrix + (1.0 - p) * np.eye(4, dtype=complex) / 4.0)


def chsh_optimal_settings() -> AnalyzerSettings:
    """Settings maximizing the CHSH combination for the singlet (value 2*sqrt(2))."""
    s = 1.0 / math.sqrt(2.0)
    return AnalyzerSettings(
        n_a=(0.0, 0.0, 1.0),
        n_ap=(1.0, 0.0, 0.0),
        n_b=(s, 0.0, s),
        n_bp=(-s, 0.0, s),
    )


def _sigma_dot(direction: Vec3) -> np.ndarray:
    return sum(c * pauli for c, pauli in zip(direction, _PAULI))


def observable_matrix(obs: Observable) -> np.ndarray:
    """4x4 matrix of sigma.n on the observable's qubit, identity on the other."""
    local = _sigma_dot(obs.direction)
    if obs.particle is Particle.FIRST:
        return np.kron(local, _I2)
    return np.kron(_I2, local)


def _projector_plus(obs: Observable) -> np.ndarray:
    local = (_I2 + _sigma_dot(obs.direction)) / 2.0
    if obs.particle is Particle.FIRST:
        return np.kron(local, _I2)
    return np.kron(_I2, local)


def _real_trace(rho: DensityMatrix, operator: np.ndarray, what: str) -> float:
    value = np.trace(rho.matrix @ operator)
    if abs(value.imag) > PROB_ATOL:
        raise ValidationError(f"{what} has imaginary part {value.imag!r}")
    return float(value.real)


def _clamp(value: float, lo: float, hi: float, what: str) -> float:
    if value < lo - PROB_ATOL or value > hi + PROB_ATOL:
        raise ValidationError(f"{what} = {value!r} is outside [{lo}, {hi}]")
    return min(max(value, lo), hi)


def _require_pair(obs_a: Observable, obs_b: Observable) -> None:
    if obs_a.particle is not Particle.FIRST or obs_b.particle is not Particle.SECOND:
        raise UsageError(
            "pair operations need the first observable on particle one and the "
            f"second on particle two, got ({obs_a.particle.value}, {obs_b.particle.value})"
        )


def correlation(rho: DensityMatrix, obs_a: Observable, obs_b: Observable) -> float:
    """<AB> = tr(rho (sigma.n_A x sigma.n_B)), clamped into [-1, 1]."""
    _require_pair(obs_a, obs_b)
    value = _real_trace(
        rho, observable_matrix(obs_a) @ observable_matrix(obs_b), "correlation trace"
    )
    return _clamp(value, -1.0, 1.0, "correlation")


def single_prob(rho: DensityMatrix, obs: Observable) -> float:
    """P(outcome +1) = tr(rho Pi+) for one observable."""
    value = _real_trace(rho, _projector_plus(obs), "single probability trace")
    return _clamp(value, 0.0, 1.0, "single probability")


def double_prob(rho: DensityMatrix, obs_a: Observable, obs_b: Observable) -> float:
    """P(both outcomes +1) = tr(rho Pi+_A Pi+_B)."""
    _require_pair(obs_a, obs_b)
    value = _real_trace(
        rho, _projector_plus(obs_a) @ _projector_plus(obs_b), "double probability trace"
    )
    return _clamp(value, 0.0, 1.0, "double probability")


def experimental_probs(rho: DensityMatrix, settings: AnalyzerSettings) -> ExperimentalProbs:
    """All eight independent measured probabilities of the four EPR experiments."""
    obs_a, obs_ap, obs_b, obs_bp = settings.observables()
    return ExperimentalProbs(
        p_a=single_prob(rho, obs_a),
        p_ap=single_prob(rho, obs_ap),
        p_b=single_prob(rho, obs_b),
        p_bp=single_prob(rho, obs_bp),
        p_ab=double_prob(rho, obs_a, obs_b),
        p_abp=double_prob(rho, obs_a, obs_bp),
        p_apb=double_prob(rho, obs_ap, obs_b),
        p_apbp=double_prob(rho, obs_ap, obs_bp),
    )
