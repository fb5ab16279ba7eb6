"""Density-matrix primitives for a single polarization qubit.

States are stored in the {|H>, |V>} basis. All functions are pure and
return plain floats.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

PSD_TOL = 1e-10
HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
EIG_CLAMP = 1e-12

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY = np.eye(2, dtype=complex)


class StateValidationError(ValueError):
    """Raised when a matrix is not a valid density matrix."""


def _validated(matrix) -> np.ndarray:
    m = np.array(matrix, dtype=complex)
    if m.shape != (2, 2):
        raise StateValidationError(f"expected a 2x2 matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise StateValidationError("matrix contains non-finite entries")
    if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
        raise StateValidationError("matrix is not Hermitian")
    m = 0.5 * (m + m.conj().T)
    tr = np.trace(m).real
    if abs(tr - 1.0) > TRACE_TOL:
        raise StateValidationError(f"trace is {tr!r}, expected 1")
    evals, evecs = np.linalg.eigh(m)
    if evals[0] < -PSD_TOL:
        raise StateValidationError(f"negative eigenvalue {evals[0]:.3e}")
    if evals[0] < 0.0:
        evals = np.clip(evals, 0.0, None)
        m = (evecs * evals) @ evecs.conj().T
    return m / np.trace(m).real


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues (ascending) and the matching orthonormal eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns


@dataclass(frozen=True, eq=False)
class QubitState:
    """A validated 2x2 density matrix in the {H, V} basis.

    Eigenvalues in (-1e-10, 0) are clamped to zero on construction;
    anything more negative is rejected.
    """

    matrix: np.ndarray
    basis: tuple[str, str] = ("H", "V")

    def __post_init__(self):
        m = _validated(self.matrix)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_bloch(cls, x: float, y: float, z: float) -> "QubitState":
        return cls(0.5 * (IDENTITY + x * PAULI_X + y * PAULI_Y + z * PAULI_Z))

    @classmethod
    def from_ket(cls, ket) -> "QubitState":
        v = np.asarray(ket, dtype=complex)
        v = v / np.linalg.norm(v)
        return cls(np.outer(v, v.conj()))

    @classmethod
    def horizontal(cls) -> "QubitState":
        return cls.from_ket([1, 0])

    @classmethod
    def vertical(cls) -> "QubitState":
        return cls.from_ket([0, 1])

    @classmethod
    def plus(cls) -> "QubitState":
        return cls.from_ket([1, 1])

    @classmethod
    def minus(cls) -> "QubitState":
        return cls.from_ket([1, -1])

    @classmethod
    def maximally_mixed(cls) -> "QubitState":
        return cls(0.5 * IDENTITY)

    @property
    def bloch(self) -> np.ndarray:
        m = self.matrix
        return np.array([2 * m[0, 1].real, -2 * m[0, 1].imag, (m[0, 0] - m[1, 1]).real])

    @property
    def coherence(self) -> complex:
        """The off-diagonal element rho_HV."""
        return complex(self.matrix[0, 1])

    def spectral(self) -> SpectralDecomposition:
        evals, evecs = np.linalg.eigh(self.matrix)
        evals = np.clip(evals, 0.0, None)
        return SpectralDecomposition(evals / evals.sum(), evecs)

    def allclose(self, other: "QubitState", atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.matrix, other.matrix, rtol=0.0, atol=atol))

    def __repr__(self):
        x, y, z = self.bloch
        return f"QubitState(bloch=({x:.6g}, {y:.6g}, {z:.6g}))"


def _as_matrix(state) -> np.ndarray:
    if isinstance(state, QubitState):
        return state.matrix
    return np.asarray(state, dtype=complex)


def matrix_power_psd(m: np.ndarray, exponent: float) -> np.ndarray:
    """Fractional power of a PSD matrix, taken on its support (0**x = 0)."""
    evals, evecs = np.linalg.eigh(0.5 * (m + m.conj().T))
    powered = np.where(evals > EIG_CLAMP, np.clip(evals, EIG_CLAMP, None) ** exponent, 0.0)
    return (evecs * powered) @ evecs.conj().T


def matrix_alpha_fidelity(a: np.ndarray, b: np.ndarray, alpha: float) -> float:
    """alpha-fidelity tr[(b^s a b^s)^alpha], s = (1-alpha)/(2 alpha), any dimension."""
    if not 0.5 <= alpha < 1.0:
        raise ValueError(f"alpha must lie in [1/2, 1), got {alpha!r}")
    s = (1.0 - alpha) / (2.0 * alpha)
    bs = matrix_power_psd(b, s)
    inner = bs @ a @ bs
    evals = np.linalg.eigvalsh(0.5 * (inner + inner.conj().T))
    evals = np.clip(evals, 0.0, None)
    return float(np.sum(evals**alpha))


def matrix_trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh(a - b))))


def trace_distance(a: QubitState, b: QubitState) -> float:
    """Half the trace norm of ``a - b``."""
    return min(1.0, matrix_trace_distance(_as_matrix(a), _as_matrix(b)))


def alpha_fidelity(a: QubitState, b: QubitState, alpha: float) -> float:
    """alpha-fidelity of two qubit states for alpha in [1/2, 1).

    At alpha = 1/2 this is the (root) fidelity tr sqrt(sqrt(b) a sqrt(b)).
    States with orthogonal supports give 0.
    """
    return min(1.0, matrix_alpha_fidelity(_as_matrix(a), _as_matrix(b), alpha))


def fidelity(a: QubitState, b: QubitState) -> float:
    """Root fidelity tr|sqrt(a) sqrt(b)|, i.e. the alpha = 1/2 case (not squared)."""
    return alpha_fidelity(a, b, 0.5)


def purity(a: QubitState) -> float:
    m = _as_matrix(a)
    return float(np.real(np.trace(m @ m)))


def von_neumann_entropy(a: QubitState) -> float:
    """Entropy in nats; zero eigenvalues contribute nothing."""
    evals = np.linalg.eigvalsh(_as_matrix(a))
    evals = evals[evals > EIG_CLAMP]
    return float(-np.sum(evals * np.log(evals)))


def random_state(rng: np.random.Generator, pure: bool = False) -> QubitState:
    """Draw a state: uniform on the Bloch sphere (pure) or in the ball."""
    v = rng.normal(size=3)
    v /= np.linalg.norm(v)
    r = 1.0 if pure else rng.uniform() ** (1.0 / 3.0)
    return QubitState.from_bloch(*(r * v))


def random_unitary(rng: np.random.Generator, dim: int = 2) -> np.ndarray:
    """Haar-random unitary via QR of a complex Ginibre matrix."""
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))
