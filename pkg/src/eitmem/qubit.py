"""State algebra for a single qubit encoded in the {|G>, |R>} OAM basis.

|G> is the Gaussian (l=0) mode and |R> the vortex (l=1) mode.  Basis order
is (|G>, |R>) everywhere.  Pauli convention: sigma_3 = diag(+1, -1), so the
third Stokes axis carries the G/R population imbalance; sigma_1 has the
equal superpositions |H>, |V> as +/-1 eigenstates and sigma_2 the circular
combinations |D>, |A>.  All states are compared up to a global phase, with
the gauge "amp_g real and >= 0" (falling back to amp_r when amp_g vanishes).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

NORM_ATOL = 1e-12

IDENTITY = np.eye(2, dtype=complex)
SIGMA_1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_3 = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SIGMA_1, SIGMA_2, SIGMA_3)


@dataclass(frozen=True)
class QubitKet:
    """Normalized two-component state over (|G>, |R>)."""

    amp_g: complex
    amp_r: complex

    def __post_init__(self):
        norm_sq = abs(self.amp_g) ** 2 + abs(self.amp_r) ** 2
        if abs(norm_sq - 1.0) > 1e-9:
            raise ValueError(f"ket not normalized: |amp|^2 = {norm_sq!r}")

    def vector(self) -> np.ndarray:
        return np.array([self.amp_g, self.amp_r], dtype=complex)

    def overlap(self, other: "QubitKet") -> complex:
        """Inner product <self|other>."""
        return complex(np.vdot(self.vector(), other.vector()))

    def canonical(self) -> "QubitKet":
        """Gauge-fix the global phase: amp_g real >= 0 (amp_r if amp_g = 0)."""
        ref = self.amp_g if abs(self.amp_g) > 1e-14 else self.amp_r
        phase = ref / abs(ref)
        return QubitKet(self.amp_g / phase, self.amp_r / phase)

    def isclose(self, other: "QubitKet", atol: float = 1e-9) -> bool:
        """Equality up to global phase."""
        return abs(abs(self.overlap(other)) - 1.0) <= atol

    def density(self) -> "DensityMatrix2":
        v = self.vector()
        return DensityMatrix2(np.outer(v, v.conj()))


class DensityMatrix2:
    """2x2 Hermitian, unit-trace, positive-semidefinite matrix over (|G>, |R>)."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        m = np.asarray(entries, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError(f"expected 2x2 matrix, got shape {m.shape}")
        if not np.allclose(m, m.conj().T, atol=1e-9):
            raise ValueError("density matrix must be Hermitian")
        tr = np.trace(m).real
        if abs(tr - 1.0) > 1e-9:
            raise ValueError(f"density matrix must have unit trace, got {tr!r}")
        eigvals = np.linalg.eigvalsh(m)
        if eigvals.min() < -1e-9:
            raise ValueError(
                f"density matrix not positive semidefinite (min eigenvalue {eigvals.min():.3e}); "
                "project_physical() can repair noisy input"
            )
        self.entries = m

    def __repr__(self):
        return f"DensityMatrix2({self.entries.tolist()!r})"

    def eigvals(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.entries)

    def purity(self) -> float:
        return float(np.trace(self.entries @ self.entries).real)


@dataclass(frozen=True)
class StokesVector:
    """Pauli expectation values (S1, S2, S3); |S| <= 1 for physical states."""

    s1: float
    s2: float
    s3: float

    def as_array(self) -> np.ndarray:
        return np.array([self.s1, self.s2, self.s3], dtype=float)

    def norm(self) -> float:
        return float(np.linalg.norm(self.as_array()))


def ket_from_coeffs(alpha: float, beta: float, phi: float) -> QubitKet:
    """Build the superposition alpha|G> + beta e^{i phi}|R>, normalized.

    alpha and beta are nonnegative real weights; phi is the relative phase
    in radians.  Raises ValueError for a zero-norm (or negative) input.
    """
    if alpha < 0 or beta < 0:
        raise ValueError("alpha and beta must be nonnegative")
    norm = np.hypot(alpha, beta)
    if norm == 0:
        raise ValueError("zero-norm input: alpha and beta are both 0")
    return QubitKet(alpha / norm, (beta / norm) * np.exp(1j * phi))


# The six tomography projection states: three mutually unbiased bases
# {G,R}, {H,V}, {D,A}.
G = QubitKet(1.0, 0.0)
R = QubitKet(0.0, 1.0)
H = QubitKet(1 / np.sqrt(2), 1 / np.sqrt(2))
V = QubitKet(1 / np.sqrt(2), -1 / np.sqrt(2))
D = QubitKet(1 / np.sqrt(2), 1j / np.sqrt(2))
A = QubitKet(1 / np.sqrt(2), -1j / np.sqrt(2))

MUB_STATES = {"G": G, "R": R, "H": H, "V": V, "D": D, "A": A}
MUB_PAIRS = (("H", "V"), ("D", "A"), ("G", "R"))
BASIS_LABELS = ("G", "R", "H", "V", "D", "A")


def density_from_stokes(s: StokesVector) -> np.ndarray:
    """rho = (I + S1*sigma1 + S2*sigma2 + S3*sigma3) / 2, as a raw matrix.

    No physicality check: noisy Stokes vectors with |S| > 1 are allowed and
    should be passed through project_physical() afterwards.
    """
    m = IDENTITY.copy()
    for si, sigma in zip((s.s1, s.s2, s.s3), PAULI):
        m = m + si * sigma
    return m / 2.0


def stokes_from_density(rho: DensityMatrix2 | np.ndarray) -> StokesVector:
    """S_i = Tr(rho sigma_i); inverse of density_from_stokes."""
    m = rho.entries if isinstance(rho, DensityMatrix2) else np.asarray(rho, dtype=complex)
    vals = [float(np.trace(m @ sigma).real) for sigma in PAULI]
    return StokesVector(*vals)


def fidelity(rho_a: DensityMatrix2, rho_b: DensityMatrix2) -> float:
    """Uhlmann fidelity of two qubit states.

    Uses the 2x2 closed form Tr(a b) + 2 sqrt(det a det b), which equals
    Tr[sqrt(sqrt(b) a sqrt(b))]^2 for qubits.  Symmetric in its arguments.
    """
    a, b = rho_a.entries, rho_b.entries
    cross = float(np.trace(a @ b).real)
    # determinants of PSD matrices; clamp tiny negatives from roundoff
    det_prod = max(float(np.linalg.det(a).real), 0.0) * max(float(np.linalg.det(b).real), 0.0)
    f = cross + 2.0 * np.sqrt(det_prod)
    return float(min(max(f, 0.0), 1.0))


def project_physical(matrix) -> DensityMatrix2:
    """Repair a noisy Hermitian matrix into a physical density matrix.

    Eigenvalues are clamped to >= 0 and the spectrum renormalized to unit
    trace.  Idempotent; leaves already-physical inputs unchanged.
    """
    m = np.asarray(matrix, dtype=complex)
    if m.shape != (2, 2):
        raise ValueError(f"expected 2x2 matrix, got shape {m.shape}")
    if not np.allclose(m, m.conj().T, atol=1e-9):
        raise ValueError("input must be Hermitian")
    evals, evecs = np.linalg.eigh(m)
    clamped = np.clip(evals, 0.0, None)
    total = clamped.sum()
    if total <= 0:
        raise ValueError("matrix has no positive spectral weight; cannot normalize")
    clamped /= total
    repaired = (evecs * clamped) @ evecs.conj().T
    repaired = (repaired + repaired.conj().T) / 2.0
    return DensityMatrix2(repaired)
