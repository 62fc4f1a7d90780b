"""Two-dimensional polarization algebra.

Jones vectors, 2x2 density matrices, the Stokes / Poincare-sphere view,
and the unitaries of the elements used in the interferometer (half- and
quarter-wave plates, optical-activity rotators).

Conventions, fixed here and used everywhere else in the package:

* Basis order is (H, V).  A linear polarization at angle ``a`` (measured
  from horizontal) is ``(cos a, sin a)``, so ``|V>`` sits at 90 degrees.
* Stokes components are ``s1 = Tr(rho sz)``, ``s2 = Tr(rho sx)``,
  ``s3 = Tr(rho sy)``: ``s1 = +1`` is H, ``s2 = +1`` is +45 degree
  linear and ``s3 = +1`` is right circular, ``(1, i)/sqrt(2)``.
* Angles are radians.  Degrees only appear at the CLI boundary.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

ATOL = 1e-12

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
# Pauli matrices in Stokes order (s1, s2, s3)
STOKES_PAULIS = (SIGMA_Z, SIGMA_X, SIGMA_Y)
IDENTITY = np.eye(2, dtype=complex)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.flags.writeable = False
    return a


def pol_vector(h: complex, v: complex) -> np.ndarray:
    """Normalized Jones vector with H and V amplitudes ``h`` and ``v``."""
    vec = np.array([h, v], dtype=complex)
    norm = np.linalg.norm(vec)
    if norm == 0:
        raise ValueError("zero Jones vector")
    return _frozen(vec / norm)


def linear(angle: float) -> np.ndarray:
    """Linear polarization at ``angle`` radians from horizontal."""
    return pol_vector(np.cos(angle), np.sin(angle))


H = pol_vector(1, 0)
V = pol_vector(0, 1)
D = pol_vector(1, 1)
A = pol_vector(1, -1)
R = pol_vector(1, 1j)
L = pol_vector(1, -1j)


def orthogonal(psi: np.ndarray) -> np.ndarray:
    """The state orthogonal to ``psi``, ``(-conj(v), conj(h))``."""
    h, v = np.asarray(psi, dtype=complex)
    return pol_vector(-np.conj(v), np.conj(h))


def bloch_to_vector(n) -> np.ndarray:
    """Pure Jones vector whose Stokes vector is the unit vector ``n``."""
    s1, s2, s3 = np.asarray(n, dtype=float) / np.linalg.norm(n)
    # polar angle measured from the H pole, azimuth in the (s2, s3) plane
    theta = np.arccos(np.clip(s1, -1.0, 1.0))
    phi = np.arctan2(s3, s2)
    return pol_vector(np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2))


def vector_to_bloch(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return to_stokes(PolState.pure(psi))[1:]


@dataclass(frozen=True, eq=False)
class PolState:
    """Polarization density matrix (2x2, Hermitian, unit trace, PSD)."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError(f"density matrix must be 2x2, got {m.shape}")
        if not np.allclose(m, m.conj().T, atol=ATOL):
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(m) - 1) > ATOL:
            raise ValueError(f"density matrix trace {np.trace(m).real:.3g} != 1")
        if np.linalg.eigvalsh(m).min() < -ATOL:
            raise ValueError("density matrix has a negative eigenvalue")
        object.__setattr__(self, "matrix", _frozen(m))

    @classmethod
    def pure(cls, psi) -> PolState:
        psi = np.asarray(psi, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()))

    @classmethod
    def mixed(cls) -> PolState:
        return cls(IDENTITY / 2)

    @property
    def stokes(self) -> np.ndarray:
        return to_stokes(self)

    @property
    def degree_of_polarization(self) -> float:
        return fractional_purity(self)

    def transformed(self, u) -> PolState:
        """``U rho U^dagger`` for a unitary (array or :class:`ElementUnitary`)."""
        u = np.asarray(getattr(u, "matrix", u))
        m = u @ self.matrix @ u.conj().T
        return PolState((m + m.conj().T) / 2)

    def __repr__(self) -> str:
        s = ", ".join(f"{x:+.4f}" for x in to_stokes(self)[1:])
        return f"PolState(stokes=[{s}])"


def to_stokes(rho: PolState) -> np.ndarray:
    """Normalized Stokes vector ``(1, s1, s2, s3)`` of ``rho``."""
    m = rho.matrix
    return np.array([1.0] + [np.trace(m @ p).real for p in STOKES_PAULIS])


def from_stokes(s) -> PolState:
    """Density matrix for Stokes vector ``s``.

    Accepts either ``(s1, s2, s3)`` or ``(s0, s1, s2, s3)``; a 4-vector is
    normalized by ``s0`` first.  Raises ``ValueError`` for Bloch length
    above 1 (beyond a 1e-9 tolerance).
    """
    s = np.asarray(s, dtype=float)
    if s.shape == (4,):
        if s[0] <= 0:
            raise ValueError("s0 must be positive")
        s = s[1:] / s[0]
    elif s.shape != (3,):
        raise ValueError(f"expected 3 or 4 Stokes components, got {s.shape}")
    r = np.linalg.norm(s)
    if r > 1 + 1e-9:
        raise ValueError(f"unphysical Stokes vector: length {r:.6g} > 1")
    if r > 1:
        s = s / r
    m = IDENTITY.copy()
    for sk, p in zip(s, STOKES_PAULIS):
        m = m + sk * p
    return PolState(m / 2)


def fractional_purity(rho: PolState) -> float:
    """Weight ``s`` of the pure part in ``s |psi><psi| + (1 - s) I/2``.

    This is the Bloch-vector length, i.e. the degree of polarization.
    """
    return float(np.linalg.norm(to_stokes(rho)[1:]))


def trace_purity(rho: PolState) -> float:
    """``Tr(rho^2)``, equal to ``(1 + s^2) / 2``."""
    return float(np.trace(rho.matrix @ rho.matrix).real)


def partial_mix(psi, s: float) -> PolState:
    """``s |psi><psi| + (1 - s) I/2``."""
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"fractional purity must lie in [0, 1], got {s}")
    pure = PolState.pure(psi).matrix
    return PolState(s * pure + (1 - s) * IDENTITY / 2)


def tunable_source(theta_in: float) -> PolState:
    """State from the phase-randomized two-PBS source.

    Linear light at ``theta_in`` is split into H and V arms whose relative
    phase fluctuates, leaving ``cos^2 |H><H| + sin^2 |V><V|``.
    """
    c2 = np.cos(theta_in) ** 2
    return PolState(np.diag([c2, 1.0 - c2]).astype(complex))


def tunable_source_angle(v_to_h: float) -> float:
    """Input angle giving a vertical:horizontal intensity ratio ``v_to_h``."""
    if v_to_h < 0:
        raise ValueError("intensity ratio must be nonnegative")
    return float(np.arctan(np.sqrt(v_to_h)))


ElementKind = Literal["HWP", "QWP", "ROTATOR", "CUSTOM"]


@dataclass(frozen=True, eq=False)
class ElementUnitary:
    """2x2 unitary of a polarization element."""

    matrix: np.ndarray
    kind: ElementKind = "CUSTOM"
    angle: float = 0.0

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError("element matrix must be 2x2")
        if not np.allclose(m @ m.conj().T, IDENTITY, atol=1e-9):
            raise ValueError("element matrix is not unitary")
        object.__setattr__(self, "matrix", _frozen(m))

    def __matmul__(self, other):
        if isinstance(other, ElementUnitary):
            return ElementUnitary(self.matrix @ other.matrix)
        return self.matrix @ np.asarray(other)

    @property
    def dagger(self) -> ElementUnitary:
        return ElementUnitary(self.matrix.conj().T)

    def apply(self, psi) -> np.ndarray:
        return self.matrix @ np.asarray(psi, dtype=complex)


def _rot(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]], dtype=complex)


def identity() -> ElementUnitary:
    return ElementUnitary(IDENTITY, "CUSTOM", 0.0)


def hwp(theta: float) -> ElementUnitary:
    """Half-wave plate with its fast axis at ``theta``.

    Reflects linear polarization about the axis: input at ``a`` leaves at
    ``2 theta - a``.  The matrix is real, symmetric and traceless.
    """
    c, s = np.cos(2 * theta), np.sin(2 * theta)
    return ElementUnitary(np.array([[c, s], [s, -c]]), "HWP", float(theta))


def qwp(theta: float) -> ElementUnitary:
    """Quarter-wave plate with its fast axis at ``theta``."""
    m = _rot(theta) @ np.diag([1, 1j]) @ _rot(-theta)
    return ElementUnitary(m, "QWP", float(theta))


def rotator(delta: float) -> ElementUnitary:
    """Optical-activity rotator turning linear polarization by ``delta``.

    Eigenmodes are the two circular states.
    """
    return ElementUnitary(_rot(delta), "ROTATOR", float(delta))


def same_ray(a, b, atol: float = 1e-9) -> bool:
    """True when Jones vectors ``a`` and ``b`` agree up to a global phase."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    a = a / np.linalg.norm(a)
    b = b / np.linalg.norm(b)
    return abs(abs(np.vdot(a, b)) - 1.0) < atol


def wave_plates_for(target) -> tuple[float, float]:
    """QWP and HWP angles ``(q, h)`` with ``hwp(h) qwp(q) |H> = target`` up to phase.

    A QWP at ``q`` turns ``|H>`` into an ellipse with its major axis at
    ``q`` and ellipticity angle ``q``; the HWP then reflects the axis to
    the target azimuth without touching the ellipticity magnitude.
    """
    s1, s2, s3 = vector_to_bloch(target)
    q = 0.5 * np.arcsin(np.clip(s3, -1.0, 1.0))
    azimuth = 0.5 * np.arctan2(s2, s1)
    h = (azimuth + q) / 2
    return float(q), float(h)
