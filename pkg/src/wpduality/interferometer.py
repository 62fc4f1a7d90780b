"""Joint path x polarization state of the compressed Mach-Zehnder.

The photon enters, is split into path 1 (weight ``w1``) and path 2
(weight ``w2 = 1 - w1``), each path applies its polarization element, and
the paths recombine on a 50/50 beam splitter.  The relative phase ``phi``
between the paths is kept symbolic and applied at readout, since scanning
the piezo in path 2 is exactly a scan of ``phi``.

The 4x4 joint density matrix is stored as its three independent path
blocks ``rho11``, ``rho12`` and ``rho22``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .polarization import ElementUnitary, PolState, identity, rotator

DetectorPort = Literal[1, 2]

# Intrinsic visibility of the empty interferometer and the residual
# visibility left at the crossed (theta_HWP = 45 deg) setting.
INTRINSIC_VISIBILITY = 0.98
RESIDUAL_VISIBILITY = 0.044


@dataclass(frozen=True)
class InterferometerConfig:
    w1: float = 0.5
    path1: ElementUnitary = field(default_factory=identity)
    path2: ElementUnitary = field(default_factory=identity)
    v0: float = 1.0
    residual1: ElementUnitary | None = None
    residual2: ElementUnitary | None = None

    def __post_init__(self):
        if not 0.0 < self.w1 < 1.0:
            raise ValueError(f"entry reflectivity w1 must lie in (0, 1), got {self.w1}")
        if not 0.0 <= self.v0 <= 1.0:
            raise ValueError(f"intrinsic visibility v0 must lie in [0, 1], got {self.v0}")

    @property
    def w2(self) -> float:
        return 1.0 - self.w1

    @property
    def u1(self) -> np.ndarray:
        """Total polarization unitary of path 1 (element, then residual)."""
        u = self.path1.matrix
        if self.residual1 is not None:
            u = self.residual1.matrix @ u
        return u

    @property
    def u2(self) -> np.ndarray:
        u = self.path2.matrix
        if self.residual2 is not None:
            u = self.residual2.matrix @ u
        return u


def imperfect_config(
    path1: ElementUnitary,
    v0: float = INTRINSIC_VISIBILITY,
    residual_visibility: float = RESIDUAL_VISIBILITY,
    w1: float = 0.5,
) -> InterferometerConfig:
    """Config with the intrinsic-visibility loss and a residual path-1 rotation.

    The residual rotation is chosen so that two nominally orthogonal
    linear polarizations overlap enough to leave ``residual_visibility``
    at the crossed setting: ``v0 * sin(eps) = residual_visibility``.
    """
    eps = float(np.arcsin(residual_visibility / v0))
    return InterferometerConfig(w1=w1, path1=path1, v0=v0, residual1=rotator(eps))


@dataclass(frozen=True, eq=False)
class JointState:
    rho11: np.ndarray
    rho12: np.ndarray
    rho22: np.ndarray

    @property
    def w1(self) -> float:
        return float(np.trace(self.rho11).real)

    @property
    def w2(self) -> float:
        return float(np.trace(self.rho22).real)

    @property
    def coherence(self) -> complex:
        """``Tr rho12``, the path coherence seen without an analyzer."""
        return complex(np.trace(self.rho12))

    @property
    def matrix(self) -> np.ndarray:
        """Assembled 4x4 density matrix, path index major: ``|p> (x) |pol>``."""
        return np.block([[self.rho11, self.rho12], [self.rho12.conj().T, self.rho22]])


def build_joint(state: PolState, config: InterferometerConfig) -> JointState:
    """Joint state after the two paths, before recombination."""
    rho = state.matrix
    u1, u2 = config.u1, config.u2
    w1, w2 = config.w1, config.w2
    rho11 = w1 * u1 @ rho @ u1.conj().T
    rho22 = w2 * u2 @ rho @ u2.conj().T
    rho12 = config.v0 * np.sqrt(w1 * w2) * u1 @ rho @ u2.conj().T
    return JointState(rho11, rho12, rho22)


def detector_intensity(joint: JointState, phi, port: DetectorPort = 1):
    """Intensity at an output port as a function of relative phase ``phi``.

    Port 1 is ``w1 + w2 + 2 Re(exp(i phi) Tr rho12)``; port 2 carries the
    complementary fringe so the two always sum to ``2 (w1 + w2)``.
    """
    phi = np.asarray(phi, dtype=float)
    mean = joint.w1 + joint.w2
    swing = 2 * np.real(np.exp(1j * phi) * joint.coherence)
    out = mean + swing if port == 1 else mean - swing
    return np.maximum(out, 0.0)


@dataclass(frozen=True)
class FringeProfile:
    """``I(phi) = mean + amplitude * cos(phi - phase)``."""

    mean: float
    amplitude: float
    phase: float

    @property
    def visibility(self) -> float:
        if self.mean == 0:
            return 0.0
        return min(self.amplitude / self.mean, 1.0)

    def __call__(self, phi):
        return self.mean + self.amplitude * np.cos(np.asarray(phi) - self.phase)


def fringe(joint: JointState, port: DetectorPort = 1) -> FringeProfile:
    c = joint.coherence
    phase = -np.angle(c) if port == 1 else np.pi - np.angle(c)
    return FringeProfile(joint.w1 + joint.w2, 2 * abs(c), float(np.mod(phase, 2 * np.pi)))


def visibility(joint: JointState) -> float:
    return fringe(joint).visibility


def predictability(config: InterferometerConfig) -> float:
    """A-priori path knowledge ``|w1 - w2|`` from the entry splitter alone."""
    return abs(config.w1 - config.w2)
