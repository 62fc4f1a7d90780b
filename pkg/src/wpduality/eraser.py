"""Quantum erasure: fringes conditioned on a polarization analysis.

Placing an analyzer ``|a>`` before detector 1 post-selects the photons
whose polarization passed it.  The conditional fringe has mean
``<a|rho11|a> + <a|rho22|a>`` and amplitude ``2 |<a|rho12|a>|``; summing
the fringes for ``a`` and ``a_perp`` gives back the unconditioned one.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .interferometer import DetectorPort, FringeProfile, JointState
from .metrics import AnalyzerSetting
from .polarization import PolState, fractional_purity, vector_to_bloch


class UndefinedVisibilityError(ValueError):
    """The analyzer blocks all light, so no fringe exists to measure."""


def _amp(rho: np.ndarray, a: np.ndarray) -> complex:
    return complex(np.conj(a) @ rho @ a)


def conditional_profile(
    joint: JointState, analyzer: AnalyzerSetting, port: DetectorPort = 1
) -> FringeProfile:
    """Unnormalized fringe of the sub-ensemble passing ``analyzer``."""
    a = analyzer.state
    mean = max(_amp(joint.rho11, a).real + _amp(joint.rho22, a).real, 0.0)
    c = _amp(joint.rho12, a)
    phase = -np.angle(c) if port == 1 else np.pi - np.angle(c)
    return FringeProfile(mean, 2 * abs(c), float(np.mod(phase, 2 * np.pi)))


def conditional_fringe(
    joint: JointState, analyzer: AnalyzerSetting, port: DetectorPort = 1
) -> tuple[float, float]:
    """Visibility and fringe phase after ``analyzer``.

    Raises :class:`UndefinedVisibilityError` when no light passes, which
    is different from a zero visibility.
    """
    prof = conditional_profile(joint, analyzer, port)
    if prof.mean <= 1e-15:
        raise UndefinedVisibilityError("analyzer transmits no light from either path")
    return prof.amplitude / prof.mean, prof.phase


@dataclass(frozen=True)
class EraserCurve:
    """Conditional visibility and phase along a scan.

    ``settings`` holds linear analyzer angles (radians) for a linear scan
    or Bloch vectors for a sphere scan.  Settings that block all light
    carry ``nan``.
    """

    settings: np.ndarray
    visibility: np.ndarray
    phase: np.ndarray

    def minima(self) -> np.ndarray:
        """Settings at local minima of the (periodic) visibility curve."""
        v = self.visibility
        idx = [i for i in range(len(v)) if v[i] <= v[i - 1] and v[i] < v[(i + 1) % len(v)]]
        return self.settings[idx]


def _scan(joint, analyzers, settings, port) -> EraserCurve:
    vis, ph = [], []
    for a in analyzers:
        try:
            v, p = conditional_fringe(joint, a, port)
        except UndefinedVisibilityError:
            v, p = np.nan, np.nan
        vis.append(v)
        ph.append(p)
    return EraserCurve(np.asarray(settings), np.array(vis), np.array(ph))


def eraser_scan(joint: JointState, angles, port: DetectorPort = 1) -> EraserCurve:
    """Conditional fringes for linear analyzers at ``angles`` (radians)."""
    angles = np.asarray(angles, dtype=float)
    return _scan(joint, [AnalyzerSetting.linear(t) for t in angles], angles, port)


def eraser_sphere_scan(joint: JointState, points, port: DetectorPort = 1) -> EraserCurve:
    """Conditional fringes for analyzers at arbitrary Bloch points."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    return _scan(joint, [AnalyzerSetting.from_bloch(n) for n in points], points, port)


def zero_visibility_angles(
    theta_hwp: float, s: float, input_angle: float = np.pi / 2
) -> tuple[float, float]:
    """Linear analyzer angles with no conditional fringe.

    Input ``s |V><V| + (1 - s) I/2`` with a HWP at ``theta_hwp`` in path 1:
    the zeros sit at ``theta_hwp +/- arccos(s cos 2 theta_hwp) / 2``,
    reported modulo 180 degrees.  For a pure part polarized at
    ``input_angle`` instead of vertical, the whole picture is rotated.
    """
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"fractional purity must lie in [0, 1], got {s}")
    shift = input_angle - np.pi / 2
    theta = theta_hwp - shift
    half = 0.5 * np.arccos(np.clip(s * np.cos(2 * theta), -1.0, 1.0))
    return (
        float(np.mod(theta_hwp - half, np.pi)),
        float(np.mod(theta_hwp + half, np.pi)),
    )


@dataclass(frozen=True)
class VisibilityLoci:
    """Two special Poincare points and the great circle between them.

    For a pure input the points have zero conditional visibility and the
    circle has unit visibility; for a completely mixed input it is the
    other way round.
    """

    kind: Literal["pure", "mixed"]
    points: np.ndarray
    normal: np.ndarray
    point_visibility: float
    circle_visibility: float

    def circle(self, n: int = 360) -> np.ndarray:
        """``n`` evenly spaced unit vectors on the great circle."""
        k = self.normal
        seed = np.eye(3)[int(np.argmin(np.abs(k)))]
        e1 = seed - (seed @ k) * k
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(k, e1)
        t = np.arange(n) * 2 * np.pi / n
        return np.cos(t)[:, None] * e1 + np.sin(t)[:, None] * e2


def _loci(joint, kind, points, normal) -> VisibilityLoci:
    # report the visibilities actually reached, which drop below 1 when v0 < 1
    probe = VisibilityLoci(kind, points, normal, 0.0, 0.0)
    pv = float(np.nanmax(eraser_sphere_scan(joint, points).visibility))
    cv = float(np.nanmax(eraser_sphere_scan(joint, probe.circle(8)).visibility))
    return VisibilityLoci(kind, points, normal, pv, cv)


def poincare_loci(
    joint: JointState, kind: Literal["pure", "mixed"], tol: float = 1e-6
) -> VisibilityLoci:
    """Zero- and unit-visibility loci on the Poincare sphere.

    ``kind="pure"``: the analyzers orthogonal to each path's polarization
    see only the other path and give zero visibility; the great circle
    bisecting the chord between them gives unit visibility.

    ``kind="mixed"``: the eigenmodes of the net path-difference unitary
    ``U1 U2^dagger`` (read off ``rho12``, which is proportional to it for
    an unpolarized input) give unit visibility; the great circle midway
    between them has none when that unitary is traceless.
    """
    if joint.w1 <= 0 or joint.w2 <= 0:
        raise ValueError("both paths must carry light")
    s = fractional_purity(PolState(joint.rho11 / joint.w1))
    if kind == "pure":
        if abs(s - 1) > tol:
            raise ValueError(f"kind='pure' but input fractional purity is {s:.6g}")
        p1 = vector_to_bloch(np.linalg.eigh(joint.rho11)[1][:, 1])
        p2 = vector_to_bloch(np.linalg.eigh(joint.rho22)[1][:, 1])
        normal = p1 - p2
        if np.linalg.norm(normal) < tol:
            raise ValueError("paths carry the same polarization; loci are degenerate")
        return _loci(joint, "pure", np.array([-p1, -p2]), normal / np.linalg.norm(normal))
    if kind == "mixed":
        if s > tol:
            raise ValueError(f"kind='mixed' but input fractional purity is {s:.6g}")
        scale = np.sqrt(abs(np.linalg.det(joint.rho12)))
        if scale < 1e-15:
            raise ValueError("paths are incoherent; loci are undefined")
        w = joint.rho12 / scale
        if abs(np.trace(w)) / 2 > 1 - tol:
            raise ValueError("net path unitary is trivial; loci are degenerate")
        _, vecs = np.linalg.eig(w)
        n1, n2 = vector_to_bloch(vecs[:, 0]), vector_to_bloch(vecs[:, 1])
        return _loci(joint, "mixed", np.array([n1, n2]), n1 / np.linalg.norm(n1))
    raise ValueError(f"kind must be 'pure' or 'mixed', got {kind!r}")
