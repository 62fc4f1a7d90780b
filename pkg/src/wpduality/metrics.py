"""Which-way Likelihood, Knowledge and Distinguishability.

Knowledge is read out the way the experiment does it: block one path at a
time, analyze the polarization in a basis ``{lam, lam_perp}``, and bet on
the path that contributes most to whichever detector fired.  The
Distinguishability is the best Knowledge over every analyzer setting and
is found by a coarse sphere grid followed by a local polish.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .interferometer import JointState, visibility
from .polarization import (
    PolState,
    STOKES_PAULIS,
    bloch_to_vector,
    linear,
    orthogonal,
    trace_purity,
    vector_to_bloch,
)


class NoCountsError(ValueError):
    """All four path rates vanish, so no path can be guessed."""


@dataclass(frozen=True, eq=False)
class AnalyzerSetting:
    """Pure analysis state ``|lam>``; detector 2 sees ``|lam_perp>``."""

    state: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.state, dtype=complex)
        object.__setattr__(self, "state", s / np.linalg.norm(s))

    @property
    def perp(self) -> np.ndarray:
        return orthogonal(self.state)

    @property
    def bloch(self) -> np.ndarray:
        return vector_to_bloch(self.state)

    @classmethod
    def linear(cls, angle: float) -> AnalyzerSetting:
        return cls(linear(angle))

    @classmethod
    def from_bloch(cls, n) -> AnalyzerSetting:
        return cls(bloch_to_vector(n))

    def __repr__(self) -> str:
        n = ", ".join(f"{x:+.4f}" for x in self.bloch)
        return f"AnalyzerSetting(bloch=[{n}])"


HV_BASIS = AnalyzerSetting.linear(0.0)


@dataclass(frozen=True)
class PathRates:
    r1: float
    r1_perp: float
    r2: float
    r2_perp: float

    def __post_init__(self):
        if min(self.r1, self.r1_perp, self.r2, self.r2_perp) < 0:
            raise ValueError("path rates must be nonnegative")

    @property
    def total(self) -> float:
        # grouped per analyzer port so swapping lambda and lambda_perp is exact
        return (self.r1 + self.r2) + (self.r1_perp + self.r2_perp)


def _expect(rho: np.ndarray, psi: np.ndarray) -> float:
    return float(np.real(np.conj(psi) @ rho @ psi))


def rates_in_basis(joint: JointState, basis: AnalyzerSetting) -> PathRates:
    """Blocked-path detection rates; no interference term enters."""
    lam, perp = basis.state, basis.perp
    # clip roundoff, rates are physical probabilities
    return PathRates(
        max(_expect(joint.rho11, lam), 0.0),
        max(_expect(joint.rho11, perp), 0.0),
        max(_expect(joint.rho22, lam), 0.0),
        max(_expect(joint.rho22, perp), 0.0),
    )


def likelihood(rates: PathRates) -> float:
    """Probability of guessing the path right with the optimal bet.

    For each detector outcome pick the path contributing most (path 1 on a
    tie), so ``L = (max(R1l, R2l) + max(R1p, R2p)) / sum``.
    """
    total = rates.total
    if total <= 0:
        raise NoCountsError("all path rates are zero; likelihood undefined")
    return (max(rates.r1, rates.r2) + max(rates.r1_perp, rates.r2_perp)) / total


def knowledge(joint: JointState, basis: AnalyzerSetting) -> float:
    return 2 * likelihood(rates_in_basis(joint, basis)) - 1


def optimal_linear_basis(phi1: float, phi2: float) -> AnalyzerSetting:
    """Best linear analyzer when the two paths carry linear light at ``phi1``, ``phi2``.

    It sits halfway between the axes that would equalize the path
    amplitudes, i.e. at ``(phi1 + phi2)/2 + 45 deg`` (the perpendicular
    at ``-45 deg`` is the same basis).
    """
    return AnalyzerSetting.linear((phi1 + phi2) / 2 + np.pi / 4)


def _sphere_vectors(polar: np.ndarray, azimuth: np.ndarray) -> np.ndarray:
    """Jones vectors for Bloch angles, polar from the H pole."""
    return np.stack(
        [np.cos(polar / 2) + 0j, np.exp(1j * azimuth) * np.sin(polar / 2)], axis=-1
    )


def _knowledge_many(joint: JointState, lam: np.ndarray) -> np.ndarray:
    # lam_perp = (-conj(v), conj(h))
    perp = np.stack([-np.conj(lam[:, 1]), np.conj(lam[:, 0])], axis=-1)

    def ex(rho, psi):
        return np.einsum("ni,ij,nj->n", psi.conj(), rho, psi).real

    r1, r2 = ex(joint.rho11, lam), ex(joint.rho22, lam)
    p1, p2 = ex(joint.rho11, perp), ex(joint.rho22, perp)
    total = r1 + r2 + p1 + p2
    return 2 * (np.maximum(r1, r2) + np.maximum(p1, p2)) / total - 1


def distinguishability(
    joint: JointState, n_polar: int = 32, n_azimuth: int = 64
) -> tuple[float, AnalyzerSetting]:
    """Maximum Knowledge over all analyzer settings, and the basis achieving it.

    Coarse grid of ``n_polar x n_azimuth`` Bloch directions, then a
    Nelder-Mead polish from the best grid point.  The grid reduction takes
    the first maximum in grid order, so the result is deterministic.
    """
    if joint.w1 + joint.w2 <= 0:
        raise NoCountsError("joint state carries no light")
    polar = (np.arange(n_polar) + 0.5) * np.pi / n_polar
    azimuth = np.arange(n_azimuth) * 2 * np.pi / n_azimuth
    pp, aa = np.meshgrid(polar, azimuth, indexing="ij")
    k_grid = _knowledge_many(joint, _sphere_vectors(pp.ravel(), aa.ravel()))
    best = int(np.argmax(k_grid))
    x0 = np.array([pp.ravel()[best], aa.ravel()[best]])

    def neg_k(x):
        return -_knowledge_many(joint, _sphere_vectors(x[:1], x[1:]))[0]

    res = minimize(
        neg_k,
        x0,
        method="Nelder-Mead",
        options={"xatol": 1e-11, "fatol": 1e-15, "maxiter": 4000,
                 "initial_simplex": x0 + np.array([[0, 0], [0.05, 0], [0, 0.05]])},
    )
    x = res.x if -res.fun >= k_grid[best] else x0
    lam = _sphere_vectors(x[:1], x[1:])[0]
    basis = AnalyzerSetting(lam)
    return max(knowledge(joint, basis), 0.0), basis


def law_value(rho: PolState) -> float:
    """``2 Tr(rho^2) - 1``, the squared fractional purity."""
    return 2 * trace_purity(rho) - 1


@dataclass(frozen=True)
class MetricsResult:
    V: float
    L: float
    K: float
    P: float
    D: float
    basis_used: AnalyzerSetting
    optimal_basis: AnalyzerSetting

    @property
    def duality_sum(self) -> float:
        """``V^2 + K^2`` in the basis used."""
        return self.V**2 + self.K**2

    @property
    def distinguishability_sum(self) -> float:
        return self.V**2 + self.D**2


def duality_check(joint: JointState, basis: AnalyzerSetting | None = None) -> MetricsResult:
    """Visibility, Knowledge and Distinguishability of one configuration.

    ``K`` is taken in ``basis`` when given, otherwise in the basis that
    maximizes it (so ``K == D``).
    """
    v = visibility(joint)
    d, best = distinguishability(joint)
    used = best if basis is None else basis
    k = d if basis is None else knowledge(joint, basis)
    return MetricsResult(
        V=v,
        L=(1 + k) / 2,
        K=k,
        P=abs(joint.w1 - joint.w2),
        D=d,
        basis_used=used,
        optimal_basis=best,
    )


def correlation_tensor(joint: JointState) -> np.ndarray:
    """``T[i, j] = Tr(rho sigma_i (x) sigma_j)`` over path (x) polarization."""
    rho = joint.matrix
    return np.array(
        [[np.trace(rho @ np.kron(a, b)).real for b in STOKES_PAULIS] for a in STOKES_PAULIS]
    )


def _unit(polar, azimuth) -> np.ndarray:
    return np.stack(
        [np.cos(polar), np.sin(polar) * np.cos(azimuth), np.sin(polar) * np.sin(azimuth)],
        axis=-1,
    )


def chsh_value(joint: JointState, n_polar: int = 12, n_azimuth: int = 24):
    """Largest CHSH value over spin-type analyzers on path and polarization.

    Returns ``(S, (a, a2, b, b2))`` with the four analyzer directions as
    Bloch vectors (``a``, ``a2`` on the path, ``b``, ``b2`` on the
    polarization).  The polarization pair is searched on a grid and then
    polished; for each pair the best path analyzers follow directly as the
    directions of ``T (b + b2)`` and ``T (b - b2)``.
    """
    t = correlation_tensor(joint)
    polar = (np.arange(n_polar) + 0.5) * np.pi / n_polar
    azimuth = np.arange(n_azimuth) * 2 * np.pi / n_azimuth
    pp, aa = np.meshgrid(polar, azimuth, indexing="ij")
    dirs = _unit(pp.ravel(), aa.ravel())
    plus = dirs[:, None, :] + dirs[None, :, :]
    minus = dirs[:, None, :] - dirs[None, :, :]
    s_grid = np.linalg.norm(plus @ t.T, axis=-1) + np.linalg.norm(minus @ t.T, axis=-1)
    i, j = np.unravel_index(int(np.argmax(s_grid)), s_grid.shape)
    x0 = np.array([pp.ravel()[i], aa.ravel()[i], pp.ravel()[j], aa.ravel()[j]])

    def value(x):
        b, b2 = _unit(x[0], x[1]), _unit(x[2], x[3])
        return np.linalg.norm(t @ (b + b2)) + np.linalg.norm(t @ (b - b2))

    res = minimize(lambda x: -value(x), x0, method="Nelder-Mead",
                   options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 8000})
    x = res.x if -res.fun >= s_grid[i, j] else x0
    b, b2 = _unit(x[0], x[1]), _unit(x[2], x[3])
    a, a2 = t @ (b + b2), t @ (b - b2)
    a = a / np.linalg.norm(a) if np.linalg.norm(a) > 0 else np.array([1.0, 0, 0])
    a2 = a2 / np.linalg.norm(a2) if np.linalg.norm(a2) > 0 else np.array([1.0, 0, 0])
    s = a @ t @ (b + b2) + a2 @ t @ (b - b2)
    return float(s), (a, a2, b, b2)
