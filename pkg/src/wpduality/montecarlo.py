"""Photon-counting emulation of the measurement and estimation pipeline.

With far fewer than one photon in the interferometer at a time, detector
clicks are independent and counts in a gate of length ``t`` are
``Poisson((eta_d * max_signal_rate * p + background_d) * t)``, where ``p``
is the probability that the photon reaches detector ``d``.

Random streams
--------------
Every draw comes from ``numpy.random.PCG64`` seeded by
``SeedSequence(rng_seed, spawn_key=key)``.  The key used by
:func:`run_duality_experiment` is ``(repetition, grid_index, stage)``
with stage 0 for the visibility scan and 1 for the knowledge
measurement, so a repetition's counts do not depend on how many other
repetitions run or in what order.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from .interferometer import (
    InterferometerConfig,
    JointState,
    build_joint,
    detector_intensity,
    visibility,
)
from .metrics import (
    HV_BASIS,
    AnalyzerSetting,
    NoCountsError,
    distinguishability,
    knowledge,
    optimal_linear_basis,
)
from .polarization import PolState, hwp, rotator

DEFAULT_PHASES = np.arange(720) * np.pi / 360


@dataclass(frozen=True)
class NoiseModel:
    """Detector and source parameters; rates in counts/s, times in s."""

    background_d1: float = 250.0
    background_d2: float = 250.0
    efficiency_ratio: float = 1.11
    max_signal_rate: float = 50_000.0
    integration_time: float = 10.0
    rng_seed: int = 0
    background_time: float | None = None

    def __post_init__(self):
        if min(self.background_d1, self.background_d2, self.max_signal_rate) < 0:
            raise ValueError("rates must be nonnegative")
        if self.efficiency_ratio <= 0:
            raise ValueError("efficiency_ratio must be positive")
        if self.integration_time <= 0:
            raise ValueError("integration_time must be positive")

    def efficiency(self, detector: int) -> float:
        """Relative efficiency; detector 2 is the reference."""
        return 1.0 if detector == 2 else 1.0 / self.efficiency_ratio

    def background(self, detector: int) -> float:
        return self.background_d1 if detector == 1 else self.background_d2

    @property
    def bg_time(self) -> float:
        return self.integration_time if self.background_time is None else self.background_time


@dataclass(frozen=True)
class CountRecord:
    detector: int
    tag: str
    setting: float
    counts: int
    duration: float

    @property
    def rate(self) -> float:
        return self.counts / self.duration


@dataclass(frozen=True)
class EstimationResult:
    estimate: float
    stderr: float
    n_records: int
    clamped: bool = False


def stream(seed: int, *key: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=key)))


def simulate_counts(
    probabilities,
    detector: int,
    noise: NoiseModel,
    rng: np.random.Generator | None,
    tag: str = "",
    settings=None,
    duration: float | None = None,
) -> list[CountRecord]:
    """One record per entry of ``probabilities`` on ``detector``.

    Passing ``rng=None`` returns the expected counts rounded to integers.
    """
    p = np.atleast_1d(np.asarray(probabilities, dtype=float))
    t = noise.integration_time if duration is None else duration
    lam = (noise.efficiency(detector) * noise.max_signal_rate * p + noise.background(detector)) * t
    counts = np.rint(lam) if rng is None else rng.poisson(lam)
    settings = np.full(p.shape, np.nan) if settings is None else np.atleast_1d(settings)
    return [
        CountRecord(detector, tag, float(s), int(c), float(t))
        for s, c in zip(settings, counts)
    ]


def simulate_background(detector: int, noise: NoiseModel, rng) -> CountRecord:
    """Counts with the interferometer input blocked."""
    return simulate_counts([0.0], detector, noise, rng, "background", duration=noise.bg_time)[0]


def visibility_records(
    joint: JointState,
    noise: NoiseModel,
    rng,
    phases: Sequence[float] = DEFAULT_PHASES,
) -> tuple[list[CountRecord], CountRecord]:
    """Detector-1 phase scan with the analyzer out, plus its background."""
    phases = np.asarray(phases, dtype=float)
    norm = 2 * (joint.w1 + joint.w2)
    probs = detector_intensity(joint, phases, 1) / norm
    scan = simulate_counts(probs, 1, noise, rng, "phase-scan", settings=phases)
    return scan, simulate_background(1, noise, rng)


def knowledge_records(
    joint: JointState, basis: AnalyzerSetting, noise: NoiseModel, rng
) -> tuple[list[CountRecord], list[CountRecord]]:
    """Blocked-path counts in ``basis``: detector 1 sees ``lam``, detector 2 ``lam_perp``.

    Returns ``(signal_records, background_records)``; signal records are
    tagged ``path1`` / ``path2`` and there is one per path and detector.
    """
    norm = joint.w1 + joint.w2
    recs = []
    for tag, rho in (("path1", joint.rho11), ("path2", joint.rho22)):
        for det, psi in ((1, basis.state), (2, basis.perp)):
            p = max(float(np.real(np.conj(psi) @ rho @ psi)), 0.0) / norm
            recs.extend(simulate_counts([p], det, noise, rng, tag))
    bgs = [simulate_background(1, noise, rng), simulate_background(2, noise, rng)]
    return recs, bgs


def _background_rate(records: Sequence[CountRecord]) -> tuple[float, float]:
    counts = sum(r.counts for r in records)
    time = sum(r.duration for r in records)
    return counts / time, counts / time**2


def estimate_visibility(
    scan: Sequence[CountRecord],
    background: CountRecord | Sequence[CountRecord] | None,
    subtract_background: bool = True,
) -> EstimationResult:
    """``(Max - Min)/(Max + Min)`` from a phase scan.

    The fringe extrema are located with a least-squares sinusoid fit to
    the even-indexed scan points; Max and Min are the background-subtracted
    rates at the odd-indexed points nearest those phases, so the reading is
    independent of the search.  A negative Min after subtraction is
    clamped to zero and flagged.  Near zero visibility the estimate may be
    slightly negative.
    """
    if len(scan) < 6:
        raise ValueError("phase scan needs at least 6 points")
    phases = np.array([r.setting for r in scan])
    rates = np.array([r.rate for r in scan])
    var = np.array([r.counts / r.duration**2 for r in scan])
    if subtract_background and background is not None:
        bgs = [background] if isinstance(background, CountRecord) else list(background)
        b, var_b = _background_rate(bgs)
    else:
        b, var_b = 0.0, 0.0
    y = rates - b
    locate = np.arange(0, len(scan), 2)
    read = np.arange(1, len(scan), 2)
    ph = phases[locate]
    design = np.column_stack([np.ones_like(ph), np.cos(ph), np.sin(ph)])
    coef, *_ = np.linalg.lstsq(design, y[locate], rcond=None)
    phi0 = np.arctan2(coef[2], coef[1])

    def nearest(target):
        d = np.angle(np.exp(1j * (phases[read] - target)))
        return int(read[np.argmin(np.abs(d))])

    i_max, i_min = nearest(phi0), nearest(phi0 + np.pi)
    big, small = y[i_max], y[i_min]
    clamped = small < 0
    if clamped:
        warnings.warn("background-subtracted minimum is negative; clamped to zero", stacklevel=2)
        small = 0.0
    total = big + small
    if total <= 0:
        raise NoCountsError("no signal left after background subtraction")
    v = (big - small) / total
    # partial derivatives w.r.t. the raw max rate, raw min rate and background
    g_max = 2 * small / total**2
    g_min = -2 * big / total**2
    g_b = 2 * (big - small) / total**2
    err = np.sqrt(g_max**2 * var[i_max] + g_min**2 * var[i_min] + g_b**2 * var_b)
    n = len(scan) + (0 if background is None else 1)
    return EstimationResult(float(v), float(err), n, bool(clamped))


def estimate_knowledge(
    records: Sequence[CountRecord],
    background: Sequence[CountRecord] | None,
    efficiency_ratio: float,
    subtract_background: bool = True,
    scale_efficiency: bool = True,
) -> EstimationResult:
    """``K = 2L - 1`` from blocked-path counts.

    Detector backgrounds are subtracted, detector-1 rates are multiplied
    by ``efficiency_ratio`` (eta2/eta1), and the Likelihood is the
    best-bet formula over the four corrected rates.  The standard error is
    first-order propagation of the Poisson variances, including the shared
    background estimates.
    """
    raw: dict[tuple[str, int], list[CountRecord]] = {}
    for r in records:
        raw.setdefault((r.tag, r.detector), []).append(r)
    keys = [("path1", 1), ("path1", 2), ("path2", 1), ("path2", 2)]
    missing = [k for k in keys if k not in raw]
    if missing:
        raise ValueError(f"missing knowledge records for {missing}")
    bg = {1: (0.0, 0.0), 2: (0.0, 0.0)}
    if subtract_background and background:
        for det in (1, 2):
            recs = [r for r in background if r.detector == det]
            if recs:
                bg[det] = _background_rate(recs)
    scale = {1: efficiency_ratio if scale_efficiency else 1.0, 2: 1.0}

    corrected, var_raw, clamped = {}, {}, False
    for key in keys:
        recs = raw[key]
        counts = sum(r.counts for r in recs)
        time = sum(r.duration for r in recs)
        value = (counts / time - bg[key[1]][0]) * scale[key[1]]
        # negative values are kept: clamping would bias the denominator
        clamped = clamped or value < 0
        corrected[key] = value
        var_raw[key] = counts / time**2
    r1, r1p, r2, r2p = (corrected[k] for k in keys)
    total = r1 + r1p + r2 + r2p
    if total <= 0:
        raise NoCountsError("no signal left after background subtraction")
    lik = (max(r1, r2) + max(r1p, r2p)) / total
    chosen = {
        ("path1", 1): r1 >= r2,
        ("path2", 1): r2 > r1,
        ("path1", 2): r1p >= r2p,
        ("path2", 2): r2p > r1p,
    }
    # dL/dR for each corrected rate
    dl = {k: (float(chosen[k]) - lik) / total for k in keys}
    var_l = sum((dl[k] * scale[k[1]]) ** 2 * var_raw[k] for k in keys)
    for det in (1, 2):
        g = -scale[det] * sum(dl[k] for k in keys if k[1] == det)
        var_l += g**2 * bg[det][1]
    n = len(records) + (len(background) if background else 0)
    return EstimationResult(2 * lik - 1, 2 * float(np.sqrt(var_l)), n, clamped)


def _principal_angle(state: PolState) -> float:
    """Azimuth of the dominant eigenvector, i.e. half the Stokes azimuth."""
    s1, s2, _ = state.stokes[1:]
    return 0.5 * float(np.arctan2(s2, s1))


BasisPolicy = Literal["hv", "optimal", "nominal"]


@dataclass(frozen=True)
class Scenario:
    """A HWP-angle sweep of one input state.

    ``basis`` chooses the Knowledge analyzer: ``"hv"`` is fixed H/V,
    ``"optimal"`` maximizes K for the actual (possibly imperfect)
    interferometer, ``"nominal"`` is the best linear basis for the ideal
    interferometer at the same plate angle, computed from the input's
    principal axis, which is what one sets from the plate dial.
    """

    state: PolState
    thetas: Sequence[float]
    basis: BasisPolicy = "optimal"
    v0: float = 1.0
    residual_rotation: float = 0.0
    w1: float = 0.5
    phases: Sequence[float] = field(default_factory=lambda: DEFAULT_PHASES)

    def config(self, theta: float) -> InterferometerConfig:
        residual = rotator(self.residual_rotation) if self.residual_rotation else None
        return InterferometerConfig(w1=self.w1, path1=hwp(theta), v0=self.v0, residual1=residual)

    def analyzer(self, theta: float) -> AnalyzerSetting:
        if self.basis == "hv":
            return HV_BASIS
        if self.basis == "optimal":
            return distinguishability(build_joint(self.state, self.config(theta)))[1]
        if self.basis == "nominal":
            phi = _principal_angle(self.state)
            # the plate reflects the input axis to 2 theta - phi in path 1
            return optimal_linear_basis(2 * theta - phi, phi)
        raise ValueError(f"unknown basis policy {self.basis!r}")


@dataclass(frozen=True)
class ExperimentSummary:
    """Per-repetition estimates (shape ``repetitions x len(thetas)``) and analytic values."""

    thetas: np.ndarray
    v_true: np.ndarray
    k_true: np.ndarray
    v_hat: np.ndarray
    v_err: np.ndarray
    k_hat: np.ndarray
    k_err: np.ndarray

    @property
    def sum_hat(self) -> np.ndarray:
        return self.v_hat**2 + self.k_hat**2

    @property
    def sum_true(self) -> np.ndarray:
        return self.v_true**2 + self.k_true**2

    def mean(self, a: np.ndarray) -> np.ndarray:
        return a.mean(axis=0)

    def sem(self, a: np.ndarray) -> np.ndarray:
        n = a.shape[0]
        return a.std(axis=0, ddof=1) / np.sqrt(n) if n > 1 else np.zeros(a.shape[1])

    def coverage(self, k: float = 3.0) -> tuple[np.ndarray, np.ndarray]:
        """Fraction of repetitions within ``k`` standard errors, for V and K."""
        v_in = np.abs(self.v_hat - self.v_true) <= k * self.v_err
        k_in = np.abs(self.k_hat - self.k_true) <= k * self.k_err
        return v_in.mean(axis=0), k_in.mean(axis=0)


def run_duality_experiment(
    scenario: Scenario, noise: NoiseModel, repetitions: int
) -> ExperimentSummary:
    """Emulate the V and K measurements at every plate angle, ``repetitions`` times."""
    if repetitions < 1:
        raise ValueError("repetitions must be at least 1")
    thetas = np.asarray(scenario.thetas, dtype=float)
    nt = len(thetas)
    v_hat, v_err = np.empty((repetitions, nt)), np.empty((repetitions, nt))
    k_hat, k_err = np.empty((repetitions, nt)), np.empty((repetitions, nt))
    v_true, k_true = np.empty(nt), np.empty(nt)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for gi, theta in enumerate(thetas):
            joint = build_joint(scenario.state, scenario.config(theta))
            basis = scenario.analyzer(theta)
            v_true[gi] = visibility(joint)
            k_true[gi] = knowledge(joint, basis)
            for rep in range(repetitions):
                scan, bg = visibility_records(
                    joint, noise, stream(noise.rng_seed, rep, gi, 0), scenario.phases
                )
                ev = estimate_visibility(scan, bg)
                recs, bgs = knowledge_records(joint, basis, noise, stream(noise.rng_seed, rep, gi, 1))
                ek = estimate_knowledge(recs, bgs, noise.efficiency_ratio)
                v_hat[rep, gi], v_err[rep, gi] = ev.estimate, ev.stderr
                k_hat[rep, gi], k_err[rep, gi] = ek.estimate, ek.stderr
    return ExperimentSummary(thetas, v_true, k_true, v_hat, v_err, k_hat, k_err)
