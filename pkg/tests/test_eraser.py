import numpy as np
import pytest

from wpduality import polarization as pol
from wpduality.eraser import (
    UndefinedVisibilityError, conditional_fringe, conditional_profile, eraser_scan,
    eraser_sphere_scan, poincare_loci, zero_visibility_angles,
)
from wpduality.interferometer import InterferometerConfig, build_joint, fringe
from wpduality.metrics import AnalyzerSetting

from oracles import conditional_scan, random_density, random_ket, random_unitary

deg = np.radians
VERT = pol.PolState.pure(pol.V)
PURITIES = (0.0, 1 / 3, 0.65, 1.0)


def hwp_joint(theta_deg, state=VERT, **kw):
    return build_joint(state, InterferometerConfig(path1=pol.hwp(deg(theta_deg)), **kw))


def eigenmode_analyzers(theta):
    # a HWP at theta has linear eigenmodes along theta and theta + 90 deg
    return AnalyzerSetting.linear(theta), AnalyzerSetting.linear(theta + np.pi / 2)


class TestConditionalFringe:
    def test_diagonal_recovers_fringe(self):
        v, _ = conditional_fringe(hwp_joint(45), AnalyzerSetting.linear(deg(45)))
        assert np.isclose(v, 1.0)

    def test_antifringe(self):
        joint = hwp_joint(45)
        v1, p1 = conditional_fringe(joint, AnalyzerSetting.linear(deg(45)))
        v2, p2 = conditional_fringe(joint, AnalyzerSetting.linear(deg(-45)))
        assert np.isclose(v2, 1.0)
        assert abs(abs(np.angle(np.exp(1j * (p1 - p2)))) - np.pi) < 1e-12

    def test_single_path_analyzer(self):
        v, _ = conditional_fringe(hwp_joint(45), AnalyzerSetting(pol.H))
        assert v == 0

    def test_blocked_analyzer(self):
        joint = build_joint(VERT, InterferometerConfig())
        with pytest.raises(UndefinedVisibilityError):
            conditional_fringe(joint, AnalyzerSetting(pol.H))
        curve = eraser_scan(joint, [0.0, deg(45)])
        assert np.isnan(curve.visibility[0]) and np.isclose(curve.visibility[1], 1.0)

    def test_matches_propagation(self):
        rng = np.random.default_rng(12)
        for _ in range(20):
            cfg = InterferometerConfig(
                w1=rng.uniform(0.2, 0.8),
                path1=pol.ElementUnitary(random_unitary(rng)),
                path2=pol.ElementUnitary(random_unitary(rng)),
                v0=rng.uniform(0.5, 1),
            )
            joint = build_joint(pol.PolState(random_density(rng)), cfg)
            a = random_ket(rng)
            for port in (1, 2):
                phis, ref = conditional_scan(joint.matrix, a, n=120, port=port)
                prof = conditional_profile(joint, AnalyzerSetting(a), port)
                assert np.allclose(prof(phis), ref, atol=1e-12)
                v, _ = conditional_fringe(joint, AnalyzerSetting(a), port)
                assert 0 <= v <= 1 + 1e-9
                assert abs(v - (ref.max() - ref.min()) / (ref.max() + ref.min())) < 1e-3


def test_single_path_state_has_no_fringe():
    rng = np.random.default_rng(13)
    joint = hwp_joint(30)
    only1 = type(joint)(joint.rho11, np.zeros((2, 2), complex), np.zeros((2, 2), complex))
    for _ in range(20):
        assert conditional_fringe(only1, AnalyzerSetting(random_ket(rng)))[0] == 0


def test_ensemble_decomposition():
    rng = np.random.default_rng(14)
    phis = np.linspace(0, 2 * np.pi, 37)
    for _ in range(100):
        cfg = InterferometerConfig(
            w1=rng.uniform(0.05, 0.95),
            path1=pol.ElementUnitary(random_unitary(rng)),
            path2=pol.ElementUnitary(random_unitary(rng)),
            v0=rng.uniform(0, 1),
        )
        joint = build_joint(pol.PolState(random_density(rng)), cfg)
        basis = AnalyzerSetting(random_ket(rng))
        for port in (1, 2):
            whole = fringe(joint, port)(phis)
            parts = (conditional_profile(joint, basis, port)(phis)
                     + conditional_profile(joint, AnalyzerSetting(basis.perp), port)(phis))
            assert np.max(abs(whole - parts)) < 1e-12


class TestScans:
    def test_pure_45(self):
        curve = eraser_scan(hwp_joint(45), deg(np.arange(0, 180, 1.0)))
        assert np.allclose(np.degrees(curve.minima()), [0, 90])
        assert np.isclose(curve.visibility[45], 1) and np.isclose(curve.visibility[135], 1)

    def test_mixed_45(self):
        curve = eraser_scan(hwp_joint(45, pol.PolState.mixed()), deg(np.arange(0, 180, 1.0)))
        # eigenmodes at 45 and 135 deg, zeros midway at 0 and 90
        assert np.isclose(curve.visibility[45], 1) and np.isclose(curve.visibility[135], 1)
        assert curve.visibility[0] < 1e-12 and curve.visibility[90] < 1e-12

    def test_pure_10_minima(self):
        grid = deg(np.arange(0, 180, 0.5))
        curve = eraser_scan(hwp_joint(10), grid)
        zeros = np.degrees(zero_visibility_angles(deg(10), 1.0))
        assert np.allclose(sorted(np.degrees(curve.minima())), sorted(zeros), atol=0.5)

    def test_phase_range(self):
        curve = eraser_scan(hwp_joint(30, pol.partial_mix(pol.V, 0.4)), deg(np.arange(0, 180, 5.0)))
        assert np.all((curve.phase >= 0) & (curve.phase < 2 * np.pi))

    def test_sphere_scan_linear_agrees(self):
        joint = hwp_joint(20)
        a = deg(np.arange(0, 180, 15.0))
        pts = np.stack([np.cos(2 * a), np.sin(2 * a), 0 * a], 1)
        assert np.allclose(eraser_scan(joint, a).visibility, eraser_sphere_scan(joint, pts).visibility)


class TestZeroAngles:
    def test_examples(self):
        assert np.allclose(np.degrees(zero_visibility_angles(deg(45), 1)), [0, 90])
        assert np.allclose(np.degrees(zero_visibility_angles(deg(30), 0)), [165, 75])
        half = np.degrees(0.5 * np.arccos(np.cos(deg(45)) / 3))
        assert np.allclose(np.degrees(zero_visibility_angles(deg(22.5), 1 / 3)),
                           [(22.5 - half) % 180, 22.5 + half])

    def test_rejects_bad_purity(self):
        with pytest.raises(ValueError):
            zero_visibility_angles(0.1, 1.5)

    @pytest.mark.parametrize("s", PURITIES)
    @pytest.mark.parametrize("theta", [10, 22.5, 45])
    def test_zeros_and_eigenmodes(self, s, theta):
        joint = hwp_joint(theta, pol.partial_mix(pol.V, s))
        for z in zero_visibility_angles(deg(theta), s):
            phis, ref = conditional_scan(joint.matrix, pol.linear(z), n=8)
            assert np.ptp(ref) < 1e-9
            assert conditional_fringe(joint, AnalyzerSetting.linear(z))[0] < 1e-9
        a, b = eigenmode_analyzers(deg(theta))
        va, pa = conditional_fringe(joint, a)
        vb, pb = conditional_fringe(joint, b)
        assert np.isclose(va, 1.0, atol=1e-9) and np.isclose(vb, 1.0, atol=1e-9)
        assert abs(abs(np.angle(np.exp(1j * (pa - pb)))) - np.pi) < 1e-9

    def test_rotated_input(self):
        joint = hwp_joint(10, pol.partial_mix(pol.linear(deg(60)), 0.5))
        for z in zero_visibility_angles(deg(10), 0.5, input_angle=deg(60)):
            assert conditional_fringe(joint, AnalyzerSetting.linear(z))[0] < 1e-9


class TestLoci:
    def test_pure_hwp45(self):
        joint = hwp_joint(45)
        loci = poincare_loci(joint, "pure")
        pts = {tuple(np.round(p, 12)) for p in loci.points}
        assert pts == {(1.0, 0.0, 0.0), (-1.0, 0.0, 0.0)}
        circle = loci.circle(360)
        assert np.allclose(circle @ loci.normal, 0)
        assert np.allclose(np.linalg.norm(circle, axis=1), 1)
        assert np.max(abs(eraser_sphere_scan(joint, circle).visibility - 1)) < 1e-9
        assert np.max(eraser_sphere_scan(joint, loci.points).visibility) < 1e-12
        assert loci.circle_visibility > 1 - 1e-9 and loci.point_visibility < 1e-12

    def test_pure_general(self):
        rng = np.random.default_rng(15)
        for _ in range(5):
            state = pol.PolState.pure(random_ket(rng))
            joint = build_joint(state, InterferometerConfig(path1=pol.ElementUnitary(random_unitary(rng))))
            loci = poincare_loci(joint, "pure")
            assert np.max(abs(eraser_sphere_scan(joint, loci.circle(90)).visibility - 1)) < 1e-9

    def test_mixed_rotator(self):
        cfg = InterferometerConfig(path1=pol.rotator(deg(45)), path2=pol.rotator(deg(-45)))
        joint = build_joint(pol.PolState.mixed(), cfg)
        loci = poincare_loci(joint, "mixed")
        assert np.allclose(abs(loci.points[:, 2]), 1)
        eq = loci.circle(360)
        assert np.allclose(eq[:, 2], 0)
        assert np.max(eraser_sphere_scan(joint, eq).visibility) < 1e-9
        poles = eraser_sphere_scan(joint, [[0, 0, 1], [0, 0, -1]]).visibility
        assert np.allclose(poles, 1, atol=1e-9)

    def test_mixed_single_rotator_is_not_zero_on_equator(self):
        # a lone 45 deg rotation leaves cos 45 visibility for every linear analysis
        joint = build_joint(pol.PolState.mixed(), InterferometerConfig(path1=pol.rotator(deg(45))))
        curve = eraser_scan(joint, deg(np.arange(0, 180, 10.0)))
        assert np.allclose(curve.visibility, np.cos(deg(45)))

    def test_mixed_hwp(self):
        joint = hwp_joint(30, pol.PolState.mixed())
        loci = poincare_loci(joint, "mixed")
        expected = np.array([np.cos(deg(60)), np.sin(deg(60)), 0])
        assert any(np.allclose(p, expected) for p in loci.points)
        assert any(np.allclose(p, -expected) for p in loci.points)
        assert np.allclose(eraser_sphere_scan(joint, loci.points).visibility, 1)

    def test_kind_mismatch(self):
        with pytest.raises(ValueError):
            poincare_loci(hwp_joint(45), "mixed")
        with pytest.raises(ValueError):
            poincare_loci(hwp_joint(45, pol.PolState.mixed()), "pure")
        with pytest.raises(ValueError):
            poincare_loci(hwp_joint(45), "other")

    def test_degenerate(self):
        with pytest.raises(ValueError):
            poincare_loci(hwp_joint(0), "pure")
        with pytest.raises(ValueError):
            poincare_loci(build_joint(pol.PolState.mixed(), InterferometerConfig()), "mixed")
        with pytest.raises(ValueError):
            poincare_loci(hwp_joint(45, pol.PolState.mixed(), v0=0.0), "mixed")
