import numpy as np
import pytest

from wpduality import polarization as pol
from wpduality.interferometer import (
    InterferometerConfig, build_joint, detector_intensity, fringe,
    imperfect_config, predictability, visibility,
)
from wpduality.metrics import distinguishability

from oracles import port_intensity_scan, random_density, random_unitary, scan_visibility

deg = np.radians
VERT = pol.PolState.pure(pol.V)


def direct_joint_matrix(rho, u1, u2, w1):
    """4x4 joint state from the eigen-decomposition of rho and explicit kets."""
    vals, vecs = np.linalg.eigh(rho)
    out = np.zeros((4, 4), complex)
    for p, v in zip(vals, vecs.T):
        ket = np.concatenate([np.sqrt(w1) * u1 @ v, np.sqrt(1 - w1) * u2 @ v])
        out += p * np.outer(ket, ket.conj())
    return out


def test_joint_matches_direct_construction():
    rng = np.random.default_rng(1)
    for _ in range(50):
        rho = random_density(rng)
        u1, u2 = random_unitary(rng), random_unitary(rng)
        w1 = rng.uniform(0.05, 0.95)
        cfg = InterferometerConfig(w1=w1, path1=pol.ElementUnitary(u1), path2=pol.ElementUnitary(u2))
        joint = build_joint(pol.PolState(rho), cfg)
        assert np.allclose(joint.matrix, direct_joint_matrix(rho, u1, u2, w1), atol=1e-12)
        assert np.isclose(np.trace(joint.matrix).real, 1.0)


@pytest.mark.parametrize("theta", [0, 10, 22.5, 45, 67, 90])
def test_fringe_matches_phase_scan(theta):
    joint = build_joint(VERT, InterferometerConfig(path1=pol.hwp(deg(theta))))
    phis, ref = port_intensity_scan(joint.matrix)
    assert np.allclose(detector_intensity(joint, phis), ref, atol=1e-9)
    assert np.allclose(fringe(joint)(phis), ref, atol=1e-9)
    assert abs(visibility(joint) - scan_visibility(joint.matrix)) < 1e-9


def test_random_configs_match_scan():
    rng = np.random.default_rng(2)
    for _ in range(30):
        cfg = InterferometerConfig(
            w1=rng.uniform(0.1, 0.9),
            path1=pol.ElementUnitary(random_unitary(rng)),
            path2=pol.ElementUnitary(random_unitary(rng)),
            v0=rng.uniform(0, 1),
        )
        joint = build_joint(pol.PolState(random_density(rng)), cfg)
        for port in (1, 2):
            phis, ref = port_intensity_scan(joint.matrix, n=90, port=port)
            assert np.allclose(detector_intensity(joint, phis, port), ref, atol=1e-9)
            assert np.allclose(fringe(joint, port)(phis), ref, atol=1e-9)


def test_ports_conserve_energy():
    joint = build_joint(VERT, InterferometerConfig(path1=pol.hwp(deg(17)), w1=0.3))
    phis = np.linspace(0, 2 * np.pi, 50)
    total = detector_intensity(joint, phis, 1) + detector_intensity(joint, phis, 2)
    assert np.allclose(total, 2.0)


def test_ideal_endpoints():
    assert np.isclose(visibility(build_joint(VERT, InterferometerConfig(path1=pol.hwp(0)))), 1.0)
    assert visibility(build_joint(VERT, InterferometerConfig(path1=pol.hwp(deg(45))))) < 1e-15


def test_visibility_is_cos_two_theta():
    for theta in np.linspace(0, 90, 19):
        v = visibility(build_joint(VERT, InterferometerConfig(path1=pol.hwp(deg(theta)))))
        assert abs(v - abs(np.cos(deg(2 * theta)))) < 1e-12


def test_v0_scales_visibility_linearly():
    for v0 in (0.0, 0.3, 0.98, 1.0):
        joint = build_joint(VERT, InterferometerConfig(path1=pol.hwp(deg(20)), v0=v0))
        assert np.isclose(visibility(joint), v0 * np.cos(deg(40)), atol=1e-12)


def test_global_unitary_invariance():
    rng = np.random.default_rng(5)
    for _ in range(20):
        g = random_unitary(rng)
        rho = pol.PolState(random_density(rng))
        a = pol.hwp(rng.uniform(0, np.pi))
        base = build_joint(rho, InterferometerConfig(path1=a))
        moved = build_joint(
            rho,
            InterferometerConfig(path1=pol.ElementUnitary(g @ a.matrix), path2=pol.ElementUnitary(g)),
        )
        assert abs(visibility(base) - visibility(moved)) < 1e-12
        assert abs(distinguishability(base)[0] - distinguishability(moved)[0]) < 1e-9


def test_predictability_bounds_visibility():
    for w1 in np.linspace(0.05, 0.95, 19):
        cfg = InterferometerConfig(w1=w1)
        p = predictability(cfg)
        assert np.isclose(p, abs(2 * w1 - 1))
        v = visibility(build_joint(VERT, cfg))
        assert np.isclose(v**2 + p**2, 1.0)


def test_imperfect_config_residual_visibility():
    joint = build_joint(VERT, imperfect_config(pol.hwp(deg(45))))
    assert np.isclose(visibility(joint), 0.044, atol=1e-12)
    joint0 = build_joint(VERT, imperfect_config(pol.hwp(0)))
    assert visibility(joint0) < 0.98


@pytest.mark.parametrize("kwargs", [{"w1": 0}, {"w1": 1.0}, {"v0": 1.2}, {"v0": -0.1}])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        InterferometerConfig(**kwargs)


def test_element_must_be_unitary():
    with pytest.raises(ValueError):
        pol.ElementUnitary(np.array([[1, 0], [0, 2]]))
