"""Path evolution, the parallel gauge, and spherical-area oracles."""

import numpy as np
import pytest

from mixedphase import transport
from mixedphase.errors import AntipodalEndpoints, NotHermitian, ShapeMismatch, ZeroOverlapStep

SX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SY = np.array([[0.0, -1j], [1j, 0.0]])
SZ = np.diag([1.0, -1.0]).astype(complex)


def segment(axis, angle, steps=200):
    return transport.PathSegment.about_axis(axis, angle, steps=steps)


def evolve(*segs):
    return transport.evolve(list(segs))


def test_segment_validation():
    with pytest.raises(NotHermitian):
        transport.PathSegment(generator=np.array([[0, 1], [0, 0]]), duration=1.0)
    with pytest.raises(ValueError):
        transport.PathSegment(generator=SZ, duration=np.inf)
    with pytest.raises(ValueError):
        transport.PathSegment(generator=SZ, duration=1.0, steps=0)


def test_about_axis_negative_angle_is_flipped_axis():
    a = segment((0, 0, 1), -0.7)
    b = segment((0, 0, -1), 0.7)
    np.testing.assert_allclose(a.generator, b.generator, atol=1e-15)
    assert a.duration == pytest.approx(0.7)


def test_full_z_rotation_is_minus_identity():
    # spin-1/2: a 2*pi rotation flips the global sign
    path = evolve(segment((0, 0, 1), 2 * np.pi))
    np.testing.assert_allclose(path.final, -np.eye(2), atol=1e-10)


def test_x_flip():
    path = evolve(segment((1, 0, 0), np.pi))
    np.testing.assert_allclose(path.final, -1j * SX, atol=1e-10)


def test_evolve_matches_exact_exponential():
    h = 0.5 * (0.3 * SX - 0.8 * SY + 0.1 * SZ)
    seg = transport.PathSegment(generator=h, duration=2.1, steps=400)
    path = transport.evolve([seg])
    w, v = np.linalg.eigh(h)
    exact = (v * np.exp(-1j * w * 2.1)) @ v.conj().T
    np.testing.assert_allclose(path.final, exact, atol=1e-12)


def test_evolve_rejects_mixed_dimensions():
    with pytest.raises(ShapeMismatch):
        evolve(segment((0, 0, 1), 1.0),
               transport.PathSegment(generator=np.eye(3), duration=1.0))


def test_parallelize_kills_dynamical_phase():
    # pure z rotation acts only by phases on the computational basis,
    # so its parallel version is the identity at every sample
    path = transport.parallelize(evolve(segment((0, 0, 1), 1.3)), np.eye(2))
    np.testing.assert_allclose(path.final_parallel, np.eye(2), atol=1e-8)
    assert path.pt_residual < 1e-9


def test_parallelize_residual_shrinks_with_steps():
    def residual(steps):
        path = evolve(segment((1, 0, 0), 2.0, steps=steps), segment((0, 1, 0), 1.0, steps=steps))
        return transport.parallelize(path, np.eye(2)).pt_residual

    r100, r200, r400 = residual(100), residual(200), residual(400)
    assert r200 < 1e-6
    # trapezoid integration: roughly quadratic until it hits float noise
    assert r400 < r100


def test_parallelize_preserves_unitarity_and_moduli():
    path = evolve(segment((1, 1, 0), 1.1), segment((0, 1, 1), 0.7))
    par = transport.parallelize(path, np.eye(2))
    u = par.final_parallel
    np.testing.assert_allclose(u @ u.conj().T, np.eye(2), atol=1e-10)
    # the gauge correction is diagonal so entry magnitudes survive
    np.testing.assert_allclose(np.abs(u), np.abs(path.final), atol=1e-10)


def test_parallelize_determinant_one():
    # traceless generators and the transport gauge pin det to +1
    rng = np.random.default_rng(8)
    for _ in range(10):
        axis = rng.standard_normal(3)
        angle = rng.uniform(0.2, 3.0)
        par = transport.parallelize(evolve(segment(axis, angle)), np.eye(2))
        assert abs(np.linalg.det(par.final_parallel) - 1.0) < 1e-9


def test_zero_overlap_rejected():
    coarse = evolve(segment((0, 1, 0), np.pi, steps=1))
    with pytest.raises(ZeroOverlapStep):
        transport.parallelize(coarse, np.eye(2))


def test_visibility_bounds():
    par = transport.parallelize(evolve(segment((0, 1, 0), np.pi / 3)), np.eye(2))
    vis = transport.visibility(par)
    assert vis == pytest.approx(np.cos(np.pi / 6), abs=1e-9)


def test_solid_angle_open_arc_is_zero():
    # a single geodesic arc closes along itself: no enclosed area
    par = transport.parallelize(evolve(segment((0, 1, 0), 1.0)), np.eye(2))
    assert transport.solid_angle(par) == pytest.approx(0.0, abs=1e-8)


def test_solid_angle_octant():
    # z -> x -> y -> z traverses one octant of the sphere, area pi/2,
    # counterclockwise seen from outside
    par = transport.parallelize(
        evolve(segment((0, 1, 0), np.pi / 2), segment((0, 0, 1), np.pi / 2),
               segment((1, 0, 0), np.pi / 2)),
        np.eye(2),
    )
    assert transport.solid_angle(par) == pytest.approx(np.pi / 2, abs=1e-6)


def test_solid_angle_time_reversed_loop_flips_sign():
    par = transport.parallelize(
        evolve(segment((-1, 0, 0), np.pi / 2), segment((0, 0, -1), np.pi / 2),
               segment((0, -1, 0), np.pi / 2)),
        np.eye(2),
    )
    assert transport.solid_angle(par) == pytest.approx(-np.pi / 2, abs=1e-6)


def test_solid_angle_quarter_cap_sector():
    # meridian down, latitude quarter turn, meridian back up encloses a
    # quarter of the polar cap 2*pi*(1 - cos(theta))
    theta = 1.1
    par = transport.parallelize(
        evolve(segment((0, 1, 0), theta), segment((0, 0, 1), np.pi / 2),
               segment((1, 0, 0), theta)),
        np.eye(2),
    )
    want = (np.pi / 2) * (1 - np.cos(theta))
    assert transport.solid_angle(par) == pytest.approx(want, abs=1e-6)


def geodesic_loop(*vertices, steps=400):
    """Great-circle segments joining consecutive Bloch vectors (closed)."""
    segs = []
    pts = [np.asarray(v, dtype=float) / np.linalg.norm(v) for v in vertices]
    for p, q in zip(pts, pts[1:] + pts[:1]):
        axis = np.cross(p, q)
        angle = np.arccos(np.clip(p @ q, -1.0, 1.0))
        segs.append(segment(axis, angle, steps=steps))
    return segs


def bloch_ket(v):
    v = np.asarray(v, dtype=float)
    v = v / np.linalg.norm(v)
    th = np.arccos(np.clip(v[2], -1, 1))
    ph = np.arctan2(v[1], v[0])
    return np.array([np.cos(th / 2), np.exp(1j * ph) * np.sin(th / 2)])


def lhuilier(a, b, c):
    """Spherical excess of a geodesic triangle with side lengths a, b, c."""
    s = (a + b + c) / 2
    t = np.tan(s / 2) * np.tan((s - a) / 2) * np.tan((s - b) / 2) * np.tan((s - c) / 2)
    return 4 * np.arctan(np.sqrt(t))


TRIANGLE = [(0, 0, 1), (np.sin(1.1), 0, np.cos(1.1)), (0, np.sin(0.8), np.cos(0.8))]


def test_solid_angle_matches_lhuilier():
    par = transport.parallelize(evolve(*geodesic_loop(*TRIANGLE)), np.eye(2))
    pts = [np.asarray(v) / np.linalg.norm(v) for v in TRIANGLE]
    sides = [
        np.arccos(np.clip(pts[i] @ pts[(i + 1) % 3], -1, 1)) for i in range(3)
    ]
    area = lhuilier(*sides)
    assert abs(transport.solid_angle(par)) == pytest.approx(area, abs=1e-6)


def test_solid_angle_bargmann_oracle():
    # the signed area also lives in the three-point overlap product
    # <v1|v2><v2|v3><v3|v1>; with counterclockwise-positive orientation
    # that product carries +Omega/2
    par = transport.parallelize(evolve(*geodesic_loop(*TRIANGLE)), np.eye(2))
    v1, v2, v3 = (bloch_ket(v) for v in TRIANGLE)
    bargmann = (v1.conj() @ v2) * (v2.conj() @ v3) * (v3.conj() @ v1)
    want = 2 * np.angle(bargmann)
    assert transport.solid_angle(par) == pytest.approx(want, abs=1e-6)


def test_solid_angle_full_great_circle():
    # a great circle bounds a hemisphere: 2*pi, kept off the principal branch
    par = transport.parallelize(evolve(segment((0, 1, 0), 2 * np.pi, steps=800)), np.eye(2))
    assert abs(transport.solid_angle(par)) == pytest.approx(2 * np.pi, abs=1e-6)


def test_solid_angle_needs_qubit():
    par = transport.parallelize(
        transport.evolve([transport.PathSegment(generator=np.eye(3), duration=0.5)]),
        np.eye(3),
    )
    with pytest.raises(ShapeMismatch):
        transport.solid_angle(par)


def test_random_geodesic_paths_are_reproducible():
    rng1 = np.random.default_rng(42)
    rng2 = np.random.default_rng(42)
    segs1 = transport.random_geodesic_path(rng1)
    segs2 = transport.random_geodesic_path(rng2)
    assert len(segs1) == len(segs2)
    for a, b in zip(segs1, segs2):
        np.testing.assert_allclose(a.generator, b.generator)
        assert a.duration == b.duration


def test_random_geodesic_path_transports_cleanly():
    rng = np.random.default_rng(1)
    for _ in range(5):
        segs = transport.random_geodesic_path(rng)
        par = transport.parallelize(transport.evolve(segs), np.eye(2))
        assert par.pt_residual < 1e-6
