import math

import numpy as np
import pytest

from su2pulse import (
    DomainError,
    brute_force_min_time,
    euler_from_gate,
    gate_at,
    gate_distance,
    gate_from_euler,
    propagate_law,
    random_gate,
    synthesize,
    synthesize_general,
    synthesize_xy_rotation,
    synthesize_z_rotation,
    trajectory_point,
    xyrot_gate,
    zrot_gate,
    z_rotation_parameters,
    parse_target,
)

TWO_PI = 2 * math.pi


# ---------------------------------------------------------------------------
# z-axis closed form
# ---------------------------------------------------------------------------

def test_z_identity():
    r = synthesize_z_rotation(0.0)
    assert r.law.tf == 0.0 and r.residual == 0.0


def test_z_full_turn():
    r = synthesize_z_rotation(TWO_PI)
    assert r.law.p2 == 0.0
    assert abs(r.law.tf - math.pi) < 1e-15
    # reaches -identity
    assert gate_distance(propagate_law(r.law), zrot_gate(TWO_PI)) < 1e-6
    got = propagate_law(r.law)
    assert abs(got.x1 + 1.0) < 1e-9


def test_z_half_turn_values():
    r = synthesize_z_rotation(math.pi)
    assert abs(r.law.p2 - 1.0 / math.sqrt(3.0)) < 1e-15
    assert abs(r.law.tf - math.sqrt(3.0) * math.pi / 2.0) < 1e-14
    assert r.residual < 1e-6


@pytest.mark.parametrize("lam", [-1.9 * math.pi, -math.pi / 3, 0.7, math.pi, 5.1])
def test_z_rotation_propagates(lam):
    r = synthesize_z_rotation(lam if abs(lam) <= TWO_PI else lam - 2 * TWO_PI)
    assert r.residual < 1e-6


def test_z_rejects_out_of_range():
    with pytest.raises(DomainError):
        synthesize_z_rotation(2.1 * math.pi)


def test_z_phi0_degeneracy():
    # two different phi0 give the same gate and the same duration
    ra = synthesize_z_rotation(1.1, phi0=0.0)
    rb = synthesize_z_rotation(1.1, phi0=2.2)
    assert ra.law.tf == rb.law.tf
    assert gate_distance(propagate_law(ra.law), propagate_law(rb.law)) < 1e-9


def test_z_trajectory_closes_at_pole():
    r = synthesize_z_rotation(1.7)
    assert trajectory_point(r.law, 0.0).euler[1] == 0.0
    assert abs(trajectory_point(r.law, r.law.tf).euler[1]) < 1e-8


def test_z_tf_monotone_in_lambda():
    lams = np.linspace(0.0, TWO_PI, 60)
    tfs = [z_rotation_parameters(l)[1] for l in lams]
    assert all(b > a - 1e-15 for a, b in zip(tfs, tfs[1:]))


# ---------------------------------------------------------------------------
# transverse-plane closed form
# ---------------------------------------------------------------------------

def test_xy_refocusing_pulse():
    r = synthesize_xy_rotation(0.0, math.pi)
    assert r.law.tf == math.pi / 2.0
    assert r.residual < 1e-6


def test_xy_quarter_turn():
    r = synthesize_xy_rotation(0.0, math.pi / 2.0)
    assert r.law.tf == math.pi / 4.0
    assert r.residual < 1e-6


def test_xy_continuity_at_identity():
    r = synthesize_xy_rotation(0.3, 1e-9)
    assert r.law.tf == 5e-10


def test_xy_domain_errors():
    with pytest.raises(DomainError):
        synthesize_xy_rotation(3.5, 1.0)
    with pytest.raises(DomainError):
        synthesize_xy_rotation(0.0, 0.0)
    with pytest.raises(DomainError):
        synthesize_xy_rotation(0.0, TWO_PI)


def test_xy_great_circle_trajectory(rng):
    r = synthesize_xy_rotation(1.1, 2.0, verify=False)
    # theta2 of the running chart stays zero before the fold
    for t in np.linspace(0.0, r.law.tf, 20):
        tp = trajectory_point(r.law, float(t))
        assert abs(tp.hopf[1]) < 1e-12


# ---------------------------------------------------------------------------
# general solve
# ---------------------------------------------------------------------------

def test_general_reproduces_xy_law():
    a, b = 0.7, 2.1
    rx = synthesize_xy_rotation(a, b, verify=False)
    rg = synthesize_general(xyrot_gate(a, b), verify=False)
    assert abs(rg.law.phi0 - rx.law.phi0) < 1e-9
    assert abs(rg.law.p2 - rx.law.p2) < 1e-9
    assert abs(rg.law.tf - rx.law.tf) < 1e-9


def test_general_reproduces_long_way_xy_law():
    # b > pi folds to a different canonical Euler triple but keeps tf = b/2
    a, b = -0.4, 4.9
    rg = synthesize_general(xyrot_gate(a, b), verify=False)
    assert abs(rg.law.tf - b / 2.0) < 1e-9


def test_general_delegates_z_targets():
    rg = synthesize_general(zrot_gate(1.3))
    assert abs(rg.law.tf - z_rotation_parameters(1.3)[1]) < 1e-14


def test_general_z_limit_continuity():
    # theta* -> 0 durations approach the z closed form
    tf_z = z_rotation_parameters(math.pi)[1]
    errs = []
    for th in (1e-2, 1e-3, 1e-4):
        g = gate_from_euler(math.pi - 0.3, th, 0.3)
        r = synthesize_general(g, verify=False)
        errs.append(abs(r.law.tf - tf_z))
    assert errs[0] < 1e-2 and errs[1] < 1e-3 and errs[2] < 1e-4


def test_general_random_targets(rng):
    for _ in range(30):
        g = random_gate(rng)
        r = synthesize_general(g)
        assert r.residual < 1e-6
        assert abs(r.eta_final) <= TWO_PI + 1e-12


def test_general_vs_brute_force(rng):
    for _ in range(8):
        g = random_gate(rng)
        r = synthesize_general(g, verify=False)
        bf = brute_force_min_time(g, grid=1024)
        assert abs(r.law.tf - bf) < 1e-4


def test_eta_bound_strict_off_z_axis(rng):
    for _ in range(20):
        g = random_gate(rng)
        e = euler_from_gate(g)
        if e.theta < 1e-6:
            continue
        r = synthesize_general(g, verify=False)
        assert abs(r.eta_final) < TWO_PI


def test_theta2_monotone_along_optimal(rng):
    # strictly increasing, strictly decreasing, or identically zero
    for _ in range(15):
        g = random_gate(rng)
        r = synthesize_general(g, verify=False)
        t2 = [trajectory_point(r.law, float(t)).hopf[1]
              for t in np.linspace(1e-9, r.law.tf, 1000)]
        d = np.diff(t2)
        assert (np.all(d > -1e-12) or np.all(d < 1e-12)
                or np.abs(t2).max() < 1e-9)


def test_south_pole_target():
    g = gate_from_euler(0.8, math.pi, 0.0)
    r = synthesize_general(g)
    assert abs(r.law.tf - math.pi / 2.0) < 1e-12
    assert r.residual < 1e-6


def test_brute_force_z_target():
    want = 0.5 * math.sqrt(4.0 * math.pi * (math.pi / 2.0) - (math.pi / 2.0) ** 2)
    got = brute_force_min_time(zrot_gate(math.pi / 2.0), grid=1024)
    assert abs(got - want) < 1e-3


def test_brute_force_xy_target():
    got = brute_force_min_time(xyrot_gate(0.0, math.pi), grid=1024)
    assert abs(got - math.pi / 2.0) < 1e-3


def test_brute_force_identity():
    assert brute_force_min_time(zrot_gate(0.0), grid=512) == 0.0


def test_brute_force_grid_floor():
    with pytest.raises(DomainError):
        brute_force_min_time(zrot_gate(1.0), grid=100)


def test_z_full_turn_no_faster_partial_arc():
    # 2d scan over (circle tilt, time): no normal extremal reaches -I
    # meaningfully faster than the full great circle at tf = pi
    from su2pulse import ExtremalLaw
    minus_i = zrot_gate(TWO_PI)
    best = math.inf
    for p2 in np.tan(np.pi / 2 - np.linspace(0.05, math.pi - 0.05, 150)):
        sb = math.sin(math.atan2(1.0, p2))
        law = ExtremalLaw(phi0=0.0, p2=float(p2), delta=0.0, tf=math.pi * sb)
        for t in np.linspace(0.02, law.tf, 150):
            if gate_distance(gate_at(law, float(t)), minus_i) < 0.05:
                best = min(best, float(t))
                break
    assert math.pi - 0.1 <= best <= math.pi + 1e-9


def test_synthesize_dispatcher():
    r = synthesize(parse_target("zrot:1.0"))
    assert abs(r.law.tf - z_rotation_parameters(1.0)[1]) < 1e-15
    r = synthesize(parse_target("xyrot:0.0,1.0"))
    assert r.law.tf == 0.5
    r = synthesize(parse_target("euler:0.5,1.0,-0.5"))
    assert r.residual < 1e-6
