"""Shared fixtures and independent numerical oracles for the test suite."""
import math

import numpy as np
import pytest

from su2pulse import ExtremalLaw


@pytest.fixture
def rng():
    return np.random.default_rng(20260808)


def expm2(m: np.ndarray, terms: int = 40) -> np.ndarray:
    """Series matrix exponential with scaling and squaring (2x2 oracle)."""
    m = np.asarray(m, dtype=complex)
    k = max(0, int(math.ceil(math.log2(max(1e-30, np.abs(m).max())))) + 2)
    a = m / (2 ** k)
    out = np.eye(2, dtype=complex)
    term = np.eye(2, dtype=complex)
    for n in range(1, terms):
        term = term @ a / n
        out = out + term
    for _ in range(k):
        out = out @ out
    return out


def euler_ode_oracle(phi0: float, p2: float, delta: float, t_end: float,
                     dt: float = 1e-5):
    """RK4 on the reduced Hamilton system in (theta1, p1, psi, phi).

    Independent of the closed form; rates: theta1' = p1,
    p1' = -p2^2 tan(theta1) sec^2(theta1), psi' = p2 (tan^2 - 1) - 2 delta,
    phi' = p2 sec^2(theta1). Starts at the pole with p1 = 1.
    """
    def rhs(s):
        t1, p1 = s[0], s[1]
        tn = math.tan(t1)
        sec2 = 1.0 + tn * tn
        return np.array([
            p1,
            -p2 * p2 * tn * sec2,
            p2 * (tn * tn - 1.0) - 2.0 * delta,
            p2 * sec2,
        ])

    n = max(1, int(round(t_end / dt)))
    h = t_end / n
    s = np.array([0.0, 1.0, -phi0, phi0])
    for _ in range(n):
        k1 = rhs(s)
        k2 = rhs(s + h / 2 * k1)
        k3 = rhs(s + h / 2 * k2)
        k4 = rhs(s + h * k3)
        s = s + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return {"theta1": s[0], "p1": s[1], "psi": s[2], "phi": s[3]}


def random_law(rng, delta_range=(0.0, 0.0), p2_range=(-3.0, 3.0)) -> ExtremalLaw:
    """Random extremal with duration inside one revolution of its circle."""
    p2 = float(rng.uniform(*p2_range))
    delta = float(rng.uniform(*delta_range))
    phi0 = float(rng.uniform(-math.pi, math.pi))
    sin_bar = math.sin(math.atan2(1.0, p2))
    tf = float(rng.uniform(0.1, 0.95)) * math.pi * sin_bar
    return ExtremalLaw(phi0=phi0, p2=p2, delta=delta, tf=tf)


def gamma_points(law: ExtremalLaw, t: np.ndarray) -> np.ndarray:
    """Vectorized sphere points of the projected trajectory (test-local
    reimplementation, kept independent of the package internals)."""
    tb = math.atan2(1.0, law.p2)
    sb, cb = math.sin(tb), math.cos(tb)
    eta = 2.0 * t / sb
    theta = 2.0 * np.arcsin(np.clip(sb * np.abs(np.sin(eta / 2.0)), 0.0, 1.0))
    raw = np.arctan2(-np.sin(eta % (2 * math.pi)),
                     cb * (1.0 - np.cos(eta % (2 * math.pi))))
    if abs(cb) < 1e-15:
        raw = np.where(eta % (2 * math.pi) <= math.pi, -math.pi / 2, math.pi / 2)
    elif cb < 0.0:
        raw = np.where(raw > 0.0, raw - 2 * math.pi, raw)
    phi = law.phi0 + math.pi / 2.0 + raw
    phi = np.where(eta % (2 * math.pi) < 1e-14, law.phi0, phi)
    return np.stack([np.sin(theta) * np.cos(phi),
                     np.sin(theta) * np.sin(phi),
                     np.cos(theta)], axis=1)
