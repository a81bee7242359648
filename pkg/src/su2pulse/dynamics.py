"""Extremal trajectories in closed form, plus independent ODE propagators.

The controlled Schrodinger equation i dU/dt = (vx sx + vy sy + delta sz) U
is integrated in three charts:

  * closed form: the projected trajectory (theta(t), phi(t)) is a circle
    around the axis (theta_bar, phi_bar) traversed at speed 2, and psi(t)
    follows from the circle azimuth; only psi feels the detuning, picking
    up an extra -2*delta*t.
  * quaternion RK4: the linear 4d ODE xdot = L x, the reference oracle.
  * Hopf RK4: the (theta1, theta2, theta3) chart with tan/cot poles at
    theta1 in {0, pi/2}; agreement with the quaternion chart is the
    executable form of the coordinate-change derivation.

An extremal is pinned by (phi0, p2, delta, tf). Time is normalized:
t here is (omega_max/2) * t_physical, and the drive amplitude is 1 for
every normal extremal.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PoleEncountered, StepTooLarge
from .su2 import TWO_PI, HopfCoords, UnitGate, gate_from_hopf, identity_gate

DEFAULT_STEPS = 10_000          # RK4 steps per propagation, step = tf / this
DEFAULT_SAMPLES = 2048          # samples per exported pulse schedule
_TRUNC_CHECK_EVERY = 64         # Richardson check cadence inside RK4
_TRUNC_LIMIT = 1e-8


@dataclass(frozen=True)
class ExtremalLaw:
    """One normal extremal: initial azimuth phi0, constant adjoint p2,
    normalized detuning delta, and duration tf. Controls and the full
    trajectory are closed-form functions of these four numbers."""

    phi0: float
    p2: float
    delta: float
    tf: float

    def __post_init__(self):
        if self.tf < 0.0 or not math.isfinite(self.tf):
            raise DomainError(f"tf = {self.tf!r} must be finite and >= 0")
        if not math.isfinite(self.p2):
            raise DomainError("p2 must be finite")


@dataclass(frozen=True)
class AdjointState:
    """Adjoint variables at one instant; p1..p3 are N-normalized, N carries
    the overall scale fixed by the zero-Hamiltonian condition."""

    p1: float
    p2: float
    p3: float
    p0: float
    N: float


@dataclass(frozen=True)
class TrajectoryPoint:
    t: float
    euler: tuple[float, float, float]      # (psi, theta, phi), running values
    hopf: tuple[float, float, float]       # (theta1, theta2, theta3)
    controls: tuple[float, float, float, float, float]  # (u1, u2, mu, beta, v0)
    eta: float


@dataclass(frozen=True)
class CircleGeometry:
    """Axis of the projected circle: inclination theta_bar = atan2(1, p2) in
    (0, pi), azimuth phi_bar = phi0 + pi/2, unit vector n_bar."""

    theta_bar: float
    phi_bar: float
    n_bar: tuple[float, float, float]


@dataclass(frozen=True)
class PulseSchedule:
    """Time-sampled physical controls (t, vx, vy) plus normalization metadata.

    samples is an (n, 3) float array with strictly increasing times from 0
    to tf; omega_max (rad/s), when set, converts back to physical units via
    t_phys = 2 t / omega_max, omega_i = v_i * omega_max.
    """

    samples: np.ndarray
    delta: float
    omega_max: float | None = None

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        if s.size == 0:
            s = s.reshape(0, 3)
        if s.ndim != 2 or s.shape[1] != 3:
            raise DomainError("samples must be an (n, 3) array of (t, vx, vy)")
        object.__setattr__(self, "samples", s)
        if s.shape[0]:
            if s[0, 0] != 0.0 or np.any(np.diff(s[:, 0]) <= 0.0):
                raise DomainError("sample times must start at 0 and increase strictly")
            amp2 = s[:, 1] ** 2 + s[:, 2] ** 2
            if np.any(amp2 > 1.0 + 1e-12):
                raise DomainError("control amplitude exceeds the unit bound")

    @property
    def tf(self) -> float:
        return float(self.samples[-1, 0]) if self.samples.shape[0] else 0.0


# ---------------------------------------------------------------------------
# closed-form trajectory
# ---------------------------------------------------------------------------

def circle_geometry(law: ExtremalLaw) -> CircleGeometry:
    tb = math.atan2(1.0, law.p2)
    pb = law.phi0 + math.pi / 2.0
    sb = math.sin(tb)
    return CircleGeometry(tb, pb, (sb * math.cos(pb), sb * math.sin(pb), math.cos(tb)))


def _circle_azimuth_offset(eta: float, cos_bar: float) -> float:
    """Azimuth of the projected point relative to phi0 + pi/2.

    Continuous over each revolution of eta with limit -pi/2 as eta -> 0+;
    on a great circle (cos_bar = 0) it is the exact +-pi/2 meridian pair.
    """
    er = eta % TWO_PI
    if er < 1e-14:
        return -math.pi / 2.0
    if abs(cos_bar) < 1e-15:
        return -math.pi / 2.0 if er <= math.pi else math.pi / 2.0
    raw = math.atan2(-math.sin(er), cos_bar * (1.0 - math.cos(er)))
    if cos_bar < 0.0 and raw > 0.0:
        raw -= TWO_PI
    return raw


def control_phase(law: ExtremalLaw, t: float) -> float:
    """mu(t) = phi0 - pi/2 + (2 p2 + 2 delta) t, the drive phase."""
    return law.phi0 - math.pi / 2.0 + (2.0 * law.p2 + 2.0 * law.delta) * t


def control_at(law: ExtremalLaw, t: float) -> tuple[float, float]:
    """Physical controls (vx, vy) = (cos mu, sin mu) at time t."""
    if not (0.0 <= t <= law.tf + 1e-12):
        raise DomainError(f"t = {t:.12g} outside [0, tf = {law.tf:.12g}]")
    mu = control_phase(law, t)
    return math.cos(mu), math.sin(mu)


def trajectory_point(law: ExtremalLaw, t: float) -> TrajectoryPoint:
    """Closed-form state at time t.

    theta(t) = acos(1 - sin^2(theta_bar) (1 - cos eta)) with
    eta = 2 t / sin(theta_bar); phi follows the circle azimuth; psi is the
    resonant value minus 2*delta*t (detuning shifts psi only). The p2 = 0
    limit degenerates to a great circle with phi(t) = phi0.
    """
    tb = math.atan2(1.0, law.p2)
    sb, cb = math.sin(tb), math.cos(tb)
    eta = 2.0 * t / sb
    # stable form of acos(1 - sin^2(tb) (1 - cos eta)) near the poles
    theta = 2.0 * math.asin(min(1.0, sb * abs(math.sin(eta / 2.0))))
    if eta % TWO_PI < 1e-14:
        # on the pole itself the azimuth is a gauge; take phi0 at t = 0 and
        # the from-below limit phi0 +- pi after whole revolutions, so that
        # psi + phi remains the correct accumulated z-angle
        phi = law.phi0 if eta < 1e-14 else law.phi0 + math.copysign(math.pi, law.p2)
    else:
        phi = law.phi0 + math.pi / 2.0 + _circle_azimuth_offset(eta, cb)
    psi = -2.0 * law.phi0 + phi - 2.0 * (law.p2 + law.delta) * t
    mu = control_phase(law, t)
    beta = mu + psi
    u1, u2 = -math.sin(beta), -math.cos(beta)
    return TrajectoryPoint(
        t=t,
        euler=(psi, theta, phi),
        hopf=(theta / 2.0, (psi + phi) / 2.0, (psi - phi) / 2.0),
        controls=(u1, u2, mu, beta, 1.0),
        eta=eta,
    )


def gate_at(law: ExtremalLaw, t: float) -> UnitGate:
    """Closed-form gate at time t."""
    tp = trajectory_point(law, t)
    return gate_from_hopf(tp.hopf)


def sphere_point(theta: float, phi: float) -> tuple[float, float, float]:
    st = math.sin(theta)
    return (st * math.cos(phi), st * math.sin(phi), math.cos(theta))


def adjoint_at(law: ExtremalLaw, t: float, p2: float | None = None) -> AdjointState:
    """Adjoint state along the trajectory; p1 is read off the closed form
    (p1 = u1), p3 vanishes identically, and N is the unnormalized scale
    1 / (1 - p2 * delta) times the normalized magnitude."""
    p2c = law.p2 if p2 is None else p2
    tp = trajectory_point(law, t)
    theta1 = tp.hopf[0]
    p1 = tp.controls[0]
    tan1 = math.tan(theta1)
    norm = math.hypot(p1, p2c * tan1) if p2c != 0.0 else abs(p1)
    scale = 1.0 / (1.0 - p2c * law.delta)
    return AdjointState(p1=p1, p2=p2c, p3=0.0, p0=-1.0, N=scale * norm)


def hamiltonian_residual(law: ExtremalLaw, t: float, p2: float | None = None) -> float:
    """|maximized Pontryagin Hamiltonian| at time t with p0 = -1.

    The unnormalized value is scale*(norm - p2*delta) - 1, where norm is the
    normalized adjoint magnitude (identically 1 on a consistent extremal) and
    scale = 1/(1 - p2*delta) fixes the adjoint ray. Zero along the law;
    passing an inconsistent p2 override exposes the gap.
    """
    p2c = law.p2 if p2 is None else p2
    tp = trajectory_point(law, t)
    p1 = tp.controls[0]
    norm = math.hypot(p1, p2c * math.tan(tp.hopf[0])) if p2c != 0.0 else abs(p1)
    scale = 1.0 / (1.0 - p2c * law.delta)
    return abs(scale * (norm - p2c * law.delta) - 1.0)


# ---------------------------------------------------------------------------
# quaternion-chart propagation (reference oracle)
# ---------------------------------------------------------------------------

def _quat_rhs(x, vx, vy, d):
    x1, x2, x3, x4 = x
    return (
        d * x2 + vy * x3 + vx * x4,
        -d * x1 + vx * x3 - vy * x4,
        -vy * x1 - vx * x2 + d * x4,
        -vx * x1 + vy * x2 - d * x3,
    )


def _rk4_quat(control, delta: float, tf: float, n_steps: int,
              check_truncation: bool = True) -> UnitGate:
    """Classical RK4 on xdot = L(t) x with per-step renormalization."""
    if tf == 0.0 or n_steps == 0:
        return identity_gate
    h = tf / n_steps
    x = (1.0, 0.0, 0.0, 0.0)
    for i in range(n_steps):
        t = i * h
        x_new = _rk4_quat_step(x, t, h, control, delta)
        if check_truncation and i % _TRUNC_CHECK_EVERY == 0:
            xa = _rk4_quat_step(x, t, h / 2.0, control, delta)
            xb = _rk4_quat_step(xa, t + h / 2.0, h / 2.0, control, delta)
            err = math.sqrt(sum((x_new[k] - xb[k]) ** 2 for k in range(4))) / 15.0
            if err > _TRUNC_LIMIT:
                raise StepTooLarge(
                    f"local truncation estimate {err:.3e} > {_TRUNC_LIMIT:g} at t = {t:.6g}; "
                    f"reduce the step (h = {h:.3e})"
                )
        nrm = math.sqrt(x_new[0] ** 2 + x_new[1] ** 2 + x_new[2] ** 2 + x_new[3] ** 2)
        x = (x_new[0] / nrm, x_new[1] / nrm, x_new[2] / nrm, x_new[3] / nrm)
    return UnitGate(*x)


def _rk4_quat_step(x, t, h, control, delta):
    vx1, vy1 = control(t)
    k1 = _quat_rhs(x, vx1, vy1, delta)
    vxm, vym = control(t + h / 2.0)
    xm = (x[0] + h / 2.0 * k1[0], x[1] + h / 2.0 * k1[1],
          x[2] + h / 2.0 * k1[2], x[3] + h / 2.0 * k1[3])
    k2 = _quat_rhs(xm, vxm, vym, delta)
    xm = (x[0] + h / 2.0 * k2[0], x[1] + h / 2.0 * k2[1],
          x[2] + h / 2.0 * k2[2], x[3] + h / 2.0 * k2[3])
    k3 = _quat_rhs(xm, vxm, vym, delta)
    vxe, vye = control(t + h)
    xe = (x[0] + h * k3[0], x[1] + h * k3[1], x[2] + h * k3[2], x[3] + h * k3[3])
    k4 = _quat_rhs(xe, vxe, vye, delta)
    return (
        x[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        x[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        x[2] + h / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]),
        x[3] + h / 6.0 * (k1[3] + 2.0 * k2[3] + 2.0 * k3[3] + k4[3]),
    )


def propagate_law(law: ExtremalLaw, n_steps: int = DEFAULT_STEPS) -> UnitGate:
    """RK4-propagate the law's analytic controls through the quaternion ODE."""
    mu0 = law.phi0 - math.pi / 2.0
    slope = 2.0 * law.p2 + 2.0 * law.delta

    def control(t):
        m = mu0 + slope * t
        return math.cos(m), math.sin(m)

    return _rk4_quat(control, law.delta, law.tf, n_steps)


def propagate_schrodinger(schedule: PulseSchedule, dt: float | None = None) -> UnitGate:
    """RK4-propagate a sampled pulse; the independent oracle for synthesis.

    The sampled (vx, vy) pairs are interpolated in polar form (amplitude and
    unwrapped phase vary linearly between samples), which represents constant
    amplitude, linear-phase pulses exactly. Raises StepTooLarge when the
    periodic local-truncation estimate exceeds 1e-8.
    """
    s = schedule.samples
    if s.shape[0] == 0:
        return identity_gate
    tf = schedule.tf
    if tf == 0.0:
        return identity_gate
    if dt is None:
        n_steps = DEFAULT_STEPS
    else:
        if dt <= 0.0:
            raise DomainError("dt must be positive")
        n_steps = max(1, int(math.ceil(tf / dt)))
    times = s[:, 0]
    amp = np.hypot(s[:, 1], s[:, 2])
    phase = np.unwrap(np.arctan2(s[:, 2], s[:, 1]))

    def control(t):
        a = float(np.interp(t, times, amp))
        m = float(np.interp(t, times, phase))
        return a * math.cos(m), a * math.sin(m)

    return _rk4_quat(control, schedule.delta, tf, n_steps)


# ---------------------------------------------------------------------------
# Hopf-chart propagation
# ---------------------------------------------------------------------------

def hopf_rates(state, u1: float, u2: float, delta: float):
    """Right-hand side of the Hopf-chart ODE for rotated controls (u1, u2)."""
    theta1 = state[0]
    return (u1, -math.tan(theta1) * u2 - delta, 1.0 / math.tan(theta1) * u2 - delta)


def _exact_step_hopf(state, vx, vy, delta, h):
    """Advance the gate by exp(-i h H) for constant H, in the Hopf chart.

    Used to bootstrap the integration off the theta1 = 0 pole at t = 0,
    where cot(theta1) is singular. Exact for constant controls.
    """
    g = gate_from_hopf(state)
    w = math.sqrt(vx * vx + vy * vy + delta * delta)
    if w == 0.0:
        return state
    c, s = math.cos(w * h), math.sin(w * h) / w
    x = g.quat
    lx = _quat_rhs(x, vx, vy, delta)
    g2 = UnitGate(*(c * x[i] + s * lx[i] for i in range(4)))
    m12 = math.hypot(g2.x1, g2.x2)
    m34 = math.hypot(g2.x3, g2.x4)
    return (math.atan2(m34, m12), math.atan2(g2.x2, g2.x1), math.atan2(g2.x4, g2.x3))


def propagate_hopf(law: ExtremalLaw, n_steps: int = DEFAULT_STEPS,
                   control_fn=None) -> HopfCoords:
    """Integrate the Hopf-chart ODE driven by physical controls.

    Independent of the closed form: the rotated controls are recomputed from
    (vx, vy) and the running theta2 + theta3 at every stage. The first step
    leaves the theta1 = 0 pole with an exact constant-field step. A rate
    blow-up at a tan/cot pole mid-trajectory (which a normal extremal never
    produces) raises PoleEncountered. control_fn overrides the law's
    analytic controls with an arbitrary t -> (vx, vy) map.
    """
    if law.tf == 0.0:
        return HopfCoords(0.0, 0.0, 0.0, gauge=True)
    mu0 = law.phi0 - math.pi / 2.0
    slope = 2.0 * law.p2 + 2.0 * law.delta
    delta = law.delta

    if control_fn is None:
        def vxy(t):
            m = mu0 + slope * t
            return math.cos(m), math.sin(m)
    else:
        vxy = control_fn

    def rotated_controls(t, st):
        vx, vy = vxy(t)
        ps = st[1] + st[2]
        cps, sps = math.cos(ps), math.sin(ps)
        return -vx * sps - vy * cps, -vx * cps + vy * sps

    def rhs(t, st):
        u1, u2 = rotated_controls(t, st)
        tan1 = math.tan(st[0])
        return (u1, -tan1 * u2 - delta, u2 / tan1 - delta)

    h = law.tf / n_steps
    vx0, vy0 = vxy(h / 2.0)
    state = _exact_step_hopf((0.0, 0.0, math.atan2(-vxy(0.0)[0], -vxy(0.0)[1])),
                             vx0, vy0, delta, h)
    t = h
    for _ in range(n_steps - 1):
        k1 = rhs(t, state)
        s2 = tuple(state[i] + h / 2.0 * k1[i] for i in range(3))
        k2 = rhs(t + h / 2.0, s2)
        s3 = tuple(state[i] + h / 2.0 * k2[i] for i in range(3))
        k3 = rhs(t + h / 2.0, s3)
        s4 = tuple(state[i] + h * k3[i] for i in range(3))
        k4 = rhs(t + h, s4)
        new = tuple(
            state[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
            for i in range(3)
        )
        t += h
        # crossing a tan/cot pole (theta1 = k pi/2) with the rotated u2
        # switched on blows the chart up; a normal extremal has u2 -> 0 at
        # its poles, so its angles stay slow there. A macroscopic single-step
        # jump in theta2/theta3 on a crossing step is the breakdown signature.
        crossed = (math.sin(2.0 * new[0]) * math.sin(2.0 * state[0]) < 0.0 and
                   abs(new[0] - state[0]) < 0.5)
        if crossed and max(abs(new[1] - state[1]), abs(new[2] - state[2])) > 0.3:
            raise PoleEncountered(
                f"theta1 pole crossed near t = {t:.6g} with residual drive on it"
            )
        if not all(math.isfinite(c) for c in new):
            raise PoleEncountered(f"chart state diverged near t = {t:.6g}")
        state = new
    return HopfCoords(state[0], state[1], state[2])


# ---------------------------------------------------------------------------
# pulse schedules and file formats
# ---------------------------------------------------------------------------

def schedule_from_law(law: ExtremalLaw, n_samples: int = DEFAULT_SAMPLES,
                      omega_max: float | None = None) -> PulseSchedule:
    """Sample the law's controls on a uniform grid; empty for tf = 0."""
    if law.tf == 0.0:
        return PulseSchedule(np.zeros((0, 3)), delta=law.delta, omega_max=omega_max)
    if n_samples < 2:
        raise DomainError("need at least 2 samples")
    t = np.linspace(0.0, law.tf, n_samples)
    mu = law.phi0 - math.pi / 2.0 + (2.0 * law.p2 + 2.0 * law.delta) * t
    return PulseSchedule(
        np.column_stack([t, np.cos(mu), np.sin(mu)]),
        delta=law.delta,
        omega_max=omega_max,
    )


def write_pulse_csv(schedule: PulseSchedule, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("t,vx,vy\n")
        for t, vx, vy in schedule.samples:
            fh.write(f"{t:.17g},{vx:.17g},{vy:.17g}\n")


def read_pulse_csv(path, delta: float = 0.0,
                   omega_max: float | None = None) -> PulseSchedule:
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != "t,vx,vy":
            raise DomainError(f"bad pulse CSV header {header!r}")
        for ln, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 3:
                raise DomainError(f"line {ln}: expected 3 columns")
            try:
                rows.append([float(p) for p in parts])
            except ValueError as exc:
                raise DomainError(f"line {ln}: {exc}") from exc
    return PulseSchedule(np.array(rows).reshape(-1, 3), delta=delta, omega_max=omega_max)


def write_trajectory_csv(law: ExtremalLaw, path, n_samples: int = DEFAULT_SAMPLES) -> None:
    """Sampled closed-form trajectory: t,theta,phi,psi,theta1,theta2,theta3,vx,vy,eta."""
    n = max(2, n_samples)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("t,theta,phi,psi,theta1,theta2,theta3,vx,vy,eta\n")
        if law.tf == 0.0:
            return
        for t in np.linspace(0.0, law.tf, n):
            tp = trajectory_point(law, float(t))
            psi, theta, phi = tp.euler
            t1, t2, t3 = tp.hopf
            mu = tp.controls[2]
            fh.write(
                f"{t:.17g},{theta:.17g},{phi:.17g},{psi:.17g},"
                f"{t1:.17g},{t2:.17g},{t3:.17g},"
                f"{math.cos(mu):.17g},{math.sin(mu):.17g},{tp.eta:.17g}\n"
            )
