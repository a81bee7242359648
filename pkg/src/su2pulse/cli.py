"""Command-line surface: synthesize pulses, replay and verify them, and
emit figure-ready sweep data.

Exit codes: 0 success, 2 parse/usage error, 3 synthesis failure,
4 verification residual above tolerance. All angles are radians and all
times are in normalized units (physical seconds require --omega-max,
t_phys = 2 t / omega_max).
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from . import detuned, dynamics, resonant, so3, su2
from .errors import DomainError, NonUnitary, NonUnitDeterminant, Su2PulseError

HEADER_VERSION = 1

_AXES = {
    "x": (1.0, 0.0, 0.0),
    "y": (0.0, 1.0, 0.0),
    "z": (0.0, 0.0, 1.0),
    "yz": (0.0, 1.0 / math.sqrt(2.0), 1.0 / math.sqrt(2.0)),
}


@dataclass
class RunConfig:
    """Resolved options for one command; JSON-serializable, and explicit
    CLI flags override values loaded from --config."""

    command: str
    target: str | None = None
    delta: float = 0.0
    out: str = "."
    samples: int = dynamics.DEFAULT_SAMPLES
    tol: float = 1e-6
    omega_max: float | None = None
    pulse: str | None = None
    axis: str = "y"
    alpha_steps: int = 721
    delta_min: float = -3.0
    delta_max: float = 3.0
    delta_steps: int = 241

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, d: dict) -> "RunConfig":
        names = {f.name for f in fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise DomainError(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="su2pulse",
        description="Time-optimal SU(2) pulse synthesis and verification.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, target=True):
        sp.add_argument("--config", help="JSON config file; explicit flags override it")
        sp.add_argument("--out", help="output directory (default: .)")
        sp.add_argument("--tol", type=float, help="verification tolerance (default 1e-6)")
        sp.add_argument("--samples", type=int, help="pulse/trajectory samples (default 2048)")
        sp.add_argument("--omega-max", dest="omega_max", type=float,
                        help="physical drive scale in rad/s, for unit conversion")
        if target:
            sp.add_argument("--target", help="gate spec, e.g. zrot:3.14159, "
                            "xyrot:0,1.57, euler:p,t,f, quat:a,b,c,d, "
                            "axis:alpha@nx,ny,nz, matrix:[[..],[..]]")
            sp.add_argument("--delta", type=float, help="normalized detuning (default 0)")

    sp = sub.add_parser("synthesize", help="synthesize a time-optimal pulse")
    common(sp)
    sp = sub.add_parser("propagate", help="replay a pulse file and print the gate")
    common(sp, target=False)
    sp.add_argument("pulse", help="pulse CSV written by synthesize")
    sp = sub.add_parser("verify", help="replay a pulse and compare to its declared target")
    common(sp, target=False)
    sp.add_argument("pulse", help="pulse CSV written by synthesize")
    sp = sub.add_parser("sweep-angle", help="duration vs rotation angle for U and -U")
    common(sp, target=False)
    sp.add_argument("--axis", help="x, y, z, yz, or nx,ny,nz (default y)")
    sp.add_argument("--alpha-steps", dest="alpha_steps", type=int,
                    help="grid points over [0, 4pi] (default 721)")
    sp = sub.add_parser("sweep-detuning", help="T_diff analysis over a detuning grid")
    common(sp)
    sp.add_argument("--delta-min", dest="delta_min", type=float)
    sp.add_argument("--delta-max", dest="delta_max", type=float)
    sp.add_argument("--delta-steps", dest="delta_steps", type=int)
    sp = sub.add_parser("so3-select", help="which of U, -U is faster to generate")
    common(sp)
    return p


def resolve_config(args: argparse.Namespace) -> RunConfig:
    values = {k: v for k, v in vars(args).items() if v is not None}
    cfg_path = values.pop("config", None)
    base = {}
    if cfg_path:
        with open(cfg_path, "r", encoding="utf-8") as fh:
            base = json.load(fh)
        base.pop("command", None)
    merged = {**base, **values}
    return RunConfig.from_json({"command": args.command, **merged})


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _synthesize(cfg: RunConfig) -> resonant.SynthesisResult:
    if not cfg.target:
        raise DomainError("--target is required")
    parsed = su2.parse_target(cfg.target)
    return resonant.synthesize(parsed, delta=cfg.delta)


def _pulse_paths(out: str) -> tuple[Path, Path, Path]:
    d = Path(out)
    d.mkdir(parents=True, exist_ok=True)
    return d / "pulse.csv", d / "pulse.json", d / "trajectory.csv"


def cmd_synthesize(cfg: RunConfig) -> int:
    result = _synthesize(cfg)
    law = result.law
    schedule = dynamics.schedule_from_law(law, cfg.samples, omega_max=cfg.omega_max)
    csv_path, json_path, traj_path = _pulse_paths(cfg.out)
    dynamics.write_pulse_csv(schedule, csv_path)
    header = {
        "version": HEADER_VERSION,
        "target": su2.target_to_json(result.target),
        "delta": law.delta,
        "phi0": law.phi0,
        "p2": law.p2,
        "tf": law.tf,
        "residual": result.residual,
        "omega_max": cfg.omega_max,
    }
    with open(json_path, "w", encoding="utf-8") as fh:
        json.dump(header, fh, indent=2, sort_keys=True)
        fh.write("\n")
    dynamics.write_trajectory_csv(law, traj_path, cfg.samples)
    print(f"phi0 = {law.phi0:.12g}")
    print(f"p2 = {law.p2:.12g}")
    print(f"tf = {law.tf:.12g}")
    if cfg.omega_max:
        print(f"tf_physical = {2.0 * law.tf / cfg.omega_max:.12g} s")
    print(f"residual = {result.residual:.3e}")
    print(f"wrote {csv_path}, {json_path}, {traj_path}")
    return 0 if result.residual < cfg.tol else 4


def _read_pulse(cfg: RunConfig) -> tuple[dynamics.PulseSchedule, dict]:
    csv_path = Path(cfg.pulse)
    json_path = csv_path.with_suffix(".json")
    header = {}
    if json_path.exists():
        with open(json_path, "r", encoding="utf-8") as fh:
            header = json.load(fh)
    schedule = dynamics.read_pulse_csv(
        csv_path,
        delta=float(header.get("delta", cfg.delta)),
        omega_max=header.get("omega_max"),
    )
    return schedule, header


def cmd_propagate(cfg: RunConfig) -> int:
    schedule, _ = _read_pulse(cfg)
    gate = dynamics.propagate_schrodinger(schedule)
    e = su2.euler_from_gate(gate)
    print(f"quaternion = ({gate.x1:.12g}, {gate.x2:.12g}, {gate.x3:.12g}, {gate.x4:.12g})")
    print(f"euler = (psi={e.psi:.12g}, theta={e.theta:.12g}, phi={e.phi:.12g})")
    return 0


def cmd_verify(cfg: RunConfig) -> int:
    schedule, header = _read_pulse(cfg)
    if "target" not in header:
        raise DomainError("pulse header lacks a target record")
    target = su2.target_from_json(header["target"])
    want = su2.gate_from_euler(target.psi, target.theta, target.phi)
    gate = dynamics.propagate_schrodinger(schedule)
    residual = su2.gate_distance(gate, want)
    e = su2.euler_from_gate(gate)
    print(f"achieved euler = (psi={e.psi:.12g}, theta={e.theta:.12g}, phi={e.phi:.12g})")
    print(f"declared target = (psi={target.psi:.12g}, theta={target.theta:.12g}, "
          f"phi={target.phi:.12g})")
    print(f"residual = {residual:.3e} (tolerance {cfg.tol:g})")
    return 0 if residual < cfg.tol else 4


def _parse_axis(text: str):
    if text in _AXES:
        return _AXES[text]
    parts = [p for p in text.split(",") if p.strip()]
    if len(parts) != 3:
        raise DomainError(f"axis {text!r}: expected x/y/z/yz or nx,ny,nz")
    v = np.array([float(p) for p in parts])
    n = float(np.linalg.norm(v))
    if n == 0.0:
        raise DomainError("axis must be nonzero")
    return tuple(v / n)


def cmd_sweep_angle(cfg: RunConfig) -> int:
    axis = _parse_axis(cfg.axis)
    alphas = np.linspace(0.0, 4.0 * math.pi, max(1, cfg.alpha_steps))
    rows = so3.sweep_rotation_angle(axis, alphas)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "sweep_angle.csv"
    so3.write_sweep_csv(rows, path)
    cross = so3.crossing_angles(rows)
    print(f"wrote {path} ({len(rows)} rows)")
    print("crossings:", " ".join(f"{c:.6g}" for c in cross))
    return 0


def cmd_sweep_detuning(cfg: RunConfig) -> int:
    if not cfg.target:
        raise DomainError("--target is required")
    parsed = su2.parse_target(cfg.target)
    grid = np.linspace(cfg.delta_min, cfg.delta_max, max(2, cfg.delta_steps))
    report = detuned.tdiff_analysis(parsed.gate, grid)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "tdiff.csv"
    detuned.write_tdiff_csv(report, path)
    print(f"wrote {path} ({grid.size} rows)")
    for d, kind in report.events:
        print(f"sign change near delta = {d:.6g} ({kind})")
    return 0


def cmd_so3_select(cfg: RunConfig) -> int:
    if not cfg.target:
        raise DomainError("--target is required")
    parsed = su2.parse_target(cfg.target)
    dec = so3.select_faster(parsed.gate)
    print(f"chosen = {dec.chosen}")
    print(f"tf(U) = {dec.tf_plus:.12g}")
    print(f"tf(-U) = {dec.tf_minus:.12g}")
    print(f"tie = {str(dec.tie).lower()}")
    return 0


_COMMANDS = {
    "synthesize": cmd_synthesize,
    "propagate": cmd_propagate,
    "verify": cmd_verify,
    "sweep-angle": cmd_sweep_angle,
    "sweep-detuning": cmd_sweep_detuning,
    "so3-select": cmd_so3_select,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        code = _COMMANDS[cfg.command](cfg)
    except (DomainError, NonUnitary, NonUnitDeterminant,
            FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Su2PulseError as exc:
        print(f"synthesis error: {exc}", file=sys.stderr)
        return 3
    return code


if __name__ == "__main__":
    sys.exit(main())
