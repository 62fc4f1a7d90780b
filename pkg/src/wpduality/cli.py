"""Command-line front end: theory curves and Monte Carlo runs as CSV tables.

    wpduality duality-scan [--config PATH] [--set KEY=VALUE ...] [--out PATH]
    wpduality mixed-scan   ...
    wpduality eraser-scan  ...
    wpduality poincare     ...
    wpduality montecarlo   --seed N ...

Every table starts with ``#``-prefixed metadata lines (tool version,
command, config hash, seed) followed by a CSV header and rows.  Output is
a pure function of the resolved config, so reruns are byte-identical.
"""
from __future__ import annotations

import argparse
import io
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .config import ConfigError, ScenarioConfig, load_config
from .eraser import eraser_scan, eraser_sphere_scan, poincare_loci, zero_visibility_angles
from .interferometer import build_joint, visibility
from .metrics import HV_BASIS, distinguishability, knowledge, law_value
from .montecarlo import Scenario, run_duality_experiment
from .polarization import fractional_purity


@dataclass
class OutputTable:
    columns: list[str]
    rows: list[list[float]] = field(default_factory=list)
    metadata: dict[str, str] = field(default_factory=dict)

    def add(self, *values: float) -> None:
        if len(values) != len(self.columns):
            raise ValueError("row length does not match the header")
        self.rows.append([float(v) for v in values])

    def array(self) -> np.ndarray:
        return np.array(self.rows, dtype=float).reshape(len(self.rows), len(self.columns))

    def column(self, name: str) -> np.ndarray:
        return self.array()[:, self.columns.index(name)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        for key, value in self.metadata.items():
            buf.write(f"# {key}: {value}\n")
        buf.write(",".join(self.columns) + "\n")
        for row in self.rows:
            buf.write(",".join(_fmt(v) for v in row) + "\n")
        return buf.getvalue()


def _fmt(v: float) -> str:
    # fixed precision keeps reruns byte-identical and tiny roundoff readable
    if v == 0 or abs(v) < 1e-14:
        return "0"
    return f"{v:.12g}"


def _table(cfg: ScenarioConfig, command: str, columns: list[str]) -> OutputTable:
    meta = {
        "tool": f"wpduality {__version__}",
        "command": command,
        "config_hash": cfg.digest,
        "seed": "none" if cfg.seed is None else str(cfg.seed),
        "units": "angles in degrees, rates in counts/s",
    }
    return OutputTable(columns, metadata=meta)


def cmd_duality_scan(cfg: ScenarioConfig) -> OutputTable:
    """V, fixed-H/V K, optimal K and V^2 + K^2 across the path-1 plate angle."""
    if cfg.raw["marker"]["kind"] != "hwp":
        raise ConfigError("marker.kind", "duality-scan sweeps a HWP; set marker.kind=hwp")
    _, grid = cfg.sweep(("theta_hwp",))
    state = cfg.input_state()
    t = _table(cfg, "duality-scan",
               ["theta_hwp_deg", "V", "K_fixed_HV", "K_optimal", "V2_plus_K2_optimal"])
    for theta in grid:
        joint = build_joint(state, cfg.interferometer(theta))
        v = visibility(joint)
        k_hv = knowledge(joint, HV_BASIS)
        d, _ = distinguishability(joint)
        t.add(theta, v, k_hv, d, v**2 + d**2)
    return t


def cmd_mixed_scan(cfg: ScenarioConfig) -> OutputTable:
    """V, D and V^2 + D^2 against the law 2 Tr(rho^2) - 1, over purity or plate angle."""
    partial = cfg.raw["input"]["kind"] == "partial"
    axis, grid = cfg.sweep(("purity", "theta_hwp") if partial else ("theta_hwp", "purity"))
    if axis == "purity" and cfg.raw["input"]["kind"] != "partial":
        raise ConfigError("input.kind", "a purity sweep needs input.kind=partial")
    t = _table(cfg, "mixed-scan",
               ["purity", "theta_hwp_deg", "V", "K_optimal", "V2_plus_K2", "law_2TrRho2_minus_1"])
    for x in grid:
        if axis == "purity":
            state, theta = cfg.input_state(purity=x), None
        else:
            state, theta = cfg.input_state(), x
        joint = build_joint(state, cfg.interferometer(theta))
        v = visibility(joint)
        d, _ = distinguishability(joint)
        angle = cfg.raw["marker"]["angle"] if theta is None else theta
        t.add(fractional_purity(state), angle, v, d, v**2 + d**2, law_value(state))
    return t


def cmd_eraser_scan(cfg: ScenarioConfig) -> OutputTable:
    """Conditional visibility and fringe phase across linear analyzer angles."""
    _, grid = cfg.sweep(("analyzer",))
    state = cfg.input_state()
    joint = build_joint(state, cfg.interferometer())
    curve = eraser_scan(joint, np.radians(grid))
    t = _table(cfg, "eraser-scan", ["analyzer_deg", "conditional_V", "fringe_phase_deg"])
    if cfg.raw["marker"]["kind"] == "hwp":
        theta = np.radians(cfg.raw["marker"]["angle"])
        zeros = zero_visibility_angles(theta, fractional_purity(state), cfg.input_angle)
        t.metadata["zero_visibility_angles_deg"] = ", ".join(_fmt(np.degrees(z)) for z in zeros)
    blocked = []
    for a, v, p in zip(grid, curve.visibility, curve.phase):
        # an analyzer that passes no light has no fringe at all; keep the table finite
        if np.isnan(v):
            blocked.append(a)
            continue
        t.add(a, v, np.degrees(p))
    if blocked:
        t.metadata["blocked_analyzers_deg"] = ", ".join(_fmt(a) for a in blocked)
    return t


def cmd_poincare(cfg: ScenarioConfig) -> OutputTable:
    """Loci points and great-circle samples with their conditional visibility.

    ``role`` is 0 for the two special points and 1 for circle samples.
    """
    state = cfg.input_state()
    s = fractional_purity(state)
    kind = cfg.raw["poincare"]["kind"]
    if kind == "auto":
        if abs(s - 1) < 1e-6:
            kind = "pure"
        elif s < 1e-6:
            kind = "mixed"
        else:
            raise ConfigError("input", f"poincare loci need a pure or completely mixed input (purity {s:.4g})")
    if kind not in ("pure", "mixed"):
        raise ConfigError("poincare.kind", f"expected auto|pure|mixed, got {kind!r}")
    n = int(cfg.raw["poincare"]["samples"])
    if n < 1:
        raise ConfigError("poincare.samples", "must be positive")
    joint = build_joint(state, cfg.interferometer())
    try:
        loci = poincare_loci(joint, kind)
    except ValueError as exc:
        raise ConfigError("input", str(exc)) from None
    t = _table(cfg, "poincare", ["role", "s1", "s2", "s3", "conditional_V"])
    t.metadata["loci_kind"] = kind
    t.metadata["circle_normal"] = ", ".join(_fmt(x) for x in loci.normal)
    for role, pts in ((0, loci.points), (1, loci.circle(n))):
        vis = eraser_sphere_scan(joint, pts).visibility
        for p, v in zip(pts, vis):
            t.add(role, *p, v)
    return t


def cmd_montecarlo(cfg: ScenarioConfig) -> OutputTable:
    """Seeded photon-counting emulation of the V and K measurements."""
    noise = cfg.noise()
    if cfg.raw["marker"]["kind"] != "hwp":
        raise ConfigError("marker.kind", "montecarlo sweeps a HWP; set marker.kind=hwp")
    _, grid = cfg.sweep(("theta_hwp",))
    basis = cfg.raw["analysis"]["basis"]
    if basis not in ("hv", "optimal", "nominal"):
        raise ConfigError("analysis.basis", f"expected hv|optimal|nominal, got {basis!r}")
    icfg = cfg.interferometer()
    res1 = cfg.raw["interferometer"]["residual1"]
    if cfg.raw["interferometer"]["residual2"]:
        raise ConfigError("interferometer.residual2", "montecarlo models a residual in path 1 only")
    scenario = Scenario(
        cfg.input_state(), np.radians(grid), basis=basis, v0=icfg.v0,
        residual_rotation=float(np.radians(res1)), w1=icfg.w1, phases=cfg.phases,
    )
    reps = cfg.repetitions
    summary = run_duality_experiment(scenario, noise, reps)
    t = _table(cfg, "montecarlo", [
        "theta_hwp_deg", "V_true", "K_true", "V_mean", "V_sem", "K_mean", "K_sem",
        "sum_true", "sum_mean", "sum_sem", "V_within_3se", "K_within_3se",
    ])
    t.metadata["repetitions"] = str(reps)
    t.metadata["basis"] = basis
    cov_v, cov_k = summary.coverage(3.0)
    mv, sv = summary.mean(summary.v_hat), summary.sem(summary.v_hat)
    mk, sk = summary.mean(summary.k_hat), summary.sem(summary.k_hat)
    ms, ss = summary.mean(summary.sum_hat), summary.sem(summary.sum_hat)
    for i, theta in enumerate(grid):
        t.add(theta, summary.v_true[i], summary.k_true[i], mv[i], sv[i], mk[i], sk[i],
              summary.sum_true[i], ms[i], ss[i], cov_v[i], cov_k[i])
    return t


COMMANDS = {
    "duality-scan": cmd_duality_scan,
    "mixed-scan": cmd_mixed_scan,
    "eraser-scan": cmd_eraser_scan,
    "poincare": cmd_poincare,
    "montecarlo": cmd_montecarlo,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wpduality", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in COMMANDS.items():
        p = sub.add_parser(name, help=fn.__doc__.splitlines()[0])
        p.add_argument("--config", metavar="PATH", help="YAML scenario file")
        p.add_argument("--seed", type=int, help="master RNG seed")
        p.add_argument("--out", metavar="PATH", help="write the table here instead of stdout")
        p.add_argument("--set", dest="overrides", action="append", default=[],
                       metavar="KEY=VALUE", help="override a config entry, e.g. sweep.step=5")
    return parser


def run(argv=None) -> OutputTable:
    """Parse ``argv`` and return the table without writing it."""
    args = build_parser().parse_args(argv)
    cfg = load_config(args.config, args.overrides, args.seed)
    return COMMANDS[args.command](cfg), args, cfg


def main(argv=None) -> int:
    try:
        table, args, cfg = run(argv)
        text = table.to_csv()
        out = args.out or cfg.raw["out"]
        if out:
            with open(out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except ConfigError as exc:
        print(f"wpduality: config error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"wpduality: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
