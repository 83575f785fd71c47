"""Command-line interface.

Subcommands map one-to-one onto the library's top-level operations and write
flat JSON/CSV artifacts; every artifact embeds the schema version, the
config hash, the step size used, and the step-halving verification result.

Exit codes: 0 success, 1 configuration error, 2 numerical failure,
3 validation failure (invariant breach).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import calibration, circuits, couplings, metrics, open_system
from .config import RunConfig, parse_config
from .device import angular_to_mhz, ghz_to_angular
from .errors import (
    CalibrationError,
    ConfigError,
    NumericalFailureError,
    TrichainError,
)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2
EXIT_VALIDATION = 3


def _load_config(args) -> RunConfig:
    if not args.config:
        raise ConfigError("--config is required for this subcommand")
    cfg = parse_config(Path(args.config).read_text())
    if args.dt is not None:
        cfg.integrator.dt_ns = args.dt
    if args.no_verify:
        cfg.integrator.verify = False
    return cfg


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    print(f"wrote {path}")


def _coeff_dict(cfg: RunConfig, omega) -> dict:
    eff = couplings.effective_coefficients(cfg.device, omega)
    to_mhz = lambda v: float(angular_to_mhz(v))  # noqa: E731
    return {
        "j1_ground_mhz": to_mhz(eff.j1_ground),
        "j1_excited_mhz": to_mhz(eff.j1_excited),
        "j2_ground_mhz": [to_mhz(v) for v in eff.j2_ground],
        "j2_excited_mhz": [to_mhz(v) for v in eff.j2_excited],
        "j_z_mhz": to_mhz(eff.j_z),
        "j_i_mhz": to_mhz(eff.j_i),
        "zeta_z_mhz": to_mhz(eff.zeta_z),
        "zeta_i_mhz": to_mhz(eff.zeta_i),
        "zeta_101_mhz": to_mhz(eff.zeta_101),
        "zeta_111_mhz": to_mhz(eff.zeta_111),
        "zz_nn_mhz": [to_mhz(eff.zz_nn_1), to_mhz(eff.zz_nn_3)],
        "shift_mhz": [to_mhz(eff.shift_1), to_mhz(eff.shift_3)],
        "zeta1_mhz": to_mhz(eff.zeta1),
        "zeta3_mhz": to_mhz(eff.zeta3),
        "dressed_freq_ghz": [
            float(v / (2 * np.pi)) for v in (eff.omega1, eff.omega2, eff.omega3)
        ],
        "dispersive_ratios": list(eff.dispersive_ratios),
    }


def cmd_couplings(args) -> int:
    cfg = _load_config(args)
    w_int = cfg.device.omega_idle.copy()
    w_int[0] = w_int[2] = float(ghz_to_angular(cfg.pulse.interaction_ghz))
    payload = {
        "header": cfg.artifact_header(dt=None, verification="analytic"),
        "interaction": _coeff_dict(cfg, w_int),
        "idle": _coeff_dict(cfg, cfg.device.omega_idle),
    }
    _write_json(_outdir(args) / "couplings.json", payload)
    return EXIT_OK


def cmd_calibrate(args) -> int:
    cfg = _load_config(args)
    wp = calibration.find_working_point(
        cfg.device,
        interaction_ghz=cfg.pulse.interaction_ghz,
        t_hold_guess=cfg.pulse.t_hold_ns,
        dt=cfg.integrator.dt_ns,
        sigma=cfg.pulse.sigma_ns,
    )
    payload = {"header": cfg.artifact_header(), "working_point": wp.to_dict()}
    _write_json(_outdir(args) / "working_point.json", payload)
    return EXIT_OK


def cmd_evolve(args) -> int:
    cfg = _load_config(args)
    label = tuple(int(c) for c in args.initial)
    if len(label) != 3:
        raise ConfigError("--initial must be three digits, e.g. 100")
    result = calibration._trace_result(cfg, label, f"evolve_{args.initial}")
    path = _outdir(args) / f"evolve_{args.initial}.csv"
    result.to_csv(path)
    print(f"wrote {path}")
    return EXIT_OK


def cmd_fidelity(args) -> int:
    cfg = _load_config(args)
    report = metrics.characterize_gate(
        cfg.device, cfg.schedule(), dt=cfg.integrator.dt_ns, verify=cfg.integrator.verify
    )
    payload = {
        "header": cfg.artifact_header(dt=report.dt, verification=report.convergence),
        "report": report.to_dict(),
    }
    _write_json(_outdir(args) / "gate_report.json", payload)
    print(f"fidelity = {report.fidelity:.6f}")
    return EXIT_OK


def cmd_truth_table(args) -> int:
    cfg = _load_config(args)
    result = calibration.scenario_fig4(cfg)
    path = _outdir(args) / "truth_table.csv"
    result.to_csv(path)
    print(f"wrote {path}")
    return EXIT_OK


def cmd_lindblad(args) -> int:
    cfg = _load_config(args)
    if cfg.noise is None:
        raise ConfigError("lindblad requires a `noise` section in the config")
    sched = cfg.schedule()
    report = metrics.characterize_gate(
        cfg.device, sched, dt=cfg.integrator.dt_ns, verify=False
    )
    target_eff = calibration._dressed_target(report)
    res = open_system.evolve_superoperator(
        cfg.device, sched, cfg.noise, cfg.integrator.dt_open_ns,
        verify=cfg.integrator.verify,
    )
    f_o, l1 = open_system.open_fidelity(res.block, target_eff)
    payload = {
        "header": cfg.artifact_header(dt=res.dt, verification=res.convergence),
        "f_open": f_o,
        "leakage_l1": l1,
        "intrinsic_fidelity": report.fidelity,
        "trace_defect": res.trace_defect,
        "min_eigenvalue": res.min_eigenvalue,
    }
    out = _outdir(args)
    _write_json(out / "lindblad.json", payload)
    fig5 = calibration.scenario_fig5(
        cfg, t1_values_us=(15.0, 50.0, 105.0), threads=args.threads
    )
    fig5.to_csv(out / "fig5.csv")
    print(f"wrote {out / 'fig5.csv'}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = _load_config(args)
    name = args.scenario_name or args.scenario or cfg.scenario
    if not name:
        raise ConfigError("no scenario given (positional, --scenario, or config)")
    kwargs = {}
    if name in ("fig5", "fig14"):
        kwargs["threads"] = args.threads
    result = calibration.run_scenario(name, cfg, **kwargs)
    out = _outdir(args)
    results = result if isinstance(result, dict) else {name: result}
    for key, res in results.items():
        path = out / f"{key}.csv"
        res.to_csv(path)
        print(f"wrote {path}")
    return EXIT_OK


def cmd_circuit(args) -> int:
    if args.circuit_cmd != "verify":
        raise ConfigError(f"unknown circuit subcommand {args.circuit_cmd!r}")
    fixture = circuits.Fixture.from_json(Path(args.fixture).read_text())
    report = fixture.verify()
    payload = {
        "fixture": fixture.name,
        "target": fixture.target_name,
        "stored_distance": fixture.distance,
        **report.to_dict(),
    }
    _write_json(_outdir(args) / f"verify_{fixture.name}.json", payload)
    print(f"{fixture.name}: distance={report.distance:.3e} verdict={report.verdict}")
    return EXIT_OK if report.verdict else EXIT_VALIDATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trichain",
        description="Three-qubit chain simulator: switchable next-nearest-neighbor "
        "coupling, controlled-iSWAP calibration, and decoherence analysis.",
    )
    parser.add_argument("--config", help="JSON run configuration")
    parser.add_argument("--out", default="artifacts", help="output directory")
    parser.add_argument("--dt", type=float, default=None, help="override dt (ns)")
    parser.add_argument("--no-verify", action="store_true", help="skip step-halving checks")
    parser.add_argument("--threads", type=int, default=1, help="worker threads for sweeps")
    parser.add_argument("--scenario", help="scenario name (alternative to positional)")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("couplings", help="effective coupling coefficients (JSON)")
    sub.add_parser("calibrate", help="two-stage working-point search (JSON)")
    p_evolve = sub.add_parser("evolve", help="population trace CSV")
    p_evolve.add_argument("--initial", default="100", help="initial logical label, e.g. 100")
    sub.add_parser("fidelity", help="intrinsic gate report (JSON)")
    sub.add_parser("truth-table", help="gate truth table (CSV)")
    sub.add_parser("lindblad", help="open-system fidelity (JSON + CSV)")
    p_sweep = sub.add_parser("sweep", help="run a named figure scenario")
    p_sweep.add_argument("scenario_name", nargs="?", help="scenario, e.g. fig3a")
    p_circ = sub.add_parser("circuit", help="circuit fixture operations")
    p_circ.add_argument("circuit_cmd", choices=["verify"])
    p_circ.add_argument("fixture", help="fixture JSON path")
    return parser


_HANDLERS = {
    "couplings": cmd_couplings,
    "calibrate": cmd_calibrate,
    "evolve": cmd_evolve,
    "fidelity": cmd_fidelity,
    "truth-table": cmd_truth_table,
    "lindblad": cmd_lindblad,
    "sweep": cmd_sweep,
    "circuit": cmd_circuit,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalFailureError,) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (CalibrationError, TrichainError) as exc:
        print(f"validation failure: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
