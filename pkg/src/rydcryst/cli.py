"""Command-line entry point.

Five subcommands, one per report family:

    params        EIT-derived quantities plus the validity audit
    kparam        closed-form K(Theta) / OD_c(Theta) sweep table
    lattice       microscopic ground state: compressibility K and g2 curve
    quench        switch-off protocol samples and correlation envelopes
    feasibility   go/no-go summary for a target interaction strength

Every invocation takes exactly one of ``--preset NAME`` or ``--input
FILE``, with ``--set key=value`` overrides applied afterwards.  Numbers in
the reports are computed by the library modules; this file only routes
arguments and writes files.

Exit codes: 0 success, 1 solver failure, 2 usage/config error, 3 validity
audit failure under ``--strict``.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import dataclasses
import math
import os
import sys

import numpy as np

from .lattice import build_lattice
from .lattice.solve import SolverError, compressibility_k, ground_state
from .luttinger import (
    c6_for_theta,
    cdw_regime,
    correlation_exponents,
    k_closed_form,
    od_c_for_theta,
    theta_ll,
)
from .params import ExperimentalParams, ParameterError
from .polariton import derive_polariton, validity_audit
from .presets import PRESET_NAMES
from .quench import (
    correlation_final_zero_t,
    correlation_thermal,
    crossover_length,
    instantaneous_k,
    mass_of_t,
    min_switch_time,
    protocol_from_params,
    temperature_cap,
    time_at_k,
    vg_of_t,
)
from .reports import ResolvedRun, RunConfig, resolve_run, write_csv, write_json
from .units import natural_scales, to_natural

__all__ = ["main", "build_parser"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rydcryst",
        description="1D Rydberg-polariton crystallization toolkit",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name, help_text in (
        ("params", "derived EIT quantities and validity audit"),
        ("kparam", "closed-form K(Theta) sweep table"),
        ("lattice", "lattice ground state: K estimate and g2 curve"),
        ("quench", "switch-off protocol and correlation envelopes"),
        ("feasibility", "go/no-go report for a target Theta"),
    ):
        p = sub.add_parser(name, help=help_text)
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--preset", choices=PRESET_NAMES,
                         help="named input configuration")
        src.add_argument("--input", metavar="FILE",
                         help="JSON parameter file")
        p.add_argument("--out", metavar="DIR", default=".",
                       help="output directory (default: current)")
        p.add_argument("--set", metavar="KEY=VALUE", action="append",
                       default=[], help="override a parameter or setting")
        p.add_argument("--seed", type=int, default=1234,
                       help="solver seed (default 1234)")
        p.add_argument("--strict", action="store_true",
                       help="exit 3 if the validity audit fails")
        p.add_argument("--no-timestamp", action="store_true",
                       help="omit the generated-at header line")
        p.add_argument("--si", action="store_true",
                       help="SI-primary report blocks (default natural-unit)")
        p.add_argument("-v", "--verbose", action="count", default=0)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0

    try:
        config = RunConfig(
            subcommand=args.subcommand,
            preset=args.preset,
            input_path=args.input,
            out_dir=args.out,
            overrides=tuple(args.set),
            seed=args.seed,
            strict=args.strict,
            timestamp=not args.no_timestamp,
            si_primary=args.si,
            verbosity=args.verbose,
        )
        run = resolve_run(config)
    except ParameterError as exc:
        print(f"rydcryst: error: {exc}", file=sys.stderr)
        return 2

    handler = _HANDLERS[config.subcommand]
    try:
        return handler(run)
    except ParameterError as exc:
        print(f"rydcryst: error: {exc}", file=sys.stderr)
        return 2
    except SolverError as exc:
        print(f"rydcryst: solver failure: {exc}", file=sys.stderr)
        return 1


def _out(run: ResolvedRun, filename: str) -> str:
    return os.path.join(run.config.out_dir, filename)


def _note(run: ResolvedRun, message: str) -> None:
    if run.config.verbosity:
        print(message, file=sys.stderr)


def _unit_blocks(run: ResolvedRun, natural: dict, si: dict) -> dict:
    if run.config.si_primary:
        return {"units": "si_primary", "values": si, "natural_echo": natural}
    return {"units": "natural_primary", "values": natural, "si_echo": si}


def _cmd_params(run: ResolvedRun) -> int:
    params = run.params
    derived = derive_polariton(params)
    audit = validity_audit(params)
    scales = natural_scales(params.gamma, derived.l_abs)
    natural = {
        "tan2_theta": derived.tan2_theta,
        "vg_over_c": derived.vg / params.c,
        "rho0_l_abs": params.rho0 * derived.l_abs,
        "gamma_over_delta": params.gamma / abs(params.delta_1),
        "m_par": to_natural(derived.m_par, "mass", scales),
        "m_perp": to_natural(derived.m_perp, "mass", scales),
        "rho0_a_c": params.rho0 * derived.a_c,
        "rho0_a_b": params.rho0 * derived.a_b,
        "od": derived.od,
        "od_c": derived.od_c,
        "c6": to_natural(params.c6, "c6", scales),
        "free_photon_limit": derived.free_photon_limit,
    }
    payload = {
        "inputs_si": params.to_dict(),
        "derived": _unit_blocks(run, natural, dataclasses.asdict(derived)),
        "audit": audit.to_dict(),
    }
    path = _out(run, "params_report.json")
    write_json(path, run, "params_report", payload)
    _note(run, f"wrote {path}")
    if run.config.strict and not audit.all_pass:
        print("rydcryst: validity audit failed (strict mode)", file=sys.stderr)
        return 3
    return 0


def _kparam_row(theta: float, params: ExperimentalParams) -> tuple:
    k = k_closed_form(theta)
    exp_density, exp_first = correlation_exponents(k)
    return (
        theta,
        k,
        od_c_for_theta(theta, params),
        od_c_for_theta(theta, params, mass=derive_polariton(params).m_perp),
        cdw_regime(k),
        exp_density,
        exp_first,
    )


def _cmd_kparam(run: ResolvedRun) -> int:
    s = run.settings
    thetas = np.geomspace(
        s.get("theta_min", 0.1), s.get("theta_max", 30.0),
        int(s.get("theta_points", 61)),
    )
    with concurrent.futures.ThreadPoolExecutor(max_workers=4) as pool:
        rows = list(pool.map(lambda th: _kparam_row(float(th), run.params),
                             thetas))
    table_path = _out(run, "kparam_table.csv")
    write_csv(
        table_path, run, "kparam_table",
        ["theta", "k_param", "od_c_par", "od_c_perp", "regime",
         "exp_density_wave", "exp_first_order"],
        rows,
    )
    meta = {
        "theta_grid": {"min": float(thetas[0]), "max": float(thetas[-1]),
                       "points": int(thetas.size), "spacing": "log"},
        "theta_crit": 1.5,
        "k_at_theta_crit": k_closed_form(1.5),
        "rows": len(rows),
    }
    meta_path = _out(run, "kparam_report.json")
    write_json(meta_path, run, "kparam_report", meta)
    _note(run, f"wrote {table_path}")
    _note(run, f"wrote {meta_path}")
    return 0


def _cmd_lattice(run: ResolvedRun) -> int:
    params, s = run.params, run.settings
    derived = derive_polariton(params)
    if derived.m_par <= 0.0:
        raise ParameterError("lattice solve requires a massive polariton")
    # solve in density units: rho0 = mass = 1, interaction via Theta
    theta = theta_ll(params.rho0, derived.m_par, params.c6)
    model = build_lattice(
        rho0=1.0,
        mass=1.0,
        c6=c6_for_theta(theta, 1.0, 1.0),
        n_sites=int(s.get("n_sites", 100)),
        dx=float(s.get("dx", 0.1)),
        a_cut=params.a_cut * params.rho0,
        n_max=int(s.get("n_max", 3)),
        boundary=str(s.get("boundary", "open")),
    )
    kwargs = {"chi_max": int(s.get("chi_max", 32)),
              "seed": run.config.seed}
    method = str(s.get("method", "auto"))
    # e_tol is a sweep knob of the DMRG driver only
    if "e_tol" in s and method.upper() == "DMRG":
        kwargs["e_tol"] = float(s["e_tol"])
    estimate = compressibility_k(model, method=method, **kwargs)
    solution = ground_state(model, method=method, **kwargs)
    _note(run, f"K = {estimate.k_param:.6g} ({estimate.method})")

    curve = solution.g2_curve
    csv_path = _out(run, "lattice_g2.csv")
    write_csv(
        csv_path, run, "lattice_g2", ["rho0_z", "g2"],
        list(zip(curve.z_grid.tolist(), curve.amplitude.tolist())),
    )
    payload = {
        "model": {
            "theta": theta,
            "n_sites": model.n_sites,
            "n_particles": model.n_particles,
            "dx": model.dx,
            "n_max": model.n_max,
            "boundary": model.boundary,
            "a_cut_rho0": params.a_cut * params.rho0,
        },
        "k_estimate": {
            "k_param": estimate.k_param,
            "d2": estimate.d2,
            "uncertainty": estimate.uncertainty,
            "method": estimate.method,
            "out_of_ll_validity": estimate.out_of_ll_validity,
            "energies": estimate.energies,
            "notes": list(estimate.notes),
        },
        "k_closed_form": k_closed_form(theta),
        "ground_state": {
            "energy": solution.energy,
            "method": solution.method,
            "convergence": _jsonable(solution.convergence),
        },
    }
    json_path = _out(run, "lattice_report.json")
    write_json(json_path, run, "lattice_report", payload)
    _note(run, f"wrote {csv_path}")
    _note(run, f"wrote {json_path}")
    return 0


def _jsonable(info):
    if isinstance(info, dict):
        return {k: _jsonable(v) for k, v in info.items()}
    if isinstance(info, (list, tuple)):
        return [_jsonable(v) for v in info]
    if isinstance(info, (np.floating, np.integer, np.bool_)):
        return info.item()
    if isinstance(info, np.ndarray):
        return info.tolist()
    return info


def _quench_protocol(run: ResolvedRun):
    params, s = run.params, run.settings
    derived = derive_polariton(params)
    if "k0" not in s:
        raise ParameterError("quench needs k0 in the settings (0 < k0 < 1)")
    k0 = float(s["k0"])
    if "tau" in s:
        tau = float(s["tau"])
    elif "l0_rho0" in s:
        # l0 is linear in tau; scale a unit-tau evaluation
        l0_per_tau = crossover_length(params.c6, params.rho0, 1.0).l0
        tau = (float(s["l0_rho0"]) / params.rho0) / l0_per_tau
    else:
        raise ParameterError("quench needs either tau or l0_rho0 in the settings")
    return protocol_from_params(k0, tau, derived, params), derived, tau


def _envelope_rows(curve):
    return list(zip(
        (curve.z_grid * curve.metadata["rho0"]).tolist(),
        curve.amplitude.tolist(),
        curve.metadata["regime_tags"],
    ))


def _cmd_quench(run: ResolvedRun) -> int:
    params, s = run.params, run.settings
    protocol, derived, tau = _quench_protocol(run)
    k_final = float(s.get("k_final", 5e-5))
    t_final = time_at_k(protocol, k_final)

    n_samples = int(s.get("protocol_samples", 200))
    t_grid = np.concatenate(
        [[0.0], np.geomspace(tau * 1e-3, t_final, n_samples - 1)]
    )
    sample_rows = [
        (
            t / tau,
            t,
            instantaneous_k(protocol, t),
            mass_of_t(protocol, t) / protocol.m0,
            vg_of_t(protocol, t) / protocol.vg0,
        )
        for t in t_grid
    ]
    protocol_path = _out(run, "quench_protocol.csv")
    write_csv(
        protocol_path, run, "quench_protocol",
        ["t_over_tau", "t_s", "k_t", "mass_ratio", "vg_over_vg0"],
        sample_rows,
    )
    _note(run, f"wrote {protocol_path}")

    rho0 = params.rho0
    z = np.geomspace(
        float(s.get("z_min_rho0", 1.0)), float(s.get("z_max_rho0", 4000.0)),
        int(s.get("z_points", 400)),
    ) / rho0
    z_th = z[z <= float(s.get("thermal_z_max_rho0", 400.0)) / rho0]
    with concurrent.futures.ThreadPoolExecutor(max_workers=2) as pool:
        zero_t_future = pool.submit(
            correlation_final_zero_t, protocol, t_final, z
        )
        thermal_future = None
        if params.temperature > 0.0:
            thermal_future = pool.submit(
                correlation_thermal, protocol, t_final, z_th,
                params.temperature,
            )
        zero_t = zero_t_future.result()
        thermal = thermal_future.result() if thermal_future else None

    zero_t_path = _out(run, "quench_envelope_zero_t.csv")
    write_csv(zero_t_path, run, "quench_envelope",
              ["rho0_z", "envelope", "regime_tag"], _envelope_rows(zero_t))
    _note(run, f"wrote {zero_t_path}")

    lengths = crossover_length(params.c6, rho0, tau, k0=protocol.k0,
                               derived=derived, params=params)
    bound = min_switch_time(protocol.k0, derived.l_abs, params.c,
                            margin=float(s.get("margin", 10.0)),
                            vg_over_c=derived.vg / params.c)
    natural = {
        "k0": protocol.k0,
        "k_final": zero_t.metadata["k_t"],
        "t_final_over_tau": t_final / tau,
        "l0_rho0": protocol.l0 * rho0,
        "l0_over_medium": lengths.l0_over_medium,
        "tau_min_over_tau": bound.tau_min / tau,
        "slope_crossover_rho0": zero_t.metadata["slope_crossover_rho0"],
        "temperature_over_cap": params.temperature / temperature_cap(params),
    }
    si = {
        "tau_s": tau,
        "t_final_s": t_final,
        "l0_m": protocol.l0,
        "tau_min_s": bound.tau_min,
        "temperature_cap": temperature_cap(params),
        "u0_m_per_s": protocol.u0,
    }
    payload = {
        "protocol": _unit_blocks(run, natural, si),
        "zero_t": _jsonable({k: v for k, v in zero_t.metadata.items()
                             if k != "regime_tags"}),
    }
    if thermal is not None:
        thermal_path = _out(run, "quench_envelope_thermal.csv")
        write_csv(thermal_path, run, "quench_envelope",
                  ["rho0_z", "envelope", "regime_tag"],
                  _envelope_rows(thermal))
        _note(run, f"wrote {thermal_path}")
        payload["thermal"] = _jsonable(
            {k: v for k, v in thermal.metadata.items() if k != "regime_tags"}
        )

    report_path = _out(run, "quench_report.json")
    write_json(report_path, run, "quench_report", payload)
    _note(run, f"wrote {report_path}")

    if run.config.strict and not validity_audit(params).all_pass:
        print("rydcryst: validity audit failed (strict mode)", file=sys.stderr)
        return 3
    return 0


def _cmd_feasibility(run: ResolvedRun) -> int:
    params, s = run.params, run.settings
    derived = derive_polariton(params)
    audit = validity_audit(params)
    theta_target = float(s.get("theta_target", 1.5))
    k_target = k_closed_form(theta_target)
    od_c_par = od_c_for_theta(theta_target, params)
    od_c_perp = od_c_for_theta(theta_target, params, mass=derived.m_perp)

    k0 = float(s.get("k0", k_target))
    if not 0.0 < k0 < 1.0:
        raise ParameterError(f"feasibility k0 must lie in (0, 1), got {k0}")
    # switching slow enough to stop the light within the medium
    tau_stop = (2.0 * k0 * params.medium_len
                / (derived.vg * (1.0 - k0**2)))
    bound = min_switch_time(k0, derived.l_abs, params.c,
                            margin=float(s.get("margin", 10.0)),
                            vg_over_c=derived.vg / params.c)
    lengths = crossover_length(params.c6, params.rho0, tau_stop, k0=k0,
                               derived=derived, params=params)
    t_cap = temperature_cap(params)

    checks = {
        "od_c_reachable": {
            "needed_par": od_c_par,
            "needed_perp": od_c_perp,
            "available": derived.od_c,
            "go": derived.od_c >= od_c_par * (1.0 - 1e-9),
        },
        "switching_window": {
            "tau_min_s": bound.tau_min,
            "tau_stop_s": tau_stop,
            "go": tau_stop >= bound.tau_min,
        },
        "temperature": {
            "cap": t_cap,
            "actual": params.temperature,
            "go": params.temperature <= t_cap,
        },
    }
    scales = {
        "l0_rho0": lengths.l0_rho0,
        "l0_over_medium": lengths.l0_over_medium,
        "od": derived.od,
        "gamma_theta_integral": bound.gamma_theta_integral,
    }
    if params.temperature > 0.0:
        protocol = protocol_from_params(k0, tau_stop, derived, params)
        scales["l_t0_rho0"] = protocol.u0 / params.temperature * params.rho0
    payload = {
        "theta_target": theta_target,
        "k_param": k_target,
        "regime": cdw_regime(k_target),
        "k0": k0,
        "checks": checks,
        "scales": scales,
        "go": all(c["go"] for c in checks.values()),
        "audit": audit.to_dict(),
    }
    path = _out(run, "feasibility_report.json")
    write_json(path, run, "feasibility_report", payload)
    _note(run, f"wrote {path}")
    if run.config.strict and not audit.all_pass:
        print("rydcryst: validity audit failed (strict mode)", file=sys.stderr)
        return 3
    return 0


_HANDLERS = {
    "params": _cmd_params,
    "kparam": _cmd_kparam,
    "lattice": _cmd_lattice,
    "quench": _cmd_quench,
    "feasibility": _cmd_feasibility,
}


if __name__ == "__main__":
    sys.exit(main())
