"""Command-line front end.

    dotci spectrum       --config run.ini [--field F] [--out DIR]
    dotci sweep          --config run.ini [--threads N]
    dotci find-crossing  --config run.ini
    dotci cascade-report --config run.ini

Exit codes: 0 success, 1 unexpected failure, 2 configuration error,
3 numerical failure, 4 no crossing in the requested bracket.
"""

import argparse
import logging
import math
import os
import sys
import time

import numpy as np

from . import io
from .cascade import cascade_report
from .config import load_config
from .errors import ConfigError, NoCrossingError, NumericalError
from .spectra import biexciton_lines, broadened_spectrum, exciton_lines
from .sweep import field_grid, find_crossing, power_law_exponent, quadratic_fit, run_sweep, stark_report

log = logging.getLogger("dotci")

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_NUMERIC, EXIT_NO_CROSSING = 0, 1, 2, 3, 4

LINE_COLUMNS = ["field_kV_cm", "label", "photon_energy_meV", "strength", "polarization"]
SWEEP_COLUMNS = [
    "field_kV_cm", "bias_V", "E_X1_meV", "E_X2_meV", "AES_ueV",
    "E_XXphoton_A1_meV", "E_XXphoton_B1_meV", "binding_ueV", "alpha_ss",
    "strength_X1", "strength_X2", "strength_A1", "strength_B1",
    "E_sp_meV", "strength_sp",
]


def _out_dir(args, cfg):
    return args.out or cfg["output", "dir"]


def _echo(cfg, out):
    io.atomic_write(os.path.join(out, "effective_config.ini"), cfg.echo())


def cmd_spectrum(args, cfg):
    model = cfg.model()
    field = args.field if args.field is not None else cfg["field", "field"]
    out = _out_dir(args, cfg)
    point = model.solve_point(field)
    window = cfg["spectrum", "window"]
    off = model.gap_offset
    xl = exciton_lines(point.x, point.vacuum(), off)
    e_x = min(ln.photon_energy for ln in xl if ln.label in ("X1", "X2"))
    xl = [ln for ln in xl if ln.photon_energy <= e_x + window]
    bl = [ln for ln in biexciton_lines(point.xx, point.x, off) if abs(ln.photon_energy - e_x) <= window]
    lines = xl + bl
    rows = [
        {"field_kV_cm": field, "label": ln.label, "photon_energy_meV": ln.photon_energy,
         "strength": ln.strength, "polarization": ln.polarization}
        for ln in lines
    ]
    io.write_csv(os.path.join(out, "lines.csv"), LINE_COLUMNS, rows)
    gamma = cfg.gammas[0]
    pad = 20 * gamma / 1000.0
    lo = min(ln.photon_energy for ln in lines) - pad
    hi = max(ln.photon_energy for ln in lines) + pad
    step = cfg["spectrum", "step"] / 1000.0
    grid = lo + step * np.arange(int(math.ceil((hi - lo) / step)) + 1)
    inten = broadened_spectrum(lines, gamma, grid)
    io.write_csv(os.path.join(out, "spectrum.csv"), ["energy_meV", "intensity"], zip(grid, inten))
    _echo(cfg, out)
    log.info("spectrum at F=%g kV/cm: %d lines", field, len(lines))
    return EXIT_OK


def _sweep_rows(records, bias_per_field):
    rows = []
    for r in records:
        rows.append({
            "field_kV_cm": r.field,
            "bias_V": "" if bias_per_field is None else r.field * bias_per_field,
            "E_X1_meV": r.E_X1, "E_X2_meV": r.E_X2, "AES_ueV": r.AES,
            "E_XXphoton_A1_meV": r.E_A1, "E_XXphoton_B1_meV": r.E_B1,
            "binding_ueV": r.binding, "alpha_ss": r.alpha_ss,
            "strength_X1": r.strength_X1, "strength_X2": r.strength_X2,
            "strength_A1": r.strength_A1, "strength_B1": r.strength_B1,
            "E_sp_meV": r.E_sp, "strength_sp": r.strength_sp,
        })
    return rows


def sp_fit(records):
    """Quadratic fit of the s-p line energy and power-law exponent of its strength near F=0."""
    f = np.array([r.field for r in records])
    e = np.array([r.E_sp for r in records])
    s = np.array([r.strength_sp for r in records])
    ok = np.isfinite(e)
    out = {}
    if ok.sum() >= 3:
        coef, rms = quadratic_fit(f[ok], e[ok])
        out.update(c0_meV=coef[0], c1_meV_per_kVcm=coef[1], c2_meV_per_kVcm2=coef[2], rms_residual_meV=rms)
    # exponent over the smallest positive fields (lowest quarter of the grid, at least 3 points)
    pos = np.flatnonzero((np.abs(f) > 0) & ok)
    if len(pos) >= 3:
        k = max(3, len(pos) // 4)
        sel = pos[np.argsort(np.abs(f[pos]))[:k]]
        out["strength_exponent"] = power_law_exponent(np.abs(f[sel]), s[sel])
    return out


def _sweep(args, cfg):
    model = cfg.model()
    grid = field_grid(cfg["field", "start"], cfg["field", "end"], cfg["field", "n_points"])
    t0 = time.perf_counter()
    records = run_sweep(model, grid[0], grid[-1], len(grid), threads=args.threads)
    log.info("sweep of %d points in %.1f s", len(records), time.perf_counter() - t0)
    return model, records


def cmd_sweep(args, cfg):
    out = _out_dir(args, cfg)
    model, records = _sweep(args, cfg)
    io.write_csv(os.path.join(out, "sweep.csv"), SWEEP_COLUMNS, _sweep_rows(records, cfg["field", "bias_per_field"]))
    summary = {"sp_fit": sp_fit(records), "stark": stark_report(records, model)}
    io.write_json(os.path.join(out, "sweep_fit.json"), summary)
    _echo(cfg, out)
    return EXIT_OK


def cmd_find_crossing(args, cfg):
    out = _out_dir(args, cfg)
    model = cfg.model()
    c = find_crossing(model, cfg["crossing", "lo"], cfg["crossing", "hi"], cfg["crossing", "tol"])
    io.write_json(os.path.join(out, "crossing.json"), {
        "F_star": c.field, "binding_residual_ueV": c.binding, "iterations": c.iterations,
    })
    _echo(cfg, out)
    log.info("crossing at F*=%.6f kV/cm (residual %.3g micro-eV)", c.field, c.binding)
    return EXIT_OK


def cmd_cascade_report(args, cfg):
    out = _out_dir(args, cfg)
    _, records = _sweep(args, cfg)
    rows = cascade_report(records, cfg.gammas)
    io.write_csv(os.path.join(out, "cascade.csv"), list(rows[0].keys()), rows)
    _echo(cfg, out)
    return EXIT_OK


COMMANDS = {
    "spectrum": cmd_spectrum,
    "sweep": cmd_sweep,
    "find-crossing": cmd_find_crossing,
    "cascade-report": cmd_cascade_report,
}


def build_parser():
    p = argparse.ArgumentParser(prog="dotci", description="Exciton/biexciton CI in a quantum dot under lateral field")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", required=True, help="run configuration (INI-like)")
    p.add_argument("--field", type=float, default=None, help="field in kV/cm (spectrum)")
    p.add_argument("--out", default=None, help="output directory")
    p.add_argument("--threads", type=int, default=1, help="worker threads over field points")
    p.add_argument("--verbose", action="store_true")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        cfg = load_config(args.config)
        return COMMANDS[args.command](args, cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        if args.command and not os.path.exists(args.config):
            print(f"config error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except NoCrossingError as exc:
        print(f"no crossing: {exc}", file=sys.stderr)
        return EXIT_NO_CROSSING
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except np.linalg.LinAlgError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
