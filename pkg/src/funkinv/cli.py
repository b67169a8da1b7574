"""Experiment runner: multiplier tables, forward transforms, differential
operator comparisons, inversions, convergence studies, and frame-transform
identity checks.

Every invocation is fully determined by (config, seed): outputs embed the
library version and a hash of the effective configuration, use LF endings and
17-significant-digit floats, and contain no timestamps.  Exit codes: 0 on
success, 2 when a check-style subcommand finds an identity violated beyond
tolerance, 1 on operational errors (with a machine-readable JSON object on
standard error).

Flags override config-file values, which override built-in defaults.  Config
files are flat ``key = value`` text; keys are the long option names with
dashes replaced by underscores.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys

import numpy as np

from . import __version__
from .errors import FunkinvError, InvalidArgumentError, PreconditionError
from .diffops import (
    WeightedOpSpec,
    beltrami_fd_values,
    beltrami_spectrum,
    fd_convergence_slope,
    weighted_laplacian_fd,
    weighted_laplacian_spectrum,
)
from .grids import build_grid, grid_function, integrate
from .inversion import invert_cosine1, invert_funk, invert_general_between, invert_general_outside
from .spectral import HarmonicSpectrum, multiplier_table, random_even_spectrum
from .stiefel import IDENTITY_TAGS, check_identity, dual_funk_k, funk_k_function
from .transforms import (
    cosine_transform,
    funk_transform,
    log_cosine_transform,
    log_sine_transform,
    sine_transform,
)

TRANSFORM_NAMES = ("cosine", "funk", "logcos", "sine", "logsine")
THEOREMS = ("funk", "cosine1", "general-between", "general-outside")
STUDIES = ("fd-beltrami", "fd-weighted", "quadrature", "mc-dual")

_FLOAT = ".17g"


def _fmt(x) -> str:
    return format(float(x), _FLOAT)


def _parse_config_file(path: str) -> dict:
    out = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise InvalidArgumentError(f"malformed config line: {raw.rstrip()}")
            key, val = (s.strip() for s in line.split("=", 1))
            out[key] = val
    return out


def _effective_config(args: argparse.Namespace, defaults: dict) -> dict:
    cfg = dict(defaults)
    supplied = vars(args)
    if supplied.get("config"):
        file_cfg = _parse_config_file(supplied["config"])
        for key, val in file_cfg.items():
            if key not in cfg:
                raise InvalidArgumentError(f"unknown config key {key!r}")
            cfg[key] = _coerce(val, defaults[key])
    for key in cfg:
        if supplied.get(key) is not None:
            cfg[key] = supplied[key]
    return cfg


def _coerce(text: str, default):
    if isinstance(default, bool):
        return text.lower() in ("1", "true", "yes", "on")
    if isinstance(default, int) and not isinstance(default, bool):
        return int(text)
    if isinstance(default, float):
        return float(text)
    return text


def _config_hash(cfg: dict) -> str:
    # output locations do not identify the experiment
    skip = {"out", "csv", "config"}
    canon = "\n".join(f"{k}={cfg[k]}" for k in sorted(cfg) if k not in skip)
    return hashlib.sha256(canon.encode()).hexdigest()


def _write_csv(path: str, columns, rows, cfg_hash: str, extra_comments=()) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(f"# funkinv {__version__} config-sha256={cfg_hash}\n")
        for line in extra_comments:
            fh.write(f"# {line}\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def _write_json(path: str, obj: dict, cfg_hash: str) -> None:
    obj = dict(obj)
    obj["_version"] = __version__
    obj["_config_hash"] = cfg_hash
    with open(path, "w", newline="\n") as fh:
        json.dump(obj, fh, sort_keys=True, indent=2)
        fh.write("\n")


# ---------------------------------------------------------------------------
# function-spec mini-language: zonal:j=..,pole=x,y,z | const:c | random-even:J=..,seed=..


def parse_function_spec(text: str, n: int, max_degree: int) -> HarmonicSpectrum:
    kind, _, rest = text.partition(":")
    if kind == "const":
        value = complex(rest) if rest else 1.0
        if n == 3:
            return HarmonicSpectrum(3, 0, np.array([value]))
        return HarmonicSpectrum(n, 0, np.array([value]), np.eye(n)[0])
    fields = {}
    if rest:
        parts = rest.split(",")
        i = 0
        while i < len(parts):
            if "=" not in parts[i]:
                raise InvalidArgumentError(f"malformed function spec field {parts[i]!r}")
            key, val = parts[i].split("=", 1)
            if key == "pole":
                comps = [val]
                while len(comps) < n and i + 1 < len(parts) and "=" not in parts[i + 1]:
                    i += 1
                    comps.append(parts[i])
                fields["pole"] = np.array([float(c) for c in comps])
            else:
                fields[key] = val
            i += 1
    if kind == "zonal":
        j = int(fields.get("j", 2))
        pole = fields.get("pole")
        if pole is None:
            pole = np.eye(n)[0]
        coeffs = np.zeros(j + 1, dtype=complex)
        coeffs[j] = 1.0
        return HarmonicSpectrum(n, j, coeffs, pole)
    if kind == "random-even":
        J = int(fields.get("J", max_degree))
        seed = int(fields.get("seed", 0))
        return random_even_spectrum(n, J, seed, zonal=(n != 3))
    raise InvalidArgumentError(f"unknown function spec kind {kind!r}")


# ---------------------------------------------------------------------------
# subcommands


def _cmd_multipliers(args) -> int:
    defaults = {
        "operator": "cosine", "n": 3, "J": 16, "lambda_re": -1.0, "lambda_im": 0.0,
        "ell": 1, "out": "multipliers.csv",
    }
    cfg = _effective_config(args, defaults)
    h = _config_hash(cfg)
    lam = complex(cfg["lambda_re"], cfg["lambda_im"])
    table = multiplier_table(cfg["operator"], cfg["n"], cfg["J"], lam=lam, ell=cfg["ell"])
    lam_used = cfg["operator"] in ("cosine", "sine", "delta-op")
    ell_used = cfg["operator"] == "delta-op"
    rows = []
    for j, val in zip(table.degrees, table.values):
        rows.append([
            cfg["operator"], str(cfg["n"]), str(j),
            _fmt(lam.real) if lam_used else "",
            _fmt(lam.imag) if lam_used else "",
            str(cfg["ell"]) if ell_used else "",
            _fmt(val.real), _fmt(val.imag),
        ])
    _write_csv(cfg["out"], ["operator", "n", "j", "lambda_re", "lambda_im", "ell",
                            "value_re", "value_im"], rows, h)
    return 0


def _apply_forward(name, f_grid, lam, path, band_limit, pole):
    if name == "cosine":
        return cosine_transform(f_grid, lam=lam, path=path, band_limit=band_limit, pole=pole)
    if name == "sine":
        return sine_transform(f_grid, lam=lam, path=path, band_limit=band_limit, pole=pole)
    if name == "funk":
        return funk_transform(f_grid, path=path, band_limit=band_limit, pole=pole)
    if name == "logcos":
        return log_cosine_transform(f_grid, path=path, band_limit=band_limit, pole=pole)
    if name == "logsine":
        return log_sine_transform(f_grid, path=path, band_limit=band_limit, pole=pole)
    raise InvalidArgumentError(f"unknown transform {name!r}")


def _cmd_forward(args) -> int:
    defaults = {
        "transform": "cosine", "n": 3, "lambda_re": -0.5, "lambda_im": 0.0,
        "path": "auto", "input": "random-even:J=6,seed=0", "resolution": 16,
        "J": 8, "out": "forward.csv",
    }
    cfg = _effective_config(args, defaults)
    h = _config_hash(cfg)
    n = cfg["n"]
    spec = parse_function_spec(cfg["input"], n, cfg["J"])
    grid = build_grid(n, cfg["resolution"])
    f_grid = spec.to_grid(grid)
    lam = complex(cfg["lambda_re"], cfg["lambda_im"])
    pole = spec.pole
    if cfg["transform"] in ("logcos", "logsine") and abs(spec.mean) > 1e-10:
        raise PreconditionError("logarithmic transforms need a mean-zero input function")
    out = _apply_forward(cfg["transform"], f_grid, lam, cfg["path"], spec.max_degree, pole)
    columns = [f"x{i + 1}" for i in range(n)] + ["input_re", "input_im", "output_re", "output_im"]
    rows = []
    for node, fin, fout in zip(grid.nodes, f_grid.values, out.values):
        rows.append([_fmt(c) for c in node]
                    + [_fmt(fin.real), _fmt(fin.imag), _fmt(fout.real), _fmt(fout.imag)])
    _write_csv(cfg["out"], columns, rows, h,
               extra_comments=[f"transform={cfg['transform']} path={out.meta.get('path')}"])
    return 0


def _cmd_diffop(args) -> int:
    defaults = {
        "lambda_re": -1.5, "lambda_im": 0.0, "ell": 1, "n": 3, "path": "spectral",
        "h": 1e-3, "input": "random-even:J=6,seed=0", "resolution": 12, "J": 6,
        "out": "diffop.csv",
    }
    cfg = _effective_config(args, defaults)
    h = _config_hash(cfg)
    n = cfg["n"]
    spec = parse_function_spec(cfg["input"], n, cfg["J"])
    op = WeightedOpSpec(lam=complex(cfg["lambda_re"], cfg["lambda_im"]), ell=cfg["ell"], n=n)
    grid = build_grid(n, cfg["resolution"])
    reference = weighted_laplacian_spectrum(spec, op, method="diagonal").evaluate(grid.nodes)
    if cfg["path"] == "spectral":
        values = reference
    elif cfg["path"] == "factored":
        values = weighted_laplacian_spectrum(spec, op, method="factored").evaluate(grid.nodes)
    elif cfg["path"] == "fd":
        values = weighted_laplacian_fd(spec.evaluate, op, grid.nodes, h=cfg["h"])
    else:
        raise InvalidArgumentError(f"unknown diffop path {cfg['path']!r}")
    columns = [f"x{i + 1}" for i in range(n)] + [
        "value_re", "value_im", "spectral_re", "spectral_im", "abs_diff",
    ]
    rows = []
    for node, v, r in zip(grid.nodes, values, reference):
        rows.append([_fmt(c) for c in node] + [
            _fmt(v.real), _fmt(v.imag), _fmt(r.real), _fmt(r.imag), _fmt(abs(v - r)),
        ])
    _write_csv(cfg["out"], columns, rows, h,
               extra_comments=[f"path={cfg['path']} h={_fmt(cfg['h'])} ell={cfg['ell']}"])
    return 0


_INVERT_TOL = {
    ("funk", 0): 1e-9, ("funk", 1): 1e-6,
    ("cosine1", 0): 1e-8, ("cosine1", 1): 1e-6,
    ("general-between", 0): 1e-8, ("general-between", 1): 1e-8,
    ("general-outside", 0): 1e-8, ("general-outside", 1): 1e-8,
}


def _cmd_invert(args) -> int:
    defaults = {
        "theorem": "funk", "n": 3, "lambda_re": -0.5, "lambda_im": 0.0, "ell": 1,
        "input": "", "resolution": 12, "J": 8, "seed": 0, "tolerance": 0.0,
        "out": "invert.json", "csv": "",
    }
    cfg = _effective_config(args, defaults)
    h = _config_hash(cfg)
    n = cfg["n"]
    input_spec = cfg["input"] or f"random-even:J={cfg['J']},seed={cfg['seed']}"
    f = parse_function_spec(input_spec, n, cfg["J"])
    lam = complex(cfg["lambda_re"], cfg["lambda_im"])
    from .transforms import cosine_spectrum, funk_spectrum

    if cfg["theorem"] == "funk":
        phi = funk_spectrum(f)
        result = invert_funk(phi, reference=f)
    elif cfg["theorem"] == "cosine1":
        phi = cosine_spectrum(f, 1.0)
        result = invert_cosine1(phi, reference=f)
    elif cfg["theorem"] == "general-between":
        phi = cosine_spectrum(f, lam + 2 * cfg["ell"])
        result = invert_general_between(phi, lam, cfg["ell"], reference=f)
    elif cfg["theorem"] == "general-outside":
        phi = cosine_spectrum(f, lam)
        result = invert_general_outside(phi, lam, cfg["ell"], reference=f)
    else:
        raise InvalidArgumentError(f"unknown theorem {cfg['theorem']!r}")

    tol = cfg["tolerance"] or _INVERT_TOL[(cfg["theorem"], n % 2)]
    report = result.report.to_dict()
    report["input"] = input_spec
    report["tolerance"] = tol
    report["passed"] = bool(result.report.max_error <= tol)
    _write_json(cfg["out"], report, h)
    if cfg["csv"]:
        grid = build_grid(n, cfg["resolution"])
        truth = f.evaluate(grid.nodes)
        recons = [r.evaluate(grid.nodes) if isinstance(r, HarmonicSpectrum) else r.values
                  for r in result.reconstructions]
        columns = [f"x{i + 1}" for i in range(n)] + ["f_re", "f_im"]
        for idx in range(len(recons)):
            columns += [f"recon{idx + 1}_re", f"recon{idx + 1}_im"]
        rows = []
        for i, node in enumerate(grid.nodes):
            row = [_fmt(c) for c in node] + [_fmt(truth[i].real), _fmt(truth[i].imag)]
            for rec in recons:
                row += [_fmt(rec[i].real), _fmt(rec[i].imag)]
            rows.append(row)
        _write_csv(cfg["csv"], columns, rows, h)
    return 0 if report["passed"] else 2


def _cmd_convergence(args) -> int:
    defaults = {
        "study": "fd-beltrami", "n": 3, "lambda_re": -1.5, "lambda_im": 0.0, "ell": 1,
        "seed": 0, "J": 6, "h_values": "1e-2,3e-3,1e-3", "resolutions": "4,6,8,10,12",
        "samples_list": "1000,4000,16000,64000", "k": 1, "out": "convergence.csv",
    }
    cfg = _effective_config(args, defaults)
    h = _config_hash(cfg)
    study = cfg["study"]
    rows = []
    passed = True
    slope = None
    if study in ("fd-beltrami", "fd-weighted"):
        steps = [float(s) for s in cfg["h_values"].split(",")]
        if len(steps) < 3:
            raise InvalidArgumentError("need at least 3 step sizes")
        f = random_even_spectrum(3, cfg["J"], cfg["seed"], decay=2.0)
        probes = build_grid(3, 6).nodes[::5]
        errors = []
        for step in steps:
            if study == "fd-beltrami":
                fd = beltrami_fd_values(f.evaluate, probes, h=step)
                ref = beltrami_spectrum(f).evaluate(probes)
            else:
                op = WeightedOpSpec(lam=complex(cfg["lambda_re"], cfg["lambda_im"]),
                                    ell=cfg["ell"], n=3)
                fd = weighted_laplacian_fd(f.evaluate, op, probes, h=step)
                ref = weighted_laplacian_spectrum(f, op).evaluate(probes)
            errors.append(float(np.max(np.abs(fd - ref))))
            rows.append([_fmt(step), _fmt(errors[-1])])
        slope = fd_convergence_slope(errors, steps)
        passed = abs(slope - 2.0) <= 0.2
        columns = ["h", "max_error"]
    elif study == "quadrature":
        resolutions = [int(s) for s in cfg["resolutions"].split(",")]
        if len(resolutions) < 3:
            raise InvalidArgumentError("need at least 3 resolutions")
        pole = np.array([0.6, 0.0, 0.8])
        for res in resolutions:
            grid = build_grid(3, res)
            from .spectral import zonal_eval

            f = grid_function(grid, lambda v: zonal_eval(6, 3, v @ pole))
            err = abs(integrate(f))
            rows.append([str(res), _fmt(err)])
            if res >= 8 and err >= 1e-12:
                passed = False
        columns = ["resolution", "error"]
    elif study == "mc-dual":
        sample_counts = [int(s) for s in cfg["samples_list"].split(",")]
        if len(sample_counts) < 3:
            raise InvalidArgumentError("need at least 3 sample counts")
        n = max(cfg["n"], 4)
        f = random_even_spectrum(n, 4, cfg["seed"], zonal=True)
        psi = funk_k_function(f.evaluate, n, cfg["k"])
        v = np.eye(n)[1]
        sigmas = []
        for count in sample_counts:
            est = dual_funk_k(psi, v, count, cfg["seed"])
            sigmas.append(est.sigma)
            rows.append([str(count), _fmt(est.sigma), _fmt(abs(est.value))])
        slope = float(np.polyfit(np.log(sample_counts), np.log(sigmas), 1)[0])
        passed = abs(slope + 0.5) <= 0.1
        columns = ["samples", "sigma", "abs_value"]
    else:
        raise InvalidArgumentError(f"unknown study {study!r}")
    comments = [f"study={study}"]
    if slope is not None:
        comments.append(f"slope={_fmt(slope)}")
    comments.append(f"passed={passed}")
    _write_csv(cfg["out"], columns, rows, h, extra_comments=comments)
    return 0 if passed else 2


def _cmd_stiefel_check(args) -> int:
    defaults = {
        "identity": "4.8", "n": 4, "k": 2, "lambda_re": 1.0, "lambda_im": 0.0,
        "samples": 100000, "seed": 1, "J": 4, "out": "stiefel-check.json",
    }
    cfg = _effective_config(args, defaults)
    h = _config_hash(cfg)
    lam = complex(cfg["lambda_re"], cfg["lambda_im"]) if cfg["identity"] == "4.8" else None
    result = check_identity(
        cfg["identity"], cfg["n"], cfg["k"], lam=lam, samples=cfg["samples"],
        seed=cfg["seed"], max_degree=cfg["J"],
    )
    _write_json(cfg["out"], result, h)
    ok = result["within_3sigma"] and result["spectral_error"] <= 1e-10
    return 0 if ok else 2


# ---------------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser, *names: str) -> None:
    p.add_argument("--config", default=None, help="flat key = value config file")
    if "n" in names:
        p.add_argument("--n", type=int, default=None)
    if "lam" in names:
        p.add_argument("--lambda-re", "--lambda", dest="lambda_re", type=float, default=None)
        p.add_argument("--lambda-im", dest="lambda_im", type=float, default=None)
    if "ell" in names:
        p.add_argument("--ell", type=int, default=None)
    if "seed" in names:
        p.add_argument("--seed", type=int, default=None)
    if "J" in names:
        p.add_argument("--J", type=int, default=None)
    if "out" in names:
        p.add_argument("--out", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="funkinv",
        description="spherical cosine/Funk/sine transforms, weighted Laplacians, "
        "and their inversion identities",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("multipliers", help="degree-multiplier tables as CSV")
    p.add_argument("--operator", choices=("cosine", "sine", "funk", "log-cosine", "delta-op"),
                   default=None)
    _add_common(p, "n", "lam", "ell", "J", "out")
    p.set_defaults(fn=_cmd_multipliers)

    p = sub.add_parser("forward", help="forward transform of a synthesized input")
    p.add_argument("--transform", choices=TRANSFORM_NAMES, default=None)
    p.add_argument("--path", choices=("quadrature", "spectral", "auto"), default=None)
    p.add_argument("--input", default=None, help="zonal:j=..,pole=.. | const:c | random-even:J=..,seed=..")
    p.add_argument("--resolution", type=int, default=None)
    _add_common(p, "n", "lam", "J", "out")
    p.set_defaults(fn=_cmd_forward)

    p = sub.add_parser("diffop", help="weighted Laplacian path comparison as CSV")
    p.add_argument("--path", choices=("spectral", "factored", "fd"), default=None)
    p.add_argument("--h", type=float, default=None)
    p.add_argument("--input", default=None)
    p.add_argument("--resolution", type=int, default=None)
    _add_common(p, "n", "lam", "ell", "J", "out")
    p.set_defaults(fn=_cmd_diffop)

    p = sub.add_parser("invert", help="round-trip inversion report (JSON + optional CSV)")
    p.add_argument("--theorem", choices=THEOREMS, default=None)
    p.add_argument("--input", default=None)
    p.add_argument("--resolution", type=int, default=None)
    p.add_argument("--tolerance", type=float, default=None)
    p.add_argument("--csv", default=None)
    _add_common(p, "n", "lam", "ell", "seed", "J", "out")
    p.set_defaults(fn=_cmd_invert)

    p = sub.add_parser("convergence", help="error vs parameter tables with slope checks")
    p.add_argument("--study", choices=STUDIES, default=None)
    p.add_argument("--h-values", dest="h_values", default=None)
    p.add_argument("--resolutions", default=None)
    p.add_argument("--samples-list", dest="samples_list", default=None)
    p.add_argument("--k", type=int, default=None)
    _add_common(p, "n", "lam", "ell", "seed", "J", "out")
    p.set_defaults(fn=_cmd_convergence)

    p = sub.add_parser("stiefel-check", help="frame-transform identity check (JSON)")
    p.add_argument("--identity", choices=IDENTITY_TAGS, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--samples", type=int, default=None)
    _add_common(p, "n", "lam", "seed", "J", "out")
    p.set_defaults(fn=_cmd_stiefel_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except FunkinvError as exc:
        json.dump({"error": type(exc).__name__, "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 1
    except OSError as exc:
        json.dump({"error": "OSError", "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
