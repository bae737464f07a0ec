"""Command-line front end: ``phsusy {verify,sweep,identity,spectrum}``.

Configuration is a flat ``key = value`` file (``#`` starts a comment); every
key can be overridden by the command-line flag of the same name.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass, field, fields

import numpy as np

from . import core, fock, phermion, scs, suites
from .errors import AmplitudeError, DegenerateError, DomainError, InvalidParams, PHSusyError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass
class RunConfig:
    omega: float = 2.0
    alpha: float = 1.0
    beta: float = 0.5
    z: float = 0.0
    n_max: int = 8
    scs_n_max: int = 64
    amp_list: list = field(default_factory=lambda: [0j, 0.5 + 0j, 1 + 1j, 2 + 0j])
    R: float = 6.0
    nr: int = 80
    ntheta: int = 64
    seed: int = 0
    samples: int = 20
    suites: list = field(default_factory=lambda: list(suites.DEFAULT_SUITES))
    # keys given explicitly (file or flag), used to apply checks only to user input
    explicit: set = field(default_factory=set, repr=False)

    def params(self) -> core.ModelParams:
        return core.ModelParams(
            self.omega, self.alpha, self.beta, hermitian_limit=self.alpha == self.beta
        )

    def quadrature(self) -> scs.QuadratureSpec:
        return scs.QuadratureSpec(self.R, self.nr, self.ntheta)

    def as_dict(self):
        out = {}
        for f in fields(self):
            if f.name == "explicit":
                continue
            value = getattr(self, f.name)
            if f.name == "amp_list":
                value = [suites._fmt(a) for a in value]
            out[f.name] = value
        return out


def _parse_list(text: str):
    return [t.strip() for t in text.split(",") if t.strip()]


_CONVERT = {
    "omega": float,
    "alpha": float,
    "beta": float,
    "z": float,
    "n_max": int,
    "scs_n_max": int,
    "R": float,
    "nr": int,
    "ntheta": int,
    "seed": int,
    "samples": int,
    "amp_list": lambda t: [suites.to_complex(x) for x in _parse_list(t)],
    "suites": _parse_list,
}


def read_config_file(path: str) -> dict:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value")
            key, value = (t.strip() for t in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in _CONVERT:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            out[key] = value
    return out


def build_config(args) -> RunConfig:
    raw = read_config_file(args.config) if args.config else {}
    for key in _CONVERT:
        value = getattr(args, key, None)
        if value is not None:
            raw[key] = value
    cfg = RunConfig()
    for key, text in raw.items():
        try:
            setattr(cfg, key, _CONVERT[key](text))
        except ValueError as exc:
            raise ValueError(f"bad value for {key}: {text!r} ({exc})") from None
    cfg.explicit = set(raw)
    unknown = set(cfg.suites) - set(suites.SUITES)
    if unknown:
        raise ValueError(f"unknown suites {sorted(unknown)}; choose from {list(suites.SUITES)}")
    for key in ("n_max", "scs_n_max"):
        if getattr(cfg, key) < 2:
            raise ValueError(f"{key} must be >= 2")
    if cfg.samples < 0:
        raise ValueError("samples must be >= 0")
    return cfg


def _validate_point(cfg: RunConfig):
    p = cfg.params()
    core.build_rho(p, cfg.z)
    return p


# -- commands -------------------------------------------------------------


def cmd_verify(cfg: RunConfig):
    p = _validate_point(cfg)
    for a in cfg.amp_list:
        scs.CoherentAmplitude(a, cfg.scs_n_max)
    samples = suites.sample_points(cfg.seed, cfg.samples)
    runners = {
        "core": lambda: suites.core_suite(p, cfg.z, samples),
        "phermion": lambda: suites.phermion_suite(p, cfg.z, samples),
        "susy": lambda: suites.susy_suite(p, cfg.z, cfg.n_max),
        "grassmann": suites.grassmann_suite,
        "scs": lambda: suites.scs_suite(p, cfg.z, cfg.scs_n_max, cfg.amp_list),
        "identity": lambda: suites.identity_suite(p, cfg.z, cfg.n_max, cfg.quadrature()),
    }
    checks, reported = [], {}
    for name in suites.SUITES:
        if name in cfg.suites:
            out = runners[name]()
            checks.extend(out.checks)
            if out.reported:
                reported[name] = out.reported
    return _document("verify", cfg, checks, reported)


def cmd_identity(cfg: RunConfig):
    p = _validate_point(cfg)
    if "amp_list" in cfg.explicit:
        for a in cfg.amp_list:
            scs.CoherentAmplitude(a, cfg.n_max)
    start = time.perf_counter()
    out = suites.identity_suite(p, cfg.z, cfg.n_max, cfg.quadrature())
    wall = time.perf_counter() - start
    doc = _document("identity", cfg, out.checks, {"identity": out.reported})
    doc["wall_time_s"] = round(wall, 3)
    return doc


def cmd_spectrum(cfg: RunConfig):
    p = _validate_point(cfg)
    s = fock.build_superspace(p, cfg.z, cfg.n_max)
    levels = []
    checks = []
    for k, value, mult, dev in fock.spectrum_levels(s):
        expected = fock.expected_multiplicity(k, cfg.n_max)
        levels.append({"k": k, "energy": value, "multiplicity": mult, "expected": expected,
                       "deviation": dev})
        checks.append(suites.Check("spectrum", f"level {k} = {k} Omega", suites.ANCHOR["hamiltonian"],
                                   dev, core.ROUTE_TOL))
        checks.append(suites.Check("spectrum", f"level {k} multiplicity {expected}",
                                   suites.ANCHOR["hamiltonian"], suites._flag(mult == expected), 0.0))
    doc = _document("spectrum", cfg, checks, {})
    doc["Omega"] = s.Omega
    doc["levels"] = levels
    return doc


SWEEP_COLUMNS = (
    "param", "value", "epsilon", "theta", "Omega", "delta", "lambda",
    "min_eig_rho", "anticomm_residual", "status",
)


def sweep_rows(cfg: RunConfig, param: str, lo: float, hi: float, steps: int):
    if param not in ("z", "omega", "alpha", "beta"):
        raise ValueError(f"cannot sweep {param!r}")
    rows = []
    for v in np.linspace(lo, hi, steps):
        v = float(v)
        point = {k: getattr(cfg, k) for k in ("omega", "alpha", "beta", "z")}
        point[param] = v
        row = dict.fromkeys(SWEEP_COLUMNS, "")
        row.update(param=param, value=v)
        try:
            p = core.ModelParams(point["omega"], point["alpha"], point["beta"],
                                 hermitian_limit=point["alpha"] == point["beta"])
            m = core.build_rho(p, point["z"])
            _, sc = core.build_h(p, point["z"], metric=m)
            pair = phermion.build_B(p, point["z"])
            row.update(
                epsilon=m.epsilon, theta=m.theta, Omega=sc.Omega, delta=sc.delta,
                **{"lambda": sc.lam},
                min_eig_rho=float(np.min(np.linalg.eigvalsh(m.rho))),
                anticomm_residual=pair.anticommutator_residual(),
                status="ok",
            )
        except DomainError as exc:
            row["status"] = f"DomainError(argument={exc.argument!r})"
        except DegenerateError:
            row["status"] = "DegenerateError"
        except InvalidParams:
            row["status"] = "InvalidParams"
        except PHSusyError as exc:
            row["status"] = type(exc).__name__
        rows.append(row)
    return rows


def _document(command, cfg, checks, reported):
    checks = sorted(checks, key=lambda c: (suites.SUITES.index(c.suite)
                                           if c.suite in suites.SUITES else len(suites.SUITES),
                                           c.check_id))
    items = [c.as_dict() for c in checks]
    return {
        "command": command,
        "seed": cfg.seed,
        "config": cfg.as_dict(),
        "checks": items,
        "reported": reported,
        "summary": {
            "total": len(items),
            "failed": sum(not c["pass"] for c in items),
            "pass": all(c["pass"] for c in items),
        },
    }


def _render_checks_csv(doc) -> str:
    buf = io.StringIO()
    cols = ("suite", "check_id", "paper_anchor", "residual", "tolerance", "pass")
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\r\n")
    w.writeheader()
    for c in doc["checks"]:
        w.writerow({k: (repr(c[k]) if isinstance(c[k], float) else c[k]) for k in cols})
    return buf.getvalue()


def _render_rows_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=SWEEP_COLUMNS, lineterminator="\r\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in r.items()})
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, default=_default) + "\n"


def _default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, complex):
        return suites._fmt(o)
    raise TypeError(f"cannot serialize {type(o).__name__}")


# -- argument parsing -------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH")
    common.add_argument("--out", metavar="PATH")
    common.add_argument("--format", choices=("json", "csv"))
    for key in ("omega", "alpha", "beta", "z", "R"):
        common.add_argument(f"--{key}", dest=key)
    for key in ("n_max", "scs_n_max", "nr", "ntheta", "seed", "samples", "amp_list", "suites"):
        common.add_argument(f"--{key.replace('_', '-')}", dest=key)

    parser = argparse.ArgumentParser(prog="phsusy", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("verify", parents=[common], help="run verification suites")
    sw = sub.add_parser("sweep", parents=[common], help="tabulate derived scalars on a grid")
    sw.add_argument("--vary", required=True, choices=("z", "omega", "alpha", "beta"))
    sw.add_argument("--lo", type=float, required=True)
    sw.add_argument("--hi", type=float, required=True)
    sw.add_argument("--steps", type=int, default=101)
    sub.add_parser("identity", parents=[common], help="resolution of identity by quadrature")
    sub.add_parser("spectrum", parents=[common], help="levels of the supersymmetric Hamiltonian")
    return parser


def _emit(text: str, out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = build_config(args)
        if args.command == "sweep":
            if args.steps < 1:
                raise ValueError("steps must be >= 1")
            rows = sweep_rows(cfg, args.vary, args.lo, args.hi, args.steps)
            text = _json(rows) if args.format == "json" else _render_rows_csv(rows)
            _emit(text, args.out)
            return EXIT_OK
        doc = {"verify": cmd_verify, "identity": cmd_identity, "spectrum": cmd_spectrum}[
            args.command
        ](cfg)
    except DomainError as exc:
        print(f"error: DomainError: {exc} (argument={exc.argument!r})", file=sys.stderr)
        return EXIT_USAGE
    except (InvalidParams, DegenerateError, AmplitudeError, ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = _render_checks_csv(doc) if args.format == "csv" else _json(doc)
    _emit(text, args.out)
    return EXIT_OK if doc["summary"]["pass"] else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
