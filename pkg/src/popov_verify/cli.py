"""Command-line front end: single runs, grid scans, Mellin checks and the catalog."""

from __future__ import annotations

import argparse
import configparser
import csv
import hashlib
import io
import itertools
import json
import math
import os
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

import numpy as np

from . import mellin
from .errors import (
    DomainError,
    DomainNotCovered,
    FailedToFindTau0,
    HorizonOverflow,
    InvalidSpec,
    NoConvergence,
    PoleAt,
    RangeExceeded,
    TolUnreachable,
    VerificationError,
)
from .identities import CATALOG, EvaluationReport, IdentityCase

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_SPEC = 2
EXIT_TOL = 3

SPEC_ERRORS = (InvalidSpec, DomainNotCovered, DomainError, PoleAt)
TOL_ERRORS = (TolUnreachable, RangeExceeded, NoConvergence, FailedToFindTau0, HorizonOverflow)

MAX_TERMS_ENV = "POPOV_VERIFY_MAX_TERMS"

# flag name -> parameter key
PARAM_FLAGS = {
    "k": "k",
    "x": "x",
    "y": "y",
    "z": "z",
    "nu": "nu",
    "q": "q",
    "q_riesz": "q_riesz",
    "s": "s",
    "alpha": "alpha",
    "beta": "beta",
    "mu": "mu",
    "sigma": "sigma",
    "T": "T",
}
INT_PARAMS = {"k", "q"}
PROBE_IDS = {"analogue_j", "analogue_i", "cusp_tau_j", "cusp_tau_i"}


@dataclass(frozen=True)
class MellinCheck:
    name: str
    params: tuple[str, ...]
    defaults: dict
    constraint: str
    summary: str


MELLIN_CHECKS: dict[str, MellinCheck] = {
    c.name: c
    for c in (
        MellinCheck("forward", ("s", "alpha", "beta", "k"), {"tol": 1e-10}, "alpha>beta>0, Re s>1/2-k/4",
                    "x^{s-1} e^{-alpha x} J_nu(beta x) transform against Gamma 2F1"),
        MellinCheck("inverse", ("x", "alpha", "beta", "k", "sigma", "T"), {"tol": 1e-8, "sigma": 1.0, "T": None},
                    "alpha>beta>0, x>0, sigma>1/4", "e^{-alpha x} J_nu(beta x) from the vertical line integral"),
        MellinCheck("roundtrip", ("alpha", "beta", "k", "sigma"), {"tol": 1e-8, "sigma": 1.0},
                    "alpha>beta>0", "inverse of the closed-form transform at x = 0.5, 1, 2"),
        MellinCheck("jk", ("s", "alpha", "beta", "mu", "nu"), {"tol": 1e-9}, "alpha>beta>0, Re(s+mu)>|Re nu|",
                    "x^{s-1} J_mu(beta x) K_nu(alpha x) transform plus its inverse at x=1"),
        MellinCheck("jk_inverse", ("x", "alpha", "beta", "mu", "nu", "sigma", "T"),
                    {"tol": 1e-8, "sigma": None, "T": None}, "alpha>beta>0, sigma+mu>|Re nu|",
                    "J_mu(beta x) K_nu(alpha x) from the vertical line integral"),
        MellinCheck("asym2f1", ("sigma", "nu", "alpha", "beta"), {"tol": 4.0, "sigma": 1.0, "nu": 0.0},
                    "alpha>beta>=0, nu>-1", "deviation*t of 2F1 from its Bessel-I asymptote; tol is the allowed band"),
        MellinCheck("gamma2f1", ("sigma", "mu", "nu", "alpha", "beta"), {"tol": 30.0},
                    "alpha>beta>=0, sigma+mu>|Re nu|", "scan for tau0 of the Gamma 2F1 bound; tol caps tau0"),
    )
}


# ------------------------------------------------------------------ values


def fmt_num(v: Any) -> str:
    """17 significant digits; ints stay ints, floats keep a decimal mark."""
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        s = format(float(v), ".17g")
        if re.fullmatch(r"-?\d+", s):
            s += ".0"
        return s
    if isinstance(v, complex):
        return f"{v.real:.17g}{v.imag:+.17g}j"
    return str(v)


def parse_num(s: str) -> Any:
    if s == "":
        return None
    if s in ("true", "false"):
        return s == "true"
    if re.fullmatch(r"[+-]?\d+", s):
        return int(s)
    try:
        return float(s)
    except ValueError:
        pass
    try:
        return complex(s.replace("i", "j") if "j" not in s else s)
    except ValueError:
        return s


def parse_scalar(key: str, text: str) -> Any:
    text = text.strip()
    if key in INT_PARAMS:
        try:
            return int(text)
        except ValueError:
            raise InvalidSpec(f"--{key} needs an integer, got {text!r}") from None
    try:
        return float(text)
    except ValueError:
        pass
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise InvalidSpec(f"--{key}: cannot read {text!r} as a number") from None


def is_grid(text: str) -> bool:
    return ".." in text or "," in text


def expand_grid(key: str, text: str) -> list:
    """``a..b`` integers inclusive, ``a..b:n`` n evenly spaced points, ``u,v,w`` a list."""
    text = text.strip()
    if ".." in text:
        span, _, count = text.partition(":")
        lo_s, _, hi_s = span.partition("..")
        if count:
            try:
                n = int(count)
            except ValueError:
                raise InvalidSpec(f"--{key}: bad point count in {text!r}") from None
            if n < 1:
                raise InvalidSpec(f"--{key}: grid {text!r} is empty")
            lo, hi = float(parse_scalar("", lo_s)), float(parse_scalar("", hi_s))
            pts = [float(v) for v in np.linspace(lo, hi, n)]
            return [int(round(v)) for v in pts] if key in INT_PARAMS else pts
        try:
            lo_i, hi_i = int(lo_s), int(hi_s)
        except ValueError:
            raise InvalidSpec(f"--{key}: {text!r} needs integer ends or a ':n' count") from None
        if hi_i < lo_i:
            raise InvalidSpec(f"--{key}: grid {text!r} is empty")
        vals = list(range(lo_i, hi_i + 1))
        return vals if key in INT_PARAMS else [float(v) for v in vals]
    items = [p for p in text.split(",") if p.strip()]
    if not items:
        raise InvalidSpec(f"--{key}: grid {text!r} is empty")
    return [parse_scalar(key, p) for p in items]


# ----------------------------------------------------------------- records


@dataclass
class ReportRecord:
    identity: str
    params: dict
    lhs: complex | None = None
    rhs: complex | None = None
    abs_residual: float | None = None
    rel_residual: float | None = None
    lhs_tail: float | None = None
    rhs_tail: float | None = None
    tol: float | None = None
    terms_used: int | None = None
    passed: bool = False
    wall_time: float = 0.0
    status: str = "ok"
    message: str = ""
    extra: dict = field(default_factory=dict)

    def to_flat(self) -> dict[str, str]:
        out = {"id": self.identity}
        for key, v in self.params.items():
            out[f"param.{key}"] = fmt_num(v)
        out["lhs"] = fmt_num(self.lhs)
        out["rhs"] = fmt_num(self.rhs)
        for name in ("abs_residual", "rel_residual", "lhs_tail", "rhs_tail", "tol", "terms_used"):
            out[name] = fmt_num(getattr(self, name))
        out["pass"] = fmt_num(self.passed)
        out["status"] = self.status
        out["message"] = self.message
        for key, v in self.extra.items():
            out[f"extra.{key}"] = fmt_num(v)
        out["wall_time"] = fmt_num(float(self.wall_time))
        return out

    @classmethod
    def from_flat(cls, d: dict[str, str]) -> ReportRecord:
        params = {k[6:]: parse_num(v) for k, v in d.items() if k.startswith("param.")}
        extra = {k[6:]: parse_num(v) for k, v in d.items() if k.startswith("extra.")}

        def num(name: str, kind=float):
            raw = d.get(name, "")
            if raw == "":
                return None
            return int(raw) if kind is int else kind(raw)

        return cls(
            identity=d["id"],
            params=params,
            lhs=num("lhs", complex),
            rhs=num("rhs", complex),
            abs_residual=num("abs_residual"),
            rel_residual=num("rel_residual"),
            lhs_tail=num("lhs_tail"),
            rhs_tail=num("rhs_tail"),
            tol=num("tol"),
            terms_used=num("terms_used", int),
            passed=d.get("pass") == "true",
            wall_time=float(d.get("wall_time") or 0.0),
            status=d.get("status", "ok"),
            message=d.get("message", ""),
            extra=extra,
        )


def _as_complex(v: Any) -> complex:
    return complex(v)


def record_from_report(ident: str, params: dict, rep: EvaluationReport, wall: float) -> ReportRecord:
    extra = {k: v for k, v in rep.notes.items() if isinstance(v, (bool, int, float, complex))}
    merged = dict(params)
    for k, v in rep.params.items():
        if isinstance(v, (bool, int, float, complex)) and k not in merged:
            merged[k] = v
    return ReportRecord(
        identity=ident,
        params=merged,
        lhs=_as_complex(rep.lhs.value),
        rhs=_as_complex(rep.rhs.value),
        abs_residual=float(rep.abs_residual),
        rel_residual=float(rep.rel_residual),
        lhs_tail=float(rep.lhs.tail_bound),
        rhs_tail=float(rep.rhs.tail_bound),
        tol=float(rep.tol),
        terms_used=int(rep.terms_used),
        passed=bool(rep.passed),
        wall_time=wall,
        extra=extra,
    )


def error_record(ident: str, params: dict, exc: VerificationError, wall: float) -> ReportRecord:
    return ReportRecord(ident, dict(params), passed=False, wall_time=wall, status=type(exc).__name__, message=str(exc))


def determinism_hash(records: Sequence[ReportRecord]) -> str:
    rows = []
    for r in records:
        flat = r.to_flat()
        flat.pop("wall_time")
        rows.append(flat)
    blob = json.dumps(rows, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


# --------------------------------------------------------------- evaluation


def _strip_none(params: dict) -> dict:
    return {k: v for k, v in params.items() if v is not None}


def evaluate_identity(ident: str, params: dict, tol: float | None, probe: bool = False) -> list[ReportRecord]:
    start = time.perf_counter()
    kw = _strip_none(params)
    if probe:
        kw["probe"] = True
    try:
        case = IdentityCase(ident, kw, tol)
        rep = case.evaluate()
    except VerificationError as exc:
        return [error_record(ident, params, exc, time.perf_counter() - start)]
    shown = {k: v for k, v in case.params.items() if k in CATALOG[ident].params}
    return [record_from_report(ident, shown, rep, time.perf_counter() - start)]


def _need(check: MellinCheck, p: dict) -> dict:
    merged = {k: v for k, v in check.defaults.items() if k != "tol"}
    merged.update({k: v for k, v in p.items() if v is not None or k not in merged})
    missing = [k for k in check.params if k not in merged]
    if missing:
        raise InvalidSpec(f"mellin {check.name} needs --{', --'.join(missing)}")
    extra = [k for k in merged if k not in check.params]
    if extra:
        raise InvalidSpec(f"mellin {check.name} does not take --{', --'.join(extra)}")
    return merged


def _real(name: str, v: Any) -> float:
    c = complex(v)
    if c.imag != 0.0:
        raise InvalidSpec(f"--{name} must be real, got {v}")
    return c.real


def evaluate_mellin(name: str, params: dict, tol: float | None, heights: Sequence[float] | None = None) -> list[ReportRecord]:
    check = MELLIN_CHECKS[name]
    start = time.perf_counter()
    ident = f"mellin_{name}"
    try:
        p = _need(check, params)
        t = check.defaults["tol"] if tol is None else tol
        if not (t > 0.0 and math.isfinite(t)):
            raise InvalidSpec(f"tolerance must be positive, got {t}")
        shown = {k: p[k] for k in check.params if p.get(k) is not None}
        if name == "forward":
            reps = [mellin.mellin_forward_check(p["s"], _real("alpha", p["alpha"]), _real("beta", p["beta"]), int(_real("k", p["k"])), t)]
        elif name == "inverse":
            reps = [mellin.mellin_inverse_check(_real("x", p["x"]), _real("alpha", p["alpha"]), _real("beta", p["beta"]),
                                                int(_real("k", p["k"])), _real("sigma", p["sigma"]),
                                                None if p["T"] is None else _real("T", p["T"]), t)]
        elif name == "roundtrip":
            reps = mellin.round_trip(_real("alpha", p["alpha"]), _real("beta", p["beta"]), int(_real("k", p["k"])),
                                     _real("sigma", p["sigma"]), tol=t)
        elif name == "jk":
            reps = [mellin.mellin_jk_check(p["s"], _real("alpha", p["alpha"]), _real("beta", p["beta"]), _real("mu", p["mu"]), p["nu"], t)]
        elif name == "jk_inverse":
            reps = [mellin.jk_inverse_check(_real("x", p["x"]), _real("alpha", p["alpha"]), _real("beta", p["beta"]),
                                            _real("mu", p["mu"]), p["nu"],
                                            None if p["sigma"] is None else _real("sigma", p["sigma"]),
                                            None if p["T"] is None else _real("T", p["T"]), t)]
        elif name == "asym2f1":
            hs = tuple(heights) if heights else (50.0, 100.0, 200.0)
            res = mellin.asymptotic_check_2f1(_real("sigma", p["sigma"]), _real("nu", p["nu"]), _real("alpha", p["alpha"]),
                                              _real("beta", p["beta"]), hs)
            wall = time.perf_counter() - start
            ok = res.band <= t and res.decreasing
            return [
                ReportRecord(ident, {**shown, "t": h}, tol=t, passed=ok, wall_time=wall / len(hs),
                             extra={"ratio": r, "deviation_t": d, "band": res.band, "decreasing": res.decreasing})
                for h, r, d in zip(res.heights, res.ratios, res.deviations)
            ]
        else:  # gamma2f1
            ratio = _real("beta", p["beta"]) / _real("alpha", p["alpha"])
            if not _real("alpha", p["alpha"]) > 0.0:
                raise InvalidSpec("need alpha > 0")
            res = mellin.asymptotic_check_gamma2f1(_real("sigma", p["sigma"]), _real("mu", p["mu"]), p["nu"], ratio, t)
            return [ReportRecord(ident, shown, tol=t, passed=res.tau0 is not None and res.tau0 <= t,
                                 wall_time=time.perf_counter() - start, extra={"tau0": res.tau0})]
    except VerificationError as exc:
        return [error_record(ident, params, exc, time.perf_counter() - start)]
    wall = (time.perf_counter() - start) / len(reps)
    out = []
    for rep in reps:
        rp = dict(shown)
        if name == "roundtrip":
            rp["x"] = rep.params["n_arg"]
        out.append(record_from_report(ident, rp, rep, wall))
    return out


def _work(task: tuple) -> list[ReportRecord]:
    kind, name, params, tol, extra = task
    if kind == "mellin":
        return evaluate_mellin(name, params, tol, extra)
    return evaluate_identity(name, params, tol, bool(extra))


def run_tasks(tasks: list[tuple], jobs: int) -> list[ReportRecord]:
    """Evaluate grid points, returning records in task order for any ``jobs``."""
    if jobs <= 1 or len(tasks) <= 1:
        groups = [_work(t) for t in tasks]
    else:
        chunk = max(1, len(tasks) // (4 * jobs))
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            groups = list(pool.map(_work, tasks, chunksize=chunk))
    return [r for g in groups for r in g]


# ------------------------------------------------------------------- output


def _columns(rows: list[dict[str, str]]) -> list[str]:
    cols: list[str] = []
    seen = set()
    for row in rows:
        for key in row:
            if key not in seen:
                seen.add(key)
                cols.append(key)
    return cols


def render(records: list[ReportRecord], fmt: str, header: dict) -> str:
    rows = [r.to_flat() for r in records]
    digest = determinism_hash(records)
    if fmt == "json":
        doc = {
            **header,
            "records": rows,
            "summary": {
                "count": len(records),
                "passed": sum(r.passed for r in records),
                "failed": sum(1 for r in records if not r.passed and r.status == "ok"),
                "errors": sum(1 for r in records if r.status != "ok"),
                "determinism_hash": digest,
            },
        }
        return json.dumps(doc, indent=1) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=_columns(rows), restval="", lineterminator="\r\n")
        writer.writeheader()
        writer.writerows(rows)
        return buf.getvalue()
    lines = []
    for r in records:
        params = " ".join(f"{k}={_show(v)}" for k, v in r.params.items())
        if r.status != "ok":
            lines.append(f"ERROR {r.identity} {params}: {r.status}: {r.message}")
        elif r.abs_residual is not None:
            thr = (r.tol or 0.0) + (r.lhs_tail or 0.0) + (r.rhs_tail or 0.0)
            verdict = "PASS" if r.passed else "FAIL"
            lines.append(
                f"{verdict} {r.identity} {params}  residual={r.abs_residual:.3e} threshold={thr:.3e} terms={r.terms_used}"
            )
        else:
            verdict = "PASS" if r.passed else "FAIL"
            bits = " ".join(f"{k}={fmt_num(v) if not isinstance(v, float) else format(v, '.8g')}" for k, v in r.extra.items())
            lines.append(f"{verdict} {r.identity} {params}  {bits}")
    n_pass = sum(r.passed for r in records)
    lines.append(f"{n_pass}/{len(records)} passed  hash={digest}")
    return "\n".join(lines) + "\n"


def emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def exit_code(records: Iterable[ReportRecord]) -> int:
    codes = {EXIT_OK}
    for r in records:
        if r.status == "ok":
            if not r.passed:
                codes.add(EXIT_FAIL)
            continue
        cls = _ERROR_CLASSES.get(r.status)
        if cls is not None and issubclass(cls, SPEC_ERRORS):
            codes.add(EXIT_SPEC)
        elif cls is not None and issubclass(cls, TOL_ERRORS):
            codes.add(EXIT_TOL)
        else:
            codes.add(EXIT_FAIL)
    for c in (EXIT_SPEC, EXIT_TOL, EXIT_FAIL):
        if c in codes:
            return c
    return EXIT_OK


_ERROR_CLASSES = {
    c.__name__: c
    for c in (*SPEC_ERRORS, *TOL_ERRORS)
}


# ------------------------------------------------------------------ parsing


def _config_values(path: str) -> dict[str, str]:
    parser = configparser.ConfigParser(interpolation=None, comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        with open(path) as fh:
            parser.read_string("[verify]\n" + fh.read())
    except (OSError, configparser.Error) as exc:
        raise InvalidSpec(f"cannot read config {path}: {exc}") from None
    return {k.replace("-", "_"): v.strip().strip('"').strip("'") for k, v in parser["verify"].items()}


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tol", type=float, default=None, help="target tolerance (defaults per identity)")
    p.add_argument("--format", choices=("json", "csv", "pretty"), default=None)
    p.add_argument("--out", default=None, help="write the report here instead of stdout")
    p.add_argument("--jobs", type=int, default=None, help="worker processes across grid points")
    p.add_argument("--max-terms", type=int, default=None, help=f"series horizon cap (also ${MAX_TERMS_ENV})")
    p.add_argument("--config", default=None, help="key=value file mirroring the flags")


def _param_flags(p: argparse.ArgumentParser) -> None:
    for flag in PARAM_FLAGS:
        p.add_argument(f"--{flag.replace('_', '-')}", dest=flag, default=None, metavar="V")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="verify", description="Numerical checks of theta-Bessel summation identities.")
    sub = ap.add_subparsers(dest="command", required=True)

    lp = sub.add_parser("list", help="show the identity catalog")
    lp.add_argument("--format", choices=("json", "csv", "pretty"), default="pretty")
    lp.add_argument("--out", default=None)

    for name, help_ in (("run", "evaluate one parameter point"), ("scan", "evaluate a parameter grid")):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("identity")
        _common(sp)
        _param_flags(sp)
        sp.add_argument("--probe", action="store_true", default=None,
                        help="allow points outside the stated domain (analogue and tau identities)")

    mp = sub.add_parser("mellin", help="Mellin pair and height-asymptotic checks")
    mp.add_argument("check", choices=sorted(MELLIN_CHECKS))
    _common(mp)
    _param_flags(mp)
    mp.add_argument("--heights", default=None, help="comma list of heights for asym2f1")
    return ap


def _merge_config(args: argparse.Namespace) -> None:
    if not getattr(args, "config", None):
        return
    for key, v in _config_values(args.config).items():
        if key in ("config", "command", "identity", "check"):
            continue
        if not hasattr(args, key):
            raise InvalidSpec(f"config key {key!r} is not a flag of '{args.command}'")
        if getattr(args, key) is not None:
            continue  # flags win
        if key in ("tol",):
            v = float(v)
        elif key in ("jobs", "max_terms"):
            v = int(v)
        elif key == "probe":
            v = v.lower() in ("1", "true", "yes")
        setattr(args, key, v)


def _grid_params(args: argparse.Namespace, allow_grid: bool) -> list[tuple[str, list]]:
    axes = []
    for flag, key in PARAM_FLAGS.items():
        raw = getattr(args, flag, None)
        if raw is None:
            continue
        raw = str(raw)
        if is_grid(raw):
            if not allow_grid:
                raise InvalidSpec(f"--{flag} {raw}: grids need 'verify scan'")
            axes.append((key, expand_grid(key, raw)))
        else:
            axes.append((key, [parse_scalar(key, raw)]))
    return axes


def _ordered_axes(axes: list[tuple[str, list]], order: Sequence[str]) -> list[tuple[str, list]]:
    rank = {k: i for i, k in enumerate(order)}
    return sorted(axes, key=lambda a: rank.get(a[0], len(rank)))


def _points(axes: list[tuple[str, list]]) -> list[dict]:
    keys = [k for k, _ in axes]
    return [dict(zip(keys, combo)) for combo in itertools.product(*(vals for _, vals in axes))]


def _show(v: Any) -> str:
    """Shortest round-trip form for messages meant for people."""
    if isinstance(v, complex):
        return str(v).strip("()")
    return repr(v) if isinstance(v, float) else str(v)


def _report_errors(records: list[ReportRecord], constraint_of) -> None:
    for r in records:
        if r.status == "ok":
            continue
        params = ", ".join(f"{k}={_show(v)}" for k, v in r.params.items())
        print(f"verify: {r.identity} at ({params}): {r.status}: {r.message} [domain: {constraint_of(r.identity)}]",
              file=sys.stderr)


def cmd_list(fmt: str, out: str | None) -> int:
    entries = [{"id": e.id, "params": list(e.params), "constraints": e.constraint, "anchor": e.anchor} for e in CATALOG.values()]
    if fmt == "json":
        text = json.dumps(entries, indent=1) + "\n"
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(["id", "params", "constraints", "anchor"])
        for e in entries:
            w.writerow([e["id"], " ".join(e["params"]), e["constraints"], e["anchor"]])
        text = buf.getvalue()
    else:
        width = max(len(e["id"]) for e in entries)
        text = "".join(
            f"{e['id']:<{width}}  ({', '.join(e['params'])})  [{e['constraints']}]  {e['anchor']}\n" for e in entries
        )
    emit(text, out)
    return EXIT_OK


def _run(args: argparse.Namespace) -> int:
    _merge_config(args)
    fmt = args.format or "pretty"
    jobs = args.jobs or 1
    if jobs < 1:
        raise InvalidSpec("--jobs must be at least 1")
    if args.tol is not None and not (args.tol > 0.0 and math.isfinite(args.tol)):
        raise InvalidSpec(f"--tol must be positive, got {args.tol}")
    if args.max_terms is not None:
        if args.max_terms < 1:
            raise InvalidSpec("--max-terms must be at least 1")
        os.environ[MAX_TERMS_ENV] = str(args.max_terms)

    if args.command == "mellin":
        check = MELLIN_CHECKS[args.check]
        heights = None
        if args.heights:
            heights = [float(parse_scalar("heights", h)) for h in str(args.heights).split(",") if h.strip()]
            if not heights:
                raise InvalidSpec("--heights is empty")
        axes = _ordered_axes(_grid_params(args, True), check.params)
        tasks = [("mellin", args.check, pt, args.tol, heights) for pt in _points(axes)]
        header = {"command": "mellin", "check": args.check}

        def constraint_of(_ident: str) -> str:
            return check.constraint
    else:
        if args.identity not in CATALOG:
            raise InvalidSpec(f"unknown identity id {args.identity!r}; see 'verify list'")
        entry = CATALOG[args.identity]
        if args.probe and args.identity not in PROBE_IDS:
            raise InvalidSpec(f"--probe is not available for {args.identity}")
        axes = _ordered_axes(_grid_params(args, args.command == "scan"), entry.params)
        tasks = [("identity", args.identity, pt, args.tol, bool(args.probe)) for pt in _points(axes)]
        header = {"command": args.command, "identity": args.identity}

        def constraint_of(ident: str) -> str:
            return CATALOG[ident].constraint

    records = run_tasks(tasks, jobs)
    _report_errors(records, constraint_of)
    emit(render(records, fmt, header), args.out)
    return exit_code(records)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    saved = os.environ.get(MAX_TERMS_ENV)
    try:
        if args.command == "list":
            return cmd_list(args.format, args.out)
        return _run(args)
    except SPEC_ERRORS as exc:
        print(f"verify: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SPEC
    except TOL_ERRORS as exc:
        print(f"verify: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_TOL
    finally:
        # --max-terms reaches workers through the environment; undo it for in-process callers
        if saved is None:
            os.environ.pop(MAX_TERMS_ENV, None)
        else:
            os.environ[MAX_TERMS_ENV] = saved


if __name__ == "__main__":
    sys.exit(main())
