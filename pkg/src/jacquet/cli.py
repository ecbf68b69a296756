"""Command-line front end.

Exit codes: 0 all checks pass, 1 verification failure, 2 usage or parameter
error, 3 truncation or resource limit.
"""

from __future__ import annotations

import argparse
import configparser
import logging
import sys
import time

from . import report
from .analysis import all_certificates, filtration_report, formal_character
from .boundary import boundary_map
from .cache import Cache, cache_dir_from_env, cache_key
from .errors import (
    CatalogError,
    ConfigurationError,
    JacquetError,
    ResourceError,
    TruncationError,
    UnsupportedParameterError,
    VerificationError,
)
from .liedata import CATALOG_NAMES, Weight, load_algebra
from .polykernel import parse_rational, rational_str
from .spherical import build_module

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_TRUNCATION = 0, 1, 2, 3

COMMANDS = ("catalog", "invariants", "boundary-map", "verify", "certificates", "filtration", "character", "split-test", "all")

log = logging.getLogger("jacquet")


class UsageError(JacquetError):
    code = "usage"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--algebra", help="catalog entry: " + ", ".join(CATALOG_NAMES))
    common.add_argument(
        "--lambda",
        dest="lam",
        help="lambda in simple-root coordinates, comma separated rationals (use --lambda=-1/2 for negatives)",
    )
    common.add_argument("--truncation", "-K", type=int, help="truncation height K")
    common.add_argument("--out", help="write the JSON report here (default: stdout)")
    common.add_argument("--config", help="INI file with a [jacquet] section mirroring the flags")
    common.add_argument("--cache-dir", help="cache directory (default: $JACQUET_CACHE_DIR)")
    common.add_argument("--generator", type=int, help="generator index for split-test (1-based)")
    common.add_argument("-v", "--verbose", action="count", default=None)
    parser = _Parser(prog="jacquet", description="Jacquet modules of spherical principal series")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for c in COMMANDS:
        sub.add_parser(c, parents=[common])
    return parser


def parse_lambda(text):
    parts = [p for p in text.replace(",", " ").split() if p]
    if not parts:
        raise UsageError("empty lambda")
    try:
        return [parse_rational(p) for p in parts]
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse lambda {text!r}: {exc}") from exc


def load_config(args):
    """Merge flags over the config file into a plain dict."""
    cfg = {}
    if args.config:
        cp = configparser.ConfigParser()
        if not cp.read(args.config):
            raise ConfigurationError(f"cannot read config file {args.config}")
        if cp.has_section("jacquet"):
            sec = cp["jacquet"]
            for key in ("algebra", "lambda", "truncation", "out", "cache_dir", "generator", "verbosity"):
                if key in sec:
                    cfg[key] = sec[key]
    flags = {
        "algebra": args.algebra,
        "lambda": args.lam,
        "truncation": args.truncation,
        "out": args.out,
        "cache_dir": args.cache_dir,
        "generator": args.generator,
        "verbosity": args.verbose,
    }
    cfg.update({k: v for k, v in flags.items() if v is not None})
    out = {"command": args.command}
    out["algebra"] = cfg.get("algebra")
    if out["algebra"] is not None and out["algebra"] not in CATALOG_NAMES:
        raise CatalogError(f"unknown algebra {out['algebra']!r}; choose one of {', '.join(CATALOG_NAMES)}")
    out["lambda"] = None if cfg.get("lambda") is None else parse_lambda(str(cfg["lambda"]))
    try:
        out["truncation"] = None if cfg.get("truncation") is None else int(cfg["truncation"])
        out["generator"] = int(cfg.get("generator", 1))
        out["verbosity"] = int(cfg.get("verbosity", 0))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if out["truncation"] is not None and out["truncation"] < 1:
        raise UsageError("truncation height must be at least 1")
    out["out"] = cfg.get("out")
    out["cache_dir"] = cfg.get("cache_dir") or cache_dir_from_env()
    return out


def _require(cfg, *keys):
    missing = [k for k in keys if cfg.get(k) is None]
    if missing:
        raise UsageError(f"{cfg['command']} needs --{' --'.join(missing)}")


def _echo(cfg):
    echo = {k: cfg[k] for k in ("algebra", "truncation") if cfg.get(k) is not None}
    if cfg["command"] in ("split-test", "all"):
        echo["generator"] = cfg["generator"]
    if cfg.get("lambda") is not None:
        echo["lambda"] = [rational_str(x) for x in cfg["lambda"]]
        alg = load_algebra(cfg["algebra"])
        if len(cfg["lambda"]) != alg.rank:
            raise UsageError(f"{alg.name} has rank {alg.rank}; lambda has {len(cfg['lambda'])} coordinates")
        lam = Weight(cfg["lambda"])
        echo["lambda_values"] = [rational_str(alg.evaluate(lam, k)) for k in range(alg.rank)]
    return echo


def execute(cfg, timing):
    """Run the command; returns (sections, passed)."""
    cmd = cfg["command"]
    cache = Cache(cfg["cache_dir"])
    sections = {}
    passed = True
    if cmd == "catalog":
        sections["catalog"] = cache.get_or_compute(cache_key("*", "catalog", {}), report.catalog_section)
        return sections, True
    _require(cfg, "algebra")
    name = cfg["algebra"]
    if cmd == "invariants":
        inv = cache.get_or_compute(cache_key(name, "invariants", {}), lambda: report.invariants_section(name))
        sections["invariants"] = inv
        return sections, all(z["weyl_invariant"] for z in inv["invariants"])
    _require(cfg, "lambda", "truncation")
    K = cfg["truncation"]
    t0 = time.perf_counter()
    mod = build_module(name, cfg["lambda"])
    sections["spherical"] = report.spherical_section(mod)
    timing["spherical"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    res = boundary_map(mod, K)
    timing["boundary"] = time.perf_counter() - t0
    if cmd in ("boundary-map", "verify", "all"):
        sections["boundary"] = report.boundary_section(res)
        passed = passed and res.verification["passed"]
    certs = None
    if cmd in ("certificates", "filtration", "all"):
        t0 = time.perf_counter()
        certs = all_certificates(res)
        sections["theorem4"] = report.theorem4_section(res, certs)
        passed = passed and sections["theorem4"]["all_residuals_zero"]
        timing["certificates"] = time.perf_counter() - t0
    if cmd in ("filtration", "all"):
        sections["filtration"] = filtration_report(res, certs)
        passed = passed and sections["filtration"]["structural_checks"]
    if cmd in ("character", "all"):
        sections["character"] = formal_character(res, K)
        passed = passed and sections["character"]["agree"]
    if cmd in ("split-test", "all"):
        i = cfg["generator"] - 1
        if not 0 <= i < res.r:
            raise UsageError(f"generator must lie in 1..{res.r}")
        t0 = time.perf_counter()
        sections["splitting"] = report.splitting_section(res, i, K)
        timing["splitting"] = time.perf_counter() - t0
    return sections, passed


def run(argv=None):
    """Parse, execute and write the report; returns (exit code, document)."""
    cfg = {"command": None}
    timing = {}
    sections = {}
    echo = {}
    error = None
    code = EXIT_OK
    start = time.perf_counter()
    try:
        args = build_parser().parse_args(argv)
        cfg = load_config(args)
        logging.basicConfig(level=logging.WARNING - 10 * min(cfg["verbosity"], 2), format="%(levelname)s %(message)s")
        echo = _echo(cfg)
        sections, passed = execute(cfg, timing)
        code = EXIT_OK if passed else EXIT_VERIFY
    except VerificationError as exc:
        error, code = exc, EXIT_VERIFY
    except (TruncationError, ResourceError) as exc:
        error, code = exc, EXIT_TRUNCATION
    except (UsageError, ConfigurationError, CatalogError, UnsupportedParameterError) as exc:
        error, code = exc, EXIT_USAGE
    except JacquetError as exc:
        error, code = exc, EXIT_VERIFY
    timing["total"] = time.perf_counter() - start
    timing = {k: round(v, 3) for k, v in timing.items()}
    err = None
    if error is not None:
        err = {"code": error.code, "message": str(error)}
        if getattr(error, "required", None) is not None:
            err["required"] = error.required
        print(f"jacquet: {error.code}: {error}", file=sys.stderr)
    doc = report.make_document(cfg.get("command"), echo, sections, timing, err)
    text = report.serialize(doc)
    out = cfg.get("out")
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    elif cfg.get("command") is not None or error is None:
        print(text)
    return code, doc


def main(argv=None):
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
