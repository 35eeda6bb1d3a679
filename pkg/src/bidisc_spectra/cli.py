"""Command-line front end.

    bidisc-spectra classify <config.json>
    bidisc-spectra spectrum <config.json> [--svg out.svg]
    bidisc-spectra verify <config.json>
    bidisc-spectra selftest [--tolerance T]

Exit codes: 0 ok, 1 self-test failure, 2 configuration error,
3 unsupported case, 4 inconclusive invertibility, 5 oracle disagreement.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import dataclass
from typing import Optional

from . import oracle
from .errors import BudgetExhausted, Inconclusive, SpectraError, UnsupportedCase
from .mobius import MobiusMap, parse_mobius, parse_relation
from .regions import to_json, to_svg
from .spectra import Options, classify_case, compute_report
from .weight import WeightPoly, parse_weight

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2
EXIT_UNSUPPORTED = 3
EXIT_INCONCLUSIVE = 4
EXIT_DISAGREE = 5

DEFAULT_SEED = 0

_TOP_KEYS = {"phi", "psi", "swap", "weight", "relation", "oracle", "output"}
_ORACLE_KEYS = {"grid", "n_max", "horizon", "tolerance"}
_OUTPUT_KEYS = {"json", "svg"}
_MAP_KEYS = {"kind", "angle", "a", "axis", "fixed_point", "shift", "matrix"}
_ANGLE_KEYS = {"rational", "irrational", "relation"}


class ConfigError(Exception):
    pass


@dataclass(frozen=True, eq=False)
class RunConfig:
    phi: MobiusMap
    psi: MobiusMap
    weight: WeightPoly
    swap: bool = False
    relation: Optional[object] = None
    options: Options = Options()
    json_path: Optional[str] = None
    svg_path: Optional[str] = None


def _check_keys(d, allowed, where):
    if not isinstance(d, dict):
        raise ConfigError(f"{where}: expected an object")
    extra = sorted(set(d) - allowed)
    if extra:
        raise ConfigError(f"{where}: unknown key(s) {', '.join(extra)}")


def _parse_map(d, where) -> MobiusMap:
    _check_keys(d, _MAP_KEYS, where)
    if "angle" in d:
        _check_keys(d["angle"], _ANGLE_KEYS, f"{where}.angle")
    try:
        return parse_mobius(d)
    except SpectraError as e:
        raise ConfigError(f"{where}: {e}") from e
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"{where}: {e}") from e


def parse_config(doc: dict) -> RunConfig:
    _check_keys(doc, _TOP_KEYS, "config")
    for k in ("phi", "psi", "weight"):
        if k not in doc:
            raise ConfigError(f"config: missing key {k}")
    phi = _parse_map(doc["phi"], "phi")
    psi = _parse_map(doc["psi"], "psi")
    if not isinstance(doc["weight"], str):
        raise ConfigError("weight: expected a string")
    try:
        w = parse_weight(doc["weight"])
    except SpectraError as e:
        raise ConfigError(f"weight: {e}") from e
    if w.is_zero():
        raise ConfigError("weight: identically zero")
    swap = doc.get("swap", False)
    if not isinstance(swap, bool):
        raise ConfigError("swap: expected a boolean")
    try:
        relation = parse_relation(doc.get("relation"))
    except ValueError as e:
        raise ConfigError(f"relation: {e}") from e
    o = doc.get("oracle", {})
    _check_keys(o, _ORACLE_KEYS, "oracle")
    try:
        opts = Options(
            grid=int(o.get("grid", oracle.DEFAULT_GRID)),
            n_max=int(o.get("n_max", oracle.DEFAULT_N_MAX)),
            horizon=int(o.get("horizon", oracle.DEFAULT_HORIZON)),
            tolerance=float(o.get("tolerance", oracle.RADIUS_TOL)),
        )
    except (TypeError, ValueError) as e:
        raise ConfigError(f"oracle: {e}") from e
    if opts.grid < 1 or opts.horizon < 1 or opts.n_max < 1 or opts.n_max & (opts.n_max - 1):
        raise ConfigError("oracle: grid and horizon must be positive, n_max a power of two")
    if opts.tolerance < 0:
        raise ConfigError("oracle: tolerance must be nonnegative")
    out = doc.get("output", {})
    _check_keys(out, _OUTPUT_KEYS, "output")
    return RunConfig(phi, psi, w, swap, relation, opts, out.get("json"), out.get("svg"))


def load_config(path: str) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e.strerror}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: invalid JSON: {e}") from e
    return parse_config(doc)


def atomic_write(path: str, text: str) -> None:
    """Write via a temporary file in the same directory and rename."""
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _seed() -> int:
    raw = os.environ.get("SPECTRA_SEED")
    if raw is None or raw.strip() == "":
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError as e:
        raise ConfigError(f"SPECTRA_SEED must be an integer, got {raw!r}") from e


# ---------------------------------------------------------------------------
# commands


def cmd_classify(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    tag = classify_case(cfg.phi, cfg.psi, cfg.weight, cfg.relation, cfg.swap, cfg.options.budget)
    out.write(tag.label + "\n")
    out.write(json.dumps(tag.to_dict(), sort_keys=True, separators=(",", ":")) + "\n")
    return EXIT_OK


def _report(cfg: RunConfig, cross_check: bool):
    opts = Options(**{**cfg.options.__dict__, "cross_check": cross_check})
    return compute_report(cfg.phi, cfg.psi, cfg.weight, cfg.swap, cfg.relation, opts)


def cmd_spectrum(cfg: RunConfig, svg_path: Optional[str] = None, out=None) -> int:
    out = out or sys.stdout
    rep = _report(cfg, cross_check=False)
    text = to_json(rep) + "\n"
    svg = to_svg(rep)
    svg_path = svg_path or cfg.svg_path
    if cfg.json_path:
        atomic_write(cfg.json_path, text)
    else:
        out.write(text)
    if svg_path:
        atomic_write(svg_path, svg)
    return EXIT_OK


def _fmt(x) -> str:
    return "-" if x is None else f"{x:.6g}"


def cmd_verify(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    rep = _report(cfg, cross_check=True)
    out.write(f"case {rep.case_tag}\n")
    rows = [("quantity", "closed_form", "oracle_lower", "oracle_upper", "agree")]
    for e in rep.oracle_record:
        rows.append((e.quantity, _fmt(e.closed_form), _fmt(e.lower), _fmt(e.upper), "yes" if e.agree else "NO"))
    widths = [max(len(r[i]) for r in rows) for i in range(5)]
    for r in rows:
        out.write("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() + "\n")
    bad = rep.disagreements()
    if cfg.json_path:
        atomic_write(cfg.json_path, to_json(rep) + "\n")
    if bad:
        out.write(f"{len(bad)} disagreement(s): " + ", ".join(e.quantity for e in bad) + "\n")
        return EXIT_DISAGREE
    out.write("all checks agree\n")
    return EXIT_OK


def cmd_selftest(tolerance: Optional[float] = None, out=None) -> int:
    out = out or sys.stdout
    from .acceptance import run_all

    results = run_all(seed=_seed(), tolerance=tolerance, log=out)
    failed = [r for r in results if not r.ok]
    out.write(f"{len(results) - len(failed)}/{len(results)} criteria ok\n")
    return EXIT_FAIL if failed else EXIT_OK


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bidisc-spectra", description="Spectra of weighted automorphisms of the bidisc algebra.")
    sub = p.add_subparsers(dest="command", required=True)
    c = sub.add_parser("classify", help="print the case tag")
    c.add_argument("config")
    s = sub.add_parser("spectrum", help="closed-form spectra as JSON")
    s.add_argument("config")
    s.add_argument("--svg", metavar="PATH", help="also write an SVG plot")
    v = sub.add_parser("verify", help="cross-check the closed form against the oracles")
    v.add_argument("config")
    t = sub.add_parser("selftest", help="run the acceptance suite")
    t.add_argument("--tolerance", type=float, default=None, help="override the oracle agreement tolerance")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    err = sys.stderr
    try:
        if args.command == "selftest":
            return cmd_selftest(args.tolerance)
        cfg = load_config(args.config)
        if args.command == "classify":
            return cmd_classify(cfg)
        if args.command == "spectrum":
            return cmd_spectrum(cfg, args.svg)
        return cmd_verify(cfg)
    except ConfigError as e:
        err.write(f"config error: {e}\n")
        return EXIT_CONFIG
    except UnsupportedCase as e:
        err.write(f"unsupported case: {e}\n")
        return EXIT_UNSUPPORTED
    except (Inconclusive, BudgetExhausted) as e:
        err.write(f"inconclusive: {e}\n")
        return EXIT_INCONCLUSIVE
    except SpectraError as e:
        # remaining library errors stem from the configured maps or weight
        err.write(f"config error: {e}\n")
        return EXIT_CONFIG
    except ValueError as e:
        err.write(f"config error: {e}\n")
        return EXIT_CONFIG


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
