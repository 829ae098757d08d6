"""Command-line front end.

Exit codes: 0 strict (or success), 3 positive-only (or an inconsistent
space-time census), 1 input error, 2 no numeric point model.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, fields
from typing import Optional

from . import numverify as nv
from .errors import IsokernelError, UnsupportedSpaceError, UsageError, ValidationError
from .kernelmodel import SpaceDescriptor, parse_kernel, product_expand
from .spdlaw import decide_product, decide_single, explain

EXIT_STRICT = 0
EXIT_INPUT = 1
EXIT_NO_MODEL = 2
EXIT_POSITIVE_ONLY = 3

COMMANDS = ("decide", "expand", "verify", "spacetime", "report")


@dataclass
class RunConfig:
    command: str
    f: Optional[str] = None
    g: Optional[str] = None
    space_file: Optional[str] = None
    N: int = 24
    eps: float = 1e-12
    seed: int = 0
    points: int = 40
    trials: int = 32
    p: int = 3
    out: Optional[str] = None
    format: str = "json"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValidationError("command", f"unknown command {self.command!r}")
        if self.N < 0:
            raise ValidationError("N", "must be >= 0")
        if not self.eps > 0:
            raise ValidationError("eps", "must be > 0")
        if self.points < 1:
            raise ValidationError("points", "must be >= 1")
        if self.format not in ("json", "csv"):
            raise ValidationError("format", "must be json or csv")

    @classmethod
    def from_mapping(cls, doc) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise ValidationError("config", f"unknown keys {sorted(unknown)}")
        return cls(**doc)


def worker_count() -> int:
    """Thread cap from ``ISOKERNEL_THREADS`` (default 1)."""
    raw = os.environ.get("ISOKERNEL_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValidationError("ISOKERNEL_THREADS", f"expected an integer, got {raw!r}") from None


def _load_json(path, what):
    if path is None:
        raise ValidationError(what, "missing input file")
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValidationError(what, f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(what, f"{path} is not valid JSON: {exc.msg} at line {exc.lineno}") from None


def _space(cfg: RunConfig) -> Optional[SpaceDescriptor]:
    if cfg.space_file is None:
        return None
    return SpaceDescriptor.from_json(_load_json(cfg.space_file, "space-file"))


def _kernel(path, what, fallback):
    doc = _load_json(path, what)
    override = fallback if isinstance(doc, dict) and "space" not in doc else None
    try:
        return parse_kernel(doc, override)
    except ValidationError as exc:
        raise ValidationError(f"{what}.{exc.path}" if exc.path else what, exc.message) from None


def _kernels(cfg: RunConfig, need_g: bool = False):
    where = _space(cfg)
    f = _kernel(cfg.f, "f", where)
    g = _kernel(cfg.g, "g", where) if cfg.g is not None else None
    if need_g and g is None:
        raise UsageError("this command needs both --f and --g")
    return where, f, g


def _verdict(f, g):
    return decide_single(f) if g is None else decide_product(f, g)


def run_decide(cfg: RunConfig):
    _, f, g = _kernels(cfg)
    verdict = _verdict(f, g)
    doc = verdict.to_json()
    doc["explanation"] = explain(verdict)
    return (EXIT_STRICT if verdict.strict else EXIT_POSITIVE_ONLY), doc


def _expansion_rows(f, g, N, eps):
    table = product_expand(f, g, N, eps)
    rows = []
    for key, value in table.items():
        if isinstance(key, tuple):
            rows.append({"m": key[0], "n": key[1], "coefficient": value})
        else:
            rows.append({"m": key, "coefficient": value})
    return rows


def run_expand(cfg: RunConfig):
    _, f, g = _kernels(cfg, need_g=True)
    return EXIT_STRICT, {"space": str(f.space), "N": cfg.N, "eps": cfg.eps,
                         "rows": _expansion_rows(f, g, cfg.N, cfg.eps)}


def _sampling_space(where, f):
    if where is not None and where != f.space:
        return where
    return f.space


def run_verify(cfg: RunConfig):
    where, f, g = _kernels(cfg)
    sample_space = _sampling_space(where, f)
    if sample_space.kind in ("cayley16", "spacetime"):
        raise UnsupportedSpaceError(f"{sample_space} has no point model")
    factors = [f] if g is None else [f, g]
    pts = nv.sample_points(sample_space, cfg.points, cfg.seed)
    report = nv.gram(sample_space, factors, pts, cfg.eps)
    verdict = _verdict(f, g)
    doc = report.to_json(space=sample_space, seed=cfg.seed)
    doc["decision"] = verdict.decision
    if not verdict.strict:
        found = nv.falsify_spd(sample_space, factors, cfg.points, trials=5, seed=cfg.seed,
                               witness=verdict.witness, eps=cfg.eps)
        doc["falsifier"] = None if found is None else {"n": len(found[0]), "found": True}
    return EXIT_STRICT, doc


def run_spacetime(cfg: RunConfig):
    doc = _load_json(cfg.f, "f")
    F, G = nv.spacetime.parse_spacetime(doc)
    report = nv.spacetime_check(F, G, p=cfg.p, trials=cfg.trials, N=max(cfg.N, 4),
                                seed=cfg.seed, workers=worker_count())
    code = EXIT_STRICT if report.consistent else EXIT_POSITIVE_ONLY
    return code, report


def run_report(cfg: RunConfig):
    code, decision = run_decide(cfg)
    doc = {"decision": decision}
    if cfg.g is not None:
        doc["expansion"] = run_expand(cfg)[1]
    try:
        doc["verify"] = run_verify(cfg)[1]
    except UnsupportedSpaceError as exc:
        doc["verify"] = {"error": str(exc)}
    return code, doc


RUNNERS = {"decide": run_decide, "expand": run_expand, "verify": run_verify,
           "spacetime": run_spacetime, "report": run_report}


def _render(result, fmt):
    if hasattr(result, "to_csv") and fmt == "csv":
        return result.to_csv()
    if hasattr(result, "to_json"):
        result = result.to_json()
    if fmt == "csv":
        rows = result.get("rows")
        if rows is None:
            raise UsageError("csv output is available for expand and spacetime")
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]) if rows else ["m", "coefficient"],
                                lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return buf.getvalue()
    return json.dumps(result, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="isokernel", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--f", help="kernel spec (or space-time document for spacetime)")
    parser.add_argument("--g", help="second kernel spec for products")
    parser.add_argument("--space-file", dest="space_file",
                        help="space descriptor for specs without one; sampling space for verify")
    parser.add_argument("-N", type=int, dest="N", help="truncation index")
    parser.add_argument("--eps", type=float)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--points", type=int, help="number of sampled points")
    parser.add_argument("--trials", type=int)
    parser.add_argument("-p", type=int, dest="p", help="group elements per space-time trial")
    parser.add_argument("--out", help="write the report here instead of stdout")
    parser.add_argument("--format", choices=("json", "csv"))
    parser.add_argument("--config", help="JSON file with any of the options above")
    return parser


def config_from_args(argv=None) -> RunConfig:
    args = vars(build_parser().parse_args(argv))
    settings = {}
    config_path = args.pop("config")
    if config_path:
        settings.update(_load_json(config_path, "config"))
    settings.update({k: v for k, v in args.items() if v is not None})
    return RunConfig.from_mapping(settings)


def main(argv=None) -> int:
    try:
        cfg = config_from_args(argv)
        code, result = RUNNERS[cfg.command](cfg)
        text = _render(result, cfg.format)
    except UnsupportedSpaceError as exc:
        print(f"error: no point model: {exc}", file=sys.stderr)
        return EXIT_NO_MODEL
    except (IsokernelError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
