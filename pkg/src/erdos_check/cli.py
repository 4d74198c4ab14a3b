"""Command-line entry point: ``python -m erdos_check <command> ...``.

Exit status: 0 on success (and, for verify, a certified inequality), 1 when
the computation ran but the result is negative (not certified, no crossover,
not primitive), 2 for usage or domain errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from typing import Optional

from . import __version__
from .counterexample import DEFAULT_THRESHOLD, TAIL_LABEL, crossover, verify
from .erdos_sum import DEFAULT_CHUNK, resolve_threads, sum_primes, sum_semiprimes, sum_values
from .errors import PrimitivityViolation
from .primitive import check_primitive, read_integers
from .sieve import load_table, save_table, sieve_primes

COMMANDS = ("sieve", "sum-primes", "sum-semiprimes", "verify", "crossover", "check-primitive", "sum-file")
_NEEDS_LIMIT = ("sieve", "sum-primes", "sum-semiprimes", "crossover")
_NEEDS_INPUT = ("check-primitive", "sum-file")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    limit: Optional[int] = None
    input_path: Optional[str] = None
    output_format: str = "text"
    threads: int = 0
    chunk_size: int = DEFAULT_CHUNK
    include_prime_squares: bool = True
    ordered_pairs: bool = False
    stride: int = 1000
    table_path: Optional[str] = None
    cache_path: Optional[str] = None

    def validate(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.command in _NEEDS_LIMIT and self.limit is None:
            raise UsageError(f"{self.command} requires --limit")
        if self.limit is not None and self.limit < 0:
            raise UsageError("--limit/--threshold must be non-negative")
        if self.command in _NEEDS_INPUT and not self.input_path:
            raise UsageError(f"{self.command} requires --input")
        if self.output_format not in ("text", "json", "csv"):
            raise UsageError(f"unknown format {self.output_format!r}")
        if self.output_format == "csv" and self.command != "crossover":
            raise UsageError("csv output is only available for crossover")
        if self.threads < 0 or self.chunk_size < 1 or self.stride < 1:
            raise UsageError("--threads must be >= 0; --chunk-size and --stride must be >= 1")


def _render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2)
    lines = []
    for key, val in doc.items():
        if key.startswith("elapsed_seconds."):
            continue
        lines.append(f"{key}: {val!r}" if isinstance(val, float) else f"{key}: {val}")
    return "\n".join(lines)


def _table(cfg: RunConfig, limit: int):
    if cfg.table_path:
        table = load_table(cfg.table_path)
        if table.limit >= limit:
            return table
    return sieve_primes(limit)


def execute(cfg: RunConfig) -> tuple:
    """Run one command; returns (exit status, rendered output)."""
    cfg.validate()
    opts = dict(threads=cfg.threads, chunk_size=cfg.chunk_size)
    start = time.perf_counter()
    status = 0
    doc = {"tool": "erdos_check", "version": __version__, "command": cfg.command}

    if cfg.command == "verify":
        threshold = DEFAULT_THRESHOLD if cfg.limit is None else cfg.limit
        timings = {}
        report = verify(
            threshold,
            include_prime_squares=cfg.include_prime_squares,
            table=_table(cfg, threshold) if threshold >= 2 else None,
            timings=timings,
            **opts,
        )
        timings["total"] = time.perf_counter() - start
        status = 0 if report.certified else 1
        if cfg.output_format == "json":
            return status, report.to_json(timings)
        return status, _render(report.as_dict(), "text")

    if cfg.command == "crossover":
        result = crossover(
            cfg.limit,
            cfg.stride,
            include_prime_squares=cfg.include_prime_squares,
            threads=cfg.threads,
            table=_table(cfg, cfg.limit),
        )
        status = 0 if result.found else 1
        if cfg.output_format == "csv":
            return status, result.history_csv().rstrip("\n")
        doc.update(result.as_dict())
    elif cfg.command == "sieve":
        table = sieve_primes(cfg.limit)
        doc.update(limit=table.limit, prime_count=len(table))
        doc["largest_prime"] = int(table.primes[-1]) if len(table) else None
        if cfg.cache_path:
            save_table(table, cfg.cache_path)
            doc["cache"] = cfg.cache_path
    elif cfg.command in ("sum-primes", "sum-semiprimes"):
        table = _table(cfg, cfg.limit)
        if cfg.command == "sum-primes":
            result = sum_primes(table, cfg.limit, **opts)
        else:
            result = sum_semiprimes(
                table,
                cfg.limit,
                include_prime_squares=cfg.include_prime_squares,
                ordered=cfg.ordered_pairs,
                **opts,
            )
            doc["includes_prime_squares"] = cfg.include_prime_squares
            doc["ordered_pairs"] = cfg.ordered_pairs
        doc["limit"] = cfg.limit
        doc.update(result.as_dict())
    elif cfg.command == "check-primitive":
        values = read_integers(cfg.input_path)
        try:
            seq = check_primitive(values)
            doc.update(primitive=True, elements=len(seq))
        except PrimitivityViolation as exc:
            doc.update(primitive=False, witness=list(exc.witness))
            status = 1
    elif cfg.command == "sum-file":
        values = read_integers(cfg.input_path)
        try:
            check_primitive(values)
            doc["primitive"] = True
        except PrimitivityViolation as exc:
            doc.update(primitive=False, witness=list(exc.witness))
        doc.update(sum_values(values, **opts).as_dict())

    doc["elapsed_seconds.total"] = time.perf_counter() - start
    return status, _render(doc, cfg.output_format)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="erdos_check",
        description="Certified Erdos sums over primes and prime pairs.",
        epilog=f"prime tail values, where printed, are {TAIL_LABEL}",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", dest="output_format", choices=("text", "json", "csv"), default="text")
        p.add_argument("--threads", type=int, default=0, help="worker threads (0 = $ERDOS_THREADS or CPU count)")
        p.add_argument("--chunk-size", type=int, default=DEFAULT_CHUNK)
        p.add_argument("--table", dest="table_path", help="PTAB1 cache file to load primes from")

    def squares(p):
        p.add_argument("--no-prime-squares", dest="include_prime_squares", action="store_false",
                       help="leave out the products p*p")

    p = sub.add_parser("sieve", help="sieve primes, optionally writing a PTAB1 cache")
    p.add_argument("--limit", type=int)
    p.add_argument("--cache", dest="cache_path")
    common(p)
    p = sub.add_parser("sum-primes", help="sum 1/(p ln p) over primes p <= limit")
    p.add_argument("--limit", type=int)
    common(p)
    p = sub.add_parser("sum-semiprimes", help="sum 1/(pq ln pq) over primes p <= q <= limit")
    p.add_argument("--limit", type=int)
    p.add_argument("--ordered-pairs", action="store_true",
                   help="diagnostic: count pq and qp separately (a multiset sum)")
    squares(p)
    common(p)
    p = sub.add_parser("verify", help="certify the comparison at a threshold")
    p.add_argument("--threshold", "--limit", dest="limit", type=int, default=None)
    squares(p)
    common(p)
    p = sub.add_parser("crossover", help="find the first certified crossing prime")
    p.add_argument("--limit", type=int)
    p.add_argument("--stride", type=int, default=1000)
    squares(p)
    common(p)
    for name in _NEEDS_INPUT:
        p = sub.add_parser(name, help="read newline-delimited integers")
        p.add_argument("--input", dest="input_path")
        common(p)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(**{k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__})
    try:
        resolve_threads(cfg.threads)
        status, text = execute(cfg)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"erdos_check: error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"erdos_check: error: {exc}", file=sys.stderr)
        return 2
    print(text)
    return status
