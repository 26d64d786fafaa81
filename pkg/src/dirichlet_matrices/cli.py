"""Command-line front end.

Subcommands: ``vnk``, ``spectra``, ``det`` and ``reproduce``.  Exit codes:
0 success, 1 verification mismatch, 2 invalid input, 3 numerical
non-convergence.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import TextIO

import mpmath

from . import reference
from .dirichlet import CoefficientSequence
from .errors import CapExceededError, ConvergenceError, InputError, SpectrumStructureError
from .matrices import WeightVector, build_A
from .oracle import CHARPOLY_CAP, det_exact
from .spectra import DEFAULT_PRECISION, det_weighted, spectrum
from .vnk import NAIVE_CAP, cached_vnk_fast, v_table_naive

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INPUT = 2
EXIT_NONCONVERGENCE = 3

CACHE_ENV = "DIRICHLET_MATRICES_CACHE_DIR"
EIGEN_TOL = 1e-4

STANDARD = [10**6]
EXTENDED = [2**28]
HEROIC_TABLE1 = [2**36]
HEROIC_EIGEN = [2**r for r in range(29, 37)]


@dataclass
class RunConfig:
    command: str
    n: int | None = None
    k: int | None = None
    precision: int = DEFAULT_PRECISION
    weights: str = "unit"
    coeffs: str = "unit"
    fmt: str = "csv"
    cache_dir: Path | None = None
    matrix: str = "C"
    verify_dense: bool = False
    target: str | None = None
    extended: bool = False
    heroic: bool = False

    def __post_init__(self):
        if self.n is not None and self.n < 1:
            raise InputError("--n must be >= 1")
        if self.k is not None and self.k < 0:
            raise InputError("--k must be >= 0")
        if self.precision < 64:
            raise InputError("--precision must be >= 64")


def resolve_cache_dir(flag: str | None) -> Path:
    if flag:
        return Path(flag)
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "dirichlet-matrices"


def _read_int_file(path: str) -> list[int]:
    p = Path(path)
    if not p.is_file():
        raise InputError(f"no such file: {path}")
    vals = []
    for lineno, line in enumerate(p.read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            vals.append(int(line))
        except ValueError:
            raise InputError(f"{path}:{lineno}: not an integer: {line!r}") from None
    return vals


def parse_weights(spec: str, n: int) -> WeightVector:
    if spec == "unit":
        return WeightVector.unit(n)
    if spec.startswith("dirichlet:"):
        try:
            s = complex(spec.split(":", 1)[1])
        except ValueError:
            raise InputError(f"bad exponent in weight spec {spec!r}") from None
        return WeightVector.dirichlet(n, s)
    vals = _read_int_file(spec)
    if len(vals) < n:
        raise InputError(f"weight file {spec} has {len(vals)} values; need >= {n}")
    return WeightVector(vals[:n])


def parse_coeffs(spec: str, n: int) -> CoefficientSequence:
    if spec == "unit":
        return CoefficientSequence.unit(n)
    vals = _read_int_file(spec)
    if len(vals) < n:
        raise InputError(f"coefficient file {spec} has {len(vals)} values; need >= {n}")
    seq = CoefficientSequence(vals[:n])
    if not seq.normalized:
        raise InputError("a_1 must equal 1")
    return seq


def _fmt_scalar(x) -> str:
    if isinstance(x, complex):
        return repr(x.real) if x.imag == 0 else repr(x)
    return str(x)


def _emit(out: TextIO, fmt: str, header: list[str], rows: list[list], records: list[dict] | None = None) -> None:
    if fmt == "csv":
        out.write(",".join(header) + "\n")
        for row in rows:
            out.write(",".join(str(c) for c in row) + "\n")
    else:
        for rec in records if records is not None else [dict(zip(header, row)) for row in rows]:
            out.write(json.dumps(rec, sort_keys=True, separators=(",", ":")) + "\n")


def _is_unit_spec(cfg: RunConfig) -> bool:
    return cfg.weights == "unit" and cfg.coeffs == "unit"


# ---------------------------------------------------------------------------
# commands


def cmd_vnk(cfg: RunConfig, out: TextIO) -> int:
    n = cfg.n
    r = n.bit_length() - 1
    ks = [cfg.k] if cfg.k is not None else list(range(1, r + 1))
    if _is_unit_spec(cfg):
        table, _ = cached_vnk_fast(n, cfg.cache_dir)
        col = table.column()
        values = [col[k] if k <= r else 0 for k in ks]
    else:
        if n > NAIVE_CAP:
            raise CapExceededError(
                f"non-unit weights or coefficients need the definitional route, capped at n={NAIVE_CAP}; got n={n}"
            )
        a = parse_coeffs(cfg.coeffs, n)
        w = parse_weights(cfg.weights, n)
        kmax = max(ks, default=0)
        vt = v_table_naive(a, w, n, min(kmax, r))
        values = [vt[k][n] if k <= r else 0 for k in ks]
    rows = [[k, _fmt_scalar(v)] for k, v in zip(ks, values)]
    records = [{"n": str(n), "k": k, "v": _fmt_scalar(v)} for k, v in zip(ks, values)]
    _emit(out, cfg.fmt, ["k", "v"], rows, records)
    return EXIT_OK


def _summary_line(report) -> str:
    def f(x):
        return "none" if x is None else f"{float(x):.6f}"

    return (
        f"max_abs={f(report.max_abs)} max_re={f(report.max_re)} "
        f"lambda_plus={f(report.lambda_plus)} lambda_minus={f(report.lambda_minus)}"
    )


def cmd_spectra(cfg: RunConfig, out: TextIO, err: TextIO) -> int:
    if not _is_unit_spec(cfg):
        raise InputError("spectra supports the unit case (C_n) only")
    if cfg.n < 2:
        raise InputError("spectra needs n >= 2")
    table, _ = cached_vnk_fast(cfg.n, cfg.cache_dir)
    report = spectrum(cfg.n, table, cfg.precision)
    records = report.to_records()
    if cfg.fmt == "csv":
        rows = [
            [rec["index"], rec["kind"], rec["re"], rec["im"], rec["backward_error"], str(rec["converged"]).lower()]
            for rec in records
            if rec["record"] == "root"
        ]
        _emit(out, "csv", ["index", "kind", "re", "im", "backward_error", "converged"], rows)
        err.write(_summary_line(report) + "\n")
    else:
        _emit(out, cfg.fmt, [], [], records)
    if not report.converged:
        err.write("error: at least one root failed to converge\n")
        return EXIT_NONCONVERGENCE
    if not report.separated:
        err.write("warning: nontrivial roots closer than the certified error allows\n")
    return EXIT_OK


def cmd_det(cfg: RunConfig, out: TextIO) -> int:
    n = cfg.n
    matrix = cfg.matrix
    if matrix == "C":
        if not _is_unit_spec(cfg):
            raise InputError("matrix C fixes unit coefficients and weights; use A or B")
        a, w, variant = CoefficientSequence.unit(n), WeightVector.unit(n), "A"
    elif matrix == "B":
        if cfg.coeffs != "unit":
            raise InputError("matrix B fixes unit coefficients; use A")
        a, w, variant = CoefficientSequence.unit(n), parse_weights(cfg.weights, n), "A"
    elif matrix in ("A", "Atilde"):
        a, w, variant = parse_coeffs(cfg.coeffs, n), parse_weights(cfg.weights, n), matrix
    else:
        raise InputError(f"unknown matrix {matrix!r}")

    if cfg.verify_dense:
        if n > CHARPOLY_CAP:
            raise CapExceededError(f"dense verification is capped at n={CHARPOLY_CAP}; got n={n}")
        if w.mode != "exact":
            raise InputError("dense verification needs exact integer weights")

    value = det_weighted(a, w, n, variant)
    header = ["n", "matrix", "det"]
    row = [n, matrix, _fmt_scalar(value)]
    status = EXIT_OK
    if cfg.verify_dense:
        dense = det_exact(build_A(a, w, n, variant))
        match = dense == value
        header += ["dense", "match"]
        row += [str(dense), str(match).lower()]
        if not match:
            status = EXIT_MISMATCH
    record = {"n": str(n), "matrix": matrix, "det": row[2]}
    if cfg.verify_dense:
        record.update(dense=row[3], match=row[4] == "true")
    _emit(out, cfg.fmt, header, [row], [record])
    return status


def _reproduce_table1(cfg: RunConfig, out: TextIO) -> tuple[int, int, list[str]]:
    ref = reference.table1()
    targets = list(STANDARD)
    if cfg.extended or cfg.heroic:
        targets += EXTENDED
    if cfg.heroic:
        targets += HEROIC_TABLE1
    passed = total = 0
    failed: list[str] = []
    for n in targets:
        table, _ = cached_vnk_fast(n, cfg.cache_dir)
        for k, expected in sorted(ref[n].items()):
            got = table[n, k]
            ok = got == expected
            total += 1
            passed += ok
            cell = f"n={n} k={k}"
            if not ok:
                failed.append(cell)
            _cell(out, cfg.fmt, ok, "table1", cell, str(expected), str(got))
    return passed, total, failed


def _reproduce_eigentable(cfg: RunConfig, out: TextIO) -> tuple[int, int, list[str]]:
    ref = reference.eigentable()
    targets = list(STANDARD)
    if cfg.extended or cfg.heroic:
        targets += EXTENDED
    if cfg.heroic:
        targets += HEROIC_EIGEN
    passed = total = 0
    failed: list[str] = []
    for n in targets:
        table, _ = cached_vnk_fast(n, cfg.cache_dir)
        report = spectrum(n, table, cfg.precision)
        if not report.converged:
            raise ConvergenceError(f"unconverged roots for n={n}")
        for name, expected, got in (
            ("max_abs", ref[n][0], report.max_abs),
            ("max_re", ref[n][1], report.max_re),
        ):
            ok = got is not None and abs(float(got) - float(expected)) <= EIGEN_TOL
            total += 1
            passed += ok
            cell = f"n={n} {name}"
            if not ok:
                failed.append(cell)
            _cell(out, cfg.fmt, ok, "eigentable", cell, expected, "none" if got is None else f"{float(got):.6f}")
    return passed, total, failed


def _cell(out: TextIO, fmt: str, ok: bool, table: str, cell: str, expected: str, got: str) -> None:
    if fmt == "csv":
        out.write(f"{'PASS' if ok else 'FAIL'} {table} {cell} expected={expected} got={got}\n")
    else:
        rec = {"table": table, "cell": cell, "expected": expected, "got": got, "pass": ok}
        out.write(json.dumps(rec, sort_keys=True, separators=(",", ":")) + "\n")


def cmd_reproduce(cfg: RunConfig, out: TextIO, err: TextIO) -> int:
    if cfg.target == "table1":
        passed, total, failed = _reproduce_table1(cfg, out)
    elif cfg.target == "eigentable":
        passed, total, failed = _reproduce_eigentable(cfg, out)
    else:
        raise InputError(f"unknown reproduction target {cfg.target!r}")
    summary = f"{cfg.target}: {passed}/{total} cells pass"
    if cfg.fmt == "csv":
        out.write(summary + "\n")
    else:
        err.write(summary + "\n")
    if failed:
        err.write("mismatched cells: " + ", ".join(failed) + "\n")
        return EXIT_MISMATCH
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument handling


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="fmt", choices=["csv", "json-lines"], default="csv")
    common.add_argument("--cache-dir", default=None, help=f"v(n,k) cache directory (env {CACHE_ENV})")
    common.add_argument("--precision", type=int, default=DEFAULT_PRECISION, help="working precision in bits")

    sized = argparse.ArgumentParser(add_help=False)
    sized.add_argument("--n", type=int, required=True)
    sized.add_argument("--weights", default="unit", help="unit | dirichlet:<s> | path to integer file")
    sized.add_argument("--coeffs", default="unit", help="unit | path to integer file")

    parser = argparse.ArgumentParser(prog="dirichlet-matrices", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("vnk", parents=[common, sized], help="coefficients v(n,k)")
    p.add_argument("--k", type=int, default=None)

    sub.add_parser("spectra", parents=[common, sized], help="nontrivial eigenvalues of C_n")

    p = sub.add_parser("det", parents=[common, sized], help="determinant via the weighted-sum formula")
    p.add_argument("--matrix", choices=["A", "Atilde", "B", "C"], default="C")
    p.add_argument("--verify-dense", action="store_true")

    p = sub.add_parser("reproduce", parents=[common], help="diff against bundled published tables")
    p.add_argument("target", choices=["table1", "eigentable"])
    p.add_argument("--extended", action="store_true", help="include n = 2^28")
    p.add_argument("--heroic", action="store_true", help="include n up to 2^36 (tens of minutes)")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        n=getattr(args, "n", None),
        k=getattr(args, "k", None),
        precision=args.precision,
        weights=getattr(args, "weights", "unit"),
        coeffs=getattr(args, "coeffs", "unit"),
        fmt=args.fmt,
        cache_dir=resolve_cache_dir(args.cache_dir),
        matrix=getattr(args, "matrix", "C"),
        verify_dense=getattr(args, "verify_dense", False),
        target=getattr(args, "target", None),
        extended=getattr(args, "extended", False),
        heroic=getattr(args, "heroic", False),
    )


def main(argv: list[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_INPUT
    try:
        cfg = config_from_args(args)
        if cfg.command == "vnk":
            return cmd_vnk(cfg, out)
        if cfg.command == "spectra":
            return cmd_spectra(cfg, out, err)
        if cfg.command == "det":
            return cmd_det(cfg, out)
        return cmd_reproduce(cfg, out, err)
    except InputError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT
    except (ConvergenceError, SpectrumStructureError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_NONCONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
