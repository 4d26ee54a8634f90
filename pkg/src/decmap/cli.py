"""File-driven command line: compute norms, check map properties, run suites.

Map documents are JSON files

    {"domain":   {"kind": "full_real", "n": 2},
     "codomain": {"kind": "full_real", "n": 2},
     "images":   [[[1, 0], [0, 0]], ...]}

with one image per domain basis element in the canonical basis order of each
kind: full_real(n) uses E_ij row-major, ell_inf(n) uses e_1..e_n, quaternion
uses (1, i, j, k), complex_full(n) uses the realified E_ij followed by J*E_ij,
and span uses the given basis order.  Matrix entries are numbers; a complex
entry may be written as a two-element [re, im] array, in which case the whole
matrix is treated as complex and realified on ingestion.

Exit codes: 0 success/pass, 1 suite failure or not_decomposable or a failed
property check, 2 input error, 3 solver indeterminate.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import mat
from .cpmap import is_cp, is_selfadjoint, is_skew
from .decnorm import cb_norm, dec_norm
from .errors import DecmapError, SolverIndeterminate
from .opsys import LinearMap, MatrixSystem, build_system
from .suite import SUITE_CATALOGUE, report_csv, report_markdown, run_suite

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_INDETERMINATE = 3

DEFAULT_TOL_ENV = "DECMAP_TOL"


class DocumentError(DecmapError, ValueError):
    """Malformed map document, with the offending field path."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")


# --------------------------------------------------------------------------
# document parsing
# --------------------------------------------------------------------------

def _parse_entry(node, path: str) -> complex:
    if isinstance(node, (int, float)):
        return complex(float(node), 0.0)
    if isinstance(node, list) and len(node) == 2 and all(isinstance(v, (int, float)) for v in node):
        return complex(float(node[0]), float(node[1]))
    raise DocumentError(path, "matrix entry must be a number or a two-element [re, im] array")


def _parse_matrix(node, path: str) -> np.ndarray:
    if not isinstance(node, list) or not node:
        raise DocumentError(path, "matrix must be a non-empty array of rows")
    rows = []
    width = None
    for i, row in enumerate(node):
        if not isinstance(row, list) or not row:
            raise DocumentError(f"{path}[{i}]", "row must be a non-empty array")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise DocumentError(f"{path}[{i}]", f"row has {len(row)} entries, expected {width}")
        rows.append([_parse_entry(v, f"{path}[{i}][{j}]") for j, v in enumerate(row)])
    a = np.array(rows, dtype=complex)
    if np.any(a.imag != 0.0):
        if a.shape[0] != a.shape[1]:
            raise DocumentError(path, "complex matrices must be square (they are realified)")
        return mat.realify(a)
    return np.ascontiguousarray(a.real)


def _parse_system(node, path: str) -> MatrixSystem:
    if not isinstance(node, dict):
        raise DocumentError(path, "system record must be an object")
    kind = node.get("kind")
    if kind not in ("full_real", "ell_inf", "quaternion", "complex_full", "span"):
        raise DocumentError(f"{path}.kind",
                            f"unknown kind {kind!r} (expected full_real, ell_inf, "
                            "quaternion, complex_full or span)")
    n = node.get("n")
    basis = None
    if kind in ("full_real", "ell_inf", "complex_full"):
        if not isinstance(n, int) or n < 1:
            raise DocumentError(f"{path}.n", f"kind {kind} needs a positive integer n")
    if kind == "span":
        raw = node.get("basis")
        if not isinstance(raw, list) or not raw:
            raise DocumentError(f"{path}.basis", "kind span needs a non-empty basis array")
        basis = [_parse_matrix(b, f"{path}.basis[{k}]") for k, b in enumerate(raw)]
    try:
        return build_system(kind, n=n, basis=basis, label=node.get("label"))
    except DecmapError as exc:
        raise DocumentError(path, str(exc)) from exc


def parse_map_document(doc, path: str = "$") -> LinearMap:
    """Parse one map document (already JSON-decoded) into a LinearMap."""
    if not isinstance(doc, dict):
        raise DocumentError(path, "document must be a JSON object")
    for key in ("domain", "codomain", "images"):
        if key not in doc:
            raise DocumentError(f"{path}.{key}", "missing required field")
    domain = _parse_system(doc["domain"], f"{path}.domain")
    codomain = _parse_system(doc["codomain"], f"{path}.codomain")
    raw_images = doc["images"]
    if not isinstance(raw_images, list):
        raise DocumentError(f"{path}.images", "images must be an array of matrices")
    if len(raw_images) != domain.dim:
        raise DocumentError(f"{path}.images",
                            f"expected {domain.dim} images for {domain.label}, got {len(raw_images)}")
    images = []
    for k, node in enumerate(raw_images):
        img = _parse_matrix(node, f"{path}.images[{k}]")
        if img.shape != (codomain.n, codomain.n):
            raise DocumentError(f"{path}.images[{k}]",
                                f"image is {img.shape}, codomain ambient needs "
                                f"({codomain.n}, {codomain.n})")
        images.append(img)
    try:
        return LinearMap(domain, codomain, tuple(images))
    except DecmapError as exc:
        raise DocumentError(f"{path}.images", str(exc)) from exc


def load_map(filename: str) -> LinearMap:
    try:
        with open(filename, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise DocumentError(filename, f"cannot read file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DocumentError(filename, f"invalid JSON: {exc}") from exc
    return parse_map_document(doc)


def serialize_map(u: LinearMap) -> dict:
    """Document for a map; inverse of parse_map_document up to float printing."""

    def system_record(s: MatrixSystem) -> dict:
        if s.kind in ("full_real", "ell_inf"):
            return {"kind": s.kind, "n": s.n}
        if s.kind == "quaternion":
            return {"kind": "quaternion"}
        if s.kind == "complex_full":
            return {"kind": "complex_full", "n": s.real_form.n}
        return {"kind": "span", "basis": [b.tolist() for b in s.basis], "label": s.label}

    return {"domain": system_record(u.domain),
            "codomain": system_record(u.codomain),
            "images": [x.tolist() for x in u.images]}


# --------------------------------------------------------------------------
# output helpers
# --------------------------------------------------------------------------

def _round12(obj):
    """Round every float to 12 significant digits, recursively."""
    if isinstance(obj, float):
        return float(f"{obj:.12g}")
    if isinstance(obj, dict):
        return {k: _round12(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round12(v) for v in obj]
    return obj


def _emit(obj, out=None):
    out = out or sys.stdout
    json.dump(_round12(obj), out, indent=2)
    out.write("\n")


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------

def _cmd_norm(args) -> int:
    u = load_map(args.map)
    if args.kind == "dec":
        res = dec_norm(u, tol=args.tol)
        if res.not_decomposable:
            _emit({"kind": "dec", "value": "not_decomposable", "residuals": res.residuals})
            return EXIT_FAIL
        _emit({
            "kind": "dec",
            "value": res.value,
            "witnesses": {"s1": [x.tolist() for x in res.s1.images],
                          "s2": [x.tolist() for x in res.s2.images]},
            "residuals": res.residuals,
        })
        return EXIT_OK
    certs: dict = {}
    value = cb_norm(u, tol=args.tol, certificates=certs)
    _emit({"kind": "cb", "value": value, "residuals": certs})
    return EXIT_OK


def _cmd_check(args) -> int:
    u = load_map(args.map)
    if args.property == "cp":
        verdict = is_cp(u)
        if verdict.holds is None:
            _emit({"property": "cp", "holds": None, "residuals": verdict.residuals})
            return EXIT_INDETERMINATE
        _emit({"property": "cp", "holds": bool(verdict.holds), "residuals": verdict.residuals})
        return EXIT_OK if verdict.holds else EXIT_FAIL
    if args.property == "skew":
        holds = is_skew(u)
    else:
        holds = is_selfadjoint(u)
    _emit({"property": args.property, "holds": bool(holds)})
    return EXIT_OK if holds else EXIT_FAIL


def _render(report, fmt: str) -> str:
    return report_markdown(report) if fmt == "md" else report_csv(report)


def _cmd_verify(args) -> int:
    report = run_suite(args.suite, seed=args.seed, trials=args.trials, tol=args.tol)
    sys.stdout.write(_render(report, args.format))
    if report.indeterminate:
        return EXIT_INDETERMINATE
    return EXIT_OK if report.passed else EXIT_FAIL


def _cmd_report(args) -> int:
    chunks = []
    worst = EXIT_OK
    summary = ["| suite | trials | result | wall time (s) |", "|---|---|---|---|"]
    for name in sorted(SUITE_CATALOGUE):
        rep = run_suite(name, seed=args.seed, trials=args.trials, tol=args.tol)
        chunks.append(_render(rep, args.format))
        summary.append(f"| {name} | {rep.trials} | {'PASS' if rep.passed else 'FAIL'} "
                       f"| {rep.wall_time:.2f} |")
        if rep.indeterminate:
            worst = EXIT_INDETERMINATE if worst != EXIT_FAIL else worst
        elif not rep.passed:
            worst = EXIT_FAIL
    text = "\n".join(chunks)
    if args.format == "md":
        text = "\n".join(summary) + "\n\n" + text
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return worst


def _default_tol() -> float:
    raw = os.environ.get(DEFAULT_TOL_ENV)
    if raw is None:
        return 1e-9
    try:
        tol = float(raw)
    except ValueError:
        raise DocumentError(DEFAULT_TOL_ENV, f"not a number: {raw!r}")
    return tol


def build_parser(default_tol: float) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="decmap",
        description="decomposable/cb norms of maps between real matrix operator systems",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_norm = sub.add_parser("norm", help="compute a norm of a map document")
    p_norm.add_argument("--kind", choices=["dec", "cb"], required=True)
    p_norm.add_argument("--map", required=True, metavar="FILE")
    p_norm.add_argument("--tol", type=float, default=default_tol)
    p_norm.set_defaults(fn=_cmd_norm)

    p_check = sub.add_parser("check", help="check a property of a map document")
    p_check.add_argument("--property", choices=["cp", "skew", "selfadjoint"], required=True)
    p_check.add_argument("--map", required=True, metavar="FILE")
    p_check.set_defaults(fn=_cmd_check)

    p_verify = sub.add_parser("verify", help="run a named verification suite")
    p_verify.add_argument("--suite", required=True)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--trials", type=int, default=10)
    p_verify.add_argument("--tol", type=float, default=1e-5)
    p_verify.add_argument("--format", choices=["md", "csv"], default="md")
    p_verify.set_defaults(fn=_cmd_verify)

    p_report = sub.add_parser("report", help="run every suite and emit a combined report")
    p_report.add_argument("--seed", type=int, default=0)
    p_report.add_argument("--trials", type=int, default=5)
    p_report.add_argument("--tol", type=float, default=1e-5)
    p_report.add_argument("--format", choices=["md", "csv"], default="md")
    p_report.add_argument("--out", metavar="FILE", default=None)
    p_report.set_defaults(fn=_cmd_report)
    return parser


def main(argv=None) -> int:
    try:
        parser = build_parser(_default_tol())
    except DocumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except SolverIndeterminate as exc:
        print(f"solver indeterminate: {exc} {exc.residuals}", file=sys.stderr)
        return EXIT_INDETERMINATE
    except DecmapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
