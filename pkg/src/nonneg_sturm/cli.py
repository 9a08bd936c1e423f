"""Command-line front end.

    nonneg-sturm table1 [--weights 12:88]
    nonneg-sturm table2 [--weights 12:88]
    nonneg-sturm ak K
    nonneg-sturm basis K
    nonneg-sturm witness K [N]
    nonneg-sturm poincare K LIMIT
    nonneg-sturm bounds K

Common flags may go before or after the subcommand.  Results of ``ak`` (and of the table
commands, which reuse it) are cached under ``--cache-dir`` keyed by a hash of
the request; ``--certify`` re-verifies every certificate and witness taken
from the cache or freshly computed.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .bounds import JR_EXP_DEFAULT, c2_and_Bk, theorem1_bounds
from .errors import HypothesisViolated, NotFoundError, Undecided, WeightError, WidthNotReached
from .exactnum import fraction_to_str
from .interval import DEFAULT_PRECISION, EnclosureTooWide, working_precision
from .pipeline import basis_with_t, prepare
from .poincare import DEFAULT_CMAX_CAP, sign_report
from .polytope import compute_A, find_witness, verify_a_document
from .qseries import PrecisionError, miller_basis

TABLE1_COLUMNS = ["k", "L(k)", "A(k)", "U(k)"]
TABLE2_COLUMNS = ["k", "t", "C_2", "B(k)", "A(k)"]

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CERT_FAILED = 8


@dataclass
class RunConfig:
    weights: tuple[int, ...] = ()
    precision: int | None = None
    lp_certify: bool = False
    bessel_cmax_cap: int = DEFAULT_CMAX_CAP
    output_format: str = "text"
    working_precision_bits: int = DEFAULT_PRECISION
    cache_dir: Path | None = None
    jobs: int = 1
    jr_exponent: str = JR_EXP_DEFAULT
    extras: dict = field(default_factory=dict)

    def validate(self) -> None:
        for k in self.weights:
            if k % 4 or k < 12:
                raise WeightError(f"weight must satisfy k = 0 mod 4 and k >= 12, got {k}")
        if self.working_precision_bits < 16:
            raise ValueError("--prec-bits must be at least 16")


class CertificationFailed(RuntimeError):
    exit_code = EXIT_CERT_FAILED


# ---------------------------------------------------------------------------
# cache


def _cache_key(payload: dict) -> str:
    blob = json.dumps({**payload, "version": __version__}, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()


def _cache_path(cfg: RunConfig, payload: dict) -> Path | None:
    if cfg.cache_dir is None:
        return None
    key = _cache_key(payload)
    return cfg.cache_dir / key[:2] / f"{key}.json"


def _cache_get(path: Path | None):
    if path is None or not path.exists():
        return None
    try:
        return json.loads(path.read_text())
    except (OSError, json.JSONDecodeError):
        return None


def _cache_put(path: Path | None, doc) -> None:
    if path is None:
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(doc, sort_keys=True))
    os.replace(tmp, path)


# ---------------------------------------------------------------------------
# per-weight work


def _weight_document(k: int, precision: int | None, bits: int, jr: str, certify: bool) -> dict:
    with working_precision(bits):
        run = prepare(k, precision)
        if jr != JR_EXP_DEFAULT:
            run.report = c2_and_Bk(k, run.basis, run.report.t, jr)
        run.a = compute_A(k, run.basis, run.Bk, certify=certify)
        lo, up = theorem1_bounds(k)
        return {
            "weight": k,
            "basis_precision": run.basis.precision,
            "bounds": run.report.to_json(),
            "L": lo,
            "U": up,
            "A_result": run.a.to_json(),
        }


def weight_document(cfg: RunConfig, k: int) -> dict:
    try:
        return _weight_document_cached(cfg, k)
    except Exception as exc:
        exc.weight = k
        raise


def _weight_document_cached(cfg: RunConfig, k: int) -> dict:
    payload = {"kind": "weight", "k": k, "precision": cfg.precision, "bits": cfg.working_precision_bits, "jr": cfg.jr_exponent}
    path = _cache_path(cfg, payload)
    doc = _cache_get(path)
    fresh = doc is None
    if fresh:
        doc = _weight_document(k, cfg.precision, cfg.working_precision_bits, cfg.jr_exponent, cfg.lp_certify)
        _cache_put(path, doc)
    if cfg.lp_certify and not fresh:
        basis = miller_basis(k, doc["basis_precision"])
        problems = verify_a_document(doc["A_result"], basis)
        if problems:
            raise CertificationFailed(f"weight {k}: " + "; ".join(problems))
    return doc


def _weight_document_job(args):
    cfg, k = args
    return weight_document(cfg, k)


def weight_documents(cfg: RunConfig) -> list[dict]:
    if cfg.jobs > 1 and len(cfg.weights) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            return list(pool.map(_weight_document_job, [(cfg, k) for k in cfg.weights]))
    return [weight_document(cfg, k) for k in cfg.weights]


# ---------------------------------------------------------------------------
# commands


def cmd_table1(cfg: RunConfig) -> tuple[list[str], list[dict]]:
    rows = []
    for doc in weight_documents(cfg):
        rows.append({"k": doc["weight"], "L(k)": doc["L"], "A(k)": doc["A_result"]["A"], "U(k)": doc["U"]})
    return TABLE1_COLUMNS, rows


def cmd_table2(cfg: RunConfig) -> tuple[list[str], list[dict]]:
    rows = []
    for doc in weight_documents(cfg):
        b = doc["bounds"]
        rows.append({"k": doc["weight"], "t": b["t"], "C_2": b["C2"]["upper_bound"], "B(k)": b["B"], "A(k)": doc["A_result"]["A"]})
    return TABLE2_COLUMNS, rows


def cmd_ak(cfg: RunConfig, k: int) -> dict:
    doc = weight_document(cfg, k)
    return {
        "weight": k,
        "A": doc["A_result"]["A"],
        "B": doc["bounds"]["B"],
        "t": doc["bounds"]["t"],
        "certified": cfg.lp_certify,
        "proof": doc["A_result"],
    }


def cmd_basis(cfg: RunConfig, k: int) -> dict:
    if cfg.precision is None:
        basis, _ = basis_with_t(k)
    else:
        basis = miller_basis(k, cfg.precision)
    return basis.to_json()


def cmd_witness(cfg: RunConfig, k: int, N: int | None, terms: int | None) -> dict:
    with working_precision(cfg.working_precision_bits):
        run = prepare(k, cfg.precision)
    if N is None:
        N = weight_document(cfg, k)["A_result"]["A"]
    if N < 1:
        raise ValueError("N must be positive")
    horizon = max(run.Bk, N)
    basis = run.basis if run.basis.precision > horizon else miller_basis(k, horizon + 1)
    w = find_witness(basis, N, horizon)
    if w is None:
        return {
            "weight": k,
            "N": N,
            "found": False,
            "reason": f"nonnegativity of the coefficients below q^{N} forces the q^{N} coefficient to be nonnegative",
        }
    size = max(terms or 0, N + 1)
    if basis.precision < size:
        basis = miller_basis(k, size)
    form = basis.combination(w.values).truncate(size)
    negatives = [n for n in range(size) if form[n] < 0]
    return {
        "weight": k,
        "N": N,
        "found": True,
        "a": [fraction_to_str(v) for v in w.values],
        "first_negative": negatives[0] if negatives else None,
        "negative_indices": negatives,
        "expansion": form.to_terms(),
    }


def cmd_poincare(cfg: RunConfig, k: int, limit: int) -> dict:
    with working_precision(cfg.working_precision_bits):
        rows = sign_report(k, limit, cmax_cap=cfg.bessel_cmax_cap)
    lo, _ = theorem1_bounds(k)
    need = lo - 1
    ok = all(r.verdict == "positive" for r in rows if r.n <= need) and len(rows) >= min(need, limit)
    first_neg = next((r.n for r in rows if r.verdict == "negative"), None)
    undecided = [r.n for r in rows if r.verdict == "undecided"]
    statement = (
        f"b(n) > 0 certified for all n <= {need}"
        if ok and need <= limit
        else f"lower-bound certificate for n <= {need} not established"
    )
    return {
        "weight": k,
        "limit": limit,
        "rows": [r.to_row() for r in rows],
        "first_negative": first_neg,
        "undecided": undecided,
        "lower_bound_index": need,
        "lower_bound_certified": ok and need <= limit,
        "statement": statement,
    }


def cmd_bounds(cfg: RunConfig, k: int) -> dict:
    with working_precision(cfg.working_precision_bits):
        basis, t = basis_with_t(k, cfg.precision)
        return c2_and_Bk(k, basis, t, cfg.jr_exponent).to_json()


# ---------------------------------------------------------------------------
# output


def _render_table(columns, rows, fmt) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=2)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return buf.getvalue().rstrip("\n")
    widths = [max(len(c), *(len(str(r[c])) for r in rows)) for c in columns]
    lines = ["  ".join(c.rjust(w) for c, w in zip(columns, widths))]
    lines += ["  ".join(str(r[c]).rjust(w) for c, w in zip(columns, widths)) for r in rows]
    return "\n".join(lines)


def _render_doc(doc: dict, fmt: str, command: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2)
    if command == "poincare" and fmt == "csv":
        return _render_table(["n", "lo", "hi", "c_max", "verdict"], doc["rows"], "csv")
    if command == "poincare":
        return _render_table(["n", "lo", "hi", "c_max", "verdict"], doc["rows"], "text") + "\n" + doc["statement"]
    if fmt == "csv":
        flat = {k: v for k, v in doc.items() if not isinstance(v, (dict, list))}
        return _render_table(list(flat), [flat], "csv")
    return _text_summary(doc, command)


def _text_summary(doc: dict, command: str) -> str:
    if command == "ak":
        return f"A({doc['weight']}) = {doc['A']}  (t = {doc['t']}, B = {doc['B']})"
    if command == "witness":
        if not doc["found"]:
            return f"weight {doc['weight']}, N = {doc['N']}: no such form ({doc['reason']})"
        terms = " ".join(f"{'+' if not c.startswith('-') else '-'} {c.lstrip('-')}*q^{e}" for e, c in doc["expansion"])
        return f"a = ({', '.join(doc['a'])})\nf = {terms} + O(q^{len(doc['expansion'])})"
    if command == "basis":
        return "\n".join(
            f"F_{{{doc['weight']},{m}}} = "
            + " ".join(f"{c}*q^{e}" for e, c in form[:8])
            + " ..."
            for m, form in enumerate(doc["forms"])
        )
    return json.dumps(doc, indent=2)


# ---------------------------------------------------------------------------
# argument parsing


def _parse_weights(spec: str) -> tuple[int, ...]:
    out = []
    for part in spec.split(","):
        part = part.strip()
        if ":" in part:
            a, b = part.split(":")
            out.extend(range(int(a), int(b) + 1, 4))
        elif part:
            out.append(int(part))
    return tuple(out)


def _common_options() -> argparse.ArgumentParser:
    # defaults are suppressed so an option may appear before or after the subcommand
    c = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    c.add_argument("--config", type=Path, help="JSON file with default option values")
    c.add_argument("--precision", type=int, help="number of q-expansion terms for the basis (default: automatic)")
    c.add_argument("--format", dest="output_format", choices=["json", "csv", "text"])
    c.add_argument("--certify", action="store_true", help="re-verify certificates and witnesses")
    c.add_argument("--prec-bits", dest="working_precision_bits", type=int, help="interval working precision in bits")
    c.add_argument("--cmax-cap", dest="bessel_cmax_cap", type=int, help="largest c used in the Poincare c-sum")
    c.add_argument("--cache-dir", type=Path, help="directory for cached results")
    c.add_argument("--no-cache", action="store_true", help="disable the result cache")
    c.add_argument("--jobs", type=int, help="worker processes for table commands")
    c.add_argument("--jr-exponent", help="exponent in the e^{...} factor of the cusp bound")
    return c


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    p = argparse.ArgumentParser(
        prog="nonneg-sturm",
        description="Nonnegativity Sturm bounds for level-one modular forms.",
        parents=[common],
    )
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("table1", "table2"):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("--weights", default="12:88", help="e.g. 12:88 or 12,24,36")
    for name in ("ak", "basis", "bounds"):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("k", type=int)
    s = sub.add_parser("witness", parents=[common])
    s.add_argument("k", type=int)
    s.add_argument("N", type=int, nargs="?")
    s.add_argument("--terms", type=int, default=None, help="length of the printed expansion")
    s = sub.add_parser("poincare", parents=[common])
    s.add_argument("k", type=int)
    s.add_argument("limit", type=int)
    return p


def _config_from(args) -> RunConfig:
    base: dict = {}
    if getattr(args, "config", None):
        base = json.loads(Path(args.config).read_text())
    def pick(name, default):
        v = getattr(args, name, None)
        if v is not None:
            return v
        return base.get(name, default)

    cache = None
    if not (getattr(args, "no_cache", False) or base.get("no_cache")):
        cache_value = pick("cache_dir", os.environ.get("NONNEG_STURM_CACHE"))
        cache = Path(cache_value) if cache_value else Path.home() / ".cache" / "nonneg-sturm"
    weights = ()
    if args.command in ("table1", "table2"):
        weights = _parse_weights(args.weights)
    elif hasattr(args, "k"):
        weights = (args.k,)
    cfg = RunConfig(
        weights=weights,
        precision=pick("precision", None),
        lp_certify=bool(getattr(args, "certify", False) or base.get("certify", False)),
        bessel_cmax_cap=pick("bessel_cmax_cap", DEFAULT_CMAX_CAP),
        output_format=pick("output_format", "text"),
        working_precision_bits=pick("working_precision_bits", DEFAULT_PRECISION),
        cache_dir=cache,
        jobs=pick("jobs", 1),
        jr_exponent=str(pick("jr_exponent", JR_EXP_DEFAULT)),
    )
    cfg.validate()
    return cfg


EXIT_CODES = (
    (WeightError, WeightError.exit_code),
    (NotFoundError, NotFoundError.exit_code),
    (WidthNotReached, WidthNotReached.exit_code),
    (Undecided, Undecided.exit_code),
    (EnclosureTooWide, EnclosureTooWide.exit_code),
    (HypothesisViolated, HypothesisViolated.exit_code),
    (CertificationFailed, EXIT_CERT_FAILED),
    (PrecisionError, 9),
)


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from(args)
        fmt = cfg.output_format
        cmd = args.command
        if cmd in ("table1", "table2"):
            cols, rows = (cmd_table1 if cmd == "table1" else cmd_table2)(cfg)
            print(_render_table(cols, rows, fmt), file=out)
            return EXIT_OK
        if cmd == "ak":
            doc = cmd_ak(cfg, args.k)
        elif cmd == "basis":
            doc = cmd_basis(cfg, args.k)
        elif cmd == "bounds":
            doc = cmd_bounds(cfg, args.k)
        elif cmd == "witness":
            doc = cmd_witness(cfg, args.k, args.N, args.terms)
        else:
            doc = cmd_poincare(cfg, args.k, args.limit)
        print(_render_doc(doc, fmt, cmd), file=out)
        if cmd == "poincare":
            if doc["undecided"]:
                return Undecided.exit_code
            if not doc["lower_bound_certified"]:
                return EXIT_CERT_FAILED
        return EXIT_OK
    except tuple(e for e, _ in EXIT_CODES) as exc:
        code = next(c for e, c in EXIT_CODES if isinstance(exc, e))
        weight = getattr(exc, "weight", getattr(args, "k", None))
        where = f" (weight {weight})" if weight is not None else ""
        print(f"error{where}: {exc}", file=sys.stderr)
        return code
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:  # pragma: no cover
    sys.exit(run())


if __name__ == "__main__":  # pragma: no cover
    main()
