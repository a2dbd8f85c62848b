"""Command-line front end.

    dss-distill <eigen|dss|protocol|classify|npt> STATEFILE [flags]

A state file is JSON ``{"dim_a": 2, "dim_b": 2, "matrix": [[[re, im], ...], ...]}``
with row index ``a * dim_b + b``. Each command builds a report; ``--json``
prints it to stdout, ``--output`` writes it to a file, and otherwise a short
text summary is printed. Floats in reports use the shortest repr that
round-trips, and keys keep a fixed order, so identical invocations give
identical bytes.

Exit statuses: 0 success, 2 parse/validation error, 3 resource cap
exceeded, 4 input outside the command's domain.
"""

import argparse
import hashlib
import json
import sys

import numpy as np

from . import __version__, kernels
from .dss import DEFAULT_BUDGET, find_dss, maximal_dss_partition, theorem2_check
from .errors import DistillError, DomainError, InconsistencyError, PreconditionError, ResourceError, ValidationError
from .linalg import TOL, hermitian_eig
from .protocol import finite_copy_yield
from .qubit import PATTERN_TOL, classify_finite_distillable
from .state import make_density, npt_check, partial_transpose, tensor_power

REPORT_SCHEMA = "dss-distill/report/v1"
EXIT_OK, EXIT_PARSE, EXIT_RESOURCE, EXIT_DOMAIN = 0, 2, 3, 4


class StateFileError(Exception):
    """Malformed state file; ``location`` is a byte offset or a JSON path."""

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


def _num(x):
    x = float(x)
    return 0.0 if x == 0 else x  # no "-0.0" in reports


def _cvec(v):
    return [[_num(z.real), _num(z.imag)] for z in np.asarray(v, dtype=np.complex128).ravel()]


def _cmat(m):
    return [_cvec(row) for row in np.asarray(m)]


def _phase_fixed(v):
    k = int(np.argmax(np.abs(v) > np.abs(v).max() * (1 - 1e-9)))
    return v * (abs(v[k]) / v[k])


def parse_state_bytes(raw):
    """Decode a state file into ``(matrix, dim_a, dim_b)``; raises :class:`StateFileError`."""
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as e:
        raise StateFileError(f"invalid UTF-8 at byte offset {e.start}", e.start) from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        offset = len(text[: e.pos].encode("utf-8"))
        raise StateFileError(f"malformed JSON at byte offset {offset}: {e.msg}", offset) from None
    if not isinstance(doc, dict):
        raise StateFileError("top level must be an object", "$")
    dims = []
    for key in ("dim_a", "dim_b"):
        val = doc.get(key)
        if isinstance(val, bool) or not isinstance(val, int) or val < 1:
            raise StateFileError(f"{key} must be a positive integer", f"$.{key}")
        dims.append(val)
    d = dims[0] * dims[1]
    rows = doc.get("matrix")
    if not isinstance(rows, list) or len(rows) != d:
        raise StateFileError(f"matrix must be a list of {d} rows", "$.matrix")
    m = np.empty((d, d), dtype=np.complex128)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != d:
            raise StateFileError(f"row {i} must hold {d} entries", f"$.matrix[{i}]")
        for j, z in enumerate(row):
            ok = isinstance(z, list) and len(z) == 2
            ok = ok and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in z)
            if not ok:
                raise StateFileError(
                    f"entry at row {i}, column {j} must be a [re, im] pair of numbers", f"$.matrix[{i}][{j}]"
                )
            m[i, j] = complex(z[0], z[1])
    return m, dims[0], dims[1]


def load_state(path, tol):
    """Read and validate a state file; returns ``(density, sha256 hex)``."""
    with open(path, "rb") as fh:
        raw = fh.read()
    m, da, db = parse_state_bytes(raw)
    return make_density(m, da, db, tol=tol), hashlib.sha256(raw).hexdigest()


def _record_json(rho, rec):
    try:
        pat = theorem2_check(rho, rec)
        t2 = {
            "ok": True,
            "zero_rows": list(pat.zero_rows),
            "zero_cols": list(pat.zero_cols),
            "rank": pat.rank,
            "rank_bound": pat.rank_bound,
        }
    except InconsistencyError as e:
        t2 = {"ok": False, "error": str(e)}
    return {
        "subset_a": list(rec.subspace.subset_a),
        "subset_b": list(rec.subspace.subset_b),
        "schmidt_number": rec.schmidt_number,
        "probability": _num(rec.probability),
        "entropy": _num(rec.entropy),
        "pure_state": _cvec(rec.pure_state),
        "theorem2": t2,
    }


def cmd_eigen(rho, args):
    w, v = rho.eig
    vecs = [_cvec(_phase_fixed(v[:, k])) for k in range(v.shape[1])]
    return {
        "dim_a": rho.dim_a,
        "dim_b": rho.dim_b,
        "rank": rho.rank,
        "eigenvalues": [_num(x) for x in w],
        "eigenvectors": vecs,
    }


def cmd_dss(rho, args):
    big = tensor_power(rho, args.copies)
    if args.partition:
        records = maximal_dss_partition(big, tol=args.tol, budget=args.budget, jobs=args.jobs, m_max=args.m_max)
    else:
        records = find_dss(big, m_min=args.m_min, m_max=args.m_max, tol=args.tol, budget=args.budget, jobs=args.jobs)
    return {
        "copies": args.copies,
        "dim_a": big.dim_a,
        "dim_b": big.dim_b,
        "rank": big.rank,
        "mode": "partition" if args.partition else "all",
        "records": [_record_json(big, r) for r in records],
    }


def cmd_protocol(rho, args):
    rep = finite_copy_yield(rho, args.copies, tol=args.tol, budget=args.budget, jobs=args.jobs)
    outcomes = []
    for o in rep.outcomes:
        outcomes.append(
            {
                "label": o.label,
                "probability": _num(o.probability),
                "purity": _num(o.purity),
                "schmidt_number": o.schmidt_number,
                "ebits": _num(o.distilled_entropy),
                "filtered_ebits": _num(o.filtered_ebits),
                "fidelity": _num(o.fidelity_to_target),
                "distillable": o.is_dss,
            }
        )
    discarded = sum(o.probability for o in rep.outcomes if not o.is_dss)
    return {
        "copies": args.copies,
        "protocol": rep.protocol.to_dict(),
        "outcomes": outcomes,
        "discarded_probability": _num(discarded),
        "totalEbits": _num(rep.total_ebits),
        "filteredTotalEbits": _num(rep.filtered_total_ebits),
    }


def _parameters_json(params):
    if params is None:
        return None
    return {
        "theta": _num(params.theta),
        "lambda1": _num(params.lambda1),
        "lambda2": _num(params.lambda2),
        "form": params.form,
        "frame_a": _cmat(params.frame_a),
        "frame_b": _cmat(params.frame_b),
    }


def cmd_classify(rho, args):
    if (rho.dim_a, rho.dim_b) != (2, 2):
        raise DomainError(f"classify needs a 2x2 state, got {rho.dim_a}x{rho.dim_b}")
    c = classify_finite_distillable(rho, tol=args.pattern_tol)
    return {
        "verdict": c.verdict.value,
        "rank": c.rank,
        "lambda_prime": [_num(x) for x in c.spectrum.lambda_prime],
        "concurrence": _num(c.spectrum.concurrence),
        "npt": npt_check(rho, args.tol),
        "parameters": _parameters_json(c.parameters),
        "proximity": None if c.proximity is None else _num(c.proximity),
        "borderline": c.borderline,
    }


def cmd_npt(rho, args):
    w, _ = hermitian_eig(partial_transpose(rho), tol=np.inf)
    return {
        "npt": bool(w[-1] < -args.tol),
        "min_eigenvalue": _num(w[-1]),
        "negativity": _num(-w[w < 0].sum()),
        "partial_transpose_eigenvalues": [_num(x) for x in w],
    }


COMMANDS = {
    "eigen": cmd_eigen,
    "dss": cmd_dss,
    "protocol": cmd_protocol,
    "classify": cmd_classify,
    "npt": cmd_npt,
}


def build_parser():
    p = argparse.ArgumentParser(prog="dss-distill", description="Finite-copy distillability analyses.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("statefile")
        sp.add_argument("--tol", type=float, default=TOL, help="numerical tolerance (default %(default)g)")
        sp.add_argument("--json", action="store_true", help="print the JSON report to stdout")
        sp.add_argument("--output", "-o", help="write the JSON report to this file")
        if name in ("dss", "protocol"):
            sp.add_argument("--copies", "-n", type=int, default=1)
            sp.add_argument("--jobs", type=int, default=1, help="threads for the subset scan")
            sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="max subset pairs to enumerate")
        if name == "dss":
            sp.add_argument("--m-min", type=int, default=2)
            sp.add_argument("--m-max", type=int, default=None)
            sp.add_argument("--partition", action="store_true", help="report the maximal disjoint partition")
        if name == "classify":
            sp.add_argument(
                "--pattern-tol", type=float, default=PATTERN_TOL, help="fit tolerance for the two-term form"
            )
    return p


def _settings(args):
    keys = ("tol", "pattern_tol", "copies", "m_min", "m_max", "partition", "budget", "jobs")
    out = {k: getattr(args, k) for k in keys if hasattr(args, k)}
    out["backend"] = kernels.BACKEND
    return out


def build_report(args, argv):
    rho, digest = load_state(args.statefile, args.tol)
    results = COMMANDS[args.command](rho, args)
    return {
        "schema": REPORT_SCHEMA,
        "command": {"name": args.command, "argv": list(argv)},
        "input": {"sha256": digest},
        "settings": _settings(args),
        "results": results,
    }


def dumps_report(report):
    return json.dumps(report, indent=2, allow_nan=False) + "\n"


def _summary(report):
    r = report["results"]
    name = report["command"]["name"]
    lines = [f"{name}: sha256 {report['input']['sha256'][:12]}"]
    if name == "eigen":
        lines.append(f"rank {r['rank']}; eigenvalues " + ", ".join(f"{x:.6g}" for x in r["eigenvalues"]))
    elif name == "dss":
        lines.append(f"{len(r['records'])} DSS ({r['mode']}) in {r['dim_a']}x{r['dim_b']}")
        for rec in r["records"]:
            lines.append(
                f"  A{rec['subset_a']} B{rec['subset_b']} m={rec['schmidt_number']} p={rec['probability']:.6g}"
            )
    elif name == "protocol":
        for o in r["outcomes"]:
            lines.append(
                f"  {o['label']}: p={o['probability']:.6g} purity={o['purity']:.6g} "
                f"m={o['schmidt_number']} ebits={o['ebits']:.6g}"
            )
        lines.append(f"totalEbits {r['totalEbits']:.6g}")
    elif name == "classify":
        lines.append(f"verdict {r['verdict']}; lambda' " + ", ".join(f"{x:.6g}" for x in r["lambda_prime"]))
        lines.append(f"NPT {r['npt']}")
        if r["parameters"]:
            pr = r["parameters"]
            lines.append(f"theta {pr['theta']:.6g} lambda1 {pr['lambda1']:.6g} form {pr['form']}")
    elif name == "npt":
        lines.append(f"NPT {r['npt']}; min eigenvalue {r['min_eigenvalue']:.6g}; negativity {r['negativity']:.6g}")
    return "\n".join(lines) + "\n"


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(argv)
    try:
        report = build_report(args, argv)
    except OSError as e:
        print(f"error: cannot read {args.statefile}: {e.strerror}", file=sys.stderr)
        return EXIT_PARSE
    except StateFileError as e:
        print(f"error: {args.statefile}: {e}", file=sys.stderr)
        return EXIT_PARSE
    except ValidationError as e:
        print(f"error: {args.statefile}: invalid state: {e}", file=sys.stderr)
        return EXIT_PARSE
    except ResourceError as e:
        print(f"error: resource cap exceeded: {e} (required {e.required}, cap {e.cap})", file=sys.stderr)
        return EXIT_RESOURCE
    except DomainError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    except PreconditionError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except DistillError as e:
        print(f"error: internal check failed: {e}", file=sys.stderr)
        return 1
    text = dumps_report(report)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    sys.stdout.write(text if args.json else _summary(report))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
