"""Command-line interface: ``gvkit <command> [options]``.

Exit codes: 0 success or certified, 1 valid but negative, 2 usage or domain
error, 3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

from . import __version__
from .bounds import (
    CodeParams,
    bonferroni_failure_bound,
    certify_classical,
    derive_constants,
    feng_ma_condition,
    quantum_hamming_check,
    quantum_improved_certify,
    quantum_singleton_check,
    quantum_union_certify,
    varshamov_condition,
)
from .combinatorics import hamming_volume, symplectic_volume
from .errors import DomainError, ResourceCapError, UsageError
from .linear_codes import LinearCode, min_hamming_distance, sample_generator_matrix
from .montecarlo import (
    MonteCarloEstimate,
    bonferroni_bracket_rows,
    estimate_row,
    estimate_sum_in_ball,
    rows_to_csv,
    verify_intersection_concentration,
)
from .rng import default_seed
from .symplectic import (
    SymplecticCode,
    min_symplectic_distance,
    sample_self_orthogonal_code,
    symplectic_dual,
    to_quantum_params,
)

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


def _range(text: str) -> list[int]:
    """``a..b`` (inclusive) or a comma list."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return list(range(int(lo), int(hi) + 1))
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"bad range {text!r}") from exc


def _emit_pairs(pairs, fmt: str, out) -> None:
    if fmt == "csv":
        out.write("key,value\n")
        for k, v in pairs:
            out.write(f"{k},{_csv_cell(v)}\n")
    else:
        for k, v in pairs:
            out.write(f"{k}: {v}\n")


def _csv_cell(v) -> str:
    s = str(v)
    if any(c in s for c in ',"\n'):
        s = '"' + s.replace('"', '""') + '"'
    return s


def _report_pairs(text: str):
    for line in text.strip().splitlines()[1:]:
        key, _, val = line.partition(": ")
        yield key, val


def _write_manifest(args, outputs: list[str]) -> None:
    stamp = os.environ.get("SOURCE_DATE_EPOCH")
    ts = time.gmtime(int(stamp)) if stamp else time.gmtime()
    params = {k: v for k, v in vars(args).items() if k not in ("func",)}
    manifest = {
        "command": args.command,
        "parameters": params,
        "seed": args.seed,
        "tool": "gvkit",
        "version": __version__,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", ts),
        "outputs": outputs,
    }
    for path in outputs:
        with open(path + ".manifest.json", "w", encoding="utf-8", newline="\n") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True, default=str)
            fh.write("\n")


# -- commands ------------------------------------------------------------


def cmd_volumes(args, out) -> int:
    ds = _range(args.d)
    vol = symplectic_volume if args.metric == "symplectic" else hamming_volume
    rows = [(d, vol(args.q, args.n, d)) for d in ds]
    if args.format == "csv":
        out.write("q,n,d,metric,volume\n")
        for d, v in rows:
            out.write(f"{args.q},{args.n},{d},{args.metric},{v}\n")
    else:
        out.write(f"q: {args.q}\nn: {args.n}\nmetric: {args.metric}\n")
        for d, v in rows:
            out.write(f"volume[{d}]: {v}\n")
    return EXIT_OK


def _need_k(args):
    if args.k is None:
        raise UsageError(f"--k is required for mode {args.mode}")
    return CodeParams(args.q, args.n, args.k, args.d)


_BOOLEAN_MODES = {
    "varshamov": lambda a: varshamov_condition(CodeParams(a.q, a.n, a.k, a.d)),
    "feng_ma": lambda a: feng_ma_condition(a.q, a.n, a.k, a.d),
    "quantum_hamming": lambda a: quantum_hamming_check(a.q, a.n, a.k, a.d),
    "quantum_singleton": lambda a: quantum_singleton_check(a.q, a.n, a.k, a.d),
}


def cmd_certify(args, out) -> int:
    mode = args.mode
    extra = []
    if mode in ("union", "bonferroni"):
        params = _need_k(args)
        t = args.t if args.t is not None else 1
        gamma = Fraction(args.gamma) if args.gamma is not None else None
        rep = bonferroni_failure_bound(params, t, model=args.model, gamma=gamma)
    elif mode in _BOOLEAN_MODES:
        if args.k is None:
            raise UsageError(f"--k is required for mode {mode}")
        ok = _BOOLEAN_MODES[mode](args)
        _emit_pairs([("mode", mode), ("verdict", "certified" if ok else "not_certified")], args.format, out)
        return EXIT_OK if ok else EXIT_NEGATIVE
    elif mode in ("warmup17", "sqrt_n", "bonferroni_t"):
        c = Fraction(args.c) if args.c is not None else None
        h = Fraction(args.h) if args.h is not None else None
        k, rep = certify_classical(args.q, args.n, args.d, mode, c=c, t=args.t, h=h)
        extra.append(("max_k", k))
        if k == 0:
            _emit_pairs([("mode", mode), ("max_k", 0), ("verdict", "not_certified")], args.format, out)
            return EXIT_NEGATIVE
    elif mode == "quantum_union":
        rep = quantum_union_certify(_need_k(args))
    elif mode == "quantum_improved":
        c = Fraction(args.c) if args.c is not None else Fraction(1)
        h = Fraction(args.h) if args.h is not None else None
        rep = quantum_improved_certify(_need_k(args), c=c, t=args.t, h_prime=h)
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown mode {mode}")
    pairs = [("format", "gvkit-certificate/1"), *extra, *_report_pairs(rep.to_text())]
    if args.format == "csv":
        _emit_pairs(pairs, "csv", out)
    else:
        header, body = rep.to_text().split("\n", 1)
        out.write(header + "\n" + "".join(f"{k}: {v}\n" for k, v in extra) + body)
    return EXIT_OK if rep.certified else EXIT_NEGATIVE


def cmd_sample(args, out) -> int:
    notes = []
    if args.kind == "linear":
        code = sample_generator_matrix(args.q, args.k, args.n, args.seed)
        if args.with_distance:
            notes.append(("distance", min_hamming_distance(code)))
    else:
        code = sample_self_orthogonal_code(args.q, args.n, args.k, args.seed)
        if args.with_distance:
            notes.append(("distance", min_symplectic_distance(code)))
        if args.quantum_params:
            notes.append(("quantum", str(to_quantum_params(code))))
    if args.format == "csv":
        out.write(",".join(str(x) for x in (code.q, code.generator.shape[1], code.k)) + "\n")
        for row in code.generator:
            out.write(",".join(str(int(x)) for x in row) + "\n")
        for k, v in notes:
            out.write(f"# {k},{v}\n")
    else:
        out.write(code.to_text())
        for k, v in notes:
            out.write(f"# {k}: {v}\n")
    return EXIT_OK


def _read_code_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _strip_comments(text: str) -> str:
    lines = [ln for ln in text.splitlines() if not ln.lstrip().startswith("#")]
    if lines and "," in lines[0]:
        lines = [ln.replace(",", " ") for ln in lines]
    return "\n".join(lines)


def cmd_check(args, out) -> int:
    text = _strip_comments(_read_code_text(args.file))
    if args.self_orthogonal:
        code = SymplecticCode.from_text(text)
        ok = code.self_orthogonal
        pairs = [
            ("self_orthogonal", str(ok).lower()),
            ("rank", code.rank),
            ("dual_dimension", symplectic_dual(code).k),
        ]
        if ok and code.rank <= code.n:
            qp = to_quantum_params(code)
            pairs.append(("quantum", str(qp)))
            pairs.append(("quantum_singleton", str(quantum_singleton_check(qp.q, qp.n, qp.logical, qp.d)).lower()))
        _emit_pairs(pairs, args.format, out)
        return EXIT_OK if ok else EXIT_NEGATIVE
    code = LinearCode.from_text(text)
    pairs = [("rank", code.rank), ("full_rank", str(code.full_rank).lower()), ("distance", min_hamming_distance(code))]
    _emit_pairs(pairs, args.format, out)
    return EXIT_OK if code.full_rank else EXIT_NEGATIVE


def _verify_sum(args, metric):
    ns = _range(args.ns)
    delta = Fraction(args.delta)
    rows, ests = [], []
    for n in ns:
        d = int(delta * n) + 1
        est = estimate_sum_in_ball(args.q, n, d, args.ell, args.trials, args.seed, metric=metric,
                                   stream=f"{metric}-sum-{n}", workers=args.workers)
        ests.append(est)
        rows.append(estimate_row(est, args.q, n, None, d, args.ell))
    ok = all(
        later.p_hat < earlier.p_hat and later.disjoint_from(earlier)
        for earlier, later in zip(ests, ests[1:])
    )
    return rows, [(f"{metric}-sum decay", ok)]


def _verify_intersection(args):
    rows, checks = [], []
    medians = {}
    for ell in _range(args.ells):
        s = verify_intersection_concentration(args.q, args.n, args.d, ell, args.trials, args.seed,
                                              stream=f"intersection-{ell}")
        inside = sum(1 for r in s.ratios if Fraction(2, 5) <= r <= Fraction(5, 2))
        est = MonteCarloEstimate(inside, len(s.ratios), args.seed, f"intersection-{ell}")
        rows.append(estimate_row(est, args.q, args.n, None, args.d, ell))
        checks.append((f"intersection ell={ell} within [0.4,2.5] >= 90%", Fraction(inside, len(s.ratios)) >= Fraction(9, 10)))
        medians[ell] = (s.stats[1], s.orthogonal_stats[1])
    for ell, (mu, mo) in medians.items():
        if ell >= 2:
            checks.append((f"orthogonal median within x2 at ell={ell}", mu / 2 <= mo <= 2 * mu))
    return rows, checks


def _verify_bracket(args):
    rows, all_ok = [], True
    for n in range(1, args.n + 1):
        for k in (1, 2):
            if k > n:
                continue
            for d in range(1, n + 1):
                br = bonferroni_bracket_rows(2, n, k, d)
                good = sum(r.ok for r in br)
                all_ok &= good == len(br)
                est = MonteCarloEstimate(good, len(br), args.seed, "bracket")
                rows.append(estimate_row(est, 2, n, k, d, None))
    return rows, [("bonferroni bracket", all_ok)]


def cmd_verify(args, out) -> int:
    if args.trials <= 0:
        raise UsageError("--trials must be positive")
    if args.lemma == "hamming-sum":
        rows, checks = _verify_sum(args, "hamming")
    elif args.lemma == "symplectic-sum":
        rows, checks = _verify_sum(args, "symplectic")
    elif args.lemma == "intersection":
        rows, checks = _verify_intersection(args)
    else:
        rows, checks = _verify_bracket(args)
    if args.format == "csv":
        text = rows_to_csv(rows)
    else:
        text = "".join(
            "\n".join(f"{k}: {v}" for k, v in row.items()) + "\n---\n" for row in rows
        )
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        _write_manifest(args, [args.out])
    else:
        out.write(text)
    for name, ok in checks:
        print(f"{'PASS' if ok else 'FAIL'} {name}", file=sys.stderr)
    return EXIT_OK if all(ok for _, ok in checks) else EXIT_NEGATIVE


def cmd_constants(args, out) -> int:
    rep = derive_constants(args.q, Fraction(args.delta), args.domain, args.n)
    text = rep.to_text()
    if args.format == "csv":
        _emit_pairs(list(_report_pairs(text)), "csv", out)
    else:
        out.write(text)
    return EXIT_OK


# -- parser --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=default_seed(), help="base seed (default: $GVKIT_SEED or 0)")
    common.add_argument("--format", choices=("csv", "structured"), default="structured")
    common.add_argument("--workers", type=int, default=1, help="worker processes; never changes results")

    p = argparse.ArgumentParser(prog="gvkit", description="Gilbert-Varshamov bounds workbench")
    p.add_argument("--version", action="version", version=f"gvkit {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("volumes", parents=[common], help="exact ball volumes")
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--d", default=None, help="radius range a..b or list (default 0..n)")
    s.add_argument("--metric", choices=("hamming", "symplectic"), default="hamming")
    s.set_defaults(func=cmd_volumes)

    s = sub.add_parser("certify", parents=[common], help="existence certificates")
    s.add_argument("--mode", required=True, choices=(
        "union", "bonferroni", "varshamov", "warmup17", "sqrt_n", "bonferroni_t",
        "quantum_union", "quantum_improved", "feng_ma", "quantum_hamming", "quantum_singleton"))
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--t", type=int, help="truncation depth (odd)")
    s.add_argument("--c", help="multiplier for the sqrt(n) conditions, rational")
    s.add_argument("--h", help="tail rate override used to pick t, rational")
    s.add_argument("--model", choices=("idealized", "corrected"), default="idealized")
    s.add_argument("--gamma", help="correction factor for --model corrected, rational")
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("sample", parents=[common], help="sample a random code")
    s.add_argument("--kind", choices=("linear", "self-orthogonal"), required=True)
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--with-distance", action="store_true")
    s.add_argument("--quantum-params", action="store_true")
    s.set_defaults(func=cmd_sample)

    s = sub.add_parser("check", parents=[common], help="inspect a serialized code")
    s.add_argument("file", nargs="?", default="-")
    s.add_argument("--self-orthogonal", action="store_true", help="treat as a symplectic code")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("verify", parents=[common], help="run a verification experiment")
    s.add_argument("--lemma", required=True,
                   choices=("hamming-sum", "symplectic-sum", "intersection", "bonferroni-bracket"))
    s.add_argument("--trials", type=int, default=100000, help="trials (or samples for intersection)")
    s.add_argument("--q", type=int, default=2)
    s.add_argument("--ns", default="100,200", help="lengths for the sum experiments")
    s.add_argument("--delta", default="2/5", help="radius fraction for the sum experiments")
    s.add_argument("--ell", type=int, default=2)
    s.add_argument("--n", type=int, default=None, help="length for intersection (8) or bracket grid max (4)")
    s.add_argument("--d", type=int, default=5, help="distance for intersection (radius d-1)")
    s.add_argument("--ells", default="1,2")
    s.add_argument("--out", help="write rows here and a manifest next to it")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("constants", parents=[common], help="derived slack and tail rates")
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--delta", required=True)
    s.add_argument("--domain", choices=("hamming", "symplectic"), default="hamming")
    s.add_argument("--n", type=int)
    s.set_defaults(func=cmd_constants)
    return p


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "volumes" and args.d is None:
        args.d = f"0..{args.n}"
    if args.command == "verify" and args.n is None:
        args.n = 8 if args.lemma == "intersection" else 4
    try:
        return args.func(args, out)
    except (UsageError, DomainError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
