"""Command-line front end.

    lqt homology --complex {ce,cyclic,bar} --algebra FILE [-n N] --max-degree P
    lqt decompose --algebra FILE -n N --max-degree P
    lqt verify COMMAND --config FILE
    lqt hunital --pro FILE --rmax R

Exit status: 0 when everything passes, 1 on a verification failure (the
witness goes to stderr), 2 on bad input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from math import comb

from .algebras import AlgebraFormatError, ProAlgebra, StructAlgebra, corpus, matrix_lie_algebra
from .builders import bar_complex, chevalley_eilenberg, connes_complex, h_unital_check_pro, h_unital_verdict
from .complexes import homology, verify_complex
from .rep_theory import CEModule, DecompositionError
from .reports import dumps, jsonable, make_report
from .verify import COMMANDS, ConfigError, SweepConfig, pro_from_spec, resolve_jobs, run_verification

DEFAULT_MAX_BASIS = 300000


class InputError(Exception):
    pass


def _read_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputError(f"{path}: no such file")
    except json.JSONDecodeError as e:
        raise InputError(f"{path}:{e.lineno}:{e.colno}: malformed JSON: {e.msg}")


def load_algebra(ref: str) -> StructAlgebra:
    """A JSON file, or the name of a corpus algebra."""
    if not os.path.exists(ref) and ref in corpus():
        return corpus()[ref]
    data = _read_json(ref)
    name = data.get("name") or os.path.splitext(os.path.basename(ref))[0]
    try:
        return StructAlgebra.from_json(data, name=name)
    except AlgebraFormatError as e:
        raise InputError(f"{ref}: {e}")


def load_pro(ref: str, window: int = 3) -> ProAlgebra:
    if ":" in ref and not os.path.exists(ref):
        return pro_from_spec(ref, window)
    data = _read_json(ref)
    try:
        return ProAlgebra.from_json(data, name=os.path.splitext(os.path.basename(ref))[0])
    except AlgebraFormatError as e:
        raise InputError(f"{ref}: {e}")


def guard(size: int, what: str, max_basis: int) -> None:
    if size > max_basis:
        raise InputError(f"refusing {what}: basis size {size} exceeds --max-basis {max_basis}")


def _ce_guard(dim_a: int, n: int, p: int, max_basis: int) -> None:
    guard(comb(n * n * dim_a, p), f"C({n}²·{dim_a}, {p}) = C({n * n * dim_a}, {p})", max_basis)


def positive(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {s}")
    return v


def nonneg(s: str) -> int:
    v = int(s)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {s}")
    return v


def build_parser() -> argparse.ArgumentParser:
    # global flags are accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-basis", type=positive, default=argparse.SUPPRESS)
    common.add_argument("--deterministic", action="store_true", default=argparse.SUPPRESS, help="omit timing fields")
    common.add_argument("--jobs", type=positive, default=argparse.SUPPRESS, help="worker cap (default: $LQT_JOBS or 1)")
    ap = argparse.ArgumentParser(prog="lqt", description="Exact Loday-Quillen-Tsygan computations.", parents=[common])
    sub = ap.add_subparsers(dest="cmd", required=True)

    h = sub.add_parser("homology", parents=[common])
    h.add_argument("--complex", choices=["ce", "cyclic", "bar"], required=True)
    h.add_argument("--algebra", required=True)
    h.add_argument("-n", type=positive, default=1)
    h.add_argument("--max-degree", type=nonneg, required=True)
    h.add_argument("--out")
    h.add_argument("--csv")

    d = sub.add_parser("decompose", parents=[common])
    d.add_argument("--algebra", required=True)
    d.add_argument("-n", type=positive, required=True)
    d.add_argument("--max-degree", type=nonneg, required=True)
    d.add_argument("--out")
    d.add_argument("--csv")

    v = sub.add_parser("verify", parents=[common])
    v.add_argument("which", choices=COMMANDS)
    v.add_argument("--config", required=True)
    v.add_argument("--out")

    u = sub.add_parser("hunital", parents=[common])
    u.add_argument("--pro", required=True)
    u.add_argument("--rmax", type=positive, required=True)
    u.add_argument("--window", type=positive, default=3, help="window for powers:/constant: specs")
    u.add_argument("--out")
    return ap


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _write_csv(path: str, header: list, rows: list) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    with open(path, "w") as fh:
        fh.write(buf.getvalue())


def cmd_homology(args) -> int:
    a = load_algebra(args.algebra)
    top = args.max_degree
    if args.complex == "ce":
        for p in range(top + 2):
            _ce_guard(a.dim, args.n, p, args.max_basis)
        g = matrix_lie_algebra(a, args.n)
        cx = chevalley_eilenberg(g, top + 1)
        label = lambda w: "∧".join(g.label(x) for x in w) or "1"
        lo = 0
    else:
        guard(a.dim ** (top + 1), f"{a.dim}^{top + 1} tensor words", args.max_basis)
        if args.complex == "cyclic":
            cx = connes_complex(a, top + 1)
            lo = 0
        else:
            cx = bar_complex(a, top + 1)
            lo = 1
        label = lambda w: "⊗".join(a.basis_names[x] for x in w)
    chk = verify_complex(cx)
    if not chk.ok:
        print(f"d∘d ≠ 0: {jsonable(chk.witness)}", file=sys.stderr)
        return 1
    dims, reps, zero_bd = {}, {}, {}
    for p in range(lo, top + 1):
        d, r = homology(cx, p)
        dims[p] = d
        basis = cx.basis(p)
        reps[p] = [{label(basis[i]): str(c) for i, c in sorted(v.items())} for v in r.basis]
        zero_bd[p] = cx.d(p).is_zero() if p >= 1 and cx.dim(p) and cx.dim(p - 1) else True
    for p in dims:
        print(f"H_{p} = {dims[p]}", file=sys.stderr if args.out is None else sys.stdout)
    result = {"complex": args.complex, "algebra": a.name, "n": args.n if args.complex == "ce" else None,
              "dims": dims, "chain_dims": {p: cx.dim(p) for p in dims}, "zero_boundaries": all(zero_bd.values()),
              "representatives": reps}
    _emit(json.dumps(jsonable(result), indent=2, sort_keys=True, ensure_ascii=False), args.out)
    if args.csv:
        _write_csv(args.csv, ["degree", "chain_dim", "homology_dim"], [[p, cx.dim(p), dims[p]] for p in dims])
    return 0


def cmd_decompose(args) -> int:
    a = load_algebra(args.algebra)
    for p in range(args.max_degree + 1):
        _ce_guard(a.dim, args.n, p, args.max_basis)
    g = matrix_lie_algebra(a, args.n)
    mod = CEModule(g, args.max_degree)
    rows = []
    try:
        for p in range(args.max_degree + 1):
            for lbl, s in mod.isotypic_decomposition(p):
                rows.append([p, str(lbl), mod.highest_weight_space(p, lbl).dim, s.dim])
    except DecompositionError as e:
        print(f"decomposition failed: {e}", file=sys.stderr)
        return 1
    for r in rows:
        print(f"p={r[0]}  {r[1]:<16} dim M = {r[2]:<4} dim V = {r[3]}", file=sys.stderr if args.out is None else sys.stdout)
    result = {"algebra": a.name, "n": args.n,
              "isotypes": [{"degree": r[0], "label": r[1], "dim_highest_weight": r[2], "dim": r[3]} for r in rows]}
    _emit(json.dumps(result, indent=2, sort_keys=True, ensure_ascii=False), args.out)
    if args.csv:
        _write_csv(args.csv, ["degree", "label", "dim_highest_weight", "dim_isotype"], rows)
    return 0


def _config_guard(cmd: str, cfg: SweepConfig, max_basis: int) -> None:
    for a in cfg.algebras:
        for n in cfg.n_range:
            if cmd == "lqt":
                top = cfg.r + 1
                if n >= 5:
                    continue    # weight-blocked; the guard is applied to the block inside verify
            elif cmd == "lqt-pro":
                continue
            elif cmd == "stability":
                _ce_guard(a.dim, n + 1, cfg.p_max, max_basis)
                continue
            else:
                top = cfg.p_max + (1 if cmd == "lemma22" else 0)
            _ce_guard(a.dim, n, top, max_basis)


def cmd_verify(args) -> int:
    data = _read_json(args.config)
    if not isinstance(data, dict):
        raise InputError(f"{args.config}: the config must be a JSON object")
    try:
        cfg = SweepConfig.from_json(data)
    except (ConfigError, AlgebraFormatError, KeyError, TypeError, ValueError) as e:
        raise InputError(f"{args.config}: {e}")
    cfg.jobs = resolve_jobs(args.jobs)
    _config_guard(args.which, cfg, args.max_basis)
    checks, timing = run_verification(args.which, cfg)
    rep = make_report(args.which, checks, config=cfg.to_json(), timing=None if args.deterministic else timing)
    _emit(dumps(rep), args.out)
    for c in checks:
        if not c.ok:
            print(f"FAIL {c.name}: {json.dumps(jsonable(c.witness), ensure_ascii=False)}", file=sys.stderr)
        elif c.witness is not None:
            print(f"PASS {c.name}: witness {json.dumps(jsonable(c.witness), ensure_ascii=False)}", file=sys.stderr)
    return 0 if rep["verdict"] == "PASS" else 1


def cmd_hunital(args) -> int:
    pro = load_pro(args.pro, args.window)
    chk = pro.check_homomorphisms()
    if not chk.ok:
        raise InputError(f"{args.pro}: transition maps are not homomorphisms: {jsonable(chk.witness)}")
    for lv in pro.levels:
        guard(lv.dim ** (args.rmax + 1), f"{lv.dim}^{args.rmax + 1} bar words", args.max_basis)
    dec = h_unital_check_pro(pro, args.rmax)
    result = {"pro": pro.name, "window": pro.window, "rmax": args.rmax,
              "decisions": {r: {"verdict": h_unital_verdict(d), **d.to_json()} for r, d in dec.items()}}
    _emit(json.dumps(jsonable(result), indent=2, sort_keys=True), args.out)
    return 0 if all(d.is_zero for d in dec.values()) else 1


def run(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    args.max_basis = getattr(args, "max_basis", DEFAULT_MAX_BASIS)
    args.deterministic = getattr(args, "deterministic", False)
    args.jobs = getattr(args, "jobs", None)
    try:
        return {"homology": cmd_homology, "decompose": cmd_decompose, "verify": cmd_verify,
                "hunital": cmd_hunital}[args.cmd](args)
    except (InputError, ConfigError, AlgebraFormatError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
