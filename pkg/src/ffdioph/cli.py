"""Command-line front end.  Every numeric output field is an integer.

Exit codes: 0 success, 1 computational failure, 2 usage error.
"""
import argparse
import csv
import json
import sys
from fractions import Fraction

from .errors import FFDiophError, ParseError
from .field_arith import Poly, parse_field
from .laurent import LaurentBall, NormExp

GOOD_DEFAULT_EPS = "-1,-2,-3"


# -- argument helpers ---------------------------------------------------------

def _int_list(text):
    return [int(s) for s in str(text).replace(" ", "").split(",") if s]


def parse_element(field, text, prec):
    """``periodic:[a1,a2,...]``, ``liouville:c`` or a Laurent literal."""
    from .cfrac_witness import make_liouville, make_periodic
    text = text.strip()
    if text.startswith("periodic:"):
        body = text[len("periodic:"):].strip()
        if not (body.startswith("[") and body.endswith("]")):
            raise ParseError("periodic element needs a bracketed list")
        qs = [Poly.parse(field, s) for s in body[1:-1].split(",") if s.strip()]
        return make_periodic(qs, prec)
    if text.startswith("liouville:"):
        return make_liouville(int(text[len("liouville:"):]), prec, field)
    return LaurentBall.parse(field, text)


def parse_vector(field, text, prec):
    return tuple(parse_element(field, s, prec) for s in _split_top(text, ";"))


def _split_top(text, sep):
    """Split on ``sep`` outside brackets."""
    out, depth, cur = [], 0, []
    for ch in text:
        if ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
        if ch == sep and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return [s for s in out if s.strip()]


def _exp(n):
    return None if n.is_zero else n.e


def _ball_from_args(field, args, d):
    from .goodfn import BallSpec
    if args.center:
        center = tuple(LaurentBall.parse(field, s) for s in _split_top(args.center, ";"))
    else:
        center = tuple(LaurentBall.zero(field) for _ in range(d))
    if len(center) != d:
        raise ParseError("ball center has the wrong dimension")
    return BallSpec(center, (args.radius,) * d)


# -- subcommands ---------------------------------------------------------------

def cmd_field(field, args):
    yield {"p": field.p, "nu": field.nu, "k": field.k,
           "modulus": list(field.modulus) if field.modulus else []}


def cmd_cf(field, args):
    from .cfrac_witness import cf_expand, convergents
    x = parse_element(field, args.x, args.prec)
    cf = cf_expand(x, args.terms, partial=not x.exact)
    conv = convergents(cf)
    for i, (a, (p, q)) in enumerate(zip(cf.quotients, conv)):
        yield {"i": i, "a": str(a), "a_deg": a.deg if a else -1, "p": str(p), "q": str(q),
               "terminated": cf.exact_terminated}


def cmd_witness(field, args):
    from .cfrac_witness import best_witness
    x = parse_vector(field, args.x, args.prec)
    w = best_witness(x, args.bound)
    yield {"p": str(w.p), "q": [str(c) for c in w.q], "err_exp": _exp(w.err),
           "pi_plus_exp": w.pi_plus_q.e}


def cmd_reduce(field, args):
    from .polylattice import LatticeBasis, det_norm, reduce_basis
    b = LatticeBasis.parse(field, args.rows)
    red = reduce_basis(b)
    yield {"minima_exp": [m.e for m in red.minima], "delta_exp": red.minima[0].e,
           "det_exp": det_norm(b).e, "rows": [[str(v) for v in r] for r in red.rows]}


def cmd_traj(field, args):
    from .flows import bounded_scan
    x = parse_vector(field, args.x, args.prec)
    rep = bounded_scan(x, args.T, args.variant, jobs=args.jobs)
    for t, d in rep.rows:
        yield {"t": list(t), "delta_exp": _exp(d)}


def cmd_link(field, args):
    from .cfrac_witness import Witness, witness_error
    from .flows import verify_link
    x = parse_vector(field, args.x, args.prec)
    q = tuple(Poly.parse(field, s) for s in _split_top(args.q, ";"))
    p = (Poly.parse(field, args.p) if args.p is not None
         else -witness_error(x, Poly.zero(field), q).polynomial_part())
    eps = Fraction(args.eps)
    rep = verify_link(x, Witness(p, q, NormExp(None), NormExp(None)), eps)
    pr = rep.params
    yield {"m": pr.m, "r_exp": pr.r.e, "t": list(pr.t.t), "eps_num": eps.numerator,
           "eps_den": eps.denominator, "delta_exp": _exp(rep.delta),
           "witness_norm_exp": _exp(rep.witness_norm), "err_exp": _exp(rep.err),
           "gamma_num": pr.gamma.numerator, "gamma_den": pr.gamma.denominator,
           "holds": rep.holds}


def cmd_nondeg(field, args):
    from .calculus import PolyMap, nondeg_order
    f = PolyMap.parse(field, args.f, args.d)
    x0 = tuple(LaurentBall.parse(field, s) for s in _split_top(args.x0, ";"))
    l = nondeg_order(f, x0, args.lmax, include_zero=args.include_zero)
    yield {"l": l, "l_max": args.lmax}


def cmd_good(field, args):
    from .calculus import PolyMap
    from .goodfn import check_good
    f = PolyMap.parse(field, args.f, args.d)
    b = _ball_from_args(field, args, f.d)
    rep = check_good(f.components, b, Fraction(args.C), Fraction(args.alpha),
                     [NormExp(e) for e in _int_list(args.eps)], args.res)
    for e in rep.entries:
        rec = e.to_record()
        rec["sup_exp"] = _exp(rep.sup_norm)
        yield rec
    rec = {"overall": rep.overall, "eps_grid": rep.eps_grid}
    rec.update({f"c_emp_{k}": v for k, v in rep.c_emp.to_record().items()})
    yield rec


def cmd_measure(field, args):
    from .calculus import PolyMap
    from .nondiv import measure_E
    f = PolyMap.parse(field, args.f, args.d)
    b = _ball_from_args(field, args, f.d)
    mv = measure_E(f, b, tuple(_int_list(args.t)), NormExp(args.eps), args.res)
    yield {"t": _int_list(args.t), "eps_exp": args.eps, **mv.to_record()}


def cmd_impmain(field, args):
    from .calculus import PolyMap
    from .nondiv import flows_up_to, verify_impmain
    f = PolyMap.parse(field, args.f, args.d)
    b = _ball_from_args(field, args, f.d)
    C = None
    if args.C is not None:
        from .goodfn import Radical
        num, _, root = args.C.partition("^1/")
        C = Radical(Fraction(num), int(root) if root else 1)
    rep = verify_impmain(f, b, flows_up_to(f.n, args.t_max), _int_list(args.eps), C,
                         None if args.alpha is None else Fraction(args.alpha),
                         NormExp(args.rho), args.res, jobs=args.jobs)
    yield from rep.records()


def cmd_bc(field, args):
    from .calculus import PolyMap
    from .nondiv import bc_partial_sums
    f = PolyMap.parse(field, args.f, args.d)
    b = _ball_from_args(field, args, f.d)
    for q, shell, part in bc_partial_sums(f, b, Fraction(args.gamma), args.T, args.res,
                                          jobs=args.jobs):
        yield {"t_sum": q, "shell_count": shell.count, "shell_res_exp": shell.res_exp,
               "partial_count": part.count, "partial_res_exp": part.res_exp}


COMMANDS = {
    "field": cmd_field, "cf": cmd_cf, "witness": cmd_witness, "reduce": cmd_reduce,
    "traj": cmd_traj, "link": cmd_link, "nondeg": cmd_nondeg, "good": cmd_good,
    "measure": cmd_measure, "impmain": cmd_impmain, "bc": cmd_bc,
}


def build_parser():
    from .parallel import default_jobs
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", required=True, help="p or p^nu:modulus, e.g. 2^2:g^2+g+1")
    common.add_argument("--res", type=int, default=12, help="resolution cap N")
    common.add_argument("--jobs", type=int, default=default_jobs(),
                        help="worker processes (default $FFDIOPH_JOBS or 1)")
    common.add_argument("--out", choices=("json", "csv"), default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--prec", type=int, default=200, help="precision of generated elements")

    ball = argparse.ArgumentParser(add_help=False)
    ball.add_argument("--f", required=True, help="components separated by ';', e.g. 'x;x^2'")
    ball.add_argument("--d", type=int, default=None, help="number of variables")
    ball.add_argument("--center", default=None, help="ball center, coordinates separated by ';'")
    ball.add_argument("--radius", type=int, default=0, help="ball radius exponent j (radius k^-j)")

    ap = argparse.ArgumentParser(prog="ffdioph", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("field", parents=[common], help="describe a finite field")
    p = sub.add_parser("cf", parents=[common], help="continued fraction and convergents")
    p.add_argument("--x", required=True)
    p.add_argument("--terms", type=int, default=10)
    p = sub.add_parser("witness", parents=[common], help="best approximation witness")
    p.add_argument("--x", required=True, help="coordinates separated by ';'")
    p.add_argument("--bound", type=int, default=2)
    p = sub.add_parser("reduce", parents=[common], help="lattice reduction")
    p.add_argument("--rows", required=True, help="rows ';'-separated, entries ','-separated")
    p = sub.add_parser("traj", parents=[common], help="delta along a diagonal flow")
    p.add_argument("--x", required=True)
    p.add_argument("--T", type=int, default=10)
    p.add_argument("--variant", choices=("one_param", "multi"), default="one_param")
    p = sub.add_parser("link", parents=[common], help="witness to short vector link")
    p.add_argument("--x", required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--p", default=None)
    p.add_argument("--eps", default="1")
    p = sub.add_parser("nondeg", parents=[common], help="nondegeneracy order")
    p.add_argument("--f", required=True)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--x0", default="0")
    p.add_argument("--lmax", type=int, default=6)
    p.add_argument("--include-zero", action="store_true")
    p = sub.add_parser("good", parents=[common, ball], help="(C, alpha)-good check")
    p.add_argument("--C", default="1")
    p.add_argument("--alpha", default="1")
    p.add_argument("--eps", default=GOOD_DEFAULT_EPS, help="eps exponents, e.g. -1,-2,-3")
    p = sub.add_parser("measure", parents=[common, ball], help="measure of {delta < eps}")
    p.add_argument("--t", required=True, help="flow exponents, e.g. 1,1")
    p.add_argument("--eps", type=int, required=True, help="eps exponent")
    p = sub.add_parser("impmain", parents=[common, ball], help="measure bound sweep")
    p.add_argument("--t-max", type=int, default=4)
    p.add_argument("--eps", default=GOOD_DEFAULT_EPS)
    p.add_argument("--C", default=None, help="rational or radical 'v^1/s'")
    p.add_argument("--alpha", default=None)
    p.add_argument("--rho", type=int, default=0, help="rho exponent")
    p = sub.add_parser("bc", parents=[common, ball], help="Borel-Cantelli partial sums")
    p.add_argument("--gamma", default="1")
    p.add_argument("--T", type=int, default=6)
    return ap


def _emit(records, fmt, stream):
    records = list(records)
    if fmt == "json":
        for r in records:
            stream.write(json.dumps(r, separators=(",", ":")) + "\n")
        return
    cols = []
    for r in records:
        for k in r:
            if k not in cols:
                cols.append(k)
    w = csv.DictWriter(stream, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    for r in records:
        w.writerow({k: json.dumps(v, separators=(",", ":")) if isinstance(v, (list, bool))
                    or v is None else v for k, v in r.items()})


# flags whose values may start with '-', such as "--eps -1,-2"
_SIGNED_FLAGS = {"--eps", "--rho", "--center", "--x", "--x0", "--p", "--q", "--rows"}


def _join_signed(argv):
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _SIGNED_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def run(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    ap = build_parser()
    argv = _join_signed(list(sys.argv[1:] if argv is None else argv))
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        field = parse_field(args.field)
    except (FFDiophError, ValueError) as exc:
        stderr.write(f"ffdioph: invalid field {args.field!r}: {exc}\n")
        return 2
    try:
        records = list(COMMANDS[args.command](field, args))
    except ParseError as exc:
        stderr.write(f"ffdioph: {exc}\n")
        return 2
    except (FFDiophError, ArithmeticError, ValueError) as exc:
        stderr.write(f"ffdioph: {type(exc).__name__}: {exc}\n")
        return 1
    _emit(records, args.out, stdout)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
