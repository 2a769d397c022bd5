"""pvconv command-line front end.

Every JSON artifact embeds the full run configuration; output is
byte-deterministic (sorted keys, floats as "%.12g", LF line endings).
Exit status: 0 success, 1 computation error, 2 usage error.
"""

from __future__ import annotations

import argparse
import ast
import json
import math
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import numpy as np

from . import __version__, acceptance, betanet, contfrac, gibbs, iset, measures, multifractal, transmat
from .algebraic import AlgebraicNumber, FieldError, RationalCombination, parse_field


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    """Usage errors become a single ``error:`` line and exit status 2."""

    def error(self, message):
        raise UsageError(message)


# -- serialization -------------------------------------------------------------

def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return [_plain(v) for v in x.tolist()]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x) or math.isinf(x):
            return str(x)
        return _FLOAT_MARK % ("%.12g" % x)
    if isinstance(x, (Fraction, AlgebraicNumber, RationalCombination)):
        return str(x)
    if x is None or isinstance(x, str):
        return x
    return str(x)


_FLOAT_MARK = "\u0000f%s\u0000"
_FLOAT_RE = re.compile(r'"\\u0000f([^"\\]*)\\u0000"')


def emit_json(obj):
    """Sorted keys, two-space indent, floats written with "%.12g"."""
    text = json.dumps(_plain(obj), sort_keys=True, indent=2, allow_nan=False)
    return _FLOAT_RE.sub(r"\1", text) + "\n"


def emit_csv(header, rows):
    out = [",".join(header)]
    for r in rows:
        out.append(",".join(_cell(v) for v in r))
    return "\n".join(out) + "\n"


def _cell(v):
    if isinstance(v, (float, np.floating)):
        return "%.12g" % float(v)
    return str(v)


def emit_dot(iset_obj, edges):
    return iset.export_automaton(iset_obj, edges)


def write(path, text):
    if path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write(text)


def run_config(args):
    cfg = {}
    for k, v in sorted(vars(args).items()):
        if k == "func":
            continue
        cfg[k] = v.descriptor() if hasattr(v, "descriptor") else v
    cfg["version"] = __version__
    return cfg


# -- argument types ------------------------------------------------------------

def field_type(text):
    try:
        return parse_field(text)
    except (FieldError, ValueError) as exc:
        raise argparse.ArgumentTypeError("malformed field descriptor %r: %s" % (text, exc))


def prob_type(text):
    try:
        p = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError("malformed probability %r" % text)
    if not 0 < p < 1:
        raise argparse.ArgumentTypeError("probability must lie in (0, 1)")
    return text


def int_list(text):
    try:
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError("expected comma-separated integers, got %r" % text)


def _resolve_p(args):
    """Exact rational when the input is a fraction or --exact is given, else float."""
    text = args.p
    decimal = any(c in text for c in ".eE")
    if decimal and not args.exact:
        return float(text), False
    return Fraction(text), True


def _parse_word(text):
    text = text.strip()
    if "," in text:
        return tuple(int(s) for s in text.split(",") if s.strip())
    if not text.isdigit():
        raise UsageError("word must be digits or comma-separated letters")
    return tuple(int(c) for c in text)


_NAMES = {"phi": (1 + 5 ** 0.5) / 2, "beta": None, "b": None, "pi": math.pi, "e": math.e}


def eval_expr(text, beta):
    """Evaluate an arithmetic expression with names phi/beta/b (safe, via ast)."""
    names = dict(_NAMES, beta=beta, b=beta)
    ops = {ast.Add: lambda a, b: a + b, ast.Sub: lambda a, b: a - b,
           ast.Mult: lambda a, b: a * b, ast.Div: lambda a, b: a / b,
           ast.Pow: lambda a, b: a ** b}

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id in names:
            return float(names[node.id])
        if isinstance(node, ast.BinOp) and type(node.op) in ops:
            return ops[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        raise UsageError("unsupported expression %r" % text)

    try:
        return ev(ast.parse(text.strip(), mode="eval"))
    except SyntaxError:
        raise UsageError("malformed expression %r" % text)


def _split_top(text):
    """Split on commas not nested in parentheses."""
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    parts.append(cur)
    return parts


# -- subcommands -----------------------------------------------------------------

def cmd_iset(args):
    f = args.field
    params = iset.DigitParams.make(f, args.d, args.b)
    I, edges = iset.build_iset(f, params, max_iters=args.max_iters, max_size=args.max_size)
    out = {
        "config": run_config(args),
        "field": f.descriptor(),
        "alpha_mu": float(params.alpha_mu),
        "count": len(I),
        "iterations": I.iterations,
        "elements": [{"index": n, "coeffs": list(e.coeffs), "text": str(e), "decimal": float(e.to_mp())}
                     for n, e in enumerate(I)],
        "edges": [{"from": e.h, "digit_i": e.i, "to": e.k, "digit_j": e.j} for e in edges],
    }
    if args.dot:
        write(args.dot, emit_dot(I, edges))
    if args.json or not args.dot:
        write(args.json or "-", emit_json(out))


def cmd_matrices(args):
    f = args.field
    probs, exact = transmat.parse_probs(args.probs, True if args.exact else None)
    transmat.check_probs(probs, exact)
    params = iset.DigitParams.make(f, args.d, args.b)
    I, edges = iset.build_iset(f, params)
    fam = transmat.build_matrices(I, edges, probs, exact)
    out = {
        "config": run_config(args),
        "field": f.descriptor(),
        "exact": exact,
        "states": [str(e) for e in I],
        "matrices": {str(i): transmat.to_strings(M) for i, M in enumerate(fam.matrices)},
    }
    write(args.json, emit_json(out))


def _system(args):
    if args.multinacci:
        return betanet.multinacci_adapted_system(args.multinacci)
    if args.erdos:
        return betanet.scaled_erdos_net()
    if args.field is None:
        raise UsageError("one of --multinacci, --erdos or --field is required")
    return betanet.adapted_system(args.field)


def cmd_net(args):
    system = _system(args)
    words = betanet.net_words(system, args.depth)
    rows = []
    for w in words:
        iv = system.interval_of_word(w)
        rows.append({"word": list(w), "left": str(iv.left), "left_decimal": float(iv.left),
                     "length": str(iv.length), "length_decimal": float(iv.length)})
    out = {
        "config": run_config(args),
        "system": system.name,
        "field": system.field.descriptor(),
        "letters": system.words,
        "partition_ok": system.check_partition(),
        "intervals": rows,
    }
    write(args.json, emit_json(out))


def _measure(args):
    p, exact = _resolve_p(args)
    if args.model == "erdos":
        return measures.ErdosModel(p, exact).mu
    if args.model == "erdos-tilde-star":
        return measures.ErdosModel(p, exact).mu_tilde_star
    if args.model == "mu-star":
        return measures.MultinacciModel(args.m, p, exact).measure()
    if args.model == "mu":
        return measures.multinacci_mu(args.m, p, exact).measure
    raise UsageError("unknown model %r" % args.model)


def cmd_measure(args):
    meas = _measure(args)
    word = _parse_word(args.word)
    if any(c < 0 or c >= meas.alphabet for c in word):
        raise UsageError("letters must lie in 0..%d" % (meas.alphabet - 1))
    v = meas(word)
    if args.json:
        write(args.json, emit_json({"config": run_config(args), "word": list(word), "value": v,
                                     "decimal": float(v)}))
    else:
        write("-", (str(v) if isinstance(v, Fraction) else "%.12g" % float(v)) + "\n")


def cmd_oracle(args):
    f = args.field
    parts = _split_top(args.interval)
    if len(parts) != 2:
        raise UsageError("interval must be 'a,b'")
    a, b = (eval_expr(s, f.beta_float) for s in parts)
    if not a < b:
        raise UsageError("need a < b")
    probs, _ = transmat.parse_probs(args.probs, False)
    transmat.check_probs(probs, False)
    enc = measures.brute_force_enclosure(f, len(probs), probs, (a, b), args.digits, budget=args.budget)
    out = {"config": run_config(args), "interval": [a, b], "lo": enc.lo, "hi": enc.hi,
           "width": enc.hi - enc.lo, "straddling_states": enc.straddling_states}
    write(args.json, emit_json(out))


def _alpha(text):
    decimal = any(c in text for c in ".eE")
    return float(text) if decimal else Fraction(text)


def cmd_cf(args):
    tokens = [s.strip() for s in args.digits.split(",") if s.strip()]
    tail = None
    if tokens and tokens[-1] in ("...", "inf"):
        tail = tokens.pop()
    try:
        digits = tuple(int(s) for s in tokens)
    except ValueError:
        raise UsageError("digits must be integers, optionally ending in '...' or 'inf'")
    if not digits:
        raise UsageError("need at least a_0")
    alpha = _alpha(args.alpha)
    try:
        params = contfrac.CFParams(alpha, args.kappa, digits)
    except contfrac.CFError as exc:
        raise UsageError(str(exc))
    n = len(digits) - 1
    out = {"config": run_config(args), "n": n, "rho": params.rho}
    if tail == "...":
        # the digits after a_0 repeat periodically
        if n < 1:
            raise UsageError("periodic tail needs a_1..a_n")
        head = contfrac.CFParams(float(alpha), args.kappa, digits)
        out["value"] = contfrac.cf_limit(head, stream=contfrac.periodic(list(digits[1:])), tol=args.tol)
        out["mode"] = "periodic"
    elif tail == "inf":
        out["value"] = contfrac.cf_limit(params)
        out["mode"] = "infinite_last_digit"
    else:
        st, _ = contfrac.run(params)
        out["value"] = st.p / st.q
        out["mode"] = "finite"
        out["p_n"], out["q_n"] = st.p, st.q
        if n >= 1:
            ds = contfrac.deltas(params)
            out["delta"] = ds
            if params.rho < 1:
                out["gap_bound"] = [contfrac.gap_bound(params, k) for k in range(1, n + 1)]
            else:
                out["regular_bound"] = [float(contfrac.regular_bound(params, k, include_a0=False)) for k in range(1, n + 1)]
        if args.vector:
            x, y = args.vector
            out["vector_value"] = contfrac.cf_eval_vector(params, n, x, y)
    write(args.json, emit_json(out))


def _vector(text):
    try:
        x, y = (Fraction(s) for s in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected 'x,y'")
    return (x, y)


def cmd_gibbs(args):
    if args.model != "multinacci":
        raise UsageError("only the multinacci model has a limit potential")
    p, exact = _resolve_p(args)
    model = measures.MultinacciModel(args.m, p, exact)
    rep = gibbs.convergence(model, args.nmax, tuple(args.window), seed=args.seed)
    sw = gibbs.sandwich(model, rep.g, args.nmax)
    if args.report == "csv":
        rows = [(n, g, k) for n, g, k in zip(rep.ns, rep.g, rep.K)]
        write(args.out, emit_csv(["n", "g", "K"], rows))
        return
    out = {"config": run_config(args), "report": rep.as_dict(), "rho": model.rho,
           "sandwich": [vars(s) for s in sw]}
    write(args.out, emit_json(out))


def cmd_probe(args):
    p, exact = _resolve_p(args)
    model = measures.MultinacciModel(args.m, p, exact)
    ns = list(range(args.nmin, args.nmax + 1))
    rs = gibbs.counterexample_probe(model, ns)
    out = {"config": run_config(args), "letter": gibbs.probe_letter(args.m),
           "r": [{"n": n, "r": r} for n, r in rs], "floor": gibbs.fitted_floor(rs)}
    write(args.json, emit_json(out))


def _net_measure(args):
    p = float(Fraction(args.p))
    if args.model == "erdos":
        return multifractal.erdos_net(p)
    if args.model == "erdos-tilde-star":
        return multifractal.erdos_net(p, "tilde_star")
    if args.model == "mu-star":
        return multifractal.mu_star_net(args.m, p)
    if args.model == "mu":
        return multifractal.multinacci_mu_net(args.m, p)
    if args.model == "lebesgue":
        return multifractal.lebesgue_net(multifractal.multinacci_exponents(args.m),
                                         betanet.multinacci_field(args.m).beta_float)
    raise UsageError("unknown model %r" % args.model)


def cmd_spectrum(args):
    if args.qmin >= args.qmax or args.qstep <= 0:
        raise UsageError("need qmin < qmax and qstep > 0")
    nm = _net_measure(args)
    qs = multifractal.q_grid(args.qmin, args.qmax, args.qstep)
    est = multifractal.spectrum(nm, args.depth, qs, args.window)
    if args.csv:
        write(args.csv, emit_csv(["q", "tau", "err"], zip(est.q, est.tau, est.err)))
    if args.csv_f:
        write(args.csv_f, emit_csv(["alpha", "f"], zip(est.alpha, est.f)))
    if args.json or not (args.csv or args.csv_f):
        out = {"config": run_config(args), "meta": est.meta,
               "alpha_min": est.alpha_min, "alpha_max": est.alpha_max,
               "alpha_min_err": est.alpha_min_err, "alpha_max_err": est.alpha_max_err,
               "q": est.q, "tau": est.tau, "err": est.err, "hull_tau": est.hull_tau,
               "alpha": est.alpha, "f": est.f}
        if args.qmin <= -8 and args.qmax >= -2:
            out["kink_scan"] = multifractal.kink_scan(est)
        write(args.json or "-", emit_json(out))


def cmd_domain(args):
    p = Fraction(args.p)
    if not 0 < p < 1:
        raise UsageError("need 0 < p < 1")
    out = multifractal.erdos_domain_check(p, args.depth, estimate=not args.no_estimate)
    out["config"] = run_config(args)
    write(args.json, emit_json(out))


def _run_one(number):
    crit = next(c for c in acceptance.CRITERIA if c.number == number)
    res = crit()
    return res.line(), res.passed


def cmd_accept(args):
    nums = [c.number for c in acceptance.CRITERIA]
    if args.only:
        bad = [n for n in args.only if n not in nums]
        if bad:
            raise UsageError("unknown criterion %s" % bad)
        nums = [n for n in nums if n in args.only]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            results = list(ex.map(_run_one, nums))
    else:
        results = []
        for n in nums:
            results.append(_run_one(n))
            print(results[-1][0], flush=True)
    if args.jobs > 1:
        for line, _ in results:
            print(line, flush=True)
    failed = sum(1 for _, ok in results if not ok)
    print("%d/%d criteria passed" % (len(results) - failed, len(results)), flush=True)
    return 1 if failed else 0


# -- parser ----------------------------------------------------------------------

def build_parser():
    ap = Parser(prog="pvconv", description="Bernoulli convolutions for PV numbers: "
                "translation sets, matrices, nets, potentials and spectra.")
    ap.add_argument("--version", action="version", version="pvconv " + __version__)
    sub = ap.add_subparsers(dest="command", metavar="command", parser_class=Parser)
    sub.required = True

    def common(p, seed=True):
        p.add_argument("--jobs", type=int, default=1, help="parallel workers (sweeps only)")
        if seed:
            p.add_argument("--seed", type=int, default=0, help="seed for randomized sweeps")

    p = sub.add_parser("iset", help="translation set I_(beta,d) and its automaton")
    p.add_argument("--field", type=field_type, required=True, help='descriptor, e.g. "x^2-5x-3@5.5"')
    p.add_argument("--d", type=int, required=True, help="digit count")
    p.add_argument("--b", type=int, default=None, help="b with b-1 < beta <= b (default: computed)")
    p.add_argument("--max-iters", type=int, default=64)
    p.add_argument("--max-size", type=int, default=4096)
    p.add_argument("--dot", default=None, help="write the automaton as DOT")
    p.add_argument("--json", default=None, help="write JSON (default stdout)")
    common(p, seed=False)
    p.set_defaults(func=cmd_iset)

    p = sub.add_parser("matrices", help="transition matrices M_0..M_{b-1}")
    p.add_argument("--field", type=field_type, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--b", type=int, default=None)
    p.add_argument("--probs", required=True, help='e.g. "1/6,1/6,1/6,1/6,1/6,1/6"')
    p.add_argument("--exact", action="store_true", help="convert decimals to exact rationals")
    p.add_argument("--json", default="-")
    common(p, seed=False)
    p.set_defaults(func=cmd_matrices)

    p = sub.add_parser("net", help="basic intervals of an adapted system")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--multinacci", type=int, default=None, metavar="M")
    g.add_argument("--erdos", action="store_true", help="scaled golden-ratio net on [0, beta)")
    g.add_argument("--field", type=field_type, default=None, help="finite-type or integer beta")
    p.add_argument("--depth", type=int, default=1)
    p.add_argument("--json", default="-")
    common(p, seed=False)
    p.set_defaults(func=cmd_net)

    models = ["erdos", "erdos-tilde-star", "mu-star", "mu"]
    p = sub.add_parser("measure", help="value of a basic interval")
    p.add_argument("--model", choices=models, default="erdos")
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--p", type=prob_type, required=True)
    p.add_argument("--word", required=True, help='letters, e.g. "200" or "0,12,3"')
    p.add_argument("--exact", action="store_true")
    p.add_argument("--json", default=None)
    common(p, seed=False)
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("oracle", help="brute-force enclosure of mu([a, b))")
    p.add_argument("--interval", required=True, help='e.g. "1,phi" or "0,1/beta"')
    p.add_argument("--field", type=field_type, default=parse_field("x^2-x-1@1.6"))
    p.add_argument("--probs", default="0.5,0.5")
    p.add_argument("--digits", type=int, default=24)
    p.add_argument("--budget", type=int, default=1 << 24)
    p.add_argument("--json", default="-")
    common(p, seed=False)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("cf", help="generalized continued fraction")
    p.add_argument("--alpha", required=True)
    p.add_argument("--kappa", type=int, choices=[0, 1], default=0)
    p.add_argument("--digits", required=True,
                   help="a_0,...,a_n; end with 'inf' (last digit to infinity) or '...' (repeat a_1..a_n)")
    p.add_argument("--vector", type=_vector, default=None, help="terminal vector x,y")
    p.add_argument("--tol", type=float, default=1e-13)
    p.add_argument("--json", default="-")
    common(p, seed=False)
    p.set_defaults(func=cmd_cf)

    p = sub.add_parser("gibbs", help="sup-norm gaps of the n-step potentials")
    p.add_argument("--model", default="multinacci", choices=["multinacci"])
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--p", type=prob_type, required=True)
    p.add_argument("--nmax", type=int, default=14)
    p.add_argument("--window", type=int, nargs=2, default=[6, 14], metavar=("LO", "HI"))
    p.add_argument("--report", choices=["json", "csv"], default="json")
    p.add_argument("--exact", action="store_true")
    p.add_argument("--out", default="-")
    common(p)
    p.set_defaults(func=cmd_gibbs)

    p = sub.add_parser("probe", help="non-Gibbs probe r_n for m >= 3")
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--p", type=prob_type, required=True)
    p.add_argument("--nmin", type=int, default=4)
    p.add_argument("--nmax", type=int, default=12)
    p.add_argument("--exact", action="store_true")
    p.add_argument("--json", default="-")
    common(p, seed=False)
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("spectrum", help="L^q spectrum and its Legendre transform")
    p.add_argument("--model", choices=models + ["lebesgue"], default="erdos")
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--p", type=prob_type, default="1/2")
    p.add_argument("--depth", type=int, default=14)
    p.add_argument("--qmin", type=float, default=-20.0)
    p.add_argument("--qmax", type=float, default=20.0)
    p.add_argument("--qstep", type=float, default=0.25)
    p.add_argument("--window", type=int, default=4)
    p.add_argument("--csv", default=None, help='tau table ("q,tau,err")')
    p.add_argument("--csv-f", default=None, help='f(alpha) table ("alpha,f")')
    p.add_argument("--json", default=None)
    common(p, seed=False)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("domain", help="Erdos multifractal-domain disconnection check")
    p.add_argument("--p", type=prob_type, required=True)
    p.add_argument("--depth", type=int, default=14)
    p.add_argument("--no-estimate", action="store_true")
    p.add_argument("--json", default="-")
    common(p, seed=False)
    p.set_defaults(func=cmd_domain)

    p = sub.add_parser("accept", help="run the acceptance criteria")
    p.add_argument("--suite", choices=["primary"], default="primary")
    p.add_argument("--only", type=int_list, default=None, help="comma-separated criterion numbers")
    common(p, seed=False)
    p.set_defaults(func=cmd_accept)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        if getattr(args, "jobs", 1) < 1:
            raise UsageError("--jobs must be >= 1")
        rc = args.func(args)
        return rc or 0
    except UsageError as exc:
        print("error: %s" % _one_line(exc), file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError, RuntimeError, KeyError, StopIteration) as exc:
        print("error: %s: %s" % (type(exc).__name__, _one_line(exc)), file=sys.stderr)
        return 1
    except OSError as exc:
        print("error: %s" % _one_line(exc), file=sys.stderr)
        return 1


def _one_line(exc):
    return " ".join(str(exc).split()) or type(exc).__name__


if __name__ == "__main__":
    sys.exit(main())
