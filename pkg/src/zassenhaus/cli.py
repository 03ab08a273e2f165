"""Command-line driver.  Every run writes one JSON report document.

Exit codes: 0 all checks passed, 1 some check failed, 2 configuration or guard error.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import re
import sys

from .field import FieldElement, GF, deserialize, field
from .liealg import ALGEBRA_ALIASES, HypothesisError, algebra_from_name, check_hypotheses
from .poly import DegreeBoundError, RestrictionTheoremViolation
from .reports import Report
from .zvariety import GuardError, PreconditionError

SCHEMA = 1
ALGEBRAS = tuple(ALGEBRA_ALIASES)


class ConfigError(ValueError):
    pass


# -- parsing helpers -------------------------------------------------------------------

_TERM = re.compile(r"([+-]?)\s*(\d*)\s*(x(?:\^(\d+))?)?")


def parse_element(text: str, K: GF) -> FieldElement:
    """Integers, serialized elements ("p^m:[c0,...]") or polynomials in the generator x, e.g. "2x+1"."""
    text = text.strip()
    if ":" in text:
        a = deserialize(text)
        if a.field is not K:
            raise ConfigError(f"{text} is not an element of F_{K.q}")
        return a
    if not text:
        raise ConfigError("empty field element")
    acc = K.zero
    pos = 0
    x = K.gen()
    compact = text.replace(" ", "")
    while pos < len(compact):
        m = _TERM.match(compact, pos)
        if not m or m.end() == pos:
            raise ConfigError(f"cannot parse field element {text!r}")
        sign, coef, var, exp = m.groups()
        c = int(coef) if coef else 1
        if not coef and not var:
            raise ConfigError(f"cannot parse field element {text!r}")
        term = K.one * c
        if var:
            term = term * x ** (int(exp) if exp else 1)
        acc = acc - term if sign == "-" else acc + term
        pos = m.end()
    return acc


def parse_functional(alg, text: str, K: GF):
    from .zvariety import Functional
    vals = {}
    for part in filter(None, (s.strip() for s in text.split(","))):
        if "=" not in part:
            raise ConfigError(f"expected label=value in {part!r}; labels are {alg.labels}")
        label, value = part.split("=", 1)
        label = label.strip()
        if label not in alg.labels:
            raise ConfigError(f"unknown basis label {label!r}; labels are {alg.labels}")
        vals[label] = parse_element(value, K)
    codes = [0] * alg.dim
    for label, v in vals.items():
        codes[alg.index(label)] = v.code
    return Functional.from_codes(alg, codes, K)


def _field_for_q(p: int, q: int | None) -> GF:
    q = q or p
    m = 0
    x = q
    while x % p == 0 and x > 1:
        x //= p
        m += 1
    if x != 1 or m == 0:
        raise ConfigError(f"q={q} is not a power of p={p}")
    return field(p, m)


def _algebra(args):
    try:
        return algebra_from_name(args.algebra, args.p)
    except HypothesisError as exc:
        raise ConfigError(str(exc)) from exc


# -- subcommands -----------------------------------------------------------------------

def cmd_hypotheses(args):
    kind, n = ALGEBRA_ALIASES[args.algebra]
    rep = check_hypotheses(kind, args.p, n)
    return [Report("hypotheses", {"algebra": args.algebra, "p": args.p}, rep.ok,
                   None if rep.ok else {"failed": rep.failed()}, {}, ["(H1) (H2) (H3)"], rep.to_json())]


def cmd_center_basis(args):
    from .center import center_basis
    from .pbw import is_central
    alg = _algebra(args)
    cb = center_basis(alg, args.degree)
    ok = all(is_central(b) for b in cb.basis)
    return [Report("center-basis", {"algebra": alg.name, "p": alg.p, "degree": args.degree}, ok, None,
                   {"Z": cb.dim, "in_Zp": sum(cb.in_pcenter), "in_UG": sum(cb.in_group_invariants)},
                   ["Z = U^g"], cb.to_json())]


def cmd_veldkamp(args):
    from .center import veldkamp_verify
    alg = _algebra(args)
    return [veldkamp_verify(alg, d) for d in range(args.degree + 1)]


def cmd_hc_identities(args):
    from .center import hc_identities_verify
    return [hc_identities_verify(_algebra(args), args.degree)]


def cmd_sl2_relation(args):
    from .center import sl2_presentation_verify
    if args.p % 2 == 0 or args.p > 7:
        raise ConfigError("sl2-relation needs an odd prime p <= 7")
    return [sl2_presentation_verify(args.p)]


def cmd_factor(args):
    from .center import eta_F0_factor_verify
    if args.algebra not in ("sl2", "gl2") and not args.long:
        raise ConfigError("factor-eta-f0 runs on sl2 and gl2; pass --long for larger algebras")
    return [eta_F0_factor_verify(_algebra(args))]


def cmd_jordan(args):
    from .suite import jordan_exhaustive
    from .zvariety import check_jordan, jordan_decompose
    alg = _algebra(args)
    K = _field_for_q(args.p, args.q)
    if args.chi:
        pair = jordan_decompose(parse_functional(alg, args.chi, K))
        checks = check_jordan(pair)
        return [Report("jordan", {"algebra": alg.name, "p": alg.p, "q": K.q}, all(checks.values()),
                       None, checks, ["g.chi_s in t*, g.chi_n in u*"], pair.to_json())]
    if K.q ** alg.dim > 10**5:
        raise ConfigError("exhaustive Jordan check is limited to 10^5 functionals")
    if K.m != 1:
        raise ConfigError("the exhaustive Jordan check runs over the prime field; give --chi for extensions")
    return [jordan_exhaustive(alg.kind, alg.n, alg.p)]


def cmd_zpoint_check(args):
    from .zvariety import zpoint_membership
    alg = _algebra(args)
    K = _field_for_q(args.p, args.q)
    if not args.chi or not args.lam:
        raise ConfigError("zpoint-check needs --chi and --lam")
    chi = parse_functional(alg, args.chi, K)
    lam = tuple(parse_element(v, K) for v in args.lam.split(","))
    if len(lam) != alg.rank:
        raise ConfigError(f"--lam needs {alg.rank} values (on the Cartan basis)")
    res = zpoint_membership(chi, lam)
    return [Report("zpoint-membership", {"algebra": alg.name, "p": alg.p, "q": K.q}, res["member"],
                   None if res["witness"] is None else repr(res["witness"]), {},
                   ["lambda(h)^p - lambda(h^[p]) = w(chi_s')(h)^p"],
                   {"chi": chi.to_json(), "lambda": [str(v) for v in lam]})]


def cmd_param_check(args):
    from .suite import geometry_reports
    alg = _algebra(args)
    K = _field_for_q(args.p, args.q)
    return geometry_reports(alg.kind, alg.n, alg.p, K.q, samples=args.samples, seed=args.seed,
                            workers=args.workers)


def cmd_enumerate(args):
    from .zvariety import Functional, bijection_report, enumerate_points, rational_param, rss_tests, zpoint_membership
    alg = _algebra(args)
    K = _field_for_q(args.p, args.q)
    mode = args.mode or "both"
    if mode not in ("O", "Zrss", "both"):
        raise ConfigError("--mode must be O, Zrss or both")
    if mode == "both":
        reports = [bijection_report(alg, K.q, workers=args.workers)]
    else:
        count, _ = enumerate_points(alg, mode, K.q, workers=args.workers)
        reports = [Report("enumerate", {"algebra": alg.name, "p": alg.p, "q": K.q, "mode": mode}, True,
                          None, {mode: count})]
    if args.points_out:
        with open(args.points_out, "w") as fh:
            for idx in range(K.q ** alg.dim):
                codes, x = [], idx
                for _ in range(alg.dim):
                    x, c = divmod(x, K.q)
                    codes.append(c)
                chi = Functional.from_codes(alg, codes, K)
                if not rss_tests(chi)["is_in_O"]:
                    continue
                zp = rational_param(chi)
                w = zpoint_membership(zp.chi, zp.lam_canonical)["witness"]
                fh.write(json.dumps(zp.to_json(w), sort_keys=True) + "\n")
    return reports


def cmd_baby_verma(args):
    from .suite import baby_verma_reports
    if args.algebra != "sl2":
        raise ConfigError("the baby Verma sweep runs on sl2")
    K = _field_for_q(args.p, args.q)
    return baby_verma_reports(args.p, K.q, args.degree)


def cmd_suite(args):
    from .suite import CRITERIA
    out = []
    for name, fn in CRITERIA:
        reps = fn(workers=args.workers) if name.startswith("7") else fn()
        for r in reps:
            r.params = {"criterion": name, **r.params}
        out.extend(reps)
    return out


COMMANDS = {
    "hypotheses": (cmd_hypotheses, "check the standing hypotheses for (algebra, p)"),
    "center-basis": (cmd_center_basis, "basis of the centre up to a filtration degree"),
    "veldkamp": (cmd_veldkamp, "compare dim Z with the free-basis count, degree by degree"),
    "hc-identities": (cmd_hc_identities, "eta o Phi = Psi o eta and the gr compatibility"),
    "sl2-relation": (cmd_sl2_relation, "the defining relation of Z(U(sl2))"),
    "factor-eta-f0": (cmd_factor, "eta(F0) as a product of Harish-Chandra lifts"),
    "jordan": (cmd_jordan, "Jordan decomposition of a functional (or exhaustive check)"),
    "zpoint-check": (cmd_zpoint_check, "fibre-product membership of (chi, lambda)"),
    "param-check": (cmd_param_check, "rational parametrization: membership, bijection, star action"),
    "enumerate": (cmd_enumerate, "count points of O and Z_rss over F_q"),
    "baby-verma": (cmd_baby_verma, "central characters on baby Verma modules"),
    "suite": (cmd_suite, "run the full acceptance battery"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zassenhaus", description="Centres of U(g) in characteristic p.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--algebra", choices=ALGEBRAS, default="sl2")
        sp.add_argument("--p", type=int, default=3)
        sp.add_argument("--q", type=int, default=None)
        sp.add_argument("--degree", type=int, default=4)
        sp.add_argument("--mode", default=None)
        sp.add_argument("--out", default=None, help="write the report here instead of stdout")
        sp.add_argument("--workers", type=int, default=1)
        sp.add_argument("--chi", default=None, help="functional as label=value pairs, e.g. 'h=x+1,f=2'")
        sp.add_argument("--lam", default=None, help="values on the Cartan basis, comma separated")
        sp.add_argument("--samples", type=int, default=100)
        sp.add_argument("--seed", type=int, default=1)
        sp.add_argument("--points-out", default=None, help="JSON lines of rational points (enumerate)")
        sp.add_argument("--long", action="store_true", help="allow long-running configurations")
        sp.add_argument("--no-envelope", action="store_true", help="omit the timestamp envelope")
    return parser


def _config(args) -> dict:
    keys = ("algebra", "p", "q", "degree", "mode", "workers", "chi", "lam", "samples", "seed")
    return {k: getattr(args, k) for k in keys}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    fn = COMMANDS[args.command][0]
    doc = {"schema": SCHEMA, "command": args.command, "config": _config(args)}
    try:
        if args.workers < 1:
            raise ConfigError("--workers must be positive")
        if args.command != "hypotheses":
            from .field import is_prime
            if not is_prime(args.p) or args.p > 13:
                raise ConfigError("--p must be a prime <= 13")
        reports = fn(args)
        code = 0 if all(r.status != "fail" for r in reports) else 1
        doc["results"] = [r.to_json() for r in reports]
    except (ConfigError, HypothesisError, GuardError, DegreeBoundError, PreconditionError, ValueError) as exc:
        reports = []
        doc["results"] = []
        doc["error"] = {"kind": type(exc).__name__, "message": str(exc)}
        code = 2
    except RestrictionTheoremViolation as exc:
        reports = []
        doc["results"] = []
        doc["error"] = {"kind": type(exc).__name__, "message": str(exc)}
        code = 1
    doc["exit_code"] = code
    if not args.no_envelope:
        doc["envelope"] = {"created": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")}
    text = json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
        for r in reports:
            print(r.line())
        if "error" in doc:
            print(f"error: {doc['error']['message']}", file=sys.stderr)
    else:
        print(text)
        if "error" in doc:
            print(f"error: {doc['error']['message']}", file=sys.stderr)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
