"""Command-line front end: verification campaigns with JSON reports.

Exit codes: 0 when every check passes, 1 when any check fails, 2 for usage
or configuration errors.
"""

import argparse
import json
import os
import sys
from pathlib import Path

from . import descent as ds
from . import nikshych as nk
from . import orders
from .exactfield import FieldTower, parse_literal
from .hopfcore import Report, verify_hopf_axioms

OUT_DIR_ENV = "HOPFORDERS_OUT_DIR"
MUTATIONS = {f"omega-{part}": part for part in nk.OMEGA_PARTS}


class ConfigError(Exception):
    pass


def cmd_verify_hopf(p: int, mutate=None, jobs=1) -> Report:
    nk.check_p(p)
    rep = Report("verify-hopf", {"p": p, "mutate": mutate})
    A = nk.build_A(p)
    rep.extend(verify_hopf_axioms(A, jobs=jobs), prefix="A/")
    H = nk.build_H(p, mutate=MUTATIONS[mutate] if mutate else None)
    axioms = verify_hopf_axioms(H, jobs=jobs)
    rep.extend(axioms, prefix="H/")
    rep.parameters["dim"] = H.dim
    if not axioms.ok:
        # the remaining suites assume a Hopf algebra
        return rep
    D = nk.build_H_dual_tables(p)
    rep.extend(nk.verify_dual_coincidence(p, H, D), prefix="dual/")
    rep.extend(nk.verify_characters(p, H, D), prefix="characters/")
    rep.extend(nk.verify_self_duality(p, H, D), prefix="self_duality/")
    rep.extend(nk.verify_automorphisms(p, H), prefix="automorphisms/")
    return rep


def cmd_verify_order(p: int, jobs=1) -> Report:
    nk.check_p(p)
    H = nk.verified_H(p, with_pi=True, jobs=jobs)
    sub = orders.verify_nikshych_order(p, orders.nikshych_order(p, H))
    rep = Report("verify-order", dict(sub.parameters, p=p))
    rep.extend(sub)
    return rep


def cmd_larson(p: int, alpha: str) -> Report:
    nk.check_p(p)
    sub = orders.verify_larson(p, alpha)
    rep = Report("larson", dict(sub.parameters, p=p, alpha=alpha))
    rep.extend(sub)
    rep.parameters["ideal_condition"] = orders.check_ideal_condition(p, alpha)
    return rep


def _read_w(args, tower: FieldTower):
    if args.w is not None and args.w_file is not None:
        raise ConfigError("give at most one of --w and --w-file")
    if args.w is not None:
        return tower.cyc(parse_literal(args.w, tower)), None
    E, doc = ds.load_example_element(args.w_file)
    return ds.cyc_inverse(E), (E, doc)


def cmd_descent(args) -> Report:
    bundled = args.w is None
    n = args.n if args.n is not None else 28
    p = args.p if args.p is not None else 7
    base = FieldTower(n, p)
    w, loaded = _read_w(args, base)
    if loaded is not None:
        doc = loaded[1]
        n, p = int(doc["n"]), int(doc["p"])
        base = FieldTower(n, p)
    d_text = args.d if args.d is not None else (str(loaded[1]["d"]) if loaded else "1")
    d = base.cyc(parse_literal(d_text, base))
    params = ds.DescentParams(n, p, w, d, args.convention)
    rep = Report("descent", {"n": n, "p": p, "d": d_text, "convention": args.convention,
                             "w": "bundled" if bundled else args.w})
    if loaded is not None:
        E = loaded[0]
        rep.add("element/w_times_E_is_1", (w * E - 1).is_zero(), f"w E = {w * E}")
    details = ds.condition_details(params)
    for conv, ok in sorted(details.items()):
        rep.parameters[f"condition/{conv}"] = ok
    rep.add("condition", any(details.values()), f"(d + t)/2 is not integral for {sorted(details)}")
    if args.full_invariant_lattice and rep.ok:
        inv = ds.invariant_order(params, full_lattice=args.hnf_budget > 0, budget=args.hnf_budget)
        rep.parameters["convention_used"] = inv.convention
        rep.extend(inv.report, prefix="invariant_order/")
    return rep


def build_parser():
    ap = argparse.ArgumentParser(prog="hopforders", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", help="write the JSON report here instead of stdout")
        sp.add_argument("--jobs", type=int, default=1, help="worker processes for axiom checks")
        sp.add_argument("--timings", action="store_true", help="include elapsed times (not deterministic)")

    sp = sub.add_parser("verify-hopf", help="build A_p and H_p and run every Hopf algebra check")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--mutate", choices=sorted(MUTATIONS))
    common(sp)

    sp = sub.add_parser("verify-order", help="the order Y of H_p")
    sp.add_argument("--p", type=int, required=True)
    common(sp)

    sp = sub.add_parser("larson", help="the Larson order H((alpha)) of KC_p")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--alpha", default="z-1", help="z-1, 1, pi, sqrt-p or an element literal")
    common(sp)

    sp = sub.add_parser("descent", help="the descent condition and the invariant order")
    sp.add_argument("--n", type=int)
    sp.add_argument("--p", type=int)
    sp.add_argument("--w", help="unit w as an element literal (default: the bundled example)")
    sp.add_argument("--w-file", help="JSON file in the bundled-data format")
    sp.add_argument("--d", help="element literal (default 1)")
    sp.add_argument("--convention", choices=ds.CONVENTIONS, default="either")
    sp.add_argument("--full-invariant-lattice", action="store_true",
                    help="also compute the invariant order and certify that it spans Y")
    sp.add_argument("--hnf-budget", type=float, default=4 * 3600,
                    help="seconds for the flattened lattice route; 0 disables it")
    common(sp)
    return ap


def run(args) -> Report:
    if args.command == "verify-hopf":
        return cmd_verify_hopf(args.p, args.mutate, args.jobs)
    if args.command == "verify-order":
        return cmd_verify_order(args.p, args.jobs)
    if args.command == "larson":
        return cmd_larson(args.p, args.alpha)
    return cmd_descent(args)


def _out_path(args):
    if args.out:
        return Path(args.out)
    d = os.environ.get(OUT_DIR_ENV)
    if d:
        tag = "-".join(f"{k}{v}" for k, v in (("p", getattr(args, "p", None)),) if v is not None)
        return Path(d) / f"{args.command}{'-' + tag if tag else ''}.json"
    return None


CONFIG_ERRORS = (ConfigError, nk.InvalidP, orders.ContainmentViolation, orders.PreconditionViolated,
                 ds.NotAUnit, ds.ChecksumMismatch, ValueError, OSError, json.JSONDecodeError)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        rep = run(args)
    except CONFIG_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    text = rep.to_json(timings=args.timings) + "\n"
    path = _out_path(args)
    if path is None:
        sys.stdout.write(text)
    else:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    return 0 if rep.ok else 1


if __name__ == "__main__":
    sys.exit(main())
