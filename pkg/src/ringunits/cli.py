"""Command-line surface.

Every command prints a deterministic report (JSON, or raw solver text for
gensys) on standard output; diagnostics go to standard error.  Exit codes:
0 all requested checks passed, 2 usage, 3 verification failure, 4 external
format constraint, 5 resource bound exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

from .bilinear import (
    FormatConstraintError,
    add_normalization,
    enumerate_character_pairs,
    export_system,
    generate_bilinear_system,
    localize,
    reduce_by_characters,
    reduce_system_mod,
)
from .catalog import (
    SupportPair,
    catalog_support_pair,
    coefficient_conjugation_twist,
    make_alpha,
    make_beta,
    make_nu,
    make_nu_partner,
    phi_S,
    rho_grading,
    specialize_catalog_pair,
    theta0,
    theta1,
)
from .groupring import (
    GroupRingElem,
    abelianize_is_one,
    check_rho_grading,
    gf_ring,
    group_by_name,
    is_nontrivial,
    verify_unit,
)
from .groups import eval_word, parse_word
from .products import (
    ResourceBoundError,
    encode_two_unique_product_cnf,
    exhaustive_subpair_check,
    has_unique_product,
    multiplicity_table,
    search_units_f2,
)
from .rings import find_eighth_root, is_prime, specialize_R


def _emit(doc: dict) -> None:
    sys.stdout.write(json.dumps(doc, indent=2) + "\n")


def _one_str(elem: GroupRingElem) -> str:
    return "1" if elem.is_one() else "not 1"


def _cmd_verify_theorem1(args) -> int:
    alpha, beta = make_alpha(), make_beta()
    ab, ba = alpha * beta, beta * alpha
    pair = catalog_support_pair()
    table = multiplicity_table(pair.left_elements(), pair.right_elements())
    report = {
        "schema": "ringunits/verify/1",
        "command": "theorem1",
        "alpha_beta": _one_str(ab),
        "beta_alpha": _one_str(ba),
        "support": [len(alpha.terms), len(beta.terms)],
        "identity_pairs": table.identity_pairs(),
        "nontrivial": is_nontrivial(alpha) and is_nontrivial(beta),
    }
    report["pass"] = (
        ab.is_one()
        and ba.is_one()
        and report["support"] == [21, 21]
        and report["identity_pairs"] == 17
        and report["nontrivial"]
    )
    _emit(report)
    return 0 if report["pass"] else 3


def _cmd_verify_remarks(args) -> int:
    alpha, beta = make_alpha(), make_beta()
    rho = rho_grading()
    checks = {
        "theta0_fixes_alpha": alpha.apply_twisted(theta0()) == alpha,
        "theta1_star_is_inverse": alpha.apply_twisted(theta1()).star() == beta,
        "conjugation_gauge_fixes_alpha": alpha.apply_twisted(coefficient_conjugation_twist()) == alpha,
        "rho_grading_alpha": check_rho_grading(alpha, rho),
        "rho_grading_beta": check_rho_grading(beta, rho),
        "abelianization_alpha_is_one": abelianize_is_one(alpha),
        "abelianization_beta_is_one": abelianize_is_one(beta),
    }
    report = {
        "schema": "ringunits/verify/1",
        "command": "remarks",
        "checks": checks,
        "pass": all(checks.values()),
    }
    _emit(report)
    return 0 if report["pass"] else 3


def _cmd_verify_nu(args) -> int:
    group = make_nu().group
    nu, partner = make_nu(), make_nu_partner()
    phi = phi_S()

    def phi_power_word(token: str, k: int):
        w = parse_word(token, group)
        for _ in range(k):
            w = phi.image_word(w)
        return eval_word(w, group)

    order4 = all(phi_power_word(t, 4) == group.token_matrix(t) for t in ("x", "y"))
    squared_moves = any(phi_power_word(t, 2) != group.token_matrix(t) for t in ("x", "y"))
    checks = {
        "support_size_29": len(nu.terms) == 29,
        "nu_times_partner": (nu * partner).is_one(),
        "partner_times_nu": (partner * nu).is_one(),
        "phi_preserves_relators": phi.check(),
        "phi_order_4": order4,
        "phi_squared_nontrivial": squared_moves,
        "phi_squared_fixes_nu": nu.apply_twisted(phi).apply_twisted(phi) == nu,
        "relators_hold": all(eval_word(r, group).is_identity() for r in group.relators),
    }
    report = {
        "schema": "ringunits/verify/1",
        "command": "nu",
        "checks": checks,
        "pass": all(checks.values()),
    }
    _emit(report)
    return 0 if report["pass"] else 3


def _cmd_verify_corollary(args) -> int:
    entries = []
    ok = True
    for p in args.prime:
        if not is_prime(p):
            sys.stderr.write(f"error: {p} is not prime\n")
            return 2
        desc, root, alpha, beta = specialize_catalog_pair(p)
        ab, ba = alpha * beta, beta * alpha
        good = ab.is_one() and ba.is_one() and is_nontrivial(alpha)
        ok = ok and good
        entries.append(
            {
                "prime": p,
                "field": desc.name,
                "root": root.to_json()["val"],
                "alpha_beta": _one_str(ab),
                "beta_alpha": _one_str(ba),
                "nontrivial": is_nontrivial(alpha),
            }
        )
    report = {
        "schema": "ringunits/verify/1",
        "command": "corollary",
        "primes": entries,
        "pass": ok,
    }
    _emit(report)
    return 0 if ok else 3


def _cmd_group_info(args) -> int:
    group = group_by_name(args.group)
    report = {
        "schema": "ringunits/group-info/1",
        "name": group.name,
        "dim": group.dim,
        "generators": {name: list(map(list, g.entries)) for name, g in sorted(group.generators.items())},
        "derived": {name: str(word) for name, word in group.derived.items()},
        "relators": [str(r) for r in group.relators],
        "relators_hold": all(eval_word(r, group).is_identity() for r in group.relators),
    }
    _emit(report)
    return 0


def _cmd_catalog_dump(args) -> int:
    if args.what == "alpha":
        doc = make_alpha().to_json()
    elif args.what == "beta":
        doc = make_beta().to_json()
    elif args.what == "nu":
        doc = make_nu().to_json()
    else:
        doc = catalog_support_pair().to_json()
    _emit(doc)
    return 0


def _load_support_pair(path: str) -> SupportPair:
    with open(path, "r", encoding="utf-8") as fh:
        return SupportPair.from_json(json.load(fh))


def _cmd_gensys(args) -> int:
    if args.localize and args.reduce_characters is not None:
        sys.stderr.write("error: --localize and --reduce-characters cannot be combined\n")
        return 2
    if args.char and args.reduce_characters is not None:
        sys.stderr.write("error: --reduce-characters yields Gaussian coefficients; --char needs integers\n")
        return 2
    if args.char and not is_prime(args.char):
        sys.stderr.write(f"error: characteristic must be 0 or a prime, got {args.char}\n")
        return 2

    system = generate_bilinear_system(catalog_support_pair())
    if args.normalize:
        system = add_normalization(system)
    if args.localize:
        i, j = args.localize
        try:
            system = localize(system, i, j)
        except ValueError as exc:
            sys.stderr.write(f"error: {exc}\n")
            return 2
    if args.reduce_characters is not None:
        pairs = enumerate_character_pairs()
        if not (0 <= args.reduce_characters < len(pairs)):
            sys.stderr.write(f"error: character pair index must be in 0..{len(pairs) - 1}\n")
            return 2
        system = reduce_by_characters(system, theta0(), theta1(), pairs[args.reduce_characters])
    if args.char:
        system = reduce_system_mod(system, args.char)
    sys.stdout.write(export_system(system, args.format))
    return 0


def _default_threads() -> int:
    env = os.environ.get("RINGUNITS_THREADS", "")
    return int(env) if env.isdigit() and int(env) > 0 else 1


def _bitstring(bits) -> str:
    return "".join(str(b) for b in bits)


def _cmd_search_f2(args) -> int:
    pair = _load_support_pair(args.supports) if args.supports else catalog_support_pair()
    result = search_units_f2(
        pair.left_elements(), pair.right_elements(), threads=args.threads
    )
    report = {
        "schema": "ringunits/search-f2/1",
        "group": pair.group.name,
        "m": result.m,
        "n": result.n,
        "count": len(result.solutions),
        "solutions": [
            {"u": _bitstring(u), "v": _bitstring(v)} for u, v in result.solutions
        ],
        "families": [
            {
                "u": _bitstring(f.u),
                "particular": _bitstring(f.particular),
                "basis": [_bitstring(vec) for vec in f.basis],
                "dimension": f.dimension,
            }
            for f in result.families
        ],
    }
    _emit(report)
    return 0


def _cmd_uniqueprod(args) -> int:
    pair = _load_support_pair(args.supports) if args.supports else catalog_support_pair()
    left, right = pair.left_elements(), pair.right_elements()
    table = multiplicity_table(left, right)
    witness = has_unique_product(left, right)
    report = {
        "schema": "ringunits/uniqueprod/1",
        "group": pair.group.name,
        "sizes": [len(left), len(right)],
        "products": len(table),
        "identity_pairs": table.identity_pairs(),
        "min_multiplicity": table.min_multiplicity(),
        "unique_product": None if witness is None else {"i": witness[1], "j": witness[2]},
    }
    if args.cnf:
        formula = encode_two_unique_product_cnf(
            left,
            right,
            [str(w) for w in pair.left_words],
            [str(w) for w in pair.right_words],
        )
        with open(args.cnf, "w", encoding="utf-8") as fh:
            fh.write(formula.to_dimacs())
        report["cnf"] = {
            "path": args.cnf,
            "vars": formula.nvars,
            "clauses": len(formula.clauses),
        }
    if args.exhaustive:
        verdict = exhaustive_subpair_check(left, right)
        report["exhaustive"] = {
            "all_have_unique_product": verdict.all_have_unique_product,
            "bad_left": list(verdict.bad_left) if verdict.bad_left else None,
            "bad_right": list(verdict.bad_right) if verdict.bad_right else None,
        }
    _emit(report)
    return 0


def _cmd_specialize(args) -> int:
    p = args.prime
    if not is_prime(p):
        sys.stderr.write(f"error: {p} is not prime\n")
        return 2
    desc, root = find_eighth_root(p)
    ring = gf_ring(desc)
    base = {
        "schema": "ringunits/specialize/1",
        "prime": p,
        "field": desc.name,
        "root": root.to_json()["val"],
    }
    if args.infile:
        with open(args.infile, "r", encoding="utf-8") as fh:
            elem = GroupRingElem.from_json(json.load(fh))
        if elem.ring.kind != "cyclo":
            sys.stderr.write("error: --in expects an element over the bivariate cyclotomic ring\n")
            return 2
        image = elem.map_coeffs(lambda c: specialize_R(c, root, root), ring)
        base["element"] = image.to_json()
        _emit(base)
        return 0
    _, _, alpha, beta = specialize_catalog_pair(p)
    ab, ba = alpha * beta, beta * alpha
    base["alpha_beta"] = _one_str(ab)
    base["beta_alpha"] = _one_str(ba)
    base["support"] = [len(alpha.terms), len(beta.terms)]
    base["pass"] = ab.is_one() and ba.is_one()
    _emit(base)
    return 0 if base["pass"] else 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ringunits",
        description="Exact verification and search tooling for nontrivial group-ring units.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="run one of the verification suites")
    vsub = verify.add_subparsers(dest="suite", required=True)
    vsub.add_parser("theorem1").set_defaults(func=_cmd_verify_theorem1)
    vsub.add_parser("remarks").set_defaults(func=_cmd_verify_remarks)
    vsub.add_parser("nu").set_defaults(func=_cmd_verify_nu)
    cor = vsub.add_parser("corollary")
    cor.add_argument("--prime", type=int, nargs="+", required=True)
    cor.set_defaults(func=_cmd_verify_corollary)

    ginfo = sub.add_parser("group", help="inspect the built-in groups")
    gsub = ginfo.add_subparsers(dest="action", required=True)
    info = gsub.add_parser("info")
    info.add_argument("group", choices=["P", "S"])
    info.set_defaults(func=_cmd_group_info)

    cat = sub.add_parser("catalog", help="dump the hard-coded units and supports")
    csub = cat.add_subparsers(dest="action", required=True)
    dump = csub.add_parser("dump")
    dump.add_argument("--what", choices=["alpha", "beta", "nu", "supports"], required=True)
    dump.add_argument("--format", choices=["json"], default="json")
    dump.set_defaults(func=_cmd_catalog_dump)

    gensys = sub.add_parser("gensys", help="generate and export the bilinear system")
    gensys.add_argument("--normalize", action="store_true")
    gensys.add_argument("--localize", type=int, nargs=2, metavar=("I", "J"))
    gensys.add_argument("--reduce-characters", type=int, metavar="K")
    gensys.add_argument("--format", choices=["json", "msolve", "singular"], default="json")
    gensys.add_argument("--char", type=int, default=0)
    gensys.set_defaults(func=_cmd_gensys)

    search = sub.add_parser("search-f2", help="exhaustive F2 unit search over supports")
    search.add_argument("--supports", metavar="FILE")
    search.add_argument("--threads", type=int, default=_default_threads())
    search.set_defaults(func=_cmd_search_f2)

    uniq = sub.add_parser("uniqueprod", help="product multiplicity and subpair analysis")
    uniq.add_argument("--supports", metavar="FILE")
    uniq.add_argument("--cnf", metavar="OUT")
    uniq.add_argument("--exhaustive", action="store_true")
    uniq.set_defaults(func=_cmd_uniqueprod)

    spec = sub.add_parser("specialize", help="specialize coefficients into a finite field")
    spec.add_argument("--prime", type=int, required=True)
    spec.add_argument("--in", dest="infile", metavar="FILE")
    spec.set_defaults(func=_cmd_specialize)

    return parser


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        return args.func(args)
    except ResourceBoundError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 5
    except FormatConstraintError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 4
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
