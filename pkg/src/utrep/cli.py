"""Command-line front end: ``utrep <command> [flags]``.

Exit codes: 0 on success or accept, 1 on a negative verdict, 2 on usage or
input errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from .algebra import format_mat, format_scalar, parse_scalar
from .certify import (
    certify_genus3,
    genus3_assignment,
    klein_analyze,
    klein_forced_form,
    mult_indep,
    scan_kernel,
    two_sided_variant,
)
from .groups import Word, check_relation, eval_word, parse_assignment, parse_surface, parse_word
from .repspace import (
    RepPoint,
    assignment,
    membership,
    parse_case,
    parse_point,
    perturb,
    perturb_kill_prefix_squares,
    presentation_space,
    regularize,
    sample_point,
    targeted_word,
    torus_rep,
)
from .scc import catalog_for, genus3_catalog


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _emit(args, payload, text: str) -> None:
    out = json.dumps(payload, indent=2) if args.json else text
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(out + "\n")
    else:
        print(out)


def _point4(text: str) -> list:
    vals = [parse_scalar(t) for t in text.split(",")]
    if len(vals) != 4:
        raise ValueError("--point needs four values x,y,z,w")
    return vals


def _assignment_from(args, p):
    if args.assign:
        return parse_assignment(json.loads(args.assign), p)
    if args.point:
        return assignment(parse_point(presentation_space(p), args.point))
    raise ValueError("give --point or --assign")


def _point_text(pt: RepPoint) -> str:
    line = f"space={pt.space} coords={','.join(format_scalar(c) for c in pt.coords)}"
    if pt.approximate:
        line += f" approximate=1 residual={membership(pt, tol=float('inf')).residual!r}"
    return line


def cmd_certify(args) -> int:
    x, y, z, w = _point4(args.point)
    cert = certify_genus3(x, y, z, w, args.scan_k, args.scan_n, not args.no_squares)
    payload, text = cert.to_json(), cert.to_text()
    if args.two_sided and cert.accepted:
        words = None
        if args.scan_k or args.scan_n:
            words = [e.word for e in genus3_catalog(args.scan_k or 6, args.scan_n or 6,
                                                    not args.no_squares)]
        rep = two_sided_variant(x, y, z, w, words)
        rel = rep.relation
        disagree = [str(r.word) for r in rep.det_table if not r.agrees]
        payload["two_sided"] = {
            "assignment": {k: format_mat(v) for k, v in rep.assignment.items()},
            "relation": {
                "holds_exactly": rel.holds_exactly,
                "holds_projectively": rel.holds_projectively,
                "residual": format_mat(rel.residual),
            },
            "det_table": [
                {"word": str(r.word), "det": r.det, "character": r.character}
                for r in rep.det_table
            ],
            "det_matches_character": not disagree,
        }
        text += (
            f"\ntwo_sided c={format_mat(rep.assignment['c'])}"
            f" relation_exact={int(rel.holds_exactly)}"
            f" relation_projective={int(rel.holds_projectively)}"
            f" residual={format_mat(rel.residual)}"
            f"\ntwo_sided det_matches_character={int(not disagree)} words={len(rep.det_table)}"
        )
    _emit(args, payload, text)
    return 0 if cert.accepted else 1


def cmd_scan(args) -> int:
    if args.certificate:
        fh = sys.stdin if args.certificate == "-" else open(args.certificate)
        with fh:
            point = json.load(fh)["inputs"]["point"]
        x, y, z, w = (parse_scalar(v) for v in point)
    elif args.point:
        x, y, z, w = _point4(args.point)
    else:
        raise ValueError("give --point or --certificate")
    lower_right = -1 if args.two_sided else 1
    rho = genus3_assignment(x, y, z, w, lower_right)
    catalog = genus3_catalog(args.scan_k, args.scan_n, not args.no_squares)
    scan = scan_kernel(rho, catalog)
    payload = {
        "point": [format_scalar(v) for v in (x, y, z, w)],
        "scanned": scan.scanned,
        "identity": [e.to_json() for e in scan.identity],
        "minus_identity": [e.to_json() for e in scan.minus_identity],
    }
    lines = [f"scanned={scan.scanned}"]
    lines += [f"kernel=I {e.to_line()}" for e in scan.identity]
    lines += [f"kernel=-I {e.to_line()}" for e in scan.minus_identity]
    _emit(args, payload, "\n".join(lines))
    return 0 if scan.empty else 1


def cmd_catalog(args) -> int:
    p = parse_surface(args.surface)
    entries = catalog_for(p, args.max_k, args.max_n, not args.no_squares, args.classes)
    _emit(args, [e.to_json() for e in entries], "\n".join(e.to_line() for e in entries))
    return 0


def cmd_perturb(args) -> int:
    pt = parse_point(args.space, args.point)
    name, param = parse_case(args.case)
    eps = parse_scalar(args.epsilon)
    if args.regularize:
        pt = regularize(pt, range(len(pt.blocks())), args.regularize)
    if name == "prefix":
        result = perturb_kill_prefix_squares(pt, param, eps)
        new, exact = result.point, result.exact
    else:
        new = perturb(pt, args.case, eps)
        exact = not new.approximate
    word = targeted_word(args.space, args.case)
    image = eval_word(word, assignment(new))
    m = membership(new)
    payload = {
        "input": pt.to_json(),
        "output": new.to_json(),
        "exact": exact,
        "member": m.ok,
        "targeted_word": str(word),
        "image": format_mat(image),
        "displacement": new.distance(pt),
    }
    text = "\n".join([
        _point_text(new),
        f"member={int(m.ok)} exact={int(exact)}",
        f"word={word} image={format_mat(image)}",
    ])
    _emit(args, payload, text)
    return 0 if m.ok else 1


def cmd_eval(args) -> int:
    p = parse_surface(args.surface)
    word = parse_word(args.word, p)
    image = eval_word(word, _assignment_from(args, p))
    _emit(args, {"word": str(word), "image": format_mat(image)}, format_mat(image))
    return 0


def cmd_relate(args) -> int:
    p = parse_surface(args.surface)
    rel = check_relation(_assignment_from(args, p), p)
    payload = {
        "relator": str(p.relator),
        "holds_exactly": rel.holds_exactly,
        "holds_projectively": rel.holds_projectively,
        "residual": format_mat(rel.residual),
    }
    text = (f"holds_exactly={int(rel.holds_exactly)} "
            f"holds_projectively={int(rel.holds_projectively)} "
            f"residual={format_mat(rel.residual)}")
    _emit(args, payload, text)
    return 0 if rel.holds_exactly else 1


def cmd_klein(args) -> int:
    cert = klein_analyze(parse_scalar(args.z), parse_scalar(args.w), args.sign)
    payload, text = cert.to_json(), cert.to_text()
    if args.forced_samples:
        rep = klein_forced_form(args.forced_samples, args.seed)
        payload["forced_form"] = {"samples": len(rep.samples), "counterexamples": len(rep.counterexamples)}
        text += f"\nforced_form samples={len(rep.samples)} counterexamples={len(rep.counterexamples)}"
    _emit(args, payload, text)
    return 0 if cert.accepted else 1


def cmd_sample(args) -> int:
    pt = sample_point(args.space, args.seed)
    _emit(args, pt.to_json(), _point_text(pt))
    return 0


def cmd_torus(args) -> int:
    x, z = parse_scalar(args.x), parse_scalar(args.z)
    pt = torus_rep(x, z)
    mi = mult_indep(x, z)
    rho = assignment(pt)
    hits = []
    b = args.bound
    for p_ in range(-b, b + 1):
        for q in range(-b, b + 1):
            if (p_, q) == (0, 0):
                continue
            if eval_word(Word.of(("a", p_), ("b", q)), rho).is_scalar():
                hits.append([p_, q])
    payload = {
        "point": pt.to_json(),
        "independent": mi.independent,
        "witness": list(mi.witness) if mi.witness else None,
        "bound": b,
        "trivial_words": len(hits),
    }
    text = _point_text(pt) + f"\nindependent={int(mi.independent)}"
    if mi.witness:
        text += f" witness={mi.witness[0]},{mi.witness[1]}"
    text += f"\nbound={b} trivial_words={len(hits)}"
    _emit(args, payload, text)
    return 0 if mi.independent else 1


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="utrep", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.add_argument("--out", help="write output to this file instead of stdout")
        sp.set_defaults(func=func)
        return sp

    sp = command("certify", cmd_certify, "certify a genus-3 point x,y,z,w")
    sp.add_argument("--point", required=True)
    sp.add_argument("--two-sided", action="store_true")
    sp.add_argument("--scan-k", type=int)
    sp.add_argument("--scan-n", type=int)
    sp.add_argument("--no-squares", action="store_true")

    sp = command("scan", cmd_scan, "scan the genus-3 catalog for kernel words")
    sp.add_argument("--point")
    sp.add_argument("--certificate", help="certificate JSON file, '-' for stdin")
    sp.add_argument("--scan-k", type=int, default=6)
    sp.add_argument("--scan-n", type=int, default=6)
    sp.add_argument("--no-squares", action="store_true")
    sp.add_argument("--two-sided", action="store_true")

    sp = command("catalog", cmd_catalog, "list simple-loop representatives")
    sp.add_argument("--surface", required=True, help="S<g>, N<n>, N<n>:algae|fungi|bungee")
    sp.add_argument("--max-k", type=int, default=2)
    sp.add_argument("--max-n", type=int, default=2)
    sp.add_argument("--no-squares", action="store_true")
    sp.add_argument("--classes", action="store_true",
                    help="automorphism-class representatives only")

    sp = command("perturb", cmd_perturb, "perturb a point off a kill locus")
    sp.add_argument("--space", required=True, help="U:g, V:n, VFungi:g or VBungee:g")
    sp.add_argument("--point", required=True)
    sp.add_argument("--case", required=True,
                    help="kill-a1|separating:g0|kill-c1|prefix:n0|fungi:g0|fungi-a1|bungee:g0|bungee-a1")
    sp.add_argument("--epsilon", required=True)
    sp.add_argument("--regularize", type=int, metavar="N",
                    help="first replace degenerate handle blocks by term N of their generic sequence")

    for name, func, help_ in (("eval", cmd_eval, "evaluate a word"),
                              ("relate", cmd_relate, "check the surface relation")):
        sp = command(name, func, help_)
        sp.add_argument("--surface", required=True)
        sp.add_argument("--point")
        sp.add_argument("--assign", help='JSON like {"a": "2,1,1"}')
        if name == "eval":
            sp.add_argument("--word", required=True)

    sp = command("klein", cmd_klein, "Klein bottle analysis with C = sign*I")
    sp.add_argument("--z", required=True)
    sp.add_argument("--w", required=True)
    sp.add_argument("--sign", type=int, choices=(1, -1), required=True)
    sp.add_argument("--forced-samples", type=int, default=0)
    sp.add_argument("--seed", type=int, default=0)

    sp = command("sample", cmd_sample, "sample a point of a representation space")
    sp.add_argument("--space", required=True)
    sp.add_argument("--seed", type=int, required=True)

    sp = command("torus", cmd_torus, "diagonal torus representation")
    sp.add_argument("--x", required=True)
    sp.add_argument("--z", required=True)
    sp.add_argument("--bound", type=int, default=10)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"utrep {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
