import argparse
import json
import sys

from colorama import init, Fore, Style
from tabulate import tabulate

from cone_cert import GeneratedCone, Member, OrderUnitNo, OrderUnitYes, Refuted, SearchCaps
from config import IDEAL_STORE_FILE, SWEEP_CONFIG
from experiments import FAIL_REFUTED, PASS, cancellation_sweep, run_cancellation_experiment, summarize_sweep, sweep_table
from fixtures import POLYTOPES, parse_point, polytope
from gallery import CASES, run_gallery
from ideal_store import ideal_store_exists, load_order_ideal, save_order_ideal
from json_codec import (
    decode_cone,
    decode_poly,
    decode_polytope,
    dumps,
    encode_certificate,
    encode_face,
    encode_flat,
    encode_polytope,
    encode_rational,
    encode_structure,
    encode_verdict,
)
from multipoly import SparsePoly, default_variables
from order_ideal import (
    IdealMember,
    OrderIdealGen,
    dominate_linear,
    facet_decompose,
    in_order_ideal,
    is_zariski_dense,
    zero_faces,
)
from polytope_geom import LinearForm
from ring_setting import SETTING_TAGS, ConeSetting, get_setting, setting_for_cone
from structure_check import SimplexProductWitness, recognize_simplex_product, simple_vertex_check
from tree_builder import create_face_tree, create_gallery_tree
from utils import agent_print

init(autoreset=True)

EXIT_OK, EXIT_NEGATIVE, EXIT_UNKNOWN, EXIT_INPUT = 0, 1, 2, 3


def caps_from(args) -> SearchCaps:
    return SearchCaps.from_config(
        max_degree=args.max_degree, max_m=args.max_m, grid_denominator_cap=args.grid_denominator_cap
    )


def resolve_setting(args):
    if getattr(args, "cone_json", None):
        with open(args.cone_json, 'r') as f:
            return setting_for_cone(decode_cone(json.load(f)), name=args.cone_json)
    if getattr(args, "polytope_json", None):
        return setting_for_cone(GeneratedCone.from_polytope(resolve_polytope(args)), name=args.polytope_json)
    return get_setting(args.setting)


def resolve_polytope(args):
    if getattr(args, "polytope_json", None):
        with open(args.polytope_json, 'r') as f:
            return decode_polytope(json.load(f))
    return polytope(args.polytope)


def read_poly(setting, text):
    """A text expression, inline polynomial JSON, or @path to a polynomial JSON file."""
    if text.startswith("@"):
        with open(text[1:], "r") as f:
            obj = json.load(f)
    elif text.lstrip().startswith("{"):
        obj = json.loads(text)
    else:
        return setting.parse(text)
    if not isinstance(obj, dict):
        raise ValueError("polynomial JSON must be an object with \"vars\" and \"terms\"")
    p = decode_poly(obj)
    if p.nvars != len(setting.variables):
        raise ValueError(f"polynomial has {p.nvars} variables, {setting.name} has {len(setting.variables)}")
    return p


def parse_form(text, K):
    return LinearForm.from_poly(SparsePoly.from_expression(text, default_variables(K.dimension)))


def resolve_face(args, K):
    points = [parse_point(p) for p in args.face]
    return K.vertex_face(points[0]) if len(points) == 1 else K.face_containing(points)


def emit(args, payload, lines):
    if args.json:
        print(dumps(payload))
    else:
        for agent, message, color in lines:
            agent_print(agent, message, color)


def verdict_code(kind):
    if kind in ("member", "Yes", PASS):
        return EXIT_OK
    if kind in ("refuted", "No", FAIL_REFUTED):
        return EXIT_NEGATIVE
    return EXIT_UNKNOWN


# -- commands ------------------------------------------------------------------

def cmd_certify(args):
    setting = resolve_setting(args)
    f = read_poly(setting, args.poly)
    verdict = setting.membership(f, caps_from(args))
    if isinstance(setting, ConeSetting):
        payload = encode_verdict(verdict)
        if isinstance(verdict, Member):
            message = f"Member at degree {verdict.degree}: {args.poly} = {verdict.certificate.format(setting.cone)}"
        elif isinstance(verdict, Refuted):
            message = f"Refuted ({verdict.rule}) at " + ", ".join(str(tuple(map(str, p))) for p in verdict.witness)
        else:
            message = f"No certificate up to degree {verdict.degree}"
    else:
        payload = {"verdict": verdict.kind, "ring": setting.name}
        message = f"{args.poly} is {'positive' if verdict.member else 'not positive'} in {setting.name}"
    color = {"member": Fore.GREEN, "refuted": Fore.RED}.get(verdict.kind, Fore.YELLOW)
    emit(args, payload, [("Certifier", message, color)])
    return verdict_code(verdict.kind)


def cmd_orderunit(args):
    setting = resolve_setting(args)
    u = read_poly(setting, args.poly)
    verdict = setting.order_unit(u, caps_from(args))
    if isinstance(verdict, OrderUnitYes):
        payload = encode_verdict(verdict)
        message = f"Yes: {args.poly} ≥ {verdict.margin} (certificate degree {verdict.degree})"
    elif isinstance(verdict, OrderUnitNo):
        payload = encode_verdict(verdict)
        message = f"No: value {verdict.value} at {tuple(str(v) for v in verdict.witness)}"
    elif isinstance(setting, ConeSetting):
        payload = encode_verdict(verdict)
        message = "Unknown: caps reached"
    else:
        payload = {"verdict": verdict.verdict, "ring": setting.name}
        message = f"{verdict.verdict}: exact decision on [0, 1]"
    emit(args, payload, [("Order Unit", message, Fore.CYAN)])
    return verdict_code(verdict.verdict)


def cmd_ideal_member(args):
    setting = resolve_setting(args)
    if not isinstance(setting, ConeSetting):
        raise ValueError("ideal-member needs a cone setting; toy rings use the gallery")
    caps = caps_from(args)
    path = args.ideal_file or IDEAL_STORE_FILE
    if args.generator:
        ideal = OrderIdealGen.generate([read_poly(setting, t) for t in args.generator], setting.cone, caps)
        if args.ideal_file:
            save_order_ideal(path, ideal)
    elif ideal_store_exists(path):
        ideal = load_order_ideal(path, setting.cone, caps)
    else:
        raise ValueError(f"give --generator or an existing ideal store (looked for {path})")
    r = read_poly(setting, args.poly)
    verdict = in_order_ideal(r, ideal, caps=caps)
    if isinstance(verdict, IdealMember):
        payload = {
            "verdict": "Member",
            "M": verdict.M,
            "upper": encode_certificate(verdict.upper),
            "lower": encode_certificate(verdict.lower),
        }
        message = f"Member with M = {verdict.M}"
        code = EXIT_OK
    else:
        payload = {"verdict": "NotFoundUpTo", "M_cap": verdict.M_cap, "degree_cap": verdict.degree_cap}
        message = f"No bracket found for M ≤ {verdict.M_cap} and degree ≤ {verdict.degree_cap}"
        code = EXIT_UNKNOWN
    emit(args, payload, [("Order Ideal", message, Fore.CYAN)])
    return code


def cmd_dominate(args):
    K = resolve_polytope(args)
    G = resolve_face(args, K)
    result = dominate_linear(K, G, parse_form(args.beta, K), parse_form(args.gamma, K))
    payload = {
        "M": result.M,
        "combination": {str(i): encode_rational(c) for i, c in result.combination.items()},
        "farkas_below": [encode_rational(v) for v in result.farkas_below] if result.farkas_below else None,
    }
    emit(args, payload, [("Order Ideal", f"M = {result.M}", Fore.GREEN)])
    return EXIT_OK


def cmd_decompose(args):
    K = resolve_polytope(args)
    G = resolve_face(args, K)
    coeffs = facet_decompose(K, G, parse_form(args.beta, K))
    names = default_variables(K.dimension)
    payload = {"coeffs": {K.facet_forms[i].format(names): encode_rational(a) for i, a in coeffs.items()}}
    rows = [[K.facet_forms[i].format(names), str(a)] for i, a in coeffs.items()]
    if args.json:
        print(dumps(payload))
    else:
        print(tabulate(rows, headers=["facet form", "coefficient"]))
    return EXIT_OK


def cmd_zerofaces(args):
    K = resolve_polytope(args)
    monomials = [[int(e) for e in m.split(",")] for m in args.monomial]
    zs = zero_faces(K, monomials)
    payload = {
        "faces": [encode_face(f) for f in zs.faces],
        "flats": [encode_flat(f) for f in zs.flats],
        "dense": is_zariski_dense(zs),
    }
    lines = [("Zero Set", f"{len(zs.faces)} maximal faces in K, {len(zs.flats)} flats", Fore.CYAN)]
    lines += [("Zero Set", f"flat {flat.describe()}", Fore.WHITE) for flat in zs.flats]
    emit(args, payload, lines)
    return EXIT_OK


def cmd_cancel(args):
    setting = resolve_setting(args)
    report = run_cancellation_experiment(
        setting, read_poly(setting, args.u), read_poly(setting, args.a), caps_from(args), lemma2=args.lemma2 or None
    )
    if args.json:
        print(dumps(report.as_row()))
    else:
        print(report.table())
    if report.conclusion == "ERROR":
        return EXIT_INPUT
    return verdict_code(report.conclusion)


def cmd_structure(args):
    K = resolve_polytope(args)
    result = recognize_simplex_product(K)
    simple = simple_vertex_check(K)
    payload = dict(encode_structure(result), simple=simple.simple)
    if isinstance(result, SimplexProductWitness):
        message, color = f"product of simplices of dimensions {result.simplex_dimensions}", Fore.GREEN
    else:
        message, color = f"not a product: {result.reason}", Fore.RED
    emit(args, payload, [("Structure", message, color)])
    return EXIT_OK if isinstance(result, SimplexProductWitness) else EXIT_NEGATIVE


def cmd_gallery(args):
    names = args.names or None
    results = run_gallery(names, caps_from(args), verbose=not args.json)
    if args.json:
        print(dumps([
            {"name": r.name, "passed": r.passed, "checks": [{"label": o.label, "ok": o.ok} for o in r.outcomes]}
            for r in results
        ]))
    else:
        create_gallery_tree(results).show()
    return EXIT_OK if all(r.passed for r in results) else EXIT_NEGATIVE


def cmd_faces(args):
    K = resolve_polytope(args)
    if args.json:
        print(dumps({"polytope": encode_polytope(K), "faces": [encode_face(f) for f in K.faces()]}))
    else:
        print(f"{Fore.MAGENTA}Face lattice:{Style.RESET_ALL}")
        create_face_tree(K).show()
    return EXIT_OK


def cmd_sweep(args):
    frame = cancellation_sweep(args.setting, args.trials, args.seed, caps_from(args), controls=args.controls)
    if args.json:
        print(frame.to_json(orient="records"))
    else:
        print(sweep_table(frame))
    refuted = int((frame["conclusion"] == FAIL_REFUTED).sum())
    agent_print("Sweep", summarize_sweep(frame), Fore.RED if refuted else Fore.GREEN)
    return EXIT_NEGATIVE if refuted else EXIT_OK


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--max-degree', type=int, help="Certificate degree cap")
    common.add_argument('--max-m', type=int, help="Order ideal multiplier cap")
    common.add_argument('--grid-denominator-cap', type=int, help="Largest grid denominator for witness search")
    common.add_argument('--json', action='store_true', help="Machine-readable output")

    def with_setting(p):
        p.add_argument('--setting', default='interval', choices=SETTING_TAGS, help="Named ring setting")
        p.add_argument('--cone-json', help="Cone JSON file (generators or polytope)")
        p.add_argument('--polytope-json', help="Polytope JSON file (vertices or halfspaces)")

    def with_polytope(p):
        p.add_argument('--polytope', default='square', choices=list(POLYTOPES), help="Named polytope")
        p.add_argument('--polytope-json', help="Polytope JSON file (vertices or halfspaces)")

    parser = argparse.ArgumentParser(description="Exact positivity certificates for ordered rings on polytopes")
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('certify', parents=[common], help="Search a cone certificate or refute")
    with_setting(p)
    p.add_argument('poly')
    p.set_defaults(handler=cmd_certify)

    p = sub.add_parser('orderunit', parents=[common], help="Decide whether a polynomial is an order unit")
    with_setting(p)
    p.add_argument('poly')
    p.set_defaults(handler=cmd_orderunit)

    p = sub.add_parser('ideal-member', parents=[common], help="Bounded order ideal membership")
    with_setting(p)
    p.add_argument('poly')
    p.add_argument('--generator', action='append', default=[], help="Ideal generator (repeatable)")
    p.add_argument('--ideal-file', help="Order ideal JSON store")
    p.set_defaults(handler=cmd_ideal_member)

    for name, handler, helptext in [
        ('dominate', cmd_dominate, "Least M with M·beta − gamma positive"),
        ('decompose', cmd_decompose, "Positive facet decomposition of beta"),
    ]:
        p = sub.add_parser(name, parents=[common], help=helptext)
        with_polytope(p)
        p.add_argument('--face', action='append', required=True, help="Vertex of the face, e.g. 0,0 (repeatable)")
        p.add_argument('--beta', required=True)
        if name == 'dominate':
            p.add_argument('--gamma', required=True)
        p.set_defaults(handler=handler)

    p = sub.add_parser('zerofaces', parents=[common], help="Zero set of a monomial ideal in the facet forms")
    with_polytope(p)
    p.add_argument('--monomial', action='append', required=True, help="Exponents over the facets, e.g. 1,1,0,0")
    p.set_defaults(handler=cmd_zerofaces)

    p = sub.add_parser('cancel', parents=[common], help="Order unit cancellation experiment")
    with_setting(p)
    p.add_argument('--u', required=True)
    p.add_argument('--a', required=True)
    p.add_argument('--lemma2', action='store_true', help="Also run the order-unit positivity pipeline")
    p.set_defaults(handler=cmd_cancel)

    p = sub.add_parser('structure', parents=[common], help="Product-of-simplices recognition")
    with_polytope(p)
    p.set_defaults(handler=cmd_structure)

    p = sub.add_parser('gallery', parents=[common], help="Run the self-checking gallery")
    p.add_argument('names', nargs='*', help=f"Cases to run (default: all of {', '.join(CASES)})")
    p.set_defaults(handler=cmd_gallery)

    p = sub.add_parser('faces', parents=[common], help="Show the face lattice")
    with_polytope(p)
    p.set_defaults(handler=cmd_faces)

    p = sub.add_parser('sweep', parents=[common], help="Randomized cancellation sweep")
    p.add_argument('--setting', default='square', choices=list(POLYTOPES))
    p.add_argument('--trials', type=int, default=SWEEP_CONFIG["trials"])
    p.add_argument('--seed', type=int, default=SWEEP_CONFIG["seed"])
    p.add_argument('--controls', type=int, default=SWEEP_CONFIG["controls"], help="Extra rows with a negative a")
    p.set_defaults(handler=cmd_sweep)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (ValueError, KeyError, OSError) as e:
        agent_print("Error Handler", f"{type(e).__name__}: {e}", Fore.RED)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
