# Third party imports
import argparse
import sys
from math import isqrt
from dotenv import load_dotenv
from pathlib import Path

# First party imports
from clilog import (
    log,
    clear_logs,
    VERBOSITY,
    VERBOSITY_ERROR,
    VERBOSITY_WARNING,
    VERBOSITY_INFO,
    VERBOSITY_DEBUG,
    VERBOSITY_TRACE,
    traceback_exit,
)
import clilog

from geometry import construct, redei, resolve, search
from geometry.errors import BudgetExceeded, GeometryError
from geometry.galois import field_of_order
from geometry.plane import build_plane, permutation_order
from helpers import certificate

# Variable defenitions
ENV_PATH = Path(__file__).parent / '.env'
load_dotenv(dotenv_path=ENV_PATH)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

log(f"[cli.py] verbosity obtained from .env = {VERBOSITY}", VERBOSITY_DEBUG)
log(f"[cli.py] .env path loaded as {ENV_PATH}", VERBOSITY_TRACE)
log(f"[cli.py] clear_logs = {clear_logs()}", VERBOSITY_DEBUG)
log(f"[cli.py] Errors trigger traceback = {traceback_exit}", VERBOSITY_DEBUG)

CONSTRUCTIONS = ("canonical", "fano5", "hyperoval10", "c", "baer-pair", "vertexless-triangle",
                 "three-lines", "semi-from-2bl", "split")
VERIFY_KINDS = {
    "resolving": "resolving",
    "semi": "semi_resolving",
    "split": "split",
    "2bl": "double_blocking",
    "semioval": "semioval",
}
SEARCHES = {
    "mu": search.min_resolving,
    "mus": search.min_semi_resolving,
    "tau2": search.min_double_blocking,
    "mustar": search.min_split_resolving,
}


def _plane(args):
    modulus = [int(c) for c in args.modulus.split(",")] if getattr(args, "modulus", None) else None
    plane = build_plane(field_of_order(args.q, modulus))
    log(f"[cli.py._plane] Using {plane} with modulus {list(plane.field.modulus)}", VERBOSITY_DEBUG)
    return plane


def emit(cert, out=None):
    """Canonical JSON to stdout, and to --out when given."""
    print(certificate.dumps(cert))
    if out:
        certificate.dump(cert, out)


def _is_square(q):
    return isqrt(q) ** 2 == q


def _study_set(plane, path=None):
    """Set used by the redei commands: --in certificate, else Baer pair (square q) or vertexless triangle."""
    if path:
        return certificate.set_from(certificate.load(path)).points, "external"
    if _is_square(plane.q):
        c = construct.baer_pair_semi(plane)
    else:
        c = construct.vertexless_triangle(plane)
    return c.points, c.name


# ───────────────────────────────────────────
# COMMANDS
# ───────────────────────────────────────────

def cmd_plane(args):
    plane = _plane(args)
    payload = {
        "q": plane.q,
        "p": plane.field.p,
        "h": plane.field.h,
        "modulus": list(plane.field.modulus),
        "n_points": plane.n_points,
        "n_lines": plane.n_lines,
        "singer_order": permutation_order(plane.singer_cycle()),
    }
    if _is_square(plane.q):
        payload["baer_partition_size"] = len(construct.baer_partition(plane))
    emit(certificate.build("plane_info", plane.field, payload, "plane-info"), args.out)
    return EXIT_OK


def cmd_construct(args):
    plane = _plane(args)
    match args.which:
        case "canonical":
            c = construct.canonical_4q4(plane)
        case "fano5":
            c = construct.fano_resolving5(plane)
        case "hyperoval10":
            c = construct.hyperoval_resolving10(plane)
        case "c":
            if args.id is None:
                raise GeometryError("construct c needs --id N")
            c = construct.dual_construction(args.id, plane) if args.dual else construct.construction_C(args.id, plane)
        case "baer-pair":
            c = construct.baer_pair_double_blocking(plane) if args.double_blocking else construct.baer_pair_semi(plane)
        case "vertexless-triangle":
            c = construct.vertexless_triangle(plane, drop_extra=args.drop_extra)
        case "three-lines":
            c = construct.three_line_double_blocking(plane)
        case "semi-from-2bl":
            if args.input:
                B = certificate.set_from(certificate.load(args.input)).points
            else:
                B = construct.three_line_double_blocking(plane).points
            c = construct.semi_from_double_blocking(plane, B=B)
        case "split":
            c = construct.split_from_semi(construct.vertexless_triangle(plane), plane)
    log(f"Built {c.name} on {plane}: size {len(c)}, verified={c.verified}", VERBOSITY_INFO)
    emit(certificate.from_construction(c, plane), args.out)
    if args.verify and not c.verified:
        log(f"[cli.py.cmd_construct] {c.name} failed verification", VERBOSITY_WARNING)
        return EXIT_FAILED
    return EXIT_OK


def cmd_verify(args):
    cert = certificate.load(args.input)
    kind = VERIFY_KINDS[args.which]
    report = certificate.reverify(cert, kind)
    payload = {"checked": kind, "size": len(certificate.set_from(cert)), **report.to_dict()}
    emit(certificate.build("verify_report", certificate.plane_from(cert).field, payload, "verify"), args.out)
    if not report.ok:
        log(f"[cli.py.cmd_verify] {args.input} is not {kind}: {sorted(report.kinds())}", VERBOSITY_WARNING)
        return EXIT_FAILED
    return EXIT_OK


def cmd_search(args):
    plane = _plane(args)
    budget = search.Budget.from_config(args.budget_nodes, args.budget_seconds)
    symmetry = None if args.symmetry is None else args.symmetry == "on"
    if args.which == "no-smaller":
        if args.k is None:
            raise GeometryError("search no-smaller needs --k K")
        result = search.verify_no_smaller(plane, args.k, args.kind, checkpoint=args.checkpoint, budget=budget)
        emit(certificate.build("no_smaller", plane.field, result.to_dict(), "verify_no_smaller"), args.out)
        return EXIT_OK if result.holds else EXIT_FAILED
    try:
        result = SEARCHES[args.which](plane, budget, symmetry=symmetry, workers=args.workers, method=args.method)
    except BudgetExceeded as exc:
        if exc.partial is not None:
            emit(certificate.build("search_result", plane.field, exc.partial.to_dict(), args.which), args.out)
        raise
    emit(certificate.build("search_result", plane.field, result.to_dict(), args.which), args.out)
    return EXIT_OK


def cmd_redei(args):
    plane = _plane(args)
    match args.which:
        case "szw-random":
            payload = redei.szonyi_weiner_trials(plane.field, args.trials, args.seed)
            emit(certificate.build("szw_trials", plane.field, payload, "szw-random",
                                   {"trials": args.trials, "seed": args.seed}), args.out)
            return EXIT_OK if not payload["failures"] else EXIT_FAILED
        case "profile":
            A, source = _study_set(plane, args.input)
            profile = redei.redei_profile(A, plane)
            emit(certificate.build("redei_profile", plane.field, profile.to_dict(), source), args.out)
            return EXIT_OK if profile.ok else EXIT_FAILED
        case "index-bounds":
            A, source = _study_set(plane, args.input)
            report = resolve.check_index_inequalities(A, plane)
            payload = report.to_dict()
            q, beta = plane.q, report.beta
            if q >= 4 and 4 * beta <= q - 10:
                payload["large_index"] = resolve.large_index_extension(A, plane).to_dict()
                payload["tangent_large_index"] = resolve.check_tangent_large_index(A, plane)
            emit(certificate.build("index_bounds", plane.field, payload, source), args.out)
            ok = report.ok and payload.get("large_index", {}).get("ok", True)
            return EXIT_OK if ok else EXIT_FAILED


# Main entry point for the CLI
def build_parser():
    parser = argparse.ArgumentParser(description="Resolving, semi-resolving and blocking sets in PG(2,q)")
    parser.add_argument('--verbosity', '-v', type=clilog.parse_verbosity, choices=range(0, 5),
                        help='Verbosity: 0-4 or error, warning, info, debug, trace')
    commands = parser.add_subparsers(dest="command", required=True)

    def with_plane(p):
        p.add_argument('--q', type=int, required=True, help='Order of the plane (a prime power)')
        p.add_argument('--modulus', help='Comma-separated ascending coefficients of the field modulus')
        p.add_argument('--out', help='Also write the certificate to this path')
        return p

    plane_cmd = commands.add_parser("plane", help="Plane facts")
    plane_cmd.add_argument("which", choices=["info"])
    with_plane(plane_cmd).set_defaults(func=cmd_plane)

    construct_cmd = with_plane(commands.add_parser("construct", help="Build an explicit set"))
    construct_cmd.add_argument("which", choices=CONSTRUCTIONS)
    construct_cmd.add_argument('--id', type=int, help='Construction id 1..32 for `c`')
    construct_cmd.add_argument('--dual', action='store_true', help='Dual of C1, C2, C7 or C8')
    construct_cmd.add_argument('--drop-extra', action='store_true', help='3q-4 variant of the vertexless triangle')
    construct_cmd.add_argument('--double-blocking', action='store_true', help='Baer pair union instead of the semi-resolving set')
    construct_cmd.add_argument('--in', dest='input', help='Double blocking certificate for semi-from-2bl')
    construct_cmd.add_argument('--verify', action='store_true', help='Exit 1 unless the set verifies')
    construct_cmd.set_defaults(func=cmd_construct)

    verify_cmd = commands.add_parser("verify", help="Re-verify a certificate")
    verify_cmd.add_argument("which", choices=list(VERIFY_KINDS))
    verify_cmd.add_argument('--in', dest='input', required=True, help='Certificate path')
    verify_cmd.add_argument('--out', help='Also write the report to this path')
    verify_cmd.set_defaults(func=cmd_verify)

    search_cmd = with_plane(commands.add_parser("search", help="Exact minimum-size searches"))
    search_cmd.add_argument("which", choices=list(SEARCHES) + ["no-smaller"])
    search_cmd.add_argument('--k', type=int, help='Size to refute for no-smaller')
    search_cmd.add_argument('--kind', choices=search.KINDS, default=search.RESOLVING, help='Property for no-smaller')
    search_cmd.add_argument('--budget-nodes', type=int, help='Node budget, 0 = unlimited')
    search_cmd.add_argument('--budget-seconds', type=float, help='Time budget in seconds, 0 = unlimited')
    search_cmd.add_argument('--symmetry', choices=["on", "off"], help='Root-frontier orbit pruning')
    search_cmd.add_argument('--workers', type=int, help='Worker processes for work units')
    search_cmd.add_argument('--method', choices=["auto", search.EXHAUSTIVE, search.BRANCH_AND_BOUND], default="auto")
    search_cmd.add_argument('--checkpoint', help='Cursor file for no-smaller')
    search_cmd.set_defaults(func=cmd_search)

    redei_cmd = with_plane(commands.add_parser("redei", help="Polynomial checks"))
    redei_cmd.add_argument("which", choices=["profile", "szw-random", "index-bounds"])
    redei_cmd.add_argument('--trials', type=int, default=500)
    redei_cmd.add_argument('--seed', type=int, default=0)
    redei_cmd.add_argument('--in', dest='input', help='Semi-resolving set certificate to study')
    redei_cmd.set_defaults(func=cmd_redei)
    return parser


def main(argv=None):
    """
    Parse the command line, run one command and return its exit code.
    Standard output carries only the canonical JSON certificate.
    """
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.verbosity is not None:
        clilog.set_verbosity(args.verbosity)
        log(f"[cli.py.main] Verbosity set to {clilog.VERBOSITY}", VERBOSITY_DEBUG)
    log(f"[cli.py.main] Command {args.command} {getattr(args, 'which', '')}", VERBOSITY_DEBUG)

    try:
        return args.func(args)
    except BudgetExceeded as exc:
        log(f"[cli.py.main] Budget exceeded after {exc.nodes} nodes: {exc}", VERBOSITY_WARNING)
        return EXIT_BUDGET
    except GeometryError as exc:
        log(f"[cli.py.main] {args.command} {getattr(args, 'which', '')} failed: {type(exc).__name__}: {exc}", VERBOSITY_ERROR)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
