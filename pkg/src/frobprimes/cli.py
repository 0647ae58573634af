"""Command-line front end.

Exit status: 0 on success, 1 when the computation fails or leaves the
supported envelope, 2 for malformed input or bad usage.
"""

from __future__ import annotations

import argparse
import sys

from .errors import AlgebraError, CapabilityError, ParseError
from .frobenius import FrobMatrix, ie_module, is_special_prime, is_compatible, nilpotent_kernel, star_closure
from .modules import parse_ideal, parse_module
from .nearsplit import NearSplitting, compatible_prime_annihilators
from .problem import parse_problem
from .special import find_special_primes


def _yes(flag):
    return "yes" if flag else "no"


def _module_arg(problem, text, rank):
    text = text.strip()
    if text in problem.modules:
        return problem.modules[text]
    return parse_module(problem.ring, text, rank, problem.names)


def _ideal_arg(problem, text):
    text = text.strip()
    if text in problem.ideals:
        return problem.ideals[text]
    return parse_ideal(problem.ring, text, problem.names)


def _frob(problem, e=1):
    return FrobMatrix(problem.U, e)


def cmd_special_primes(problem, args):
    report = find_special_primes(_frob(problem), trace=args.trace)
    lines = []
    if args.trace:
        lines.append("trace:")
        lines.extend("  " + t for t in report.trace)
    for cert in report.certificates:
        lines.append(str(cert.prime))
        if not args.brief:
            lines.append(f"  star closure: {cert.closure}")
            lines.append(f"  annihilator: {cert.annihilator}")
            if cert.witness is None:
                lines.append("  non-nilpotent: no")
            else:
                lines.append("  non-nilpotent: yes, witness [" + ",".join(map(str, cert.witness)) + "]")
    return lines


def cmd_star_closure(problem, args):
    V = _module_arg(problem, args.module, problem.alpha)
    W = star_closure(V, _frob(problem))
    return [str(W), f"annihilator: {W.annihilator()}"]


def cmd_ie(problem, args):
    V = _module_arg(problem, args.module, problem.alpha)
    return [str(ie_module(V, args.e))]


def cmd_nilpotent_kernel(problem, args):
    return [str(nilpotent_kernel(_frob(problem)))]


def cmd_check_special(problem, args):
    Q = _ideal_arg(problem, args.prime)
    F = _frob(problem)
    W = star_closure(Q.times_free(F.alpha), F)
    verdict = "special" if is_special_prime(Q, F) else "not special"
    return [verdict, f"star closure: {W}", f"annihilator: {W.annihilator()}"]


def cmd_check_compatible(problem, args):
    V = _module_arg(problem, args.module, problem.alpha)
    return ["compatible" if is_compatible(V, _frob(problem)) else "not compatible"]


def cmd_near_splitting(problem, args):
    _, rows = compatible_prime_annihilators(NearSplitting(problem.U))
    lines = []
    for row in rows:
        lines.append(f"P = {row.prime}")
        lines.append(f"  V = {row.module}")
        lines.append(f"  phi nonzero on R^alpha/V: {_yes(row.nonzero)}")
    return lines


COMMANDS = {
    "special-primes": (cmd_special_primes, "list the special primes with certificates"),
    "star-closure": (cmd_star_closure, "star closure of a submodule"),
    "ie": (cmd_ie, "p^e-th root of a submodule"),
    "nilpotent-kernel": (cmd_nilpotent_kernel, "submodule detecting nilpotent action"),
    "check-special": (cmd_check_special, "test whether a prime is special"),
    "check-compatible": (cmd_check_compatible, "test whether a submodule is compatible"),
    "near-splitting-annihilators": (cmd_near_splitting, "primes and compatible modules for phi"),
}


def build_parser():
    parser = argparse.ArgumentParser(prog="frobprimes", description="Special primes of Frobenius maps.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("file", help="problem file, or '-' for standard input")
        sp.add_argument("--trace", action="store_true", help="print the recursion tree")
        if name == "special-primes":
            sp.add_argument("--brief", action="store_true", help="print only the primes")
        if name in ("star-closure", "ie", "check-compatible"):
            sp.add_argument("--module", required=True, help="generators like [[x,0],[0,y]] or a module name")
        if name == "ie":
            sp.add_argument("--e", type=int, default=1, help="Frobenius level (default 1)")
        if name == "check-special":
            sp.add_argument("--prime", required=True, help="ideal like (x, y) or an ideal name")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "ie" and args.e < 1:
        parser.error("--e must be positive")
    try:
        if args.file == "-":
            text = sys.stdin.read()
        else:
            with open(args.file, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        problem = parse_problem(text)
        lines = COMMANDS[args.command][0](problem, args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except CapabilityError as exc:
        print(f"capability error: {exc}", file=sys.stderr)
        return 1
    except AlgebraError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print("\n".join(lines))
    return 0


if __name__ == "__main__":
    sys.exit(main())
