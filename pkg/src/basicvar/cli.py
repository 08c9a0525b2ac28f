"""Command line entry point: ``basicvar <verb> --n N --d "(i,j),..."``."""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from typing import Optional, Sequence

from .diagram import build_diagram
from .invariants import (
    _generic, cell_relations, compute_invariants, jacobian_rank, sample_cell_point,
    verify_invariance, x_d_phi,
)
from .polyring import evaluate
from .roots import BasicSubset, Root, enumerate_basic, format_roots, parse_roots
from .weyl import homogeneous_elements, is_homogeneous, partial_products, w_d

VERBS = ("diagram", "wd", "factor", "invariants", "relations", "verify", "enumerate")


class UsageError(Exception):
    pass


def parse_phi(text: str, D: BasicSubset) -> dict[Root, Fraction]:
    phi = {}
    for item in filter(None, (s.strip() for s in _split_phi(text))):
        key, _, value = item.partition("=")
        roots = parse_roots(key)
        if len(roots) != 1 or not value.strip():
            raise UsageError(f"cannot parse phi entry {item!r}")
        try:
            phi[roots[0]] = Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"bad phi value {value!r}")
    if set(phi) != set(D.roots):
        raise UsageError("phi keys must be exactly the roots of D")
    if any(v == 0 for v in phi.values()):
        raise UsageError("phi values must be nonzero")
    return phi


def _split_phi(text: str):
    # entries look like (i,j)=v, separated by commas outside parentheses
    depth, cur = 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            yield "".join(cur)
            cur = []
        else:
            cur.append(ch)
    yield "".join(cur)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="basicvar", description=__doc__)
    parser.add_argument("verb", choices=VERBS)
    parser.add_argument("--n", type=int, required=True, help="board size")
    parser.add_argument("--d", default="", help='basic subset, e.g. "(3,1),(4,2)"')
    parser.add_argument("--phi", default=None, help='values on D, e.g. "(3,1)=2,(4,2)=-1/2"')
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--trials", type=int, default=20)
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument("--steps", action="store_true", help="diagram: print every intermediate step")
    return parser


def _subset(args) -> BasicSubset:
    try:
        return BasicSubset(args.n, frozenset(parse_roots(args.d)))
    except ValueError as exc:
        raise UsageError(str(exc))


def run(argv: Optional[Sequence[str]] = None) -> tuple[int, str]:
    """Parse ``argv`` and return (exit status, stdout text). Diagnostics raise UsageError."""
    args = build_parser().parse_args(argv)
    if args.verb == "enumerate":
        return 0, _enumerate(args)
    D = _subset(args)
    phi = parse_phi(args.phi, D) if args.phi is not None else None
    handler = {
        "diagram": _diagram, "wd": _wd, "factor": _factor, "invariants": _invariants,
        "relations": _relations, "verify": _verify,
    }[args.verb]
    return handler(args, D, phi)


def _emit(args, payload: dict, text: str) -> str:
    if args.format == "json":
        return json.dumps(payload, indent=2, sort_keys=True)
    return text


def _diagram(args, D, phi):
    dg = build_diagram(D)
    lines = []
    if args.steps:
        for i in range(len(dg.steps) + 1):
            lines.append(f"step {i}:")
            lines.extend(dg.grid(upto=i))
            lines.append("")
    lines.extend(dg.grid())
    lines.append(f"C(D) = {format_roots(dg.extension)}")
    return 0, _emit(args, dg.to_json(), "\n".join(lines))


def _wd(args, D, phi):
    w = w_d(D)
    h = is_homogeneous(w)
    payload = {"D": D.to_json(), "w": w.to_json(), "homogeneous": h}
    text = f"{w.one_line()}\n\n{w.two_line()}\n\nhomogeneous={str(h).lower()}"
    return 0, _emit(args, payload, text)


def _factor(args, D, phi):
    C = build_diagram(D).extension
    product = partial_products(D)[-1]
    w = w_d(D)
    ok = product == w
    payload = {
        "D": D.to_json(), "reflections": [list(r) for r in C],
        "product": product.to_json(), "w": w.to_json(), "equal": ok,
    }
    refl = " ".join(f"({r.row} {r.col})" for r in C) or "e"
    text = f"w_D = {refl}\nproduct = {product.one_line()}\nw_D     = {w.one_line()}\nequal={str(ok).lower()}"
    return (0 if ok else 1), _emit(args, payload, text)


def _invariants(args, D, phi):
    inv = compute_invariants(D)
    payload = {"D": D.to_json(), "extension": [list(r) for r in inv.extension],
               "generators": inv.to_json()}
    lines = [f"F{xi} = {g}" for xi, g in inv.generators.items()]
    if phi is not None:
        X = x_d_phi(D, phi)
        levels = {str(xi): str(evaluate(inv.generators[xi], X)) for xi in D}
        payload["levels"] = levels
        lines += [f"F{xi} = {v} on V_(D,phi)" for xi, v in levels.items()]
    return 0, _emit(args, payload, "\n".join(lines))


def _relations(args, D, phi):
    vanishing, nonvanishing = cell_relations(D)
    payload = {"vanishing": [str(p) for p in vanishing],
               "nonvanishing": [str(p) for p in nonvanishing]}
    lines = [f"{p} = 0" for p in vanishing] + [f"{p} != 0" for p in nonvanishing]
    return 0, _emit(args, payload, "\n".join(lines))


def _verify(args, D, phi):
    inv = compute_invariants(D)
    report = verify_invariance(D, trials=args.trials, seed=args.seed, phi=phi)
    rng = random.Random(f"{args.seed}:rank")
    while True:
        _, X = sample_cell_point(D, rng, phi)
        if _generic(inv, X):
            break
    rank = jacobian_rank(D, X)
    rank_variety = jacobian_rank(D, X, [xi for xi in inv.extension if xi not in D])
    vanishing, nonvanishing = cell_relations(D)
    expected = len(inv.extension)
    ok = report.ok and rank == expected and rank_variety == expected - len(D)
    payload = {
        "D": D.to_json(),
        "extension": [list(r) for r in inv.extension],
        "generators": inv.to_json(),
        "cell_relations": {"vanishing": [str(p) for p in vanishing],
                           "nonvanishing": [str(p) for p in nonvanishing]},
        "invariance": report.to_json(),
        "jacobian_rank": rank,
        "jacobian_rank_variety": rank_variety,
    }
    text = "\n".join([
        f"C(D) = {format_roots(inv.extension)}",
        f"invariance: {args.trials} trials, {len(report.failures)} failures",
        f"jacobian rank: {rank} (expected {expected})",
        f"jacobian rank on V_(D,phi): {rank_variety} (expected {expected - len(D)})",
        "PASS" if ok else "FAIL",
    ])
    if not ok:
        return 1, json.dumps(payload, indent=2, sort_keys=True)
    return 0, _emit(args, payload, text)


def _enumerate(args):
    rows, lines = [], []
    subsets = list(enumerate_basic(args.n))
    for D in subsets:
        c, w = len(build_diagram(D).extension), w_d(D)
        rows.append({"D": [list(r) for r in D], "c": c, "w": w.to_json()})
        lines.append(f"{format_roots(D) or '{}':<40} |C(D)|={c}  w_D={w.one_line()}")
    homogeneous = sum(1 for _ in homogeneous_elements(args.n)) if args.n <= 8 else None
    payload = {"n": args.n, "basic_subsets": len(subsets),
               "homogeneous_elements": homogeneous, "subsets": rows}
    lines.append(f"basic subsets: {len(subsets)}")
    lines.append(f"homogeneous elements: {homogeneous}")
    return _emit(args, payload, "\n".join(lines))


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        status, out = run(argv)
    except UsageError as exc:
        print(f"basicvar: error: {exc}", file=sys.stderr)
        return 2
    print(out)
    return status


if __name__ == "__main__":
    sys.exit(main())
