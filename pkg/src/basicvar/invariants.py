"""
Invariants F_xi, xi in C(D), of the coadjoint action of UT(n) on a basic cell.

For the i-th cross xi_i = (s, t) the localisation map Theta_i sends the
coordinate x_eta (eta in Lambda_{>i}) to

* ``x_eta - x_(a,t) x_(s,b) / x_xi``          for eta = (a,b), a < s, b > t,
  when (s,a) lies in T_+;
* ``x_eta + sum_beta x_(beta+eta) x_(xi-beta) / x_xi``  for eta = (a,s), a > s,
  beta running over T_+ and T_-;
* ``x_eta`` otherwise.

F_eta is the image of x_eta under Theta_1 o ... o Theta_{i-1}, where
xi_{i-1} is the last cross above eta.  Roots of M(D) are processed in the
same sweep; solving F_eta = 0 for x_eta (possible because F_eta = x_eta +
terms in greater roots) gives a substitution that is applied to everything
computed afterwards.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Optional, Sequence

from .diagram import build_diagram
from .polyring import (
    EvaluationError, Point, Poly, RatFn, as_ratfn, evaluate, minor_poly, poisson,
)
from .roots import BasicSubset, Root, classify, order_key, positive_roots, sort_desc
from .weyl import act_on_root, minor_spec, partial_products, w_d

__all__ = [
    "StepContext", "InvariantSet", "step_context", "theta_image",
    "compute_invariants", "cell_relations", "x_d_phi", "left_right_move",
    "coadjoint_move", "random_unitriangular", "sample_cell_point",
    "verify_invariance", "InvarianceReport", "jacobian_rank", "rank",
]

Matrix = list  # list[list[Fraction]]


@dataclass(frozen=True)
class StepContext:
    index: int
    xi: Root
    lambda_i: frozenset[Root]
    lambda_gt_i: frozenset[Root]
    t0: frozenset[Root]
    t_plus: frozenset[Root]
    t_minus: frozenset[Root]
    s_plus: frozenset[Root]
    s_minus: frozenset[Root]

    @property
    def T(self) -> frozenset[Root]:
        return self.t0 | self.t_plus | self.t_minus

    def pairs(self) -> list[tuple[Root, Root]]:
        """(beta, alpha) with beta in T_+ or T_-, alpha = xi - beta, greatest beta last."""
        s, t = self.xi
        betas = sorted(self.t_plus | self.t_minus, key=order_key, reverse=True)
        return [(b, Root(b.col, t)) for b in betas]


def _lambda(n: int, t: int, w) -> frozenset[Root]:
    return frozenset(r for r in positive_roots(n) if r.col >= t and act_on_root(w, r).positive)


def step_context(D: BasicSubset, i: int) -> StepContext:
    return _step_context(D, i)


@lru_cache(maxsize=8192)
def _step_context(D: BasicSubset, i: int) -> StepContext:
    diagram = build_diagram(D)
    C = diagram.extension
    if not 1 <= i <= len(C):
        raise ValueError(f"step {i} outside 1..{len(C)}")
    ws = partial_products(D)
    xi = C[i - 1]
    s, t = xi
    lam = _lambda(D.n, t, ws[i - 1])
    lam_gt = _lambda(D.n, t, ws[i])
    # the sign criterion and the diagram state must agree
    for r in positive_roots(D.n):
        if r.col >= t:
            assert (r in lam) == diagram.open_after(r, i - 1), (D, i, r)
            assert (r in lam_gt) == diagram.open_after(r, i), (D, i, r)
    T = [Root(s, b) for b in range(t + 1, s)]
    t_plus, t0, t_minus = set(), set(), set()
    for beta in T:
        if beta not in lam:
            t_minus.add(beta)
        elif Root(beta.col, t) in lam:
            t_plus.add(beta)
        else:
            t0.add(beta)
    return StepContext(
        index=i, xi=xi, lambda_i=lam, lambda_gt_i=lam_gt,
        t0=frozenset(t0), t_plus=frozenset(t_plus), t_minus=frozenset(t_minus),
        s_plus=frozenset(Root(b.col, t) for b in t_plus),
        s_minus=frozenset(Root(b.col, t) for b in t_minus),
    )


def theta_image(ctx: StepContext, eta: Root) -> RatFn:
    eta = Root(*eta)
    if eta not in ctx.lambda_gt_i:
        raise ValueError(f"{eta} is outside the domain of Theta_{ctx.index}")
    return _theta_image(ctx, eta)


def _theta_image(ctx: StepContext, eta: Root) -> RatFn:
    s, t = ctx.xi
    a, b = eta
    x = Poly.var
    if eta in ctx.s_minus:
        return as_ratfn(x(eta))
    if a < s and b > t:
        beta = Root(s, a)
        if beta in ctx.t_plus:
            return RatFn(x(eta) * x(ctx.xi) - x((a, t)) * x((s, b)), x(ctx.xi))
        return as_ratfn(x(eta))
    if b == s and a > s:
        num = x(eta) * x(ctx.xi)
        for beta in sort_desc(ctx.t_plus | ctx.t_minus):
            c = beta.col
            num = num + x((a, c)) * x((c, t))
        return RatFn(num, x(ctx.xi))
    return as_ratfn(x(eta))


@dataclass
class InvariantSet:
    D: BasicSubset
    extension: list[Root]
    # canonical polynomial representative for each xi in C(D)
    generators: dict[Root, Poly]
    # reduced rational form x_eta + Q, for every eta in C(D) and M(D)
    rational: dict[Root, RatFn]
    # eta in M(D) -> value of x_eta on the cell, in processing order
    substitutions: list[tuple[Root, RatFn]] = field(default_factory=list)

    def reduce(self, f):
        """Rewrite f with the M(D)-coordinates eliminated."""
        return as_ratfn(f).substitute(dict(self.substitutions)) if self.substitutions else as_ratfn(f)

    def to_json(self) -> dict:
        return {str(xi): str(g) for xi, g in self.generators.items()}


class _Engine:

    def __init__(self, D: BasicSubset):
        self.D = D
        self.C = build_diagram(D).extension
        self.M = classify(D).m_set
        self.ctx = [None] + [step_context(D, i) for i in range(1, len(self.C) + 1)]
        self.subst: dict[Root, RatFn] = {}
        self.F: dict[Root, RatFn] = {}
        self.memo: dict = {}

    def phi(self, k: int, r: Root) -> RatFn:
        """Theta_1 o ... o Theta_k applied to x_r, in level-0 coordinates."""
        key = (k, r)
        if key in self.memo:
            return self.memo[key]
        if k == 0:
            out = self.subst.get(r) or as_ratfn(Poly.var(r))
        else:
            img = theta_image(self.ctx[k], r)
            out = self.pull(k - 1, img)
        self.memo[key] = out
        return out

    def pull(self, k: int, f: RatFn) -> RatFn:
        num = self._pull_poly(k, f.num)
        for p, e in f.den_factors.items():
            num = num / self._pull_poly(k, p) ** e
        return num

    def _pull_poly(self, k: int, p: Poly) -> RatFn:
        return as_ratfn(p.substitute({v: self.phi(k, v) for v in p.variables()}))

    def run(self) -> InvariantSet:
        generators: dict[Root, Poly] = {}
        subs = []
        targets = sort_desc(set(self.C) | self.M)
        for eta in targets:
            level = sum(1 for xi in self.C if order_key(xi) < order_key(eta))
            F = self.phi(level, eta)
            self.F[eta] = F
            if eta in self.M:
                value = as_ratfn(Poly.var(eta)) - F
                assert eta not in value.variables(), (self.D, eta)
                self.subst[eta] = value
                subs.append((eta, value))
                self.memo.clear()
            else:
                _, g = F.num.primitive()
                generators[eta] = g
        return InvariantSet(self.D, list(self.C), {xi: generators[xi] for xi in self.C},
                            dict(self.F), subs)


def compute_invariants(D: BasicSubset) -> InvariantSet:
    return _compute(D)


@lru_cache(maxsize=1024)
def _compute(D: BasicSubset) -> InvariantSet:
    return _Engine(D).run()


def cell_relations(D: BasicSubset) -> tuple[list[Poly], list[Poly]]:
    """(vanishing minors P_gamma, gamma in M(D); nonvanishing minors P_xi, xi in D)."""
    w = w_d(D)
    m_set = classify(D).m_set

    def minor(r: Root) -> Poly:
        spec = minor_spec(w, r.row, r.col)
        p = minor_poly(spec, False, D.n)
        assert p == minor_poly(spec, True, D.n), f"shift matters for {r}"
        return p

    return [minor(g) for g in sort_desc(m_set)], [minor(x) for x in D]


# ---------------------------------------------------------------------------
# points and group actions


def x_d_phi(D: BasicSubset, phi: Mapping[Root, Fraction]) -> Point:
    phi = {Root(*k): Fraction(v) for k, v in phi.items()}
    if set(phi) != set(D.roots):
        raise ValueError("phi must be defined exactly on D")
    if any(v == 0 for v in phi.values()):
        raise ValueError("phi must take nonzero values")
    return Point(D.n, phi)


def _matmul(A: Matrix, B: Matrix) -> Matrix:
    n = len(A)
    return [[sum((A[i][k] * B[k][j] for k in range(n) if A[i][k] and B[k][j]), Fraction(0))
             for j in range(n)] for i in range(n)]


def _check_unitriangular(g: Matrix) -> None:
    n = len(g)
    for i in range(n):
        for j in range(i + 1):
            want = 1 if i == j else 0
            if g[i][j] != want:
                raise ValueError("expected an upper unitriangular matrix")


def _unitriangular_inverse(g: Matrix) -> Matrix:
    n = len(g)
    inv = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    # back substitution column by column
    for j in range(n):
        for i in range(j - 1, -1, -1):
            inv[i][j] = -sum((g[i][k] * inv[k][j] for k in range(i + 1, j + 1)), Fraction(0))
    return inv


def left_right_move(g: Matrix, h: Matrix, X: Point) -> Point:
    _check_unitriangular(g)
    _check_unitriangular(h)
    return Point.from_matrix(_matmul(_matmul(g, X.to_matrix()), h))


def coadjoint_move(g: Matrix, X: Point) -> Point:
    _check_unitriangular(g)
    return Point.from_matrix(_matmul(_matmul(g, X.to_matrix()), _unitriangular_inverse(g)))


def random_unitriangular(n: int, rng: random.Random, bound: int = 3) -> Matrix:
    return [[Fraction(1) if i == j else Fraction(rng.randint(-bound, bound)) if j > i else Fraction(0)
             for j in range(n)] for i in range(n)]


def random_phi(D: BasicSubset, rng: random.Random, bound: int = 3) -> dict[Root, Fraction]:
    values = [v for v in range(-bound, bound + 1) if v]
    return {r: Fraction(rng.choice(values)) for r in D}


def sample_cell_point(D: BasicSubset, rng: random.Random, phi=None) -> tuple[Point, Point]:
    """(X_{D,phi}, a random point of its left-right orbit)."""
    if phi is None:
        phi = random_phi(D, rng)
    base = x_d_phi(D, phi)
    g = random_unitriangular(D.n, rng)
    h = random_unitriangular(D.n, rng)
    return base, left_right_move(g, h, base)


# ---------------------------------------------------------------------------
# verification


def _generic(inv: InvariantSet, X: Point) -> bool:
    """Every denominator met while building the invariants is nonzero at X."""
    try:
        for _, value in inv.substitutions:
            value.evaluate(X.entries)
        for F in inv.rational.values():
            F.evaluate(X.entries)
    except EvaluationError:
        return False
    return True


@dataclass
class InvarianceReport:
    D: BasicSubset
    trials: int
    failures: list[dict] = field(default_factory=list)
    resamples: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"trials": self.trials, "failures": self.failures, "resamples": self.resamples}


def verify_invariance(D: BasicSubset, trials: int = 20, seed: int = 0, budget: int = 100,
                      phi: Optional[Mapping[Root, Fraction]] = None) -> InvarianceReport:
    """Sample orbit points of V_(D,phi) and check every invariant property exactly.

    ``phi`` is drawn at random per trial unless given.
    """
    inv = compute_invariants(D)
    vanishing, nonvanishing = cell_relations(D)
    report = InvarianceReport(D, trials)
    variables = positive_roots(D.n)
    for trial in range(trials):
        rng = random.Random(f"{seed}:{trial}")
        for attempt in range(budget):
            base, X = sample_cell_point(D, rng, phi)
            g = random_unitriangular(D.n, rng)
            Y = coadjoint_move(g, X)
            if _generic(inv, X) and _generic(inv, Y):
                break
            report.resamples += 1
        else:
            raise RuntimeError(f"no generic sample for {D} after {budget} attempts")

        def fail(kind: str, **info):
            report.failures.append({
                "trial": trial, "check": kind,
                "X": {str(r): str(v) for r, v in X.entries.items()},
                **{k: str(v) for k, v in info.items()},
            })

        for P in vanishing:
            if evaluate(P, X) or evaluate(P, Y):
                fail("vanishing relation", poly=P)
        for P in nonvanishing:
            if not evaluate(P, X):
                fail("nonvanishing relation", poly=P)
            if evaluate(P, X) != evaluate(P, base) or evaluate(P, Y) != evaluate(P, X):
                fail("minor not constant", poly=P)
        for xi, G in inv.generators.items():
            gx, gy = evaluate(G, X), evaluate(G, Y)
            if gx != gy:
                fail("coadjoint invariance", xi=xi, before=gx, after=gy)
            if xi in D and gx != evaluate(G, base):
                fail("basic variety level", xi=xi)
            for gamma in variables:
                if evaluate(poisson(G, Poly.var(gamma)), X):
                    fail("casimir", xi=xi, gamma=gamma)
    return report


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    """Rank over Q by fraction-exact Gaussian elimination."""
    M = [list(map(Fraction, r)) for r in rows]
    r = 0
    ncols = len(M[0]) if M else 0
    for c in range(ncols):
        pivot = next((k for k in range(r, len(M)) if M[k][c]), None)
        if pivot is None:
            continue
        M[r], M[pivot] = M[pivot], M[r]
        for k in range(len(M)):
            if k != r and M[k][c]:
                f = M[k][c] / M[r][c]
                M[k] = [a - f * b for a, b in zip(M[k], M[r])]
        r += 1
    return r


def jacobian_rank(D: BasicSubset, X: Point, roots: Optional[Sequence[Root]] = None) -> int:
    """Rank of d F_xi (xi in ``roots``, default all of C(D)) at X over every coordinate."""
    inv = compute_invariants(D)
    if not _generic(inv, X):
        raise EvaluationError("a denominator vanishes at the chosen point")
    chosen = inv.extension if roots is None else list(roots)
    variables = positive_roots(D.n)
    rows = [[inv.generators[xi].derivative(v).evaluate(X.entries) for v in variables]
            for xi in chosen]
    return rank(rows) if rows else 0
