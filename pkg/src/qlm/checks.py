"""Named verification checks behind the `verify` command.

Every stated relation, action table, classification and dimension is
re-derived here at run time; checks either compare full symbolic
expansions to zero or exact values against independently computed
oracles.  All randomized checks draw from streams derived from the run
seed, so a whole verification run is deterministic.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from pathlib import Path
from typing import Callable, Sequence

from .casemodels import (
    LocalModel,
    build_model,
    equation_residuals,
    order3_generators,
    twisted_identity_residual,
    twisted_plane_invariants,
    twisted_rank_one_residual,
)
from .exactpoly import Polynomial, PolyMatrix
from .geomclass import (
    ConeKind,
    certify_lci,
    eliminate_and_cone,
    quadric_rank,
)
from .involution import (
    FIX,
    NEGATE,
    SWAP,
    build_fixed_model,
    equations_sigma_compatible,
    sigma_action_on_generators,
)
from .linalg import rational_rank
from .quiverext import (
    Arrow,
    CaseId,
    build_ext_quiver,
    bundle_case,
    canonical_rotation,
    enumerate_cycles,
    generic_representation,
    trace_invariant,
)
from .relminer import (
    SampleScheme,
    derived_rng,
    mine_for_case,
    order3_relation,
    pit_zero,
    verify_certificate,
    weighted_monomials,
)


class CheckFailure(Exception):
    """A verification check did not hold; the message carries the residual."""


@dataclass(frozen=True)
class CheckResult:
    check_id: str
    name: str
    case: str
    passed: bool
    detail: str

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.check_id:28s} {self.detail}"


@dataclass
class VerifyConfig:
    seed: int = 42
    samples: int = 200
    weight_bound: int = 12
    entry_bound: int = 10
    data_dir: Path | None = None


class Context:
    """Caches shared expensive objects across checks."""

    def __init__(self, config: VerifyConfig):
        self.config = config
        self._models: dict[CaseId, LocalModel] = {}
        self._fixed: dict[CaseId, LocalModel] = {}

    def rng(self, label: str) -> random.Random:
        return derived_rng(self.config.seed, label)

    def model(self, case: CaseId) -> LocalModel:
        if case not in self._models:
            if case is CaseId.ORDER3_TRIPLE:
                self._models[case] = build_model(case, data_dir=self.config.data_dir)
            else:
                self._models[case] = build_model(case)
        return self._models[case]

    def fixed(self, case: CaseId):
        if case not in self._fixed:
            self._fixed[case] = build_fixed_model(case, self.model(case))
        return self._fixed[case]

    def scheme(self, count: int | None = None) -> SampleScheme:
        return SampleScheme(
            self.config.seed, count or self.config.samples, self.config.entry_bound
        )


ALL_CASES = tuple(c.value for c in CaseId)


@dataclass(frozen=True)
class Check:
    check_id: str
    name: str
    cases: tuple[str, ...]  # "core" or the case ids the check exercises
    run: Callable[[Context], str]

    @property
    def case(self) -> str:
        return self.cases[0] if len(self.cases) == 1 else "core"


CHECKS: list[Check] = []


def check(check_id: str, name: str, case: str | tuple[str, ...] = "core"):
    cases = (case,) if isinstance(case, str) else tuple(case)

    def deco(fn: Callable[[Context], str]):
        CHECKS.append(Check(check_id, name, cases, fn))
        return fn

    return deco


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise CheckFailure(message)


def _require_zero(p: Polynomial, label: str) -> None:
    if not p.is_zero():
        exp, coeff = p.leading_term()
        raise CheckFailure(f"{label}: nonzero residual, leading term {coeff}*{p.monomial_str(exp)}")


def _random_poly(rng: random.Random, variables: Sequence[str], terms: int = 5) -> Polynomial:
    out: dict[tuple[int, ...], int] = {}
    for _ in range(rng.randint(1, terms)):
        exp = tuple(rng.randint(0, 2) for _ in variables)
        out[exp] = out.get(exp, 0) + rng.randint(-9, 9)
    return Polynomial(variables, out)


# ---------------------------------------------------------------------------
# exact kernel
# ---------------------------------------------------------------------------


@check("poly-ring-axioms", "distributivity on random samples")
def _check_ring(ctx: Context) -> str:
    rng = ctx.rng("ring")
    vars3 = ("x", "y", "z")
    for i in range(100):
        p, q, r = (_random_poly(rng, vars3) for _ in range(3))
        if (p + q) * r != p * r + q * r:
            raise CheckFailure(f"distributivity failed on sample {i}")
        if p * q != q * p or (p * q) * r != p * (q * r):
            raise CheckFailure(f"commutativity/associativity failed on sample {i}")
    return "100 random triples: (p+q)r = pr+qr, pq = qp, (pq)r = p(qr)"


@check("poly-eval-homomorphism", "evaluation commutes with arithmetic")
def _check_eval(ctx: Context) -> str:
    rng = ctx.rng("eval")
    vars3 = ("x", "y", "z")
    for _ in range(50):
        p, q = _random_poly(rng, vars3), _random_poly(rng, vars3)
        point = {v: Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for v in vars3}
        if (p * q + p).evaluate(point) != p.evaluate(point) * q.evaluate(point) + p.evaluate(point):
            raise CheckFailure("evaluate(p*q + p) != evaluate(p)*evaluate(q) + evaluate(p)")
    return "50 random points: evaluate is a ring homomorphism"


@check("poly-substitute-compose", "substitution composes with evaluation")
def _check_subst(ctx: Context) -> str:
    rng = ctx.rng("subst")
    vars2 = ("x", "y")
    vars_uv = ("u", "v")
    for _ in range(50):
        p = _random_poly(rng, vars2)
        bx = _random_poly(rng, vars_uv)
        by = _random_poly(rng, vars_uv)
        composed = p.substitute({"x": bx, "y": by})
        point = {v: rng.randint(-5, 5) for v in vars_uv}
        direct = p.evaluate({"x": bx.evaluate(point), "y": by.evaluate(point)})
        full_point = dict(point)
        full_point.update({"x": 0, "y": 0})  # bound variables keep a slot in the union list
        if composed.evaluate(full_point) != direct:
            raise CheckFailure("substitute-then-evaluate differs from evaluate-of-composition")
    return "50 random points: substitute then evaluate = evaluate of composition"


@check("poly-lowest-degree-part", "lowest-degree part is the exact minimal slice")
def _check_ldp(ctx: Context) -> str:
    rng = ctx.rng("ldp")
    vars3 = ("x", "y", "z")
    for _ in range(50):
        p = _random_poly(rng, vars3)
        if p.is_zero():
            continue
        low = p.lowest_degree_part()
        d = p.min_degree()
        _require(low.is_homogeneous(), "lowest part is not homogeneous")
        expected = {e: c for e, c in p.terms.items() if sum(e) == d}
        _require(low.terms == expected, "lowest part misses or adds terms")
    return "50 samples: homogeneous, contains exactly the min-degree terms"


@check("trace-commutativity", "tr(AB) = tr(BA) for generic matrices")
def _check_trace_comm(ctx: Context) -> str:
    for n in (2, 3):
        names = tuple(f"{p}{i}{j}" for p in ("a", "b") for i in range(n) for j in range(n))
        A = PolyMatrix(
            [[Polynomial.variable(names, f"a{i}{j}") for j in range(n)] for i in range(n)]
        )
        B = PolyMatrix(
            [[Polynomial.variable(names, f"b{i}{j}") for j in range(n)] for i in range(n)]
        )
        _require_zero((A * B).trace() - (B * A).trace(), f"tr(AB)-tr(BA) at size {n}")
    return "symbolic identity at sizes 2 and 3"


@check("det3-symmetric-pattern", "3x3 symmetric determinant expands to the six-term pattern")
def _check_det3(ctx: Context) -> str:
    names = ("v11", "v22", "v33", "v12", "v13", "v23")
    v11, v22, v33, v12, v13, v23 = Polynomial.symbols(*names)
    gram = PolyMatrix([[v11, v12, v13], [v12, v22, v23], [v13, v23, v33]])
    expected = (
        v11 * v22 * v33 + 2 * v12 * v13 * v23
        - v33 * v12 * v12 - v22 * v13 * v13 - v11 * v23 * v23
    )
    _require_zero(gram.det() - expected, "det3 pattern")
    return "det = v11*v22*v33 + 2*v12*v13*v23 - v33*v12^2 - v22*v13^2 - v11*v23^2"


# ---------------------------------------------------------------------------
# quivers
# ---------------------------------------------------------------------------

_EXPECTED_EXT0 = {
    CaseId.STABLE: 8,
    CaseId.RK2_PLUS_LINE: 9,
    CaseId.THREE_LINES: 10,
    CaseId.TWISTED_PLANE: 12,
    CaseId.ORDER3_TRIPLE: 16,
}


@check("quiver-arrow-counts", "arrow counts and dimension vectors per case",
       (CaseId.THREE_LINES.value, CaseId.TWISTED_PLANE.value, CaseId.RK2_PLUS_LINE.value))
def _check_quivers(ctx: Context) -> str:
    q3 = build_ext_quiver(bundle_case(CaseId.THREE_LINES))
    _require(
        all(q3.arrows[i][i] == 2 for i in range(3))
        and all(q3.arrows[i][j] == 1 for i in range(3) for j in range(3) if i != j)
        and q3.alpha == (1, 1, 1),
        "triangle quiver: expected two loops per vertex, one arrow per ordered pair",
    )
    qt = build_ext_quiver(bundle_case(CaseId.TWISTED_PLANE))
    _require(
        qt.arrows == ((2, 1), (1, 2)) and qt.alpha == (2, 1),
        "twisted-plane quiver: expected two loops each, one arrow each direction, alpha (2,1)",
    )
    qr = build_ext_quiver(bundle_case(CaseId.RK2_PLUS_LINE))
    _require(
        qr.arrows == ((5, 2), (2, 2)) and qr.alpha == (1, 1),
        "rank-2-plus-line quiver: expected loops (5,2) and two arrows each direction",
    )
    return "loops/arrows match for three-lines, twisted-plane, rk2-plus-line"


@check("quiver-ext0-dims", "slice dimensions 8, 9, 10, 12, 16", ALL_CASES)
def _check_ext0(ctx: Context) -> str:
    got = {c: build_ext_quiver(bundle_case(c)).ext0_dim() for c in CaseId}
    _require(got == _EXPECTED_EXT0, f"slice dims {got} differ from {_EXPECTED_EXT0}")
    return "dim Ext(E,E)_0 = 8, 9, 10, 12, 16 across the five cases"


def _brute_force_cycles(quiver, max_len):
    arrows = quiver.arrow_list()
    found = set()
    for length in range(1, max_len + 1):
        for combo in product(arrows, repeat=length):
            ok = all(combo[k].target == combo[k + 1].source for k in range(length - 1))
            if ok and combo[-1].target == combo[0].source:
                found.add(canonical_rotation(combo))
    return found


@check("cycle-enumeration-oracle", "cycle enumeration matches a brute-force walk",
       (CaseId.THREE_LINES.value, CaseId.TWISTED_PLANE.value))
def _check_cycles(ctx: Context) -> str:
    checked = []
    for case, max_len in ((CaseId.THREE_LINES, 4), (CaseId.TWISTED_PLANE, 3)):
        quiver = build_ext_quiver(bundle_case(case)).loops_removed()
        fast = enumerate_cycles(quiver, max_len)
        _require(len(set(fast)) == len(fast), f"{case.value}: duplicate rotation classes")
        _require(
            set(fast) == _brute_force_cycles(quiver, max_len),
            f"{case.value}: enumeration differs from brute force at max_len {max_len}",
        )
        checked.append(f"{case.value}:{len(fast)}")
    q3 = build_ext_quiver(bundle_case(CaseId.THREE_LINES)).loops_removed()
    got = enumerate_cycles(q3, 3)
    _require(len(got) == 5, f"triangle quiver: expected 5 rotation classes, got {len(got)}")
    return f"rotation classes {', '.join(checked)}; triangle has exactly 5 up to length 3"


@check("trace-rotation-invariance", "cycle traces are rotation invariant",
       (CaseId.TWISTED_PLANE.value,))
def _check_rotation(ctx: Context) -> str:
    quiver = build_ext_quiver(bundle_case(CaseId.TWISTED_PLANE)).loops_removed()
    rep = generic_representation(quiver)
    cycle = (Arrow(0, 1, 0), Arrow(1, 0, 0))
    base = trace_invariant(rep, cycle).value
    for i in range(1, len(cycle)):
        rotated = cycle[i:] + cycle[:i]
        _require_zero(trace_invariant(rep, rotated).value - base, "rotated trace differs")
    return "trace of the 2-cycle with 2-dimensional vertex is rotation invariant"


@check("rep-variable-count", "generic representations carry one variable per entry", ALL_CASES)
def _check_rep_vars(ctx: Context) -> str:
    for case in CaseId:
        quiver = build_ext_quiver(bundle_case(case))
        rep = generic_representation(quiver)
        _require(
            len(rep.variables) == quiver.ext_dim(),
            f"{case.value}: variable count {len(rep.variables)} != {quiver.ext_dim()}",
        )
    return "variable count equals sum of arrow block sizes in all five cases"


# ---------------------------------------------------------------------------
# case models
# ---------------------------------------------------------------------------


@check("rk2-relation", "u11*u22 - u12*u21 vanishes identically", CaseId.RK2_PLUS_LINE.value)
def _check_rk2(ctx: Context) -> str:
    for residual in equation_residuals(ctx.model(CaseId.RK2_PLUS_LINE)):
        _require_zero(residual, "rk2-plus-line equation")
    return "full symbolic expansion through u_ij = X_i*Y_j is zero"


@check("three-lines-relation", "Y4*Y5 - Y1*Y2*Y3 vanishes identically", CaseId.THREE_LINES.value)
def _check_three_lines(ctx: Context) -> str:
    for residual in equation_residuals(ctx.model(CaseId.THREE_LINES)):
        _require_zero(residual, "three-lines equation")
    return "full symbolic expansion through the cycle traces is zero"


@check("twisted-identity", "w^2 + 18 det(tr(b_i b_j)) = 0 for generic matrices", CaseId.TWISTED_PLANE.value)
def _check_twisted_identity(ctx: Context) -> str:
    _require_zero(twisted_identity_residual(18), "w^2 + 18 det")
    return "zero polynomial in the 12 generic matrix entries"


@check("twisted-rank1-identity", "u3^2 - 2 v33 = 0 on the rank-one chart", CaseId.TWISTED_PLANE.value)
def _check_twisted_rank1(ctx: Context) -> str:
    _require_zero(twisted_rank_one_residual(), "u3^2 - 2 v33")
    return "zero polynomial in the outer-product variables"


@check("twisted-sample-point", "frozen sample point evaluates as computed by hand", CaseId.TWISTED_PLANE.value)
def _check_twisted_sample(ctx: Context) -> str:
    invs = {i.name: i for i in twisted_plane_invariants(rank_one=True)}
    point = {
        "a1_11": 1, "a1_12": 0, "a1_21": 0, "a1_22": 0,
        "a2_11": 0, "a2_12": 1, "a2_21": 0, "a2_22": 0,
        "l1": 1, "l2": 0, "v1": 0, "v2": 1,
    }
    values = {name: inv.value.evaluate(point) for name, inv in invs.items()}
    expected = {
        "v11": Fraction(1, 2), "v22": 0, "v33": 0,
        "v12": 0, "v13": 0, "v23": 1, "w": 3,
    }
    for name, want in expected.items():
        _require(values[name] == want, f"{name} = {values[name]}, expected {want}")
    det = (
        values["v11"] * values["v22"] * values["v33"]
        + 2 * values["v12"] * values["v13"] * values["v23"]
        - values["v33"] * values["v12"] ** 2
        - values["v22"] * values["v13"] ** 2
        - values["v11"] * values["v23"] ** 2
    )
    _require(det == Fraction(-1, 2), f"det(v) = {det}, expected -1/2")
    _require(values["w"] ** 2 + 18 * det == 0, "w^2 + 18 det != 0 at the sample")
    return "v11 = 1/2, v23 = 1, w = 3, det(v) = -1/2, w^2 + 18 det = 0"


@check("twisted-v-symmetric", "tr(b_i b_j) is symmetric in i, j", CaseId.TWISTED_PLANE.value)
def _check_v_symmetric(ctx: Context) -> str:
    invs = twisted_plane_invariants(rank_one=False)
    variables = invs[0].value.variables
    mats = {}
    for prefix in ("a1", "a2", "a3"):
        entries = [[Polynomial.variable(variables, f"{prefix}_{i}{j}") for j in (1, 2)] for i in (1, 2)]
        mats[prefix] = PolyMatrix(entries).traceless()
    for i, j in (("a1", "a2"), ("a1", "a3"), ("a2", "a3")):
        _require_zero(
            (mats[i] * mats[j]).trace() - (mats[j] * mats[i]).trace(),
            f"tr(b{i} b{j}) - tr(b{j} b{i})",
        )
    return "tr(b_i b_j) = tr(b_j b_i) symbolically for all pairs"


@check("twisted-w-alternating", "swapping two arguments negates w", CaseId.TWISTED_PLANE.value)
def _check_w_alt(ctx: Context) -> str:
    invs = {i.name: i for i in twisted_plane_invariants(rank_one=False)}
    w = invs["w"].value
    swap = {}
    for i, j in (("1", "2"), ("2", "1")):
        for p in ("11", "12", "21", "22"):
            swap[f"a{i}_{p}"] = Polynomial.variable(w.variables, f"a{j}_{p}")
    swapped = w.substitute(swap).with_variables(w.variables)
    _require_zero(swapped + w, "w under the swap of b1 and b2")
    return "exchanging the first two matrices sends w to -w"


@check("ambient-table", "ambient dimensions, equation counts, expected dimension 8", ALL_CASES)
def _check_ambient(ctx: Context) -> str:
    expected = {
        CaseId.STABLE: (8, 0),
        CaseId.RK2_PLUS_LINE: (9, 1),
        CaseId.THREE_LINES: (9, 1),
        CaseId.TWISTED_PLANE: (10, 2),
        CaseId.ORDER3_TRIPLE: (9, 1),
    }
    for case, (ambient, eqs) in expected.items():
        model = ctx.model(case)
        _require(
            model.ambient_dim == ambient and len(model.equations) == eqs,
            f"{case.value}: ambient {model.ambient_dim}, equations {len(model.equations)}",
        )
        _require(model.expected_dim == 8, f"{case.value}: expected_dim {model.expected_dim}")
    return "ambient (8,9,9,10,9), equations (0,1,1,2,1), expected dimension 8 everywhere"


@check("order3-weights", "generator weights (2,2,2,3,3,3,3,4,6)", CaseId.ORDER3_TRIPLE.value)
def _check_order3_weights(ctx: Context) -> str:
    weights = tuple(g.weight for g in order3_generators())
    _require(weights == (2, 2, 2, 3, 3, 3, 3, 4, 6), f"weights {weights}")
    return "weights equal the total degrees of the trace words"


@check("order3-commuting-kill", "v and w vanish on commuting pairs", CaseId.ORDER3_TRIPLE.value)
def _check_order3_commuting(ctx: Context) -> str:
    gens = {g.name: g for g in order3_generators()}
    to_x = {
        f"y{i}{j}": Polynomial.variable(gens["T8"].value.variables, f"x{i}{j}")
        for i, j in ((1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3), (3, 1), (3, 2))
    }
    for name in ("T8", "T9"):
        collapsed = gens[name].value.substitute(to_x).with_variables(gens[name].value.variables)
        _require_zero(collapsed, f"{name} at y = x")
    return "T8(x,x) = 0 and T9(x,x) = 0 exactly"


@check("twisted-jacobian-rank", "ten invariants have Jacobian rank 8 on the rank-one locus", CaseId.TWISTED_PLANE.value)
def _check_twisted_jacobian(ctx: Context) -> str:
    invs = twisted_plane_invariants(rank_one=True)
    variables = invs[0].value.variables
    rng = ctx.rng("twisted-jacobian")
    gradients = [[inv.value.derivative(v) for v in variables] for inv in invs]
    for _ in range(5):
        point = {v: rng.randint(-ctx.config.entry_bound, ctx.config.entry_bound) for v in variables}
        matrix = [[g.evaluate(point) for g in row] for row in gradients]
        rank = rational_rank(matrix)
        if rank == 8:
            return "Jacobian rank 8 at a random rank-one point: independent modulo the two relations"
    raise CheckFailure(f"Jacobian rank {rank} != 8 after retries")


# ---------------------------------------------------------------------------
# relation mining
# ---------------------------------------------------------------------------


def _brute_monomial_count(weights: Sequence[int], bound: int) -> int:
    if not weights:
        return 1
    head, *tail = weights
    return sum(
        _brute_monomial_count(tail, bound - e * head) for e in range(bound // head + 1)
    )


@check("monomial-enumeration", "weighted monomial bases are exhaustive and duplicate-free")
def _check_monomials(ctx: Context) -> str:
    cases = [((2, 2, 2, 3, 3, 3, 3, 4, 6), 12), ((2, 2, 2, 3, 3), 6), ((1, 1, 2), 5)]
    counts = []
    for weights, bound in cases:
        monos = weighted_monomials(weights, bound)
        _require(len(set(monos)) == len(monos), f"duplicates for weights {weights}")
        brute = _brute_monomial_count(weights, bound)
        _require(len(monos) == brute, f"{len(monos)} monomials vs brute-force {brute}")
        counts.append(str(len(monos)))
    return f"counts {', '.join(counts)} match the brute-force recursion"


@check("pit-zero", "identity testing returns sound verdicts and witnesses")
def _check_pit(ctx: Context) -> str:
    scheme = SampleScheme(ctx.config.seed, 50, ctx.config.entry_bound)
    identity = twisted_identity_residual(18)
    report = pit_zero(identity, scheme)
    _require(report.zero_at_all_samples, "w^2 + 18 det reported nonzero")
    w = {i.name: i for i in twisted_plane_invariants(rank_one=False)}["w"].value
    witness = pit_zero(w, scheme)
    _require(not witness.zero_at_all_samples, "w reported zero at all samples")
    _require(
        w.evaluate(witness.witness_point) == witness.witness_value != 0,
        "witness does not re-evaluate to its reported nonzero value",
    )
    zero = Polynomial.zero(w.variables)
    _require(pit_zero(zero, scheme).zero_at_all_samples, "zero polynomial reported nonzero")
    return "identity zero at 50 samples; witness for w re-evaluates nonzero; 0 is zero"


@check("mine-three-lines", "mining recovers Y4*Y5 = Y1*Y2*Y3", CaseId.THREE_LINES.value)
def _check_mine_three_lines(ctx: Context) -> str:
    cert = mine_for_case(
        CaseId.THREE_LINES, seed=ctx.config.seed, max_nullity=1, residual_samples=50
    )
    _require(len(cert.nullspace) == 1, f"nullspace dimension {len(cert.nullspace)}")
    relation = cert.relation_polynomials()[0]
    y = {n: Polynomial.variable(relation.variables, n) for n in relation.variables}
    expected = y["Y1"] * y["Y2"] * y["Y3"] - y["Y4"] * y["Y5"]
    _require_zero(relation - expected, "mined relation minus the stated one")
    return "one relation at weight 6, equal to Y1*Y2*Y3 - Y4*Y5 after normalization"


@check("mine-twisted", "mining recovers w^2 + 18 det(v)", CaseId.TWISTED_PLANE.value)
def _check_mine_twisted(ctx: Context) -> str:
    cert = mine_for_case(
        CaseId.TWISTED_PLANE, seed=ctx.config.seed, max_nullity=1, residual_samples=50
    )
    _require(len(cert.nullspace) == 1, f"nullspace dimension {len(cert.nullspace)}")
    relation = cert.relation_polynomials()[0]
    c = {n: Polynomial.variable(relation.variables, n) for n in relation.variables}
    det = (
        c["v11"] * c["v22"] * c["v33"] + 2 * c["v12"] * c["v13"] * c["v23"]
        - c["v33"] * c["v12"] ** 2 - c["v22"] * c["v13"] ** 2 - c["v11"] * c["v23"] ** 2
    )
    _require_zero(18 * relation - (c["w"] ** 2 + 18 * det), "18*mined minus (w^2 + 18 det)")
    return "one relation at weight 6; 18 times it equals w^2 + 18 det(v_ij)"


@check("order3-certificate", "the pinned relation: principal, T9^2-bearing, symbolically zero", CaseId.ORDER3_TRIPLE.value)
def _check_order3_cert(ctx: Context) -> str:
    relation, cert = order3_relation(data_dir=ctx.config.data_dir)
    below = [n for d, n in cert.per_degree_nullity if d < 12 and n]
    _require(not below, f"unexpected lower-weight relations: {below}")
    top = dict(cert.per_degree_nullity).get(12)
    _require(top == 1, f"nullity at weight 12 is {top}, expected 1")
    t9sq = tuple(2 if n == "T9" else 0 for n in relation.variables)
    _require(bool(relation.coefficient(t9sq)), "relation does not contain T9^2")
    verified = verify_certificate(
        cert, order3_generators(), residual_samples=ctx.config.samples, symbolic=True
    )
    return (
        f"nullity 1 at weight 12, 0 below; T9^2 coefficient {relation.coefficient(t9sq)}; "
        f"symbolic expansion zero; {verified.residual_check} fresh samples zero"
    )


@check("mining-determinism", "identical seeds give bit-identical certificates",
       (CaseId.THREE_LINES.value,))
def _check_mining_det(ctx: Context) -> str:
    a = mine_for_case(CaseId.THREE_LINES, seed=ctx.config.seed, residual_samples=0)
    b = mine_for_case(CaseId.THREE_LINES, seed=ctx.config.seed, residual_samples=0)
    _require(a.dumps() == b.dumps(), "two identical mining runs produced different bytes")
    return "two runs at the same seed serialize to identical bytes"


# ---------------------------------------------------------------------------
# involution
# ---------------------------------------------------------------------------

_SIGMA_CASES = (
    CaseId.RK2_PLUS_LINE.value,
    CaseId.THREE_LINES.value,
    CaseId.TWISTED_PLANE.value,
    CaseId.ORDER3_TRIPLE.value,
)

_EXPECTED_ACTIONS = {
    CaseId.RK2_PLUS_LINE: {"u11": FIX, "u22": FIX, "u12": (SWAP, "u21"), "u21": (SWAP, "u12")},
    CaseId.THREE_LINES: {"Y1": FIX, "Y2": FIX, "Y3": FIX, "Y4": (SWAP, "Y5"), "Y5": (SWAP, "Y4")},
    CaseId.TWISTED_PLANE: {f"X{i}": FIX for i in range(1, 10)} | {"X10": NEGATE},
    CaseId.ORDER3_TRIPLE: {f"T{i}": FIX for i in range(1, 9)} | {"T9": NEGATE},
}


@check("action-involutive", "every action applied twice is the identity", _SIGMA_CASES)
def _check_involutive(ctx: Context) -> str:
    for case in _EXPECTED_ACTIONS:
        model = ctx.model(case)
        action = sigma_action_on_generators(case, model)
        names = model.coordinate_names
        for name in names:
            v = Polynomial.variable(names, name)
            _require_zero(action.apply(action.apply(v)) - v, f"{case.value}: {name} not involutive")
    return "double application fixes every coordinate in all four cases"


@check("action-tables", "computed action tables match the stated ones", _SIGMA_CASES)
def _check_actions(ctx: Context) -> str:
    for case, expected in _EXPECTED_ACTIONS.items():
        action = sigma_action_on_generators(case, ctx.model(case))
        table = action.table
        for name, want in expected.items():
            got = table[name]
            want_pair = want if isinstance(want, tuple) else (want, None)
            _require(got == want_pair, f"{case.value}: {name} -> {got}, expected {want_pair}")
        for name, (kind, _) in table.items():
            if name not in expected:
                _require(kind == FIX, f"{case.value}: slice coordinate {name} not fixed")
    return "u_ij swap, Y4/Y5 swap, w and T9 negate, all else fixed; computed, not transcribed"


@check("action-equation-compat", "equations map to themselves up to sign", _SIGMA_CASES)
def _check_eq_compat(ctx: Context) -> str:
    for case in _EXPECTED_ACTIONS:
        model = ctx.model(case)
        action = sigma_action_on_generators(case, model)
        _require(equations_sigma_compatible(model, action), f"{case.value}: equations not compatible")
    return "every defining equation is fixed up to sign in all four cases"


@check("fixed-models", "fixed loci match the stated equations and dimensions", _SIGMA_CASES)
def _check_fixed_models(ctx: Context) -> str:
    rk2 = ctx.fixed(CaseId.RK2_PLUS_LINE)
    names = rk2.coordinate_names
    _require(rk2.ambient_dim == 8, f"rk2 fixed ambient {rk2.ambient_dim}")
    c = {n: Polynomial.variable(names, n) for n in names}
    _require_zero(rk2.equations[0] - (c["X3"] ** 2 - c["X1"] * c["X2"]), "rk2 fixed equation")

    tl = ctx.fixed(CaseId.THREE_LINES)
    names = tl.coordinate_names
    _require(tl.ambient_dim == 8, f"three-lines fixed ambient {tl.ambient_dim}")
    c = {n: Polynomial.variable(names, n) for n in names}
    _require_zero(tl.equations[0] - (c["Z4"] ** 2 - c["Z1"] * c["Z2"] * c["Z3"]), "three-lines fixed equation")

    tw = ctx.fixed(CaseId.TWISTED_PLANE)
    names = tw.coordinate_names
    _require(tw.ambient_dim == 9 and len(tw.equations) == 2, "twisted fixed shape")
    c = {n: Polynomial.variable(names, n) for n in names}
    det = (
        c["X4"] * c["X5"] * c["X6"] + 2 * c["X7"] * c["X8"] * c["X9"]
        - c["X6"] * c["X7"] ** 2 - c["X5"] * c["X8"] ** 2 - c["X4"] * c["X9"] ** 2
    )
    _require_zero(tw.equations[0] - det, "twisted fixed first equation (18 dropped)")
    _require_zero(tw.equations[1] - (c["X3"] ** 2 - 2 * c["X6"]), "twisted fixed second equation")

    o3 = ctx.fixed(CaseId.ORDER3_TRIPLE)
    _require(o3.ambient_dim == 8, f"order3 fixed ambient {o3.ambient_dim}")
    for fixed in (rk2, tl, tw, o3):
        _require(fixed.expected_dim == 7, f"{fixed.case_id.value} fixed expected_dim {fixed.expected_dim}")
    return "X3^2 - X1*X2; Z4^2 - Z1*Z2*Z3; the de-scaled sextic pair; all expected dimension 7"


@check("order3-fixed-substitution", "order3 fixed equation is the relation at T9 = 0", CaseId.ORDER3_TRIPLE.value)
def _check_order3_fixed(ctx: Context) -> str:
    model = ctx.model(CaseId.ORDER3_TRIPLE)
    fixed = ctx.fixed(CaseId.ORDER3_TRIPLE)
    relation = model.equations[0]
    at_zero = relation.substitute({"T9": 0}).with_variables(fixed.coordinate_names)
    from .exactpoly import content_normalized

    normalized = content_normalized(at_zero)
    _, lead = normalized.leading_term()
    if lead < 0:
        normalized = -normalized
    _require_zero(fixed.equations[0] - normalized, "fixed equation vs relation|T9=0")
    return "substituting T9 = 0 into the mined relation reproduces the fixed equation exactly"


# ---------------------------------------------------------------------------
# geometry
# ---------------------------------------------------------------------------


@check("quadric-ranks", "quadric ranks 4, 3, 2, 1 where stated")
def _check_quadric_ranks(ctx: Context) -> str:
    u11, u12, u21, u22 = Polynomial.symbols("u11", "u12", "u21", "u22")
    _require(quadric_rank(u11 * u22 - u12 * u21) == 4, "u11*u22 - u12*u21 rank")
    x1, x2, x3 = Polynomial.symbols("X1", "X2", "X3")
    _require(quadric_rank(x3 * x3 - x1 * x2) == 3, "X3^2 - X1*X2 rank")
    y4, y5 = Polynomial.symbols("Y4", "Y5")
    _require(quadric_rank(y4 * y5) == 2, "Y4*Y5 rank")
    (x10,) = Polynomial.symbols("X10")
    _require(quadric_rank(x10 * x10) == 1, "X10^2 rank")
    return "ranks 4, 3, 2, 1 for the four reference quadrics"


def _random_unimodular(rng: random.Random, n: int) -> list[list[int]]:
    m = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(3 * n):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        coeff = rng.randint(-3, 3)
        for k in range(n):
            m[i][k] += coeff * m[j][k]
    return m


@check("quadric-rank-invariance", "rank is invariant under unimodular changes")
def _check_rank_invariance(ctx: Context) -> str:
    rng = ctx.rng("unimodular")
    u11, u12, u21, u22 = Polynomial.symbols("u11", "u12", "u21", "u22")
    x1, x2, x3 = Polynomial.symbols("X1", "X2", "X3")
    (x10,) = Polynomial.symbols("X10")
    for q in (u11 * u22 - u12 * u21, x3 * x3 - x1 * x2, x10 * x10):
        base = quadric_rank(q)
        names = q.variables
        for _ in range(10):
            m = _random_unimodular(rng, len(names))
            bindings = {}
            for i, name in enumerate(names):
                image = Polynomial.zero(names)
                for j, other in enumerate(names):
                    image = image + m[i][j] * Polynomial.variable(names, other)
                bindings[name] = image
            changed = q.substitute(bindings).with_variables(names)
            _require(quadric_rank(changed) == base, f"rank changed under a unimodular map")
    return "10 random changes of coordinates per quadric leave the rank unchanged"


_EXPECTED_CONES = {
    CaseId.STABLE: (ConeKind.FULL_SPACE, None, 8),
    CaseId.RK2_PLUS_LINE: (ConeKind.QUADRIC, 4, 9),
    CaseId.THREE_LINES: (ConeKind.QUADRIC, 2, 9),
    CaseId.TWISTED_PLANE: (ConeKind.DOUBLE_HYPERPLANE, 1, 9),
    CaseId.ORDER3_TRIPLE: (ConeKind.DOUBLE_HYPERPLANE, 1, 9),
}

_EXPECTED_FIXED_CONES = {
    CaseId.RK2_PLUS_LINE: (ConeKind.QUADRIC, 3, 8),
    CaseId.THREE_LINES: (ConeKind.DOUBLE_HYPERPLANE, 1, 8),
    CaseId.TWISTED_PLANE: (ConeKind.CUBIC_CONE, None, 8),
    CaseId.ORDER3_TRIPLE: (ConeKind.TRIPLE_HYPERPLANE, None, 8),
}


@check("cone-classifications", "tangent cones match the stated classification table", ALL_CASES)
def _check_cones(ctx: Context) -> str:
    for case, (kind, rank, ambient) in _EXPECTED_CONES.items():
        cone = eliminate_and_cone(ctx.model(case))
        _require(
            cone.kind is kind and cone.rank == rank and cone.ambient_dim == ambient,
            f"{case.value}: got ({cone.kind.value}, rank {cone.rank}, ambient {cone.ambient_dim})",
        )
    o3 = eliminate_and_cone(ctx.model(CaseId.ORDER3_TRIPLE))
    t9sq = o3.cone_equations[0]
    names = t9sq.variables
    pure = tuple(2 if n == "T9" else 0 for n in names)
    _require(
        set(t9sq.terms) == {pure},
        f"order3 cone is {t9sq}, expected a multiple of T9^2",
    )
    for case, (kind, rank, ambient) in _EXPECTED_FIXED_CONES.items():
        cone = eliminate_and_cone(ctx.fixed(case))
        _require(
            cone.kind is kind and cone.rank == rank and cone.ambient_dim == ambient,
            f"{case.value} fixed: got ({cone.kind.value}, rank {cone.rank}, ambient {cone.ambient_dim})",
        )
    tw = eliminate_and_cone(ctx.fixed(CaseId.TWISTED_PLANE))
    cubic = tw.cone_equations[0]
    c = {n: Polynomial.variable(cubic.variables, n) for n in cubic.variables}
    expected = 2 * c["X7"] * c["X8"] * c["X9"] - c["X5"] * c["X8"] ** 2 - c["X4"] * c["X9"] ** 2
    _require_zero(cubic - expected, "twisted fixed cone equation")
    o3f = eliminate_and_cone(ctx.fixed(CaseId.ORDER3_TRIPLE))
    L = o3f.linear_form
    _require(
        L is not None and set(L.terms) == {tuple(1 if n == "T8" else 0 for n in L.variables)},
        "order3 fixed triple hyperplane is not supported on T8",
    )
    return "full A^8; quadrics of rank 4, 2; double hyperplanes; the stated cubic cone; T8-triple hyperplane"


@check("lci-certificates", "Jacobian rank equals equation count; dims 8 and 7", ALL_CASES)
def _check_lci(ctx: Context) -> str:
    scheme = ctx.scheme(20)
    for case in CaseId:
        model = ctx.model(case)
        cert = certify_lci(model, scheme)
        _require(
            cert.is_lci and cert.dim == 8 and cert.jacobian_rank == len(model.equations),
            f"{case.value}: rank {cert.jacobian_rank}, dim {cert.dim}",
        )
        if case is CaseId.STABLE:
            continue
        fixed = ctx.fixed(case)
        fcert = certify_lci(fixed, scheme)
        _require(
            fcert.is_lci and fcert.dim == 7 and fcert.jacobian_rank == len(fixed.equations),
            f"{case.value} fixed: rank {fcert.jacobian_rank}, dim {fcert.dim}",
        )
    return "all five models certify at dimension 8, all four fixed loci at dimension 7"


@check("elimination-order-independence", "cone output ignores equation ordering",
       (CaseId.TWISTED_PLANE.value,))
def _check_elim_order(ctx: Context) -> str:
    for case in (CaseId.TWISTED_PLANE,):
        model = ctx.model(case)
        reversed_model = LocalModel(
            model.case_id, model.coordinates, tuple(reversed(model.equations)), model.rep_variables
        )
        a = eliminate_and_cone(model)
        b = eliminate_and_cone(reversed_model)
        _require(
            a.kind is b.kind and a.rank == b.rank and set(a.cone_equations) == set(b.cone_equations),
            f"{case.value}: classification depends on equation order",
        )
        fixed = ctx.fixed(case)
        rf = LocalModel(
            fixed.case_id, fixed.coordinates, tuple(reversed(fixed.equations)), fixed.rep_variables
        )
        fa, fb = eliminate_and_cone(fixed), eliminate_and_cone(rf)
        _require(
            fa.kind is fb.kind and set(fa.cone_equations) == set(fb.cone_equations),
            f"{case.value} fixed: classification depends on equation order",
        )
    return "reversing the equation list changes nothing for the two-equation models"


# ---------------------------------------------------------------------------
# runner
# ---------------------------------------------------------------------------


def run_checks(
    config: VerifyConfig | None = None, cases: Sequence[str] | None = None
) -> list[CheckResult]:
    """Run the registered checks, optionally restricted to one case tag."""
    config = config or VerifyConfig()
    ctx = Context(config)
    wanted = set(cases) if cases else None
    results: list[CheckResult] = []
    for c in CHECKS:
        if wanted is not None and not (set(c.cases) & wanted):
            continue
        try:
            detail = c.run(ctx)
            results.append(CheckResult(c.check_id, c.name, c.case, True, detail))
        except CheckFailure as err:
            results.append(CheckResult(c.check_id, c.name, c.case, False, str(err)))
        except Exception as err:  # a crash inside a check is a failed check
            results.append(
                CheckResult(c.check_id, c.name, c.case, False, f"{type(err).__name__}: {err}")
            )
    return results
