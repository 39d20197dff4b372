"""The five local models: coordinates, generator polynomials, equations.

Each model is a closed subscheme of an affine space whose coordinates are
either free slice directions or invariants of a generic quiver
representation.  All equations the models carry are verified exactly, by
expanding the invariant definitions, in the test and verification
suites; nothing here is asserted numerically.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from typing import Mapping, Sequence

from .exactpoly import DomainError, Polynomial, PolyMatrix, StructuralError
from .quiverext import (
    Arrow,
    CaseId,
    arrow_variable_name,
    build_ext_quiver,
    bundle_case,
    generic_representation,
    trace_invariant,
)

DEFAULT_SAMPLE_BOUND = 10


@dataclass(frozen=True)
class Invariant:
    """A named generator: a polynomial in the representation variables.

    The weight is the generator's degree in the invariant-ring grading,
    where each matrix entry counts 1.  It equals the total degree of the
    value whenever the representation chart is linear in those entries;
    the rank-one chart of the twisted-plane case (a3 = outer product)
    doubles the underlying degree of the a3-generators, so there the two
    numbers legitimately differ.
    """

    name: str
    value: Polynomial
    weight: int
    word: str = ""


@dataclass(frozen=True)
class Coordinate:
    """An ambient coordinate, either free or backed by an Invariant."""

    name: str
    invariant: Invariant | None = None

    @property
    def is_free(self) -> bool:
        return self.invariant is None

    @property
    def weight(self) -> int:
        return 1 if self.invariant is None else self.invariant.weight


@dataclass(frozen=True)
class LocalModel:
    """Ambient coordinates plus defining equations over the coordinate names."""

    case_id: CaseId
    coordinates: tuple[Coordinate, ...]
    equations: tuple[Polynomial, ...]
    rep_variables: tuple[str, ...] = ()

    def __post_init__(self):
        names = self.coordinate_names
        if len(set(names)) != len(names):
            raise StructuralError(f"duplicate coordinate names: {names}")
        for eq in self.equations:
            if eq.variables != names:
                raise StructuralError(
                    f"equation over {eq.variables} does not match coordinates {names}"
                )

    @property
    def coordinate_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.coordinates)

    @property
    def ambient_dim(self) -> int:
        return len(self.coordinates)

    @property
    def expected_dim(self) -> int:
        return self.ambient_dim - len(self.equations)

    def coordinate(self, name: str) -> Coordinate:
        for c in self.coordinates:
            if c.name == name:
                return c
        raise StructuralError(f"no coordinate named {name!r}")

    def invariants(self) -> tuple[Invariant, ...]:
        return tuple(c.invariant for c in self.coordinates if c.invariant is not None)

    def to_json(self) -> dict:
        coords = []
        for c in self.coordinates:
            entry: dict = {"name": c.name, "weight": c.weight}
            if c.invariant is not None and c.invariant.word:
                entry["definition"] = c.invariant.word
            coords.append(entry)
        return {
            "case": self.case_id.value,
            "ambient_dim": self.ambient_dim,
            "expected_dim": self.expected_dim,
            "coordinates": coords,
            "equations": [str(eq) for eq in self.equations],
        }


def coordinate_symbols(names: Sequence[str]) -> dict[str, Polynomial]:
    return {n: Polynomial.variable(tuple(names), n) for n in names}


def _free_coords(prefix: str, count: int) -> list[Coordinate]:
    return [Coordinate(f"{prefix}{i + 1}") for i in range(count)]


# ---------------------------------------------------------------------------
# stable bundle: a smooth point, dim (r^2 - 1)(g - 1) = 8
# ---------------------------------------------------------------------------


def model_stable() -> LocalModel:
    return LocalModel(CaseId.STABLE, tuple(_free_coords("W", 8)), ())


# ---------------------------------------------------------------------------
# F + L with F stable of rank 2: five free directions from the rank-2
# summand and the four products u_ij = X_i*Y_j, a rank-4 quadric in A^9
# ---------------------------------------------------------------------------


def model_rk2_plus_line() -> LocalModel:
    X1, X2, Y1, Y2 = Polynomial.symbols("X1", "X2", "Y1", "Y2")
    rep_vars = X1.variables
    u = {
        (i, j): Invariant(
            f"u{i}{j}",
            [X1, X2][i - 1] * [Y1, Y2][j - 1],
            2,
            f"X{i}*Y{j}",
        )
        for i in (1, 2)
        for j in (1, 2)
    }
    coords = tuple(
        _free_coords("W", 5)
        + [Coordinate(u[key].name, u[key]) for key in ((1, 1), (1, 2), (2, 1), (2, 2))]
    )
    names = tuple(c.name for c in coords)
    c = coordinate_symbols(names)
    equation = c["u11"] * c["u22"] - c["u12"] * c["u21"]
    return LocalModel(CaseId.RK2_PLUS_LINE, coords, (equation,), rep_vars)


# ---------------------------------------------------------------------------
# three distinct line bundles: trace invariants along the cycles of the
# loop-free triangle quiver, subject to Y4*Y5 = Y1*Y2*Y3
# ---------------------------------------------------------------------------

# cycles of the triangle quiver backing each generator (vertices 0-based)
_THREE_LINES_CYCLES: dict[str, tuple[Arrow, ...]] = {
    "Y1": (Arrow(1, 2, 0), Arrow(2, 1, 0)),
    "Y2": (Arrow(0, 2, 0), Arrow(2, 0, 0)),
    "Y3": (Arrow(0, 1, 0), Arrow(1, 0, 0)),
    "Y4": (Arrow(0, 1, 0), Arrow(1, 2, 0), Arrow(2, 0, 0)),
    "Y5": (Arrow(0, 2, 0), Arrow(2, 1, 0), Arrow(1, 0, 0)),
}


def three_lines_representation():
    """Generic representation of the loop-free triangle, entries named X_ij."""
    quiver = build_ext_quiver(bundle_case(CaseId.THREE_LINES)).loops_removed()
    rep = generic_representation(quiver)
    rename = {
        arrow_variable_name(a, 0, 0): f"X{a.source + 1}{a.target + 1}"
        for a in quiver.arrow_list()
    }
    return rep.rename(rename)


@lru_cache(maxsize=1)
def _three_lines_invariants() -> tuple[Invariant, ...]:
    rep = three_lines_representation()
    out = []
    for name, cycle in _THREE_LINES_CYCLES.items():
        ci = trace_invariant(rep, cycle, name)
        word = "*".join(f"X{a.source + 1}{a.target + 1}" for a in cycle)
        out.append(Invariant(name, ci.value, ci.weight, word))
    return tuple(out)


def three_lines_invariants() -> list[Invariant]:
    return list(_three_lines_invariants())


def model_three_lines() -> LocalModel:
    invs = three_lines_invariants()
    rep_vars = invs[0].value.variables
    coords = tuple(_free_coords("W", 4) + [Coordinate(inv.name, inv) for inv in invs])
    c = coordinate_symbols(tuple(cc.name for cc in coords))
    equation = c["Y4"] * c["Y5"] - c["Y1"] * c["Y2"] * c["Y3"]
    return LocalModel(CaseId.THREE_LINES, coords, (equation,), rep_vars)


# ---------------------------------------------------------------------------
# (L x V) + L^-2 with dim V = 2: invariants of a triple of 2x2 matrices,
# the third of rank <= 1, written through the traceless parts b_i
# ---------------------------------------------------------------------------


def _generic_2x2(variables: Sequence[str], prefix: str) -> PolyMatrix:
    v = lambda n: Polynomial.variable(tuple(variables), n)
    return PolyMatrix(
        [
            [v(f"{prefix}_11"), v(f"{prefix}_12")],
            [v(f"{prefix}_21"), v(f"{prefix}_22")],
        ]
    )


def _perm_sign(p: tuple[int, ...]) -> int:
    inversions = sum(1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j])
    return -1 if inversions % 2 else 1


@lru_cache(maxsize=2)
def _twisted_plane_invariants(rank_one: bool) -> tuple[Invariant, ...]:
    """Generators u_i, v_ij, w for a triple of 2x2 matrices.

    With ``rank_one`` the third matrix is the outer product of a column v
    and a row l, the actual local-model situation; without it the third
    matrix is generic, the setting in which w^2 + 18 det(v_ij) = 0 is an
    identity of the invariant ring.
    """
    base = [f"a1_{i}{j}" for i in (1, 2) for j in (1, 2)]
    base += [f"a2_{i}{j}" for i in (1, 2) for j in (1, 2)]
    if rank_one:
        variables = tuple(base + ["l1", "l2", "v1", "v2"])
        l1, l2, v1, v2 = (Polynomial.variable(variables, n) for n in ("l1", "l2", "v1", "v2"))
        a3 = PolyMatrix([[v1 * l1, v1 * l2], [v2 * l1, v2 * l2]])
    else:
        variables = tuple(base + [f"a3_{i}{j}" for i in (1, 2) for j in (1, 2)])
        a3 = _generic_2x2(variables, "a3")
    a = [_generic_2x2(variables, "a1"), _generic_2x2(variables, "a2"), a3]
    b = [m.traceless() for m in a]

    out: list[Invariant] = []
    for i in (1, 2, 3):
        out.append(Invariant(f"u{i}", a[i - 1].trace(), 1, f"tr(a{i})"))
    for i in (1, 2, 3):
        for j in range(i, 4):
            out.append(
                Invariant(f"v{i}{j}", (b[i - 1] * b[j - 1]).trace(), 2, f"tr(b{i}*b{j})")
            )
    w = Polynomial.zero(variables)
    for perm in permutations((0, 1, 2)):
        term = (b[perm[0]] * b[perm[1]] * b[perm[2]]).trace()
        w = w + term * _perm_sign(perm)
    out.append(Invariant("w", w, 3, "sum over permutations s of sign(s)*tr(b_s1*b_s2*b_s3)"))
    return tuple(out)


def twisted_plane_invariants(rank_one: bool = True) -> list[Invariant]:
    return list(_twisted_plane_invariants(rank_one))


# model coordinates X1..X10 name these generators in this order
TWISTED_COORDINATE_GENERATORS = (
    "u1", "u2", "u3", "v11", "v22", "v33", "v12", "v13", "v23", "w",
)


def twisted_gram_det(names: Sequence[str], v: Mapping[str, str]) -> Polynomial:
    """det of the symmetric matrix of the v-generators under a naming map."""
    c = coordinate_symbols(tuple(names))
    g = PolyMatrix(
        [
            [c[v["v11"]], c[v["v12"]], c[v["v13"]]],
            [c[v["v12"]], c[v["v22"]], c[v["v23"]]],
            [c[v["v13"]], c[v["v23"]], c[v["v33"]]],
        ]
    )
    return g.det()


def model_twisted_plane() -> LocalModel:
    invs = {inv.name: inv for inv in twisted_plane_invariants(rank_one=True)}
    rep_vars = invs["u1"].value.variables
    coords = tuple(
        Coordinate(f"X{k + 1}", invs[gen]) for k, gen in enumerate(TWISTED_COORDINATE_GENERATORS)
    )
    names = tuple(c.name for c in coords)
    c = coordinate_symbols(names)
    det = twisted_gram_det(
        names, {"v11": "X4", "v22": "X5", "v33": "X6", "v12": "X7", "v13": "X8", "v23": "X9"}
    )
    eq1 = c["X10"] ** 2 + 18 * det
    eq2 = c["X3"] ** 2 - 2 * c["X6"]
    return LocalModel(CaseId.TWISTED_PLANE, coords, (eq1, eq2), rep_vars)


def twisted_identity_residual(coefficient: int = 18) -> Polynomial:
    """w^2 + coefficient*det(tr(b_i b_j)) for three generic 2x2 matrices.

    Zero exactly when coefficient is 18; the verification suites use
    other values as negative controls.
    """
    invs = {inv.name: inv for inv in twisted_plane_invariants(rank_one=False)}
    gram = PolyMatrix(
        [
            [invs["v11"].value, invs["v12"].value, invs["v13"].value],
            [invs["v12"].value, invs["v22"].value, invs["v23"].value],
            [invs["v13"].value, invs["v23"].value, invs["v33"].value],
        ]
    )
    return invs["w"].value ** 2 + coefficient * gram.det()


def twisted_rank_one_residual() -> Polynomial:
    """u3^2 - 2*v33 in the rank-one variables; identically zero."""
    invs = {inv.name: inv for inv in twisted_plane_invariants(rank_one=True)}
    return invs["u3"].value ** 2 - 2 * invs["v33"].value


# ---------------------------------------------------------------------------
# L x V with L of order 3: pairs of traceless 3x3 matrices
# ---------------------------------------------------------------------------

ORDER3_GENERATOR_NAMES = ("T1", "T2", "T3", "T4", "T5", "T6", "T7", "T8", "T9")
ORDER3_WEIGHTS = (2, 2, 2, 3, 3, 3, 3, 4, 6)


def traceless_pair_3x3() -> tuple[PolyMatrix, PolyMatrix, tuple[str, ...]]:
    """Two generic traceless 3x3 matrices over a shared 16-variable ring."""
    positions = [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3), (3, 1), (3, 2)]
    names = tuple(
        f"{p}{i}{j}" for p in ("x", "y") for i, j in positions
    )

    def build(prefix: str) -> PolyMatrix:
        v = lambda i, j: Polynomial.variable(names, f"{prefix}{i}{j}")
        last = -v(1, 1) - v(2, 2)
        return PolyMatrix(
            [
                [v(1, 1), v(1, 2), v(1, 3)],
                [v(2, 1), v(2, 2), v(2, 3)],
                [v(3, 1), v(3, 2), last],
            ]
        )

    return build("x"), build("y"), names


@lru_cache(maxsize=1)
def _order3_generators() -> tuple[Invariant, ...]:
    x, y, _ = traceless_pair_3x3()
    xx, xy, yx, yy = x * x, x * y, y * x, y * y
    defs = [
        ("T1", xx.trace(), "tr(x^2)"),
        ("T2", xy.trace(), "tr(x*y)"),
        ("T3", yy.trace(), "tr(y^2)"),
        ("T4", (xx * x).trace(), "tr(x^3)"),
        ("T5", (xx * y).trace(), "tr(x^2*y)"),
        ("T6", (xy * y).trace(), "tr(x*y^2)"),
        ("T7", (yy * y).trace(), "tr(y^3)"),
        ("T8", (xx * yy).trace() - (xy * xy).trace(), "tr(x^2*y^2) - tr(x*y*x*y)"),
        ("T9", (xx * yy * xy).trace() - (yy * xx * yx).trace(), "tr(x^2*y^2*x*y) - tr(y^2*x^2*y*x)"),
    ]
    out = [Invariant(name, value, value.total_degree(), word) for name, value, word in defs]
    if tuple(inv.weight for inv in out) != ORDER3_WEIGHTS:
        raise DomainError("generator weights did not come out as (2,2,2,3,3,3,3,4,6)")
    return tuple(out)


def order3_generators() -> list[Invariant]:
    return list(_order3_generators())


def model_order3_triple(
    relation: Polynomial | None = None,
    *,
    data_dir=None,
    validate: str = "symbolic",
) -> LocalModel:
    """The order-3 model; its single relation is mined, never transcribed.

    When ``relation`` is omitted, the pinned certificate is loaded (or the
    relation mined afresh if no certificate is available).  A supplied
    relation is validated by substituting the nine generator definitions:
    ``validate='symbolic'`` demands the full expansion be the zero
    polynomial, ``validate='sampled'`` checks 40 random points, which is
    cheap and still catches any tampering with overwhelming probability.
    """
    invs = order3_generators()
    if relation is None:
        from .relminer import order3_relation

        relation, _ = order3_relation(data_dir=data_dir)
        validate = "sampled"
    relation = relation.with_variables(ORDER3_GENERATOR_NAMES)
    _validate_order3_relation(relation, invs, mode=validate)
    coords = tuple(Coordinate(inv.name, inv) for inv in invs)
    rep_vars = invs[0].value.variables
    return LocalModel(CaseId.ORDER3_TRIPLE, coords, (relation,), rep_vars)


def _validate_order3_relation(relation: Polynomial, invs: Sequence[Invariant], mode: str) -> None:
    if mode == "symbolic":
        residual = relation.substitute({inv.name: inv.value for inv in invs})
        if not residual.is_zero():
            exp, coeff = residual.leading_term()
            raise DomainError(
                "relation does not vanish on the generators; residual leading term "
                f"{coeff}*{residual.monomial_str(exp)}"
            )
    elif mode == "sampled":
        rng = random.Random(0x51C0FFEE)
        rep_vars = invs[0].value.variables
        for _ in range(40):
            point = {v: rng.randint(-DEFAULT_SAMPLE_BOUND, DEFAULT_SAMPLE_BOUND) for v in rep_vars}
            gen_values = {inv.name: inv.value.evaluate(point) for inv in invs}
            value = relation.evaluate(gen_values)
            if value:
                raise DomainError(
                    f"relation does not vanish on the generators; witness value {value} at a random point"
                )
    else:
        raise DomainError(f"unknown validation mode {mode!r}")


# ---------------------------------------------------------------------------
# construction dispatch and on-model sampling
# ---------------------------------------------------------------------------


def build_model(case: CaseId | str, **order3_kwargs) -> LocalModel:
    case = CaseId(case)
    if case is CaseId.STABLE:
        return model_stable()
    if case is CaseId.RK2_PLUS_LINE:
        return model_rk2_plus_line()
    if case is CaseId.THREE_LINES:
        return model_three_lines()
    if case is CaseId.TWISTED_PLANE:
        return model_twisted_plane()
    return model_order3_triple(**order3_kwargs)


def random_rep_point(
    variables: Sequence[str], rng: random.Random, bound: int = DEFAULT_SAMPLE_BOUND
) -> dict[str, int]:
    return {v: rng.randint(-bound, bound) for v in variables}


def push_forward(model: LocalModel, rep_point: Mapping[str, int | Fraction]) -> dict[str, Fraction]:
    """Values of all invariant-backed coordinates at a representation point."""
    return {
        c.name: c.invariant.value.evaluate(rep_point)
        for c in model.coordinates
        if c.invariant is not None
    }


def sample_coordinate_point(
    model: LocalModel,
    rng: random.Random,
    bound: int = DEFAULT_SAMPLE_BOUND,
    rep_point: Mapping[str, int] | None = None,
) -> dict[str, Fraction]:
    """A point on the model: free coordinates random, the rest pushed forward.

    Membership is exact because invariant coordinates are evaluated from a
    common representation point rather than solved for.
    """
    if rep_point is None:
        rep_point = random_rep_point(model.rep_variables, rng, bound)
    point: dict[str, Fraction] = {}
    values = push_forward(model, rep_point)
    for c in model.coordinates:
        if c.invariant is None:
            point[c.name] = Fraction(rng.randint(-bound, bound))
        else:
            point[c.name] = values[c.name]
    return point


def equation_residuals(model: LocalModel) -> list[Polynomial]:
    """Each equation with the invariant definitions substituted in.

    All residuals are the zero polynomial precisely when the stated
    equations hold identically on the representation space.
    """
    bindings = {
        c.name: c.invariant.value for c in model.coordinates if c.invariant is not None
    }
    out = []
    for eq in model.equations:
        residual = eq.substitute(bindings)
        out.append(residual)
    return out
