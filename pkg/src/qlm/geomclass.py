"""Classification of local models: tangent cones and smoothness certificates.

Tangent cones at the origin are computed by explicit linear elimination
(an equation containing a variable in a single, purely linear term is
solved for it) followed by lowest-degree parts, which suffices for every
model produced here.  Cones are classified exactly: quadric ranks over
the rationals, hyperplane powers by exact root extraction.  Local
complete intersection certificates come from exact Jacobian ranks at
random points sampled on the model through the invariant definitions.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

from .casemodels import LocalModel, random_rep_point, sample_coordinate_point
from .exactpoly import DomainError, Polynomial, StructuralError
from .involution import FixedModel, symmetric_rep_point
from .linalg import rational_rank
from .relminer import SampleScheme


class ConeKind(str, Enum):
    FULL_SPACE = "full-space"
    QUADRIC = "quadric"
    DOUBLE_HYPERPLANE = "double-hyperplane"
    TRIPLE_HYPERPLANE = "triple-hyperplane"
    CUBIC_CONE = "cubic-cone"
    OTHER = "other"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


@dataclass(frozen=True)
class ConeClassification:
    """Tangent cone after elimination, with its structural label.

    A double hyperplane is the same thing as a rank-1 quadric; the rank
    field is always present for degree-2 cones, so either phrasing can
    be checked against this object.
    """

    kind: ConeKind
    ambient_dim: int
    ambient_names: tuple[str, ...]
    cone_equations: tuple[Polynomial, ...]
    rank: int | None = None
    linear_form: Polynomial | None = None
    description: str = ""

    def to_json(self) -> dict:
        doc: dict = {"kind": self.kind.value, "ambient_dim": self.ambient_dim}
        if self.rank is not None:
            doc["rank"] = self.rank
        doc["cone_equations"] = [str(eq) for eq in self.cone_equations]
        return doc


def quadric_rank(q: Polynomial) -> int:
    """Rank of the symmetric Gram matrix of a quadratic form, exactly."""
    if q.is_zero() or not q.is_homogeneous() or q.total_degree() != 2:
        raise DomainError("quadric_rank needs a nonzero homogeneous quadratic form")
    return rational_rank(_gram_matrix(q))


def _gram_matrix(q: Polynomial) -> list[list[Fraction]]:
    n = len(q.variables)
    g = [[Fraction(0)] * n for _ in range(n)]
    for exp, coeff in q.terms.items():
        support = [i for i, e in enumerate(exp) if e]
        if len(support) == 1:
            i = support[0]
            g[i][i] = coeff
        else:
            i, j = support
            g[i][j] = g[j][i] = coeff / 2
    return g


def _square_root_form(q: Polynomial) -> Polynomial | None:
    """L with q = c*L^2, if the quadric has rank 1; None otherwise."""
    g = _gram_matrix(q)
    pivot = next((i for i in range(len(g)) if g[i][i]), None)
    if pivot is None:
        return None
    c = g[pivot][pivot]
    coeffs = [g[pivot][j] / c for j in range(len(g))]
    L = Polynomial(
        q.variables,
        {
            tuple(1 if k == j else 0 for k in range(len(g))): coeffs[j]
            for j in range(len(g))
            if coeffs[j]
        },
    )
    return L if (q - c * L * L).is_zero() else None


def _cube_root_form(q: Polynomial) -> Polynomial | None:
    """L with q = c*L^3, if the cubic is a scaled cube of a linear form."""
    n = len(q.variables)
    for i in range(n):
        cube = tuple(3 if k == i else 0 for k in range(n))
        c = q.coefficient(cube)
        if not c:
            continue
        coeffs = [Fraction(0)] * n
        coeffs[i] = Fraction(1)
        for j in range(n):
            if j == i:
                continue
            mixed = tuple(2 if k == i else (1 if k == j else 0) for k in range(n))
            coeffs[j] = q.coefficient(mixed) / (3 * c)
        L = Polynomial(
            q.variables,
            {
                tuple(1 if k == j else 0 for k in range(n)): coeffs[j]
                for j in range(n)
                if coeffs[j]
            },
        )
        if (q - c * L * L * L).is_zero():
            return L
        return None
    return None


def _eliminable_variable(eq: Polynomial) -> tuple[str, Polynomial] | None:
    """First variable appearing in exactly one term, purely linearly.

    Returns the variable and the polynomial it equals on the zero locus.
    """
    for i, name in enumerate(eq.variables):
        containing = [exp for exp in eq.terms if exp[i]]
        if len(containing) != 1:
            continue
        exp = containing[0]
        if exp[i] != 1 or sum(exp) != 1:
            continue
        c = eq.terms[exp]
        rest = Polynomial(eq.variables, {e: k for e, k in eq.terms.items() if e != exp})
        return name, rest / (-c)
    return None


def eliminate_and_cone(model: LocalModel) -> ConeClassification:
    """Eliminate solvable variables, take lowest-degree parts, classify."""
    names = model.coordinate_names
    eqs = list(model.equations)
    changed = True
    while changed:
        changed = False
        for idx, eq in enumerate(eqs):
            found = _eliminable_variable(eq)
            if found is None:
                continue
            var, solution = found
            remaining = tuple(n for n in names if n != var)
            new_eqs = []
            for j, other in enumerate(eqs):
                if j == idx:
                    continue
                new_eqs.append(other.substitute({var: solution}).with_variables(remaining))
            names = remaining
            eqs = new_eqs
            changed = True
            break
    ambient = len(names)
    cones = tuple(eq.lowest_degree_part() for eq in eqs if not eq.is_zero())
    if not cones:
        return ConeClassification(ConeKind.FULL_SPACE, ambient, names, ())
    if len(cones) > 1:
        return ConeClassification(
            ConeKind.OTHER, ambient, names, cones, description="several cone equations remain"
        )
    q = cones[0]
    degree = q.total_degree()
    if degree == 2:
        rank = quadric_rank(q)
        if rank == 1:
            L = _square_root_form(q)
            if L is None:  # pragma: no cover - rank 1 guarantees a root
                raise DomainError("rank-1 quadric without a square root")
            return ConeClassification(
                ConeKind.DOUBLE_HYPERPLANE, ambient, names, cones, rank=1, linear_form=L
            )
        return ConeClassification(ConeKind.QUADRIC, ambient, names, cones, rank=rank)
    if degree == 3:
        L = _cube_root_form(q)
        if L is not None:
            return ConeClassification(
                ConeKind.TRIPLE_HYPERPLANE, ambient, names, cones, linear_form=L
            )
        return ConeClassification(ConeKind.CUBIC_CONE, ambient, names, cones)
    return ConeClassification(
        ConeKind.OTHER, ambient, names, cones, description=f"degree {degree} cone"
    )


# ---------------------------------------------------------------------------
# local complete intersection certification
# ---------------------------------------------------------------------------


class InconclusiveCertification(RuntimeError):
    """Every sampled point had a rank-deficient Jacobian."""


@dataclass(frozen=True)
class LciCertificate:
    """Exact Jacobian rank at a sampled on-model point."""

    case_id: str
    fixed_locus: bool
    point: tuple[tuple[str, Fraction], ...]
    jacobian_rank: int
    dim: int
    expected_dim: int
    is_lci: bool
    attempts: int

    def to_json(self) -> dict:
        return {
            "point": {name: str(value) for name, value in self.point},
            "jacobian_rank": self.jacobian_rank,
            "dim": self.dim,
            "is_lci": self.is_lci,
        }


def _on_model_point(model: LocalModel, rng, bound: int) -> dict[str, Fraction]:
    if isinstance(model, FixedModel):
        rep_point = symmetric_rep_point(model.parent, rng, bound, model.rep_variables)
        return sample_coordinate_point(model, rng, bound, rep_point=rep_point)
    rep_point = random_rep_point(model.rep_variables, rng, bound)
    return sample_coordinate_point(model, rng, bound, rep_point=rep_point)


def certify_lci(
    model: LocalModel, scheme: SampleScheme, max_retries: int = 20
) -> LciCertificate:
    """Sample on-model points until the Jacobian reaches full expected rank.

    Points are pushed forward through the invariant definitions, never
    solved for, so membership is exact; an equation failing to vanish at
    a sampled point would expose a construction bug and raises.  All
    retries rank-deficient raises InconclusiveCertification, never a
    silent success.
    """
    names = model.coordinate_names
    eq_count = len(model.equations)
    jacobian = [
        [eq.derivative(name) for name in names] for eq in model.equations
    ]
    label = f"lci:{model.case_id.value}:{int(isinstance(model, FixedModel))}"
    rng = scheme.rng(label)
    for attempt in range(1, max_retries + 1):
        point = _on_model_point(model, rng, scheme.entry_bound)
        for eq in model.equations:
            value = eq.evaluate(point)
            if value:
                raise StructuralError(
                    f"sampled point is not on the model: equation value {value}"
                )
        matrix = [[d.evaluate(point) for d in row] for row in jacobian]
        rank = rational_rank(matrix)
        if rank == eq_count:
            dim = model.ambient_dim - rank
            return LciCertificate(
                case_id=model.case_id.value,
                fixed_locus=isinstance(model, FixedModel),
                point=tuple(sorted(point.items())),
                jacobian_rank=rank,
                dim=dim,
                expected_dim=model.expected_dim,
                is_lci=(rank == eq_count and dim == model.expected_dim),
                attempts=attempt,
            )
    raise InconclusiveCertification(
        f"no sampled point of {model.case_id.value} reached Jacobian rank {eq_count} "
        f"in {max_retries} attempts"
    )
