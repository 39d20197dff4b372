"""The covering involution on each local model and its fixed locus.

The double covering of the theta map induces an involution s on every
non-stable local model.  On the underlying representation variables it
acts by transposition and swap rules; its effect on the invariant
generators is computed here by substitution, never transcribed, and the
fixed-locus models describing the branch sextic are produced by
collapsing swapped coordinates and killing negated ones.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Mapping, Sequence

from .casemodels import Coordinate, LocalModel, build_model
from .exactpoly import DomainError, Polynomial, StructuralError, content_normalized
from .quiverext import CaseId

FIX = "fix"
SWAP = "swap"
NEGATE = "negate"


def sigma_variable_map(case: CaseId | str) -> dict[str, str]:
    """Involution on the representation variables, per case.

    Transposition on matrix entries; the two bases of the off-diagonal
    extension spaces correspond under the involution, hence swap; on the
    rank-one chart the row and column factors trade places.
    """
    case = CaseId(case)
    if case is CaseId.STABLE:
        raise DomainError("the stable case carries no involution data")
    pairs: list[tuple[str, str]] = []
    if case is CaseId.RK2_PLUS_LINE:
        pairs = [("X1", "Y1"), ("X2", "Y2")]
    elif case is CaseId.THREE_LINES:
        pairs = [("X12", "X21"), ("X13", "X31"), ("X23", "X32")]
    elif case is CaseId.TWISTED_PLANE:
        pairs = [("a1_12", "a1_21"), ("a2_12", "a2_21"), ("l1", "v1"), ("l2", "v2")]
    elif case is CaseId.ORDER3_TRIPLE:
        pairs = [(f"{p}{i}{j}", f"{p}{j}{i}") for p in ("x", "y") for i, j in ((1, 2), (1, 3), (2, 3))]
    out: dict[str, str] = {}
    for a, b in pairs:
        out[a] = b
        out[b] = a
    return out


@dataclass(frozen=True)
class InvolutionAction:
    """Rules fix / swap / negate covering every coordinate of a model."""

    case_id: CaseId
    rules: tuple[tuple[str, str, str | None], ...]  # (coordinate, kind, partner)

    def __post_init__(self):
        table = {name: (kind, partner) for name, kind, partner in self.rules}
        if len(table) != len(self.rules):
            raise StructuralError("duplicate coordinate in action rules")
        for name, (kind, partner) in table.items():
            if kind == SWAP:
                if partner is None or table.get(partner) != (SWAP, name):
                    raise StructuralError(f"swap rule for {name} is not an involution")
            elif partner is not None:
                raise StructuralError(f"{kind} rule for {name} cannot carry a partner")

    @property
    def table(self) -> dict[str, tuple[str, str | None]]:
        return {name: (kind, partner) for name, kind, partner in self.rules}

    def apply(self, p: Polynomial) -> Polynomial:
        """Image of a polynomial in the model coordinates under the involution."""
        names = p.variables
        bindings: dict[str, Polynomial] = {}
        for name, kind, partner in self.rules:
            if name not in names:
                continue
            if kind == SWAP:
                bindings[name] = Polynomial.variable(names, partner)  # type: ignore[arg-type]
            elif kind == NEGATE:
                bindings[name] = -Polynomial.variable(names, name)
        return p.substitute(bindings).with_variables(names)

    def to_json(self) -> dict:
        out = {}
        for name, kind, partner in self.rules:
            out[name] = f"swap:{partner}" if kind == SWAP else kind
        return out


def sigma_action_on_generators(
    case: CaseId | str, model: LocalModel | None = None
) -> InvolutionAction:
    """Compute the involution's effect on every model coordinate.

    Invariant-backed coordinates are pushed through the variable-level
    substitution and re-identified among the generators; free slice
    coordinates are fixed, a geometric input rather than a computation
    (the involution acts trivially on the stable summand's own moduli).
    """
    case = CaseId(case)
    if case is CaseId.STABLE:
        raise DomainError("at stable points the involution needs no analysis")
    if model is None:
        model = build_model(case)
    var_map = sigma_variable_map(case)
    rep_vars = model.rep_variables
    bindings = {
        v: Polynomial.variable(rep_vars, var_map[v])
        for v in rep_vars
        if var_map.get(v, v) != v
    }
    by_value: dict[Polynomial, str] = {}
    for c in model.coordinates:
        if c.invariant is not None:
            by_value[c.invariant.value] = c.name
    rules: list[tuple[str, str, str | None]] = []
    for c in model.coordinates:
        if c.invariant is None:
            rules.append((c.name, FIX, None))
            continue
        image = c.invariant.value.substitute(bindings).with_variables(rep_vars)
        if image == c.invariant.value:
            rules.append((c.name, FIX, None))
        elif image == -c.invariant.value:
            rules.append((c.name, NEGATE, None))
        elif image in by_value:
            rules.append((c.name, SWAP, by_value[image]))
        else:
            raise DomainError(
                f"the involution does not permute the generators: image of {c.name} is unrecognized"
            )
    return InvolutionAction(case, tuple(rules))


# display names of fixed-locus coordinates, keyed by the surviving parent
# coordinate (the first member, for a swapped pair); everything else keeps
# its name
_FIXED_RENAMES: dict[CaseId, dict[str, str]] = {
    CaseId.RK2_PLUS_LINE: {"u11": "X1", "u22": "X2", "u12": "X3"},
    CaseId.THREE_LINES: {"Y1": "Z1", "Y2": "Z2", "Y3": "Z3", "Y4": "Z4"},
}

# preferred coordinate order of the fixed models, where renaming scrambles it
_FIXED_ORDER: dict[CaseId, tuple[str, ...]] = {
    CaseId.RK2_PLUS_LINE: ("W1", "W2", "W3", "W4", "W5", "X1", "X2", "X3"),
}


@dataclass(frozen=True)
class FixedModel(LocalModel):
    """Fixed locus of the involution, in collapsed coordinates."""

    parent: CaseId = CaseId.STABLE
    action: InvolutionAction | None = None

    def to_json(self) -> dict:
        doc = super().to_json()
        doc["parent"] = self.parent.value
        if self.action is not None:
            doc["action"] = self.action.to_json()
        return doc


def fixed_locus_model(model: LocalModel, action: InvolutionAction) -> FixedModel:
    """Collapse swapped pairs, kill negated coordinates, reduce the equations.

    Adding the linear equations c - s(c) and eliminating them is exactly
    this collapse, because the involution acts by permutation and sign on
    the coordinates.  Equations are content-normalized; the square of a
    collapsed coordinate, when present, gets a positive coefficient,
    otherwise the graded-lex leading coefficient does.
    """
    if action.case_id is not model.case_id:
        raise StructuralError("action belongs to a different case")
    table = action.table
    renames = _FIXED_RENAMES.get(model.case_id, {})
    new_coords: list[Coordinate] = []
    substitution: dict[str, str | None] = {}  # old name -> new name, None = killed
    for c in model.coordinates:
        kind, partner = table[c.name]
        if kind == NEGATE:
            substitution[c.name] = None
            continue
        if kind == SWAP:
            # only the first member of each pair survives
            partner_index = model.coordinate_names.index(partner)  # type: ignore[arg-type]
            if partner_index < model.coordinate_names.index(c.name):
                substitution[c.name] = substitution[partner]  # type: ignore[index]
                continue
        new_name = renames.get(c.name, c.name)
        substitution[c.name] = new_name
        new_coords.append(Coordinate(new_name, c.invariant))
    order = _FIXED_ORDER.get(model.case_id)
    if order is not None:
        new_coords.sort(key=lambda c: order.index(c.name))
    new_names = tuple(c.name for c in new_coords)

    collapsed_squares = {
        substitution[name]
        for name, (kind, _) in table.items()
        if kind == SWAP and substitution[name] is not None
    }
    bindings: dict[str, Polynomial] = {}
    for old, new in substitution.items():
        if new is None:
            bindings[old] = Polynomial.constant((), 0)
        elif new != old:
            bindings[old] = Polynomial.variable(new_names, new)
    equations: list[Polynomial] = []
    for eq in model.equations:
        reduced = eq.substitute(bindings).with_variables(new_names)
        if reduced.is_zero():
            continue
        reduced = content_normalized(reduced)
        equations.append(_normalize_sign(reduced, collapsed_squares))
    return FixedModel(
        case_id=model.case_id,
        coordinates=tuple(new_coords),
        equations=tuple(equations),
        rep_variables=model.rep_variables,
        parent=model.case_id,
        action=action,
    )


def _normalize_sign(eq: Polynomial, collapsed: set[str]) -> Polynomial:
    for name in eq.variables:
        if name not in collapsed:
            continue
        square = tuple(2 if v == name else 0 for v in eq.variables)
        coeff = eq.coefficient(square)
        if coeff:
            return -eq if coeff < 0 else eq
    _, lead = eq.leading_term()
    return -eq if lead < 0 else eq


def equations_sigma_compatible(model: LocalModel, action: InvolutionAction) -> bool:
    """Every equation maps to plus or minus an equation of the model."""
    eqs = list(model.equations)
    for eq in eqs:
        image = action.apply(eq)
        if not any(image == e or image == -e for e in eqs):
            return False
    return True


def symmetric_rep_point(
    case: CaseId | str, rng: random.Random, bound: int, variables: Sequence[str]
) -> dict[str, int]:
    """A representation point fixed by the involution: sample one value per orbit."""
    var_map = sigma_variable_map(case)
    point: dict[str, int] = {}
    for v in variables:
        if v in point:
            continue
        value = rng.randint(-bound, bound)
        point[v] = value
        point[var_map.get(v, v)] = value
    return point


def build_fixed_model(case: CaseId | str, model: LocalModel | None = None) -> FixedModel:
    case = CaseId(case)
    if model is None:
        model = build_model(case)
    action = sigma_action_on_generators(case, model)
    return fixed_locus_model(model, action)
