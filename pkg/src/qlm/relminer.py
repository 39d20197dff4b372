"""Relation mining by exact evaluation and nullspace computation.

To find every algebraic relation of bounded weighted degree among a list
of generators, evaluate all candidate monomials in the generators at
random integer points of the representation space and take the exact
nullspace of the resulting matrix.  Every generator here is homogeneous
in the underlying matrix entries (its weight), and in fact
multihomogeneous over disjoint groups of those entries (one group per
generic matrix); relations therefore split into multihomogeneous pieces,
and the nullspace is computed one multidegree block at a time.  The
union over blocks equals the nullspace over the full monomial basis,
while the expensive exact elimination only ever sees small matrices.
The grouping is inferred from the generators themselves, by merging
variables until every generator is homogeneous over every group.

A mined relation is never trusted as sampled: certificates are
re-verified by full symbolic expansion through the generator
definitions, plus a batch of fresh residual samples.
"""

from __future__ import annotations

import json
import os
import random
import zlib
from dataclasses import dataclass, replace
from fractions import Fraction
from math import ceil
from pathlib import Path
from typing import Mapping, Sequence

from .casemodels import (
    Invariant,
    order3_generators,
    three_lines_invariants,
    twisted_plane_invariants,
)
from .exactpoly import DomainError, Polynomial, StructuralError, grlex_key
from .linalg import incremental_nullspace
from .quiverext import CaseId

DEFAULT_SEED = 42
DEFAULT_ENTRY_BOUND = 10
OVERSAMPLING = 1.2


class DegenerateSamplingError(RuntimeError):
    """Sampling produced a larger candidate nullspace than the caller allows."""


@dataclass(frozen=True)
class SampleScheme:
    """Deterministic stream of integer sample points."""

    seed: int
    count: int
    entry_bound: int = DEFAULT_ENTRY_BOUND

    def __post_init__(self):
        if self.count < 1:
            raise DomainError(f"sample count must be >= 1, got {self.count}")
        if self.entry_bound < 2:
            raise DomainError(f"entry bound must be >= 2, got {self.entry_bound}")

    def rng(self, label: str = "") -> random.Random:
        return derived_rng(self.seed, label)

    def points(self, variables: Sequence[str], label: str = "samples") -> list[dict[str, int]]:
        rng = self.rng(label)
        b = self.entry_bound
        return [
            {v: rng.randint(-b, b) for v in variables} for _ in range(self.count)
        ]


def derived_rng(seed: int, label: str = "") -> random.Random:
    """Independent deterministic stream per (seed, label)."""
    return random.Random((seed * 0x9E3779B1 + zlib.crc32(label.encode())) & 0x7FFFFFFFFFFFFFFF)


# ---------------------------------------------------------------------------
# polynomial identity testing
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PitReport:
    """Outcome of random-evaluation zero testing."""

    zero_at_all_samples: bool
    samples: int
    degree: int
    entry_bound: int
    witness_point: dict[str, int] | None = None
    witness_value: Fraction | None = None

    @property
    def failure_bound(self) -> str:
        """Informational Schwartz-Zippel style bound on a false zero verdict."""
        if not self.zero_at_all_samples:
            return "0"
        per_sample = Fraction(self.degree, 2 * self.entry_bound + 1)
        if per_sample >= 1:
            return "1"
        return str(per_sample ** self.samples)


def pit_zero(p: Polynomial, scheme: SampleScheme) -> PitReport:
    """Evaluate at the scheme's points; report the first nonzero witness if any."""
    degree = p.total_degree()
    for i, point in enumerate(scheme.points(p.variables, label="pit")):
        value = p.evaluate(point)
        if value:
            return PitReport(False, i + 1, degree, scheme.entry_bound, point, value)
    return PitReport(True, scheme.count, degree, scheme.entry_bound)


# ---------------------------------------------------------------------------
# weighted monomial bases
# ---------------------------------------------------------------------------


def weighted_degree(exponents: Sequence[int], weights: Sequence[int]) -> int:
    return sum(e * w for e, w in zip(exponents, weights))


def weighted_monomials(weights: Sequence[int], bound: int) -> list[tuple[int, ...]]:
    """All exponent vectors of weighted degree <= bound.

    Ordered by weighted degree, then by exponent vector; the order is part
    of the certificate format.
    """
    if any(w <= 0 for w in weights):
        raise DomainError(f"generator weights must be positive, got {weights}")
    out: list[tuple[int, ...]] = []

    def rec(i: int, prefix: list[int], remaining: int) -> None:
        if i == len(weights):
            out.append(tuple(prefix))
            return
        w = weights[i]
        for e in range(remaining // w + 1):
            prefix.append(e)
            rec(i + 1, prefix, remaining - e * w)
            prefix.pop()

    rec(0, [], bound)
    out.sort(key=lambda e: (weighted_degree(e, weights), e))
    return out


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RelationCertificate:
    """Exact nullspace of the evaluation matrix, with its provenance.

    Each nullspace vector, contracted against the monomial basis and
    expanded through the generator definitions, is the zero polynomial;
    ``verified_symbolically`` records that this expansion has been done.
    """

    generators: tuple[tuple[str, int], ...]
    weight_bound: int
    seed: int
    count: int
    entry_bound: int
    monomials: tuple[tuple[int, ...], ...]
    nullspace: tuple[tuple[Fraction, ...], ...]
    per_degree_nullity: tuple[tuple[int, int], ...]
    residual_check: int = 0
    verified_symbolically: bool = False

    @property
    def generator_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.generators)

    def relation_polynomials(self) -> list[Polynomial]:
        names = self.generator_names
        out = []
        for vector in self.nullspace:
            terms = {
                mono: coeff for mono, coeff in zip(self.monomials, vector) if coeff
            }
            out.append(Polynomial(names, terms))
        return out

    def to_json(self) -> dict:
        return {
            "generators": [{"name": n, "weight": w} for n, w in self.generators],
            "weight_bound": self.weight_bound,
            "seed": self.seed,
            "count": self.count,
            "entry_bound": self.entry_bound,
            "monomials": [list(m) for m in self.monomials],
            "nullspace": [[str(c) for c in v] for v in self.nullspace],
            "per_degree_nullity": {str(d): n for d, n in self.per_degree_nullity},
            "residual_check": self.residual_check,
            "verified_symbolically": self.verified_symbolically,
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "RelationCertificate":
        return cls(
            generators=tuple((g["name"], g["weight"]) for g in doc["generators"]),
            weight_bound=doc["weight_bound"],
            seed=doc["seed"],
            count=doc["count"],
            entry_bound=doc["entry_bound"],
            monomials=tuple(tuple(m) for m in doc["monomials"]),
            nullspace=tuple(
                tuple(Fraction(c) for c in v) for v in doc["nullspace"]
            ),
            per_degree_nullity=tuple(
                (int(d), n) for d, n in sorted(doc["per_degree_nullity"].items(), key=lambda kv: int(kv[0]))
            ),
            residual_check=doc["residual_check"],
            verified_symbolically=doc["verified_symbolically"],
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2) + "\n"


def normalize_relation_vector(
    vector: Sequence[Fraction], monomials: Sequence[tuple[int, ...]]
) -> tuple[Fraction, ...]:
    """Scale so the graded-lex leading coefficient is 1."""
    lead = None
    for mono, coeff in zip(monomials, vector):
        if coeff and (lead is None or grlex_key(mono) > grlex_key(lead[0])):
            lead = (mono, coeff)
    if lead is None:
        raise DomainError("cannot normalize the zero vector")
    scale = lead[1]
    return tuple(c / scale for c in vector)


# ---------------------------------------------------------------------------
# mining
# ---------------------------------------------------------------------------


def infer_variable_groups(gens: Sequence[Invariant]) -> list[tuple[int, ...]]:
    """Finest partition of the variables making every generator multihomogeneous.

    Starts from singleton groups and merges the groups on which two terms
    of some generator disagree in degree, until a fixed point.  Relations
    among the generators respect the resulting multigrading.
    """
    variables = _shared_variables(gens)
    n = len(variables)
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i: int, j: int) -> bool:
        ri, rj = find(i), find(j)
        if ri == rj:
            return False
        parent[max(ri, rj)] = min(ri, rj)
        return True

    changed = True
    while changed:
        changed = False
        for g in gens:
            degs: list[dict[int, int]] = []
            for exp in g.value.terms:
                d: dict[int, int] = {}
                for i, e in enumerate(exp):
                    if e:
                        r = find(i)
                        d[r] = d.get(r, 0) + e
                degs.append(d)
            if not degs:
                continue
            first = degs[0]
            for other in degs[1:]:
                diff = [
                    r
                    for r in set(first) | set(other)
                    if first.get(r, 0) != other.get(r, 0)
                ]
                if len(diff) > 1:
                    base = diff[0]
                    for r in diff[1:]:
                        changed |= union(base, r)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return [tuple(groups[r]) for r in sorted(groups)]


def generator_multidegrees(
    gens: Sequence[Invariant], groups: Sequence[tuple[int, ...]]
) -> list[tuple[int, ...]]:
    out = []
    for g in gens:
        if not g.value.terms:
            raise DomainError(f"generator {g.name} is the zero polynomial")
        seen = {
            tuple(sum(exp[i] for i in grp) for grp in groups)
            for exp in g.value.terms
        }
        if len(seen) != 1:
            raise DomainError(
                f"generator {g.name} is not homogeneous over the inferred grouping"
            )
        out.append(seen.pop())
    return out


def _shared_variables(gens: Sequence[Invariant]) -> tuple[str, ...]:
    variables = gens[0].value.variables
    for g in gens:
        if g.value.variables != variables:
            raise StructuralError("generators must share one representation variable list")
    return variables


def required_count(gens: Sequence[Invariant], weight_bound: int) -> int:
    weights = [g.weight for g in gens]
    return ceil(OVERSAMPLING * len(weighted_monomials(weights, weight_bound)))


def mine_relations(
    gens: Sequence[Invariant],
    weight_bound: int,
    scheme: SampleScheme,
    max_nullity: int | None = None,
) -> RelationCertificate:
    """Exact nullspace of the evaluation matrix over all monomials up to the bound.

    Requires ``scheme.count`` at or above the 1.2x oversampling floor.
    The nullspace is assembled one multidegree block at a time, which
    loses nothing because the generators are multihomogeneous; each basis
    vector is normalized to graded-lex leading coefficient 1.
    """
    if not gens:
        raise DomainError("no generators given")
    weights = [g.weight for g in gens]
    monomials = weighted_monomials(weights, weight_bound)
    floor = ceil(OVERSAMPLING * len(monomials))
    if scheme.count < floor:
        raise StructuralError(
            f"sample count {scheme.count} is below the oversampling floor {floor} "
            f"for {len(monomials)} monomials"
        )
    variables = _shared_variables(gens)
    points = scheme.points(variables, label="mine")
    gen_values = [
        [g.value.evaluate(point) for g in gens] for point in points
    ]

    # value of every basis monomial at every point, via power tables
    max_exp = [0] * len(gens)
    for mono in monomials:
        for i, e in enumerate(mono):
            if e > max_exp[i]:
                max_exp[i] = e
    mono_values: list[list[Fraction]] = []
    for values in gen_values:
        powers = []
        for val, m in zip(values, max_exp):
            row = [Fraction(1)]
            for _ in range(m):
                row.append(row[-1] * val)
            powers.append(row)
        row_out = []
        for mono in monomials:
            acc = Fraction(1)
            for i, e in enumerate(mono):
                if e:
                    acc = acc * powers[i][e]
            row_out.append(acc)
        mono_values.append(row_out)

    # block key: the multidegree of the monomial over the inferred grouping
    groups = infer_variable_groups(gens)
    mdegs = generator_multidegrees(gens, groups)
    blocks: dict[tuple[int, ...], list[int]] = {}
    for k, mono in enumerate(monomials):
        key = tuple(
            sum(e * md[g] for e, md in zip(mono, mdegs)) for g in range(len(groups))
        )
        blocks.setdefault(key, []).append(k)

    basis_vectors: list[tuple[Fraction, ...]] = []
    nullity_by_degree: dict[int, int] = {
        weighted_degree(m, weights): 0 for m in monomials
    }
    for key in sorted(blocks):
        cols = blocks[key]
        if len(cols) < 2:
            continue  # a single sampled monomial is nonzero somewhere
        rows = [[mv[k] for k in cols] for mv in mono_values]
        kernel = incremental_nullspace(rows, len(cols))
        if kernel:
            nullity_by_degree[sum(key)] += len(kernel)
        for vec in kernel:
            full = [Fraction(0)] * len(monomials)
            for c, k in zip(vec, cols):
                full[k] = c
            basis_vectors.append(normalize_relation_vector(full, monomials))
    basis_vectors.sort(
        key=lambda v: max(
            (grlex_key(m), i) for i, (m, c) in enumerate(zip(monomials, v)) if c
        )
    )
    per_degree = tuple(sorted(nullity_by_degree.items()))

    if max_nullity is not None and len(basis_vectors) > max_nullity:
        raise DegenerateSamplingError(
            f"nullspace dimension {len(basis_vectors)} exceeds the allowed {max_nullity}; "
            "retry with a fresh seed or larger entry bound"
        )
    return RelationCertificate(
        generators=tuple((g.name, g.weight) for g in gens),
        weight_bound=weight_bound,
        seed=scheme.seed,
        count=scheme.count,
        entry_bound=scheme.entry_bound,
        monomials=tuple(monomials),
        nullspace=tuple(basis_vectors),
        per_degree_nullity=tuple(per_degree),
    )


def verify_certificate(
    cert: RelationCertificate,
    gens: Sequence[Invariant],
    residual_samples: int = 200,
    symbolic: bool = True,
) -> RelationCertificate:
    """Re-verify a certificate; raises DomainError with the failing residual.

    Symbolic verification expands each relation through the generator
    definitions and demands the literal zero polynomial; the residual
    samples are drawn from a fresh stream, independent of mining.
    """
    if tuple((g.name, g.weight) for g in gens) != cert.generators:
        raise StructuralError("certificate generators do not match the given list")
    relations = cert.relation_polynomials()
    definitions = {g.name: g.value for g in gens}
    if symbolic:
        for rel in relations:
            residual = rel.substitute(definitions)
            if not residual.is_zero():
                exp, coeff = residual.leading_term()
                raise DomainError(
                    "certificate relation fails symbolic expansion; residual leading term "
                    f"{coeff}*{residual.monomial_str(exp)}"
                )
    checked = 0
    if residual_samples:
        variables = _shared_variables(gens)
        rng = derived_rng(cert.seed, "residual")
        b = cert.entry_bound
        for _ in range(residual_samples):
            point = {v: rng.randint(-b, b) for v in variables}
            values = {g.name: g.value.evaluate(point) for g in gens}
            for rel in relations:
                if rel.evaluate(values):
                    raise DomainError("certificate relation fails at a fresh residual sample")
            checked += 1
    return replace(
        cert,
        residual_check=checked,
        verified_symbolically=cert.verified_symbolically or symbolic,
    )


# ---------------------------------------------------------------------------
# case wiring and the pinned order-3 relation
# ---------------------------------------------------------------------------

MINABLE_CASES = (CaseId.THREE_LINES, CaseId.TWISTED_PLANE, CaseId.ORDER3_TRIPLE)

# weight bounds at which the single relation of each case lives
CASE_WEIGHT_BOUND = {
    CaseId.THREE_LINES: 6,
    CaseId.TWISTED_PLANE: 6,
    CaseId.ORDER3_TRIPLE: 12,
}


def mining_generators(case: CaseId | str) -> list[Invariant]:
    """Generator lists fed to the miner, in the conventional order.

    The twisted-plane list is taken in the generic-matrix chart (third
    matrix unconstrained), where the single relation among the ten
    generators is w^2 + 18 det(v_ij).
    """
    case = CaseId(case)
    if case is CaseId.THREE_LINES:
        return three_lines_invariants()
    if case is CaseId.TWISTED_PLANE:
        return twisted_plane_invariants(rank_one=False)
    if case is CaseId.ORDER3_TRIPLE:
        return order3_generators()
    raise DomainError(f"case {case.value} has no minable relation")


def mine_for_case(
    case: CaseId | str,
    weight_bound: int | None = None,
    seed: int = DEFAULT_SEED,
    count: int | None = None,
    entry_bound: int = DEFAULT_ENTRY_BOUND,
    max_nullity: int | None = None,
    retries: int = 3,
    residual_samples: int = 200,
    symbolic: bool = True,
) -> RelationCertificate:
    """Mine and fully verify the relation certificate of one case.

    The sample count is raised to the oversampling floor when the caller
    asks for fewer points.  On a degenerate nullspace the mining retries
    with shifted seeds before giving up.
    """
    case = CaseId(case)
    gens = mining_generators(case)
    if weight_bound is None:
        weight_bound = CASE_WEIGHT_BOUND[case]
    floor = required_count(gens, weight_bound)
    effective = max(count or 0, floor)
    last_error: Exception | None = None
    for attempt in range(retries):
        scheme = SampleScheme(seed + 1000 * attempt, effective, entry_bound)
        try:
            cert = mine_relations(gens, weight_bound, scheme, max_nullity=max_nullity)
            return verify_certificate(
                cert, gens, residual_samples=residual_samples, symbolic=symbolic
            )
        except DegenerateSamplingError as err:
            last_error = err
    raise last_error  # type: ignore[misc]


def default_data_dir() -> Path:
    env = os.environ.get("QLM_DATA_DIR")
    if env:
        return Path(env)
    return Path(__file__).resolve().parent / "data"


def certificate_path(
    case: CaseId | str, weight_bound: int, seed: int, data_dir: Path | str | None = None
) -> Path:
    base = Path(data_dir) if data_dir is not None else default_data_dir()
    return base / f"relation-{CaseId(case).value}-w{weight_bound}-seed{seed}.json"


def load_certificate(path: Path) -> RelationCertificate:
    with open(path, "r", encoding="utf-8") as fh:
        return RelationCertificate.from_json(json.load(fh))


def write_certificate(cert: RelationCertificate, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(cert.dumps(), encoding="utf-8")


def order3_relation(
    data_dir: Path | str | None = None,
    weight_bound: int = 12,
    seed: int = DEFAULT_SEED,
    mine_if_missing: bool = True,
) -> tuple[Polynomial, RelationCertificate]:
    """The single relation of the order-3 case, from cache or mined afresh.

    The relation is pinned by a certificate file; when the file is absent
    the relation is mined, symbolically verified and written back.  The
    normalized relation polynomial (graded-lex leading coefficient 1) is
    returned together with its certificate.
    """
    path = certificate_path(CaseId.ORDER3_TRIPLE, weight_bound, seed, data_dir)
    if path.exists():
        cert = load_certificate(path)
    elif mine_if_missing:
        cert = mine_for_case(
            CaseId.ORDER3_TRIPLE,
            weight_bound=weight_bound,
            seed=seed,
            max_nullity=1,
        )
        write_certificate(cert, path)
    else:
        raise FileNotFoundError(f"no relation certificate at {path}")
    relations = cert.relation_polynomials()
    if len(relations) != 1:
        raise DomainError(
            f"expected a principal relation, certificate carries {len(relations)}"
        )
    return relations[0], cert
