"""Ext-quivers of the five polystable bundle types and trace invariants.

A polystable rank-3 bundle with trivial determinant splits into mutually
non-isomorphic stable summands of rank r_i with multiplicities rho_i.
The local model at such a point lives on the representation space of a
quiver with one vertex per summand and r_i*r_j*(g-1) + delta_ij arrows
from i to j (genus g = 2 throughout), with dimension vector (rho_i).
Invariant coordinates arise as traces of matrix products along oriented
closed walks in that quiver.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, NamedTuple, Sequence

from .exactpoly import DomainError, Polynomial, StructuralError

GENUS = 2

# total rank of the bundles under consideration
TOTAL_RANK = 3


class CaseId(str, Enum):
    """The five polystable types, named by their summand structure."""

    STABLE = "stable"
    RK2_PLUS_LINE = "rk2-plus-line"
    THREE_LINES = "three-lines"
    TWISTED_PLANE = "twisted-plane"
    ORDER3_TRIPLE = "order3-triple"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


# (rank, multiplicity) of each stable summand, per case
_CASE_SUMMANDS: dict[CaseId, tuple[tuple[int, int], ...]] = {
    CaseId.STABLE: ((3, 1),),
    CaseId.RK2_PLUS_LINE: ((2, 1), (1, 1)),
    CaseId.THREE_LINES: ((1, 1), (1, 1), (1, 1)),
    CaseId.TWISTED_PLANE: ((1, 2), (1, 1)),
    CaseId.ORDER3_TRIPLE: ((1, 3),),
}


@dataclass(frozen=True)
class BundleCase:
    """One polystable type: summand ranks r_i and multiplicities rho_i."""

    case_id: CaseId
    summands: tuple[tuple[int, int], ...]
    genus: int = GENUS

    def __post_init__(self):
        total = sum(r * rho for r, rho in self.summands)
        if total != TOTAL_RANK:
            raise DomainError(f"summands {self.summands} have total rank {total}, expected {TOTAL_RANK}")
        if self.summands != _CASE_SUMMANDS[self.case_id]:
            raise DomainError(
                f"summands {self.summands} do not match case {self.case_id.value}"
            )

    @property
    def ranks(self) -> tuple[int, ...]:
        return tuple(r for r, _ in self.summands)

    @property
    def multiplicities(self) -> tuple[int, ...]:
        return tuple(rho for _, rho in self.summands)


def bundle_case(case_id: CaseId | str) -> BundleCase:
    case_id = CaseId(case_id)
    return BundleCase(case_id, _CASE_SUMMANDS[case_id])


def all_cases() -> tuple[BundleCase, ...]:
    return tuple(bundle_case(c) for c in CaseId)


class Arrow(NamedTuple):
    """One arrow of a quiver: parallel arrows are distinguished by index."""

    source: int
    target: int
    index: int


@dataclass(frozen=True)
class ExtQuiver:
    """Directed multigraph with arrow multiplicities and a dimension vector."""

    vertices: int
    arrows: tuple[tuple[int, ...], ...]
    alpha: tuple[int, ...]

    def __post_init__(self):
        if len(self.arrows) != self.vertices or any(
            len(row) != self.vertices for row in self.arrows
        ):
            raise StructuralError("arrow matrix shape must be vertices x vertices")
        if len(self.alpha) != self.vertices:
            raise StructuralError("dimension vector length must equal vertex count")

    def arrow_list(self) -> tuple[Arrow, ...]:
        """All arrows in the canonical (source, target, index) order."""
        out = []
        for i in range(self.vertices):
            for j in range(self.vertices):
                for k in range(self.arrows[i][j]):
                    out.append(Arrow(i, j, k))
        return tuple(sorted(out))

    def arrows_from(self, vertex: int) -> tuple[Arrow, ...]:
        return tuple(a for a in self.arrow_list() if a.source == vertex)

    def loops_removed(self) -> "ExtQuiver":
        rows = [list(row) for row in self.arrows]
        for i in range(self.vertices):
            rows[i][i] = 0
        return ExtQuiver(self.vertices, tuple(tuple(r) for r in rows), self.alpha)

    def ext_dim(self) -> int:
        """Dimension of the full representation space, sum of block sizes."""
        return sum(
            self.arrows[i][j] * self.alpha[i] * self.alpha[j]
            for i in range(self.vertices)
            for j in range(self.vertices)
        )

    def ext0_dim(self) -> int:
        """Dimension after imposing the 2-dimensional trace condition."""
        return self.ext_dim() - GENUS

    def to_json(self) -> dict:
        return {
            "vertices": self.vertices,
            "arrows": [list(row) for row in self.arrows],
            "alpha": list(self.alpha),
        }


def build_ext_quiver(case: BundleCase) -> ExtQuiver:
    """Arrow counts r_i*r_j*(g-1) + delta_ij with the dimension vector (rho_i)."""
    ranks = case.ranks
    g = case.genus
    s = len(ranks)
    arrows = tuple(
        tuple(ranks[i] * ranks[j] * (g - 1) + (1 if i == j else 0) for j in range(s))
        for i in range(s)
    )
    return ExtQuiver(s, arrows, case.multiplicities)


Block = tuple[tuple[Polynomial, ...], ...]


@dataclass(frozen=True)
class GenericRep:
    """A representation with one fresh variable per matrix entry.

    The arrow i -> j carries a block of shape rho_j x rho_i, a generic
    linear map from the vertex space at i to the one at j.  All blocks
    share a single ordered variable list.
    """

    quiver: ExtQuiver
    variables: tuple[str, ...]
    blocks: Mapping[Arrow, Block]

    def block(self, arrow: Arrow) -> Block:
        try:
            return self.blocks[arrow]
        except KeyError:
            raise StructuralError(f"{arrow} is not an arrow of this representation") from None

    def rename(self, mapping: Mapping[str, str]) -> "GenericRep":
        new_vars = tuple(mapping.get(v, v) for v in self.variables)
        if len(set(new_vars)) != len(new_vars):
            raise StructuralError(f"renaming is not injective: {new_vars}")
        new_blocks = {
            a: tuple(tuple(p.rename_variables(mapping) for p in row) for row in blk)
            for a, blk in self.blocks.items()
        }
        return GenericRep(self.quiver, new_vars, new_blocks)


def arrow_variable_name(arrow: Arrow, row: int, col: int) -> str:
    """Deterministic name for the (row, col) entry of an arrow's block."""
    return f"e{arrow.source + 1}{arrow.target + 1}_{arrow.index + 1}_{row + 1}{col + 1}"


def generic_representation(quiver: ExtQuiver) -> GenericRep:
    names: list[str] = []
    layout: list[tuple[Arrow, int, int]] = []
    for a in quiver.arrow_list():
        rows = quiver.alpha[a.target]
        cols = quiver.alpha[a.source]
        for p in range(rows):
            for q in range(cols):
                names.append(arrow_variable_name(a, p, q))
                layout.append((a, p, q))
    variables = tuple(names)
    if len(set(variables)) != len(variables):  # pragma: no cover - scheme is injective
        raise StructuralError("generic variable naming collided")
    blocks: dict[Arrow, list[list[Polynomial]]] = {}
    for a in quiver.arrow_list():
        rows = quiver.alpha[a.target]
        cols = quiver.alpha[a.source]
        blocks[a] = [[None] * cols for _ in range(rows)]  # type: ignore[list-item]
    for name, (a, p, q) in zip(variables, layout):
        blocks[a][p][q] = Polynomial.variable(variables, name)
    frozen = {a: tuple(tuple(row) for row in blk) for a, blk in blocks.items()}
    return GenericRep(quiver, variables, frozen)


def _is_closed_chain(cycle: Sequence[Arrow]) -> bool:
    if not cycle:
        return False
    for a, b in zip(cycle, cycle[1:]):
        if a.target != b.source:
            return False
    return cycle[-1].target == cycle[0].source


def canonical_rotation(cycle: Sequence[Arrow]) -> tuple[Arrow, ...]:
    """Lexicographically minimal rotation, the canonical representative."""
    cyc = tuple(cycle)
    return min(tuple(cyc[i:] + cyc[:i]) for i in range(len(cyc)))


def enumerate_cycles(quiver: ExtQuiver, max_len: int) -> tuple[tuple[Arrow, ...], ...]:
    """All closed walks of length 1..max_len, one per rotation class.

    Walks may repeat vertices and arrows; each class is reported by its
    lexicographically minimal rotation, in (length, representative) order.
    """
    if max_len < 1:
        raise DomainError(f"max_len must be >= 1, got {max_len}")
    arrows = quiver.arrow_list()
    by_source: dict[int, list[Arrow]] = {}
    for a in arrows:
        by_source.setdefault(a.source, []).append(a)
    found: set[tuple[Arrow, ...]] = set()

    def extend(path: list[Arrow], length: int) -> None:
        head = path[-1].target
        if path[0].source == head:
            found.add(canonical_rotation(path))
        if length == max_len:
            return
        start = path[0]
        for nxt in by_source.get(head, ()):
            # the minimal rotation starts with the walk's smallest arrow,
            # so only walks whose first arrow is minimal need generating
            if nxt < start:
                continue
            path.append(nxt)
            extend(path, length + 1)
            path.pop()

    for a in arrows:
        extend([a], 1)
    return tuple(sorted(found, key=lambda c: (len(c), c)))


def cycles_to_json(cycles: Iterable[Sequence[Arrow]], quiver: ExtQuiver) -> list[list[int]]:
    """Cycles as arrays of global arrow indices, per the serialization scheme."""
    index = {a: i for i, a in enumerate(quiver.arrow_list())}
    return [[index[a] for a in cycle] for cycle in cycles]


@dataclass(frozen=True)
class CycleInvariant:
    """Trace of the ordered block product along a closed walk."""

    name: str
    cycle: tuple[Arrow, ...]
    value: Polynomial
    weight: int


def _block_mul(a: Block, b: Block) -> Block:
    # shapes: a is m x n, b is n x p; result m x p
    if len(a[0]) != len(b):
        raise StructuralError("block shapes are not composable")
    cols = list(zip(*b))
    out = []
    for row in a:
        new_row = []
        for col in cols:
            acc = Polynomial.zero(row[0].variables)
            for x, y in zip(row, col):
                acc = acc + x * y
            new_row.append(acc)
        out.append(tuple(new_row))
    return tuple(out)


def trace_invariant(rep: GenericRep, cycle: Sequence[Arrow], name: str | None = None) -> CycleInvariant:
    """Invariant attached to a closed walk; unchanged under rotation of the walk."""
    cyc = tuple(cycle)
    if not _is_closed_chain(cyc):
        raise StructuralError(f"{cyc} is not a closed arrow path")
    # composition along the walk: the last arrow's block acts last
    product = rep.block(cyc[0])
    for a in cyc[1:]:
        product = _block_mul(rep.block(a), product)
    value = Polynomial.zero(rep.variables)
    for i in range(len(product)):
        value = value + product[i][i]
    if name is None:
        name = "tr(" + "*".join(f"a{a.source + 1}{a.target + 1}.{a.index + 1}" for a in cyc) + ")"
    return CycleInvariant(name, cyc, value, value.total_degree())
