"""Quivers of the five polystable types, cycles, trace invariants."""

from itertools import product

import pytest

from qlm.exactpoly import DomainError, Polynomial, StructuralError
from qlm.quiverext import (
    Arrow,
    CaseId,
    BundleCase,
    build_ext_quiver,
    bundle_case,
    canonical_rotation,
    cycles_to_json,
    enumerate_cycles,
    generic_representation,
    trace_invariant,
)


class TestBundleCases:
    def test_summand_table(self):
        assert bundle_case(CaseId.STABLE).summands == ((3, 1),)
        assert bundle_case(CaseId.RK2_PLUS_LINE).summands == ((2, 1), (1, 1))
        assert bundle_case(CaseId.THREE_LINES).summands == ((1, 1), (1, 1), (1, 1))
        assert bundle_case(CaseId.TWISTED_PLANE).summands == ((1, 2), (1, 1))
        assert bundle_case(CaseId.ORDER3_TRIPLE).summands == ((1, 3),)

    def test_total_rank_enforced(self):
        with pytest.raises(DomainError):
            BundleCase(CaseId.STABLE, ((3, 2),))

    def test_case_summand_mismatch_rejected(self):
        with pytest.raises(DomainError):
            BundleCase(CaseId.STABLE, ((1, 3),))

    def test_string_case_ids(self):
        assert bundle_case("three-lines").case_id is CaseId.THREE_LINES


class TestQuiverNumbers:
    def test_three_lines_quiver(self):
        q = build_ext_quiver(bundle_case(CaseId.THREE_LINES))
        assert q.vertices == 3
        for i in range(3):
            assert q.arrows[i][i] == 2  # two loops on each vertex
            for j in range(3):
                if i != j:
                    assert q.arrows[i][j] == 1
        assert q.alpha == (1, 1, 1)

    def test_twisted_plane_quiver(self):
        q = build_ext_quiver(bundle_case(CaseId.TWISTED_PLANE))
        assert q.arrows == ((2, 1), (1, 2))
        assert q.alpha == (2, 1)

    def test_rk2_plus_line_quiver(self):
        # forced by r_i r_j + delta_ij with ranks (2, 1); the slice dimension
        # cross-check is 5 + 2 + 2 + 2 - 2 = 9
        q = build_ext_quiver(bundle_case(CaseId.RK2_PLUS_LINE))
        assert q.arrows == ((5, 2), (2, 2))
        assert q.alpha == (1, 1)
        assert q.ext_dim() == 11
        assert q.ext0_dim() == 9

    def test_slice_dimensions_across_cases(self):
        expected = {
            CaseId.STABLE: 8,
            CaseId.RK2_PLUS_LINE: 9,
            CaseId.THREE_LINES: 10,
            CaseId.TWISTED_PLANE: 12,
            CaseId.ORDER3_TRIPLE: 16,
        }
        for case, dim in expected.items():
            assert build_ext_quiver(bundle_case(case)).ext0_dim() == dim

    def test_serialization(self):
        q = build_ext_quiver(bundle_case(CaseId.TWISTED_PLANE))
        assert q.to_json() == {"vertices": 2, "arrows": [[2, 1], [1, 2]], "alpha": [2, 1]}


class TestGenericRepresentation:
    def test_variable_counts(self):
        for case in CaseId:
            q = build_ext_quiver(bundle_case(case))
            rep = generic_representation(q)
            assert len(rep.variables) == q.ext_dim()
            assert len(set(rep.variables)) == len(rep.variables)

    def test_order3_full_rep_has_two_3x3_blocks(self):
        q = build_ext_quiver(bundle_case(CaseId.ORDER3_TRIPLE))
        rep = generic_representation(q)
        assert len(rep.variables) == 18
        for k in range(2):
            block = rep.block(Arrow(0, 0, k))
            assert len(block) == 3 and len(block[0]) == 3

    def test_single_loop_dimension_one(self):
        from qlm.quiverext import ExtQuiver

        q = ExtQuiver(1, ((1,),), (1,))
        rep = generic_representation(q)
        assert len(rep.variables) == 1
        inv = trace_invariant(rep, (Arrow(0, 0, 0),))
        assert inv.value == Polynomial.variable(rep.variables, rep.variables[0])
        assert inv.weight == 1

    def test_rename(self):
        q = build_ext_quiver(bundle_case(CaseId.THREE_LINES)).loops_removed()
        rep = generic_representation(q)
        renamed = rep.rename({rep.variables[0]: "first"})
        assert renamed.variables[0] == "first"


def brute_force_cycles(quiver, max_len):
    arrows = quiver.arrow_list()
    found = set()
    for length in range(1, max_len + 1):
        for combo in product(arrows, repeat=length):
            chained = all(combo[k].target == combo[k + 1].source for k in range(length - 1))
            if chained and combo[-1].target == combo[0].source:
                found.add(canonical_rotation(combo))
    return found


class TestCycleEnumeration:
    def test_three_lines_loop_free_cycles(self):
        q = build_ext_quiver(bundle_case(CaseId.THREE_LINES)).loops_removed()
        cycles = enumerate_cycles(q, 3)
        two = {c for c in cycles if len(c) == 2}
        three = {c for c in cycles if len(c) == 3}
        assert two == {
            canonical_rotation((Arrow(0, 1, 0), Arrow(1, 0, 0))),
            canonical_rotation((Arrow(0, 2, 0), Arrow(2, 0, 0))),
            canonical_rotation((Arrow(1, 2, 0), Arrow(2, 1, 0))),
        }
        assert three == {
            canonical_rotation((Arrow(0, 1, 0), Arrow(1, 2, 0), Arrow(2, 0, 0))),
            canonical_rotation((Arrow(0, 2, 0), Arrow(2, 1, 0), Arrow(1, 0, 0))),
        }

    def test_max_len_one_gives_loops(self):
        q = build_ext_quiver(bundle_case(CaseId.THREE_LINES))
        loops = enumerate_cycles(q, 1)
        assert len(loops) == 6
        assert all(len(c) == 1 and c[0].source == c[0].target for c in loops)

    def test_twisted_plane_loop_free_single_2_cycle(self):
        q = build_ext_quiver(bundle_case(CaseId.TWISTED_PLANE)).loops_removed()
        cycles = enumerate_cycles(q, 2)
        assert cycles == ((Arrow(0, 1, 0), Arrow(1, 0, 0)),)

    def test_exhaustive_against_brute_force(self):
        for case in (CaseId.THREE_LINES, CaseId.TWISTED_PLANE, CaseId.RK2_PLUS_LINE):
            q = build_ext_quiver(bundle_case(case)).loops_removed()
            for max_len in (1, 2, 3, 4):
                fast = enumerate_cycles(q, max_len)
                assert len(set(fast)) == len(fast)
                assert set(fast) == brute_force_cycles(q, max_len)

    def test_includes_repeated_arrow_walks(self):
        q = build_ext_quiver(bundle_case(CaseId.ORDER3_TRIPLE))
        walks = enumerate_cycles(q, 2)
        # 2 loops, plus all length-2 words in them up to rotation: xx, xy, yy
        assert len(walks) == 2 + 3

    def test_invalid_max_len(self):
        q = build_ext_quiver(bundle_case(CaseId.STABLE))
        with pytest.raises(DomainError):
            enumerate_cycles(q, 0)

    def test_json_arrow_indices(self):
        q = build_ext_quiver(bundle_case(CaseId.TWISTED_PLANE)).loops_removed()
        cycles = enumerate_cycles(q, 2)
        assert cycles_to_json(cycles, q) == [[0, 1]]


class TestTraceInvariants:
    def test_two_cycle_product(self):
        from qlm.casemodels import three_lines_representation

        rep = three_lines_representation()
        inv = trace_invariant(rep, (Arrow(0, 1, 0), Arrow(1, 0, 0)), name="Y3")
        x12 = Polynomial.variable(rep.variables, "X12")
        x21 = Polynomial.variable(rep.variables, "X21")
        assert inv.value == x12 * x21
        assert inv.weight == 2

    def test_three_cycle_product(self):
        from qlm.casemodels import three_lines_representation

        rep = three_lines_representation()
        inv = trace_invariant(rep, (Arrow(0, 1, 0), Arrow(1, 2, 0), Arrow(2, 0, 0)), name="Y4")
        x12, x23, x31 = (Polynomial.variable(rep.variables, n) for n in ("X12", "X23", "X31"))
        assert inv.value == x12 * x23 * x31

    def test_rotation_invariance(self):
        q = build_ext_quiver(bundle_case(CaseId.TWISTED_PLANE)).loops_removed()
        rep = generic_representation(q)
        cycle = (Arrow(0, 1, 0), Arrow(1, 0, 0))
        base = trace_invariant(rep, cycle).value
        rotated = trace_invariant(rep, (cycle[1], cycle[0])).value
        assert base == rotated

    def test_non_closed_path_raises(self):
        q = build_ext_quiver(bundle_case(CaseId.THREE_LINES)).loops_removed()
        rep = generic_representation(q)
        with pytest.raises(StructuralError):
            trace_invariant(rep, (Arrow(0, 1, 0), Arrow(1, 2, 0)))

    def test_foreign_arrow_raises(self):
        q = build_ext_quiver(bundle_case(CaseId.TWISTED_PLANE)).loops_removed()
        rep = generic_representation(q)
        with pytest.raises(StructuralError):
            trace_invariant(rep, (Arrow(0, 0, 5),))
