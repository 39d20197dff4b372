"""Involution actions, computed tables, fixed-locus models."""

import random

import pytest

from qlm.casemodels import build_model
from qlm.exactpoly import DomainError, Polynomial, StructuralError, content_normalized
from qlm.involution import (
    FIX,
    NEGATE,
    SWAP,
    InvolutionAction,
    build_fixed_model,
    equations_sigma_compatible,
    fixed_locus_model,
    sigma_action_on_generators,
    sigma_variable_map,
    symmetric_rep_point,
)
from qlm.quiverext import CaseId

CASES = (CaseId.RK2_PLUS_LINE, CaseId.THREE_LINES, CaseId.TWISTED_PLANE, CaseId.ORDER3_TRIPLE)


class TestVariableMaps:
    def test_maps_are_involutions(self):
        for case in CASES:
            m = sigma_variable_map(case)
            assert all(m[m[v]] == v for v in m)

    def test_stable_has_no_involution(self):
        with pytest.raises(DomainError):
            sigma_variable_map(CaseId.STABLE)
        with pytest.raises(DomainError):
            sigma_action_on_generators(CaseId.STABLE)

    def test_twisted_exchanges_row_and_column(self):
        m = sigma_variable_map(CaseId.TWISTED_PLANE)
        assert m["l1"] == "v1" and m["v2"] == "l2"
        assert m["a1_12"] == "a1_21"


class TestComputedActions:
    def test_rk2_table(self):
        action = sigma_action_on_generators(CaseId.RK2_PLUS_LINE)
        t = action.table
        assert t["u11"] == (FIX, None)
        assert t["u22"] == (FIX, None)
        assert t["u12"] == (SWAP, "u21")
        assert t["u21"] == (SWAP, "u12")
        assert all(t[f"W{i}"] == (FIX, None) for i in range(1, 6))

    def test_three_lines_table(self):
        t = sigma_action_on_generators(CaseId.THREE_LINES).table
        assert all(t[f"Y{i}"] == (FIX, None) for i in (1, 2, 3))
        assert t["Y4"] == (SWAP, "Y5")

    def test_twisted_table_computed_not_transcribed(self):
        t = sigma_action_on_generators(CaseId.TWISTED_PLANE).table
        for i in range(1, 10):
            assert t[f"X{i}"] == (FIX, None)
        assert t["X10"] == (NEGATE, None)

    def test_order3_table(self):
        t = sigma_action_on_generators(CaseId.ORDER3_TRIPLE).table
        for i in range(1, 9):
            assert t[f"T{i}"] == (FIX, None)
        assert t["T9"] == (NEGATE, None)

    def test_actions_are_involutive_on_polynomials(self):
        for case in CASES:
            model = build_model(case)
            action = sigma_action_on_generators(case, model)
            names = model.coordinate_names
            probe = Polynomial.zero(names)
            for k, n in enumerate(names):
                probe = probe + (k + 1) * Polynomial.variable(names, n) ** 2
            assert action.apply(action.apply(probe)) == probe

    def test_equations_map_to_themselves_up_to_sign(self):
        for case in CASES:
            model = build_model(case)
            action = sigma_action_on_generators(case, model)
            assert equations_sigma_compatible(model, action)

    def test_inconsistent_swap_rejected(self):
        with pytest.raises(StructuralError):
            InvolutionAction(
                CaseId.THREE_LINES,
                (("Y4", SWAP, "Y5"), ("Y5", FIX, None)),
            )

    def test_action_serialization(self):
        doc = sigma_action_on_generators(CaseId.THREE_LINES).to_json()
        assert doc["Y4"] == "swap:Y5"
        assert doc["Y1"] == "fix"


class TestFixedModels:
    def test_rk2_quadric_cone(self):
        fixed = build_fixed_model(CaseId.RK2_PLUS_LINE)
        assert fixed.ambient_dim == 8
        assert fixed.expected_dim == 7
        assert fixed.coordinate_names == ("W1", "W2", "W3", "W4", "W5", "X1", "X2", "X3")
        c = {n: Polynomial.variable(fixed.coordinate_names, n) for n in fixed.coordinate_names}
        assert fixed.equations[0] == c["X3"] ** 2 - c["X1"] * c["X2"]

    def test_three_lines_hypersurface(self):
        fixed = build_fixed_model(CaseId.THREE_LINES)
        assert fixed.ambient_dim == 8
        c = {n: Polynomial.variable(fixed.coordinate_names, n) for n in fixed.coordinate_names}
        assert fixed.equations[0] == c["Z4"] ** 2 - c["Z1"] * c["Z2"] * c["Z3"]

    def test_twisted_pair_with_18_dropped(self):
        fixed = build_fixed_model(CaseId.TWISTED_PLANE)
        assert fixed.ambient_dim == 9
        assert len(fixed.equations) == 2
        c = {n: Polynomial.variable(fixed.coordinate_names, n) for n in fixed.coordinate_names}
        det = (
            c["X4"] * c["X5"] * c["X6"] + 2 * c["X7"] * c["X8"] * c["X9"]
            - c["X6"] * c["X7"] ** 2 - c["X5"] * c["X8"] ** 2 - c["X4"] * c["X9"] ** 2
        )
        assert fixed.equations[0] == det
        assert fixed.equations[1] == c["X3"] ** 2 - 2 * c["X6"]

    def test_order3_relation_at_t9_zero(self):
        model = build_model(CaseId.ORDER3_TRIPLE)
        fixed = build_fixed_model(CaseId.ORDER3_TRIPLE, model)
        assert fixed.ambient_dim == 8
        restricted = model.equations[0].substitute({"T9": 0}).with_variables(
            fixed.coordinate_names
        )
        normalized = content_normalized(restricted)
        _, lead = normalized.leading_term()
        if lead < 0:
            normalized = -normalized
        assert fixed.equations[0] == normalized

    def test_every_fixed_model_has_expected_dim_7(self):
        for case in CASES:
            assert build_fixed_model(case).expected_dim == 7

    def test_action_must_match_model(self):
        action = sigma_action_on_generators(CaseId.THREE_LINES)
        with pytest.raises(StructuralError):
            fixed_locus_model(build_model(CaseId.RK2_PLUS_LINE), action)

    def test_fixed_model_json(self):
        fixed = build_fixed_model(CaseId.THREE_LINES)
        doc = fixed.to_json()
        assert doc["parent"] == "three-lines"
        assert doc["action"]["Y4"] == "swap:Y5"
        assert doc["ambient_dim"] == 8


class TestSymmetricSampling:
    def test_points_are_fixed_by_the_map(self):
        rng = random.Random(3)
        for case in CASES:
            model = build_model(case)
            point = symmetric_rep_point(case, rng, 10, model.rep_variables)
            m = sigma_variable_map(case)
            for v in model.rep_variables:
                assert point[v] == point[m.get(v, v)]

    def test_swapped_generators_agree_at_symmetric_points(self):
        rng = random.Random(4)
        model = build_model(CaseId.THREE_LINES)
        point = symmetric_rep_point(CaseId.THREE_LINES, rng, 10, model.rep_variables)
        y4 = model.coordinate("Y4").invariant.value
        y5 = model.coordinate("Y5").invariant.value
        assert y4.evaluate(point) == y5.evaluate(point)

    def test_negated_generators_vanish_at_symmetric_points(self):
        rng = random.Random(5)
        model = build_model(CaseId.TWISTED_PLANE)
        point = symmetric_rep_point(CaseId.TWISTED_PLANE, rng, 10, model.rep_variables)
        w = model.coordinate("X10").invariant.value
        assert w.evaluate(point) == 0
