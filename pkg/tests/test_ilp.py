"""Integer-program builders, LP export, assignment import."""

import random

import pytest

from railyard import (
    Attribute,
    IlpModel,
    IlpVariable,
    IlpConstraint,
    OptimizerConfig,
    Query,
    Schema,
    TimeRange,
    Workload,
    build_ilp_nov,
    build_ilp_ov,
    export_lp,
    import_assignment,
    parse_solution_file,
)
from conftest import random_instance
from lp_grammar import parse_lp


def nov_constraint_count(n, q):
    return n * n * q + 2 * n * q + 3 * n + 1


def ov_constraint_count(n, q):
    return 2 * n * n * q + 3 * n * q + 3 * n + 1


def variable_count(n, q):
    return n * (n + 1) * (q + 1)


@pytest.fixture
def fix_cfg():
    return OptimizerConfig(alpha=1.0)


class TestCounts:
    def test_fixture_counts(self, fix_schema, fix_stats, fix_workload, fix_cfg):
        nov = build_ilp_nov(fix_schema, fix_stats, fix_workload, fix_cfg)
        ov = build_ilp_ov(fix_schema, fix_stats, fix_workload, fix_cfg)
        assert len(nov.constraints) == nov_constraint_count(3, 2) == 40
        assert len(ov.constraints) == ov_constraint_count(3, 2) == 64
        assert len(nov.variables) == len(ov.variables) == variable_count(3, 2)

    def test_random_shapes(self):
        rng = random.Random(9090)
        for _ in range(10):
            schema, stats, workload = random_instance(rng, n_max=6, q_max=5)
            n, q = len(schema), len(workload.queries)
            nov = build_ilp_nov(schema, stats, workload, OptimizerConfig(alpha=1.0))
            ov = build_ilp_ov(schema, stats, workload, OptimizerConfig(alpha=1.0))
            assert len(nov.variables) == variable_count(n, q)
            assert len(ov.variables) == variable_count(n, q)
            assert len(nov.constraints) == nov_constraint_count(n, q)
            assert len(ov.constraints) == ov_constraint_count(n, q)

    def test_ten_by_five_has_660_variables(self, fix_stats):
        schema = Schema([Attribute(i, f"a{i}", 4) for i in range(10)])
        wl = Workload([Query(id=i, attrs=[i], time=TimeRange(0, 10), weight=1.0)
                       for i in range(5)])
        m = build_ilp_nov(schema, fix_stats, wl, OptimizerConfig(alpha=1.0))
        assert len(m.variables) == 660


class TestCoefficients:
    def test_structure_read_coefficient(self, fix_schema, fix_stats, fix_workload, fix_cfg):
        m = build_ilp_nov(fix_schema, fix_stats, fix_workload, fix_cfg)
        # reading one sub-block's structure for q1 costs w(q1) * (16*10 + 12*2)
        for p in range(1, 4):
            assert m.objective_of(f"y_{p}_1") == 368.0
            assert m.objective_of(f"y_{p}_2") == 184.0

    def test_attribute_read_coefficient(self, fix_schema, fix_stats, fix_workload, fix_cfg):
        m = build_ilp_nov(fix_schema, fix_stats, fix_workload, fix_cfg)
        assert m.objective_of("z_1_1_1") == 2.0 * 8 * 10   # a2 for q1
        assert m.objective_of("z_2_1_2") == 1.0 * 4 * 10   # a3 for q2

    def test_time_disjoint_query_has_zero_weight(self, fix_schema, fix_stats, fix_cfg):
        wl = Workload([
            Query(id=1, attrs=[0, 1], time=TimeRange(10, 20), weight=2.0),
            Query(id=2, attrs=[2], time=TimeRange(200, 300), weight=1.0),
        ])
        m = build_ilp_nov(fix_schema, fix_stats, wl, fix_cfg)
        assert m.objective_of("y_1_2") == 0.0
        assert m.objective_of("y_1_1") == 368.0
        assert len(m.variables) == variable_count(3, 2)  # variables remain declared

    def test_z_linking_constraint_shape(self, fix_schema, fix_stats, fix_workload, fix_cfg):
        for build in (build_ilp_nov, build_ilp_ov):
            m = build(fix_schema, fix_stats, fix_workload, fix_cfg)
            rows = [c for c in m.constraints if c.name.startswith("z_force_")]
            assert len(rows) == 3 * 3 * 2
            for c in rows:
                coefs = dict((name, coef) for coef, name in c.terms)
                assert c.relation == ">=" and c.rhs == -1.0
                z_names = [name for name in coefs if name.startswith("z_")]
                assert len(z_names) == 1 and coefs[z_names[0]] == 1.0

    def test_big_k_value(self, fix_schema, fix_stats, fix_workload, fix_cfg):
        m = build_ilp_nov(fix_schema, fix_stats, fix_workload, fix_cfg)
        row = next(c for c in m.constraints if c.name == "y_lb_p1_q1")
        coefs = dict((name, coef) for coef, name in row.terms)
        assert coefs["y_1_1"] == 4.0  # |A| + 1

    def test_overhead_rows(self, fix_schema, fix_stats, fix_workload, fix_cfg):
        nov = build_ilp_nov(fix_schema, fix_stats, fix_workload, fix_cfg)
        row = next(c for c in nov.constraints if c.name == "overhead")
        assert row.relation == "<=" and row.rhs == pytest.approx(1 + 344 / 184)
        ov = build_ilp_ov(fix_schema, fix_stats, fix_workload, fix_cfg)
        row = next(c for c in ov.constraints if c.name == "overhead")
        assert row.rhs == 688.0  # s(B) * (1 + alpha)


class TestExport:
    def test_sections_present(self, fix_schema, fix_stats, fix_workload, fix_cfg):
        text = export_lp(build_ilp_nov(fix_schema, fix_stats, fix_workload, fix_cfg))
        assert text.startswith("Minimize\n")
        for section in ("Subject To", "Binaries", "End"):
            assert f"\n{section}\n" in text or text.endswith(f"{section}\n")

    def test_smallest_model(self):
        m = IlpModel(
            variables=(IlpVariable("v", objective=2.0),),
            constraints=(IlpConstraint("c1", ((1.0, "v"),), ">=", 1.0),),
        )
        text = export_lp(m)
        assert "Minimize" in text
        assert "2 v" in text
        assert "Binaries" in text and "\n v\n" in text

    def test_byte_identical_across_builds(self, fix_schema, fix_stats, fix_workload, fix_cfg):
        a = export_lp(build_ilp_nov(fix_schema, fix_stats, fix_workload, fix_cfg))
        b = export_lp(build_ilp_nov(fix_schema, fix_stats, fix_workload, fix_cfg))
        assert a == b

    def test_round_trips_variable_names(self, fix_schema, fix_stats, fix_workload, fix_cfg):
        m = build_ilp_nov(fix_schema, fix_stats, fix_workload, fix_cfg)
        parsed = parse_lp(export_lp(m))
        assert parsed.binaries == [v.name for v in m.variables]
        assert parsed.sense == "min"
        assert len(parsed.constraints) == len(m.constraints)

    def test_rejects_undeclared_variables(self):
        with pytest.raises(ValueError, match="undeclared"):
            IlpModel(
                variables=(IlpVariable("v"),),
                constraints=(IlpConstraint("c1", ((1.0, "w"),), ">=", 0.0),),
            )


class TestImportAssignment:
    def _solved_assignment(self, model):
        """Feasible hand assignment for the fixture: a1,a2 -> p1, a3 -> p2."""
        assign = {v.name: 0 for v in model.variables}
        assign["x_0_1"] = assign["x_1_1"] = assign["x_2_2"] = 1
        assign["u_1"] = assign["u_2"] = 1
        assign["y_1_1"] = 1  # q1 reads p1
        assign["y_2_2"] = 1  # q2 reads p2
        assign["z_0_1_1"] = assign["z_1_1_1"] = 1
        assign["z_2_2_2"] = 1
        return assign

    def test_decodes_fixture_solution(self, fix_schema, fix_stats, fix_workload, fix_cfg):
        m = build_ilp_nov(fix_schema, fix_stats, fix_workload, fix_cfg)
        lay = import_assignment(m, self._solved_assignment(m), fix_schema)
        assert sorted(tuple(sorted(b.attrs)) for b in lay.sub_blocks) == [(0, 1), (2,)]

    def test_decodes_identity(self, fix_schema, fix_stats, fix_workload, fix_cfg):
        m = build_ilp_nov(fix_schema, fix_stats, fix_workload, fix_cfg)
        assign = {v.name: 0 for v in m.variables}
        for a in range(3):
            assign[f"x_{a}_1"] = 1
        assign["u_1"] = 1
        assign["y_1_1"] = assign["y_1_2"] = 1
        # a used partition forces z for every attribute it holds
        for a in range(3):
            for q in (1, 2):
                assign[f"z_{a}_1_{q}"] = 1
        lay = import_assignment(m, assign, fix_schema)
        assert sorted(tuple(sorted(b.attrs)) for b in lay.sub_blocks) == [(0, 1, 2)]

    def test_unassigned_attribute_names_constraint(self, fix_schema, fix_stats,
                                                   fix_workload, fix_cfg):
        m = build_ilp_nov(fix_schema, fix_stats, fix_workload, fix_cfg)
        assign = self._solved_assignment(m)
        assign["x_2_2"] = 0  # a3 unhoused
        with pytest.raises(ValueError, match="assign_a2"):
            import_assignment(m, assign, fix_schema)

    def test_missing_variable(self, fix_schema, fix_stats, fix_workload, fix_cfg):
        m = build_ilp_nov(fix_schema, fix_stats, fix_workload, fix_cfg)
        assign = self._solved_assignment(m)
        del assign["x_0_1"]
        with pytest.raises(ValueError, match="missing variable x_0_1"):
            import_assignment(m, assign, fix_schema)


class TestSolutionFile:
    def test_parses_pairs(self):
        text = "# solver output\nx_0_1 1\nx_1_1 0.9999999\n\nu_1 0.0000001\n"
        assert parse_solution_file(text) == {"x_0_1": 1, "x_1_1": 1, "u_1": 0}

    def test_rejects_malformed(self):
        with pytest.raises(ValueError, match="line 1"):
            parse_solution_file("x_0_1 1 extra\n")
        with pytest.raises(ValueError, match="bad value"):
            parse_solution_file("x_0_1 one\n")
