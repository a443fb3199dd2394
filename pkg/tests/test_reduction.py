# tests/test_reduction.py
import numpy as np
import pytest

from common.errors import CnfParseError, ReductionError
from logic.model.ip_builder import build_ip, eval_objective
from logic.model.plan import Plan, encode_plan
from logic.network.labels import min_energy_forward
from logic.network.time_space import TRAVEL
from logic.reduction.cnf import Assignment, CnfFormula, parse_dimacs, satisfies, solve_by_truth_table
from logic.reduction.reduction import reduce_to_v2vc
from logic.reduction.witness import witness_backward, witness_forward
from logic.solvers.milp_solver import solve_milp
from logic.solvers.outcome import SolveStatus
from logic.verify.verifier import verify_algebraic, verify_semantic
from tests.conftest import INPUT


@pytest.fixture
def three_atoms():
    return parse_dimacs((INPUT / "three_atoms.cnf").read_text(encoding="utf-8"))


def _small():
    # (x1 or x2) and (not x1)
    return CnfFormula(n=2, clauses=((1, 2), (-1,)))


def test_parse_dimacs(three_atoms):
    assert three_atoms.n == 3
    assert three_atoms.clauses == ((1,), (2, 3), (-2, -3), (1, -2, 3))
    assert parse_dimacs(three_atoms.to_dimacs()) == three_atoms


@pytest.mark.parametrize("text", [
    "1 2 0\n",
    "p cnf 2\n1 0\n",
    "p cnf 2 1\n1 x 0\n",
    "p cnf 2 1\n1 3 0\n",
    "p cnf 4 1\n1 2 3 4 0\n",
    "p cnf 2 2\n1 0\n",
    "p cnf 2 1\n0\n",
], ids=["no-header", "short-header", "bad-literal", "out-of-range", "four-literals",
        "clause-count", "empty-clause"])
def test_parse_dimacs_errors(text):
    with pytest.raises(CnfParseError):
        parse_dimacs(text)


def test_truth_table(three_atoms):
    assert solve_by_truth_table(three_atoms) == Assignment(values=(True, False, True))
    assert not satisfies(three_atoms, Assignment(values=(True, True, True)))
    assert solve_by_truth_table(CnfFormula(n=1, clauses=((1,), (-1,)))) is None


def test_three_atoms_instance_shape(three_atoms):
    ri = reduce_to_v2vc(three_atoms)
    sc = ri.scenario
    assert ri.k == (2, 3, 3) and ri.K == 3
    assert sc.T == 15
    assert [ev.SOC_i for ev in sc.evs] == [7, 1, 10, 1, 1, 10, 1, 1, 0, 0, 0, 0]
    assert {ev.MAXSOC_i for ev in sc.evs} == {13}
    assert len(sc.road.nodes) == 3 * 3 + 2 * 4
    assert all(a.directed and a.e_a == 1 and a.d_a == 1 for a in sc.road.arcs)
    assert not sc.road.parking_stations


def test_reduced_labels(three_atoms):
    sc = reduce_to_v2vc(three_atoms).scenario
    assert min_energy_forward(sc.ts, "s1").at("true1", 1) == 1
    assert not min_energy_forward(sc.ts, "s1").reachable("true2", 5)


def test_unit_clause():
    ri = reduce_to_v2vc(CnfFormula(n=1, clauses=((1,),)))
    assert ri.scenario.T == 9
    assert [ev.SOC_i for ev in ri.scenario.evs] == [4, 0]
    plan = witness_forward(ri, Assignment(values=(True,)))
    assert verify_semantic(ri.scenario, plan).accepted


def test_forward_witness_three_atoms(three_atoms):
    ri = reduce_to_v2vc(three_atoms)
    sc = ri.scenario
    plan = witness_forward(ri, Assignment(values=(True, False, True)))
    assert verify_semantic(sc, plan).accepted
    travel = sum(1 for route in plan.routes for a in route if sc.ts.kind[a] == TRAVEL)
    assert plan.energy(sc) == travel


def test_forward_witness_passes_both_verifiers():
    ri = reduce_to_v2vc(_small())
    instance = build_ip(ri.scenario)
    plan = witness_forward(ri, Assignment(values=(False, True)))
    x = encode_plan(instance, plan)
    assert verify_algebraic(instance, x).accepted
    assert verify_semantic(ri.scenario, x).accepted
    assert eval_objective(instance, x) == plan.energy(ri.scenario)


def test_backward_recovers_the_assignment(three_atoms):
    ri = reduce_to_v2vc(three_atoms)
    a = Assignment(values=(True, False, True))
    assert witness_backward(ri, witness_forward(ri, a)) == a


def test_witness_rejects_non_satisfying_assignment(three_atoms):
    ri = reduce_to_v2vc(three_atoms)
    with pytest.raises(ReductionError):
        witness_forward(ri, Assignment(values=(False, False, False)))
    with pytest.raises(ReductionError):
        witness_forward(ri, Assignment(values=(True,)))


def test_backward_rejects_invalid_solution(three_atoms):
    ri = reduce_to_v2vc(three_atoms)
    empty = Plan(routes=tuple(() for _ in ri.scenario.evs))
    with pytest.raises(ReductionError):
        witness_backward(ri, empty)


def test_unsatisfiable_formula_is_infeasible():
    ri = reduce_to_v2vc(CnfFormula(n=1, clauses=((1,), (-1,))))
    outcome = solve_milp(build_ip(ri.scenario, objective="feasibility"))
    assert outcome.status is SolveStatus.INFEASIBLE


def _random_formula(rng, n, m):
    clauses = []
    for _ in range(m):
        size = int(rng.integers(1, 4))
        atoms = rng.choice(np.arange(1, n + 1), size=min(size, n), replace=False)
        clauses.append(tuple(int(a) if rng.random() < 0.5 else -int(a) for a in atoms))
    return CnfFormula(n=n, clauses=tuple(clauses))


@pytest.mark.slow
def test_feasibility_matches_satisfiability_on_random_formulas():
    rng = np.random.default_rng(19)
    for k in range(50):
        formula = _random_formula(rng, n=int(rng.integers(1, 4)), m=int(rng.integers(1, 4)))
        ri = reduce_to_v2vc(formula)
        outcome = solve_milp(build_ip(ri.scenario, objective="feasibility"))
        truth = solve_by_truth_table(formula)
        assert (outcome.status is SolveStatus.OPTIMAL) == (truth is not None), f"formula {k}: {formula}"
        if truth is not None:
            assert verify_semantic(ri.scenario, outcome.x).accepted
            assert witness_backward(ri, witness_forward(ri, truth)) == truth
            assert verify_semantic(ri.scenario, witness_forward(ri, truth)).accepted


@pytest.mark.slow
def test_three_atoms_exact_solve(three_atoms):
    ri = reduce_to_v2vc(three_atoms)
    outcome = solve_milp(build_ip(ri.scenario, objective="feasibility"))
    assert outcome.status is SolveStatus.OPTIMAL
    assert verify_semantic(ri.scenario, outcome.x).accepted


@pytest.mark.slow
@pytest.mark.parametrize("clauses,n", [
    (None, 3),
    (((1, 2), (-1,)), 2),
    (((1,),), 1),
    (((1, 2), (-1, -2)), 2),
    (((1, -2), (2, 3), (-1, -3)), 3),
], ids=["three_atoms", "small", "unit", "exactly_one", "chain"])
def test_assignment_read_back_from_solver_output(clauses, n, three_atoms):
    formula = three_atoms if clauses is None else CnfFormula(n=n, clauses=clauses)
    ri = reduce_to_v2vc(formula)
    outcome = solve_milp(build_ip(ri.scenario))
    assert outcome.status is SolveStatus.OPTIMAL
    assignment = witness_backward(ri, outcome.x)
    assert satisfies(formula, assignment)
