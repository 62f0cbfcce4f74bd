import os
from pathlib import Path

import pytest

import critmatch as cm

DATA = Path(os.environ.get("CRITMATCH_TEST_DATA", Path(__file__).resolve().parents[1] / "data"))


@pytest.fixture
def fig1():
    return cm.load_instance(str(DATA / "fig1.inst"))


def test_load_and_shape(fig1):
    assert (fig1.n_a, fig1.n_b, fig1.s, fig1.t) == (3, 4, 1, 1)
    assert fig1.critical_a == [1]
    assert len(fig1.edges) == 6
    assert cm.parse_instance(fig1.to_text()) == fig1
    assert cm.parse_instance(fig1.to_json()) == fig1


def test_solve_fig1(fig1):
    result = cm.solve(fig1)
    assert result["size"] == 3
    pairs = [(p["a"], p["b"]) for p in result["matching"]]
    assert pairs == [(0, 1), (1, 3), (2, 2)]
    assert result["stats"]["proposal_count"] <= result["stats"]["proposal_bound"]


def test_verify_example_matchings(fig1):
    m1 = cm.verify(fig1, [(0, 1), (1, 0), (2, 2)])
    assert m1["is_critical"] and not m1["is_rsm"]
    assert [(p["a"], p["b"]) for p in m1["unjustified"]] == [(1, 3)]
    m2 = cm.verify(fig1, [(0, 1), (1, 3), (2, 2)])
    assert m2["is_critical"] and m2["is_rsm"]
    bad = cm.verify(fig1, [(0, 0), (0, 1)])
    assert not bad["is_matching"]


def test_oracle_and_coverage(fig1):
    truth = cm.oracle(fig1)
    assert truth["max_critical_rsm_size"] == 3
    assert cm.max_critical_coverage(fig1) == 2
    with pytest.raises(cm.SizeGuardError):
        cm.oracle(fig1, guard=2)


def test_popularity():
    inst = cm.Instance(1, 2, [(0, 0, 1, 1), (0, 1, 2, 1)], critical_b=[0, 1])
    assert cm.more_popular(inst, [(0, 0)], [(0, 1)]) == "first"
    assert cm.more_popular(inst, [(0, 1)], [(0, 0)]) == "second"


def test_random_instances_solve_cleanly():
    for seed in range(50):
        inst = cm.random_instance(n_a=5, n_b=5, tie_density=0.5, critical_fraction_a=0.4,
                                  critical_fraction_b=0.4, seed=seed)
        assert inst == cm.random_instance(n_a=5, n_b=5, tie_density=0.5, critical_fraction_a=0.4,
                                          critical_fraction_b=0.4, seed=seed)
        pairs = [(p["a"], p["b"]) for p in cm.solve(inst)["matching"]]
        report = cm.verify(inst, pairs)
        assert report["is_rsm"] and report["is_critical"]


def test_errors():
    with pytest.raises(cm.ParseError):
        cm.parse_instance("instance 1 1\ncritical_a\ncritical_b\nedge 0 0 0 1\n")
    with pytest.raises(ValueError):
        cm.Instance(1, 1, [(0, 0, 0, 1)])
    with pytest.raises(ValueError):
        cm.random_instance(edge_probability=2.0)
