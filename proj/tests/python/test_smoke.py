import math

import pytest

import ccrsim


def worked_log():
    log = ccrsim.EventLog()
    steps = [
        (1, 1, 1), (2, 1, 1), (3, 1, 1), (1, 2, 1),
        (4, 1, -1), (5, 1, -1), (2, 3, 1), (1, 3, 1),
        (3, 3, -1), (3, 4, 1), (1, 4, 1), (5, 4, -1),
        (2, 4, 1), (4, 4, 1), (2, 4, 0), (4, 3, -1),
    ]
    for agent, paragraph, value in steps:
        log.append(agent, paragraph, value)
    return log


def test_log_round_trip(tmp_path):
    log = worked_log()
    assert len(log) == 16
    assert log.paragraphs() == {1, 2, 3, 4}
    assert log.agents() == {1, 2, 3, 4, 5}

    path = tmp_path / "events.log"
    ccrsim.save_event_log(log, path)
    again = ccrsim.load_event_log(path)
    assert again.events() == log.events()


def test_scores_and_solutions():
    log = worked_log()
    assert ccrsim.score("APS||0.5|EVER_VOTED", 1, log) == pytest.approx(0.60)
    assert ccrsim.score("RAPS||0.5|EVER_VOTED", 3, log) == pytest.approx(7 / 15)
    assert ccrsim.solution("APS||0.5|EVER_VOTED", log) == {1, 2, 3, 4}
    assert ccrsim.solution("RAPS||0.5|EVER_VOTED", log) == {1, 2, 4}
    assert ccrsim.solution("RAMS:0.25||0.5|EVER_VOTED", log) == {1, 4}
    assert ccrsim.solution("RAMS:0.75||0.5|EVER_VOTED", log) == set()


def test_stance_and_tally():
    log = worked_log()
    stance = ccrsim.stance(log)
    assert stance[1] == {1: 1, 2: 1, 3: 1, 4: 1}
    assert 4 not in stance[2]  # withdrawn
    tally = ccrsim.tally(log)
    assert tally[1]["plus"] == 3 and tally[1]["minus"] == 2


def test_trajectory_and_satisfaction():
    log = worked_log()
    t = ccrsim.trajectory("RAPS||0.5|EVER_VOTED", log)
    assert len(t["solutions"]) == 16
    assert t["solutions"][-1] == {1, 2, 4}
    assert 0.0 <= t["stability"] <= 1.0

    report = ccrsim.satisfaction(log, {1, 2, 4})
    assert report["community"] == pytest.approx(sum(report["per_agent"].values()))
    assert report["normalized"] == pytest.approx(report["community"] / 5)


def test_f_exp_golden():
    assert ccrsim.f_exp(0.60, 16, 0.1) == pytest.approx(0.316, abs=1e-3)
    assert ccrsim.f_exp(0.0, 10, 0.5) == 0.0


def test_rm_matches_brute_force():
    log = worked_log()
    rm = ccrsim.rm_solution(log)
    paragraphs = sorted(log.paragraphs())
    best, best_value = None, -math.inf
    for mask in range(2 ** len(paragraphs)):
        candidate = {p for i, p in enumerate(paragraphs) if mask >> i & 1}
        value = ccrsim.satisfaction(log, candidate)["community"]
        if value > best_value:
            best, best_value = candidate, value
    assert ccrsim.satisfaction(log, rm)["community"] == pytest.approx(best_value)
    assert best is not None


def test_simulate_is_deterministic():
    a = ccrsim.simulate(events=60, seed=11, agents=6)
    b = ccrsim.simulate(events=60, seed=11, agents=6)
    assert a["events"] == b["events"]
    assert a["document"] == b["document"]
    assert len(a["series"]) == 60
    assert a["final"]["stability"] == pytest.approx(b["final"]["stability"])

    c = ccrsim.simulate(events=60, seed=12, agents=6)
    assert c["events"] != a["events"]


def test_simulate_euclidean_population():
    run = ccrsim.simulate(
        rule="APS||0.5|EVER_VOTED",
        events=40,
        seed=3,
        agents=8,
        population="euclidean:two-peaks",
    )
    assert len(run["events"]) == 40


def test_pareto_front():
    front = ccrsim.pareto_front(
        [("a", 0.9, 0.2), ("b", 0.5, 0.9), ("c", 0.4, 0.4), ("d", 0.9, 0.9)]
    )
    assert front == ["d"]


def test_errors_surface_as_python_exceptions():
    log = ccrsim.EventLog()
    with pytest.raises(ccrsim.CcrError):
        log.append(1, 1, -1)  # a new paragraph must start with an approval
    with pytest.raises(ccrsim.CcrError):
        ccrsim.simulate(rule="BOGUS", events=5)
    assert ccrsim.rule_grid()  # 54-rule benchmark grid
