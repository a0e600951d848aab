import json

import pytest

from steenrod_fp.checks import (
    REGISTRY,
    CheckSpec,
    UsageError,
    default_grid,
    dumps,
    exit_code,
    load_specs,
    run_check,
    run_suite,
)
from steenrod_fp.poly import format_polynomial, w_det

SMALL = [
    CheckSpec.make("detp1", p=3, n=2),
    CheckSpec.make("detp1", p=5, n=2, method="recursive"),
    CheckSpec.make("minhlemma", p=3, n=2),
    CheckSpec.make("hatrel", p=3, n=2, b=1),
    CheckSpec.make("davis", p=3, u=6, v=0),
    CheckSpec.make("minhtrick2", p=3, n=2, comp=(1, 1), a=(1, 0)),
    CheckSpec.make("minhtrick", p=3, n=2, b=2),
    CheckSpec.make("chir0", p=3, **{"lambda": "4,3,1"}),
    CheckSpec.make("chir1", p=3, **{"lambda": "4,3,1"}),
    CheckSpec.make("chim", p=3, **{"lambda": "5,3,2"}),
    CheckSpec.make("zerocase", p=3, **{"lambda": "4,3,1"}),
    CheckSpec.make("factors", p=3, **{"lambda": "4,3,1"}),
    CheckSpec.make("sumI", p=3, s=2),
    CheckSpec.make("milnor_spike_i", p=3, **{"lambda": "4,3,1"}),
    CheckSpec.make("milnor_spike_iii", p=3, **{"lambda": "2,2"}),
    CheckSpec.make("omegai", p=3, R=(2, 2)),
    CheckSpec.make("basecase", p=3, n=2, bset=(1, 2)),
    CheckSpec.make("omegaii", p=3, count=3, seed=1),
    CheckSpec.make("weylmod1", p=3, **{"lambda": "4,3,1"}),
    CheckSpec.make("hq_dualpath", p=3, nvars=2, poly="x1^2*x2^2", r=2),
]


def test_every_check_has_a_small_instance():
    assert {s.check_id for s in SMALL} | {"milnor_spike_ii"} == set(REGISTRY)


@pytest.mark.parametrize("spec", SMALL, ids=lambda s: s.check_id)
def test_small_instances_pass(spec):
    rep = run_check(spec)
    assert rep["status"] == "pass", rep.get("failed")
    assert rep["comparisons"] >= 1
    assert "wall_time" not in rep


def test_milnor_spike_ii_statuses():
    # (2,2) = 2*(1,1) is covered; (4,3,1) is not a multiple of p-1
    assert run_check(CheckSpec.make("milnor_spike_ii", p=3, **{"lambda": "2,2"}))["status"] == "pass"
    rep = run_check(CheckSpec.make("milnor_spike_ii", p=3, **{"lambda": "4,3,1"}))
    assert rep["status"] == "conjecture"
    assert rep["conjecture"] == "confirmed up to sign"


def test_expected_value_paths():
    good = format_polynomial(w_det(2, 3) ** 2)
    assert run_check(CheckSpec.make("detp1", good, p=3, n=2))["status"] == "pass"
    rep = run_check(CheckSpec.make("detp1", "x1^8", p=3, n=2))
    assert rep["status"] == "fail"
    assert rep["failed"]["label"].endswith("(expected value)")
    assert rep["failed"]["difference"]
    with pytest.raises(UsageError):
        run_check(CheckSpec.make("detp1", "x9", p=3, n=2))


def test_skips():
    rep = run_check(CheckSpec.make("chim", p=3, **{"lambda": "3,3,1"}))
    assert rep["status"] == "skip" and "T-regular" in rep["reason"]
    rep = run_check(CheckSpec.make("detp1", p=3, n=7))
    assert rep["status"] == "skip" and "unbounded" in rep["reason"]


def test_usage_errors():
    with pytest.raises(UsageError):
        run_check(CheckSpec.make("nope", p=3))
    with pytest.raises(UsageError):
        run_check(CheckSpec.make("detp1", p=4, n=1))
    with pytest.raises(UsageError):
        run_check(CheckSpec.make("detp1", p=3))
    with pytest.raises(UsageError):
        default_grid(["nope"])


def test_timing_is_opt_in():
    rep = run_check(CheckSpec.make("detp1", p=3, n=1), timing=True)
    assert isinstance(rep["wall_time"], float)


def test_suite_is_deterministic_and_ordered():
    specs = SMALL[:6]
    a = run_suite(specs)
    b = run_suite(specs, jobs=2)
    assert dumps(a) == dumps(b)
    assert [r["check_id"] for r in a["reports"]] == [s.check_id for s in specs]
    assert a["summary"]["pass"] == 6 and exit_code(a) == 0


def test_failing_suite_exit_code():
    res = run_suite([CheckSpec.make("detp1", "x1", p=3, n=1)])
    assert exit_code(res) == 1


def test_default_grid_shape():
    grid = default_grid()
    ids = [s.check_id for s in grid]
    order = list(REGISTRY)
    assert ids == sorted(ids, key=order.index)
    assert set(ids) == set(REGISTRY)
    assert CheckSpec.make("chim", p=3, **{"lambda": "6,5,4,3,2"}) in grid
    assert default_grid(["sumI"]) == [s for s in grid if s.check_id == "sumI"]


def test_load_specs(tmp_path):
    path = tmp_path / "params.json"
    path.write_text(json.dumps([{"check": "sumI", "params": {"p": 3, "s": 1}}, {"check": "detp1", "params": {"p": 3, "n": 1}, "expected": "x1^2"}]))
    specs = load_specs(str(path))
    assert specs == [CheckSpec.make("sumI", p=3, s=1), CheckSpec.make("detp1", "x1^2", p=3, n=1)]
    assert run_suite(specs)["summary"]["pass"] == 2
    path.write_text("{}")
    with pytest.raises(UsageError):
        load_specs(str(path))
    with pytest.raises(UsageError):
        load_specs(str(tmp_path / "missing.json"))
