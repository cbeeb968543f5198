import math
import os
from pathlib import Path

import pytest

import chipletdse as cd

DATA = Path(os.environ.get("CHIPLETDSE_DATA_DIR", Path(__file__).resolve().parents[2] / "data"))
SPEC = DATA / "infotainment.json"


@pytest.fixture(scope="module")
def doc():
    return cd.load_spec_file(str(SPEC))


def test_cost_and_yield():
    assert cd.die_yield(0.0) == 1.0
    assert cd.gross_dies_per_wafer(858.0) == 59
    assert cd.assembly_yield(1, 0) == pytest.approx(0.999)
    ratio = cd.cost_ratio(858.0, [170.0] * 4, 20000)
    assert 3.5 <= ratio <= 4.5
    params = cd.ProcessCostParams()
    params.wafer_cost = 5000.0
    assert cd.cost_ratio(858.0, [170.0] * 4, 20000, params) == pytest.approx(ratio, rel=1e-12)
    assert cd.package_cost([], 0) == 0.0


def test_power_and_perf():
    p = cd.power_breakdown(activity=0.1, load_capacitance=1e-9, frequency=2e9, voltage=1.0)
    assert p["switching"] == pytest.approx(0.2)
    rows = [
        cd.ConfigMetrics("C1", 129.6854, 1.95e9, 30.311),
        cd.ConfigMetrics("C2", 177.3822, 1.97e9, 43.234),
        cd.ConfigMetrics("C3", 136.7064, 1.92e9, 30.763),
    ]
    ranked = cd.rank_configs(rows)
    assert [r["name"] for r in ranked] == ["C1", "C3", "C2"]
    assert ranked[0]["relative"] == pytest.approx(1.93, abs=0.02)


def test_phy():
    lp = cd.line_params()
    assert lp["c_per_length"] == pytest.approx(389e-12, rel=0.005)
    assert cd.max_trace_length() * 1e3 == pytest.approx(36.5, abs=0.1)


def test_spec_round_trip(doc):
    assert len(doc.package.chiplets) == 8
    again = cd.load_spec(cd.dump_spec(doc))
    assert cd.dump_spec(again) == cd.dump_spec(doc)
    with pytest.raises(cd.ValidationError):
        cd.load_spec('{"package": {"interposer_width": 10, "interposer_height": 10}, "chiplets": []}')
    with pytest.raises(cd.ParseError):
        cd.load_spec("{")
    assert issubclass(cd.ValidationError, cd.Error)


def test_floorplan_and_thermal(doc):
    fp = cd.bsp_placement(doc.package)
    assert cd.is_legal(fp)
    assert cd.floorplan_from_json(fp.to_json()) == fp
    assert fp.to_svg().startswith("<?xml")
    res = cd.thermal_peaks(fp, doc.package.stack, 2.0)
    assert res["outflow"] == pytest.approx(res["power"], rel=1e-3)
    assert res["peaks"]["chiplet"] > doc.package.stack.ambient
    soc = cd.monolithic_plan(40.0, 858.0, 100.0)
    assert cd.compare_soc_vs_chiplet(soc, soc, cd.default_stack(), 2.0)["delta"] == 0.0


def test_annealing(doc):
    assert cd.alpha_for(70.0) == pytest.approx(0.35)
    assert cd.anneal_cost(70.0, 150.0, 60.0, 80.0, 100.0, 200.0) == pytest.approx(0.5)
    assert cd.acceptance_probability(0.4, 0.5, 0.1) == pytest.approx(math.exp(-1.0))
    with pytest.raises(cd.DomainError):
        cd.acceptance_probability(0.0, 1.0, 0.0)

    cfg = doc.anneal
    cfg.max_iterations = 5
    a = cd.optimize(doc.package, cfg)
    b = cd.optimize(doc.package, cfg)
    assert a.iterations <= 5
    assert [h.peak_temperature for h in a.history] == [h.peak_temperature for h in b.history]
    assert a.best == b.best
    assert cd.is_legal(a.best)

    rows = cd.interposer_sweep(doc.package, [12.0], cfg)
    assert len(rows) == 1 and not rows[0]["feasible"]
