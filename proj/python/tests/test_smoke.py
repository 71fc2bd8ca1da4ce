import pytest

import logtrop


def smooth(g, n):
    return {
        "genus": str(g),
        "vertices": [{"id": "0", "genus": str(g)}],
        "edges": [],
        "legs": ["0"] * n,
    }


def test_graph_counts():
    assert [len(logtrop.enumerate_graphs(0, n)) for n in (3, 4, 5)] == [1, 4, 26]
    assert len(logtrop.enumerate_graphs(1, 2)) == 5


def test_graph_validation_and_gluing():
    assert logtrop.validate_graph(smooth(0, 3))["valid"]
    bad = logtrop.validate_graph(smooth(0, 2))
    assert not bad["valid"]
    assert bad["issues"][0]["code"] == "UnstableVertex"
    glued = logtrop.glue_graphs(smooth(0, 3), 3, smooth(0, 3), 1)
    assert glued["legs"] == ["0", "0", "1", "1"]
    assert len(logtrop.glue_loop(smooth(0, 3), 1, 2)["edges"]) == 1
    assert logtrop.forget_leg(glued, 4)["edges"] == []


def test_dr_values():
    one, warnings = logtrop.dr_polynomial(0, 3, [1, -1, 0])
    assert warnings == []
    texts = [c["poly"]["text"] for s in one["strata"] for c in s["cones"]]
    assert texts == ["1"]
    value, _ = logtrop.dr_polynomial(1, 2, [1, -1])
    assert all(c["poly"]["text"] == "-1/2*l_1 - 1/2*l_2" for s in value["strata"] for c in s["cones"])
    zero, warnings = logtrop.dr_polynomial(0, 3, [1, 1, 0])
    assert warnings and warnings[0].startswith("NonZeroSum")
    assert logtrop.validate_class(value)["valid"]


def test_pullbacks_and_minimality():
    delta = logtrop.glue_graphs(smooth(0, 3), 3, smooth(0, 3), 1)
    b = logtrop.boundary_class(0, 4, delta)
    pulled = logtrop.pullback_glue(0, 2, 0, 2, b)
    assert pulled["stack"] == "M(0,3) x M(0,3)"
    assert "1:l_3 + 2:l_3" in pulled["strata"][0]["cones"][0]["poly"]["text"]
    report = logtrop.check_minimality(b)
    assert report["verdict"] == "fail"
    l4 = logtrop.length_class(0, 4, 4)
    assert logtrop.pullback_forget(0, 4, l4)["stack"] == "M(0,5)"
    assert logtrop.equivalent(logtrop.exp_truncated(b, 0), logtrop.dr_polynomial(0, 4, [0, 0, 0, 0])[0])


def test_divisors():
    e = logtrop.balanced_slopes(smooth(0, 3), [1, -1, 0], 2)
    assert e["assignments"] == [[]]
    report = logtrop.div_square(0, 2, 0, 2, [1, 1, -1, -1], 4)
    assert report["pass"]
    m = logtrop.node_monoid(1, [1], [1])
    assert sorted(m["generators"]) == [["0", "2"], ["1", "1"], ["2", "0"]]


def test_cohft_checks():
    spec = {"rule": "constant", "constant": "1", "envelope": {"g": "1", "n": "4"}}
    reports = logtrop.check_axioms(spec, ["sep", "unit"], 1, 4)
    assert reports and all(r["verdict"] == "pass" for r in reports)
    dr = {"rule": "dr", "window": "2", "envelope": {"g": "1", "n": "3"}}
    loops = logtrop.check_axioms(dr, ["loop"], 1, 3)
    assert any(r["verdict"] == "fail" for r in loops)


def test_fans():
    line = {"rank": "1", "cones": [{"rays": [["1"]]}, {"rays": [["-1"]]}]}
    chow = logtrop.chow_ring(line)
    assert chow["dimensions"] == ["1", "1"]
    assert chow["dimension_above_rank"] == "0"
    assert logtrop.pp_dimensions(line, 2) == [1, 2, 2]
    probe = logtrop.probe_orthant(3, [[1, 1, 1], [1, 1, 0]], 1)
    assert [s["dimensions"] for s in probe["steps"]] == [["1", "3"], ["1", "4"], ["1", "5"]]
    sub = logtrop.star_subdivision(line, [1])
    assert sub["refined"]["rank"] == "1"


def test_errors_carry_codes():
    with pytest.raises(logtrop.LogtropError, match="UnstableSignature"):
        logtrop.enumerate_graphs(0, 2)
    with pytest.raises(logtrop.LogtropError, match="NotComplete"):
        logtrop.chow_ring({"rank": "1", "cones": [{"rays": [["1"]]}]})
