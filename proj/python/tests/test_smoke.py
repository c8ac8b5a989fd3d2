import json

import pytest

import klrfurl


def test_fixture_names():
    names = klrfurl.fixture_names()
    assert "sp4" in names
    assert "cycle3-zeta6" in names


def test_sp4_unfurls_to_a3():
    fx = klrfurl.load_fixture("sp4")
    out = json.loads(klrfurl.unfurl(json.dumps(fx["pack"]), json.dumps(fx["spectra"])))
    graph = out["graph"]
    assert len(graph["vertices"]) == 3
    arrows = {(e["src"], e["tgt"]) for e in graph["edges"]}
    assert arrows == {("1@2", "2@4"), ("1@-2", "2@4")}
    assert out["furling_ok"] is True
    assert "digraph" in out["dot"]


def test_cartan_matrix_roundtrip():
    fx = klrfurl.load_fixture("sp4")
    out = json.loads(klrfurl.unfurl(json.dumps(fx["pack"]), json.dumps(fx["spectra"])))
    datum = json.loads(klrfurl.cartan_matrix(json.dumps(out["graph"])))
    # the unfurled A3 path is simply laced
    assert all(d == "1" for d in datum["d"].values())


def test_validate_params_passes():
    fx = klrfurl.load_fixture("g2-rou")
    rep = json.loads(klrfurl.validate_params(json.dumps(fx["pack"])))
    assert rep["pass"] is True


def test_verify_klr_a2():
    fx = klrfurl.load_fixture("a2-geometric")
    rep = json.loads(klrfurl.verify_klr(json.dumps(fx["pack"]), n=2, deg=3))
    assert rep["pass"] is True
    assert rep["checks"]


def test_verify_nu_single_vertex():
    fx = klrfurl.load_fixture("single-vertex")
    rep = json.loads(
        klrfurl.verify_nu(json.dumps(fx["pack"]), json.dumps(fx["spectra"]), n=2, precision=2)
    )
    assert rep["pass"] is True
    strands = [
        c["details"]["certified_strand"]
        for c in rep["checks"]
        if "details" in c and "certified_strand" in c["details"]
    ]
    assert strands and min(strands) >= 2


def test_divergent_closure_raises():
    fx = klrfurl.load_fixture("cycle3-q2")
    with pytest.raises(klrfurl.PreconditionError):
        klrfurl.complete_spectra(json.dumps(fx["pack"]), json.dumps(fx["spectra"]), max_iter=10)


def test_sigma_check_g2():
    fx = klrfurl.load_fixture("g2-rou")
    out = json.loads(klrfurl.sigma_check(json.dumps(fx["pack"]), d=3))
    assert out["ok"] is True


def test_bad_json_raises_value_error():
    with pytest.raises(ValueError):
        klrfurl.cartan_matrix("{not json")
