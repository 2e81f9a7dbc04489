import json
import subprocess
import sys

import pytest

from arrlimit.building import LatticeClass
from arrlimit.cli import JobConfig, main, run
from arrlimit.errors import ParseError
from arrlimit.scalar import QQ


def call(*args, capsys=None):
    status = main(list(args))
    out = capsys.readouterr().out
    return status, json.loads(out)


def test_stab_on_example(capsys):
    status, rep = call("stab", "example_1_19", capsys=capsys)
    assert status == 0 and rep["count"] == 2
    assert rep["pairwise_incident"] is True
    assert rep["degenerate_subsets"] == [[1, 4, 5]]


def test_emitted_classes_reparse(capsys):
    _, rep = call("gitstab", "example_1_19", capsys=capsys)
    for c in rep["classes"]:
        L = LatticeClass.from_json(c["lattice"], QQ)
        assert L.to_json() == c["lattice"]
    _, rep = call("hull", "example_1_19", capsys=capsys)
    assert rep["size"] == 2 and rep["convex"] and rep["simplex"]


def test_hull_of_listed_classes(tmp_path, capsys):
    doc = {"base_field": {"kind": "Q"},
           "classes": [{"matrix": [["1", "0"], ["0", "1"]]}, {"matrix": [["z^3", "0"], ["0", "1"]]}]}
    p = tmp_path / "h.json"
    p.write_text(json.dumps(doc))
    status, rep = call("hull", str(p), capsys=capsys)
    assert status == 0 and rep["size"] == 4


def test_gitstab_verdicts(capsys):
    _, rep = call("gitstab", "example_1_19", capsys=capsys)
    assert rep["tiles"] and rep["unimodular"]
    assert rep["hypersimplex_tiles"] and rep["hypersimplex_unimodular"]
    own = sorted(p["inequalities"][0]["I"] for p in rep["decomposition"]["polytopes"])
    assert own == [[1, 5], [2, 3, 4]]


def test_audit_on_pappus(capsys):
    status, rep = call("audit", "brianchon_pascal", capsys=capsys)
    assert status == 0
    assert (rep["lhs"], rep["rhs"], rep["violates"]) == (11, 10, True)


def test_cohomology_of_trivial_decomposition(tmp_path, capsys):
    p = tmp_path / "triv.json"
    p.write_text(json.dumps({"r": 2, "n": 4, "polytopes": [{"inequalities": []}]}))
    _, rep = call("cohomology", str(p), capsys=capsys)
    assert rep["h1"] == 0 and rep["tiles"]


def test_cohomology_of_cells(tmp_path, capsys):
    p = tmp_path / "cells.json"
    p.write_text(json.dumps({"cells": [[[0, 0], [1, 0], [0, 1]], [[1, 0], [0, 1], [1, 1]]],
                             "ambient": [[0, 0], [1, 0], [0, 1], [1, 1]]}))
    _, rep = call("cohomology", str(p), capsys=capsys)
    assert rep["h1"] == 0


def test_fiber_surface_trop(capsys):
    _, rep = call("fiber", "example_1_19", capsys=capsys)
    assert rep["dim"] == 1 and rep["boundary"]["1"] == [2]
    _, rep = call("surface", "example_1_19", capsys=capsys)
    assert sorted(c["blowup_point_count"] for c in rep["components"]) == [0, 1]
    _, rep = call("trop", "verify", "example_1_19", "--window", "2", capsys=capsys)
    assert rep["failed"] == 0 and rep["checked"] == 625


def test_lax_central_crossratio(capsys):
    _, rep = call("lax", "brianchon_pascal", capsys=capsys)
    assert rep["lax"]
    _, rep = call("central", "brianchon_pascal", capsys=capsys)
    assert rep["tiles"] and rep["unimodular"] and rep["h1"] == 0
    _, rep = call("crossratio", "octahedron_2_4", "--V", "1,2,3,4", "--W", "", capsys=capsys)
    assert rep["value"] == "1 - z" and rep["limit"] == "1" and rep["series"] == {"0": "1", "1": "-1"}


def test_domain_error_exit_1(capsys):
    status, rep = call("surface", "octahedron_2_4", capsys=capsys)
    assert status == 1 and rep["error"] == "not_implemented"


def test_parse_errors_exit_2(tmp_path, capsys):
    status, rep = call("stab", "no_such_thing", capsys=capsys)
    assert status == 2 and rep["error"] == "parse_error"
    bad = tmp_path / "bad.json"
    bad.write_text('{"r": 3, "vectors": [["1", "z^"]]}')
    assert call("stab", str(bad), capsys=capsys)[0] == 2
    bad.write_text("{not json")
    assert call("stab", str(bad), capsys=capsys)[0] == 2
    assert call("stab", "example_1_19", "--field", "Fp:4", capsys=capsys)[0] == 2
    with pytest.raises(ParseError):
        JobConfig("stab", "x", window=0)


def test_field_override(capsys):
    status, rep = call("stab", "example_1_19", "--field", "Fp:7", capsys=capsys)
    assert status == 0 and rep["count"] == 2


def test_out_file(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["stab", "--json", str(tmp_path / "missing.json"), "--out", str(out)]) == 2
    capsys.readouterr()
    assert main(["stab", "example_1_19", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["count"] == 2


def test_byte_identical_runs():
    cmd = [sys.executable, "-m", "arrlimit", "gitstab", "example_1_19"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a.endswith(b"\n")


def test_run_api():
    status, rep = run(JobConfig("stab", "generic_3_5"))
    assert status == 0 and rep["count"] == 1
