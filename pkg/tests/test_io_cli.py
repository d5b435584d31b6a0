import json

import numpy as np
import pytest

from fracform import DirichletForm, build_counterexample, build_gasket, iterate
from fracform import io
from fracform.cli import main


def test_triple_round_trip_is_byte_stable():
    for T in (build_counterexample(), build_gasket(4)):
        text = io.dumps(io.triple_to_dict(T))
        assert io.triple_from_dict(json.loads(text)) == T
        assert io.dumps(io.triple_to_dict(io.triple_from_dict(json.loads(text)))) == text


def test_form_round_trip_is_byte_stable():
    E = DirichletForm(4, [0.1, 1 / 3, 2.0, 0.0, np.pi, 1e-300])
    text = io.dumps(io.form_to_dict(E))
    F = io.form_from_dict(json.loads(text))
    assert F == E
    assert io.dumps(io.form_to_dict(F)) == text
    assert '"pair": [1, 2]' in text


def test_form_file_must_list_every_pair():
    d = io.form_to_dict(DirichletForm.unit(3))
    d["coefficients"].pop()
    with pytest.raises(ValueError):
        io.form_from_dict(d)


def test_dumps_formatting():
    assert io.dumps({"b": 0.1, "a": [1, float("nan"), None]}) == \
        '{"a": [1, null, null], "b": 0.10000000000000001}\n'


def test_trace_csv_columns(gaskets):
    trace = iterate(gaskets[3], DirichletForm.unit(3), np.ones(3), 5, 1e-12)
    lines = io.trace_to_csv(trace).splitlines()
    assert lines[0] == "step,residual,M,m,phi,coeff_sum"
    assert len(lines) == len(trace.records) + 1


@pytest.fixture
def files(tmp_path):
    def write(name, obj):
        path = tmp_path / name
        io.write_json(obj, path)
        return str(path)
    return tmp_path, write


def test_cli_build_and_validate(files, capsys):
    tmp, _ = files
    out = str(tmp / "T.json")
    assert main(["triple", "build", "--kind", "counterexample", "-o", out]) == 0
    assert main(["triple", "validate", out]) == 0
    assert "N=20" in capsys.readouterr().out
    bad = tmp / "bad.json"
    bad.write_text(json.dumps({"n_boundary": 2, "n_cells": 2, "n_level1": 4,
                               "cells": [[1, 3], [4, 2]]}))
    assert main(["triple", "validate", str(bad)]) == 2
    assert "AxiomC" in capsys.readouterr().err


def test_cli_renorm_gasket(files):
    tmp, write = files
    T = write("T.json", io.triple_to_dict(build_gasket(3)))
    E = write("E.json", io.form_to_dict(DirichletForm.unit(3)))
    r = write("r.json", {"r": [1, 1, 1]})
    out = str(tmp / "out.json")
    assert main(["renorm", "--triple", T, "--form", E, "--weights", r, "-o", out]) == 0
    F = io.form_from_dict(io.read_json(out))
    np.testing.assert_allclose(F.coefficients, 0.6, atol=1e-9)


def test_cli_usage_errors(files, capsys):
    _, write = files
    T = write("T.json", io.triple_to_dict(build_gasket(3)))
    E = write("E.json", io.form_to_dict(DirichletForm.unit(3)))
    with pytest.raises(SystemExit) as err:
        main(["renorm", "--triple", T, "--form", E])
    assert err.value.code == 1
    assert "usage" in capsys.readouterr().err
    assert main(["form", "conductivity", "--form", E, "--pair", "1-2"]) == 1
    assert main(["triple", "build", "--kind", "gasket"]) == 1


def test_cli_reducible_form_is_invalid_input(files):
    _, write = files
    T = write("T.json", io.triple_to_dict(build_gasket(4)))
    E = write("E.json", io.form_to_dict(DirichletForm.from_pairs(4, {(1, 2): 1.0, (3, 4): 1.0})))
    r = write("r.json", {"r": [1, 1, 1, 1]})
    assert main(["renorm", "--triple", T, "--form", E, "--weights", r]) == 2


def test_cli_conductivity(files, capsys):
    _, write = files
    E = write("E.json", io.form_to_dict(DirichletForm.unit(3)))
    assert main(["form", "conductivity", "--form", E, "--pair", "1,3"]) == 0
    assert float(capsys.readouterr().out) == pytest.approx(1.5)


def test_cli_iterate_trace(files):
    tmp, write = files
    T = write("T.json", io.triple_to_dict(build_gasket(3)))
    E = write("E.json", io.form_to_dict(DirichletForm.unit(3)))
    r = write("r.json", {"r": [5 / 3] * 3})
    csv_path = tmp / "trace.csv"
    assert main(["iterate", "--triple", T, "--form", E, "--weights", r,
                 "--max-steps", "20", "--tol", "1e-10", "--trace", str(csv_path)]) == 0
    assert csv_path.read_text().startswith("step,residual,M,m,phi,coeff_sum\n")


def test_cli_certify_is_deterministic(files):
    tmp, _ = files
    a, b = tmp / "a.json", tmp / "b.json"
    assert main(["certify", "--samples", "3", "--seed", "42", "-o", str(a)]) == 0
    assert main(["certify", "--samples", "3", "--seed", "42", "-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    doc = io.read_json(a)
    assert len(doc["certificates"]) == 3 and all(c["valid"] for c in doc["certificates"])
    assert main(["certify", "--samples", "0", "-o", str(a)]) == 0


def test_cli_search_is_deterministic(files):
    tmp, write = files
    T = write("T.json", io.triple_to_dict(build_gasket(3)))
    a, b = tmp / "a.json", tmp / "b.json"
    for path in (a, b):
        assert main(["search", "--triple", T, "--grid", "2", "-o", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()
    report = io.read_json(a)
    assert report["best"]["residual"] < 1e-10


def test_cli_explain_and_version(capsys):
    assert main(["explain", "far_margin"]) == 0
    assert "w / 2" in capsys.readouterr().out
    assert main(["explain", "nonsense"]) == 1
    with pytest.raises(SystemExit) as err:
        main(["--version"])
    assert err.value.code == 0
