# SPDX-License-Identifier: Apache-2.0
import json
import math

import pytest

import chcert

UNIT_INI = """
[interval]
a = 0
b = 1
[parameters]
p = 1
q = 1
r = 1
[weights.u]
kind = constant
c = 1
[weights.v]
kind = constant
c = 1
[weights.w]
kind = constant
c = 1
[oracle]
budget = 4
"""


def unit_triple():
    I = chcert.Interval(0, 1)
    one = chcert.Weight.constant(I, 1)
    return chcert.WeightTriple(one, one, one)


def test_unit_constants():
    rep = chcert.certify(unit_triple(), chcert.Parameters(1, 1, 1))
    assert rep["regime"] == "I"
    assert rep["holds"] == "finite"
    assert rep["constants"]["C1"]["value"] == pytest.approx(0.25, abs=1e-6)
    assert rep["constants"]["C2"]["value"] == pytest.approx(0.5, abs=1e-6)
    assert rep["estimate"] == pytest.approx(0.75, abs=2e-6)


def test_single_constant_and_weights():
    I = chcert.Interval(0, 1)
    w = chcert.Weight.power(I, 2, 1.0)
    assert w(0.5) == pytest.approx(1.0)
    assert w.integral(0, 1) == pytest.approx(1.0)
    c = chcert.compute_C(2, unit_triple(), chcert.Parameters(1, 1, 1))
    assert c["converged"] and c["value"] == pytest.approx(0.5, abs=1e-6)


def test_infinite_constant():
    I = chcert.Interval(0, 1)
    one = chcert.Weight.constant(I, 1)
    tr = chcert.WeightTriple(one, chcert.Weight.power(I, 1, -1), one)
    rep = chcert.certify(tr, chcert.Parameters(1, 1, 1))
    assert math.isinf(rep["constants"]["C2"]["value"])
    assert rep["holds"] == "infinite"


def test_discretize_unit_interval():
    seq = chcert.discretize(chcert.Weight.constant(chcert.Interval(0, 1), 1))
    assert seq["M"] == 0
    assert seq["x"][-1] == 1.0


def test_oracle_lower_bound():
    r = chcert.maximize_ratio(unit_triple(), chcert.Parameters(1, 1, 1), budget=4, seed=3)
    assert 0.45 <= r["lower_bound"] <= 0.5 + 1e-9
    again = chcert.maximize_ratio(unit_triple(), chcert.Parameters(1, 1, 1), budget=4, seed=3)
    assert again == r


def test_lemma_suite():
    assert "abel" in chcert.lemma_suite_names()
    r = chcert.run_lemma_suite("abel", 100, 5)
    assert r["failures"] == 0 and r["cases"] == 100


def test_command_reports_match_cli_format():
    rep = chcert.report("certify", UNIT_INI)
    assert rep["command"] == "certify"
    assert rep["estimate"] == pytest.approx(0.75, abs=2e-6)
    assert chcert.run_command("oracle", UNIT_INI) == chcert.run_command("oracle", UNIT_INI)
    assert json.loads(chcert.run_command("discretize", UNIT_INI))["command"] == "discretize"


def test_errors():
    with pytest.raises(chcert.DomainError):
        chcert.certify(unit_triple(), chcert.Parameters(2, 1, 1))
    with pytest.raises(ValueError):
        chcert.run_command("certify", "[interval]\na = 0\n")
    with pytest.raises(ValueError):
        chcert.Interval(1, 0)
