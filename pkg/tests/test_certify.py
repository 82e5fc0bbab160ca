import random
from fractions import Fraction as F

import pytest
import sympy

from utrep.algebra import IDENTITY, UTMat
from utrep.certify import (
    certify_genus3,
    coprime_base,
    genus3_assignment,
    klein_analyze,
    klein_forced_form,
    klein_solutions,
    mult_indep,
    scan_kernel,
    two_sided_variant,
)
from utrep.groups import eval_word, exponent_sums, fungi
from utrep.repspace import PreconditionError
from utrep.scc import genus3_catalog

N3 = fungi(1)
PRIMES = (2, 3, 5, 7, 11, 13)


def brute_force_relations(x, z, bound=20):
    return {(p, q) for p in range(-bound, bound + 1) for q in range(-bound, bound + 1)
            if (p, q) != (0, 0) and x ** p * z ** q == 1}


def test_mult_indep_examples():
    assert mult_indep(2, 3).independent
    assert mult_indep(2, 4).witness == (2, -1)
    assert mult_indep(1, F(7, 3)).witness == (1, 0)
    assert mult_indep(F(7, 3), 1).witness == (0, 1)
    assert mult_indep(F(4, 9), F(27, 8)).witness == (3, 2)
    assert mult_indep(6, F(2, 3)).independent
    with pytest.raises(ValueError):
        mult_indep(-2, 3)


def test_coprime_base():
    base = coprime_base([12, 18, 35])
    for i, a in enumerate(base):
        for b in base[i + 1:]:
            assert sympy.gcd(a, b) == 1


def _random_rational(rng, support):
    num = den = 1
    for prime in support:
        e = rng.randint(-3, 3)
        if e > 0:
            num *= prime ** e
        else:
            den *= prime ** -e
    return F(num, den)


def test_mult_indep_matches_brute_force():
    rng = random.Random(20)
    for _ in range(200):
        support = rng.sample(PRIMES, rng.randint(1, 2))
        x = _random_rational(rng, support)
        z = x ** rng.randint(-3, 3) if rng.random() < 0.4 else _random_rational(rng, support)
        hits = brute_force_relations(x, z, bound=10)
        res = mult_indep(x, z)
        assert res.independent == (not hits)
        if not res.independent:
            p, q = res.witness
            assert x ** p * z ** q == 1 and sympy.igcd(p, q) == 1


def test_certify_accepts_worked_point():
    cert = certify_genus3(2, 1, 3, 0)
    assert cert.verdict == "accept"
    assert [c.name for c in cert.checks] == ["x_positive", "z_positive", "mult_indep", "p_nonzero", "relation"]
    assert any("p = -16" in n for n in cert.notes)


def test_certify_rejections():
    cert = certify_genus3(2, 0, 3, 0)
    assert cert.verdict == "reject" and cert.check("p_nonzero").witness == "0"
    cert = certify_genus3(2, 1, 4, 0)
    assert cert.check("mult_indep").witness == [2, -1]
    cert = certify_genus3(1, 5, 3, 2)
    assert cert.check("mult_indep").witness == [1, 0]
    cert = certify_genus3(-2, 1, 3, 0)
    assert cert.check("x_positive").status == "fail"
    assert cert.verdict == "reject"


def test_certificate_json_shape():
    out = certify_genus3(2, 1, 3, 0).to_json()
    assert out["inputs"] == {"point": ["2", "1", "3", "0"]}
    assert out["verdict"] == "accept"
    assert {"name": "mult_indep", "status": "pass"} in out["checks"]


def test_scan_examples():
    catalog = genus3_catalog(2, 2)
    assert scan_kernel(genus3_assignment(2, 1, 3, 0), catalog).empty
    trivial = {g: IDENTITY for g in "abc"}
    assert len(scan_kernel(trivial, catalog).identity) == len(catalog)
    killed = {str(e.word) for e in scan_kernel(genus3_assignment(2, 0, 3, 0), catalog).identity}
    assert {"c", "c^2"} <= killed


def test_certify_with_scan():
    cert = certify_genus3(2, 1, 3, 0, scan_k=3, scan_n=3)
    assert cert.accepted and cert.check("catalog_scan").passed
    cert = certify_genus3(2, 0, 3, 0, scan_k=2, scan_n=2)
    assert "c" in cert.check("catalog_scan").witness


def test_abelianization_on_catalog():
    rng = random.Random(3)
    catalog = genus3_catalog(4, 4)
    for x, y, z, w in [(2, 1, 3, 0), (F(5, 2), -1, F(7, 3), F(1, 2))]:
        rho = genus3_assignment(x, y, z, w)
        for entry in rng.sample(catalog, 200):
            sums = exponent_sums(entry.word, N3)
            assert eval_word(entry.word, rho).x == F(x) ** sums["a"] * F(z) ** sums["b"]


def test_two_sided_examples():
    rep = two_sided_variant(2, 1, 3, 0)
    c = rep.assignment["c"]
    assert c == UTMat(F(1), F(8), -1)
    assert (c @ c).is_identity()
    assert [r.det for r in rep.det_table] == [-1, -1, -1, 1]
    assert all(r.agrees for r in rep.det_table)
    assert rep.relation.residual == UTMat(F(1), F(-16))
    assert not rep.relation.holds_exactly and not rep.relation.holds_projectively
    with pytest.raises(PreconditionError):
        two_sided_variant(2, 0, 3, 0)


def test_klein_examples():
    cert = klein_analyze(1, 1, -1)
    assert cert.check("relation").passed
    assert all(c.passed for c in cert.checks if c.name.startswith("loop:"))
    assert any(n.startswith("projectivizing kills: c") for n in cert.notes)
    cert = klein_analyze(1, 1, 1)
    assert cert.check("loop:c").status == "fail" and cert.verdict == "reject"
    cert = klein_analyze(2, 0, -1)
    assert cert.accepted


def test_klein_solutions_symbolic():
    x, y = sympy.symbols("x y")
    c = sympy.Matrix([[x, y], [0, 1 / x]])
    d = sympy.Matrix([[3, 5], [0, sympy.Rational(1, 3)]])
    eqs = sympy.simplify(c * d * c * d.inv() - sympy.eye(2))
    solved = sympy.solve(list(eqs), [x, y], dict=True)
    expected = {(s[x], s[y]) for s in solved}
    assert expected == {(1, 0), (-1, 0)}
    found = {(m.x, m.y) for m in klein_solutions(3, 5).solutions}
    assert found == expected
    assert not klein_solutions(3, 5).free_family


def test_klein_identity_d():
    sol = klein_solutions(1, 0)
    assert {(m.x, m.y) for m in sol.solutions} == {(1, 0), (-1, 0)}


def test_klein_forced_form():
    rep = klein_forced_form(100, seed=0)
    assert rep.ok and len(rep.samples) == 100
    assert all(len(s.solutions) == 2 for s in rep.samples)
