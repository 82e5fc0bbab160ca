from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from utrep.algebra import IDENTITY, UTMat, p_poly, square_coords
from utrep.groups import check_relation, eval_word
from utrep.repspace import (
    PreconditionError,
    RepPoint,
    lemma_pee_seq,
    lemma_pee_term,
    membership,
    parse_point,
    perturb,
    perturb_bungee_a1,
    perturb_bungee_commutator,
    perturb_fungi_a1,
    perturb_fungi_commutator,
    perturb_kill_a1,
    perturb_kill_c1,
    perturb_kill_prefix_squares,
    perturb_separating,
    regularize,
    rep_of,
    sample_point,
    space_presentation,
    targeted_word,
    torus_rep,
)


def pt(space, text):
    return parse_point(space, text)


def test_membership_examples():
    assert membership(pt("U:1", "2,0,3,0")).ok
    assert membership(pt("VFungi:1", "2,1,3,0,1,8")).ok
    m = membership(pt("VFungi:1", "2,1,3,0,1,0"))
    assert not m.ok and m.residual == -16


def test_membership_rejects_other_components():
    assert not membership(pt("U:1", "-2,0,3,0")).ok
    assert not membership(pt("VFungi:1", "2,1,3,0,2,8")).ok
    assert not membership(pt("V:2", "2,0,1,0")).ok
    assert membership(pt("V:2", "2,0,1/2,0")).ok
    with pytest.raises(ValueError):
        pt("U:1", "1,0,1")


def test_rep_of_examples():
    rho = rep_of(pt("VFungi:1", "2,1,3,0,1,8"))
    assert rho == {"a": UTMat(F(2), F(1)), "b": UTMat(F(3), F(0)), "c": UTMat(F(1), F(8))}
    rho = rep_of(pt("U:2", "1,0,1,0,1,0,1,0"))
    assert all(m == IDENTITY for m in rho.values())
    rho = rep_of(pt("U:1", "2,0,3,0"))
    assert rho["a"] == UTMat(F(2), F(0)) and rho["a"].lower_right == F(1, 2)
    assert rho["b"].lower_right == F(1, 3)
    with pytest.raises(PreconditionError):
        rep_of(pt("VFungi:1", "2,1,3,0,1,0"))


def test_rep_of_bungee_layout():
    p = pt("VBungee:1", "2,1,3,0,1,16/5,2,7")
    rho = rep_of(p)
    assert rho["c"] == UTMat(F(1), F(16, 5)) and rho["d"] == UTMat(F(2), F(7))
    assert check_relation(rho, space_presentation("VBungee:1")).holds_exactly


SPACES = ["U:1", "U:2", "U:3", "V:2", "V:3", "V:5", "VFungi:0", "VFungi:1", "VFungi:2", "VBungee:0", "VBungee:1"]


@pytest.mark.parametrize("space", SPACES)
@pytest.mark.parametrize("seed", range(10))
def test_sample_point_is_member(space, seed):
    p = sample_point(space, seed)
    assert membership(p).ok
    assert check_relation(rep_of(p), space_presentation(space)).holds_exactly
    assert sample_point(space, seed) == p


def test_sample_point_examples():
    p = sample_point("V:3", 0)
    x1, x2, x3 = p.coords[0], p.coords[2], p.coords[4]
    assert x3 == 1 / (x1 * x2)
    p = sample_point("VFungi:1", 1)
    assert p.coords[5] == -p_poly(*p.coords[:4]) / 2


def test_json_roundtrip():
    p = sample_point("U:2", 7)
    assert RepPoint.from_json(p.to_json()) == p


# perturbation examples


def test_kill_a1_examples():
    out = perturb_kill_a1(pt("U:1", "1,0,3,1"), 1)
    assert out.coords == (2, F(9, 16), 3, 1)
    assert p_poly(*out.coords) == 0
    out = perturb_kill_a1(pt("U:1", "1,0,1,5"), F(1, 2))
    assert out.coords == (1, F(1, 2), 1, 5)
    base = pt("U:2", "1,0,3,1,2,0,3,0")
    assert perturb_kill_a1(base, 0) == base
    with pytest.raises(PreconditionError):
        perturb_kill_a1(pt("U:1", "2,0,3,0"), 1)


def test_separating_examples():
    base = pt("U:2", "2,0,3,0,2,0,3,0")
    out = perturb_separating(base, 1, 1)
    assert out.coords[3] == F(-1, 9) and out.coords[7] == F(1, 9)
    assert membership(out).ok
    assert p_poly(*out.blocks()[0]) == -1
    assert perturb_separating(base, 1, 0) == base
    with pytest.raises(PreconditionError):
        perturb_separating(pt("U:2", "1,0,1,0,1,0,1,0"), 1, 1)
    with pytest.raises(PreconditionError):
        perturb_separating(base, 2, 1)


def test_kill_c1_examples():
    base = pt("V:3", "1,0,2,0,1/2,0")
    out = perturb_kill_c1(base, 1)
    assert out.coords[1] == F(1, 2)
    # q3 = s1 s2 t3 + s1 t2/s3 + t1/(s2 s3) = 4 t3 + 1 with t2 = 0
    assert square_coords(out.coords[4], out.coords[5]).t == F(-1, 4)
    assert out.coords[5] == F(-1, 10)
    assert membership(out).ok
    assert perturb_kill_c1(base, 0) == base
    with pytest.raises(PreconditionError):
        perturb_kill_c1(pt("V:1", "1,0"), 1)


def test_prefix_squares_exact_branch():
    base = pt("V:3", "1,0,2,0,1/2,0")
    res = perturb_kill_prefix_squares(base, 1, F(5, 4))
    assert res.exact
    assert res.point.coords[0] == F(3, 2)
    assert res.point.coords[4] == F(1, 3)
    assert membership(res.point).ok
    assert perturb_kill_prefix_squares(base, 1, 0).point == base


def test_prefix_squares_approximate_branch():
    base = pt("V:3", "1,0,2,0,1/2,0")
    res = perturb_kill_prefix_squares(base, 1, 1)
    assert not res.exact and res.point.approximate
    assert res.residual <= 1e-12
    assert membership(res.point).ok
    assert res.square_coords[0].s == 2
    with pytest.raises(PreconditionError):
        perturb_kill_prefix_squares(base, 3, 1)


def test_fungi_examples():
    base = pt("VFungi:1", "2,0,3,0,1,0")
    out = perturb_fungi_commutator(base, 1, 1)
    assert out.coords[3] == F(-1, 9) and out.coords[5] == F(1, 2)
    assert membership(out).ok
    assert perturb_fungi_commutator(base, 1, F(1, 4)).coords[5] == F(1, 8)
    with pytest.raises(PreconditionError):
        perturb_fungi_commutator(pt("VFungi:1", "1,0,1,0,1,0"), 1, 1)


def test_fungi_a1_examples():
    out = perturb_fungi_a1(pt("VFungi:1", "1,0,3,1,1,0"), 1)
    assert out.coords[5] == 4
    assert membership(out).ok
    base = pt("VFungi:2", "1,0,3,1,2,0,3,0,1,0")
    out = perturb_fungi_a1(base, F(1, 3))
    assert out.coords[4:8] == base.coords[4:8]


def test_bungee_examples():
    base = pt("VBungee:1", "2,0,3,0,1,0,2,0")
    out = perturb_bungee_commutator(base, 1, 1)
    assert out.coords[3] == F(-1, 9) and out.coords[5] == F(1, 5)
    assert membership(out).ok
    assert perturb_bungee_commutator(base, 1, 0) == base
    out = perturb_bungee_a1(pt("VBungee:1", "1,0,3,1,1,0,2,0"), 1)
    assert out.coords[5] == -p_poly(F(1), F(1), F(3), F(1)) / 5


def test_z_witness_branch():
    # x1 = 1 but z1 != 1: the move shifts y1 instead of w1
    base = pt("U:2", "1,0,3,0,2,0,3,0")
    out = perturb_separating(base, 1, 1)
    assert out.coords[1] != 0 and out.coords[3] == 0
    assert p_poly(*out.blocks()[0]) == -1
    assert membership(out).ok


def test_case_dispatch_and_words():
    assert str(targeted_word("U:2", "separating:1")) == "a1 b1 A1 B1"
    assert str(targeted_word("V:3", "prefix:2")) == "c1^2 c2^2"
    assert str(targeted_word("VFungi:1", "fungi-a1")) == "a"
    for bad in ("separating", "kill-a1:1", "nope", "prefix:x"):
        with pytest.raises(ValueError):
            perturb(pt("U:1", "1,0,3,1"), bad, 1)


def test_regularize_then_separate():
    base = pt("U:2", "1,0,1,0,1,0,1,0")
    reg = regularize(base, [0, 1], 4)
    assert membership(reg).ok
    out = perturb_separating(reg, 1, F(1, 8))
    assert membership(out).ok
    image = eval_word(targeted_word("U:2", "separating:1"), rep_of(out))
    assert not image.is_identity()


# generic zeros of p


def test_generic_zeros_y_zero_branch():
    x, y, z, w = lemma_pee_term(1, 0, 1, 5, 10)
    assert (x, y, w) == (1, 0, 5) and z == 1 + F(1, 100)
    assert p_poly(x, y, z, w) == 0


def test_generic_zeros_radical_branch():
    seq = lemma_pee_seq(1, 2, -1, 3)
    for n in range(1, 200):
        x, y, z, w = next(seq)
        assert abs(p_poly(float(x), float(y), z, float(w))) <= 1e-12
        assert x != 1
    assert abs(z + 1) < 1e-3


def test_generic_zeros_constant_branch():
    assert lemma_pee_term(2, 0, 3, 0, 7) == (2, 0, 3, 0)
    with pytest.raises(ValueError):
        lemma_pee_term(2, 1, 3, 0, 1)


def test_torus_rep_examples():
    assert torus_rep(2, 3).coords == (2, 0, 3, 0)
    assert all(m == IDENTITY for m in rep_of(torus_rep(1, 1)).values())
    assert membership(torus_rep(2, 4)).ok


eps_values = st.integers(1, 12).map(lambda t: F(1, 2 ** t))


@given(st.sampled_from(["U:2", "U:3"]), st.integers(0, 50), eps_values)
def test_separating_after_killing_prefix(space, seed, eps):
    p = sample_point(space, seed)
    g = p.genus
    # make the first handle diagonal so that it alone is killed
    p = p.replace({1: 0, 3: 0})
    total = sum(p_poly(*b) for b in p.blocks()[1:])
    if total != 0:
        x, y, z, w = p.blocks()[-1]
        if x == 1:
            return
        p = p.replace({4 * (g - 1) + 3: w + total / (z * (1 - x * x))})
    assert membership(p).ok
    out = perturb_separating(p, 1, eps)
    assert membership(out).ok
    assert p_poly(*out.blocks()[0]) == -eps
