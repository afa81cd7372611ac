from fractions import Fraction

import pytest

from sullivan_tc.errors import HypothesisError, ValidationError
from sullivan_tc.invariants import analyze
from sullivan_tc.model import (
    BasisChange,
    build_WB,
    detect_special_family,
    extend_by_odd,
    formality_check,
    ker_mu_generators,
    multiplication_map,
    suspension_double,
    tensor_power,
    validate,
)

from conftest import model


def test_su6_example_flags(su6):
    f = validate(su6)
    assert f.pure and f.coformal and f.constant_length == 2


def test_odd_sphere_has_vacuous_length():
    f = validate(model("generator y : 3"))
    assert f.pure and f.length_vacuous and f.constant_length is None


def test_linear_term_rejected():
    with pytest.raises(ValidationError) as exc:
        validate(model("generator x : 2;generator y : 3;generator w : 4;d y = x^2 + w"))
    kinds = {k for _, k, _ in exc.value.issues}
    assert "minimality" in kinds


def test_wrong_degree_rejected():
    with pytest.raises(ValidationError):
        validate(model("generator x : 2;generator y : 5;d y = x^2"))


def test_d_squared_checked():
    # d(dz) = d(x y) = x^3 != 0
    with pytest.raises(ValidationError) as exc:
        validate(model("generator x : 2;generator y : 3;generator z : 4;d y = x^2;d z = x y"))
    assert any(k == "d-squared" for _, k, _ in exc.value.issues)


def test_tensor_power_of_odd_sphere():
    P = tensor_power(model("generator y : 3"), 3)
    assert P.names == ["y@1", "y@2", "y@3"]
    assert not P.differential


def test_tensor_power_of_su6_example(su6):
    P = tensor_power(su6, 2)
    assert len(P.generators) == 10
    assert P.dgen("y1@2") == P.g("x1@2") ** 2
    assert all(g.degree == 4 for g in P.generators if g.name.startswith("x1@"))


def test_kernel_generators_are_killed_by_multiplication(su6):
    gens = ker_mu_generators(su6, 2)
    assert len(gens) == 5
    P = tensor_power(su6, 2)
    mu = multiplication_map(su6, P)
    assert all(not mu(g) for g in gens)
    odd = ker_mu_generators(model("generator y : 3"), 3)
    assert [str(g) for g in odd] == ["y@1 - y@2", "y@2 - y@3"]


def test_extension_by_odd_generator(su6):
    s2 = extend_by_odd(model("generator x : 2"), "u", 3, model("generator x : 2").g("x") ** 2)
    assert analyze(s2).flags.elliptic
    closed = extend_by_odd(su6, "z2", 3)
    assert closed.dgen("z2") == 0
    ext = extend_by_odd(su6, "u", 7, su6.g("x1") ** 2)
    assert validate(ext).pure


def test_build_WB_identity_basis(su6):
    W = build_WB(su6)
    assert [(g.name, g.degree) for g in W.generators[-2:]] == [("u_x1", 7), ("u_x2", 11)]
    assert W.dgen("u_x1") == W.g("x1") ** 2
    assert W.chi_pi() == su6.chi_pi() - 2


def test_build_WB_duplicate_relation_allowed():
    W = build_WB(model("generator x : 2;generator y : 3;d y = x^2"))
    assert W.dgen("u_x") == W.dgen("y")


def test_build_WB_basis_change():
    m = model("generator x1 : 2;generator x2 : 2;generator y1 : 3;generator y2 : 3;d y1 = x1^2;d y2 = x2^2")
    W = build_WB(m, BasisChange(((1, 1), (0, 1))))
    x1, x2 = W.g("x1"), W.g("x2")
    assert W.dgen("u_x1") == (x1 + x2) ** 2


def test_basis_change_must_preserve_degrees(su6):
    with pytest.raises(ValueError):
        BasisChange(((1, 1), (0, 1))).check(su6)
    with pytest.raises(ValueError):
        BasisChange(((1, 0), (0, 0))).check(model("generator a : 2;generator b : 2"))


def test_basis_csv_round_trip():
    B = BasisChange(((1, Fraction(1, 2)), (0, 1)))
    assert BasisChange.from_csv(B.to_csv()) == B


def test_suspension_double_literal_reading(su6):
    D = suspension_double(su6)
    bars = {g.name: g.degree for g in D.generators if g.name.startswith("bar_")}
    assert bars == {"bar_x1": 3, "bar_x2": 5, "bar_x1'": 3, "bar_x2'": 5}
    assert all(not D.dgen(n) for n in bars)
    diff = D.g("y1") - D.g("y1'")
    assert D.d(diff) == D.g("x1") ** 2 - D.g("x1'") ** 2
    assert D.d(D.algebra.one()) == 0


def test_suspension_double_koszul_reading(su6):
    D = suspension_double(su6, bar_differential="x")
    assert D.dgen("bar_x1") == D.g("x1")
    assert D.dgen("bar_x2'") == D.g("x2'")
    # not minimal, but still a differential
    assert all(not D.d(D.dgen(n)) for n in D.names)


def test_ellipticity(su6_analysis):
    cert = su6_analysis.elliptic_certificate
    assert cert.elliptic and cert.formal_dimension == 19
    assert cert.quotient_finite


def test_polynomial_algebra_not_elliptic():
    an = analyze(model("generator x : 2"))
    assert an.flags.elliptic is False


def test_even_sphere_elliptic():
    an = analyze(model("generator x : 2;generator y : 3;d y = x^2"))
    assert an.flags.elliptic and an.elliptic_certificate.formal_dimension == 2


def test_formality(su6):
    assert not formality_check(su6).formal
    res = formality_check(model("generator x : 2;generator y : 3;generator z : 5;d y = x^2"))
    assert res.formal and res.l == 1 and res.f0_part.names == ["x", "y"]
    twin = formality_check(model("generator x : 2;generator y : 3;generator y2 : 3;d y = x^2;d y2 = x^2"))
    assert twin.formal and twin.l == 1
    (k,) = twin.closed
    assert set(map(str, [k])) <= {"-y + y2", "y - y2", "y2 - y", "-y2 + y"}


def test_formality_needs_ellipticity():
    with pytest.raises(HypothesisError):
        formality_check(model("generator x : 2"), elliptic=False)


def test_special_family_detection(su6):
    m = model("generator x1 : 2;generator x2 : 2;generator u1 : 3;generator u2 : 3;generator y : 3;"
              "d u1 = x1^2;d u2 = x2^2;d y = x1 x2")
    assert detect_special_family(m).n == 2
    match = detect_special_family(su6)
    assert match.n == 2 and str(match.y) == "z"
    assert detect_special_family(model("generator y : 3")) is None


def test_special_family_through_supplied_basis():
    # relations are squares only in the basis (x1 + x2, x2)
    m = model("generator x1 : 2;generator x2 : 2;generator u1 : 3;generator u2 : 3;generator y : 3;"
              "d u1 = x1^2 + 2 x1 x2 + x2^2;d u2 = x2^2;d y = x1^2")
    B = BasisChange(((1, 1), (0, 1)))
    assert detect_special_family(m, [B]).n == 2


def test_formality_through_nonlinear_correction():
    # dz = x^3 = d(x y), so z - x y is closed although d is injective on span{y, z}
    m = model("generator x : 2;generator y : 3;generator z : 5;d y = x^2;d z = x^3")
    res = formality_check(m)
    assert res.formal and res.closed_names == ["z"]
    assert str(res.closed[0]) in {"-x y + z", "z - x y"}
    assert not m.d(res.closed[0])
