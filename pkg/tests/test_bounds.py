import json

import pytest

from sullivan_tc.bounds import assemble, generating_function, soundness_violations
from sullivan_tc.errors import HypothesisError
from sullivan_tc.invariants import analyze, zcl
from sullivan_tc.model import build_WB
from sullivan_tc.modelfile import load_model

from conftest import CORPUS, model


def certs(text_or_model, rs, **kw):
    m = model(text_or_model) if isinstance(text_or_model, str) else text_or_model
    return assemble(analyze(m), rs, **kw)


def values(cs, rule):
    return {c.r: c.fired(rule)[0].value for c in cs if c.fired(rule)}


def test_su6_example_exact(su6_analysis):
    cs = assemble(su6_analysis, [2, 3, 4])
    assert [c.exact for c in cs] == [5, 8, 11]
    assert values(cs, "constant_length_upper") == {2: 5, 3: 8, 4: 11}
    assert values(cs, "coformal_L_lower") == {2: 5, 3: 8, 4: 11}
    assert values(cs, "special_family") == {2: 5, 3: 8, 4: 11}
    assert "formal_equality" in cs[0].skipped
    assert soundness_violations(cs) == []


def test_formal_equality_examples():
    odd = certs("generator y : 3", [2, 3, 5])
    assert values(odd, "formal_equality") == {2: 1, 3: 2, 5: 4}
    assert [c.exact for c in odd] == [1, 2, 4]
    cp2 = certs("generator x : 2;generator y : 5;d y = x^3", [2, 3])
    assert values(cp2, "formal_equality") == {2: 4, 3: 6}
    s3s5 = certs("generator a : 3;generator b : 5", [2])
    assert values(s3s5, "formal_equality") == {2: 2}
    assert values(s3s5, "zero_divisor_cuplength_lower") == {2: 2}


def test_constant_length_upper_on_extension_by_squares(su6):
    W = build_WB(su6)
    cs = certs(W, [2, 3])
    assert values(cs, "constant_length_upper") == {2: 7, 3: 12}


def test_even_sphere_upper():
    assert values(certs("generator x : 2;generator y : 3;d y = x^2", [2, 3]), "constant_length_upper") == {2: 2, 3: 3}


def test_zcl_fallback_on_odd_sphere():
    cs = certs("generator y : 3", [2, 3])
    assert values(cs, "zero_divisor_cuplength_lower") == {2: 1, 3: 2}


def test_special_family_n1():
    cs = certs("generator x : 2;generator u : 3;generator y : 3;d u = x^2;d y = x^2", [2, 3])
    assert values(cs, "special_family") == {2: 3, 3: 5}
    assert values(cs, "constant_length_upper") == {2: 3, 3: 5}
    assert [c.exact for c in cs] == [3, 5]


def test_special_family_skipped_for_non_members():
    cs = certs("generator x : 2;generator y : 5;d y = x^3", [2])
    assert "special_family" in cs[0].skipped


def test_odd_extension_over_even_sphere():
    # base CP^1 = S^2, one closed z:3 -> upper r + (r - 1)
    cs = certs("generator x : 2;generator y : 3;generator z : 3;d y = x^2", [2, 3])
    assert values(cs, "odd_extension_upper") == {2: 3, 3: 5}
    an = analyze(model("generator x : 2;generator y : 3;generator z : 3;d y = x^2"))
    assert [zcl(an.model, an.H, r) for r in (2, 3)] == [3, 5]


def test_odd_extension_skipped_without_split():
    cs = certs("generator x : 2;generator y : 3;d y = x^2", [2])
    assert "odd_extension_upper" in cs[0].skipped


def test_honesty_case_reports_interval():
    cs = assemble(analyze(load_model(CORPUS / "cubic_relations.smf")), [2])
    c = cs[0]
    assert c.exact is None and c.lower < c.upper
    assert "exact" not in c.to_json()


def test_non_elliptic_model_has_empty_certificate():
    c = certs("generator x : 2", [2])[0]
    assert c.lower is None and c.upper is None and c.exact is None
    assert c.skipped


def test_json_schema_and_determinism(su6_analysis):
    a = [c.to_json() for c in assemble(su6_analysis, [2, 3])]
    b = [c.to_json() for c in assemble(su6_analysis, [3, 2])][::-1]
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    assert {"model", "r", "lower", "upper", "exact", "derivation"} <= set(a[0])
    for app in a[0]["derivation"]:
        assert {"rule", "kind", "value", "hypotheses", "inputs", "children"} == set(app)
        assert all(v is not False for v in app["hypotheses"].values())


def test_lower_bounds_grow_by_at_least_cat(su6_analysis):
    cs = assemble(su6_analysis, [2, 3, 4])
    lows = [c.lower for c in cs]
    assert all(b - a >= 3 for a, b in zip(lows, lows[1:]))


def test_generating_function_su6_example(su6_analysis):
    gf = generating_function(assemble(su6_analysis, [2, 3, 4]), 3)
    assert gf.coefficients == [0, 5, -2]
    assert gf.P(1) == 3
    # series of P/(1-x)^2 reproduces TC_{r+1} = 3r + 2
    assert gf.series(5)[1:] == [5, 8, 11, 14]


def test_generating_function_odd_sphere():
    gf = generating_function(certs("generator y : 3", [2, 3, 4]), 1)
    assert gf.P(1) == 1 and gf.coefficients == [0, 1, 0]


def test_generating_function_refusals(su6_analysis):
    cs = assemble(analyze(load_model(CORPUS / "cubic_relations.smf")), [2])
    with pytest.raises(HypothesisError, match="r=2"):
        generating_function(cs, 5)
    good = assemble(su6_analysis, [2, 3])
    with pytest.raises(HypothesisError, match="affine"):
        generating_function(good, 4)
    with pytest.raises(HypothesisError):
        generating_function(good[:1], 3)
