import itertools
from fractions import Fraction

import pytest

from sullivan_tc.cohomology import (
    SubspaceSpan,
    TensorPowerAlgebra,
    bigraded_algebra,
    cohomology,
    subspace_product_nilpotency,
)
from sullivan_tc.errors import CapExceeded, HypothesisError
from sullivan_tc.invariants import analyze
from sullivan_tc.model import build_WB
from sullivan_tc.modelfile import load_model

from conftest import CORPUS, model
from oracles import ideal_generated, kunneth_mismatches

ELLIPTIC = sorted(p.stem for p in CORPUS.glob("*.smf"))


def test_even_sphere_dims():
    H = analyze(model("generator x : 2;generator y : 3;d y = x^2")).H
    assert {k: d for k, d in H.dims().items() if d} == {0: 1, 2: 1}


def test_odd_sphere_dims():
    H = cohomology(model("generator y : 3"), 3)
    assert [H.dim(k) for k in range(4)] == [1, 0, 0, 1]


def test_su6_example_top_class(su6_analysis):
    H = su6_analysis.H
    assert H.dim(19) == 1
    assert H.euler_characteristic() == 0
    assert H.dim_total() == 6


@pytest.mark.parametrize("name", ELLIPTIC)
def test_poincare_duality(name):
    an = analyze(load_model(CORPUS / f"{name}.smf"))
    fd = an.elliptic_certificate.formal_dimension
    for k in range(fd + 1):
        assert an.H.dim(k) == an.H.dim(fd - k)


@pytest.mark.parametrize("name", ["cp2", "s2xs4", "su6_su3xsu3", "s2xs3"])
def test_representatives_and_products(name):
    H = analyze(load_model(CORPUS / f"{name}.smf")).H
    d = H.model.d
    for c in H.classes:
        assert not d(c.rep)
        assert not H.is_coboundary(c.rep)
    # a coboundary projects to zero
    for g in H.model.generators:
        if H.model.dgen(g.name):
            assert H.project(H.model.dgen(g.name)) == {}
    n = H.dim_total()
    for i, j in itertools.product(range(n), repeat=2):
        s = (-1) ** (H.basis_degree(i) * H.basis_degree(j))
        assert H.mul_basis(i, j) == {k: s * v for k, v in H.mul_basis(j, i).items()}
    for i, j, k in itertools.product(range(n), repeat=3):
        a = H.multiply(H.mul_basis(i, j), {k: Fraction(1)})
        b = H.multiply({i: Fraction(1)}, H.mul_basis(j, k))
        assert a == b


def test_projection_rejects_non_cocycles():
    m = model("generator x : 2;generator y : 3;d y = x^2")
    H = analyze(m).H
    with pytest.raises(ValueError):
        H.project(m.g("y"))


def test_bigraded_even_sphere_extension():
    m = model("generator x : 2;generator u : 3;d u = x^2")
    H = bigraded_algebra(m)
    assert sorted(c.bidegree for c in H.classes) == [(0, 0), (1, 0)]


def test_bigraded_needs_coformal():
    with pytest.raises(HypothesisError):
        bigraded_algebra(model("generator x : 2;generator y : 5;d y = x^3"))


def test_bigraded_sums_match_plain_cohomology(su6):
    W = build_WB(su6)
    HB = bigraded_algebra(W)
    H = analyze(W).H
    for k in range(HB.up_to + 1):
        assert sum(1 for c in HB.classes if c.degree == k) == H.dim(k)
    odd_p = [c for c in HB.classes if c.bidegree[0] % 2 == 1]
    assert len(odd_p) >= 2


def test_subspace_nilpotency_examples():
    s2 = analyze(model("generator x : 2;generator y : 3;d y = x^2")).H
    assert subspace_product_nilpotency(SubspaceSpan(s2, [{i: 1} for i in s2.positive_indices()]), s2) == 1
    cp2 = analyze(model("generator x : 2;generator y : 5;d y = x^3")).H
    assert subspace_product_nilpotency(SubspaceSpan(cp2, [{i: 1} for i in cp2.positive_indices()]), cp2) == 2
    assert subspace_product_nilpotency(SubspaceSpan(cp2), cp2) == 0
    with pytest.raises(ValueError):
        subspace_product_nilpotency(SubspaceSpan(cp2, [{0: 1}]), cp2)


def test_tensor_power_cap():
    H = analyze(model("generator x : 2;generator y : 5;d y = x^3")).H
    with pytest.raises(CapExceeded):
        TensorPowerAlgebra(H, 4, cap=50)


@pytest.mark.parametrize("name,r", [("sphere2", 2), ("sphere3", 3), ("cp2", 2), ("s2xs3", 2)])
def test_kernel_of_mu_is_generated_by_differences(name, r):
    H = analyze(load_model(CORPUS / f"{name}.smf")).H
    T = TensorPowerAlgebra(H, r)
    K = T.kernel_of_mu()
    ideal = ideal_generated(T, T.difference_generators())
    assert K.dims() == ideal.dims()
    assert K.dim == T.dim_total() - H.dim_total()


@pytest.mark.parametrize("name,r", [("sphere2", 2), ("sphere3", 3), ("s3xs5", 2)])
def test_kunneth_against_direct_elimination(name, r):
    assert kunneth_mismatches(load_model(CORPUS / f"{name}.smf"), r) == []
