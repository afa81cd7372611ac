"""Independent reference computations used by the tests."""
from __future__ import annotations

from fractions import Fraction

from sullivan_tc.cohomology import SubspaceSpan, TensorPowerAlgebra, cohomology
from sullivan_tc.invariants import analyze
from sullivan_tc.model import tensor_power


def kunneth_mismatches(m, r: int) -> list[str]:
    """Compare ``H^{⊗r}`` built by the Künneth formula with direct elimination
    on the tensor-power model, up to degree ``2 * fd``."""
    an = analyze(m)
    H = an.H
    fd = an.elliptic_certificate.formal_dimension
    top = 2 * fd
    T = TensorPowerAlgebra(H, r)
    power = tensor_power(m, r)
    Hp = cohomology(power, top)
    problems = []
    for k in range(top + 1):
        tk = sum(1 for d in T.degrees if d == k)
        if tk != Hp.dim(k):
            problems.append(f"degree {k}: Künneth {tk}, direct {Hp.dim(k)}")
    reps = {}

    def rep(i):
        if i not in reps:
            reps[i] = T.element_rep(i, power, m)
        return reps[i]

    def direct(vec):
        out = {}
        for i, c in vec.items():
            for h, v in Hp.project(rep(i)).items():
                out[h] = out.get(h, 0) + c * v
        return {h: v for h, v in out.items() if v}

    n = T.dim_total()
    for i in range(n):
        for j in range(n):
            if T.degrees[i] + T.degrees[j] > top:
                continue
            lhs = Hp.project(rep(i) * rep(j))
            rhs = direct(T.mul_basis(i, j))
            if lhs != rhs:
                problems.append(f"product of tuples {T.tuples[i]} and {T.tuples[j]} differs")
    return problems


def ideal_generated(T: TensorPowerAlgebra, generators) -> SubspaceSpan:
    """The two-sided ideal spanned by basis elements times generators."""
    ideal = SubspaceSpan(T)
    for g in generators:
        for i in range(T.dim_total()):
            p = T.multiply({i: Fraction(1)}, g)
            if p:
                ideal.add(p)
    return ideal


def brute_force_zcl(H, r: int) -> int:
    """Nilpotency of ker μ using a full basis of K as multipliers (no ideal shortcut)."""
    T = TensorPowerAlgebra(H, r)
    K = T.kernel_of_mu()
    basis = K.vectors()
    current, length = basis, 1
    while True:
        nxt = SubspaceSpan(T)
        for a in current:
            for b in basis:
                p = T.multiply(a, b)
                if p:
                    nxt.add(p)
        if nxt.dim == 0:
            return length
        current, length = nxt.vectors(), length + 1
