"""Numeric invariants: homotopy characteristic, category, cuplengths and the bigraded length."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

from .cohomology import (
    CohomologyAlgebra,
    SubspaceSpan,
    TensorPowerAlgebra,
    bigraded_algebra,
    certified_cohomology,
    subspace_product_nilpotency,
)
from .errors import CapExceeded, HypothesisError
from .model import (
    BasisChange,
    EllipticityCertificate,
    FormalityResult,
    ModelPresentation,
    StructureFlags,
    build_WB,
    formality_check,
    is_quadratic_pure,
    validate,
)

DEFAULT_DIM_CAP = 5000


@dataclass
class Analysis:
    """A validated model together with its cohomology and structure certificates."""

    model: ModelPresentation
    flags: StructureFlags
    H: CohomologyAlgebra
    elliptic_certificate: EllipticityCertificate | None
    formality: FormalityResult | None
    notes: list[str] = field(default_factory=list)

    @property
    def elliptic(self) -> bool:
        return bool(self.flags.elliptic)


def analyze(m: ModelPresentation, assert_elliptic: bool = False) -> Analysis:
    flags = validate(m)
    notes = []
    H, cert = certified_cohomology(m)
    asserted = assert_elliptic or bool(m.metadata.get("elliptic"))
    if cert.elliptic:
        flags = replace(flags, elliptic=True, elliptic_source="certified")
    elif asserted:
        flags = replace(flags, elliptic=True, elliptic_source="asserted")
        H.vanishes_above = m.formal_dimension_estimate()
        notes.append(f"ellipticity asserted by user; certificate said: {cert.reason}")
    else:
        flags = replace(flags, elliptic=False, elliptic_source="certified")
    formality = None
    if flags.pure and flags.elliptic:
        formality = formality_check(m, elliptic=True)
        if m.metadata.get("formal") and not formality.formal:
            notes.append("'assert formal' overridden: the closed-odd split leaves a part with nonzero chi_pi")
        flags = replace(
            flags,
            formal=formality.formal,
            formal_source="computed",
            f0=m.chi_pi() == 0,
        )
    elif flags.pure and flags.elliptic is False:
        flags = replace(flags, f0=False)
    return Analysis(m, flags, H, cert, formality, notes)


def chi_pi(m: ModelPresentation) -> int:
    return m.chi_pi()


def cat_formula(m: ModelPresentation, flags: StructureFlags | None = None) -> int:
    """``dim V^odd + (l - 2) dim V^even`` for pure elliptic models of constant length ``l``."""
    flags = flags or validate(m)
    reasons = []
    if not flags.pure:
        reasons.append("not pure")
    if not flags.elliptic:
        reasons.append("ellipticity not certified")
    l = flags.constant_length
    if l is None:
        if flags.length_vacuous and not m.even:
            l = 2  # with no even generators the value does not depend on l
        else:
            reasons.append("differential not of constant length")
    if reasons:
        raise HypothesisError("category formula refused: " + ", ".join(reasons))
    return len(m.odd) + (l - 2) * len(m.even)


def cuplength(H: CohomologyAlgebra) -> int:
    if H.vanishes_above is None:
        raise HypothesisError("cuplength needs finite-dimensional (certified elliptic) cohomology")
    A = SubspaceSpan(H, [{i: Fraction(1)} for i in H.positive_indices()])
    return subspace_product_nilpotency(A, H)


def zcl(m: ModelPresentation, H: CohomologyAlgebra, r: int, cap: int | None = DEFAULT_DIM_CAP) -> int:
    """Nilpotency of the kernel of ``H^{⊗r} -> H`` computed inside ``H^{⊗r}``."""
    if r < 2:
        raise ValueError("r must be at least 2")
    if H.vanishes_above is None:
        raise HypothesisError("zcl needs finite-dimensional (certified elliptic) cohomology")
    T = TensorPowerAlgebra(H, r, cap)
    K = T.kernel_of_mu()
    return subspace_product_nilpotency(K, T, multipliers=T.difference_generators())


def odd_part(H: CohomologyAlgebra, odd_mode: str = "p") -> SubspaceSpan:
    """Span of classes of odd even-word-length (``odd_mode='p'``) or odd total degree."""
    if odd_mode == "p":
        idx = [i for i, c in enumerate(H.classes) if c.bidegree[0] % 2 == 1]
    elif odd_mode == "total":
        idx = [i for i, c in enumerate(H.classes) if c.degree % 2 == 1]
    else:
        raise ValueError("odd_mode must be 'p' or 'total'")
    return SubspaceSpan(H, [{i: Fraction(1)} for i in idx])


def L_length(m: ModelPresentation, basis: BasisChange | None = None, odd_mode: str = "p") -> int:
    """Longest nonzero product of classes of odd even-word-length in the extension by squares."""
    flags = validate(m)
    if not flags.pure or not is_quadratic_pure(m):
        raise HypothesisError("L needs a pure coformal model")
    W = build_WB(m, basis)
    HW = bigraded_algebra(W)
    return subspace_product_nilpotency(odd_part(HW, odd_mode), HW)


@dataclass
class Valued:
    value: int | None
    provenance: str

    def to_json(self):
        return {"value": self.value, "provenance": self.provenance}


@dataclass
class InvariantReport:
    chi_pi: int
    cat: Valued
    cl: int | None
    zcl: dict[int, int | None]
    L: dict[str, int]
    flags: StructureFlags
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "chi_pi": self.chi_pi,
            "cat": self.cat.to_json(),
            "cl": self.cl,
            "zcl": {str(r): v for r, v in sorted(self.zcl.items())},
            "L": dict(sorted(self.L.items())),
            "flags": self.flags.to_json(),
            "notes": list(self.notes),
        }


def category(an: Analysis) -> Valued:
    """LS-category from the constant-length formula, or from the cuplength of a formal model."""
    try:
        return Valued(cat_formula(an.model, an.flags), "constant-length formula")
    except HypothesisError as exc:
        reason = str(exc)
    if an.flags.formal and an.H.vanishes_above is not None:
        return Valued(cuplength(an.H), "cuplength of a formal model")
    return Valued(None, reason)


def invariant_report(an: Analysis, rs: Sequence[int] = (2,), bases: Sequence[BasisChange] = (),
                     cap: int | None = DEFAULT_DIM_CAP, odd_mode: str = "p") -> InvariantReport:
    m = an.model
    notes = list(an.notes)
    cl = cuplength(an.H) if an.H.vanishes_above is not None else None
    zcls: dict[int, int | None] = {}
    for r in rs:
        if an.H.vanishes_above is None:
            zcls[r] = None
            continue
        try:
            zcls[r] = zcl(m, an.H, r, cap)
        except CapExceeded as exc:
            zcls[r] = None
            notes.append(f"zcl_{r} skipped: {exc}")
    Ls: dict[str, int] = {}
    if an.flags.pure and is_quadratic_pure(m) and m.even:
        for B in list(bases) or [BasisChange.identity(len(m.even))]:
            Ls[B.label] = L_length(m, B, odd_mode)
    return InvariantReport(m.chi_pi(), category(an), cl, zcls, Ls, an.flags, notes)
