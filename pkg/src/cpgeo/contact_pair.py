"""Detection and validation of left-invariant metric contact pairs.

A metric contact pair is the data ``(alpha1, alpha2, phi, g)`` on a Lie
algebra.  :func:`validate` runs every axiom in a fixed gate order and
returns one record per gate; :func:`metric_contact_pair` is the strict
variant that raises :class:`AxiomViolation` on the first blocking failure.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import factorial

from . import linalg
from .errors import AxiomViolation, SingularSystem
from .exterior import (
    KForm,
    Vector,
    bracket,
    exterior_derivative,
    jacobi_check,
    wedge,
    wedge_power,
)
from .results import CheckResult
from .tensors import Endomorphism, Metric

ROLES = ("TF1", "TF2", "TG1", "TG2", "H", "V")


@dataclass(frozen=True)
class Subbundle:
    role: str
    basis: tuple

    @property
    def dim(self):
        return len(self.basis)

    def contains(self, v):
        return linalg.in_span(self.basis, v)


# -- contact pair type -----------------------------------------------------

def _max_power(w):
    """Largest ``m`` with ``w^m != 0``."""
    m = 0
    p = KForm.scalar(1, w.dim)
    while True:
        if p.degree + w.degree > w.dim:
            return m
        p = wedge(p, w)
        if p.is_zero():
            return m
        m += 1


def top_form(L, alpha1, alpha2, h, k):
    """``alpha1 ^ (d alpha1)^h ^ alpha2 ^ (d alpha2)^k``."""
    d1 = exterior_derivative(L, alpha1)
    d2 = exterior_derivative(L, alpha2)
    return wedge(wedge(wedge(alpha1, wedge_power(d1, h)), alpha2), wedge_power(d2, k))


def pair_type_report(L, alpha1, alpha2):
    n = L.dim
    if alpha1.degree != 1 or alpha2.degree != 1:
        return CheckResult(False, detail="alpha1 and alpha2 must be 1-forms")
    d1 = exterior_derivative(L, alpha1)
    d2 = exterior_derivative(L, alpha2)
    h, k = _max_power(d1), _max_power(d2)
    values = {"h": h, "k": k}
    if 2 * h + 2 * k + 2 != n:
        return CheckResult(
            False,
            values=values,
            detail=f"rank data (h, k) = ({h}, {k}) gives dimension {2 * h + 2 * k + 2}, not {n}",
        )
    top = top_form(L, alpha1, alpha2, h, k)
    values["top_coefficient"] = top.coeff(tuple(range(n)))
    if top.is_zero():
        return CheckResult(False, values=values, detail="alpha1^(da1)^h^alpha2^(da2)^k vanishes")
    return CheckResult(True, values=values)


def detect_pair_type(L, alpha1, alpha2):
    """Return the type ``(h, k)`` or raise :class:`AxiomViolation`."""
    r = pair_type_report(L, alpha1, alpha2)
    if not r:
        raise AxiomViolation("pair.type", r.detail, r.witness)
    return r.values["h"], r.values["k"]


# -- Reeb fields -------------------------------------------------------------

def reeb_fields(L, alpha1, alpha2, type_pair=None):
    """Solve ``alpha_i(Z_j) = delta_ij`` and ``i_{Z_j} d alpha_i = 0`` exactly."""
    n = L.dim
    d = [exterior_derivative(L, alpha1), exterior_derivative(L, alpha2)]
    a = [alpha1.as_covector(), alpha2.as_covector()]
    rows = [list(a[0]), list(a[1])]
    for di in d:
        for m in range(n):
            rows.append([di.coeff((l, m)) for l in range(n)])
    zs = []
    for j in range(2):
        rhs = [Fraction(int(j == 0)), Fraction(int(j == 1))] + [Fraction(0)] * (2 * n)
        try:
            zs.append(Vector(linalg.solve(rows, rhs)))
        except SingularSystem as exc:
            raise AxiomViolation("pair.reeb", f"Reeb system for Z{j + 1} is singular: {exc}") from exc
    z1, z2 = zs
    if not bracket(L, z1, z2).is_zero():
        raise AxiomViolation("pair.reeb", "Reeb fields do not commute", (z1, z2))
    return z1, z2


# -- phi completion ----------------------------------------------------------

def complete_phi(L, alpha1, alpha2, reeb, generators):
    """Extend a partial action of ``phi`` to an endomorphism.

    ``generators`` is a list of ``(v, phi v)`` pairs.  ``phi Z_i = 0`` is
    added, and for every horizontal pair the law ``phi^2 = -Id`` on the
    horizontal subbundle supplies ``phi(phi v) = -v``.
    """
    n = L.dim
    pairs = [(Vector(v), Vector(w)) for v, w in generators]
    pairs += [(z, Vector.zero(n)) for z in reeb]

    def horizontal(v):
        return alpha1(v) == 0 and alpha2(v) == 0

    pairs += [(w, -v) for v, w in list(pairs) if not v.is_zero() and horizontal(v) and horizontal(w)]
    chosen = []
    for v, w in pairs:
        if linalg.is_independent([p for p, _ in chosen] + [v]):
            chosen.append((v, w))
    if len(chosen) < n:
        raise AxiomViolation("pair.phi_structure", f"phi is determined on a {len(chosen)}-dimensional subspace only")
    vm = linalg.transpose([v for v, _ in chosen])
    wm = linalg.transpose([w for _, w in chosen])
    phi = Endomorphism(linalg.matmul(wm, linalg.inverse(vm)))
    for v, w in pairs:
        if phi(v) != w:
            raise AxiomViolation("pair.phi_structure", "phi data is inconsistent", (v, w))
    return phi


# -- the structure -----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ContactPairStructure:
    """The bundle ``(L, alpha1, alpha2, phi, g, Z1, Z2, (h, k))``.

    Instances produced by :func:`metric_contact_pair` have passed every
    blocking axiom; :func:`validate` may hand out a partially checked one.
    """

    algebra: object
    alpha1: KForm
    alpha2: KForm
    phi: Endomorphism
    metric: Metric
    reeb: tuple
    type_pair: tuple

    @property
    def dim(self):
        return self.algebra.dim

    @property
    def alphas(self):
        return (self.alpha1, self.alpha2)

    @cached_property
    def d_alphas(self):
        return (exterior_derivative(self.algebra, self.alpha1), exterior_derivative(self.algebra, self.alpha2))

    @cached_property
    def subbundles(self):
        return characteristic_subbundles(self)

    @cached_property
    def J(self):
        z1, z2 = self.reeb
        a1, a2 = self.alphas
        return self.phi - Endomorphism.outer(a2, z1) + Endomorphism.outer(a1, z2)

    @cached_property
    def T(self):
        z1, z2 = self.reeb
        a1, a2 = self.alphas
        return self.phi + Endomorphism.outer(a2, z1) - Endomorphism.outer(a1, z2)

    def is_horizontal(self, v):
        return self.alpha1(v) == 0 and self.alpha2(v) == 0


def _kernel(rows, n):
    return tuple(Vector(v) for v in linalg.nullspace(rows, n))


def characteristic_subbundles(cps):
    """Kernels defining ``TF_i``, ``TG_i``, ``H`` and ``V``."""
    n = cps.dim
    out = {}
    for i, (a, da) in enumerate(zip(cps.alphas, cps.d_alphas), start=1):
        rows = [[da.coeff((l, m)) for l in range(n)] for m in range(n)]
        out[f"TG{i}"] = Subbundle(f"TG{i}", _kernel(rows, n))
        out[f"TF{i}"] = Subbundle(f"TF{i}", _kernel(rows + [list(a.as_covector())], n))
    out["H"] = Subbundle("H", _kernel([list(a.as_covector()) for a in cps.alphas], n))
    out["V"] = Subbundle("V", tuple(cps.reeb))
    return out


def check_subbundles(cps):
    h, k = cps.type_pair
    sb = cps.subbundles
    expected = {"TF1": 2 * k + 1, "TF2": 2 * h + 1, "TG1": 2 * k + 2, "TG2": 2 * h + 2, "H": 2 * h + 2 * k, "V": 2}
    values = {role: sb[role].dim for role in ROLES}
    for role, dim in expected.items():
        if sb[role].dim != dim:
            return CheckResult(False, role, values, f"dim {role} = {sb[role].dim}, expected {dim}")
    if linalg.rank(list(sb["TF1"].basis + sb["TF2"].basis)) != cps.dim:
        return CheckResult(False, ("TF1", "TF2"), values, "TF1 + TF2 is not the whole algebra")
    for z in cps.reeb:
        for role in ("TG1", "TG2"):
            if not sb[role].contains(z):
                return CheckResult(False, role, values, f"Reeb field not in {role}")
    return CheckResult(True, values=values)


def check_phi_structure(cps):
    n = cps.dim
    phi = cps.phi
    z1, z2 = cps.reeb
    a1, a2 = cps.alphas
    for j in range(n):
        e = cps.algebra.basis(j)
        lhs = phi(phi(e))
        rhs = -e + z1 * a1(e) + z2 * a2(e)
        if lhs != rhs:
            return CheckResult(False, (j,), detail="phi^2 != -Id + a1 (x) Z1 + a2 (x) Z2")
    for i, z in enumerate((z1, z2), start=1):
        if not phi(z).is_zero():
            return CheckResult(False, (f"Z{i}",), detail=f"phi Z{i} != 0")
    r = phi.rank()
    if r != n - 2:
        return CheckResult(False, values={"rank": r}, detail=f"rank phi = {r}, expected {n - 2}")
    for i, a in enumerate((a1, a2), start=1):
        for j in range(n):
            if a(phi.image(j)) != 0:
                return CheckResult(False, (j,), detail=f"alpha{i} o phi != 0")
    return CheckResult(True, values={"rank": r})


def check_decomposable(cps):
    """``phi(TF_i) in TF_i``; orthogonality of TF1, TF2 is reported alongside."""
    sb = cps.subbundles
    witness = None
    for role in ("TF1", "TF2"):
        for v in sb[role].basis:
            if not sb[role].contains(cps.phi(v)):
                witness = witness or (role, v)
    orthogonal = all(cps.metric(u, v) == 0 for u in sb["TF1"].basis for v in sb["TF2"].basis)
    return CheckResult(
        witness is None,
        witness,
        {"phi_invariant": witness is None, "orthogonal": orthogonal},
        "" if witness is None else f"phi maps a {witness[0]} vector outside {witness[0]}",
    )


def check_metric(cps):
    n = cps.dim
    g = cps.metric
    phi = cps.phi
    a1, a2 = cps.alphas
    z1, z2 = cps.reeb
    dsum = cps.d_alphas[0] + cps.d_alphas[1]
    basis = [cps.algebra.basis(i) for i in range(n)]
    if not g.is_symmetric():
        return CheckResult(False, detail="metric is not symmetric")
    minors = g.leading_minors()
    if not all(m > 0 for m in minors):
        k = next(i for i, m in enumerate(minors) if m <= 0)
        return CheckResult(False, (k,), {"leading_minors": minors}, "metric is not positive definite")
    for i, x in enumerate(basis):
        for j, y in enumerate(basis):
            lhs, rhs = g(x, phi(y)), dsum(x, y)
            if lhs != rhs:
                return CheckResult(False, (i, j), {"g(X,phiY)": lhs, "(da1+da2)(X,Y)": rhs},
                                   "g(X, phi Y) != (da1 + da2)(X, Y)")
    for i, x in enumerate(basis):
        for k, (a, z) in enumerate(((a1, z1), (a2, z2)), start=1):
            if g(x, z) != a(x):
                return CheckResult(False, (i, f"Z{k}"), detail=f"g(X, Z{k}) != alpha{k}(X)")
    for i, x in enumerate(basis):
        for j, y in enumerate(basis):
            if g(phi(x), phi(y)) != g(x, y) - a1(x) * a1(y) - a2(x) * a2(y):
                return CheckResult(False, (i, j), detail="metric is not compatible")
    if g(z1, z2) != 0:
        return CheckResult(False, ("Z1", "Z2"), detail="Z1 and Z2 are not orthogonal")
    for v in cps.subbundles["H"].basis:
        if g(z1, v) != 0 or g(z2, v) != 0:
            return CheckResult(False, ("H", v), detail="H is not orthogonal to the Reeb fields")
    return CheckResult(True, values={"det": g.det()})


def check_compatibility(cps):
    """``g(phi X, phi Y) = g(X, Y) - a1(X)a1(Y) - a2(X)a2(Y)`` on basis pairs."""
    g, phi = cps.metric, cps.phi
    a1, a2 = cps.alphas
    basis = [cps.algebra.basis(i) for i in range(cps.dim)]
    for i, x in enumerate(basis):
        for j, y in enumerate(basis):
            if g(phi(x), phi(y)) != g(x, y) - a1(x) * a1(y) - a2(x) * a2(y):
                return CheckResult(False, (i, j))
    return CheckResult(True)


# -- normality ---------------------------------------------------------------

def nijenhuis(L, A, x, y):
    """``[A, A](X, Y) = A^2[X,Y] + [AX, AY] - A[AX, Y] - A[X, AY]``."""
    ax, ay = A(x), A(y)
    return (
        A(A(bracket(L, x, y)))
        + bracket(L, ax, ay)
        - A(bracket(L, ax, y))
        - A(bracket(L, x, ay))
    )


def normality_tensor(cps, x, y):
    """``N1(X,Y) = [phi,phi](X,Y) + 2 da1(X,Y) Z1 + 2 da2(X,Y) Z2``."""
    d1, d2 = cps.d_alphas
    z1, z2 = cps.reeb
    return nijenhuis(cps.algebra, cps.phi, x, y) + z1 * (2 * d1(x, y)) + z2 * (2 * d2(x, y))


@dataclass
class NormalityReport:
    is_normal: bool
    witness: tuple = None
    value: Vector = None
    j_integrable: bool = None
    t_integrable: bool = None
    complex_structures_ok: bool = None
    values: dict = field(default_factory=dict)


def _first_nonzero(n, fn):
    for i in range(n):
        for j in range(i + 1, n):
            v = fn(i, j)
            if not v.is_zero():
                return (i, j), v
    return None, None


def normality_tensor_and_check(cps):
    L = cps.algebra
    n = cps.dim
    e = [L.basis(i) for i in range(n)]
    witness, value = _first_nonzero(n, lambda i, j: normality_tensor(cps, e[i], e[j]))
    J, T = cps.J, cps.T
    minus_id = -Endomorphism.identity(n)
    cs_ok = (J @ J == minus_id) and (T @ T == minus_id) and (J @ T == T @ J)
    wj, _ = _first_nonzero(n, lambda i, j: nijenhuis(L, J, e[i], e[j]))
    wt, _ = _first_nonzero(n, lambda i, j: nijenhuis(L, T, e[i], e[j]))
    rep = NormalityReport(
        is_normal=witness is None,
        witness=witness,
        value=value,
        j_integrable=wj is None,
        t_integrable=wt is None,
        complex_structures_ok=cs_ok,
    )
    rep.values = {
        "J_integrable": rep.j_integrable,
        "T_integrable": rep.t_integrable,
        "J2=T2=-Id, JT=TJ": cs_ok,
    }
    return rep


def check_normality(cps):
    rep = normality_tensor_and_check(cps)
    values = dict(rep.values)
    if rep.value is not None:
        values["N1(witness)"] = rep.value
    consistent = rep.complex_structures_ok and rep.is_normal == (rep.j_integrable and rep.t_integrable)
    values["consistent"] = consistent
    if not consistent:
        return CheckResult(False, rep.witness, values, "N1 and the integrability of J, T disagree")
    return CheckResult(rep.is_normal, rep.witness, values, "" if rep.is_normal else "N1 does not vanish")


# -- volume ------------------------------------------------------------------

def volume_form(cps):
    """``(-1)^(h+k) / (2^(h+k) h! k!) * a1 ^ (da1)^h ^ a2 ^ (da2)^k``."""
    h, k = cps.type_pair
    c = Fraction((-1) ** (h + k), 2 ** (h + k) * factorial(h) * factorial(k))
    return top_form(cps.algebra, cps.alpha1, cps.alpha2, h, k) * c


def volume_identity_check(cps):
    """Compare the square of the volume coefficient with ``det g``.

    The basis covolume ``(alpha^1 ^ ... ^ alpha^n)(e_1..e_n)`` is ``1/n!``
    under the alternation convention.
    """
    n = cps.dim
    coef = volume_form(cps).coeff(tuple(range(n)))
    covolume = Fraction(1, factorial(n))
    det = cps.metric.det()
    lhs = coef * coef
    rhs = det * covolume * covolume
    sign = (coef > 0) - (coef < 0)
    return CheckResult(lhs == rhs, values={"coefficient": coef, "det_g": det, "sign": sign,
                                            "coefficient^2": lhs, "det_g*covolume^2": rhs})


# -- gates -------------------------------------------------------------------

BLOCKING = ("algebra.jacobi", "pair.type", "pair.reeb", "pair.phi_structure", "pair.subbundles", "pair.metric")


@dataclass
class PairValidation:
    checks: list
    structure: ContactPairStructure = None

    @property
    def ok(self):
        return self.structure is not None

    def get(self, name):
        for n, r in self.checks:
            if n == name:
                return r
        return None


def validate(L, alpha1, alpha2, phi, metric):
    """Run all gates in order; stop at the first blocking failure.

    ``phi`` may be an :class:`Endomorphism` or a list of ``(v, phi v)``
    generator pairs.
    """
    checks = []

    def add(name, result):
        checks.append((name, result))
        return result.passed

    jac = jacobi_check(L)
    if not add("algebra.jacobi", CheckResult(jac.ok, jac.witness, {"cyclic_sum": jac.cyclic_sum} if not jac.ok else {})):
        return PairValidation(checks)
    if not add("pair.type", pair_type_report(L, alpha1, alpha2)):
        return PairValidation(checks)
    rep = checks[-1][1]
    type_pair = (rep.values["h"], rep.values["k"])
    try:
        reeb = reeb_fields(L, alpha1, alpha2, type_pair)
    except AxiomViolation as exc:
        add("pair.reeb", CheckResult(False, exc.witness, detail=str(exc)))
        return PairValidation(checks)
    add("pair.reeb", CheckResult(True, values={"Z1": reeb[0], "Z2": reeb[1]}))
    if not isinstance(phi, Endomorphism):
        try:
            phi = complete_phi(L, alpha1, alpha2, reeb, phi)
        except AxiomViolation as exc:
            add("pair.phi_structure", CheckResult(False, exc.witness, detail=str(exc)))
            return PairValidation(checks)
    cps = ContactPairStructure(L, alpha1, alpha2, phi, metric, reeb, type_pair)
    if not add("pair.subbundles", check_subbundles(cps)):
        return PairValidation(checks)
    if not add("pair.phi_structure", check_phi_structure(cps)):
        return PairValidation(checks)
    decomposable = check_decomposable(cps)
    add("pair.decomposable", decomposable)
    if not add("pair.metric", check_metric(cps)):
        return PairValidation(checks)
    agree = decomposable.values["phi_invariant"] == decomposable.values["orthogonal"]
    add("pair.decomposable_orthogonal", CheckResult(agree, values=dict(decomposable.values)))
    add("pair.normality", check_normality(cps))
    add("pair.volume", volume_identity_check(cps))
    return PairValidation(checks, cps)


def metric_contact_pair(L, alpha1, alpha2, phi, metric):
    """Validating constructor: raises :class:`AxiomViolation` on a blocking failure."""
    v = validate(L, alpha1, alpha2, phi, metric)
    if not v.ok:
        name, r = v.checks[-1]
        raise AxiomViolation(name, r.detail or "check failed", r.witness)
    return v.structure
