"""phi-invariant subalgebras of a metric contact pair.

Angles between the Reeb fields and a subspace are irrational in general, but
their squares and the ratios ``g(Z1^T, Z2) / g(Z1^T, Z1)`` are rational, so
every statement here is checked through squares plus orientation signs.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from . import linalg
from .connection import check_involutive, nabla, second_fundamental_form
from .contact_pair import nijenhuis, normality_tensor, normality_tensor_and_check
from .errors import DependentBasis, NotPhiInvariant, WrongCase
from .exterior import KForm, LieAlgebra, Vector, bracket, exterior_derivative, restrict, wedge, wedge_power
from .results import CheckResult

EVEN_TANGENT = "EvenTangent"
ONE_DIM_VERTICAL = "OneDimVertical"
ODD_TANGENT_ORTHOGONAL = "OddTangentOrthogonal"
LEANING = "Leaning"


def _sign(x):
    return (x > 0) - (x < 0)


@dataclass
class InvariantSubspace:
    cps: object
    basis: tuple
    phi_invariant: bool
    involutive: bool
    z_tangent: tuple  # (Z1^T, Z2^T)
    z_normal: tuple  # (Z1^perp, Z2^perp)
    witness: object = None

    @property
    def dim(self):
        return len(self.basis)

    def contains(self, v):
        return linalg.in_span(self.basis, v)


@dataclass
class AngleCertificate:
    cos2: Fraction
    sin2: Fraction
    tan: Fraction  # tan(theta1) = tan^2(theta1')
    sign_z1: int  # sign of g(Z1^T, Z1)
    sign_z2: int  # sign of g(Z1^T, Z2)
    cos2_theta2: Fraction = None
    directions_coincide: bool = None

    @property
    def leaning(self):
        return 0 < self.cos2 < 1 and self.sign_z1 > 0 and self.sign_z2 > 0


@dataclass
class Classification:
    case: str
    tangent_index: int = None
    certificate: AngleCertificate = None


def analyze_subspace(cps, basis, conn=None, require_invariant=True):
    """Flags and Reeb projections for ``W = span(basis)``.

    With ``require_invariant`` a non-phi-invariant subspace raises
    :class:`NotPhiInvariant` carrying the offending vector.
    """
    basis = tuple(Vector(v) for v in basis)
    if not basis or not linalg.is_independent(basis):
        raise DependentBasis("subspace basis is empty or linearly dependent")
    g = cps.metric
    witness = next((v for v in basis if not linalg.in_span(basis, cps.phi(v))), None)
    phi_inv = witness is None
    if not phi_inv and require_invariant:
        raise NotPhiInvariant("phi does not preserve the subspace", witness)
    involutive = check_involutive(cps.algebra, basis) is None
    tangent = tuple(g.project(basis, z) for z in cps.reeb)
    normal = tuple(z - t for z, t in zip(cps.reeb, tangent))
    inv = InvariantSubspace(cps, basis, phi_inv, involutive, tangent, normal, witness)
    if phi_inv:
        vertical = cps.subbundles["V"]
        for v in tangent + normal:
            if not vertical.contains(v):
                raise AssertionError(f"Reeb projection {v!r} is not vertical")
        if all(not z.is_zero() for z in normal) and all(t.is_zero() for t in tangent):
            raise ValueError("both Reeb fields are orthogonal to the subspace; input data is invalid")
    return inv


def classify(inv):
    if not inv.phi_invariant:
        raise NotPhiInvariant("classification needs a phi-invariant subspace", inv.witness)
    m = inv.dim
    t1, t2 = inv.z_tangent
    n1, n2 = inv.z_normal
    if m == 1:
        if not inv.cps.subbundles["V"].contains(inv.basis[0]):
            raise AssertionError("1-dimensional phi-invariant subspace is not vertical")
        return Classification(ONE_DIM_VERTICAL)
    if n1.is_zero() and n2.is_zero():
        if m % 2:
            raise AssertionError("subspace tangent to both Reeb fields has odd dimension")
        return Classification(EVEN_TANGENT)
    if m % 2 == 0:
        raise WrongCase(f"even-dimensional subspace ({m}) not tangent to both Reeb fields")
    for i, (n_i, t_other) in enumerate(((n1, t2), (n2, t1)), start=1):
        if n_i.is_zero():
            if not t_other.is_zero():
                raise AssertionError(f"Z{3 - i} is transverse but not orthogonal")
            cert = angle_certificate(inv) if i == 1 else None
            return Classification(ODD_TANGENT_ORTHOGONAL, i, cert)
    if any(t.is_zero() for t in (t1, t2)):
        raise WrongCase("configuration matches no case of the classification")
    return Classification(LEANING, certificate=angle_certificate(inv))


def angle_certificate(inv):
    """Squared cosines and orientation signs for the angle between Z1 and W."""
    cps = inv.cps
    g = cps.metric
    z1, z2 = cps.reeb
    t1, t2 = inv.z_tangent
    if inv.z_normal[1].is_zero():
        raise WrongCase("Z2 is tangent to the subspace; the angle of Z1 is undefined")
    cos2 = g(t1, t1)
    p1, p2 = g(t1, z1), g(t1, z2)
    cert = AngleCertificate(
        cos2=cos2,
        sin2=1 - cos2,
        tan=p2 / p1 if p1 else None,
        sign_z1=_sign(p1),
        sign_z2=_sign(p2),
    )
    if not t2.is_zero():
        cert.cos2_theta2 = g(t2, t2)
        q1, q2 = g(t2, z1), g(t2, z2)
        cert.directions_coincide = (p1 * q2 - p2 * q1 == 0) and g(t1, t2) > 0
    return cert


def check_theta2_relation(inv):
    cert = angle_certificate(inv)
    ok = cert.cos2_theta2 == cert.sin2 and bool(cert.directions_coincide)
    return CheckResult(ok, values={"cos2_theta2": cert.cos2_theta2, "sin2_theta1": cert.sin2,
                                   "directions_coincide": cert.directions_coincide})


def split_horizontal(cps, x):
    """``X = X1 + X2`` with ``X1`` in TF2 and ``X2`` in TF1."""
    tf1 = cps.subbundles["TF1"].basis
    tf2 = cps.subbundles["TF2"].basis
    coords = linalg.solve(linalg.transpose(list(tf2 + tf1)), list(x))
    x1 = Vector.zero(cps.dim)
    x2 = Vector.zero(cps.dim)
    for c, v in zip(coords[: len(tf2)], tf2):
        x1 = x1 + v * c
    for c, v in zip(coords[len(tf2):], tf1):
        x2 = x2 + v * c
    return x1, x2


def horizontal_split_ratio(cps, inv, x):
    """Check ``|X2|^2 / |X1|^2 = tan(theta1)`` for horizontal ``X`` in W.

    The squared form ``|X2|^4 cos^2 = |X1|^4 sin^2`` is checked as well, and
    the type bounds ``h >= n``, ``k >= n`` for ``dim W = 2n + 1``.
    """
    x = Vector(x)
    if x.is_zero() or not cps.is_horizontal(x) or not inv.contains(x):
        raise ValueError("X must be a nonzero horizontal vector of the subspace")
    g = cps.metric
    cert = angle_certificate(inv)
    x1, x2 = split_horizontal(cps, x)
    n1, n2 = g.norm2(x1), g.norm2(x2)
    h, k = cps.type_pair
    n = (inv.dim - 1) // 2
    squared = n2 * n2 * cert.cos2 == n1 * n1 * cert.sin2
    ratio = n1 != 0 and cert.tan is not None and n2 / n1 == cert.tan
    ok = n1 > 0 and n2 > 0 and squared and ratio and h >= n and k >= n
    return CheckResult(ok, values={"norm2_X1": n1, "norm2_X2": n2, "tan_theta1": cert.tan,
                                   "squared_identity": squared, "h": h, "k": k, "n": n})


def horizontal_part(inv):
    """Basis of ``W ∩ H``."""
    cps = inv.cps
    a = [list(al.as_covector()) for al in cps.alphas]
    rows = [[sum(ai * wi for ai, wi in zip(row, w)) for w in inv.basis] for row in a]
    out = []
    for c in linalg.nullspace(rows, inv.dim):
        v = Vector.zero(cps.dim)
        for ci, w in zip(c, inv.basis):
            v = v + w * ci
        out.append(v)
    return out


def _restricted_map(inv, A):
    """Matrix of ``A`` restricted to W in the W-basis (raises if not invariant)."""
    cols = []
    for w in inv.basis:
        c = linalg.coordinates(inv.basis, A(w))
        if c is None:
            raise NotPhiInvariant("map does not preserve the subspace", w)
        cols.append(c)
    return linalg.transpose(cols)


def subalgebra(inv):
    """The subspace as a Lie algebra in its own basis."""
    m = inv.dim
    L = inv.cps.algebra
    brackets = {}
    for a, b in combinations(range(m), 2):
        c = linalg.coordinates(inv.basis, bracket(L, inv.basis[a], inv.basis[b]))
        if c is None:
            raise ValueError("subspace is not a subalgebra")
        brackets[(a, b)] = c
    return LieAlgebra(m, brackets)


def induced_f_structure_check(cps, inv, normal=None):
    """Metric f-structure with two complemented frames on an even tangent W."""
    if classify(inv).case != EVEN_TANGENT:
        raise WrongCase("induced f-structure requires a subspace tangent to both Reeb fields")
    g, phi = cps.metric, cps.phi
    a1, a2 = cps.alphas
    z1, z2 = cps.reeb
    fails = []
    for w in inv.basis:
        if phi(phi(w)) != -w + z1 * a1(w) + z2 * a2(w):
            fails.append(("f^2", w))
        if a1(phi(w)) or a2(phi(w)):
            fails.append(("alpha o f", w))
    for z in (z1, z2):
        if not inv.contains(z) or not phi(z).is_zero():
            fails.append(("frame", z))
    for x in inv.basis:
        for y in inv.basis:
            if g(phi(x), phi(y)) != g(x, y) - a1(x) * a1(y) - a2(x) * a2(y):
                fails.append(("compatibility", (x, y)))
    j_inv = all(inv.contains(cps.J(w)) for w in inv.basis)
    t_inv = all(inv.contains(cps.T(w)) for w in inv.basis)
    if not (j_inv and t_inv):
        fails.append(("J, T invariance", None))
    if normal is None:
        normal = normality_tensor_and_check(cps).is_normal
    values = {"J_invariant": j_inv, "T_invariant": t_inv, "ambient_normal": normal}
    if normal:
        n1_zero = all(normality_tensor(cps, x, y).is_zero() for x, y in combinations(inv.basis, 2))
        values["restricted_N1_zero"] = n1_zero
        if not n1_zero:
            fails.append(("N1 restricted", None))
    return CheckResult(not fails, fails[0] if fails else None, values)


@dataclass
class InducedStructure:
    """Unnormalised induced data on a leaning W, in W-coordinates."""

    omega: KForm  # g(Z1^T, .) restricted to W
    zeta: Vector  # Z1^T
    norm2: Fraction  # |Z1^T|^2 = omega(zeta)
    phi_w: list  # matrix of phi restricted to W


@dataclass
class InducedContactReport:
    checks: dict = field(default_factory=dict)
    values: dict = field(default_factory=dict)
    structure: InducedStructure = None

    @property
    def passed(self):
        return all(r is None or r for r in self.checks.values())


def induced_contact_structure_check(cps, inv, normal=None):
    """Contact and almost contact metric structure on a leaning W.

    Uses ``w = g(Z1^T, .)|_W`` (a positive multiple of the unit form) and
    keeps every ``|Z1^T|^2`` factor explicit.  Items ``a``..``f`` are
    returned separately; ``f`` is ``None`` when the ambient pair is not normal.
    """
    cls = classify(inv)
    if cls.case != LEANING:
        raise WrongCase(f"induced contact structure check requires a leaning subspace, got {cls.case}")
    g, phi = cps.metric, cps.phi
    m = inv.dim
    n = (m - 1) // 2
    t1 = inv.z_tangent[0]
    s = g.norm2(t1)
    sub = subalgebra(inv)
    omega = restrict(g.flat(t1), inv.basis)
    d_omega = exterior_derivative(sub, omega)
    cross = restrict(exterior_derivative(cps.algebra, g.flat(t1)), inv.basis)
    rep = InducedContactReport()
    rep.values["norm2_Z1T"] = s
    rep.values["d_restrict_commutes"] = d_omega == cross

    top = wedge(omega, wedge_power(d_omega, n))
    top_val = top.coeff(tuple(range(m)))
    rep.values["contact_top"] = top_val
    rep.checks["a_contact"] = CheckResult(top_val != 0, values={"top": top_val})

    zeta = linalg.coordinates(inv.basis, t1 / s)
    zeta = Vector(zeta)
    iz = [sum((zeta[a] * d_omega.coeff((a, b)) for a in range(m)), Fraction(0)) for b in range(m)]
    rep.checks["b_reeb"] = CheckResult(omega(zeta) == 1 and not any(iz),
                                       values={"omega(zeta)": omega(zeta)})

    phi_w = _restricted_map(inv, phi)
    rep.structure = InducedStructure(omega, Vector(linalg.coordinates(inv.basis, t1)), s, phi_w)
    ok_c = True
    for b in range(m):
        e_b = Vector.basis(m, b)
        lhs = Vector(linalg.matvec(phi_w, linalg.matvec(phi_w, e_b)))
        rhs = -e_b + Vector(linalg.coordinates(inv.basis, t1)) * (omega(e_b) / s)
        if lhs != rhs:
            ok_c = False
    rep.checks["c_almost_contact"] = CheckResult(ok_c)

    ok_d = True
    for x in inv.basis:
        for y in inv.basis:
            ox, oy = g(t1, x), g(t1, y)
            if g(phi(x), phi(y)) != g(x, y) - ox * oy / s:
                ok_d = False
    rep.checks["d_compatible"] = CheckResult(ok_d)

    cert = angle_certificate(inv)
    hor = horizontal_part(inv)
    x = hor[0] if hor else None
    gap_ok = cert.leaning and x is not None and g.norm2(x) > 0
    rep.checks["e_not_contact_metric"] = CheckResult(
        gap_ok, values={"cos2_theta1": cert.cos2, "witness_X": x, "norm2_X": g.norm2(x) if x is not None else None}
    )

    if normal is None:
        normal = normality_tensor_and_check(cps).is_normal
    if normal:
        L = cps.algebra
        ok_f = True
        for a, b in combinations(range(m), 2):
            x, y = inv.basis[a], inv.basis[b]
            v = nijenhuis(L, phi, x, y) + t1 * (2 * d_omega.coeff((a, b)) / s)
            if not v.is_zero():
                ok_f = False
        rep.checks["f_normal"] = CheckResult(ok_f)
    else:
        rep.checks["f_normal"] = None
    return rep


def contact_metric_leaf_check(cps, inv):
    """Contact metric structure ``(phi, Z_i, alpha_i, g)`` on a W tangent to ``Z_i``
    and orthogonal to the other Reeb field."""
    cls = classify(inv)
    if cls.case != ODD_TANGENT_ORTHOGONAL:
        raise WrongCase(f"contact metric leaf check requires an odd tangent-orthogonal subspace, got {cls.case}")
    i = cls.tangent_index - 1
    a, z = cps.alphas[i], cps.reeb[i]
    da = cps.d_alphas[i]
    g, phi = cps.metric, cps.phi
    m = inv.dim
    n = (m - 1) // 2
    fails = []
    for w in inv.basis:
        if not inv.contains(phi(w)):
            fails.append(("phi-invariance", w))
        if phi(phi(w)) != -w + z * a(w):
            fails.append(("phi^2", w))
        if g(w, z) != a(w):
            fails.append(("g(X, Z)", w))
    for x in inv.basis:
        for y in inv.basis:
            if g(x, phi(y)) != da(x, y):
                fails.append(("associated", (x, y)))
    top = restrict(wedge(a, wedge_power(da, n)), inv.basis)
    top_val = top.coeff(tuple(range(m)))
    if top_val == 0:
        fails.append(("contact", None))
    return CheckResult(not fails, fails[0] if fails else None,
                       {"tangent_reeb": f"Z{i + 1}", "contact_top": top_val})


def minimality_audit(cps, conn, inv, normal=None):
    """Mean curvature, total geodesy and the one-dimensional vertical case."""
    if not inv.involutive:
        raise ValueError("minimality audit requires an involutive subspace")
    cd = second_fundamental_form(conn, inv.basis)
    if normal is None:
        normal = normality_tensor_and_check(cps).is_normal
    values = {"minimal": cd.minimal, "totally_geodesic": cd.totally_geodesic,
              "mean_curvature": cd.mean_curvature, "ambient_normal": normal}
    ok = True
    if inv.dim == 1:
        w = inv.basis[0]
        vertical = cps.subbundles["V"].contains(w)
        geodesic = nabla(conn, w, w).is_zero()
        values.update({"vertical": vertical, "geodesic": geodesic})
        ok = vertical and geodesic
    elif normal:
        ok = cd.minimal
    return CheckResult(ok, values=values)
