"""Levi-Civita connection of a left-invariant metric and submanifold curvature.

For left-invariant fields the Koszul formula reduces to

    2 g(nabla_X Y, Z) = g([X,Y], Z) - g([Y,Z], X) + g([Z,X], Y),

so the connection is a finite table of vectors.  Everything downstream
(second fundamental form, Killing test, lemma checks) is exact.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from . import linalg
from .errors import DegreeError, DependentBasis, NotInvolutive
from .exterior import Vector, bracket, exterior_derivative, wedge, wedge_power
from .results import CheckResult


class LeviCivitaConnection:
    """Christoffel table ``table[i][j] = nabla_{e_i} e_j``."""

    def __init__(self, algebra, metric, table):
        self.algebra = algebra
        self.metric = metric
        self.table = tuple(tuple(row) for row in table)

    @property
    def dim(self):
        return self.algebra.dim

    def nabla(self, x, y):
        return nabla(self, x, y)


def levi_civita(L, g):
    """Solve the Koszul system for every ordered basis pair."""
    if not g.is_positive_definite():
        raise ValueError("metric must be positive definite")
    n = L.dim
    e = [L.basis(i) for i in range(n)]
    ginv = linalg.inverse(g.matrix)
    table = []
    for i in range(n):
        row = []
        for j in range(n):
            bij = L.c(i, j)
            rhs = []
            for k in range(n):
                val = g(bij, e[k]) - g(L.c(j, k), e[i]) + g(L.c(k, i), e[j])
                rhs.append(val / 2)
            row.append(Vector(linalg.matvec(ginv, rhs)))
        table.append(row)
    return LeviCivitaConnection(L, g, table)


def nabla(conn, x, y):
    """Bilinear extension of the Christoffel table."""
    n = conn.dim
    acc = [Fraction(0)] * n
    for i, xi in enumerate(x):
        if not xi:
            continue
        for j, yj in enumerate(y):
            if not yj:
                continue
            s = xi * yj
            for k, c in enumerate(conn.table[i][j]):
                if c:
                    acc[k] += s * c
    return Vector._raw(tuple(acc))


def check_connection_laws(conn):
    """Torsion-freeness and metric compatibility on all basis pairs/triples."""
    L, g = conn.algebra, conn.metric
    n = conn.dim
    e = [L.basis(i) for i in range(n)]
    for i in range(n):
        for j in range(n):
            if conn.table[i][j] - conn.table[j][i] != L.c(i, j):
                return CheckResult(False, ("torsion", i, j), detail="nabla_X Y - nabla_Y X != [X, Y]")
    for i in range(n):
        for j in range(n):
            for k in range(j, n):
                if g(conn.table[i][j], e[k]) + g(e[j], conn.table[i][k]) != 0:
                    return CheckResult(False, ("metric", i, j, k), detail="nabla g != 0")
    return CheckResult(True)


def check_reeb_geodesic(cps, conn):
    """``nabla_{Z_i} Z_j = 0`` for i, j = 1, 2."""
    for i, zi in enumerate(cps.reeb, start=1):
        for j, zj in enumerate(cps.reeb, start=1):
            v = nabla(conn, zi, zj)
            if not v.is_zero():
                return CheckResult(False, (f"Z{i}", f"Z{j}"), {"value": v})
    return CheckResult(True)


def horizontality_lemmas_check(cps, conn):
    """``nabla_X Z_i`` horizontal for all X; ``nabla_{Z_i} X`` horizontal for horizontal X."""
    n = cps.dim
    e = [cps.algebra.basis(i) for i in range(n)]
    for i, z in enumerate(cps.reeb, start=1):
        for k in range(n):
            v = nabla(conn, e[k], z)
            if not cps.is_horizontal(v):
                return CheckResult(False, ("nabla_X Z", k, f"Z{i}"), {"value": v})
    for i, z in enumerate(cps.reeb, start=1):
        for x in cps.subbundles["H"].basis:
            v = nabla(conn, z, x)
            if not cps.is_horizontal(v):
                return CheckResult(False, ("nabla_Z X", f"Z{i}", x), {"value": v})
    return CheckResult(True)


@dataclass
class CurvatureData:
    basis: tuple
    second_fundamental_form: dict
    mean_curvature: Vector
    minimal: bool
    totally_geodesic: bool
    symmetric: bool = True
    values: dict = field(default_factory=dict)


def check_involutive(L, basis):
    """Return ``None`` if ``[W, W] in W``, else the offending index pair."""
    for a, b in combinations(range(len(basis)), 2):
        if not linalg.in_span(basis, bracket(L, basis[a], basis[b])):
            return (a, b)
    return None


def second_fundamental_form(conn, basis):
    """Second fundamental form and (unnormalised) mean curvature of ``span(basis)``.

    ``II(w_a, w_b)`` is the g-normal part of ``nabla_{w_a} w_b``; the mean
    curvature is ``sum_ab G^ab II(w_a, w_b)`` with ``G`` the Gram matrix.
    """
    L, g = conn.algebra, conn.metric
    basis = tuple(Vector(v) for v in basis)
    if not linalg.is_independent(basis):
        raise DependentBasis("subspace basis is linearly dependent")
    bad = check_involutive(L, basis)
    if bad is not None:
        raise NotInvolutive(f"[w{bad[0] + 1}, w{bad[1] + 1}] leaves the subspace", bad)
    m = len(basis)
    gram_inv = linalg.inverse(g.gram(basis))
    ii = {}
    for a in range(m):
        for b in range(m):
            v = nabla(conn, basis[a], basis[b])
            ii[(a, b)] = v - g.project(basis, v)
    symmetric = all(ii[(a, b)] == ii[(b, a)] for a in range(m) for b in range(a))
    mean = Vector.zero(conn.dim)
    for (a, b), v in ii.items():
        if gram_inv[a][b]:
            mean = mean + v * gram_inv[a][b]
    tg = all(v.is_zero() for v in ii.values())
    return CurvatureData(basis, ii, mean, mean.is_zero(), tg, symmetric)


def killing_check(conn, z):
    """``g(nabla_{e_i} Z, e_j) + g(nabla_{e_j} Z, e_i) = 0`` on all basis pairs."""
    L, g = conn.algebra, conn.metric
    n = conn.dim
    e = [L.basis(i) for i in range(n)]
    cols = [nabla(conn, e[i], z) for i in range(n)]
    for i in range(n):
        for j in range(i, n):
            s = g(cols[i], e[j]) + g(cols[j], e[i])
            if s:
                return CheckResult(False, (i, j), {"value": s})
    return CheckResult(True)


def characteristic_form(cps, which):
    """``a1 ^ a2 ^ (da2)^k`` for TG1 and ``a1 ^ a2 ^ (da1)^h`` for TG2."""
    h, k = cps.type_pair
    d1, d2 = cps.d_alphas
    base = wedge(cps.alpha1, cps.alpha2)
    if which == "TG1":
        return wedge(base, wedge_power(d2, k))
    if which == "TG2":
        return wedge(base, wedge_power(d1, h))
    raise ValueError(f"no characteristic form for {which!r}")


def rummler_check(L, foliation, w):
    """Relative closedness: ``dw(V_1..V_p, U) = 0`` for the foliation basis ``V``.

    ``U`` runs over the ambient basis (tangent choices vanish trivially).
    """
    basis = tuple(getattr(foliation, "basis", foliation))
    p = len(basis)
    if w.degree != p:
        raise DegreeError(f"{w.degree}-form for a {p}-dimensional foliation")
    leaf_volume = w(*basis)
    if leaf_volume == 0:
        raise ValueError("form vanishes on the foliation")
    if p == L.dim:
        return CheckResult(True, values={"leaf_value": leaf_volume})
    dw = exterior_derivative(L, w)
    for u in range(L.dim):
        val = dw(*basis, L.basis(u))
        if val:
            return CheckResult(False, (u,), {"leaf_value": leaf_volume, "dw": val})
    return CheckResult(True, values={"leaf_value": leaf_volume})
