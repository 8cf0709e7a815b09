"""Exact exterior calculus on a finite-dimensional Lie algebra.

Conventions (used consistently throughout the package):

* the wedge product is the alternation of the tensor product,
  ``(a ^ b)(X, Y) = 1/2 (a(X) b(Y) - a(Y) b(X))``;
* the differential of a left-invariant k-form is
  ``dw(X0..Xk) = 1/(k+1) * sum_{i<j} (-1)^(i+j) w([Xi, Xj], X0..^i..^j..Xk)``,
  so ``da(X, Y) = -1/2 a([X, Y])`` on 1-forms.

With these normalisations ``d`` is an antiderivation for ``^`` and the
associated-metric identity ``g(X, phi Y) = (da1 + da2)(X, Y)`` holds on the
standard examples without extra factors.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import factorial

from . import linalg
from .errors import (
    DegreeError,
    DependentBasis,
    DimensionMismatch,
    InconsistentEquations,
)

__all__ = [
    "Vector",
    "LieAlgebra",
    "KForm",
    "JacobiResult",
    "bracket",
    "jacobi_check",
    "wedge",
    "wedge_power",
    "exterior_derivative",
    "contract",
    "restrict",
    "structure_constants_from_equations",
    "sort_sign",
]


def sort_sign(indices):
    """Sort ``indices`` and return ``(sorted_tuple, sign)``.

    A repeated index gives ``(None, 0)``.
    """
    idx = list(indices)
    if len(set(idx)) != len(idx):
        return None, 0
    sign = 1
    # insertion sort, counting transpositions
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    return tuple(idx), sign


class Vector(tuple):
    """Immutable coefficient vector in a fixed basis."""

    __slots__ = ()

    def __new__(cls, coeffs):
        return tuple.__new__(cls, (Fraction(c) for c in coeffs))

    @classmethod
    def _raw(cls, coeffs):
        return tuple.__new__(cls, coeffs)

    @classmethod
    def zero(cls, n):
        return cls._raw((Fraction(0),) * n)

    @classmethod
    def basis(cls, n, i):
        return cls._raw(tuple(Fraction(int(j == i)) for j in range(n)))

    @property
    def dim(self):
        return len(self)

    def is_zero(self):
        return not any(self)

    def _check(self, other):
        if len(other) != len(self):
            raise DimensionMismatch(f"vectors of length {len(self)} and {len(other)}")

    def __add__(self, other):
        self._check(other)
        return Vector._raw(tuple(a + b for a, b in zip(self, other)))

    def __sub__(self, other):
        self._check(other)
        return Vector._raw(tuple(a - b for a, b in zip(self, other)))

    def __neg__(self):
        return Vector._raw(tuple(-a for a in self))

    def __mul__(self, s):
        if isinstance(s, tuple):
            return NotImplemented
        s = Fraction(s)
        return Vector._raw(tuple(a * s for a in self))

    __rmul__ = __mul__

    def __truediv__(self, s):
        s = Fraction(s)
        return Vector._raw(tuple(a / s for a in self))

    def __repr__(self):
        return "Vector(" + ", ".join(str(c) for c in self) + ")"

    def __reduce__(self):
        return (Vector, (tuple(self),))


def _vsum(vectors, n):
    acc = [Fraction(0)] * n
    for v in vectors:
        for i, x in enumerate(v):
            if x:
                acc[i] += x
    return Vector._raw(tuple(acc))


@dataclass(frozen=True)
class JacobiResult:
    ok: bool
    witness: tuple = None
    cyclic_sum: Vector = None

    def __bool__(self):
        return self.ok


class LieAlgebra:
    """Structure constants ``[e_i, e_j] = sum_k c[i][j][k] e_k`` over Q.

    Only antisymmetry is enforced at construction; Jacobi is a separate
    check (:func:`jacobi_check`) so that invalid inputs can be reported.
    """

    def __init__(self, dim, brackets=None, labels=None):
        if dim < 1:
            raise DimensionMismatch("a Lie algebra must have positive dimension")
        self.dim = dim
        self.labels = tuple(labels) if labels is not None else tuple(f"e{i + 1}" for i in range(dim))
        if len(self.labels) != dim:
            raise DimensionMismatch(f"{len(self.labels)} labels for dimension {dim}")
        table = [[Vector.zero(dim) for _ in range(dim)] for _ in range(dim)]
        for (i, j), v in (brackets or {}).items():
            v = Vector(v)
            if len(v) != dim:
                raise DimensionMismatch(f"bracket value of length {len(v)} in dimension {dim}")
            if i == j:
                if not v.is_zero():
                    raise ValueError(f"[e{i}, e{i}] must vanish")
                continue
            table[i][j] = v
            table[j][i] = -v
        self._table = tuple(tuple(row) for row in table)

    def c(self, i, j):
        return self._table[i][j]

    def basis(self, i):
        return Vector.basis(self.dim, i)

    def index(self, label):
        return self.labels.index(label)

    def brackets(self):
        """Nonzero brackets ``{(i, j): [e_i, e_j]}`` with ``i < j``."""
        return {
            (i, j): self._table[i][j]
            for i in range(self.dim)
            for j in range(i + 1, self.dim)
            if not self._table[i][j].is_zero()
        }

    def bracket(self, x, y):
        return bracket(self, x, y)

    def __eq__(self, other):
        return (
            isinstance(other, LieAlgebra)
            and self.dim == other.dim
            and self._table == other._table
        )

    def __hash__(self):
        return hash((self.dim, self._table))

    def __repr__(self):
        return f"LieAlgebra(dim={self.dim}, brackets={len(self.brackets())})"


def bracket(L, x, y):
    """Bilinear extension of the structure constants."""
    if len(x) != L.dim or len(y) != L.dim:
        raise DimensionMismatch(f"vectors must have length {L.dim}")
    terms = []
    for i, xi in enumerate(x):
        if not xi:
            continue
        for j, yj in enumerate(y):
            if yj and i != j:
                s = xi * yj
                terms.append(L.c(i, j) * s)
    return _vsum(terms, L.dim)


def jacobi_check(L):
    """Check Jacobi on every basis triple ``i < j < k``.

    The cyclic sum is ``[X,[Y,Z]] + [Y,[Z,X]] + [Z,[X,Y]]``.
    """
    n = L.dim
    for i, j, k in combinations(range(n), 3):
        x, y, z = L.basis(i), L.basis(j), L.basis(k)
        s = bracket(L, x, bracket(L, y, z)) + bracket(L, y, bracket(L, z, x)) + bracket(L, z, bracket(L, x, y))
        if not s.is_zero():
            return JacobiResult(False, (i, j, k), s)
    return JacobiResult(True)


class KForm:
    """Alternating k-form stored by its values on sorted basis tuples.

    ``coeffs[(i1, ..., ik)]`` with ``i1 < ... < ik`` is the value of the form
    on ``(e_i1, ..., e_ik)``.  Zero values are never stored.
    """

    __slots__ = ("degree", "dim", "_coeffs")

    def __init__(self, degree, dim, coeffs=None):
        if not 0 <= degree <= dim:
            raise DegreeError(f"degree {degree} outside 0..{dim}")
        self.degree = degree
        self.dim = dim
        store = {}
        for idx, val in (coeffs or {}).items():
            idx = tuple(idx)
            if len(idx) != degree:
                raise DegreeError(f"multi-index {idx} for a {degree}-form")
            if any(not 0 <= i < dim for i in idx):
                raise DimensionMismatch(f"multi-index {idx} out of range for dimension {dim}")
            key, sign = sort_sign(idx)
            if sign == 0:
                continue
            val = Fraction(val) * sign
            store[key] = store.get(key, 0) + val
        self._coeffs = {k: v for k, v in store.items() if v}

    # -- constructors ---------------------------------------------------
    @classmethod
    def _raw(cls, degree, dim, coeffs):
        f = cls.__new__(cls)
        f.degree, f.dim = degree, dim
        f._coeffs = {k: v for k, v in coeffs.items() if v}
        return f

    @classmethod
    def zero(cls, degree, dim):
        return cls._raw(degree, dim, {})

    @classmethod
    def scalar(cls, value, dim):
        return cls._raw(0, dim, {(): Fraction(value)})

    @classmethod
    def dual(cls, dim, i):
        """The dual basis 1-form ``alpha^i`` with ``alpha^i(e_j) = delta_ij``."""
        return cls._raw(1, dim, {(i,): Fraction(1)})

    @classmethod
    def covector(cls, coeffs):
        coeffs = [Fraction(c) for c in coeffs]
        return cls._raw(1, len(coeffs), {(i,): c for i, c in enumerate(coeffs)})

    # -- access ---------------------------------------------------------
    @property
    def coeffs(self):
        return dict(self._coeffs)

    def items(self):
        return sorted(self._coeffs.items())

    def coeff(self, indices):
        key, sign = sort_sign(indices)
        if sign == 0:
            return Fraction(0)
        return sign * self._coeffs.get(key, Fraction(0))

    def is_zero(self):
        return not self._coeffs

    def value(self):
        """The number held by a 0-form."""
        if self.degree != 0:
            raise DegreeError("value() is only defined for 0-forms")
        return self._coeffs.get((), Fraction(0))

    def as_covector(self):
        if self.degree != 1:
            raise DegreeError("as_covector() is only defined for 1-forms")
        return Vector._raw(tuple(self._coeffs.get((i,), Fraction(0)) for i in range(self.dim)))

    def __call__(self, *vectors):
        if len(vectors) != self.degree:
            raise DegreeError(f"{self.degree}-form evaluated on {len(vectors)} vectors")
        for v in vectors:
            if len(v) != self.dim:
                raise DimensionMismatch(f"vector of length {len(v)} in dimension {self.dim}")
        if self.degree == 0:
            return self.value()
        total = Fraction(0)
        for idx, c in self._coeffs.items():
            minor = [[v[i] for i in idx] for v in vectors]
            total += c * linalg.det(minor)
        return total

    # -- arithmetic -----------------------------------------------------
    def _compatible(self, other):
        if not isinstance(other, KForm):
            raise TypeError("expected a KForm")
        if (self.degree, self.dim) != (other.degree, other.dim):
            raise DegreeError(
                f"cannot combine a {self.degree}-form on dim {self.dim} "
                f"with a {other.degree}-form on dim {other.dim}"
            )

    def __add__(self, other):
        self._compatible(other)
        out = dict(self._coeffs)
        for k, v in other._coeffs.items():
            out[k] = out.get(k, 0) + v
        return KForm._raw(self.degree, self.dim, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return KForm._raw(self.degree, self.dim, {k: -v for k, v in self._coeffs.items()})

    def __mul__(self, s):
        if isinstance(s, KForm):
            return NotImplemented
        s = Fraction(s)
        return KForm._raw(self.degree, self.dim, {k: v * s for k, v in self._coeffs.items()})

    __rmul__ = __mul__

    def __xor__(self, other):
        return wedge(self, other)

    def __eq__(self, other):
        if not isinstance(other, KForm):
            return NotImplemented
        return (self.degree, self.dim, self._coeffs) == (other.degree, other.dim, other._coeffs)

    def __hash__(self):
        return hash((self.degree, self.dim, frozenset(self._coeffs.items())))

    def __repr__(self):
        body = ", ".join(f"{k}: {v}" for k, v in self.items())
        return f"KForm(degree={self.degree}, dim={self.dim}, {{{body}}})"


def wedge(a, b):
    """``(a ^ b) = Alt(a (x) b)``; associative and graded-commutative."""
    if a.dim != b.dim:
        raise DimensionMismatch("forms live on different dimensions")
    p, q = a.degree, b.degree
    if p + q > a.dim:
        raise DegreeError(f"degree {p} + {q} exceeds dimension {a.dim}")
    factor = Fraction(factorial(p) * factorial(q), factorial(p + q))
    out = {}
    for j, cj in a._coeffs.items():
        for k, ck in b._coeffs.items():
            key, sign = sort_sign(j + k)
            if sign:
                out[key] = out.get(key, 0) + factor * sign * cj * ck
    return KForm._raw(p + q, a.dim, out)


def wedge_power(a, m):
    """``a ^ a ^ ... ^ a`` (m factors); the 0th power is the constant 1.

    Returns ``None`` when ``m * deg(a)`` exceeds the dimension, i.e. when the
    power vanishes for degree reasons alone.
    """
    result = KForm.scalar(1, a.dim)
    for _ in range(m):
        if result.degree + a.degree > a.dim:
            return None
        result = wedge(result, a)
    return result


def _d_alpha_monomials(L):
    """Structure equations in monomial form: ``d alpha^i = sum m[(j,k)] alpha^j ^ alpha^k``."""
    eqs = []
    for i in range(L.dim):
        terms = {}
        for (j, k), v in L.brackets().items():
            if v[i]:
                terms[(j, k)] = -v[i]
        eqs.append(terms)
    return eqs


def exterior_derivative(L, w):
    """Chevalley-Eilenberg differential of a left-invariant form.

    Works in the monomial basis ``alpha^I = alpha^i1 ^ ... ^ alpha^ik`` and
    applies the graded Leibniz rule to the structure equations.
    """
    if w.dim != L.dim:
        raise DimensionMismatch("form and algebra have different dimensions")
    k = w.degree
    if k == L.dim:
        raise DegreeError("the differential of a top-degree form has no target degree")
    eqs = _d_alpha_monomials(L)
    kfact = factorial(k)
    out = {}
    for idx, c in w._coeffs.items():
        m = c * kfact  # monomial coefficient, since alpha^I(e_I) = 1/k!
        for pos, i in enumerate(idx):
            s = -m if pos % 2 else m
            for (j, l), mc in eqs[i].items():
                new = idx[:pos] + (j, l) + idx[pos + 1:]
                key, sign = sort_sign(new)
                if sign:
                    out[key] = out.get(key, 0) + s * sign * mc
    scale = Fraction(1, factorial(k + 1))
    return KForm._raw(k + 1, L.dim, {key: v * scale for key, v in out.items()})


def contract(x, w):
    """Interior product in the first slot: ``(i_X w)(Y2..Yk) = w(X, Y2..Yk)``.

    With the alternation convention this satisfies the scaled Leibniz law
    ``(p+q) i_X(a ^ b) = p (i_X a) ^ b + (-1)^p q a ^ (i_X b)``.
    """
    if w.degree < 1:
        raise DegreeError("cannot contract a 0-form")
    if len(x) != w.dim:
        raise DimensionMismatch("vector and form have different dimensions")
    out = {}
    for idx, c in w._coeffs.items():
        for pos, i in enumerate(idx):
            if x[i]:
                rest = idx[:pos] + idx[pos + 1:]
                val = x[i] * c
                out[rest] = out.get(rest, 0) + (-val if pos % 2 else val)
    return KForm._raw(w.degree - 1, w.dim, out)


def restrict(w, basis):
    """Pull ``w`` back to the span of ``basis``, expressed in that basis."""
    basis = [Vector(v) for v in basis]
    if not linalg.is_independent(basis):
        raise DependentBasis("restriction basis is linearly dependent")
    m = len(basis)
    k = w.degree
    if k > m:
        raise DegreeError(f"cannot restrict a {k}-form to a {m}-dimensional subspace")
    out = {}
    for idx in combinations(range(m), k):
        val = w(*(basis[i] for i in idx))
        if val:
            out[idx] = val
    return KForm._raw(k, m, out)


def structure_constants_from_equations(equations, dim=None, labels=None):
    """Build a Lie algebra from the differentials of the dual basis.

    ``equations`` maps a basis index ``i`` to the 2-form ``d alpha^i``
    (indices not present have zero differential).  The bracket component is
    ``alpha^i([e_j, e_k]) = -2 d alpha^i(e_j, e_k)``, i.e. minus the
    monomial coefficient of ``alpha^j ^ alpha^k``.

    Raises :class:`InconsistentEquations` when ``d^2 != 0``; the Jacobi check
    is run as well and must agree.
    """
    if dim is None:
        dim = next(iter(equations.values())).dim if equations else len(labels or ())
    brackets = {}
    for i, form in equations.items():
        if form.degree != 2 or form.dim != dim:
            raise DegreeError(f"d alpha^{i} must be a 2-form on dimension {dim}")
        for (j, k), val in form._coeffs.items():
            v = brackets.setdefault((j, k), [Fraction(0)] * dim)
            v[i] = -2 * val
    L = LieAlgebra(dim, brackets, labels)
    failing = None
    for i in range(dim):
        dd = exterior_derivative(L, exterior_derivative(L, KForm.dual(dim, i)))
        if not dd.is_zero():
            failing = (i, dd)
            break
    jac = jacobi_check(L)
    if (failing is None) != jac.ok:
        raise AssertionError("d^2 = 0 and the Jacobi identity disagree")
    if failing is not None:
        i, dd = failing
        name = L.labels[i]
        raise InconsistentEquations(
            f"d(d alpha_{name}) = {dd!r} is nonzero", form_index=i, d_squared=dd
        )
    return L
