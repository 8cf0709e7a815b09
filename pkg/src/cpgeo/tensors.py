"""Matrix-backed endomorphisms and metrics acting on :class:`Vector`."""

from fractions import Fraction

from . import linalg
from .errors import DimensionMismatch
from .exterior import KForm, Vector


class Endomorphism:
    """Linear map stored as a matrix whose column ``j`` is the image of ``e_j``."""

    __slots__ = ("dim", "_m")

    def __init__(self, matrix):
        m = tuple(tuple(Fraction(x) for x in row) for row in matrix)
        if any(len(row) != len(m) for row in m):
            raise DimensionMismatch("endomorphism matrix must be square")
        self.dim = len(m)
        self._m = m

    @classmethod
    def from_images(cls, images):
        images = [Vector(v) for v in images]
        return cls(linalg.transpose(images))

    @classmethod
    def identity(cls, n):
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, n):
        return cls([[0] * n for _ in range(n)])

    @classmethod
    def outer(cls, form, v):
        """The rank-one map ``X -> form(X) v``."""
        a = form.as_covector()
        return cls([[vi * aj for aj in a] for vi in v])

    @property
    def matrix(self):
        return [list(row) for row in self._m]

    def image(self, j):
        return Vector._raw(tuple(row[j] for row in self._m))

    def images(self):
        return [self.image(j) for j in range(self.dim)]

    def __call__(self, v):
        if len(v) != self.dim:
            raise DimensionMismatch(f"vector of length {len(v)} for a {self.dim}x{self.dim} map")
        return Vector._raw(tuple(sum((a * x for a, x in zip(row, v)), Fraction(0)) for row in self._m))

    def __matmul__(self, other):
        return Endomorphism(linalg.matmul(self._m, other._m))

    def __add__(self, other):
        return Endomorphism([[a + b for a, b in zip(r, s)] for r, s in zip(self._m, other._m)])

    def __sub__(self, other):
        return Endomorphism([[a - b for a, b in zip(r, s)] for r, s in zip(self._m, other._m)])

    def __neg__(self):
        return Endomorphism([[-a for a in r] for r in self._m])

    def __mul__(self, s):
        s = Fraction(s)
        return Endomorphism([[a * s for a in r] for r in self._m])

    __rmul__ = __mul__

    def rank(self):
        return linalg.rank(self._m)

    def __eq__(self, other):
        return isinstance(other, Endomorphism) and self._m == other._m

    def __hash__(self):
        return hash(self._m)

    def __repr__(self):
        return f"Endomorphism({self.matrix})"


class Metric:
    """Symmetric bilinear form ``g(X, Y) = X^T G Y`` in the fixed basis."""

    __slots__ = ("dim", "_m")

    def __init__(self, matrix):
        m = tuple(tuple(Fraction(x) for x in row) for row in matrix)
        if any(len(row) != len(m) for row in m):
            raise DimensionMismatch("metric matrix must be square")
        self.dim = len(m)
        self._m = m

    @classmethod
    def diagonal(cls, entries):
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def matrix(self):
        return [list(row) for row in self._m]

    def __call__(self, x, y):
        total = Fraction(0)
        for i, xi in enumerate(x):
            if xi:
                row = self._m[i]
                total += xi * sum((a * b for a, b in zip(row, y) if a and b), Fraction(0))
        return total

    def norm2(self, x):
        return self(x, x)

    def is_symmetric(self):
        return all(self._m[i][j] == self._m[j][i] for i in range(self.dim) for j in range(i))

    def leading_minors(self):
        return linalg.leading_minors(self._m)

    def is_positive_definite(self):
        return self.is_symmetric() and all(m > 0 for m in self.leading_minors())

    def det(self):
        return linalg.det(self._m)

    def flat(self, x):
        """The 1-form ``g(x, .)``."""
        return KForm.covector(linalg.matvec(self._m, x))

    def gram(self, vectors):
        return [[self(a, b) for b in vectors] for a in vectors]

    def project(self, basis, v):
        """g-orthogonal projection of ``v`` onto ``span(basis)``."""
        if not basis:
            return Vector.zero(len(v))
        gram = self.gram(basis)
        rhs = [self(b, v) for b in basis]
        coeffs = linalg.solve(gram, rhs)
        out = Vector.zero(len(v))
        for c, b in zip(coeffs, basis):
            if c:
                out = out + b * c
        return out

    def __eq__(self, other):
        return isinstance(other, Metric) and self._m == other._m

    def __hash__(self):
        return hash(self._m)

    def __repr__(self):
        return f"Metric({self.matrix})"
