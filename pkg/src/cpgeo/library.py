"""Built-in example structures, stored as structure-file sources."""

from .structfile import build, parse

G6 = """\
NAME g6
ALGEBRA
  basis Y1 Y2 Y3 Y4 Y5 Y6
  dual a1 a2 a3 a4 a5 a6
EQUATIONS
  d a1 = a3^a5
  d a2 = a4^a6
  d a6 = a4^a5
PAIR
  alpha1 = a1
  alpha2 = a2
METRIC
  diag 1 1 1/2 1/2 1/2 1/2
PHI
  Y5 -> Y3
  Y6 -> Y4
SUBSPACE leaf(a, b)
  a*Y3 + b*Y6
  -a*Y5 + b*Y4
  a^2*Y1 + b^2*Y2
EXPECT
  fail pair.normality
"""

H6 = """\
NAME h6
ALGEBRA
  basis X1 X2 X3 Y1 Y2 Y3
  dual a1 a2 a3 b1 b2 b3
EQUATIONS
  d a3 = a1^a2
  d b3 = b1^b2
PAIR
  alpha1 = a3
  alpha2 = b3
METRIC
  diag 1/2 1/2 1 1/2 1/2 1
PHI
  X2 -> X1
  Y2 -> Y1
SUBSPACE leaf(a, b)
  a*X2 + b*Y1
  a*X1 - b*Y2
  a^2*X3 + b^2*Y3
"""

HEIS3XR = """\
NAME heis3xR
ALGEBRA
  basis E1 E2 E3 E4
  dual a1 a2 a3 a4
EQUATIONS
  d a3 = a1^a2
PAIR
  alpha1 = a3
  alpha2 = a4
METRIC
  diag 1/2 1/2 1 1
PHI
  E2 -> E1
"""

# Heisenberg group times SU(2), both factors Sasakian.
PRODUCTS = """\
NAME products
ALGEBRA
  basis X1 X2 X3 S1 S2 S3
  dual a1 a2 a3 s1 s2 s3
EQUATIONS
  d a3 = a1^a2
  d s1 = -s2^s3
  d s2 = -s3^s1
  d s3 = -s1^s2
PAIR
  alpha1 = a3
  alpha2 = s3
METRIC
  diag 1/2 1/2 1 1/2 1/2 1
PHI
  X2 -> X1
  S1 -> S2
"""

SOURCES = {"g6": G6, "h6": H6, "heis3xR": HEIS3XR, "products": PRODUCTS}

DESCRIPTIONS = {
    "g6": "six-dimensional nilpotent group, type (1,1), not normal",
    "h6": "product of two Heisenberg groups, type (1,1), normal",
    "heis3xR": "Heisenberg group times a line, type (1,0)",
    "products": "Heisenberg group times SU(2), type (1,1), normal",
}


def names():
    return list(SOURCES)


def source(name):
    try:
        return SOURCES[name]
    except KeyError:
        raise KeyError(f"unknown example {name!r}; choose from {', '.join(SOURCES)}") from None


def load(name):
    """Parsed structure file of a built-in example."""
    return parse(source(name))


def builtin_examples():
    """Mapping from example name to its built :class:`~cpgeo.structfile.Model`."""
    return {name: build(parse(text)) for name, text in SOURCES.items()}
