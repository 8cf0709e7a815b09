"""Line-oriented structure files.

A file is a sequence of sections, each opened by a header line in upper
case; ``#`` starts a comment.  Example::

    NAME g6
    ALGEBRA
      basis Y1 Y2 Y3 Y4 Y5 Y6
      dual  a1 a2 a3 a4 a5 a6
    EQUATIONS
      d a1 = a3^a5
    PAIR
      alpha1 = a1
      alpha2 = a2
    METRIC
      diag 1 1 1/2 1/2 1/2 1/2
    PHI
      Y5 -> Y3
    SUBSPACE leaf(a, b)
      a*Y3 + b*Y6
    EXPECT
      fail pair.normality

``BRACKETS`` (lines ``[Y3, Y5] = -Y1``) may replace ``EQUATIONS``.  In
expressions ``^`` is the wedge product between forms and a power between
numbers; it binds tighter than ``*`` and ``/``.
"""

import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .errors import CpgeoError, DimensionMismatch, ParseError
from .exterior import KForm, LieAlgebra, Vector, structure_constants_from_equations, wedge
from .tensors import Endomorphism, Metric

SECTIONS = ("NAME", "ALGEBRA", "EQUATIONS", "BRACKETS", "PAIR", "METRIC", "PHI", "SUBSPACE", "EXPECT")
DERIVED_SUBSPACES = ("TF1", "TF2", "TG1", "TG2", "H", "V", "FULL")

# -- expressions -----------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+\.\d*|\.\d+)|(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def _tokenize(text, line=None, col0=0):
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        col = col0 + m.start() + (len(m.group(0)) - len(m.group(0).lstrip())) + 1
        if m.group(1):
            raise ParseError(f"non-rational literal {m.group(1)!r}", line, col)
        if m.group(2):
            tokens.append(("num", int(m.group(2)), col))
        elif m.group(3):
            tokens.append(("name", m.group(3), col))
        else:
            tokens.append(("op", m.group(4), col))
        pos = m.end()
    return tokens


class _ExprParser:
    def __init__(self, text, env, line=None, col0=0):
        self.tokens = _tokenize(text, line, col0)
        self.env = env
        self.line = line
        self.i = 0
        self.end_col = col0 + len(text) + 1

    def error(self, msg, tok=None):
        col = tok[2] if tok else self.end_col
        raise ParseError(msg, self.line, col)

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self, op=None):
        tok = self.peek()
        if tok is None:
            self.error("unexpected end of expression")
        if op is not None and tok != ("op", op, tok[2]):
            self.error(f"expected {op!r}", tok)
        self.i += 1
        return tok

    def parse(self):
        if not self.tokens:
            self.error("empty expression")
        value = self.expr()
        if self.peek() is not None:
            self.error("unexpected token", self.peek())
        return value

    def expr(self):
        value = self.term()
        while self.peek() and self.peek()[0] == "op" and self.peek()[1] in "+-":
            tok = self.take()
            rhs = self.term()
            try:
                value = value + rhs if tok[1] == "+" else value - rhs
            except (TypeError, CpgeoError) as exc:
                self.error(f"cannot combine operands: {exc}", tok)
        return value

    def term(self):
        value = self.power()
        while self.peek() and self.peek()[0] == "op" and self.peek()[1] in "*/":
            tok = self.take()
            rhs = self.power()
            try:
                if tok[1] == "*":
                    value = value * rhs
                else:
                    if not isinstance(rhs, Fraction):
                        self.error("can only divide by a number", tok)
                    if rhs == 0:
                        self.error("division by zero", tok)
                    value = value / rhs
            except TypeError as exc:
                self.error(f"cannot multiply operands: {exc}", tok)
        return value

    def power(self):
        value = self.unary()
        while self.peek() and self.peek()[0] == "op" and self.peek()[1] == "^":
            tok = self.take()
            rhs = self.unary()
            if isinstance(value, KForm) and isinstance(rhs, KForm):
                try:
                    value = wedge(value, rhs)
                except CpgeoError as exc:
                    self.error(str(exc), tok)
            elif isinstance(value, Fraction) and isinstance(rhs, Fraction) and rhs.denominator == 1:
                if value == 0 and rhs < 0:
                    self.error("division by zero", tok)
                value = value ** int(rhs)
            else:
                self.error("'^' needs two forms (wedge) or a number and an integer (power)", tok)
        return value

    def unary(self):
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] in "+-":
            self.take()
            v = self.unary()
            return -v if tok[1] == "-" else v
        return self.atom()

    def atom(self):
        tok = self.take()
        if tok[0] == "num":
            return Fraction(tok[1])
        if tok[0] == "name":
            if tok[1] not in self.env:
                self.error(f"unknown name {tok[1]!r}", tok)
            return self.env[tok[1]]
        if tok[1] == "(":
            v = self.expr()
            self.take(")")
            return v
        if tok[1] == "[":
            # explicit coefficient list
            items = [self.expr()]
            while self.peek() and self.peek()[:2] == ("op", ","):
                self.take(",")
                items.append(self.expr())
            self.take("]")
            if not all(isinstance(x, Fraction) for x in items):
                self.error("coefficient lists hold numbers only", tok)
            return Vector(items)
        self.error(f"unexpected {tok[1]!r}", tok)


def evaluate(text, env, line=None, col0=0):
    """Evaluate an arithmetic expression over Fractions, Vectors and KForms."""
    return _ExprParser(text, env, line, col0).parse()


def parse_rational(text, line=None, col=None):
    t = text.strip()
    m = re.fullmatch(r"([+-]?\d+)(?:/(\d+))?", t)
    if not m:
        raise ParseError(f"non-rational literal {t!r}", line, col)
    if m.group(2) is not None and int(m.group(2)) == 0:
        raise ParseError("zero denominator", line, col)
    return Fraction(int(m.group(1)), int(m.group(2) or 1))


def _fmt(q):
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _norm(text):
    return " ".join(text.split())


# -- file model ------------------------------------------------------------

@dataclass
class SubspaceDef:
    name: str
    params: tuple = ()
    vectors: tuple = ()


@dataclass
class StructureFile:
    name: str = ""
    basis: tuple = ()
    dual: tuple = ()
    equations: tuple = ()  # ((form label, rhs text), ...)
    brackets: tuple = ()  # ((x, y, rhs text), ...)
    alpha1: str = ""
    alpha2: str = ""
    metric: tuple = ()  # ("diag", (q, ...)) or ("rows", ((q, ...), ...))
    phi: tuple = ()  # ("generators", ((v, w), ...)) or ("rows", ((q, ...), ...))
    subspaces: tuple = ()
    expect_fail: tuple = ()

    @property
    def dim(self):
        return len(self.basis)


_HEADER = re.compile(r"^(NAME|ALGEBRA|EQUATIONS|BRACKETS|PAIR|METRIC|PHI|SUBSPACE|EXPECT)\b(.*)$")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")


def parse(source):
    """Parse a structure file from a path or from its text."""
    if isinstance(source, Path) or (isinstance(source, str) and "\n" not in source and Path(source).is_file()):
        text = Path(source).read_text()
    else:
        text = source
    sections = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        m = _HEADER.match(line)
        if m and not raw[:1].isspace():
            sections.append((m.group(1), m.group(2).strip(), lineno, []))
        else:
            if not sections:
                raise ParseError("content before the first section header", lineno, 1)
            col = len(line) - len(line.lstrip()) + 1
            sections[-1][3].append((lineno, col, line.strip()))
    if not sections:
        raise ParseError("empty structure file", 1, 1)

    sf = {"subspaces": [], "expect_fail": [], "equations": [], "brackets": []}
    seen = set()
    for head, arg, lineno, body in sections:
        if head in seen and head != "SUBSPACE":
            raise ParseError(f"duplicate section {head}", lineno, 1)
        seen.add(head)
        if head == "NAME":
            if not arg or body:
                raise ParseError("NAME takes a single value on its header line", lineno, 1)
            sf["name"] = arg
        elif head == "ALGEBRA":
            for ln, col, content in body:
                key, _, rest = content.partition(" ")
                labels = tuple(rest.split())
                if key not in ("basis", "dual") or not labels:
                    raise ParseError("expected 'basis <labels>' or 'dual <labels>'", ln, col)
                for lab in labels:
                    if not _IDENT.match(lab):
                        raise ParseError(f"invalid label {lab!r}", ln, col)
                sf[key] = labels
        elif head == "EQUATIONS":
            for ln, col, content in body:
                m = re.fullmatch(r"d\s+([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.+)", content)
                if not m:
                    raise ParseError("expected 'd <form> = <2-form expression>'", ln, col)
                sf["equations"].append((m.group(1), _norm(m.group(2)), ln, col + m.start(2)))
        elif head == "BRACKETS":
            for ln, col, content in body:
                m = re.fullmatch(r"\[\s*(\w+)\s*,\s*(\w+)\s*\]\s*=\s*(.+)", content)
                if not m:
                    raise ParseError("expected '[X, Y] = <vector expression>'", ln, col)
                sf["brackets"].append((m.group(1), m.group(2), _norm(m.group(3)), ln, col + m.start(3)))
        elif head == "PAIR":
            for ln, col, content in body:
                m = re.fullmatch(r"(alpha1|alpha2)\s*=\s*(.+)", content)
                if not m:
                    raise ParseError("expected 'alpha1 = ...' or 'alpha2 = ...'", ln, col)
                sf[m.group(1)] = (_norm(m.group(2)), ln, col + m.start(2))
        elif head == "METRIC":
            sf["metric"] = _parse_matrix_section(body, "METRIC", lineno, allow_diag=True)
        elif head == "PHI":
            if body and body[0][2].startswith("row"):
                sf["phi"] = _parse_matrix_section(body, "PHI", lineno, allow_diag=False)
            else:
                gens = []
                for ln, col, content in body:
                    lhs, sep, rhs = content.partition("->")
                    if not sep or not lhs.strip() or not rhs.strip():
                        raise ParseError("expected '<vector> -> <vector>'", ln, col)
                    rcol = col + len(lhs) + 2 + (len(rhs) - len(rhs.lstrip()))
                    gens.append((_norm(lhs), _norm(rhs), ln, col, rcol))
                sf["phi"] = ("generators", gens)
        elif head == "SUBSPACE":
            m = re.fullmatch(r"([A-Za-z_][A-Za-z0-9_]*)\s*(?:\(\s*([^)]*)\))?", arg)
            if not m:
                raise ParseError("expected 'SUBSPACE name' or 'SUBSPACE name(a, b)'", lineno, 10)
            params = tuple(p.strip() for p in m.group(2).split(",")) if m.group(2) else ()
            if any(not _IDENT.match(p) for p in params):
                raise ParseError("subspace parameters must be identifiers", lineno, 10)
            if not body:
                raise ParseError("SUBSPACE needs at least one vector", lineno, 1)
            sf["subspaces"].append(SubspaceDef(m.group(1), params, tuple((_norm(c), ln, col) for ln, col, c in body)))
        elif head == "EXPECT":
            for ln, col, content in body:
                parts = content.split()
                if len(parts) < 2 or parts[0] != "fail":
                    raise ParseError("expected 'fail <check id> ...'", ln, col)
                sf["expect_fail"].extend(parts[1:])

    result = _finish(sf, sections)
    build(result)  # validates names, dimensions and expressions
    return result


def _parse_matrix_section(body, head, lineno, allow_diag):
    if not body:
        raise ParseError(f"{head} section is empty", lineno, 1)
    first = body[0][2].split()
    if allow_diag and first[0] == "diag":
        if len(body) != 1:
            raise ParseError("'diag' must be the only line of the section", body[1][0], body[1][1])
        ln, col, content = body[0]
        return ("diag", _rationals(content, ln, col), ln)
    rows = []
    for ln, col, content in body:
        parts = content.split()
        if parts[0] != "row":
            raise ParseError("expected 'row <entries>'", ln, col)
        rows.append(_rationals(content, ln, col))
    return ("rows", tuple(rows), body[0][0])


def _rationals(content, ln, col):
    """Numbers after the leading keyword, with per-token error columns."""
    tokens = list(re.finditer(r"\S+", content))[1:]
    return tuple(parse_rational(m.group(0), ln, col + m.start()) for m in tokens)


def _finish(sf, sections):
    heads = {s[0] for s in sections}
    if "ALGEBRA" not in heads or "basis" not in sf:
        raise ParseError("missing ALGEBRA section with a 'basis' line", 1, 1)
    has_eq, has_br = "EQUATIONS" in heads, "BRACKETS" in heads
    if has_eq == has_br:
        raise ParseError("exactly one of EQUATIONS and BRACKETS is required", 1, 1)
    for key in ("alpha1", "alpha2"):
        if key not in sf:
            raise ParseError(f"PAIR section must define {key}", 1, 1)
    if "metric" not in sf:
        raise ParseError("missing METRIC section", 1, 1)
    if "phi" not in sf:
        raise ParseError("missing PHI section", 1, 1)
    basis = sf["basis"]
    dual = sf.get("dual") or tuple(f"a{i + 1}" for i in range(len(basis)))
    if len(dual) != len(basis):
        raise ParseError(f"{len(dual)} dual labels for {len(basis)} basis vectors", 1, 1)
    out = StructureFile(
        name=sf.get("name", ""),
        basis=basis,
        dual=dual,
        equations=tuple(sf["equations"]),
        brackets=tuple(sf["brackets"]),
        alpha1=sf["alpha1"],
        alpha2=sf["alpha2"],
        metric=sf["metric"],
        phi=sf["phi"],
        subspaces=tuple(sf["subspaces"]),
        expect_fail=tuple(sf["expect_fail"]),
    )
    return out


# Positions are kept alongside expressions for error messages but are not
# part of a file's identity, so equality/round-trips compare ``canonical``.

def canonical(sf):
    """Position-free tuple describing the file content."""

    def strip(seq, n):
        return tuple(tuple(item[:n]) for item in seq)

    phi = sf.phi
    if phi[0] == "generators":
        phi = ("generators", strip(phi[1], 2))
    else:
        phi = phi[:2]
    return (
        sf.name,
        sf.basis,
        sf.dual,
        strip(sf.equations, 2),
        strip(sf.brackets, 3),
        sf.alpha1[0],
        sf.alpha2[0],
        sf.metric[:2],
        phi,
        tuple((s.name, s.params, tuple(v[0] for v in s.vectors)) for s in sf.subspaces),
        tuple(sf.expect_fail),
    )


def serialize(sf):
    lines = []
    if sf.name:
        lines.append(f"NAME {sf.name}")
    lines.append("ALGEBRA")
    lines.append("  basis " + " ".join(sf.basis))
    lines.append("  dual " + " ".join(sf.dual))
    if sf.equations:
        lines.append("EQUATIONS")
        lines += [f"  d {lab} = {rhs}" for lab, rhs, *_ in sf.equations]
    else:
        lines.append("BRACKETS")
        lines += [f"  [{x}, {y}] = {rhs}" for x, y, rhs, *_ in sf.brackets]
    lines.append("PAIR")
    lines.append(f"  alpha1 = {sf.alpha1[0]}")
    lines.append(f"  alpha2 = {sf.alpha2[0]}")
    lines.append("METRIC")
    kind, data = sf.metric[:2]
    if kind == "diag":
        lines.append("  diag " + " ".join(_fmt(q) for q in data))
    else:
        lines += ["  row " + " ".join(_fmt(q) for q in row) for row in data]
    lines.append("PHI")
    if sf.phi[0] == "generators":
        lines += [f"  {v} -> {w}" for v, w, *_ in sf.phi[1]]
    else:
        lines += ["  row " + " ".join(_fmt(q) for q in row) for row in sf.phi[1]]
    for s in sf.subspaces:
        head = f"SUBSPACE {s.name}" + (f"({', '.join(s.params)})" if s.params else "")
        lines.append(head)
        lines += [f"  {v[0]}" for v in s.vectors]
    if sf.expect_fail:
        lines.append("EXPECT")
        lines.append("  fail " + " ".join(sf.expect_fail))
    return "\n".join(lines) + "\n"


# -- building the mathematical objects ---------------------------------------

@dataclass
class Model:
    """Objects built from a structure file."""

    source: StructureFile
    algebra: LieAlgebra
    alpha1: KForm
    alpha2: KForm
    phi: object  # Endomorphism or list of generator pairs
    metric: Metric
    vector_env: dict = field(default_factory=dict)

    def subspace(self, name, values=None):
        """Basis of a file-defined subspace, substituting parameter values."""
        values = values or {}
        for s in self.source.subspaces:
            if s.name == name:
                missing = [p for p in s.params if p not in values]
                if missing:
                    raise ParseError(f"subspace {name} needs values for {', '.join(missing)}")
                extra = [p for p in values if p not in s.params]
                if extra:
                    raise ParseError(f"subspace {name} has no parameter {', '.join(extra)}")
                env = dict(self.vector_env)
                env.update({p: Fraction(values[p]) for p in s.params})
                return [_as_vector(evaluate(v[0], env, v[1], v[2] - 1), self.algebra.dim, v[1]) for v in s.vectors]
        raise KeyError(name)


def _as_vector(value, n, line=None):
    if not isinstance(value, Vector):
        raise ParseError("expression does not evaluate to a vector", line)
    if len(value) != n:
        where = f"line {line}: " if line is not None else ""
        raise DimensionMismatch(f"{where}vector of length {len(value)} in dimension {n}")
    return value


def build(sf):
    n = sf.dim
    if n == 0:
        raise ParseError("algebra must have positive dimension")
    if len(set(sf.basis) | set(sf.dual)) != 2 * n:
        raise ParseError("basis and dual labels must be distinct")
    vec_env = {lab: Vector.basis(n, i) for i, lab in enumerate(sf.basis)}
    form_env = {lab: KForm.dual(n, i) for i, lab in enumerate(sf.dual)}
    if sf.equations:
        eqs = {}
        for lab, rhs, ln, col in sf.equations:
            if lab not in form_env:
                raise ParseError(f"unknown dual form {lab!r}", ln)
            val = evaluate(rhs, form_env, ln, col - 1)
            if not isinstance(val, KForm) or val.degree != 2:
                raise ParseError(f"d {lab} must be a 2-form", ln, col)
            i = sf.dual.index(lab)
            if i in eqs:
                raise ParseError(f"duplicate equation for d {lab}", ln, col)
            eqs[i] = val
        L = structure_constants_from_equations(eqs, n, sf.basis)
    else:
        brackets = {}
        for x, y, rhs, ln, col in sf.brackets:
            for lab in (x, y):
                if lab not in vec_env:
                    raise ParseError(f"unknown basis vector {lab!r}", ln)
            val = _as_vector(evaluate(rhs, vec_env, ln, col - 1), n, ln)
            i, j = sf.basis.index(x), sf.basis.index(y)
            if i > j:
                i, j, val = j, i, -val
            brackets[(i, j)] = val
        L = LieAlgebra(n, brackets, sf.basis)
    alphas = []
    for text, ln, col in (sf.alpha1, sf.alpha2):
        val = evaluate(text, form_env, ln, col - 1)
        if isinstance(val, Vector):
            if len(val) != n:
                raise DimensionMismatch(f"line {ln}: coefficient list of length {len(val)} in dimension {n}")
            val = KForm.covector(val)
        if not isinstance(val, KForm) or val.degree != 1:
            raise ParseError("alpha must be a 1-form", ln, col)
        alphas.append(val)
    kind, data, ln = sf.metric
    if kind == "diag":
        if len(data) != n:
            raise DimensionMismatch(f"line {ln}: diag has {len(data)} entries for dimension {n}")
        g = Metric.diagonal(data)
    else:
        if len(data) != n or any(len(r) != n for r in data):
            raise DimensionMismatch(f"line {ln}: metric must be {n}x{n}")
        g = Metric(data)
    if sf.phi[0] == "generators":
        phi = []
        for v, w, pln, lcol, rcol in sf.phi[1]:
            phi.append((_as_vector(evaluate(v, vec_env, pln, lcol - 1), n, pln),
                        _as_vector(evaluate(w, vec_env, pln, rcol - 1), n, pln)))
    else:
        data, pln = sf.phi[1], sf.phi[2]
        if len(data) != n or any(len(r) != n for r in data):
            raise DimensionMismatch(f"line {pln}: phi must be {n}x{n}")
        phi = Endomorphism(data)
    model = Model(sf, L, alphas[0], alphas[1], phi, g, vec_env)
    for s in sf.subspaces:
        # evaluate once with generic nonzero values to catch errors early
        model.subspace(s.name, {p: 1 for p in s.params})
    return model


_SPEC = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*(?:\((.*)\))?\s*$")


def parse_subspace_spec(spec):
    """Split ``name``, ``name(a=1, b=2)`` or ``span(v1, v2)`` into parts."""
    m = _SPEC.match(spec)
    if not m:
        raise ParseError(f"bad subspace spec {spec!r}")
    name, args = m.group(1), m.group(2)
    if name == "span":
        if not args or not args.strip():
            raise ParseError("span() needs at least one vector")
        return name, [a.strip() for a in args.split(",")]
    values = {}
    if args:
        for part in args.split(","):
            key, sep, val = part.partition("=")
            if not sep or not _IDENT.match(key.strip()):
                raise ParseError(f"bad parameter {part.strip()!r} in {spec!r}")
            values[key.strip()] = parse_rational(val)
    return name, values


def resolve_subspace(model, spec, cps=None):
    """Basis for a CLI subspace spec; derived subbundles need ``cps``."""
    name, args = parse_subspace_spec(spec)
    n = model.algebra.dim
    if name == "span":
        return [_as_vector(evaluate(a, model.vector_env), n) for a in args]
    if name in DERIVED_SUBSPACES and not any(s.name == name for s in model.source.subspaces):
        if name == "FULL":
            return [model.algebra.basis(i) for i in range(n)]
        if cps is None:
            raise ParseError(f"subspace {name} needs a validated contact pair")
        return list(cps.subbundles[name].basis)
    try:
        return model.subspace(name, args)
    except KeyError:
        raise ParseError(f"unknown subspace {name!r}") from None
