"""Verification reports: run every check in gate order and render the result."""

import json
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from .connection import (
    characteristic_form,
    check_connection_laws,
    check_reeb_geodesic,
    horizontality_lemmas_check,
    killing_check,
    levi_civita,
    rummler_check,
    second_fundamental_form,
)
from .contact_pair import normality_tensor_and_check, validate
from .errors import CpgeoError
from .exterior import KForm, Vector
from .results import CheckResult
from .structfile import build, parse, resolve_subspace
from .submanifold import (
    EVEN_TANGENT,
    LEANING,
    ODD_TANGENT_ORTHOGONAL,
    analyze_subspace,
    check_theta2_relation,
    classify,
    contact_metric_leaf_check,
    horizontal_part,
    horizontal_split_ratio,
    induced_contact_structure_check,
    induced_f_structure_check,
    minimality_audit,
)

REPORT_VERSION = 1

ANCHORS = {
    "algebra.jacobi": "[X,[Y,Z]] + [Y,[Z,X]] + [Z,[X,Y]] = 0",
    "pair.type": "a1^(da1)^h^a2^(da2)^k != 0, (da1)^(h+1) = (da2)^(k+1) = 0",
    "pair.reeb": "a_i(Z_j) = delta_ij, i_{Z_j} da_i = 0",
    "pair.subbundles": "TF_i, TG_i, H, V",
    "pair.phi_structure": "phi^2 = -Id + a1 (x) Z1 + a2 (x) Z2, phi Z_i = 0",
    "pair.decomposable": "phi(TF_i) in TF_i",
    "pair.metric": "g(X, phi Y) = (da1 + da2)(X, Y), g(X, Z_i) = a_i(X)",
    "pair.decomposable_orthogonal": "decomposable <=> TF1 orthogonal to TF2",
    "pair.normality": "N1 = [phi,phi] + 2 da1 (x) Z1 + 2 da2 (x) Z2 = 0",
    "pair.volume": "volume form coefficient^2 = det g",
    "pair.validation": "input data defines a contact pair candidate",
    "connection.laws": "torsion-free, nabla g = 0",
    "connection.reeb_geodesic": "nabla_{Z_i} Z_j = 0",
    "connection.horizontality": "nabla_X Z_i, nabla_{Z_i} X horizontal",
    "foliation.minimal": "trace II = 0",
    "foliation.rummler": "d omega relatively closed <=> minimal",
    "reeb.killing": "normal => Z1, Z2 Killing",
    "type_h0.product": "type (h,0), Z2 Killing => characteristic foliations totally geodesic",
    "subspace.analyze": "phi(TW) in TW, [W, W] in W",
    "subspace.classify": "even tangent / 1-dim vertical / odd tangent-orthogonal / leaning",
    "subspace.angles": "cos^2 theta2 = sin^2 theta1, |X2|^2 / |X1|^2 = tan theta1",
    "subspace.induced": "induced structure on W",
    "subspace.curvature": "normal => phi-invariant W minimal",
}


@dataclass
class Record:
    id: str
    anchor: str
    verdict: str  # "pass", "fail" or "skipped"
    reason: str = ""
    witness: object = None
    values: dict = field(default_factory=dict)
    expected_fail: bool = False


@dataclass
class Report:
    input: str
    records: list = field(default_factory=list)

    def add(self, rec):
        if any(r.id == rec.id for r in self.records):
            raise ValueError(f"duplicate check id {rec.id}")
        self.records.append(rec)
        return rec

    def get(self, check_id):
        return next((r for r in self.records if r.id == check_id), None)

    @property
    def unexpected_fails(self):
        return [r for r in self.records if r.verdict == "fail" and not r.expected_fail]

    @property
    def ok(self):
        return not self.unexpected_fails

    def summary(self):
        count = {"pass": 0, "fail": 0, "skipped": 0}
        for r in self.records:
            count[r.verdict] += 1
        count["expected_fail"] = sum(1 for r in self.records if r.verdict == "fail" and r.expected_fail)
        count["unexpected_fail"] = len(self.unexpected_fails)
        count["ok"] = self.ok
        return count

    def to_dict(self):
        checks = []
        for r in self.records:
            d = {"id": r.id, "anchor": r.anchor, "verdict": r.verdict}
            if r.reason:
                d["reason"] = r.reason
            if r.expected_fail:
                d["expected_fail"] = True
            if r.witness is not None:
                d["witness"] = render(r.witness)
            if r.values:
                d["values"] = {k: render(v) for k, v in r.values.items()}
            checks.append(d)
        return {"version": REPORT_VERSION, "tool_version": __version__, "input": self.input,
                "checks": checks, "summary": self.summary()}

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=False) + "\n"

    def to_text(self):
        lines = [f"report for {self.input}"]
        for r in self.records:
            tag = r.verdict.upper()
            if r.verdict == "fail" and r.expected_fail:
                tag = "XFAIL"
            line = f"  {tag:7} {r.id}"
            if r.reason:
                line += f"  ({r.reason})"
            if r.witness is not None:
                line += f"  witness={json.dumps(render(r.witness))}"
            lines.append(line)
        s = self.summary()
        lines.append(f"{s['pass']} passed, {s['fail']} failed ({s['expected_fail']} expected), {s['skipped']} skipped")
        return "\n".join(lines) + "\n"


def render(value):
    """JSON-ready form: Fractions become exact strings, containers become lists."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    if isinstance(value, KForm):
        return {"degree": value.degree,
                "coeffs": {",".join(str(i + 1) for i in k): render(v) for k, v in sorted(value.items())}}
    if isinstance(value, dict):
        return {str(k): render(v) for k, v in value.items()}
    if isinstance(value, (tuple, list, Vector)):
        return [render(v) for v in value]
    return str(value)


def _rec(check_id, result, anchor_key=None):
    anchor = ANCHORS[anchor_key or check_id]
    if result is None:
        return Record(check_id, anchor, "skipped", reason="not applicable")
    return Record(check_id, anchor, "pass" if result.passed else "fail",
                  reason=result.detail, witness=result.witness, values=dict(result.values))


def _label_pair(witness, labels):
    if isinstance(witness, tuple) and all(isinstance(i, int) for i in witness):
        return tuple(labels[i] for i in witness)
    return witness


def _guard(report, check_id, anchor_key, fn):
    """Run ``fn`` and record it; structured errors become fail records."""
    try:
        result = fn()
    except (CpgeoError, ArithmeticError, ValueError, AssertionError) as exc:
        result = CheckResult(False, detail=f"{type(exc).__name__}: {exc}")
    return report.add(_rec(check_id, result, anchor_key))


PAIR_CHECKS = ("algebra.jacobi", "pair.type", "pair.reeb", "pair.subbundles", "pair.phi_structure",
               "pair.decomposable", "pair.metric", "pair.decomposable_orthogonal", "pair.normality",
               "pair.volume")
STRUCTURE_CHECKS = ("connection.laws", "connection.reeb_geodesic", "connection.horizontality",
                    "foliation.TF1.minimal", "foliation.TF2.minimal", "foliation.TG1.minimal",
                    "foliation.TG2.minimal", "foliation.TG1.rummler", "foliation.TG2.rummler",
                    "reeb.killing", "type_h0.product")
SUBSPACE_CHECKS = ("analyze", "classify", "angles", "induced", "curvature")


def run_verify(source, subspaces=(), expect_fail=(), input_name=None):
    """Build the structure described by ``source`` and run every check.

    ``source`` is a :class:`~cpgeo.structfile.StructureFile`, a path or
    file text.  Parse errors propagate; everything after parsing is recorded.
    """
    sf = source if hasattr(source, "basis") else parse(source)
    model = build(sf)
    name = input_name or sf.name or "<input>"
    report = Report(name)
    expected = set(sf.expect_fail) | set(expect_fail)
    labels = sf.basis

    try:
        validation = validate(model.algebra, model.alpha1, model.alpha2, model.phi, model.metric)
    except (CpgeoError, ArithmeticError, ValueError) as exc:
        report.add(Record("pair.validation", ANCHORS["pair.validation"], "fail",
                          reason=f"{type(exc).__name__}: {exc}"))
        return report
    done = set()
    for check_id, result in validation.checks:
        rec = _rec(check_id, result)
        if check_id == "pair.normality":
            rec.witness = _label_pair(result.witness, labels)
        report.add(rec)
        done.add(check_id)
    cps = validation.structure
    stopped = None if cps is not None else validation.checks[-1][0]
    for check_id in PAIR_CHECKS:
        if check_id not in done:
            report.add(Record(check_id, ANCHORS[check_id], "skipped", reason=f"blocked by {stopped}"))

    sub_ids = [f"subspace[{spec}].{c}" for spec in subspaces for c in SUBSPACE_CHECKS]
    if cps is None:
        for check_id in STRUCTURE_CHECKS:
            report.add(Record(check_id, ANCHORS[_anchor_key(check_id)], "skipped", reason=f"blocked by {stopped}"))
        for check_id in sub_ids:
            report.add(Record(check_id, ANCHORS[_anchor_key(check_id)], "skipped", reason=f"blocked by {stopped}"))
    else:
        _structure_checks(report, model, cps)
        normal = normality_tensor_and_check(cps).is_normal
        conn = levi_civita(model.algebra, model.metric)
        for spec in subspaces:
            _subspace_checks(report, model, cps, conn, spec, normal)

    for rec in report.records:
        if rec.id in expected and rec.verdict == "fail":
            rec.expected_fail = True
    return report


def _anchor_key(check_id):
    if check_id.startswith("foliation."):
        return "foliation." + check_id.rsplit(".", 1)[1]
    if check_id.startswith("subspace["):
        return "subspace." + check_id.rsplit(".", 1)[1]
    return check_id


def _structure_checks(report, model, cps):
    L, g = model.algebra, model.metric
    conn = levi_civita(L, g)
    report.add(_rec("connection.laws", check_connection_laws(conn)))
    report.add(_rec("connection.reeb_geodesic", check_reeb_geodesic(cps, conn)))
    report.add(_rec("connection.horizontality", horizontality_lemmas_check(cps, conn)))

    curv = {}
    for role in ("TF1", "TF2", "TG1", "TG2"):
        check_id = f"foliation.{role}.minimal"

        def run(role=role):
            cd = second_fundamental_form(conn, cps.subbundles[role].basis)
            curv[role] = cd
            return CheckResult(cd.minimal, values={"totally_geodesic": cd.totally_geodesic,
                                                   "mean_curvature": cd.mean_curvature})
        _guard(report, check_id, "foliation.minimal", run)

    for role in ("TG1", "TG2"):
        def run(role=role):
            rc = rummler_check(L, cps.subbundles[role], characteristic_form(cps, role))
            minimal = curv[role].minimal if role in curv else None
            values = {"rummler_closed": rc.passed, "mean_curvature_zero": minimal}
            values.update(rc.values)
            return CheckResult(rc.passed == minimal, values=values)
        _guard(report, f"foliation.{role}.rummler", "foliation.rummler", run)

    killing = [killing_check(conn, z).passed for z in cps.reeb]
    normal = report.get("pair.normality").verdict == "pass"
    values = {"Z1_killing": killing[0], "Z2_killing": killing[1], "normal": normal}
    if normal:
        report.add(Record("reeb.killing", ANCHORS["reeb.killing"], "pass" if all(killing) else "fail",
                          values=values))
    else:
        report.add(Record("reeb.killing", ANCHORS["reeb.killing"], "skipped", reason="pair is not normal",
                          values=values))

    h, k = cps.type_pair
    if k == 0 and killing[1]:
        tg = {r: curv[r].totally_geodesic for r in ("TF1", "TF2") if r in curv}
        ok = len(tg) == 2 and all(tg.values())
        report.add(Record("type_h0.product", ANCHORS["type_h0.product"], "pass" if ok else "fail",
                          values={f"{r}_totally_geodesic": v for r, v in tg.items()}))
    else:
        reason = "type is not (h,0)" if k else "Z2 is not Killing"
        report.add(Record("type_h0.product", ANCHORS["type_h0.product"], "skipped", reason=reason))


def _subspace_checks(report, model, cps, conn, spec, normal):
    prefix = f"subspace[{spec}]"
    ids = {c: f"{prefix}.{c}" for c in SUBSPACE_CHECKS}

    def skip_rest(start, reason):
        for c in SUBSPACE_CHECKS[SUBSPACE_CHECKS.index(start):]:
            report.add(Record(ids[c], ANCHORS[f"subspace.{c}"], "skipped", reason=reason))

    try:
        basis = resolve_subspace(model, spec, cps)
        inv = analyze_subspace(cps, basis, conn, require_invariant=False)
    except (CpgeoError, ValueError, AssertionError) as exc:
        report.add(Record(ids["analyze"], ANCHORS["subspace.analyze"], "fail", reason=f"{type(exc).__name__}: {exc}"))
        skip_rest("classify", "subspace could not be analysed")
        return
    ok = inv.phi_invariant and inv.involutive
    report.add(Record(ids["analyze"], ANCHORS["subspace.analyze"], "pass" if ok else "fail",
                      witness=inv.witness,
                      values={"dim": inv.dim, "phi_invariant": inv.phi_invariant, "involutive": inv.involutive}))
    if not inv.phi_invariant:
        skip_rest("classify", "subspace is not phi-invariant")
        return

    try:
        cls = classify(inv)
    except (CpgeoError, AssertionError) as exc:
        report.add(Record(ids["classify"], ANCHORS["subspace.classify"], "fail", reason=f"{type(exc).__name__}: {exc}"))
        skip_rest("angles", "classification failed")
        return
    values = {"case": cls.case}
    if cls.tangent_index is not None:
        values["tangent_reeb"] = f"Z{cls.tangent_index}"
    if cls.certificate is not None:
        c = cls.certificate
        values.update({"cos2_theta1": c.cos2, "sin2_theta1": c.sin2, "tan_theta1": c.tan})
    report.add(Record(ids["classify"], ANCHORS["subspace.classify"], "pass", values=values))

    if cls.case == LEANING:
        def angles():
            rel = check_theta2_relation(inv)
            hor = horizontal_part(inv)
            samples = hor + ([hor[0] + hor[1]] if len(hor) > 1 else [])
            splits = [horizontal_split_ratio(cps, inv, x) for x in samples]
            values = dict(rel.values)
            values["split_ratio_samples"] = len(splits)
            values["split_ratio_ok"] = all(s.passed for s in splits)
            return CheckResult(rel.passed and all(s.passed for s in splits), values=values)
        _guard(report, ids["angles"], "subspace.angles", angles)
    else:
        report.add(Record(ids["angles"], ANCHORS["subspace.angles"], "skipped", reason=f"case is {cls.case}"))

    def induced():
        if cls.case == LEANING:
            rep = induced_contact_structure_check(cps, inv, normal)
            values = {k: (None if r is None else r.passed) for k, r in rep.checks.items()}
            values["norm2_Z1T"] = rep.values["norm2_Z1T"]
            return CheckResult(rep.passed, values=values)
        if cls.case == ODD_TANGENT_ORTHOGONAL:
            return contact_metric_leaf_check(cps, inv)
        if cls.case == EVEN_TANGENT:
            return induced_f_structure_check(cps, inv, normal)
        return None

    if cls.case in (LEANING, ODD_TANGENT_ORTHOGONAL, EVEN_TANGENT):
        _guard(report, ids["induced"], "subspace.induced", induced)
    else:
        report.add(Record(ids["induced"], ANCHORS["subspace.induced"], "skipped", reason=f"case is {cls.case}"))

    if inv.involutive:
        _guard(report, ids["curvature"], "subspace.curvature", lambda: minimality_audit(cps, conn, inv, normal))
    else:
        report.add(Record(ids["curvature"], ANCHORS["subspace.curvature"], "skipped", reason="subspace is not involutive"))
