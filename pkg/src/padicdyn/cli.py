"""Command-line front end.

Experiment spec files are sectioned ``key = value`` text::

    # comment
    [field]
    prime = 5
    precision = 64

    [operator]
    kind = lambda-mu          # lambda-mu | bilateral-shift | unilateral-shift | forward-shift | finite-dim
    lambda = 5/1
    mu = 1/5
    domain = N

    [params]
    property = hypercyclic
    vector = "1:1/1 4:5/1"

Values are integers, rationals ``num/den``, bracketed lists ``[a, b]``,
bare words, or double-quoted strings.  The full grammar is in
``docs/spec-format.md``.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from sympy import isprime

from . import dynamics, ops
from .criteria import Property, decide, decide_finite_dim
from .errors import NotFound, PadicDynError, ParseError, Unsupported, ValidationError
from .field import PadicField
from .seq import Ball, FinVector, IndexDomain, parse_vector

COMMANDS = ("decide", "orbit", "witness", "verify-criterion", "obstruct", "selftest")
KINDS = ("lambda-mu", "bilateral-shift", "unilateral-shift", "forward-shift", "finite-dim")
WEIGHT_KEYS = ("prefix", "period", "backward_prefix", "backward_period")

SCHEMA: dict[str, dict[str, str]] = {
    "field": {"prime": "int", "precision": "int"},
    "operator": {
        "kind": "word", "lambda": "rational", "mu": "rational", "domain": "word",
        "det": "rational", "dim": "int",
        **{k: "rational-list" for k in WEIGHT_KEYS},
        **{k + "_v": "int-list" for k in WEIGHT_KEYS},
    },
    "params": {
        "command": "word", "property": "word", "vector": "string",
        "u_center": "string", "u_radius": "int", "u_closed": "bool",
        "v_center": "string", "v_radius": "int", "v_closed": "bool",
        "n_max": "int", "depth": "int", "basis_bound": "int", "max_threshold": "int",
        "seed": "int", "k_max": "int", "samples": "int",
    },
}

_RATIONAL = re.compile(r"^[+-]?\d+(/[+-]?\d+)?$")
_INT = re.compile(r"^[+-]?\d+$")
_WORD = re.compile(r"^[A-Za-z][A-Za-z0-9_-]*$")


@dataclass
class ExperimentSpec:
    prime: int
    precision: int = 64
    operator: dict = dc_field(default_factory=dict)
    params: dict = dc_field(default_factory=dict)
    lines: dict = dc_field(default_factory=dict, compare=False, repr=False)

    @property
    def field(self) -> PadicField:
        return PadicField(self.prime, self.precision)

    @property
    def command(self) -> str | None:
        return self.params.get("command")


# -- parsing ----------------------------------------------------------------------


def _split_list(body: str, line: int, col: int) -> list[tuple[str, int]]:
    items = []
    pos = 0
    for part in body.split(","):
        text = part.strip()
        if text:
            items.append((text, col + pos + part.index(text)))
        elif body.strip():
            raise ParseError("empty list item", line, col + pos)
        pos += len(part) + 1
    return items


def _parse_value(raw: str, kind: str, line: int, col: int):
    if kind == "string":
        if len(raw) >= 2 and raw[0] == raw[-1] == '"':
            return raw[1:-1]
        raise ParseError("expected a double-quoted string", line, col)
    if kind == "int":
        if not _INT.match(raw):
            raise ParseError(f"expected an integer, got {raw!r}", line, col)
        return int(raw)
    if kind == "bool":
        if raw not in ("true", "false"):
            raise ParseError(f"expected true or false, got {raw!r}", line, col)
        return raw == "true"
    if kind == "word":
        if not _WORD.match(raw):
            raise ParseError(f"expected a bare word, got {raw!r}", line, col)
        return raw
    if kind == "rational":
        if not _RATIONAL.match(raw):
            raise ParseError(f"expected num/den, got {raw!r}", line, col)
        num, _, den = raw.partition("/")
        if den and int(den) == 0:
            raise ParseError("zero denominator", line, col)
        return Fraction(int(num), int(den or 1))
    if kind.endswith("-list"):
        if not (raw.startswith("[") and raw.endswith("]")):
            raise ParseError("expected a bracketed list", line, col)
        inner = kind[: -len("-list")]
        return [_parse_value(t, inner, line, c) for t, c in _split_list(raw[1:-1], line, col + 1)]
    raise AssertionError(kind)


def _strip_comment(text: str) -> str:
    in_str = False
    for i, ch in enumerate(text):
        if ch == '"':
            in_str = not in_str
        elif ch == "#" and not in_str:
            return text[:i]
    return text


def parse_spec(text: str) -> ExperimentSpec:
    """Parse and validate a spec file.

    Raises :class:`ParseError` for malformed text (with line and column) and
    :class:`ValidationError` for well-formed but unusable values.  Every
    problem found is listed in the exception's ``diagnostics`` attribute.
    """
    sections: dict[str, dict] = {name: {} for name in SCHEMA}
    lines: dict[str, int] = {}
    diagnostics: list[PadicDynError] = []
    current = None
    for lineno, full in enumerate(text.splitlines(), start=1):
        body = _strip_comment(full).rstrip()
        stripped = body.strip()
        if not stripped:
            continue
        col0 = len(body) - len(body.lstrip()) + 1
        if stripped.startswith("["):
            m = re.fullmatch(r"\[\s*([a-z]+)\s*\]", stripped)
            if not m:
                diagnostics.append(ParseError("malformed section header", lineno, col0))
            elif m.group(1) not in SCHEMA:
                diagnostics.append(ParseError(f"unknown section [{m.group(1)}]", lineno, col0))
                current = None
            else:
                current = m.group(1)
            continue
        if "=" not in body:
            diagnostics.append(ParseError("expected key = value", lineno, col0))
            continue
        if current is None:
            diagnostics.append(ParseError("key outside a known section", lineno, col0))
            continue
        key_part, _, val_part = body.partition("=")
        key = key_part.strip()
        vcol = len(key_part) + 2 + (len(val_part) - len(val_part.lstrip()))
        raw = val_part.strip()
        kind = SCHEMA[current].get(key)
        if kind is None:
            diagnostics.append(ParseError(f"unknown key {key!r} in [{current}]", lineno, col0))
            continue
        if key in sections[current]:
            diagnostics.append(ParseError(f"duplicate key {key!r}", lineno, col0))
            continue
        try:
            sections[current][key] = _parse_value(raw, kind, lineno, vcol)
            lines[f"{current}.{key}"] = lineno
        except ParseError as exc:
            diagnostics.append(exc)
    if not diagnostics:
        diagnostics.extend(_validate(sections, lines))
    if diagnostics:
        err = diagnostics[0]
        err.diagnostics = diagnostics
        raise err
    f = sections["field"]
    return ExperimentSpec(f["prime"], f.get("precision", 64), sections["operator"], sections["params"], lines)


def _validate(sections: dict, lines: dict) -> list[ValidationError]:
    out = []

    def bad(msg, key):
        out.append(ValidationError(msg, key, lines.get(key)))

    f = sections["field"]
    if "prime" not in f:
        bad("missing", "field.prime")
    elif f["prime"] < 2 or not isprime(f["prime"]):
        bad(f"{f['prime']} is not prime", "field.prime")
    if f.get("precision", 64) < 1:
        bad("precision must be positive", "field.precision")
    op = sections["operator"]
    kind = op.get("kind")
    if kind is not None and kind not in KINDS:
        bad(f"unknown operator kind {kind!r}", "operator.kind")
    if "domain" in op and op["domain"] not in ("N", "Z"):
        bad("domain must be N or Z", "operator.domain")
    for key in WEIGHT_KEYS:
        vals = op.get(key)
        if vals is not None:
            if any(v == 0 for v in vals):
                bad("zero weight", f"operator.{key}")
            if f"{key}_v" in op:
                bad(f"give either {key} or {key}_v", f"operator.{key}")
    if kind in ("bilateral-shift", "unilateral-shift", "forward-shift"):
        if not (op.get("period") or op.get("period_v")):
            bad("a weight period is required", "operator.period")
    if kind == "lambda-mu":
        for key in ("lambda", "mu"):
            if key not in op:
                bad("missing", f"operator.{key}")
        if op.get("lambda") == 0 and op.get("mu") == 0:
            bad("lambda and mu cannot both be zero", "operator.lambda")
    if kind == "finite-dim":
        if op.get("det") == 0:
            bad("det must be nonzero", "operator.det")
        if op.get("dim", 1) < 1:
            bad("dim must be positive", "operator.dim")
    params = sections["params"]
    if params.get("command") not in (None, *COMMANDS):
        bad(f"unknown command {params['command']!r}", "params.command")
    if "property" in params:
        try:
            Property.parse(params["property"])
        except ValueError as exc:
            bad(str(exc), "params.property")
    for key in ("n_max", "depth", "basis_bound", "max_threshold", "k_max", "samples"):
        if key in params and params[key] < (0 if key == "n_max" else 1):
            bad("out of range", f"params.{key}")
    return out


# -- serialization ----------------------------------------------------------------


def _fmt(value, kind: str) -> str:
    if kind == "string":
        return f'"{value}"'
    if kind == "bool":
        return "true" if value else "false"
    if kind == "rational":
        return f"{value.numerator}/{value.denominator}"
    if kind.endswith("-list"):
        inner = kind[: -len("-list")]
        return "[" + ", ".join(_fmt(v, inner) for v in value) + "]"
    return str(value)


def serialize_spec(spec: ExperimentSpec) -> str:
    """Canonical text form; ``parse_spec(serialize_spec(s)) == s``."""
    out = ["[field]", f"prime = {spec.prime}", f"precision = {spec.precision}"]
    for name, values in (("operator", spec.operator), ("params", spec.params)):
        if not values:
            continue
        out += ["", f"[{name}]"]
        for key, kind in SCHEMA[name].items():
            if key in values:
                out.append(f"{key} = {_fmt(values[key], kind)}")
    return "\n".join(out) + "\n"


# -- building objects -------------------------------------------------------------


def _domain(spec: ExperimentSpec, default: str = "N") -> IndexDomain:
    return IndexDomain.parse(spec.operator.get("domain", default))


def build_weights(spec: ExperimentSpec, domain: IndexDomain) -> ops.WeightModel:
    op, F = spec.operator, spec.field
    bilateral = domain is IndexDomain.INTEGERS
    seqs = {}
    for key in WEIGHT_KEYS:
        if key in op:
            seqs[key] = tuple(F(v) for v in op[key])
        elif key + "_v" in op:
            seqs[key] = tuple(F.uniformizer_power(v) for v in op[key + "_v"])
        elif key == "backward_period":
            seqs[key] = (F.one,) if bilateral else ()
        else:
            seqs[key] = ()
    if not bilateral and (seqs["backward_prefix"] or seqs["backward_period"]):
        raise ValidationError("backward weights need domain = Z", "operator.backward_period")
    return ops.WeightModel(domain, seqs["prefix"], seqs["period"], seqs["backward_prefix"], seqs["backward_period"])


def build_operator(spec: ExperimentSpec):
    kind = spec.operator.get("kind")
    F = spec.field
    if kind is None:
        raise ValidationError("missing", "operator.kind")
    if kind == "lambda-mu":
        return ops.LambdaMu(F(spec.operator["lambda"]), F(spec.operator["mu"]), _domain(spec))
    if kind == "bilateral-shift":
        return ops.BilateralBackwardShift(build_weights(spec, IndexDomain.INTEGERS))
    if kind == "unilateral-shift":
        return ops.UnilateralBackwardShift(build_weights(spec, IndexDomain.NATURALS))
    if kind == "forward-shift":
        return ops.ForwardShift(build_weights(spec, _domain(spec)))
    raise ValidationError(f"operator kind {kind!r} has no sequence-space operator", "operator.kind")


def _vector(spec: ExperimentSpec, key: str, domain: IndexDomain) -> FinVector:
    if key not in spec.params:
        raise ValidationError("missing", f"params.{key}")
    try:
        return parse_vector(spec.params[key], spec.field, domain)
    except ParseError as exc:
        raise ParseError(f"params.{key}: {exc}", spec.lines.get(f"params.{key}")) from exc


def _property(spec: ExperimentSpec) -> Property:
    return Property.parse(spec.params.get("property", "hypercyclic"))


# -- commands ---------------------------------------------------------------------


@dataclass
class Outcome:
    code: int
    summary: list[str]
    records: list[dict]


def _n(norm) -> str:
    return dynamics._exp(norm)


def cmd_decide(spec: ExperimentSpec, args) -> Outcome:
    prop = _property(spec)
    if spec.operator.get("kind") == "finite-dim":
        if prop is not Property.HYPERCYCLIC:
            raise Unsupported("only hypercyclicity is characterized in finite dimension")
        v = decide_finite_dim(spec.operator.get("dim", 1))
    else:
        v = decide(build_operator(spec), prop)
    lines = [f"{prop.value}: {'Yes' if v.answer else 'No'}  [rule {v.rule.value}; {v.tag}]", v.justification]
    if v.answer:
        lines.append("certificate: " + json.dumps(v.certificate, sort_keys=True, default=str))
    return Outcome(0, lines, [v.to_record()])


def cmd_orbit(spec: ExperimentSpec, args) -> Outcome:
    op = build_operator(spec)
    dom = op.domain or _domain(spec)
    x = _vector(spec, "vector", dom)
    n_max = args.budget if args.budget is not None else spec.params.get("n_max", 10)
    traj = dynamics.orbit(op, x, n_max)
    lines = [f"orbit of {x.to_literal() or '0'} under {op.describe()}"]
    records = []
    for n, y, nrm in traj:
        lines.append(f"  n={n:<4d} log_p||T^n x|| = {_n(nrm)}")
        records.append({"record": "orbit-step", "n": n, "norm_exponent": _n(nrm), "vector": y.to_literal() or "0"})
    return Outcome(0, lines, records)


def cmd_witness(spec: ExperimentSpec, args) -> Outcome:
    op = build_operator(spec)
    dom = op.domain or _domain(spec)
    p = spec.params
    U = Ball(_vector(spec, "u_center", dom), p.get("u_radius", 0), p.get("u_closed", True))
    V = Ball(_vector(spec, "v_center", dom), p.get("v_radius", 0), p.get("v_closed", True))
    n_max = args.budget if args.budget is not None else p.get("n_max", 1000)
    w = dynamics.transitivity_witness(op, U, V, n_max=n_max)
    lines = [f"witness found at n = {w.n}", f"  z      = {dynamics._vec_repr(w.z)}",
             f"  T^n z  = {dynamics._vec_repr(w.image)}", f"  z in U: {w.in_U}   T^n z in V: {w.in_V}"]
    return Outcome(0, lines, [w.to_record()])


def cmd_verify(spec: ExperimentSpec, args) -> Outcome:
    op = build_operator(spec)
    prop = _property(spec)
    p = spec.params
    fn = dynamics.verify_hc_criterion if prop is Property.HYPERCYCLIC else dynamics.verify_sc_criterion
    r = fn(op, basis_bound=p.get("basis_bound", 20), depth=p.get("depth", 40),
           max_threshold=p.get("max_threshold", 20))
    lines = [f"{prop.value} criterion for {op.describe()}: {'PASS' if r.passed else 'FAIL'}",
             f"  n_k: {r.generator}; first terms {r.sequence[:8]}"]
    for c in r.conditions:
        lines.append(f"  {c.name}: {'ok' if c.passed else 'fails'}" + (f" ({c.note})" if c.note else ""))
    lines.append(f"  T^n_k S^n_k = I exactly: {r.identity_exact}")
    return Outcome(0, lines, r.to_records())


def cmd_obstruct(spec: ExperimentSpec, args) -> Outcome:
    F = spec.field
    seed = args.seed if args.seed is not None else spec.params.get("seed", 0)
    kind = spec.operator.get("kind")
    if kind == "finite-dim":
        if "det" not in spec.operator:
            raise ValidationError("missing", "operator.det")
        r = dynamics.finite_dim_obstruction(F(spec.operator["det"]), spec.params.get("n_max", 20), seed=seed)
        return Outcome(0, [f"det = {r.a}: {r.case}; holds = {r.holds}"], r.to_records())
    op = build_operator(spec)
    if not isinstance(op, ops.LambdaMu):
        raise ValidationError("obstructions are implemented for lambda-mu and finite-dim", "operator.kind")
    if "vector" in spec.params:
        x = _vector(spec, "vector", op.domain)
        w = dynamics.obstruction_witness_lambda_mu(op.lam, op.mu, x, spec.params.get("n_max", 100))
        lines = [f"{w.case}: index {w.index}, target e_{w.target}, n <= {w.n_max}: holds = {w.holds}", w.statement]
        return Outcome(0, lines, w.to_records())
    r = dynamics.open_set_invariance_check(op.lam, op.mu, spec.params.get("k_max", 6), spec.params.get("samples", 5),
                                       spec.params.get("n_max", 10), seed)
    return Outcome(0, [f"open-set check, r = p^-{r.ratio_exponent}: holds = {r.holds}"], r.to_records())


def cmd_selftest(spec, args) -> Outcome:
    from .selftest import run_all
    results = run_all(seed=args.seed if args.seed is not None else 0)
    lines = [f"{'PASS' if r.passed else 'FAIL'}  {r.number}. {r.name}: {r.detail}" for r in results]
    ok = all(r.passed for r in results)
    lines.append("selftest: " + ("all checks passed" if ok else "FAILURES"))
    return Outcome(0 if ok else 1, lines, [r.to_record() for r in results])


HANDLERS = {"decide": cmd_decide, "orbit": cmd_orbit, "witness": cmd_witness,
            "verify-criterion": cmd_verify, "obstruct": cmd_obstruct, "selftest": cmd_selftest}


def run(command: str, spec: ExperimentSpec | None, args) -> Outcome:
    if spec is not None and spec.command not in (None, command):
        raise ValidationError(f"spec is for {spec.command!r}, not {command!r}", "params.command")
    if spec is None and command != "selftest":
        raise ValidationError("--spec is required", "spec")
    try:
        return HANDLERS[command](spec, args)
    except NotFound as exc:
        return Outcome(2, [f"inconclusive: {exc}"], [{"record": "inconclusive", "n_max": exc.n_max}])


def dump_records(records: list[dict]) -> str:
    return "".join(json.dumps(r, sort_keys=True, default=str) + "\n" for r in records)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="padicdyn", description="Linear dynamics on p-adic sequence spaces.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--spec", help="experiment spec file")
    ap.add_argument("--report", help="write line-delimited JSON records to this file")
    ap.add_argument("--format", choices=("human", "records"), default="human")
    ap.add_argument("--seed", type=int)
    ap.add_argument("--budget", type=int, help="step budget for searches and orbits")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = None
        if args.spec:
            with open(args.spec, encoding="utf-8") as fh:
                spec = parse_spec(fh.read())
        outcome = run(args.command, spec, args)
    except (PadicDynError, OSError) as exc:
        for d in getattr(exc, "diagnostics", [exc]):
            print(f"padicdyn: error: {d}", file=sys.stderr)
        return 1
    if args.format == "records":
        sys.stdout.write(dump_records(outcome.records))
    else:
        print("\n".join(outcome.summary))
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(dump_records(outcome.records))
    return outcome.code


if __name__ == "__main__":
    sys.exit(main())
