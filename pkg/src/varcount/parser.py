"""Text (``.vsys``) and JSON formats for staircase systems.

Text grammar, one equation per line, ``#`` starts a comment::

    system := header eq+
    header := "field" int ("^" int "mod" poly)?
    eq     := term ("+" term)* "=" const
    term   := (coeff "*")? mono
    mono   := var ("^" int)? ("*" var ("^" int)?)*
    var    := "x" int
    coeff  := ["-"] int | "[" int ("," int)* "]"

``poly`` is a polynomial in the bare variable ``x``, e.g. ``x^2 + 1``.
Bracketed coefficients list extension-field coordinates, constant first.
Within a monomial the variables must be exactly ``x1, x2, ..., xw`` in that
order, and the widths w must not decrease along an equation; each increase
starts a new block.

Example::

    field 7
    x1*x2^2*x3^2 + x1^2*x2*x3^5*x4^3*x5 + x1*x2^4*x3^3*x4^2*x5^4*x6*x7 = 1
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from .errors import (
    ConstantOutOfField,
    InconsistentStructure,
    ParsedBlockShapeViolation,
    UnknownVariable,
    VsysSyntaxError,
)
from .field import DEFAULT_MAX_Q, FieldElement, FieldSpec, make_field
from .variety import RawSystem, VarietySpec, infer_structure, validate

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\f\v]+)
  | (?P<int>[0-9]+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[\^*+\-=\[\],])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # 'int', 'name', 'op', 'end'
    text: str
    line: int
    col: int


def _tokenize(line: str, lineno: int) -> list[Token]:
    out = []
    pos = 0
    while pos < len(line):
        mt = _TOKEN.match(line, pos)
        if mt is None:
            raise VsysSyntaxError(f"unexpected character {line[pos]!r}", lineno, pos + 1)
        if mt.lastgroup != "ws":
            out.append(Token(mt.lastgroup, mt.group(), lineno, pos + 1))
        pos = mt.end()
    out.append(Token("end", "", lineno, len(line) + 1))
    return out


class _Line:
    """Cursor over the tokens of one line."""

    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    @property
    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "end":
            self.pos += 1
        return tok

    def accept(self, text: str) -> Token | None:
        if self.peek.kind in ("op", "name") and self.peek.text == text:
            return self.next()
        return None

    def expect(self, text: str) -> Token:
        tok = self.accept(text)
        if tok is None:
            self.fail(f"expected {text!r}")
        return tok

    def expect_int(self) -> int:
        tok = self.peek
        if tok.kind != "int":
            self.fail("expected an integer")
        self.next()
        try:
            return int(tok.text)
        except ValueError:
            raise VsysSyntaxError("integer literal too long", tok.line, tok.col) from None

    def fail(self, message: str, tok: Token | None = None, cls=VsysSyntaxError):
        tok = tok or self.peek
        found = "end of line" if tok.kind == "end" else repr(tok.text)
        raise cls(f"{message}, found {found}", tok.line, tok.col)


def _logical_lines(text: str):
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0]
        if line.strip():
            yield lineno, line


def _parse_header(cur: _Line, force_even: bool, max_q: int) -> FieldSpec:
    cur.expect("field")
    p = cur.expect_int()
    n, modulus = 1, None
    if cur.accept("^"):
        n = cur.expect_int()
        cur.expect("mod")
        modulus = _parse_modulus(cur, p, n)
    if cur.peek.kind != "end":
        cur.fail("unexpected trailing input in header")
    return make_field(p, n, modulus, force_even=force_even, max_q=max_q)


def _parse_modulus(cur: _Line, p: int, n: int) -> list[int]:
    coeffs: dict[int, int] = {}
    while True:
        c, deg = 1, 0
        if cur.peek.kind == "int":
            c = cur.expect_int()
            if cur.accept("*"):
                deg = _parse_x_power(cur)
        else:
            deg = _parse_x_power(cur)
        if deg > n:
            cur.fail(f"modulus term of degree {deg} exceeds declared degree {n}")
        coeffs[deg] = (coeffs.get(deg, 0) + c) % p
        if not cur.accept("+"):
            break
    if cur.peek.kind != "end":
        cur.fail("unexpected input after modulus")
    return [coeffs.get(i, 0) for i in range(n + 1)]


def _parse_x_power(cur: _Line) -> int:
    tok = cur.peek
    if tok.kind != "name" or tok.text != "x":
        cur.fail("expected 'x' in modulus")
    cur.next()
    return cur.expect_int() if cur.accept("^") else 1


def _parse_literal(cur: _Line, F: FieldSpec) -> FieldElement:
    tok = cur.peek
    if cur.accept("["):
        parts = [cur.expect_int()]
        while cur.accept(","):
            parts.append(cur.expect_int())
        cur.expect("]")
        if len(parts) > F.n or any(c >= F.p for c in parts):
            raise ConstantOutOfField(
                f"{parts} is not a coordinate tuple of {F!r}", tok.line, tok.col
            )
        return F(parts)
    sign = -1 if cur.accept("-") else 1
    return F(sign * cur.expect_int())


def _parse_variable(cur: _Line) -> int:
    tok = cur.peek
    if tok.kind != "name":
        cur.fail("expected a variable")
    cur.next()
    mt = re.fullmatch(r"x([0-9]{1,18})", tok.text)
    if mt is None or int(mt.group(1)) == 0:
        raise UnknownVariable(f"unknown variable {tok.text!r}", tok.line, tok.col)
    return int(mt.group(1))


def _parse_monomial(cur: _Line) -> list[int]:
    exps: list[int] = []
    while True:
        tok = cur.peek
        idx = _parse_variable(cur)
        if idx <= len(exps):
            cur.fail(f"variable x{idx} repeated or out of ascending order", tok)
        if idx != len(exps) + 1:
            cur.fail(
                f"monomial skips x{len(exps) + 1}; variables must be x1..xw",
                tok,
                ParsedBlockShapeViolation,
            )
        e = 1
        if cur.accept("^"):
            etok = cur.peek
            e = cur.expect_int()
            if e < 1:
                cur.fail("exponents must be positive", etok)
        exps.append(e)
        if not cur.accept("*"):
            return exps


def _parse_equation(cur: _Line, F: FieldSpec):
    coeffs, rows, starts = [], [], []
    while True:
        starts.append(cur.peek)
        if cur.peek.kind == "name":
            c = F.one
        else:
            c = _parse_literal(cur, F)
            cur.expect("*")
        coeffs.append(c)
        rows.append(_parse_monomial(cur))
        if not cur.accept("+"):
            break
    cur.expect("=")
    const = _parse_literal(cur, F)
    if cur.peek.kind != "end":
        cur.fail("unexpected input after constant")
    widths = [len(r) for r in rows]
    for i in range(1, len(widths)):
        if widths[i] < widths[i - 1]:
            cur.fail(
                "monomials must not use fewer variables than the one before",
                starts[i],
                ParsedBlockShapeViolation,
            )
    return coeffs, rows, const


def parse(text: str | bytes, *, force_even: bool = False, max_q: int = DEFAULT_MAX_Q) -> RawSystem:
    """Parse ``.vsys`` text into an unvalidated system with inferred blocks."""
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise VsysSyntaxError(f"input is not UTF-8 (byte {exc.start})") from None
    lines = list(_logical_lines(text))
    if not lines:
        raise VsysSyntaxError("empty input: expected a 'field' header")
    lineno, header = lines[0]
    F = _parse_header(_Line(_tokenize(header, lineno)), force_even, max_q)
    if len(lines) < 2:
        raise VsysSyntaxError("no equations after the header", lineno + 1, 1)

    a, b, e = [], [], []
    structure = None
    for lineno, line in lines[1:]:
        coeffs, rows, const = _parse_equation(_Line(_tokenize(line, lineno)), F)
        this = infer_structure([len(r) for r in rows])
        if structure is None:
            structure = this
        elif this != structure:
            raise InconsistentStructure(
                f"block structure r={list(this[0])}, n={list(this[1])} differs from "
                f"r={list(structure[0])}, n={list(structure[1])} of the first equation",
                lineno,
                1,
            )
        a.append(coeffs)
        b.append(const)
        e.append(rows)
    return RawSystem(F, a, b, e, structure[0], structure[1])


def load(text: str | bytes, **kwargs) -> VarietySpec:
    """Parse and validate; accepts both the text and the JSON format."""
    if isinstance(text, (bytes, bytearray)):
        stripped = bytes(text).lstrip()
        if stripped.startswith(b"{"):
            return validate(parse_json(text, **kwargs))
    elif text.lstrip().startswith("{"):
        return validate(parse_json(text, **kwargs))
    return validate(parse(text, **kwargs))


# -- serialization -------------------------------------------------------------


def _format_element(x: FieldElement) -> str:
    if x.field.n == 1:
        return str(x.coeffs[0])
    return "[" + ",".join(map(str, x.coeffs)) + "]"


def _format_modulus(F: FieldSpec) -> str:
    terms = []
    for deg in range(F.n, -1, -1):
        c = F.modulus[deg]
        if not c:
            continue
        if deg == 0:
            terms.append(str(c))
            continue
        mono = "x" if deg == 1 else f"x^{deg}"
        terms.append(mono if c == 1 else f"{c}*{mono}")
    return " + ".join(terms)


def format_header(F: FieldSpec) -> str:
    if F.n == 1:
        return f"field {F.p}"
    return f"field {F.p}^{F.n} mod {_format_modulus(F)}"


def format_monomial(exps) -> str:
    return "*".join(f"x{j}" if e == 1 else f"x{j}^{e}" for j, e in enumerate(exps, 1))


def serialize(spec: VarietySpec) -> str:
    """Canonical text form; ``load(serialize(s)) == s``."""
    lines = [format_header(spec.field)]
    one = spec.field.one
    for k in range(spec.m):
        terms = []
        for c, row in zip(spec.a[k], spec.e[k]):
            mono = format_monomial(row)
            terms.append(mono if c == one else f"{_format_element(c)}*{mono}")
        lines.append(" + ".join(terms) + " = " + _format_element(spec.b[k]))
    return "\n".join(lines) + "\n"


def _element_json(x: FieldElement):
    return x.coeffs[0] if x.field.n == 1 else list(x.coeffs)


def to_json(spec: VarietySpec) -> dict:
    F = spec.field
    return {
        "field": {"p": F.p, "n": F.n, "modulus": list(F.modulus) if F.n > 1 else None},
        "equations": [
            {
                "terms": [
                    {"coeff": _element_json(c), "exponents": list(row)}
                    for c, row in zip(spec.a[k], spec.e[k])
                ],
                "constant": _element_json(spec.b[k]),
            }
            for k in range(spec.m)
        ],
    }


def _json_literal(F: FieldSpec, value, where: str) -> FieldElement:
    if isinstance(value, bool):
        raise VsysSyntaxError(f"{where}: expected an integer or coordinate list")
    if isinstance(value, int):
        return F(value)
    if isinstance(value, list) and value and all(
        isinstance(c, int) and not isinstance(c, bool) for c in value
    ):
        if len(value) > F.n or any(not 0 <= c < F.p for c in value):
            raise ConstantOutOfField(f"{where}: {value} is not a coordinate tuple of {F!r}")
        return F(value)
    raise VsysSyntaxError(f"{where}: expected an integer or coordinate list")


def parse_json(
    text: str | bytes | dict, *, force_even: bool = False, max_q: int = DEFAULT_MAX_Q
) -> RawSystem:
    """Read the JSON mirror ``{field, equations: [{terms: [{coeff, exponents}], constant}]}``."""
    if isinstance(text, dict):
        obj = text
    else:
        try:
            obj = json.loads(text)
        except (ValueError, UnicodeDecodeError) as exc:
            raise VsysSyntaxError(f"invalid JSON: {exc}") from None
    try:
        fobj = obj["field"]
        p, n = fobj["p"], fobj.get("n", 1)
        if not isinstance(p, int) or not isinstance(n, int):
            raise VsysSyntaxError("field.p and field.n must be integers")
        modulus = fobj.get("modulus")
        F = make_field(p, n, modulus if n > 1 else None, force_even=force_even, max_q=max_q)
        eqs = obj["equations"]
        if not isinstance(eqs, list) or not eqs:
            raise VsysSyntaxError("'equations' must be a non-empty list")
        a, b, e = [], [], []
        for k, eq in enumerate(eqs, 1):
            terms = eq["terms"]
            if not isinstance(terms, list) or not terms:
                raise VsysSyntaxError(f"equation {k}: 'terms' must be a non-empty list")
            a.append([_json_literal(F, t.get("coeff", 1), f"equation {k}") for t in terms])
            rows = []
            for t in terms:
                exps = t["exponents"]
                if not isinstance(exps, list) or not all(
                    isinstance(x, int) and not isinstance(x, bool) for x in exps
                ):
                    raise VsysSyntaxError(f"equation {k}: exponents must be a list of integers")
                rows.append(exps)
            e.append(rows)
            b.append(_json_literal(F, eq["constant"], f"equation {k}"))
    except (KeyError, TypeError, AttributeError) as exc:
        raise VsysSyntaxError(f"malformed system JSON: {exc!r}") from None
    return RawSystem(F, a, b, e)

