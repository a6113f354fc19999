"""Structured constraint expressions over signal metadata.

A small deterministic grammar stands in for annotation interpretation:

    expr      := or_expr
    or_expr   := and_expr (OR and_expr)*
    and_expr  := unary (AND unary)*
    unary     := NOT unary | '(' expr ')' | predicate
    predicate := field OP literal
               | field IN '(' literal (',' literal)* ')'
               | field BETWEEN literal AND literal
    OP        := = | != | <> | < | <= | > | >=

Fields are validated against the dataset schema at parse time:
categorical fields take string literals (=, !=, IN); the time field
takes ISO-8601 dates or bare calendar years and produces a TimeRange
with interval-overlap semantics; measure fields take numbers and
produce a ValueRange matched when any point falls inside. Strict and
non-strict inequalities collapse to closed ranges.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from datetime import datetime, timezone

from .errors import (
    ConstraintSyntaxError,
    TypeMismatchError,
    UnknownFieldError,
    ValidationError,
)
from .model import RankedMatches, Schema, Signal

INF = math.inf


@dataclass(frozen=True)
class Compare:
    field: str
    op: str  # "=" | "!="
    value: str


@dataclass(frozen=True)
class In:
    field: str
    values: tuple[str, ...]  # sorted for structural equality


@dataclass(frozen=True)
class TimeRange:
    start: float  # epoch seconds, -inf for unbounded
    end: float    # epoch seconds, +inf for unbounded

    def __post_init__(self):
        if self.start > self.end:
            raise ValidationError("TimeRange start > end")


@dataclass(frozen=True)
class ValueRange:
    measure: str
    lo: float
    hi: float

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValidationError("ValueRange lo > hi")


@dataclass(frozen=True)
class And:
    left: "ConstraintExpr"
    right: "ConstraintExpr"


@dataclass(frozen=True)
class Or:
    left: "ConstraintExpr"
    right: "ConstraintExpr"


@dataclass(frozen=True)
class Not:
    child: "ConstraintExpr"


ConstraintExpr = Compare | In | TimeRange | ValueRange | And | Or | Not


class AnnotationInterpreter:
    """Pluggable boundary turning an annotation payload into a
    ConstraintExpr. The default implementation parses typed text; a
    remote (e.g. model-backed) interpreter can be swapped in without
    touching the pipeline."""

    def interpret(self, payload, schema: Schema) -> ConstraintExpr:
        raise NotImplementedError


class TextConstraintInterpreter(AnnotationInterpreter):
    def interpret(self, payload: str, schema: Schema) -> ConstraintExpr:
        return parse_constraint(payload, schema)


# ---------------------------------------------------------------------------
# Tokenizer

_TOKEN_RE = re.compile(
    r"""
    (?P<WS>\s+)
  | (?P<DATE>\d{4}-\d{2}-\d{2}(?:[T ]\d{2}:\d{2}(?::\d{2}(?:\.\d+)?)?(?:Z|[+-]\d{2}:\d{2})?)?)
  | (?P<NUMBER>-?\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)
  | (?P<STRING>'[^']*'|"[^"]*")
  | (?P<OP><=|>=|!=|<>|=|<|>)
  | (?P<LPAREN>\()
  | (?P<RPAREN>\))
  | (?P<COMMA>,)
  | (?P<IDENT>[A-Za-z_][A-Za-z0-9_]*)
    """,
    re.VERBOSE,
)

_KEYWORDS = {"AND", "OR", "NOT", "IN", "BETWEEN"}


@dataclass(frozen=True)
class _Token:
    kind: str
    value: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ConstraintSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "WS":
            value = m.group()
            if kind == "IDENT" and value.upper() in _KEYWORDS:
                kind = value.upper()
            tokens.append(_Token(kind, value, pos))
        pos = m.end()
    tokens.append(_Token("EOF", "", len(text)))
    return tokens


def parse_timestamp(text: str) -> float:
    """ISO-8601 date/datetime or bare calendar year, to epoch seconds
    (UTC assumed when no offset is given)."""
    text = text.strip()
    if re.fullmatch(r"-?\d+", text):
        year = int(text)
        if not 1 <= year <= 9999:
            raise ValidationError(f"year out of range: {year}")
        return datetime(year, 1, 1, tzinfo=timezone.utc).timestamp()
    normalized = text.replace("Z", "+00:00")
    try:
        dt = datetime.fromisoformat(normalized)
    except ValueError as exc:
        raise ValidationError(f"unparseable timestamp {text!r}") from exc
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.timestamp()


def format_timestamp(ts: float) -> str:
    return datetime.fromtimestamp(ts, tz=timezone.utc).isoformat()


# ---------------------------------------------------------------------------
# Parser

class _Parser:
    def __init__(self, tokens: list[_Token], schema: Schema):
        self.tokens = tokens
        self.schema = schema
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def next(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.next()
        if tok.kind != kind:
            raise ConstraintSyntaxError(f"expected {kind}, found {tok.value or 'end of input'!r}", tok.pos)
        return tok

    def parse(self) -> ConstraintExpr:
        expr = self.or_expr()
        tok = self.peek()
        if tok.kind != "EOF":
            raise ConstraintSyntaxError(f"unexpected trailing input {tok.value!r}", tok.pos)
        return expr

    def or_expr(self) -> ConstraintExpr:
        left = self.and_expr()
        while self.peek().kind == "OR":
            self.next()
            left = Or(left, self.and_expr())
        return left

    def and_expr(self) -> ConstraintExpr:
        left = self.unary()
        while self.peek().kind == "AND":
            self.next()
            left = And(left, self.unary())
        return left

    def unary(self) -> ConstraintExpr:
        tok = self.peek()
        if tok.kind == "NOT":
            self.next()
            return Not(self.unary())
        if tok.kind == "LPAREN":
            self.next()
            expr = self.or_expr()
            self.expect("RPAREN")
            return expr
        return self.predicate()

    def _literal(self) -> _Token:
        tok = self.next()
        if tok.kind not in ("NUMBER", "STRING", "DATE"):
            raise ConstraintSyntaxError(f"expected a literal, found {tok.value or 'end of input'!r}", tok.pos)
        return tok

    def predicate(self) -> ConstraintExpr:
        tok = self.expect("IDENT")
        field = tok.value
        kind = self._field_kind(field)
        nxt = self.next()
        if nxt.kind == "OP":
            return self._comparison(field, kind, nxt.value, self._literal())
        if nxt.kind == "IN":
            self.expect("LPAREN")
            values = [self._string_value(self._literal(), field)]
            while self.peek().kind == "COMMA":
                self.next()
                values.append(self._string_value(self._literal(), field))
            self.expect("RPAREN")
            if kind != "categorical":
                raise TypeMismatchError(f"IN applies to categorical fields, not {field!r}")
            return In(field, tuple(sorted(values)))
        if nxt.kind == "BETWEEN":
            lo = self._literal()
            self.expect("AND")
            hi = self._literal()
            return self._between(field, kind, lo, hi)
        raise ConstraintSyntaxError(f"expected an operator after {field!r}", nxt.pos)

    def _field_kind(self, field: str) -> str:
        if field == self.schema.time_field:
            return "time"
        if field in self.schema.categorical_fields:
            return "categorical"
        if field in self.schema.measure_fields:
            return "measure"
        raise UnknownFieldError(field)

    @staticmethod
    def _string_value(tok: _Token, field: str) -> str:
        if tok.kind != "STRING":
            raise TypeMismatchError(
                f"field {field!r} is categorical; expected a quoted string, got {tok.value!r}"
            )
        return tok.value[1:-1]

    @staticmethod
    def _number_value(tok: _Token, field: str) -> float:
        if tok.kind != "NUMBER":
            raise TypeMismatchError(
                f"field {field!r} is a measure; expected a number, got {tok.value!r}"
            )
        return float(tok.value)

    @staticmethod
    def _time_value(tok: _Token, field: str) -> float:
        if tok.kind == "STRING":
            return parse_timestamp(tok.value[1:-1])
        if tok.kind in ("DATE", "NUMBER"):
            return parse_timestamp(tok.value)
        raise TypeMismatchError(f"field {field!r} is the time field; expected a date or year")

    def _comparison(self, field: str, kind: str, op: str, lit: _Token) -> ConstraintExpr:
        if op == "<>":
            op = "!="
        if kind == "categorical":
            if op not in ("=", "!="):
                raise TypeMismatchError(f"ordering operator {op!r} not valid for categorical field {field!r}")
            return Compare(field, op, self._string_value(lit, field))
        if kind == "time":
            ts = self._time_value(lit, field)
            return self._range_from_op(op, ts, lambda lo, hi: TimeRange(lo, hi), field)
        value = self._number_value(lit, field)
        return self._range_from_op(op, value, lambda lo, hi: ValueRange(field, lo, hi), field)

    @staticmethod
    def _range_from_op(op: str, v: float, make, field: str) -> ConstraintExpr:
        if op in (">=", ">"):
            return make(v, INF)
        if op in ("<=", "<"):
            return make(-INF, v)
        if op == "=":
            return make(v, v)
        if op == "!=":
            return Not(make(v, v))
        raise TypeMismatchError(f"operator {op!r} not valid for field {field!r}")

    def _between(self, field: str, kind: str, lo: _Token, hi: _Token) -> ConstraintExpr:
        if kind == "time":
            return TimeRange(self._time_value(lo, field), self._time_value(hi, field))
        if kind == "measure":
            return ValueRange(field, self._number_value(lo, field), self._number_value(hi, field))
        raise TypeMismatchError(f"BETWEEN not valid for categorical field {field!r}")


def parse_constraint(text: str, schema: Schema) -> ConstraintExpr:
    """Parse a constraint expression, validating fields against the schema."""
    return _Parser(_tokenize(text), schema).parse()


# ---------------------------------------------------------------------------
# Printing (inverse of parse up to structural equality)

def _quote(value: str) -> str:
    if "'" not in value:
        return f"'{value}'"
    if '"' not in value:
        return f'"{value}"'
    raise ValidationError("string literal may not contain both quote kinds")


def _fmt_number(v: float) -> str:
    return repr(int(v)) if float(v).is_integer() and abs(v) < 1e15 else repr(v)


def to_text(expr: ConstraintExpr, schema: Schema) -> str:
    """Render an expression in the constraint grammar. Reparsing the
    result yields a structurally equal AST."""
    if isinstance(expr, Compare):
        return f"{expr.field} {expr.op} {_quote(expr.value)}"
    if isinstance(expr, In):
        return f"{expr.field} IN ({', '.join(_quote(v) for v in expr.values)})"
    if isinstance(expr, TimeRange):
        f = schema.time_field
        if expr.end == INF:
            return f"{f} >= {format_timestamp(expr.start)}"
        if expr.start == -INF:
            return f"{f} <= {format_timestamp(expr.end)}"
        return f"{f} BETWEEN {format_timestamp(expr.start)} AND {format_timestamp(expr.end)}"
    if isinstance(expr, ValueRange):
        if expr.hi == INF:
            return f"{expr.measure} >= {_fmt_number(expr.lo)}"
        if expr.lo == -INF:
            return f"{expr.measure} <= {_fmt_number(expr.hi)}"
        if expr.lo == expr.hi:
            return f"{expr.measure} = {_fmt_number(expr.lo)}"
        return f"{expr.measure} BETWEEN {_fmt_number(expr.lo)} AND {_fmt_number(expr.hi)}"
    if isinstance(expr, And):
        return f"({to_text(expr.left, schema)} AND {to_text(expr.right, schema)})"
    if isinstance(expr, Or):
        return f"({to_text(expr.left, schema)} OR {to_text(expr.right, schema)})"
    if isinstance(expr, Not):
        return f"NOT ({to_text(expr.child, schema)})"
    raise ValidationError(f"unknown expression node {expr!r}")


# ---------------------------------------------------------------------------
# JSON AST serialization

def to_jsonable(expr: ConstraintExpr):
    if isinstance(expr, Compare):
        return {"type": "compare", "field": expr.field, "op": expr.op, "value": expr.value}
    if isinstance(expr, In):
        return {"type": "in", "field": expr.field, "values": list(expr.values)}
    if isinstance(expr, TimeRange):
        return {
            "type": "time_range",
            "start": None if expr.start == -INF else expr.start,
            "end": None if expr.end == INF else expr.end,
        }
    if isinstance(expr, ValueRange):
        return {
            "type": "value_range",
            "measure": expr.measure,
            "lo": None if expr.lo == -INF else expr.lo,
            "hi": None if expr.hi == INF else expr.hi,
        }
    if isinstance(expr, And):
        return {"type": "and", "left": to_jsonable(expr.left), "right": to_jsonable(expr.right)}
    if isinstance(expr, Or):
        return {"type": "or", "left": to_jsonable(expr.left), "right": to_jsonable(expr.right)}
    if isinstance(expr, Not):
        return {"type": "not", "child": to_jsonable(expr.child)}
    raise ValidationError(f"unknown expression node {expr!r}")


def from_jsonable(obj, schema: Schema) -> ConstraintExpr:
    if not isinstance(obj, dict) or "type" not in obj:
        raise ValidationError("constraint AST node must be an object with a 'type'")
    t = obj["type"]
    if t == "compare":
        field = obj["field"]
        if field not in schema.categorical_fields:
            raise UnknownFieldError(field)
        if obj["op"] not in ("=", "!="):
            raise TypeMismatchError(f"bad comparison op {obj['op']!r}")
        return Compare(field, obj["op"], str(obj["value"]))
    if t == "in":
        field = obj["field"]
        if field not in schema.categorical_fields:
            raise UnknownFieldError(field)
        return In(field, tuple(sorted(str(v) for v in obj["values"])))
    if t == "time_range":
        start = -INF if obj.get("start") is None else float(obj["start"])
        end = INF if obj.get("end") is None else float(obj["end"])
        return TimeRange(start, end)
    if t == "value_range":
        measure = obj["measure"]
        if measure not in schema.measure_fields:
            raise UnknownFieldError(measure)
        lo = -INF if obj.get("lo") is None else float(obj["lo"])
        hi = INF if obj.get("hi") is None else float(obj["hi"])
        return ValueRange(measure, lo, hi)
    if t == "and":
        return And(from_jsonable(obj["left"], schema), from_jsonable(obj["right"], schema))
    if t == "or":
        return Or(from_jsonable(obj["left"], schema), from_jsonable(obj["right"], schema))
    if t == "not":
        return Not(from_jsonable(obj["child"], schema))
    raise ValidationError(f"unknown constraint node type {t!r}")


# ---------------------------------------------------------------------------
# Evaluation and intersection

def evaluate(expr: ConstraintExpr, signal: Signal, schema: Schema) -> bool:
    """Does the signal satisfy the constraint?

    TimeRange uses interval overlap against the signal's time extent;
    ValueRange is satisfied when any point's measure lies inside.
    """
    if isinstance(expr, Compare):
        actual = signal.dims.get(expr.field)
        return (actual == expr.value) if expr.op == "=" else (actual != expr.value)
    if isinstance(expr, In):
        return signal.dims.get(expr.field) in expr.values
    if isinstance(expr, TimeRange):
        return float(signal.t[-1]) >= expr.start and float(signal.t[0]) <= expr.end
    if isinstance(expr, ValueRange):
        j = schema.measure_fields.index(expr.measure)
        col = signal.y[:, j]
        return bool(((col >= expr.lo) & (col <= expr.hi)).any())
    if isinstance(expr, And):
        return evaluate(expr.left, signal, schema) and evaluate(expr.right, signal, schema)
    if isinstance(expr, Or):
        return evaluate(expr.left, signal, schema) or evaluate(expr.right, signal, schema)
    if isinstance(expr, Not):
        return not evaluate(expr.child, signal, schema)
    raise ValidationError(f"unknown expression node {expr!r}")


def allowed_ids(expr: ConstraintExpr, signals, schema: Schema) -> set[str]:
    return {s.id for s in signals if evaluate(expr, s, schema)}


def intersect(geom: RankedMatches, allowed: set[str]) -> RankedMatches:
    """Filter the geometric ranking to the allowed ids, preserving
    relative order and scores."""
    return RankedMatches(
        entries=tuple((sid, score) for sid, score in geom.entries if sid in allowed)
    )
