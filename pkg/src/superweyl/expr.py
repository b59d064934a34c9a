"""Scalar expression language for metric components and form coefficients.

Text is parsed by a small recursive-descent parser into unevaluated sympy trees, so the
tree mirrors the input. Differentiation and simplification delegate to sympy; numeric
evaluation compiles trees with ``sympy.lambdify`` and reports domain errors instead of
returning NaN.

Grammar::

    expr   := term (("+" | "-") term)*
    term   := factor (("*" | "/") factor)*
    factor := "-" factor | atom ("^" factor)?
    atom   := number | ident | ident "(" expr ")" | "(" expr ")"

``^`` is right-associative and binds tighter than unary minus (``-x^2 == -(x^2)``).

Dependencies: fractions, functools, math, re, sympy, numpy.
"""

from __future__ import annotations

import logging
import math
import re
from collections.abc import Callable, Mapping, Sequence
from fractions import Fraction
from functools import lru_cache
from typing import Any

import numpy as np
import sympy

from .exceptions import (
    EvaluationDomainError,
    ExprSyntaxError,
    UnboundVariableError,
    UnknownFunctionError,
)

logger = logging.getLogger(__name__)

FUNCTIONS: dict[str, Callable[..., sympy.Expr]] = {
    "sin": sympy.sin,
    "cos": sympy.cos,
    "tan": sympy.tan,
    "sinh": sympy.sinh,
    "cosh": sympy.cosh,
    "tanh": sympy.tanh,
    "exp": sympy.exp,
    "log": sympy.log,
    "sqrt": sympy.sqrt,
}
RESERVED = frozenset(FUNCTIONS) | {"pi"}

_TOKEN = re.compile(
    r"\s*(?:(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^()]))"
)


def symbol(name: str) -> sympy.Symbol:
    """The sympy symbol used for a variable name everywhere in the package."""
    return sympy.Symbol(name)


class Expr:
    """Immutable expression tree; a thin wrapper around a sympy expression."""

    __slots__ = ("_tree",)

    def __init__(self, tree: Any) -> None:
        self._tree = tree if isinstance(tree, sympy.Basic) else sympy.sympify(tree)

    @classmethod
    def constant(cls, value: int | float | Fraction) -> Expr:
        if isinstance(value, Fraction):
            return cls(sympy.Rational(value.numerator, value.denominator))
        return cls(sympy.sympify(value))

    @classmethod
    def variable(cls, name: str) -> Expr:
        return cls(symbol(name))

    @property
    def tree(self) -> sympy.Expr:
        return self._tree

    @property
    def free_variables(self) -> frozenset[str]:
        return frozenset(s.name for s in self._tree.free_symbols)

    def substitute(self, values: Mapping[str, Any]) -> Expr:
        """Replace variables by numbers or other expressions."""
        mapping = {symbol(k): _as_tree(v) for k, v in values.items()}
        return Expr(self._tree.xreplace(mapping))

    def __add__(self, other: Any) -> Expr:
        return Expr(self._tree + _as_tree(other))

    def __radd__(self, other: Any) -> Expr:
        return Expr(_as_tree(other) + self._tree)

    def __sub__(self, other: Any) -> Expr:
        return Expr(self._tree - _as_tree(other))

    def __rsub__(self, other: Any) -> Expr:
        return Expr(_as_tree(other) - self._tree)

    def __mul__(self, other: Any) -> Expr:
        return Expr(self._tree * _as_tree(other))

    def __rmul__(self, other: Any) -> Expr:
        return Expr(_as_tree(other) * self._tree)

    def __truediv__(self, other: Any) -> Expr:
        return Expr(self._tree / _as_tree(other))

    def __neg__(self) -> Expr:
        return Expr(-self._tree)

    def __pow__(self, other: Any) -> Expr:
        return Expr(self._tree ** _as_tree(other))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Expr):
            return bool(self._tree == other._tree)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._tree)

    def __str__(self) -> str:
        return str(self._tree)

    def __repr__(self) -> str:
        return f"Expr({sympy.srepr(self._tree)})"


def _as_tree(value: Any) -> Any:
    if isinstance(value, Expr):
        return value.tree
    if isinstance(value, Fraction):
        return sympy.Rational(value.numerator, value.denominator)
    return sympy.sympify(value)


class _Parser:
    """Recursive-descent parser; positions are character indices into the text."""

    def __init__(self, text: str) -> None:
        self.text = text
        self.tokens: list[tuple[str, str, int]] = []
        self.pos = 0
        self._tokenize()

    def _byte_offset(self, index: int) -> int:
        return len(self.text[:index].encode("utf-8"))

    def _error(self, message: str, index: int) -> ExprSyntaxError:
        return ExprSyntaxError(message, self._byte_offset(index))

    def _tokenize(self) -> None:
        index = 0
        text = self.text
        while index < len(text):
            if text[index:].strip() == "":
                break
            match = _TOKEN.match(text, index)
            if match is None or match.end() == index:
                start = index + (len(text[index:]) - len(text[index:].lstrip()))
                raise self._error(f"unexpected character {text[start]!r}", start)
            kind = match.lastgroup or "op"
            start = match.start(kind)
            self.tokens.append((kind, match.group(kind), start))
            index = match.end()
        self.tokens.append(("end", "", len(text)))

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.pos]

    def take(self) -> tuple[str, str, int]:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def expect(self, value: str) -> None:
        kind, text, start = self.take()
        if text != value or kind != "op":
            found = "end of input" if kind == "end" else repr(text)
            raise self._error(f"expected {value!r}, found {found}", start)

    def parse(self) -> sympy.Expr:
        tree = self.expr()
        kind, text, start = self.peek()
        if kind != "end":
            raise self._error(f"unexpected {text!r}", start)
        return tree

    def expr(self) -> sympy.Expr:
        tree = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            if op == "-":
                rhs = sympy.Mul(sympy.S.NegativeOne, rhs, evaluate=False)
            tree = sympy.Add(tree, rhs, evaluate=False)
        return tree

    def term(self) -> sympy.Expr:
        tree = self.factor()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.factor()
            if op == "/":
                rhs = sympy.Pow(rhs, sympy.S.NegativeOne, evaluate=False)
            tree = sympy.Mul(tree, rhs, evaluate=False)
        return tree

    def factor(self) -> sympy.Expr:
        kind, text, _ = self.peek()
        if kind == "op" and text == "-":
            self.take()
            return sympy.Mul(sympy.S.NegativeOne, self.factor(), evaluate=False)
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            return sympy.Pow(base, self.factor(), evaluate=False)
        return base

    def atom(self) -> sympy.Expr:
        kind, text, start = self.take()
        if kind == "number":
            if re.fullmatch(r"\d+", text):
                return sympy.Integer(int(text))
            value = Fraction(text)
            return sympy.Rational(value.numerator, value.denominator)
        if kind == "ident":
            followed_by_paren = self.peek()[0] == "op" and self.peek()[1] == "("
            if followed_by_paren:
                if text not in FUNCTIONS:
                    raise UnknownFunctionError(
                        f"unknown function {text!r}", self._byte_offset(start)
                    )
                self.take()
                argument = self.expr()
                self.expect(")")
                return FUNCTIONS[text](argument, evaluate=False)
            if text == "pi":
                return sympy.pi
            if text in FUNCTIONS:
                raise self._error(f"function {text!r} used without an argument", start)
            return symbol(text)
        if kind == "op" and text == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        found = "end of input" if kind == "end" else repr(text)
        raise self._error(f"expected a number, name or '(', found {found}", start)


def parse(text: str) -> Expr:
    """Parse expression text.

    :param text: Source in the grammar of this module.
    :return: The parsed, unsimplified expression.
    :raises ExprSyntaxError: On malformed input; ``offset`` is a UTF-8 byte offset.
    :raises UnknownFunctionError: On a call to a function outside the supported table.
    """
    return Expr(_Parser(text).parse())


def differentiate(e: Expr, var: str) -> Expr:
    """Exact symbolic derivative; zero for variables the expression does not contain."""
    return Expr(sympy.diff(e.tree, symbol(var)))


def simplify(e: Expr) -> Expr:
    """Best-effort simplification: re-evaluates the tree, folding constants and identities."""
    return Expr(e.tree.doit())


@lru_cache(maxsize=4096)
def _compile(trees: tuple[Any, ...], names: tuple[str, ...], backend: str) -> Callable[..., Any]:
    logger.debug("compiling %d expression(s) in %s for %s", len(trees), names, backend)
    return sympy.lambdify(  # type: ignore[no-any-return]
        [symbol(n) for n in names], list(trees), modules=backend, dummify=True
    )


def _check_bound(trees: Sequence[Any], names: Sequence[str]) -> None:
    bound = set(names)
    free = sorted({s.name for t in trees for s in t.free_symbols} - bound)
    if free:
        raise UnboundVariableError(free[0])


def _finite_real(value: Any, what: str) -> float:
    if isinstance(value, complex):
        if value.imag != 0:
            raise EvaluationDomainError(f"{what} is complex ({value})")
        value = value.real
    result = float(value)
    if not math.isfinite(result):
        raise EvaluationDomainError(f"{what} is not finite ({result})")
    return result


def evaluate_many(exprs: Sequence[Expr | Any], bindings: Mapping[str, float]) -> list[float]:
    """Evaluate several expressions at one point with a single compiled function.

    :raises UnboundVariableError: If a free variable has no binding.
    :raises EvaluationDomainError: On a domain violation or non-finite result.
    """
    trees = tuple(e.tree if isinstance(e, Expr) else _as_tree(e) for e in exprs)
    names = tuple(sorted(bindings))
    _check_bound(trees, names)
    fn = _compile(trees, names, "math")
    try:
        values = fn(*(float(bindings[n]) for n in names))
    except (ValueError, ZeroDivisionError, OverflowError, TypeError) as exc:
        raise EvaluationDomainError(f"evaluation failed at {dict(bindings)}: {exc}") from exc
    return [_finite_real(v, f"value of {t}") for v, t in zip(values, trees, strict=True)]


def evaluate(e: Expr, bindings: Mapping[str, float]) -> float:
    """IEEE double value of an expression.

    :param e: Expression to evaluate.
    :param bindings: Values of all free variables; extra bindings are ignored.
    :raises UnboundVariableError: If a free variable has no binding.
    :raises EvaluationDomainError: For log of non-positive, sqrt of negative, division by zero.
    """
    return evaluate_many([e], bindings)[0]


def evaluate_complex_many(
    trees: Sequence[Any], bindings: Mapping[str, float]
) -> list[complex]:
    """Like :func:`evaluate_many` for expressions that may carry the imaginary unit."""
    trees = tuple(trees)
    names = tuple(sorted(bindings))
    _check_bound(trees, names)
    fn = _compile(trees, names, "numpy")
    try:
        with np.errstate(all="raise"):
            values = fn(*(float(bindings[n]) for n in names))
    except (ValueError, ZeroDivisionError, OverflowError, FloatingPointError) as exc:
        raise EvaluationDomainError(f"evaluation failed at {dict(bindings)}: {exc}") from exc
    return [complex(v) for v in values]


def evaluate_on_grid(
    tree: Any, names: Sequence[str], columns: Sequence[np.ndarray]
) -> np.ndarray:
    """Vectorized evaluation at many points.

    :param tree: Sympy expression (or Expr).
    :param names: Variable order matching ``columns``.
    :param columns: One array of coordinate values per name, all the same length.
    :return: Complex array of values, broadcast to the column length.
    :raises EvaluationDomainError: If any value is NaN or infinite.
    """
    tree = tree.tree if isinstance(tree, Expr) else tree
    names = tuple(names)
    _check_bound((tree,), names)
    fn = _compile((tree,), names, "numpy")
    length = len(columns[0]) if columns else 1
    with np.errstate(all="ignore"):
        (values,) = fn(*columns)
        values = np.broadcast_to(np.asarray(values, dtype=complex), (length,))
    bad = ~np.isfinite(values)
    if bad.any():
        index = int(np.argmax(bad))
        point = {n: float(c[index]) for n, c in zip(names, columns, strict=True)}
        raise EvaluationDomainError(f"non-finite density at node {point}")
    return values
