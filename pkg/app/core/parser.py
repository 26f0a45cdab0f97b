"""Recursive descent parser for the polynomial grammar.

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := base ('^' nonneg-integer)?
    base   := rational | variable | '(' expr ')'
    rational := integer ('/' positive-integer)?

Implicit multiplication is rejected and whitespace is ignored. A single leading
sign is accepted on an expression so that every printed polynomial parses back.
"""
import re
from fractions import Fraction
from typing import List, NamedTuple, Sequence

from app.core.exceptions import NegativeExponentError, PolynomialSyntaxError, UndeclaredVariableError
from app.core.polyring import RatPoly

_TOKEN_RE = re.compile(r"\s*(?:(?P<number>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))")


class Token(NamedTuple):
    kind: str  # "number", "name", "op" or "end"
    text: str
    position: int


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    position = 0
    while position < len(text):
        if text[position].isspace():
            position += 1
            continue
        match = _TOKEN_RE.match(text, position)
        if match is None:
            raise PolynomialSyntaxError(f"unexpected character {text[position]!r}", position, text)
        kind = match.lastgroup
        start = match.start(kind)
        tokens.append(Token(kind, match.group(kind), start))
        position = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class PolynomialParser:
    def __init__(self, text: str, variables: Sequence[str]):
        self.text = text
        self.variables = RatPoly.check_variables(variables)
        self.tokens = tokenize(text)
        self.index = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def _advance(self) -> Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def _accept(self, op: str) -> bool:
        if self.current.kind == "op" and self.current.text == op:
            self.index += 1
            return True
        return False

    def _fail(self, message: str) -> PolynomialSyntaxError:
        token = self.current
        found = "end of input" if token.kind == "end" else repr(token.text)
        return PolynomialSyntaxError(f"{message}, found {found}", token.position, self.text)

    def parse(self) -> RatPoly:
        if self.current.kind == "end":
            raise self._fail("expected a polynomial")
        result = self._expr()
        if self.current.kind != "end":
            if self.current.kind in ("name", "number") or self.current.text == "(":
                raise self._fail("implicit multiplication is not supported; expected '*'")
            raise self._fail("unexpected token")
        return result

    def _expr(self) -> RatPoly:
        negate = False
        if self._accept("-"):
            negate = True
        else:
            self._accept("+")
        result = self._term()
        if negate:
            result = -result
        while self.current.kind == "op" and self.current.text in "+-":
            op = self._advance().text
            rhs = self._term()
            result = result + rhs if op == "+" else result - rhs
        return result

    def _term(self) -> RatPoly:
        result = self._factor()
        while self._accept("*"):
            result = result * self._factor()
        return result

    def _factor(self) -> RatPoly:
        base = self._base()
        if self._accept("^"):
            token = self.current
            if token.kind == "op" and token.text == "-":
                raise NegativeExponentError("negative exponents are not allowed", token.position, self.text)
            if token.kind != "number":
                raise self._fail("expected a non-negative integer exponent")
            self._advance()
            return base ** int(token.text)
        return base

    def _base(self) -> RatPoly:
        token = self.current
        if token.kind == "number":
            self._advance()
            value = Fraction(int(token.text))
            if self._accept("/"):
                denominator = self.current
                if denominator.kind != "number":
                    raise self._fail("expected a positive integer denominator")
                if int(denominator.text) == 0:
                    raise PolynomialSyntaxError("denominator must be positive", denominator.position, self.text)
                self._advance()
                value = Fraction(int(token.text), int(denominator.text))
            return RatPoly.constant(value, self.variables)
        if token.kind == "name":
            if token.text not in self.variables:
                raise UndeclaredVariableError(
                    f"variable {token.text!r} at position {token.position} is not declared in {list(self.variables)}",
                    diagnostics={"position": token.position, "text": self.text},
                )
            self._advance()
            return RatPoly.variable(token.text, self.variables)
        if self._accept("("):
            inner = self._expr()
            if not self._accept(")"):
                raise self._fail("expected ')'")
            return inner
        if token.kind == "op" and token.text == "/":
            raise self._fail("'/' is only allowed inside a rational literal")
        raise self._fail("expected a number, a variable or '('")


def parse(text: str, variables: Sequence[str]) -> RatPoly:
    """Parse ``text`` into a canonical RatPoly over ``variables``"""
    return PolynomialParser(text, variables).parse()
