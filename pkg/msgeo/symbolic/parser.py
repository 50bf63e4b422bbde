"""
Parser for the expression language.

Grammar:
    expr     := term (('+' | '-') term)*
    term     := unary (('*' | '/') unary)*
    unary    := '-' unary | power
    power    := atom ('^' exponent)?
    exponent := ['-'] integer | '(' ['-'] integer ')'
    atom     := integer | identifier | function '(' expr ')' | '(' expr ')'

Rationals are written as integer quotients. Identifiers are coordinate names
(``x1``, ``y1``, ``z1_2``, ``z1_12``, ``p1^2``, ``p1^2_1``, ``y1_2``, ``p``,
``div1``) or declared parameters.
"""
import logging
import re
from dataclasses import dataclass

import sympy

from ..errors import ExpressionSyntaxError, UnknownIdentifierError
from .expr import FUNCTIONS, JetSpace, VarName

logger = logging.getLogger(__name__)

_MOMENTUM = re.compile(r"p[1-9]\^[1-9](?:_[1-9])?")
_IDENTIFIER = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
_INTEGER = re.compile(r"[0-9]+")
_OPERATORS = "+-*/^()"


@dataclass(frozen=True)
class Token:
    kind: str  # 'int', 'ident', 'op', 'end'
    text: str
    position: int


def tokenize(text):
    """Split text into tokens; raises ExpressionSyntaxError on stray characters."""
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        match = _MOMENTUM.match(text, i)
        if match is None:
            match = _IDENTIFIER.match(text, i)
        if match is not None:
            tokens.append(Token("ident", match.group(), i))
            i = match.end()
            continue
        match = _INTEGER.match(text, i)
        if match is not None:
            tokens.append(Token("int", match.group(), i))
            i = match.end()
            continue
        if ch in _OPERATORS:
            tokens.append(Token("op", ch, i))
            i += 1
            continue
        raise ExpressionSyntaxError(f"unexpected character '{ch}'", text, i)
    tokens.append(Token("end", "", len(text)))
    return tokens


class _Parser:

    def __init__(self, text, jet):
        self.text = text
        self.jet = jet
        self.tokens = tokenize(text)
        self.index = 0

    @property
    def current(self):
        return self.tokens[self.index]

    def error(self, message, token=None):
        token = token or self.current
        return ExpressionSyntaxError(message, self.text, token.position)

    def accept(self, op):
        token = self.current
        if token.kind == "op" and token.text == op:
            self.index += 1
            return token
        return None

    def expect(self, op):
        token = self.accept(op)
        if token is None:
            found = self.current.text or "end of input"
            raise self.error(f"expected '{op}' but found '{found}'")
        return token

    def parse(self):
        if self.current.kind == "end":
            raise self.error("empty expression")
        result = self.expr()
        if self.current.kind != "end":
            raise self.error(f"unexpected '{self.current.text}'")
        return result

    def expr(self):
        result = self.term()
        while True:
            if self.accept("+"):
                result = result + self.term()
            elif self.accept("-"):
                result = result - self.term()
            else:
                return result

    def term(self):
        result = self.unary()
        while True:
            if self.accept("*"):
                result = result * self.unary()
            elif self.current.kind == "op" and self.current.text == "/":
                slash = self.current
                self.index += 1
                divisor = self.unary()
                if divisor == 0:
                    raise self.error("division by zero", slash)
                result = result / divisor
            else:
                return result

    def unary(self):
        if self.accept("-"):
            return -self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.accept("^"):
            return base ** self.exponent()
        return base

    def exponent(self):
        parenthesized = self.accept("(") is not None
        negative = self.accept("-") is not None
        token = self.current
        if token.kind != "int":
            raise self.error("exponents must be integers")
        self.index += 1
        if parenthesized:
            self.expect(")")
        value = int(token.text)
        return sympy.Integer(-value if negative else value)

    def atom(self):
        token = self.current
        if token.kind == "int":
            self.index += 1
            return sympy.Integer(int(token.text))
        if token.kind == "ident":
            self.index += 1
            nxt = self.current
            if nxt.kind == "op" and nxt.text == "(":
                if token.text not in FUNCTIONS:
                    raise UnknownIdentifierError(token.text, token.position)
                self.index += 1
                argument = self.expr()
                self.expect(")")
                return FUNCTIONS[token.text](argument)
            return self.identifier(token)
        if self.accept("("):
            inner = self.expr()
            self.expect(")")
            return inner
        if token.kind == "end":
            raise self.error("unexpected end of input")
        raise self.error(f"unexpected '{token.text}'")

    def identifier(self, token):
        if token.text in FUNCTIONS:
            raise self.error(f"function '{token.text}' needs an argument", token)
        if self.jet is not None:
            return self.jet.resolve(token.text, token.position)
        v = VarName.parse(token.text)
        if v is None:
            raise UnknownIdentifierError(token.text, token.position)
        return v.symbol


def parse(text, jet=None):
    """
    Parse expression text.

    Args:
        text: expression source
        jet: JetSpace whose index ranges and parameters are accepted; when None any
            coordinate name is accepted and no parameters are

    Returns:
        sympy expression

    Raises:
        ExpressionSyntaxError: malformed input (with position)
        UnknownIdentifierError: identifier is not a coordinate or parameter
    """
    if jet is not None and not isinstance(jet, JetSpace):
        raise TypeError("jet must be a JetSpace")
    result = _Parser(text, jet).parse()
    logger.debug(f"Parsed {text!r} -> {result}")
    return result
