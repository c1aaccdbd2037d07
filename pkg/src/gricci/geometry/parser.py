# -*- encoding: utf-8 -*-
"""
gricci Cutoff Parser - Lark-based parser for cutoff scale expressions.

Parses expression strings into the syntax tree of gricci.geometry.expr.

Usage:
    from gricci.geometry.parser import parse_cutoff

    tree = parse_cutoff("1 + 0.5 * exp(-(x^2 + y^2))")
    tree.evaluate({"x": xs, "y": ys})
"""

from lark import Lark, Transformer
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken

from gricci.exceptions import CutoffError
from gricci.geometry.expr import BinaryOp, Call, Expr, Negate, Number, Operator, Variable
from gricci.geometry.grammar import get_grammar


class CutoffTransformer(Transformer):
    """
    Lark Transformer that converts the parse tree to expression nodes.
    """

    def number(self, items):
        return Number(float(items[0]))

    def variable(self, items):
        return Variable(str(items[0]))

    def call(self, items):
        return Call(str(items[0]), items[1])

    def neg(self, items):
        return Negate(items[0])

    def add(self, items):
        return BinaryOp(Operator.ADD, *items)

    def sub(self, items):
        return BinaryOp(Operator.SUB, *items)

    def mul(self, items):
        return BinaryOp(Operator.MUL, *items)

    def div(self, items):
        return BinaryOp(Operator.DIV, *items)

    def pow(self, items):
        return BinaryOp(Operator.POW, *items)


class CutoffParser:
    """
    Cutoff expression parser using Lark.

    Example:
        parser = CutoffParser()
        tree = parser.parse("2 - x^2 / 4")
    """

    def __init__(self):
        self._parser = Lark(
            get_grammar(),
            parser='lalr',
            transformer=CutoffTransformer(),
        )

    def parse(self, text: str) -> Expr:
        """
        Parse an expression string.

        Raises:
            CutoffError: With the line and column of the offending input
        """
        try:
            return self._parser.parse(text)
        except UnexpectedEOF as e:
            raise CutoffError(f"unexpected end of cutoff expression {text!r}", e.line, e.column)
        except (UnexpectedCharacters, UnexpectedToken) as e:
            raise CutoffError(f"cannot parse cutoff expression {text!r} at column {e.column}", e.line, e.column)
        except UnexpectedInput as e:
            raise CutoffError(f"cannot parse cutoff expression {text!r}: {e}", e.line, e.column)


_PARSER = None


def parse_cutoff(text: str) -> Expr:
    """
    Convenience function to parse a cutoff expression.

    The Lark parser is built on first use and shared afterwards.
    """
    global _PARSER
    if _PARSER is None:
        _PARSER = CutoffParser()
    return _PARSER.parse(text)
