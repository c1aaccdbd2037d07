# -*- encoding: utf-8 -*-
"""
gricci Cutoff Grammar - Lark EBNF grammar for cutoff scale expressions.

Expressions describe the positive function ell on the boundary:

    1
    1 + 0.5 * exp(-(x^2 + y^2))
    2 * (1 + z^2)

Numbers, the coordinates x, y, z, the operators + - * / ^ with the usual
precedence (^ binds tightest and is right associative), unary minus,
parentheses and the functions exp and log.
"""

CUTOFF_GRAMMAR = r'''
?start: sum

?sum: product
    | sum "+" product   -> add
    | sum "-" product   -> sub

?product: unary
        | product "*" unary -> mul
        | product "/" unary -> div

?unary: power
      | "-" unary       -> neg
      | "+" unary

?power: atom
      | atom "^" unary  -> pow

?atom: NUMBER           -> number
     | VARIABLE         -> variable
     | FUNCTION "(" sum ")" -> call
     | "(" sum ")"

FUNCTION.2: "exp" | "log"
VARIABLE: "x" | "y" | "z"
NUMBER: /[0-9]+(\.[0-9]*)?([eE][-+]?[0-9]+)?/ | /\.[0-9]+([eE][-+]?[0-9]+)?/

%import common.WS
%ignore WS
'''


def get_grammar() -> str:
    """Return the cutoff grammar string for use with Lark."""
    return CUTOFF_GRAMMAR
