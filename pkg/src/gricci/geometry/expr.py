# -*- encoding: utf-8 -*-
"""
gricci Cutoff Expressions - syntax tree nodes for parsed cutoff expressions.

Nodes evaluate on numpy arrays of boundary coordinates, so a single parsed
expression serves both pointwise checks and vectorised sampling.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Union

import numpy as np


class Operator(str, Enum):
    ADD = "+"
    SUB = "-"
    MUL = "*"
    DIV = "/"
    POW = "^"


_BINARY = {
    Operator.ADD: np.add,
    Operator.SUB: np.subtract,
    Operator.MUL: np.multiply,
    Operator.DIV: np.divide,
    Operator.POW: np.power,
}

_FUNCTIONS = {"exp": np.exp, "log": np.log}


@dataclass(frozen=True)
class Number:
    value: float

    def evaluate(self, env: dict[str, np.ndarray]) -> np.ndarray:
        return np.asarray(self.value, dtype=float)

    def variables(self) -> frozenset[str]:
        return frozenset()

    def __str__(self) -> str:
        return repr(self.value)


@dataclass(frozen=True)
class Variable:
    name: str

    def evaluate(self, env: dict[str, np.ndarray]) -> np.ndarray:
        return np.asarray(env[self.name], dtype=float)

    def variables(self) -> frozenset[str]:
        return frozenset({self.name})

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Negate:
    operand: "Expr"

    def evaluate(self, env: dict[str, np.ndarray]) -> np.ndarray:
        return -self.operand.evaluate(env)

    def variables(self) -> frozenset[str]:
        return self.operand.variables()

    def __str__(self) -> str:
        return f"(-{self.operand})"


@dataclass(frozen=True)
class BinaryOp:
    op: Operator
    left: "Expr"
    right: "Expr"

    def evaluate(self, env: dict[str, np.ndarray]) -> np.ndarray:
        return _BINARY[self.op](self.left.evaluate(env), self.right.evaluate(env))

    def variables(self) -> frozenset[str]:
        return self.left.variables() | self.right.variables()

    def __str__(self) -> str:
        return f"({self.left} {self.op.value} {self.right})"


@dataclass(frozen=True)
class Call:
    function: str
    argument: "Expr"

    def evaluate(self, env: dict[str, np.ndarray]) -> np.ndarray:
        return _FUNCTIONS[self.function](self.argument.evaluate(env))

    def variables(self) -> frozenset[str]:
        return self.argument.variables()

    def __str__(self) -> str:
        return f"{self.function}({self.argument})"


Expr = Union[Number, Variable, Negate, BinaryOp, Call]
