"""Closed-form test functions over (x1, x2, d) and finite-difference derivatives on a grid."""

from __future__ import annotations

import ast
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import ndimage

from ..errors import ConfigurationError
from ..geometry import Grid, Mask, distance_to_complement

_FUNCS: dict[str, Callable] = {
    "exp": np.exp,
    "log": np.log,
    "sin": np.sin,
    "cos": np.cos,
    "sqrt": np.sqrt,
    "abs": np.abs,
}
_NAMES = {"x1", "x2", "d"}
_CONSTS = {"pi": math.pi, "e": math.e}
_BINOPS = {ast.Add: np.add, ast.Sub: np.subtract, ast.Mult: np.multiply, ast.Div: np.divide, ast.Pow: np.power}


def _zpow(k: int, x1, x2):
    return (np.asarray(x1) + 1j * np.asarray(x2)) ** k


def _check(node: ast.AST) -> None:
    if isinstance(node, ast.Expression):
        return _check(node.body)
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        _check(node.left)
        _check(node.right)
    elif isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        _check(node.operand)
    elif isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        pass
    elif isinstance(node, ast.Name) and (node.id in _NAMES or node.id in _CONSTS):
        pass
    elif isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and not node.keywords:
        name = node.func.id
        if name in _FUNCS and len(node.args) == 1:
            _check(node.args[0])
        elif name in ("rez", "imz") and len(node.args) == 1:
            arg = node.args[0]
            if not (isinstance(arg, ast.Constant) and isinstance(arg.value, int) and arg.value >= 0):
                raise ConfigurationError(f"{name} takes a nonnegative integer power")
        else:
            raise ConfigurationError(f"unknown function {name!r}")
    else:
        raise ConfigurationError(f"unsupported syntax: {ast.dump(node)[:60]}")


def _eval(node: ast.AST, env: dict):
    if isinstance(node, ast.Expression):
        return _eval(node.body, env)
    if isinstance(node, ast.BinOp):
        return _BINOPS[type(node.op)](_eval(node.left, env), _eval(node.right, env))
    if isinstance(node, ast.UnaryOp):
        v = _eval(node.operand, env)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.Constant):
        return float(node.value)
    if isinstance(node, ast.Name):
        return env[node.id] if node.id in env else _CONSTS[node.id]
    name = node.func.id
    if name == "rez":
        return _zpow(node.args[0].value, env["x1"], env["x2"]).real
    if name == "imz":
        return _zpow(node.args[0].value, env["x1"], env["x2"]).imag
    return _FUNCS[name](_eval(node.args[0], env))


@dataclass(frozen=True)
class TestFunction:
    """f(x1, x2, d) written as a Python-style expression.

    ``d`` is the distance to the complement of the open set the function lives
    on; ``rez(k)`` and ``imz(k)`` are Re and Im of (x1 + i x2)^k.
    """

    __test__ = False  # not a pytest class

    expression: str
    stencil_order: int = 2
    _tree: ast.Expression = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.stencil_order not in (2, 4):
            raise ConfigurationError("stencil order must be 2 or 4")
        try:
            tree = ast.parse(self.expression, mode="eval")
        except SyntaxError as exc:
            raise ConfigurationError(f"cannot parse {self.expression!r}: {exc.msg}") from None
        _check(tree)
        object.__setattr__(self, "_tree", tree)

    @property
    def uses_distance(self) -> bool:
        return any(isinstance(n, ast.Name) and n.id == "d" for n in ast.walk(self._tree))

    def __call__(self, x1, x2, d=None):
        env = {"x1": np.asarray(x1, dtype=float), "x2": np.asarray(x2, dtype=float)}
        if d is not None:
            env["d"] = np.asarray(d, dtype=float)
        elif self.uses_distance:
            raise ConfigurationError("expression uses d but no distance was given")
        with np.errstate(all="ignore"):
            out = _eval(self._tree, env)
        return np.broadcast_to(np.asarray(out, dtype=float), np.broadcast(env["x1"], env["x2"]).shape)

    def to_json(self):
        return {"expression": self.expression, "stencil_order": self.stencil_order}


@dataclass(frozen=True, eq=False)
class FieldFunction:
    """A function known only through its values on each grid."""

    build: Callable[[Grid], np.ndarray]
    stencil_order: int = 2
    name: str = "field"

    def on_grid(self, grid: Grid, d: np.ndarray) -> np.ndarray:
        return np.asarray(self.build(grid), dtype=float)

    def to_json(self):
        return {"field": self.name, "stencil_order": self.stencil_order}


def evaluate_on(f, grid: Grid, d: np.ndarray) -> np.ndarray:
    if isinstance(f, FieldFunction):
        return f.on_grid(grid, d)
    xx, yy = grid.mesh
    return np.array(f(xx, yy, d), dtype=float)


# finite differences ------------------------------------------------------------------
_STENCILS = {
    2: {
        0: [1.0],
        1: [-0.5, 0.0, 0.5],
        2: [1.0, -2.0, 1.0],
        3: [-0.5, 1.0, 0.0, -1.0, 0.5],
        4: [1.0, -4.0, 6.0, -4.0, 1.0],
    },
    4: {
        0: [1.0],
        1: [1 / 12, -2 / 3, 0.0, 2 / 3, -1 / 12],
        2: [-1 / 12, 4 / 3, -5 / 2, 4 / 3, -1 / 12],
        3: [1 / 8, -1.0, 13 / 8, 0.0, -13 / 8, 1.0, -1 / 8],
        4: [-1 / 6, 2.0, -13 / 2, 28 / 3, -13 / 2, 2.0, -1 / 6],
    },
}


def stencil(order: int, k: int) -> np.ndarray:
    try:
        return np.array(_STENCILS[order][k])
    except KeyError:
        raise ConfigurationError(f"no stencil for derivative {k} at order {order}") from None


def derivative(values: np.ndarray, grid: Grid, alpha: tuple[int, int], order: int = 2) -> tuple[np.ndarray, tuple[int, int]]:
    """D^alpha on the whole array (axis 1 is x1, axis 0 is x2) and the stencil half-widths (r1, r2)."""
    a1, a2 = alpha
    out = np.asarray(values, dtype=float)
    w1, w2 = stencil(order, a1), stencil(order, a2)
    with np.errstate(all="ignore"):
        if a1:
            out = ndimage.correlate1d(out, w1 / float(grid.dx) ** a1, axis=1, mode="constant", cval=np.nan)
        if a2:
            out = ndimage.correlate1d(out, w2 / float(grid.dy) ** a2, axis=0, mode="constant", cval=np.nan)
    return out, (len(w1) // 2, len(w2) // 2)


def laplacian(values: np.ndarray, grid: Grid, order: int = 2) -> tuple[np.ndarray, tuple[int, int]]:
    dxx, r = derivative(values, grid, (2, 0), order)
    dyy, _ = derivative(values, grid, (0, 2), order)
    return dxx + dyy, (r[0], r[0])


def stencil_inside(u: Mask, reach: tuple[int, int]) -> np.ndarray:
    """Cells whose whole (2 r1 + 1) x (2 r2 + 1) footprint lies in the mask."""
    r1, r2 = reach
    if r1 == 0 and r2 == 0:
        return u.bits.copy()
    struct = np.ones((2 * r2 + 1, 2 * r1 + 1), dtype=bool)
    return ndimage.binary_erosion(u.bits, structure=struct, border_value=0)


def boundary_distance(u: Mask) -> np.ndarray:
    """Half-cell corrected distance to the complement, nan outside u (no frame)."""
    field_ = distance_to_complement(u, frame=False)
    d = field_.corrected() if not field_.empty else np.full(u.grid.shape, float(u.grid.bbox.empty_convention))
    return np.where(u.bits, d, np.nan)


def multi_indices(m: int) -> list[tuple[int, int]]:
    return [(a, k - a) for k in range(m + 1) for a in range(k, -1, -1)]
