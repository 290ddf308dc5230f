"""Questionnaire-item equation registry.

Each item maps a pedestrian's feature vector to a raw score and is assigned
to one of the five personality factors. Items are defined by a small
arithmetic expression over the vector fields::

    s, alpha, x, y, isolation, socialization, collectivity

with ``+ - * /``, unary sign, parentheses, numeric constants and
``recip(expr)``. Division and ``recip`` clamp the denominator away from zero
(epsilon 1e-3), so every item is total over valid vectors.

Registry files are JSON lists of ``{"item_id": int, "factor": "O|C|E|A|N",
"expression": str, "description": str}``.
"""

from __future__ import annotations

import ast
import json
import math
import operator
from dataclasses import dataclass
from typing import Callable

from .errors import RegistryError
from .features import FeatureVector

FACTORS = ("O", "C", "E", "A", "N")

# Denominator guard for / and recip().
EPSILON = 1e-3

_FIELDS = ("s", "alpha", "x", "y", "isolation", "socialization", "collectivity")

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
}


def _safe_div(num: float, den: float) -> float:
    if abs(den) < EPSILON:
        den = EPSILON if den >= 0 else -EPSILON
    return num / den


def _field_value(v: FeatureVector, name: str) -> float:
    if name == "x":
        return v.x[0]
    if name == "y":
        return v.x[1]
    return getattr(v, name)


def _compile(node: ast.AST, source: str) -> Callable[[FeatureVector], float]:
    if isinstance(node, ast.Expression):
        return _compile(node.body, source)
    if isinstance(node, ast.Constant):
        if not isinstance(node.value, (int, float)):
            raise RegistryError(f"non-numeric constant in {source!r}")
        value = float(node.value)
        return lambda v: value
    if isinstance(node, ast.Name):
        if node.id not in _FIELDS:
            raise RegistryError(f"unknown field {node.id!r} in {source!r}")
        name = node.id
        return lambda v: _field_value(v, name)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.UAdd, ast.USub)):
        inner = _compile(node.operand, source)
        if isinstance(node.op, ast.USub):
            return lambda v: -inner(v)
        return inner
    if isinstance(node, ast.BinOp):
        left = _compile(node.left, source)
        right = _compile(node.right, source)
        if isinstance(node.op, ast.Div):
            return lambda v: _safe_div(left(v), right(v))
        op = _BINOPS.get(type(node.op))
        if op is None:
            raise RegistryError(f"operator not allowed in {source!r}")
        return lambda v: op(left(v), right(v))
    if isinstance(node, ast.Call):
        if not isinstance(node.func, ast.Name) or node.func.id != "recip" or len(node.args) != 1 or node.keywords:
            raise RegistryError(f"only recip(expr) calls are allowed in {source!r}")
        inner = _compile(node.args[0], source)
        return lambda v: _safe_div(1.0, inner(v))
    raise RegistryError(f"unsupported syntax in {source!r}")


def compile_expression(source: str) -> Callable[[FeatureVector], float]:
    """Compile a registry expression into an evaluator over feature vectors."""
    try:
        tree = ast.parse(source, mode="eval")
    except SyntaxError as exc:
        raise RegistryError(f"cannot parse expression {source!r}: {exc}") from exc
    return _compile(tree, source)


@dataclass(frozen=True)
class ItemEquation:
    item_id: int
    factor: str
    description: str
    expression: str
    evaluator: Callable[[FeatureVector], float]

    def __post_init__(self):
        if self.factor not in FACTORS:
            raise RegistryError(f"item {self.item_id}: factor must be one of {FACTORS}")


def make_item(item_id: int, factor: str, expression: str, description: str = "") -> ItemEquation:
    return ItemEquation(
        item_id=item_id,
        factor=factor,
        description=description,
        expression=expression,
        evaluator=compile_expression(expression),
    )


def default_registry() -> list[ItemEquation]:
    """Built-in five-item registry, one surrogate equation per factor.

    Fast, straight walking reads as goal-directed; direction changes as
    openness; group engagement as extraversion; motion similarity as
    agreeableness; isolation plus low collectivity as neuroticism.
    """
    return [
        make_item(1, "C", "s + recip(alpha)", "clear goals, works toward them in an orderly way"),
        make_item(2, "O", "alpha", "changes objective/direction while walking"),
        make_item(3, "E", "socialization", "energy directed toward the social group"),
        make_item(4, "A", "collectivity", "moves in accordance with the people around"),
        make_item(5, "N", "(isolation + (1 - collectivity)) / 2", "stays isolated and out of step with the crowd"),
    ]


def load_registry(path) -> list[ItemEquation]:
    """Load and validate a JSON registry file."""
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise RegistryError(f"cannot read registry {path}: {exc}") from exc
    if not isinstance(doc, list) or not doc:
        raise RegistryError("registry must be a non-empty JSON list")
    items = []
    seen = set()
    for entry in doc:
        if not isinstance(entry, dict):
            raise RegistryError("registry entries must be objects")
        try:
            item_id = int(entry["item_id"])
            factor = str(entry["factor"])
            expression = str(entry["expression"])
        except (KeyError, TypeError, ValueError) as exc:
            raise RegistryError(f"registry entry missing item_id/factor/expression: {entry!r}") from exc
        if item_id in seen:
            raise RegistryError(f"duplicate item_id {item_id}")
        seen.add(item_id)
        items.append(make_item(item_id, factor, expression, str(entry.get("description", ""))))
    return items


def registry_ledger(registry: list[ItemEquation]) -> list[dict]:
    """Registry as plain data for embedding in output reports."""
    return [
        {
            "item_id": it.item_id,
            "factor": it.factor,
            "expression": it.expression,
            "description": it.description,
        }
        for it in sorted(registry, key=lambda it: it.item_id)
    ]


def evaluate_item(eq: ItemEquation, v: FeatureVector) -> float:
    """Raw (un-normalized) item score; guaranteed finite by the DSL guards."""
    raw = float(eq.evaluator(v))
    if not math.isfinite(raw):
        raise RegistryError(f"item {eq.item_id} produced a non-finite score")
    return raw
