"""Multiway decision tree over discrete attributes, grown by gain ratio.

Stands in for C4.5/J48 in the evaluation harness. There is no pruning; the
tree is held fixed across discretizers, so only their effect is compared.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

from .dataset import Dataset
from .errors import ContractError, ParameterError


@dataclass
class Node:
    prediction: int  # majority class here; also the fallback for unseen values
    attribute: int | None = None
    children: dict = field(default_factory=dict)

    @property
    def is_leaf(self):
        return self.attribute is None


@dataclass
class TreeModel:
    root: Node
    arity: int
    class_index: int

    def depth(self, node=None):
        node = node or self.root
        if node.is_leaf:
            return 0
        return 1 + max(self.depth(c) for c in node.children.values())


def _entropy(counter):
    total = sum(counter.values())
    return -sum(c / total * math.log2(c / total) for c in counter.values() if c)


def _majority(counter):
    return min(counter, key=lambda c: (-counter[c], c))


def gain_ratio(rows, attr, class_index):
    """Gain ratio of splitting ``rows`` on ``attr``; ``None`` when the split is trivial."""
    classes = Counter(r[class_index] for r in rows)
    parts = {}
    for r in rows:
        parts.setdefault(r[attr], Counter())[r[class_index]] += 1
    if len(parts) < 2:
        return None
    n = len(rows)
    cond = sum(sum(p.values()) / n * _entropy(p) for p in parts.values())
    split_info = _entropy(Counter({v: sum(p.values()) for v, p in parts.items()}))
    return (_entropy(classes) - cond) / split_info


def _grow(rows, attributes, class_index):
    counts = Counter(r[class_index] for r in rows)
    node = Node(_majority(counts))
    if len(counts) == 1 or not attributes or len(rows) < 2:
        return node
    best, best_score = None, None
    for a in attributes:
        score = gain_ratio(rows, a, class_index)
        if score is not None and (best_score is None or score > best_score):
            best, best_score = a, score
    if best is None:
        return node
    node.attribute = best
    parts = {}
    for r in rows:
        parts.setdefault(r[best], []).append(r)
    rest = [a for a in attributes if a != best]
    for value in sorted(parts, key=lambda v: (v is None, v)):
        node.children[value] = _grow(parts[value], rest, class_index)
    return node


def train_tree(train: Dataset) -> TreeModel:
    attrs = []
    for i, a in enumerate(train.attributes):
        if i == train.class_index:
            continue
        if a.is_continuous:
            raise ContractError(f"attribute {a.name!r} is continuous; discretize it first")
        attrs.append(i)
    if not train.rows:
        raise ParameterError("cannot train on an empty dataset")
    return TreeModel(_grow(list(train.rows), attrs, train.class_index),
                     len(train.attributes), train.class_index)


def predict(model: TreeModel, instance) -> int:
    if len(instance) != model.arity:
        raise ContractError(f"instance has {len(instance)} cells, model expects {model.arity}")
    node = model.root
    while not node.is_leaf:
        child = node.children.get(instance[node.attribute])
        if child is None:
            return node.prediction
        node = child
    return node.prediction


def accuracy(model: TreeModel, test: Dataset) -> float:
    """Percentage of test rows whose class is predicted correctly."""
    if not test.rows:
        raise ParameterError("accuracy needs at least one test row")
    correct = sum(predict(model, r) == r[model.class_index] for r in test.rows)
    return 100.0 * correct / len(test.rows)
