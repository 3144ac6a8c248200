import json
import math
from typing import Iterable, List, Sequence

import numpy as np

from boxmodel import BehaviorBox, box_from_correlators, deterministic_box, pr_box_variant
from errors import ValidationError


def no_signaling_vertices() -> List[BehaviorBox]:
    # 16 локальных детерминированных + 8 PR-вариантов
    local = [deterministic_box(fA, fB) for fA in range(4) for fB in range(4)]
    nonlocal_ = [pr_box_variant(r, s, t) for r in range(2) for s in range(2) for t in range(2)]
    return local + nonlocal_


def random_no_signaling_box(rng: np.random.Generator, kind: str = "correlators") -> BehaviorBox:
    if kind == "correlators":
        return box_from_correlators(rng.uniform(-1.0, 1.0, size=(2, 2)))
    if kind == "vertices":
        vertices = no_signaling_vertices()
        weights = rng.dirichlet(np.ones(len(vertices)))
        return BehaviorBox(sum(w * v.p for w, v in zip(weights, vertices)))
    raise ValidationError(f"unknown random box kind: {kind}")


def random_no_signaling_boxes(seed: int, count: int, kind: str = "correlators") -> List[BehaviorBox]:
    rng = np.random.default_rng(seed)
    return [random_no_signaling_box(rng, kind) for _ in range(count)]


def _encode(value) -> str:
    if isinstance(value, bool) or value is None:
        return json.dumps(value)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            raise ValidationError(f"cannot serialize non-finite number {value}")
        return format(value + 0.0, ".17g")
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, dict):
        items = sorted(value.items())
        return "{" + ",".join(f"{json.dumps(str(k))}:{_encode(v)}" for k, v in items) + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ",".join(_encode(v) for v in value) + "]"
    raise ValidationError(f"cannot serialize {type(value).__name__}")


def canonical_json(value) -> str:
    """Ключи отсортированы, 17 значащих цифр, без лишних пробелов."""
    return _encode(value)


def format_float(value: float, digits: int = 12) -> str:
    return format(float(value), f".{digits}g")


def parse_t_list(text: str) -> List[float]:
    """'0.9,1,1.1' или диапазон 'start:stop:count' (концы включены)."""
    text = text.strip()
    try:
        if ":" in text:
            start, stop, count = text.split(":")
            values = np.linspace(float(start), float(stop), int(count)).tolist()
        else:
            values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError as e:
        raise ValidationError(f"cannot parse T list {text!r}: {e}")
    if not values:
        raise ValidationError("T list is empty")
    return values


def to_csv(header: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    lines = [",".join(header)]
    lines += [",".join(row) for row in rows]
    return "\n".join(lines) + "\n"
