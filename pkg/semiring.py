"""Идемпотентный слой: метки моделей R_X, действие B = {0, 1}, полуполе R+max.

R+max берётся в форме (max, *) на [0, inf); через логарифм оно изоморфно
max-plus, но этот изоморфизм наружу не выставляется.
"""
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from config import LABEL_TOL
from errors import DomainError, NumericError, UndefinedProductError, ValidationError


@dataclass(frozen=True)
class ModelLabel:
    value: Optional[float] = None  # None - аддитивный ноль

    def __post_init__(self):
        if self.value is None:
            return
        if not 2.0 <= self.value <= 4.0:
            raise ValidationError(f"CHSH limit must lie in [2, 4], got {self.value}")
        object.__setattr__(self, "value", float(self.value))

    @classmethod
    def bottom(cls) -> "ModelLabel":
        return cls(None)

    @property
    def is_bottom(self) -> bool:
        return self.value is None

    @property
    def is_local(self) -> bool:
        return self.value is not None and abs(self.value - 2.0) <= LABEL_TOL

    def to_dict(self) -> dict:
        return {"bottom": True} if self.is_bottom else {"X": self.value}


R2 = ModelLabel(2.0)
BOTTOM = ModelLabel.bottom()


def label_add(a: ModelLabel, b: ModelLabel) -> ModelLabel:
    if a.is_bottom:
        return b
    if b.is_bottom:
        return a
    return a if a.value >= b.value else b


def _check_boolean(lam) -> int:
    if isinstance(lam, bool):
        return int(lam)
    if lam in (0, 1) and not isinstance(lam, float):
        return int(lam)
    raise ValidationError(f"scalar must be 0 or 1, got {lam!r}")


def bool_add(l1, l2) -> int:
    # в B: 1 + 1 = 1
    return max(_check_boolean(l1), _check_boolean(l2))


def scalar_act(lam, a: ModelLabel) -> ModelLabel:
    return a if _check_boolean(lam) == 1 else BOTTOM


def label_mul(a: ModelLabel, b: ModelLabel) -> ModelLabel:
    if a.is_bottom or b.is_bottom:
        return BOTTOM
    if a.is_local or b.is_local:
        return R2
    if abs(a.value - b.value) <= LABEL_TOL:
        return a
    raise UndefinedProductError(
        f"product of R_{a.value:g} and R_{b.value:g} is undefined for distinct non-local labels"
    )


@dataclass(frozen=True)
class LiftValue:
    v: float

    def __post_init__(self):
        if not (math.isfinite(self.v) and self.v > 0):
            raise ValidationError(f"lift value must be positive, got {self.v}")


def lift(a: ModelLabel) -> LiftValue:
    if a.is_bottom:
        raise DomainError("the additive zero has no multiplicative lift")
    return LiftValue(a.value)


def power(l: LiftValue, alpha: float) -> LiftValue:
    # выход за диапазон float - численная ошибка, а не ошибка значения
    try:
        v = l.v ** alpha
    except OverflowError:
        raise NumericError(f"{l.v} ** {alpha} overflows")
    if v == 0.0:
        raise NumericError(f"{l.v} ** {alpha} underflows to zero")
    return LiftValue(v)


def lift_mul(l1: LiftValue, l2: LiftValue) -> LiftValue:
    v = l1.v * l2.v
    if not math.isfinite(v) or v == 0.0:
        raise NumericError(f"product {l1.v} * {l2.v} is out of float range")
    return LiftValue(v)


@dataclass(frozen=True)
class TropicalValue:
    t: float

    def __post_init__(self):
        if not (math.isfinite(self.t) and self.t >= 0):
            raise ValidationError(f"tropical value must be a finite nonnegative real, got {self.t}")


TROP_ZERO = TropicalValue(0.0)
TROP_ONE = TropicalValue(1.0)


def trop_add(a: TropicalValue, b: TropicalValue) -> TropicalValue:
    return a if a.t >= b.t else b


def trop_mul(a: TropicalValue, b: TropicalValue) -> TropicalValue:
    return TropicalValue(a.t * b.t)


def trop_inv(a: TropicalValue) -> TropicalValue:
    if a.t == 0:
        raise DomainError("tropical zero has no inverse")
    return TropicalValue(1.0 / a.t)


def from_boolean(lam) -> TropicalValue:
    return TROP_ONE if _check_boolean(lam) == 1 else TROP_ZERO


def open_grid(grid_size: int) -> np.ndarray:
    """Равномерная открытая сетка (0, 1): k / (n + 1), k = 1..n."""
    if grid_size < 2:
        raise ValidationError(f"grid size must be at least 2, got {grid_size}")
    return np.arange(1, grid_size + 1) / (grid_size + 1)


def idempotent_integral(f: Callable[[np.ndarray], np.ndarray], grid_size: int) -> float:
    """Идемпотентный интеграл: sup f по открытой сетке.

    f вызывается один раз с массивом узлов и должна вернуть массив той же формы.
    """
    alphas = open_grid(grid_size)
    values = np.broadcast_to(np.asarray(f(alphas), dtype=float), alphas.shape)
    if not np.all(np.isfinite(values)):
        raise NumericError("integrand produced non-finite values on the grid")
    return float(values.max())
