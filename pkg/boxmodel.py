"""Двудольные боксы с двоичными входами и выходами.

Хранение: массив p формы (2, 2, 2, 2) с индексами (x, y, a, b); плоский
порядок 8x + 4y + 2a + b совпадает с C-порядком numpy.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linprog

from config import CLAMP_TOL, FACET_TOL, LP_RESIDUAL_TOL, NORM_TOL, NS_TOL
from errors import DomainError, NumericError, ValidationError

logger = logging.getLogger(__name__)

# Детерминированные стратегии: индекс -> (f(0), f(1))
# 0 - константа 0, 1 - константа 1, 2 - тождество, 3 - отрицание
STRATEGIES = ((0, 0), (1, 1), (0, 1), (1, 0))

# (x*, y*) для выражений CHSH: индекс 2x* + y*
FACETS = ((0, 0), (0, 1), (1, 0), (1, 1))


@dataclass(frozen=True, eq=False)
class BehaviorBox:
    p: np.ndarray

    def __post_init__(self):
        try:
            arr = np.array(self.p, dtype=float)
        except (TypeError, ValueError) as e:
            raise ValidationError(f"box entries must be numbers: {e}")
        if arr.size != 16:
            raise ValidationError(f"box needs 16 probabilities, got {arr.size}")
        arr = arr.reshape(2, 2, 2, 2)
        if not np.all(np.isfinite(arr)):
            raise ValidationError("box contains non-finite entries")
        if arr.min() < -CLAMP_TOL or arr.max() > 1 + CLAMP_TOL:
            raise ValidationError(
                f"box entries must lie in [0, 1], got range [{float(arr.min())}, {float(arr.max())}]"
            )
        # + 0.0 убирает отрицательные нули после clip
        arr = np.clip(arr, 0.0, 1.0) + 0.0
        sums = arr.sum(axis=(2, 3))
        if np.max(np.abs(sums - 1.0)) > NORM_TOL:
            raise ValidationError(f"box is not normalized per input pair: {sums.ravel().tolist()}")
        arr.setflags(write=False)
        object.__setattr__(self, "p", arr)

    @classmethod
    def from_flat(cls, values: Sequence[float]) -> "BehaviorBox":
        return cls(np.asarray(values, dtype=float))

    def flat(self) -> List[float]:
        return [float(v) for v in self.p.ravel()]

    def to_dict(self) -> dict:
        return {"p": self.flat()}

    @classmethod
    def from_dict(cls, data: dict) -> "BehaviorBox":
        if not isinstance(data, dict) or "p" not in data:
            raise ValidationError('box JSON must be an object with key "p"')
        values = data["p"]
        if not isinstance(values, list) or len(values) != 16:
            raise ValidationError('"p" must be an array of 16 numbers')
        # строки и bool не считаются числами, даже если float() их примет
        if any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in values):
            raise ValidationError('"p" entries must be JSON numbers')
        return cls.from_flat(values)

    def allclose(self, other: "BehaviorBox", tol: float = 1e-9) -> bool:
        return bool(np.max(np.abs(self.p - other.p)) <= tol)


@dataclass(frozen=True, eq=False)
class CorrelatorTable:
    E: np.ndarray  # (2, 2), индексы (x, y)

    def as_list(self) -> List[float]:
        return [float(v) for v in self.E.ravel()]


@dataclass(frozen=True)
class LocalityReport:
    is_local: bool
    method: str
    max_facet_value: float
    violated_facet: Optional[int] = None
    lp_weights: Optional[Tuple[float, ...]] = None

    def to_dict(self) -> dict:
        return {
            "is_local": self.is_local,
            "method": self.method,
            "max_facet_value": self.max_facet_value,
            "violated_facet": self.violated_facet,
            "lp_weights": list(self.lp_weights) if self.lp_weights is not None else None,
        }


@dataclass(frozen=True)
class NoSignalingReport:
    no_signaling: bool
    alice_residuals: Tuple[float, ...]  # по (x, a)
    bob_residuals: Tuple[float, ...]  # по (y, b)

    def __bool__(self):
        return self.no_signaling

    def to_dict(self) -> dict:
        return {
            "no_signaling": self.no_signaling,
            "alice_residuals": list(self.alice_residuals),
            "bob_residuals": list(self.bob_residuals),
        }


def correlators(box: BehaviorBox) -> CorrelatorTable:
    p = box.p
    E = p[:, :, 0, 0] + p[:, :, 1, 1] - p[:, :, 0, 1] - p[:, :, 1, 0]
    E.setflags(write=False)
    return CorrelatorTable(E)


def chsh_canonical(box: BehaviorBox) -> float:
    E = correlators(box).E
    return float(abs(E[0, 0] + E[0, 1] + E[1, 0] - E[1, 1]))


def chsh_max(box: BehaviorBox) -> Tuple[float, List[int]]:
    """Максимум по четырём переразметкам входов: |sum E - 2 E(x*, y*)|."""
    E = correlators(box).E
    total = E.sum()
    values = [abs(total - 2 * E[x, y]) for x, y in FACETS]
    best = max(values)
    # ничьи сообщаются все, с точностью до округления
    return float(best), [k for k, v in enumerate(values) if best - v <= 1e-12]


def check_no_signaling(box: BehaviorBox, tol: float = NS_TOL) -> NoSignalingReport:
    p = box.p
    alice = p.sum(axis=3)  # (x, y, a)
    bob = p.sum(axis=2)  # (x, y, b)
    alice_res = np.abs(alice[:, 0, :] - alice[:, 1, :]).ravel()
    bob_res = np.abs(bob[0, :, :] - bob[1, :, :]).ravel()
    ok = bool(max(alice_res.max(), bob_res.max()) <= tol)
    return NoSignalingReport(
        ok,
        tuple(float(v) for v in alice_res),
        tuple(float(v) for v in bob_res),
    )


def _check_strategy(index: int):
    if index not in range(4):
        raise ValidationError(f"strategy index must be in 0..3, got {index}")


def deterministic_box(fA: int, fB: int) -> BehaviorBox:
    _check_strategy(fA)
    _check_strategy(fB)
    p = np.zeros((2, 2, 2, 2))
    for x in range(2):
        for y in range(2):
            p[x, y, STRATEGIES[fA][x], STRATEGIES[fB][y]] = 1.0
    return BehaviorBox(p)


def pr_box_variant(r: int, s: int, t: int) -> BehaviorBox:
    """PR-бокс с a xor b = xy xor rx xor sy xor t."""
    for bit in (r, s, t):
        if bit not in (0, 1):
            raise ValidationError(f"PR variant bits must be 0 or 1, got {(r, s, t)}")
    p = np.zeros((2, 2, 2, 2))
    for x in range(2):
        for y in range(2):
            parity = (x * y) ^ (r * x) ^ (s * y) ^ t
            for a in range(2):
                p[x, y, a, a ^ parity] = 0.5
    return BehaviorBox(p)


def pr_box() -> BehaviorBox:
    return pr_box_variant(0, 0, 0)


def uniform_box() -> BehaviorBox:
    return BehaviorBox(np.full((2, 2, 2, 2), 0.25))


def box_from_correlators(E) -> BehaviorBox:
    """Бокс с равномерными маргиналами и заданными корреляторами."""
    E = np.asarray(E, dtype=float).reshape(2, 2)
    if np.any(np.abs(E) > 1 + CLAMP_TOL):
        raise ValidationError(f"correlators must lie in [-1, 1], got {E.ravel().tolist()}")
    sign = np.array([[1.0, -1.0], [-1.0, 1.0]])  # (-1)^(a xor b)
    p = (1.0 + sign[None, None, :, :] * E[:, :, None, None]) / 4.0
    return BehaviorBox(p)


def tsirelson_box() -> BehaviorBox:
    s = 1 / np.sqrt(2)
    return box_from_correlators([[s, s], [s, -s]])


def convex_mix(b1: BehaviorBox, b2: BehaviorBox, lam: float) -> BehaviorBox:
    if not 0.0 <= lam <= 1.0:
        raise ValidationError(f"mixing weight must lie in [0, 1], got {lam}")
    return BehaviorBox(lam * b1.p + (1 - lam) * b2.p)


def isotropic_box(v: float) -> BehaviorBox:
    if not 0.0 <= v <= 1.0:
        raise ValidationError(f"visibility must lie in [0, 1], got {v}")
    return convex_mix(pr_box(), uniform_box(), v)


def is_local_facets(box: BehaviorBox) -> LocalityReport:
    # теорема Файна: для no-signaling боксов 2-2-2-2 хватает 8 граней CHSH
    if not check_no_signaling(box):
        raise DomainError("facet test applies only to no-signaling boxes")
    value, maximizers = chsh_max(box)
    is_local = value <= 2 + FACET_TOL
    return LocalityReport(
        is_local=is_local,
        method="facets",
        max_facet_value=value,
        violated_facet=None if is_local else maximizers[0],
    )


@lru_cache(maxsize=1)
def vertex_matrix() -> np.ndarray:
    """Столбцы - 16 детерминированных боксов, индекс стратегии 4*fA + fB."""
    cols = [deterministic_box(fA, fB).p.ravel() for fA in range(4) for fB in range(4)]
    m = np.stack(cols, axis=1)
    m.setflags(write=False)
    return m


def is_local_lp(box: BehaviorBox) -> LocalityReport:
    """Ближайшая смесь детерминированных боксов в max-норме.

    Переменные: 16 весов и невязка delta; минимизируется delta при
    |V w - p| <= delta, sum w = 1, w >= 0. Бокс локален, если delta не больше
    LP_RESIDUAL_TOL, что согласовано с допуском FACET_TOL граничного теста.
    """
    vertices = vertex_matrix()
    target = box.p.ravel()
    ones = np.ones((16, 1))
    A_ub = np.block([[vertices, -ones], [-vertices, -ones]])
    b_ub = np.concatenate([target, -target])
    A_eq = np.append(np.ones(16), 0.0)[None, :]
    c = np.append(np.zeros(16), 1.0)
    res = linprog(
        c,
        A_ub=A_ub,
        b_ub=b_ub,
        A_eq=A_eq,
        b_eq=[1.0],
        bounds=[(0, None)] * 17,
        method="highs",
        options={"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10},
    )
    logger.debug(f"linprog status={res.status}: {res.message}")
    if res.status != 0:
        raise NumericError(f"locality LP failed: {res.message}")

    value = chsh_max(box)[0]
    weights = np.clip(res.x[:16], 0.0, None)
    weights = weights / weights.sum()
    # невязка пересчитывается по настоящей выпуклой комбинации
    residual = float(np.max(np.abs(vertices @ weights - target)))
    if residual > LP_RESIDUAL_TOL:
        logger.debug(f"nearest local mixture is {residual:.3e} away")
        return LocalityReport(is_local=False, method="lp", max_facet_value=value)
    return LocalityReport(
        is_local=True,
        method="lp",
        max_facet_value=value,
        lp_weights=tuple(float(w) for w in weights),
    )
