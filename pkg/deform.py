"""Деформация суммы моделей и уравнение границы Z(2, X) = 4.

Z(Y, X) = int_0^1 omega(a, T) Y^a X^(1-a) da,  omega(a, T) = exp(T S(a)),
S - бинарная энтропия с натуральным логарифмом.
"""
import asyncio
import logging
import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import entr, expit

import config
from errors import BracketError, DomainError, NumericError, ValidationError
from semiring import idempotent_integral

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DeformationParams:
    T: float = config.DEFAULT_T
    quad_order: int = config.QUAD_ORDER
    root_tol: float = config.ROOT_TOL
    target: float = config.DEFAULT_TARGET
    Y: float = config.DEFAULT_Y
    endpoint_weight: float = 0.0  # omega(0, T) = omega(1, T)
    max_iter: int = config.MAX_ITER

    def __post_init__(self):
        if not self.T > 0:
            raise ValidationError(f"T must be positive, got {self.T}")
        if self.quad_order < 8:
            raise ValidationError(f"quadrature order must be at least 8, got {self.quad_order}")
        if not self.root_tol > 0:
            raise ValidationError(f"root tolerance must be positive, got {self.root_tol}")
        if not self.target > 0:
            raise ValidationError(f"target must be positive, got {self.target}")
        _check_chsh_limit("Y", self.Y)


@dataclass(frozen=True)
class CombineResult:
    Z: float
    abs_error_estimate: float
    n_evals: int

    def to_dict(self) -> dict:
        return {"Z": self.Z, "abs_error_estimate": self.abs_error_estimate, "n_evals": self.n_evals}


@dataclass(frozen=True)
class SolveResult:
    x_max: float
    residual: float
    iterations: int
    bracket: Tuple[float, float]
    gap_to_tsirelson: float

    def to_dict(self) -> dict:
        return {
            "x_max": self.x_max,
            "residual": self.residual,
            "iterations": self.iterations,
            "bracket": list(self.bracket),
            "gap_to_tsirelson": self.gap_to_tsirelson,
        }


@dataclass(frozen=True)
class SweepRow:
    T: float
    x_max: Optional[float] = None
    residual: Optional[float] = None
    gap: Optional[float] = None
    error: Optional[str] = None


def _check_chsh_limit(name: str, value: float):
    if not 2.0 <= value <= 4.0:
        raise ValidationError(f"{name} must lie in [2, 4], got {value}")


def _check_alpha(alpha: np.ndarray, closed: bool = True):
    lo_ok = alpha >= 0 if closed else alpha > 0
    hi_ok = alpha <= 1 if closed else alpha < 1
    if not np.all(lo_ok & hi_ok):
        interval = "[0, 1]" if closed else "(0, 1)"
        raise DomainError(f"alpha must lie in {interval}")


def binary_entropy(alpha):
    alpha = np.asarray(alpha, dtype=float)
    _check_alpha(alpha)
    # entr(0) = 0 даёт непрерывное продолжение на концах
    S = entr(alpha) + entr(1.0 - alpha)
    return float(S) if S.ndim == 0 else S


def omega(alpha, T: float, endpoint_weight: float = 0.0):
    if not T > 0:
        raise DomainError(f"T must be positive, got {T}")
    alpha = np.asarray(alpha, dtype=float)
    S = np.asarray(binary_entropy(alpha))
    interior = (alpha > 0) & (alpha < 1)
    # переполнение даёт inf, о нём сообщает вызывающий код
    with np.errstate(over="ignore"):
        w = np.where(interior, np.exp(T * S), endpoint_weight)
    return float(w) if w.ndim == 0 else w


def combine_integrand(alpha, X: float, Y: float, T: float, endpoint_weight: float = 0.0):
    _check_chsh_limit("X", X)
    _check_chsh_limit("Y", Y)
    alpha = np.asarray(alpha, dtype=float)
    value = omega(alpha, T, endpoint_weight) * np.exp(alpha * math.log(Y) + (1 - alpha) * math.log(X))
    return float(value) if np.ndim(value) == 0 else value


@lru_cache(maxsize=16)
def _clustered_nodes(order: int) -> Tuple[np.ndarray, np.ndarray]:
    """Узлы Гаусса-Лежандра на (0, 1) после замены a = 3t^2 - 2t^3.

    Якобиан 6t(1-t) гасит особенность a log a на концах; узлы остаются открытыми.
    """
    t, w = np.polynomial.legendre.leggauss(order)
    t = 0.5 * (t + 1.0)
    w = 0.5 * w
    alpha = t * t * (3.0 - 2.0 * t)
    weights = w * 6.0 * t * (1.0 - t)
    alpha.setflags(write=False)
    weights.setflags(write=False)
    return alpha, weights


def _quadrature(Y: float, X: float, T: float, order: int, endpoint_weight: float) -> float:
    alpha, weights = _clustered_nodes(order)
    value = float(np.dot(weights, combine_integrand(alpha, X, Y, T, endpoint_weight)))
    if not math.isfinite(value):
        raise NumericError(f"combination integral is not finite for Y={Y}, X={X}, T={T}")
    return value


def combined_chsh(Y: float, X: float, params: DeformationParams = DeformationParams()) -> CombineResult:
    _check_chsh_limit("X", X)
    _check_chsh_limit("Y", Y)
    order = params.quad_order
    Z = _quadrature(Y, X, params.T, order, params.endpoint_weight)
    n_evals = order
    # не более двух удвоений порядка
    for _ in range(2):
        refined = _quadrature(Y, X, params.T, 2 * order, params.endpoint_weight)
        n_evals += 2 * order
        error = abs(Z - refined)
        if error <= config.QUAD_CONV_TOL:
            return CombineResult(Z=Z, abs_error_estimate=error, n_evals=n_evals)
        logger.debug(f"quadrature order {order} not converged (error {error:.3e}), doubling")
        Z, order = refined, 2 * order
    raise NumericError(f"quadrature did not converge for Y={Y}, X={X}, T={params.T}: error {error:.3e}")


def midpoint_chsh(Y: float, X: float, T: float = 1.0, n: int = 10_000_000, chunk: int = 1_000_000) -> float:
    """Независимый оракул: правило средних точек с n узлами (по блокам)."""
    h = 1.0 / n
    total = 0.0
    for start in range(0, n, chunk):
        k = np.arange(start, min(start + chunk, n))
        total += float(np.sum(combine_integrand((k + 0.5) * h, X, Y, T)))
    return total * h


def tsirelson_gap(x: float) -> float:
    if not x > 0:
        raise ValidationError(f"x must be positive, got {x}")
    return (config.TSIRELSON - x) / config.TSIRELSON


def solve_xmax(params: DeformationParams = DeformationParams()) -> SolveResult:
    """Бисекция по X на [Y, 4]; Z(Y, X) строго возрастает по X."""
    Y, target = params.Y, params.target

    def residual(x: float) -> float:
        return combined_chsh(Y, x, params).Z - target

    lo, hi = Y, 4.0
    f_lo, f_hi = residual(lo), residual(hi)
    if not f_lo < 0 <= f_hi:
        raise BracketError(
            f"target {target} outside [Z({Y:g},{Y:g}), Z({Y:g},4)] = [{f_lo + target:.12g}, {f_hi + target:.12g}] for T={params.T}"
        )
    if f_hi == 0:
        return SolveResult(hi, 0.0, 0, (lo, hi), tsirelson_gap(hi))

    for iteration in range(1, params.max_iter + 1):
        mid = 0.5 * (lo + hi)
        f_mid = residual(mid)
        if abs(f_mid) <= params.root_tol:
            logger.debug(f"bisection converged after {iteration} iterations at X={mid!r}")
            return SolveResult(mid, f_mid, iteration, (lo, hi), tsirelson_gap(mid))
        if f_mid < 0:
            lo = mid
        else:
            hi = mid
    raise NumericError(f"bisection did not reach residual {params.root_tol} in {params.max_iter} iterations")


def _sweep_row(T: float, params: DeformationParams) -> SweepRow:
    try:
        result = solve_xmax(replace(params, T=T))
    except (NumericError, ValidationError) as e:
        logger.warning(f"sweep row T={T} failed: {e}")
        return SweepRow(T=T, error=str(e))
    return SweepRow(T=T, x_max=result.x_max, residual=result.residual, gap=result.gap_to_tsirelson)


async def _sweep(T_values: Sequence[float], params: DeformationParams, workers: int) -> List[SweepRow]:
    semaphore = asyncio.Semaphore(max(1, workers))

    async def run(T):
        async with semaphore:
            return await asyncio.to_thread(_sweep_row, T, params)

    # gather сохраняет порядок входа
    return list(await asyncio.gather(*(run(T) for T in T_values)))


def sweep_T(
    T_values: Sequence[float],
    params: DeformationParams = DeformationParams(),
    workers: int = config.SWEEP_WORKERS,
) -> List[SweepRow]:
    return asyncio.run(_sweep(list(T_values), params, workers))


def deformed_sum(Y: float, X: float, T: float) -> float:
    """sup_a omega(a, T) Y^a X^(1-a) = (Y^(1/T) + X^(1/T))^T; при T -> 0 стремится к max(X, Y)."""
    if not T > 0:
        raise DomainError(f"T must be positive, got {T}")
    _check_chsh_limit("X", X)
    _check_chsh_limit("Y", Y)
    # логарифмическая форма не переполняется при малых T
    big, small = max(X, Y), min(X, Y)
    try:
        return big * math.exp(T * math.log1p((small / big) ** (1.0 / T)))
    except OverflowError:
        raise NumericError(f"deformed sum overflows for Y={Y}, X={X}, T={T}")


def deformed_argmax(Y: float, X: float, T: float) -> float:
    return float(expit((math.log(Y) - math.log(X)) / T))


def idempotent_combined_chsh(Y: float, X: float, T: float = 1.0, grid: int = config.IDEM_GRID) -> float:
    if not T > 0:
        raise DomainError(f"T must be positive, got {T}")
    _check_chsh_limit("X", X)
    _check_chsh_limit("Y", Y)
    return idempotent_integral(lambda alpha: combine_integrand(alpha, X, Y, T), grid)
