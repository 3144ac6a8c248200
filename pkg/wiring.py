"""Последовательная проводка боксов: выход первого бокса служит входом второго.

Проводки с памятью о начальном входе (дистилляция) сюда не входят.
"""
import logging
from dataclasses import dataclass
from functools import reduce
from typing import List, Sequence, Tuple

import numpy as np

from boxmodel import BehaviorBox, chsh_max, deterministic_box
from config import BOX_EQ_TOL, FACET_TOL
from errors import ValidationError

logger = logging.getLogger(__name__)

POSITIONS = ("first", "second")


@dataclass(frozen=True)
class WiringChain:
    stages: Tuple[BehaviorBox, ...]

    def __post_init__(self):
        object.__setattr__(self, "stages", tuple(self.stages))

    @classmethod
    def from_dict(cls, data: dict) -> "WiringChain":
        if not isinstance(data, dict) or not isinstance(data.get("stages"), list):
            raise ValidationError('chain JSON must be an object with a "stages" array')
        return cls(tuple(BehaviorBox.from_dict(stage) for stage in data["stages"]))

    def to_dict(self) -> dict:
        return {"stages": [stage.to_dict() for stage in self.stages]}


@dataclass(frozen=True)
class AuditEntry:
    strategy: Tuple[int, int]
    chsh_max: float
    counterexample: bool

    def to_dict(self) -> dict:
        return {
            "strategy": list(self.strategy),
            "chsh_max": self.chsh_max,
            "counterexample": self.counterexample,
        }


@dataclass(frozen=True)
class AbsorptionReport:
    position: str
    results: Tuple[AuditEntry, ...]

    @property
    def counterexamples(self) -> Tuple[AuditEntry, ...]:
        return tuple(r for r in self.results if r.counterexample)

    def to_list(self) -> List[dict]:
        return [r.to_dict() for r in self.results]


def sequential_compose(b1: BehaviorBox, b2: BehaviorBox) -> BehaviorBox:
    # p(x,y,a,b) = sum_{a',b'} p1(x,y,a',b') p2(a',b',a,b)
    return BehaviorBox(np.einsum("xyij,ijab->xyab", b1.p, b2.p))


def compose_chain(chain: WiringChain) -> BehaviorBox:
    if not chain.stages:
        raise ValidationError("wiring chain needs at least one stage")
    return reduce(sequential_compose, chain.stages)


def absorption_audit(box: BehaviorBox, position: str) -> AbsorptionReport:
    """Вставляет каждую из 16 локальных стратегий до (first) или после (second) бокса."""
    if position not in POSITIONS:
        raise ValidationError(f"position must be one of {POSITIONS}, got {position!r}")
    results = []
    for fA in range(4):
        for fB in range(4):
            local = deterministic_box(fA, fB)
            if position == "first":
                composed = sequential_compose(local, box)
            else:
                composed = sequential_compose(box, local)
            value = chsh_max(composed)[0]
            results.append(AuditEntry((fA, fB), value, value > 2 + FACET_TOL))
    report = AbsorptionReport(position, tuple(results))
    logger.debug(f"absorption audit ({position}): {len(report.counterexamples)} counterexamples")
    return report


def cancellativity_probe(bX: BehaviorBox, bY: BehaviorBox, bZ: BehaviorBox) -> bool:
    """False, если bX*bY = bX*bZ при bY != bZ (сокращение нарушено на этой тройке)."""
    same_products = sequential_compose(bX, bY).allclose(sequential_compose(bX, bZ), BOX_EQ_TOL)
    same_factors = bY.allclose(bZ, BOX_EQ_TOL)
    return not same_products or same_factors


def stage_chsh(stages: Sequence[BehaviorBox]) -> List[float]:
    return [chsh_max(stage)[0] for stage in stages]
