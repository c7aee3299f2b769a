"""Parameter profiles: thresholds are always derived from (alpha, epsilon).

The ``paper`` profile uses the published constants; ``desk`` shrinks every
threshold so the whole pipeline is exercisable on instances small enough for
the exact oracles.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


def _ceil(x: Fraction) -> int:
    return math.ceil(x)


@dataclass(frozen=True)
class StructuredParams:
    alpha: Fraction
    epsilon: Fraction
    huge_threshold: int = 32           # component with >= this many vertices is huge
    large_threshold: int = 9           # 2EC component with >= this many vertices is large
    few_delta: Fraction = Fraction(1, 100)
    many_delta: Fraction = Fraction(1, 28)
    beta_threshold: Fraction = Fraction(999, 1000)
    oracle_limit: int = 14
    contractible_cycle_max: int = 8    # candidate cycles for contractibility checks

    @property
    def size_floor(self) -> Fraction:
        return Fraction(8, 1) / self.epsilon

    @property
    def three_cut_side(self) -> int:
        return _ceil(Fraction(2) / (self.alpha - 1)) - 1

    def ck_side(self, k: int) -> int:
        return _ceil(Fraction(k) / (self.alpha - 1)) - 1

    @property
    def four_cut_side_1(self) -> int:
        return _ceil(Fraction(6) / (self.alpha - 1)) - 1

    @property
    def four_cut_side_2(self) -> int:
        # condition-1 threshold of the k-cut algorithm with k = 4: 2k-2 = 6
        return _ceil(Fraction(2 * 4 - 2) / (self.alpha - 1)) - 1

    def f(self, n: int) -> Fraction:
        """Slack term of the reduction invariant."""
        return 4 * self.epsilon * n - 16

    def is_base_size(self, n: int) -> bool:
        return Fraction(n) <= self.size_floor


def paper_params() -> StructuredParams:
    return StructuredParams(alpha=Fraction(5, 4) - Fraction(1, 100000),
                            epsilon=Fraction(1, 1000000))


def desk_params() -> StructuredParams:
    # huge threshold 9 keeps the classification consistent: cycles up to C8
    # stay cycles, any component on >= 9 vertices (2EC or complex) is huge,
    # and a huge 2EC component always has >= 9 edges (credit 2).
    return StructuredParams(alpha=Fraction(123, 100), epsilon=Fraction(1, 2),
                            huge_threshold=9, large_threshold=9)


PROFILES = {"paper": paper_params, "desk": desk_params}


def get_profile(name: str) -> StructuredParams:
    try:
        return PROFILES[name]()
    except KeyError:
        raise ValueError(f"unknown profile {name!r}; choose from {sorted(PROFILES)}")
