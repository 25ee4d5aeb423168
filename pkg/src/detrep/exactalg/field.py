from __future__ import annotations

import os
from dataclasses import dataclass

DEFAULT_PRIME = 32003


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def default_prime() -> int:
    """Prime used when none is given; ``DETREP_PRIME`` overrides 32003."""
    raw = os.environ.get("DETREP_PRIME")
    return int(raw) if raw else DEFAULT_PRIME


@dataclass(frozen=True)
class PrimeField:
    """The field GF(p).

    Elements are plain Python/numpy integers in ``range(p)``. The prime must
    stay below 2**26 so that blocked eliminations in float64 remain exact.
    """

    p: int = DEFAULT_PRIME

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.p >= 1 << 26:
            raise ValueError("prime too large for exact float64 elimination")

    def __call__(self, x: int) -> int:
        return int(x) % self.p

    def inv(self, x: int) -> int:
        x %= self.p
        if x == 0:
            raise ZeroDivisionError("inverse of 0 in GF(p)")
        return pow(x, -1, self.p)

    def check_small_binomials(self, t: int, c: int) -> bool:
        # p > t + c keeps the binomial coefficients of the default ranges invertible
        return self.p > t + c
