"""
Seeded Poisson sampler with a fixed, documented algorithm.

Uniform variates come from numpy's Philox4x64-10 counter-based generator
seeded through SeedSequence(seed). lambda < 10 uses sequential-search
inversion; lambda >= 10 uses Hormann's transformed rejection (PTRS). Each
draw consumes uniforms in a fixed order, so a given seed yields the same
stream on any platform.
"""

import math

import numpy as np

INVERSION_LIMIT = 10.0


class PoissonSampler:
    def __init__(self, seed: int):
        self.seed = int(seed)
        self._rng = np.random.Generator(np.random.Philox(self.seed))

    def uniform(self) -> float:
        return float(self._rng.random())

    def draw(self, lam: float) -> int:
        if lam < 0 or math.isnan(lam):
            raise ValueError(f"Poisson rate must be >= 0, got {lam}")
        if lam == 0:
            return 0
        if lam < INVERSION_LIMIT:
            return self._inversion(lam)
        return self._transformed_rejection(lam)

    def _inversion(self, lam: float) -> int:
        u = self.uniform()
        k = 0
        p = math.exp(-lam)
        cumulative = p
        while u > cumulative:
            k += 1
            p *= lam / k
            cumulative += p
            if p == 0.0:
                break
        return k

    def _transformed_rejection(self, lam: float) -> int:
        slam = math.sqrt(lam)
        loglam = math.log(lam)
        b = 0.931 + 2.53 * slam
        a = -0.059 + 0.02483 * b
        inv_alpha = 1.1239 + 1.1328 / (b - 3.4)
        v_r = 0.9277 - 3.6224 / (b - 2)

        while True:
            u = self.uniform() - 0.5
            v = self.uniform()
            us = 0.5 - abs(u)
            if us == 0.0:
                continue
            k = math.floor((2 * a / us + b) * u + lam + 0.43)
            if us >= 0.07 and v <= v_r:
                return int(k)
            if k < 0 or (us < 0.013 and v > us):
                continue
            if math.log(v) + math.log(inv_alpha) - math.log(a / (us * us) + b) <= -lam + k * loglam - math.lgamma(k + 1):
                return int(k)
