"""Closed-form waves on a single edge.

Three representations cover the whole spectrum of -d^2/dx^2:

* ``osc`` (lambda = k^2 > 0):   f(x) = a e^{ikx} + b e^{ik(l-x)}
* ``exp`` (lambda = -kappa^2):  f(x) = a e^{-kappa x} + b e^{-kappa (l-x)}
* ``lin`` (lambda = 0):         f(x) = a + b x

In the oscillatory case (a, b) are the forward/backward scattering
amplitudes of the edge's two bonds; the backward coefficient b multiplies
e^{ik(l-x)} = e^{ikl} e^{-ikx}, so reversing an edge swaps a and b.
All integrals (L2 norm, Dirichlet energy) are exact closed forms.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

OSC = "osc"
EXP = "exp"
LIN = "lin"


@dataclass(frozen=True)
class EdgeWave:
    edge: int
    length: float
    kind: str
    k: float  # k for osc, kappa for exp, unused (0) for lin
    a: complex
    b: complex

    def value(self, x: float) -> complex:
        l = self.length
        if self.kind == OSC:
            return self.a * cmath.exp(1j * self.k * x) + self.b * cmath.exp(1j * self.k * (l - x))
        if self.kind == EXP:
            return self.a * math.exp(-self.k * x) + self.b * math.exp(-self.k * (l - x))
        return self.a + self.b * x

    def derivative(self, x: float) -> complex:
        """df/dx in the edge's fixed orientation."""
        l = self.length
        if self.kind == OSC:
            ik = 1j * self.k
            return ik * self.a * cmath.exp(1j * self.k * x) - ik * self.b * cmath.exp(1j * self.k * (l - x))
        if self.kind == EXP:
            kap = self.k
            return -kap * self.a * math.exp(-kap * x) + kap * self.b * math.exp(-kap * (l - x))
        return self.b

    # endpoint shorthands used when assembling vertex conditions
    def value0(self) -> complex:
        return self.value(0.0)

    def valueL(self) -> complex:
        return self.value(self.length)

    def d0(self) -> complex:
        return self.derivative(0.0)

    def dL(self) -> complex:
        return self.derivative(self.length)

    def norm_sq(self) -> float:
        """Integral of |f|^2 over the edge (exact)."""
        l, a, b = self.length, self.a, self.b
        if self.kind == OSC:
            k = self.k
            return (abs(a) ** 2 + abs(b) ** 2) * l + 2.0 * (a * b.conjugate()).real * math.sin(k * l) / k
        if self.kind == EXP:
            kap = self.k
            decay = -math.expm1(-2.0 * kap * l) / (2.0 * kap)
            return (abs(a) ** 2 + abs(b) ** 2) * decay + 2.0 * (a * b.conjugate()).real * l * math.exp(-kap * l)
        ab = (a * b.conjugate()).real
        return abs(a) ** 2 * l + ab * l ** 2 + abs(b) ** 2 * l ** 3 / 3.0

    def energy(self) -> float:
        """Integral of |f'|^2 over the edge (exact)."""
        l, a, b = self.length, self.a, self.b
        if self.kind == OSC:
            k = self.k
            return k ** 2 * ((abs(a) ** 2 + abs(b) ** 2) * l - 2.0 * (a * b.conjugate()).real * math.sin(k * l) / k)
        if self.kind == EXP:
            kap = self.k
            decay = -math.expm1(-2.0 * kap * l) / (2.0 * kap)
            return kap ** 2 * ((abs(a) ** 2 + abs(b) ** 2) * decay - 2.0 * (a * b.conjugate()).real * l * math.exp(-kap * l))
        return abs(b) ** 2 * l

    def reversed(self) -> "EdgeWave":
        """The same function in the reversed parametrization x -> l - x."""
        if self.kind == LIN:
            return replace(self, a=self.a + self.b * self.length, b=-self.b)
        return replace(self, a=self.b, b=self.a)

    def scaled(self, c: complex) -> "EdgeWave":
        return replace(self, a=c * self.a, b=c * self.b)

    def eigenvalue(self) -> float:
        if self.kind == OSC:
            return self.k ** 2
        if self.kind == EXP:
            return -self.k ** 2
        return 0.0


def inner(w1: EdgeWave, w2: EdgeWave) -> complex:
    """L2 inner product <w1, w2> over the common edge (exact closed form)."""
    if w1.kind != w2.kind or w1.length != w2.length or w1.k != w2.k:
        raise ValueError("inner product needs waves of matching kind, length and wave number")
    l = w1.length
    a1, b1, a2, b2 = w1.a, w1.b, w2.a, w2.b
    diag = a1 * a2.conjugate() + b1 * b2.conjugate()
    cross = a1 * b2.conjugate() + b1 * a2.conjugate()
    if w1.kind == OSC:
        k = w1.k
        return diag * l + cross * math.sin(k * l) / k
    if w1.kind == EXP:
        kap = w1.k
        decay = -math.expm1(-2.0 * kap * l) / (2.0 * kap)
        return diag * decay + cross * l * math.exp(-kap * l)
    return a1 * a2.conjugate() * l + cross * l ** 2 / 2.0 + b1 * b2.conjugate() * l ** 3 / 3.0
