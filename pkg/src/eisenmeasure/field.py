"""The imaginary quadratic field Q(sqrt(-D)), its split prime above p, and
reduction of algebraic values into Z/p^M.

The CM datum is a choice of one of the two primes above the split prime p,
realized concretely as the Hensel-lifted square root r of -D mod p^M: the two
embeddings of K into Q_p send sqrt(-D) to +r and -r, and an element u+v*sqrt(-D)
to the residue pair (u+v*r, u-v*r).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from sympy import factorint, isprime, primitive_root
from sympy.ntheory.residue_ntheory import sqrt_mod

from .cyclotomic import AlgebraicValue


class NotSplitError(ValueError):
    """p is inert or ramified in Q(sqrt(-D)); the construction needs p split."""


@dataclass(frozen=True)
class CMContext:
    """Field Q(sqrt(-D)) with split odd prime p, level exponent c, precision M.

    r is the canonical square root of -D mod p^M (the Hensel lift of the least
    nonnegative root mod p); w is the order of the unit group of O_K.
    """

    D: int
    p: int
    c: int
    M: int
    r: int
    w: int

    @property
    def level(self) -> int:
        return self.p ** self.c

    @property
    def modulus(self) -> int:
        return self.p ** self.M

    def to_config(self) -> dict:
        return {"D": self.D, "p": self.p, "c": self.c, "M": self.M}


def init_cm_context(D: int, p: int, c: int, M: int) -> CMContext:
    if D < 1:
        raise ValueError("D must be a positive integer")
    if any(e > 1 for e in factorint(D).values()):
        raise ValueError(f"D={D} is not squarefree")
    if p == 2 or not isprime(p):
        raise ValueError(f"p={p} must be an odd prime")
    if D % p == 0:
        raise NotSplitError(f"p={p} divides D={D} (ramified)")
    if c < 1:
        raise ValueError("level exponent c must be >= 1")
    if M < 2 * c:
        raise ValueError(f"precision M={M} must be at least 2c={2*c}")
    if pow(-D % p, (p - 1) // 2, p) != 1:
        raise NotSplitError(f"-{D} is a non-residue mod {p}: p is not split in Q(sqrt(-{D}))")
    roots = sqrt_mod(-D, p, all_roots=True)
    r0 = min(int(x) for x in roots)
    r = _hensel_sqrt(-D, p, r0, M)
    w = 4 if D == 1 else 6 if D == 3 else 2
    return CMContext(D=D, p=p, c=c, M=M, r=r, w=w)


def _hensel_sqrt(a: int, p: int, r0: int, M: int) -> int:
    """Lift r0 with r0^2 = a mod p to the root of x^2 = a mod p^M."""
    r, k = r0, 1
    while k < M:
        k = min(2 * k, M)
        mod = p ** k
        inv = pow((2 * r) % mod, -1, mod)
        r = (r - (r * r - a) * inv) % mod
    assert (r * r - a) % p ** M == 0
    return r


@dataclass(frozen=True)
class FieldElement:
    """u + v*sqrt(-D) with exact rational coordinates."""

    u: Fraction
    v: Fraction
    D: int

    @staticmethod
    def make(u, v, D: int) -> "FieldElement":
        return FieldElement(Fraction(u), Fraction(v), D)

    @staticmethod
    def from_rational(q, D: int) -> "FieldElement":
        return FieldElement(Fraction(q), Fraction(0), D)

    def conj(self) -> "FieldElement":
        return FieldElement(self.u, -self.v, self.D)

    def norm(self) -> Fraction:
        return self.u * self.u + self.D * self.v * self.v

    def trace(self) -> Fraction:
        return 2 * self.u

    def is_rational(self) -> bool:
        return self.v == 0

    def __add__(self, other: "FieldElement") -> "FieldElement":
        other = self._coerce(other)
        return FieldElement(self.u + other.u, self.v + other.v, self.D)

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        other = self._coerce(other)
        return FieldElement(self.u - other.u, self.v - other.v, self.D)

    def __neg__(self) -> "FieldElement":
        return FieldElement(-self.u, -self.v, self.D)

    def __mul__(self, other) -> "FieldElement":
        other = self._coerce(other)
        return FieldElement(self.u * other.u - self.D * self.v * other.v,
                            self.u * other.v + self.v * other.u, self.D)

    def inv(self) -> "FieldElement":
        n = self.norm()
        if not n:
            raise ZeroDivisionError("inverse of zero")
        return FieldElement(self.u / n, -self.v / n, self.D)

    def __truediv__(self, other) -> "FieldElement":
        return self * self._coerce(other).inv()

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.D != self.D:
                raise ValueError("mixed radicands")
            return other
        return FieldElement(Fraction(other), Fraction(0), self.D)

    def to_algebraic(self) -> AlgebraicValue:
        out = AlgebraicValue.from_rational(self.u)
        if self.v:
            out = out + AlgebraicValue.sqrt_minus(self.D) * self.v
        return out

    def is_integral_at(self, p: int) -> bool:
        return self.u.denominator % p != 0 and self.v.denominator % p != 0


def embed_p(x: FieldElement, ctx: CMContext, M: int | None = None) -> tuple[int, int]:
    """The split-prime residue pair (u+v*r, u-v*r) mod p^M."""
    M = ctx.M if M is None else M
    mod = ctx.p ** M
    if not x.is_integral_at(ctx.p):
        raise ValueError(f"element {x} is not integral at p={ctx.p}")
    u = x.u.numerator * pow(x.u.denominator, -1, mod) % mod
    v = x.v.numerator * pow(x.v.denominator, -1, mod) % mod
    r = ctx.r % mod
    return ((u + v * r) % mod, (u - v * r) % mod)


def unit_group(ctx: CMContext) -> list[FieldElement]:
    """The w roots of unity in O_K."""
    one = FieldElement.make(1, 0, ctx.D)
    if ctx.D == 1:
        i = FieldElement.make(0, 1, 1)
        return [one, i, -one, -i]
    if ctx.D == 3:
        z = FieldElement.make(Fraction(1, 2), Fraction(1, 2), 3)  # primitive 6th root
        units, cur = [], one
        for _ in range(6):
            units.append(cur)
            cur = cur * z
        return units
    return [one, -one]


@lru_cache(maxsize=None)
def _teichmuller_generator(p: int, M: int) -> int:
    """Teichmuller lift mod p^M of the least primitive root mod p."""
    g = int(primitive_root(p))
    return pow(g, p ** (M - 1), p ** M)


def canonical_root_of_unity(ctx: CMContext, m: int, M: int | None = None) -> int:
    """The canonical primitive m-th root of unity in Z/p^M, for m | p-1.

    Powers of the Teichmuller lift of the least primitive root mod p, so the
    choices for different m are compatible: zeta_m^(m/d) = zeta_d.
    """
    M = ctx.M if M is None else M
    p = ctx.p
    if (p - 1) % m:
        raise ValueError(f"no primitive {m}-th root of unity in Z_{p}")
    return pow(_teichmuller_generator(p, M), (p - 1) // m, p ** M)


def reduce_mod_p(a: AlgebraicValue, ctx: CMContext, M: int | None = None) -> int:
    """Reduce an algebraic value into Z/p^M along the chosen prime above p.

    zeta_m goes to the canonical m-th root of unity and sqrt(-D) to r.  Only
    the tame regime is supported: p must not divide the root order, and the
    order must divide p-1 so the value is p-adically rational.
    """
    M = ctx.M if M is None else M
    p, mod = ctx.p, ctx.p ** M
    if isinstance(a, (int, Fraction)):
        a = AlgebraicValue.from_rational(a)
    if a.m % p == 0:
        raise ValueError(f"wild root order {a.m} (divisible by p={p}) is unsupported")
    if (p - 1) % a.m:
        raise ValueError(f"root order {a.m} does not divide p-1={p-1}; value is not p-adically rational")
    if a.disc is not None and a.disc != ctx.D:
        raise ValueError("value carries a different radicand than the context")
    zeta = canonical_root_of_unity(ctx, a.m, M) if a.m > 1 else 1
    r = ctx.r % mod
    total = 0
    for (e, j), c in a.coeffs.items():
        if c.denominator % p == 0:
            raise ValueError(f"negative valuation: denominator {c.denominator} divisible by p={p}")
        t = c.numerator * pow(c.denominator, -1, mod) % mod
        t = t * pow(zeta, e, mod) % mod
        if j:
            t = t * r % mod
        total = (total + t) % mod
    return total
