"""Exact arithmetic in the presentation ring Q[x, y] / (Phi_m(x), y^2 + D).

Values are represented on the basis {x^e * y^j : 0 <= e < deg Phi_m, j in {0, 1}}
with Fraction coefficients.  x stands for a primitive m-th root of unity and y
for sqrt(-D).  The ring is an etale algebra (not always a domain); equality
means equality of canonical representatives, after embedding both operands in
the ring of the lcm of their root orders.

A raw integer engine over Z[x]/(x^m - 1) is provided for hot loops (finite
Fourier transforms, brute-force coefficient sums); monomial multiplication is a
cyclic rotation there, and results are reduced into canonical form only once.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd

from sympy import totient
from sympy.polys.specialpolys import cyclotomic_poly


@lru_cache(maxsize=None)
def phi_coeffs(m: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_m, low degree first."""
    if m == 1:
        return (-1, 1)
    return tuple(int(c) for c in reversed(cyclotomic_poly(m, polys=True).all_coeffs()))


@lru_cache(maxsize=None)
def phi_degree(m: int) -> int:
    return 1 if m == 1 else int(totient(m))


@lru_cache(maxsize=None)
def _power_reduction(m: int) -> tuple[tuple[int, ...], ...]:
    """x^(deg+i) mod Phi_m as integer coefficient rows, for i = 0..deg-2."""
    deg = phi_degree(m)
    phi = phi_coeffs(m)
    # x^deg = -(phi[0] + phi[1] x + ... + phi[deg-1] x^(deg-1)), Phi_m monic
    rows = [tuple(-phi[i] for i in range(deg))]
    for _ in range(deg - 2):
        prev = rows[-1]
        # multiply previous row by x, then fold the overflow back in
        shifted = [0] + list(prev[:-1])
        top = prev[-1]
        rows.append(tuple(shifted[i] - top * phi[i] for i in range(deg)))
    return tuple(rows)


def reduce_exponents(pairs, m: int) -> dict[int, Fraction]:
    """Reduce {exponent: coefficient} with exponents in [0, 2*deg) mod Phi_m."""
    deg = phi_degree(m)
    out: dict[int, Fraction] = {}
    overflow = None
    for e, coef in pairs:
        if not coef:
            continue
        if e < deg:
            out[e] = out.get(e, Fraction(0)) + coef
        else:
            if overflow is None:
                overflow = _power_reduction(m)
            row = overflow[e - deg]
            for i, ri in enumerate(row):
                if ri:
                    out[i] = out.get(i, Fraction(0)) + coef * ri
    return {e: c for e, c in out.items() if c}


def reduce_dense(coeffs: list, m: int) -> dict[int, Fraction]:
    """Reduce a dense coefficient list (any length) mod Phi_m.

    Plain long division by Phi_m; the divisor is sparse for prime powers, so
    this is cheap even for large m (shell sums use m up to 7^5).
    """
    deg = phi_degree(m)
    work = [Fraction(c) for c in coeffs]
    if len(work) < m:
        work += [Fraction(0)] * (m - len(work))
    # first fold x^m = 1 for exponents >= m
    for e in range(len(work) - 1, m - 1, -1):
        if work[e]:
            work[e - m] += work[e]
            work[e] = Fraction(0)
    work = work[:m]
    phi = phi_coeffs(m)
    nz = [(i, phi[i]) for i in range(deg) if phi[i]]
    for e in range(m - 1, deg - 1, -1):
        top = work[e]
        if not top:
            continue
        work[e] = Fraction(0)
        base = e - deg
        for i, ci in nz:
            work[base + i] -= top * ci
    return {e: work[e] for e in range(deg) if work[e]}


class AlgebraicValue:
    """Element of Q[x, y] / (Phi_m(x), y^2 + D)."""

    __slots__ = ("m", "disc", "coeffs")

    def __init__(self, m: int, coeffs: dict, disc: int | None = None):
        self.m = m
        self.disc = disc
        self.coeffs = coeffs  # {(e, j): Fraction}, canonical, no zeros

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_rational(q) -> "AlgebraicValue":
        q = Fraction(q)
        return AlgebraicValue(1, {(0, 0): q} if q else {})

    @staticmethod
    def zero() -> "AlgebraicValue":
        return AlgebraicValue(1, {})

    @staticmethod
    def one() -> "AlgebraicValue":
        return AlgebraicValue(1, {(0, 0): Fraction(1)})

    @staticmethod
    def root_of_unity(m: int, e: int) -> "AlgebraicValue":
        """zeta_m^e, canonicalized to its exact order."""
        e %= m
        if e == 0:
            return AlgebraicValue.one()
        g = gcd(e, m)
        m2, e2 = m // g, e // g
        if e2 < phi_degree(m2):
            return AlgebraicValue(m2, {(e2, 0): Fraction(1)})
        red = reduce_dense(_pairs_to_dense([(e2, Fraction(1))], m2), m2)
        return AlgebraicValue(m2, {(ex, 0): c for ex, c in red.items()})

    @staticmethod
    def sqrt_minus(d: int) -> "AlgebraicValue":
        """y = sqrt(-d)."""
        return AlgebraicValue(1, {(0, 1): Fraction(1)}, disc=d)

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_rational(self) -> bool:
        return all(k == (0, 0) for k in self.coeffs)

    def as_rational(self) -> Fraction:
        if not self.coeffs:
            return Fraction(0)
        if not self.is_rational():
            raise ValueError("value is not rational")
        return self.coeffs[(0, 0)]

    def _merged_disc(self, other: "AlgebraicValue") -> int | None:
        if self.disc is None:
            return other.disc
        if other.disc is None or other.disc == self.disc:
            return self.disc
        raise ValueError(f"incompatible radicands {self.disc} and {other.disc}")

    def _embed(self, m: int) -> dict:
        if m == self.m:
            return self.coeffs
        step = m // self.m
        pairs: dict[tuple[int, int], Fraction] = {}
        for j in (0, 1):
            part = [(e * step, c) for (e, jj), c in self.coeffs.items() if jj == j]
            if part:
                red = reduce_dense(_pairs_to_dense(part, m), m)
                for e, c in red.items():
                    pairs[(e, j)] = c
        return pairs

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        disc = self._merged_disc(other)
        m = self.m * other.m // gcd(self.m, other.m)
        a, b = self._embed(m), other._embed(m)
        out = dict(a)
        for k, c in b.items():
            s = out.get(k, Fraction(0)) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return AlgebraicValue(m, out, disc)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicValue(self.m, {k: -c for k, c in self.coeffs.items()}, self.disc)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        disc = self._merged_disc(other)
        m = self.m * other.m // gcd(self.m, other.m)
        a, b = self._embed(m), other._embed(m)
        acc: dict[tuple[int, int], Fraction] = {}
        d = disc if disc is not None else 0
        for (e1, j1), c1 in a.items():
            for (e2, j2), c2 in b.items():
                c = c1 * c2
                e, j = e1 + e2, j1 + j2
                if j == 2:
                    j, c = 0, c * (-d)
                acc[(e, j)] = acc.get((e, j), Fraction(0)) + c
        out: dict[tuple[int, int], Fraction] = {}
        for j in (0, 1):
            part = [(e, c) for (e, jj), c in acc.items() if jj == j and c]
            for e, c in reduce_exponents(part, m).items():
                out[(e, j)] = c
        return AlgebraicValue(m, out, disc)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * _coerce(other).inv()

    def inv(self) -> "AlgebraicValue":
        """Inverse, for rationals, monomials and a + b*y shapes."""
        if not self.coeffs:
            raise ZeroDivisionError("inverse of zero")
        if self.is_rational():
            return AlgebraicValue.from_rational(1 / self.as_rational())
        keys = set(self.coeffs)
        if len(keys) == 1:
            (e, j), = keys
            c = self.coeffs[(e, j)]
            if j == 0:
                return AlgebraicValue.root_of_unity(self.m, -e) * (1 / c)
            if self.disc:
                # (c * x^e * y)^-1 = -x^(-e) * y / (c * D)
                root = AlgebraicValue.root_of_unity(self.m, -e)
                y = AlgebraicValue.sqrt_minus(self.disc)
                return root * y * (Fraction(-1) / (c * self.disc))
        if keys <= {(0, 0), (0, 1)} and self.disc is not None:
            a = self.coeffs.get((0, 0), Fraction(0))
            b = self.coeffs.get((0, 1), Fraction(0))
            n = a * a + self.disc * b * b
            if not n:
                raise ZeroDivisionError("zero divisor")
            return AlgebraicValue(self.m, {k: c for k, c in
                                           {(0, 0): a / n, (0, 1): -b / n}.items() if c},
                                  self.disc)
        raise ValueError("inverse implemented only for monomial and a+b*sqrt(-D) shapes")

    def __pow__(self, n: int) -> "AlgebraicValue":
        if n < 0:
            return self.inv() ** (-n)
        acc = AlgebraicValue.one()
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base if n > 1 else base
            n >>= 1
        return acc

    def conj(self) -> "AlgebraicValue":
        """Formal complex conjugation: x -> x^-1, y -> -y."""
        pairs: dict[tuple[int, int], Fraction] = {}
        for j in (0, 1):
            part = [((-e) % self.m, c) for (e, jj), c in self.coeffs.items() if jj == j]
            if part:
                red = reduce_dense(_pairs_to_dense(part, self.m), self.m)
                for e, c in red.items():
                    pairs[(e, j)] = c if j == 0 else -c
        return AlgebraicValue(self.m, {k: c for k, c in pairs.items() if c}, self.disc)

    # -- comparisons -------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = AlgebraicValue.from_rational(other)
        if not isinstance(other, AlgebraicValue):
            return NotImplemented
        return (self - other).is_zero()

    def __ne__(self, other) -> bool:
        eq = self.__eq__(other)
        return NotImplemented if eq is NotImplemented else not eq

    def __repr__(self) -> str:
        if self.is_zero():
            return "AlgebraicValue(0)"
        terms = []
        for (e, j), c in sorted(self.coeffs.items()):
            t = str(c)
            if e:
                t += f"*z{self.m}^{e}"
            if j:
                t += f"*sqrt(-{self.disc})"
            terms.append(t)
        return "AlgebraicValue(" + " + ".join(terms) + ")"

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        poly = [[e, j, f"{c.numerator}/{c.denominator}"]
                for (e, j), c in sorted(self.coeffs.items())]
        out = {"m": self.m, "poly": poly}
        if self.disc is not None:
            out["disc"] = self.disc
        return out

    @staticmethod
    def from_json(obj: dict) -> "AlgebraicValue":
        coeffs = {}
        for e, j, c in obj["poly"]:
            num, den = c.split("/")
            coeffs[(int(e), int(j))] = Fraction(int(num), int(den))
        return AlgebraicValue(int(obj["m"]), coeffs, obj.get("disc"))


def _coerce(v) -> AlgebraicValue:
    if isinstance(v, AlgebraicValue):
        return v
    if isinstance(v, (int, Fraction)):
        return AlgebraicValue.from_rational(v)
    raise TypeError(f"cannot coerce {type(v)!r} into AlgebraicValue")


def _pairs_to_dense(pairs, m: int) -> list:
    dense = [Fraction(0)] * m
    for e, c in pairs:
        dense[e % m] += c
    return dense


# ---------------------------------------------------------------------------
# Integer engine over Z[x]/(x^m - 1)


class CycRing:
    """Cyclic group ring Z[x]/(x^m - 1) with list-of-int vectors.

    Used by the finite Fourier transform and the brute-force coefficient sums,
    where multiplication by a root of unity is a rotation.  Conversion back to
    AlgebraicValue performs the single reduction mod Phi_m.
    """

    def __init__(self, m: int):
        self.m = m

    def zero(self) -> list[int]:
        return [0] * self.m

    def monomial(self, e: int) -> list[int]:
        v = [0] * self.m
        v[e % self.m] = 1
        return v

    def add_rotated(self, acc: list[int], vec: list[int], e: int) -> None:
        """acc += x^e * vec, in place."""
        m = self.m
        e %= m
        if e == 0:
            for i in range(m):
                acc[i] += vec[i]
        else:
            k = m - e
            for i in range(e):
                acc[i] += vec[k + i]
            for i in range(e, m):
                acc[i] += vec[i - e]

    def add_scaled_rotated(self, acc: list[int], vec: list[int], e: int, s: int) -> None:
        m = self.m
        e %= m
        for i in range(m):
            acc[(i + e) % m] += s * vec[i]

    def from_algebraic(self, value: AlgebraicValue) -> tuple[list[int], int]:
        """Return (vector, denominator) with value = vector / denominator."""
        if any(j for (_, j) in value.coeffs):
            raise ValueError("sqrt(-D) component not supported in the cyclic engine")
        if self.m % value.m:
            raise ValueError(f"order {value.m} does not divide ring order {self.m}")
        step = self.m // value.m
        den = 1
        for c in value.coeffs.values():
            den = den * c.denominator // gcd(den, c.denominator)
        v = [0] * self.m
        for (e, _), c in value.coeffs.items():
            v[(e * step) % self.m] += int(c * den)
        return v, den

    def to_algebraic(self, vec: list[int], scale: Fraction = Fraction(1)) -> AlgebraicValue:
        red = reduce_dense([c * scale for c in vec], self.m)
        return AlgebraicValue(self.m, {(e, 0): c for e, c in red.items()})
