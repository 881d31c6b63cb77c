"""Hecke characters of Q(sqrt(-D)) with conductor dividing p^infinity, their
p-adic avatars, and locally constant weight functions on the level-p^c group.

A character is stored as its infinity data (k, nu) and a pair of value tables
on (Z/p^c)^x.  The avatar is the function a -> chi1(a1) * chi2(a2)^-1 *
sigma(a)^(-k-nu) * conj_sigma(a)^nu on elements prime to p, where (a1, a2) is
the split-prime residue pair; the algebraic part is computed exactly in K so
every avatar value is a single AlgebraicValue.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from sympy import primitive_root, totient

from .cyclotomic import AlgebraicValue
from .field import CMContext, FieldElement, embed_p, unit_group
from .report import Report


@dataclass(frozen=True)
class InfinityType:
    k: int
    nu: int


@lru_cache(maxsize=None)
def _group_data(p: int, c: int) -> tuple[int, int, dict[int, int]]:
    """(generator, order, discrete log table) for the cyclic group (Z/p^c)^x."""
    q = p ** c
    g = int(primitive_root(q))
    order = int(totient(q))
    logs, cur = {}, 1
    for t in range(order):
        logs[cur] = t
        cur = cur * g % q
    return g, order, logs


def group_units(p: int, c: int) -> list[int]:
    return sorted(_group_data(p, c)[2])


def cyclic_character(p: int, c: int, order: int, exponent: int) -> dict[int, AlgebraicValue]:
    """Table of the character sending the canonical generator to zeta_order^exponent."""
    _, n, logs = _group_data(p, c)
    if n % order:
        raise ValueError(f"order {order} does not divide the unit group order {n}")
    step = (n // order) * exponent
    return {u: AlgebraicValue.root_of_unity(n, step * t) for u, t in logs.items()}


def trivial_table(p: int, c: int) -> dict[int, AlgebraicValue]:
    return cyclic_character(p, c, 1, 0)


def is_multiplicative(table: dict[int, AlgebraicValue], p: int, c: int) -> bool:
    units = group_units(p, c)
    q = p ** c
    if table.get(1) != AlgebraicValue.one():
        return False
    for a in units:
        for b in units:
            if table[a] * table[b] != table[a * b % q]:
                return False
    return True


@dataclass(frozen=True)
class FiniteCharacterPair:
    """The split-prime pair (chi_1, chi_2^-1): two tables on (Z/p^c)^x."""

    c: int
    chi1: dict
    chi2: dict
    tag: str = ""  # generator encoding, e.g. "4:1,4:0", used in headers

    def value(self, x1: int, x2: int, level: int) -> AlgebraicValue:
        """chi1(x1) * chi2(x2)^-1."""
        return self.chi1[x1 % level] * self.chi2[x2 % level].inv()


def character_pair(ctx: CMContext, spec1: tuple[int, int], spec2: tuple[int, int]) -> FiniteCharacterPair:
    """Build a pair from (order, exponent) generator data for chi1 and chi2."""
    t1 = cyclic_character(ctx.p, ctx.c, *spec1)
    t2 = cyclic_character(ctx.p, ctx.c, *spec2)
    tag = f"{spec1[0]}:{spec1[1]},{spec2[0]}:{spec2[1]}"
    return FiniteCharacterPair(c=ctx.c, chi1=t1, chi2=t2, tag=tag)


def trivial_pair(ctx: CMContext) -> FiniteCharacterPair:
    return character_pair(ctx, (1, 0), (1, 0))


@dataclass(frozen=True)
class HeckeCharacterData:
    """Type-A0 character with infinity data psi_{k,nu} and finite part at p^c."""

    inf: InfinityType
    fin: FiniteCharacterPair

    @property
    def char_id(self) -> str:
        return f"k{self.inf.k}n{self.inf.nu}[{self.fin.tag}]"


@dataclass(frozen=True)
class PAdicAvatar:
    """Finite tables plus the integer exponents on the two p-adic coordinates."""

    fin: FiniteCharacterPair
    exp1: int  # applied to the first coordinate: -k - nu
    exp2: int  # applied to the second coordinate: nu


def unit_algebraic_factor(e: FieldElement, k: int, nu: int) -> AlgebraicValue:
    """sigma(e)^(k+2nu), the unit-compatibility factor (units have norm 1)."""
    return e.to_algebraic() ** (k + 2 * nu)


def make_character(inf: InfinityType, fin: FiniteCharacterPair, ctx: CMContext) -> HeckeCharacterData:
    """Validate tables and the triviality of the avatar on the roots of unity."""
    if not is_multiplicative(fin.chi1, ctx.p, ctx.c):
        raise ValueError("chi1 table is not multiplicative")
    if not is_multiplicative(fin.chi2, ctx.p, ctx.c):
        raise ValueError("chi2 table is not multiplicative")
    chi = HeckeCharacterData(inf=inf, fin=fin)
    for e in unit_group(ctx):
        if eval_avatar(chi, e, ctx) != AlgebraicValue.one():
            raise ValueError(
                f"not a Hecke character: avatar is nontrivial on the unit {e.u}+{e.v}*sqrt(-{ctx.D})")
    return chi


def compatible_pair(inf: InfinityType, ctx: CMContext, chi2_spec: tuple[int, int] = (1, 0)) -> FiniteCharacterPair:
    """A canonical finite pair making (inf, pair) a valid character.

    chi2 is the given character; chi1 is chosen on the generator so that the
    avatar is trivial on the unit group.
    """
    g, n, logs = _group_data(ctx.p, ctx.c)
    units = unit_group(ctx)
    target: dict[int, AlgebraicValue] = {}
    for e in units:
        x1, x2 = embed_p(e, ctx)
        chi2_val = cyclic_character(ctx.p, ctx.c, *chi2_spec)[x2 % ctx.level]
        target[x1 % ctx.level] = unit_algebraic_factor(e, inf.k, inf.nu) * chi2_val
    # the unit images generate a cyclic subgroup of (Z/p^c)^x; solve on a generator
    base = min((x for x in target if x != 1), default=1, key=lambda x: logs[x])
    if base == 1:
        return character_pair(ctx, (1, 0), chi2_spec)
    t = logs[base]
    # need chi1(g)^t = target[base]; target values are roots of unity zeta_n^s
    val = target[base]
    s = _root_exponent(val, n)
    sub_order = n // _gcd(n, t)
    if s % _gcd(n, t):
        raise ValueError("no compatible finite part exists at this level")
    j = s // _gcd(n, t) * pow(t // _gcd(n, t), -1, sub_order) % sub_order
    # lift: chi1(g) = zeta_n^(j * gcd) reproduces target on the subgroup
    j_full = j * _gcd(n, t)
    pair = character_pair(ctx, (n, j_full), chi2_spec)
    return pair


def _gcd(a: int, b: int) -> int:
    from math import gcd
    return gcd(a, b)


def _root_exponent(val: AlgebraicValue, n: int) -> int:
    """Write a root-of-unity value as zeta_n^s."""
    zeta = AlgebraicValue.root_of_unity(n, 1)
    cur = AlgebraicValue.one()
    for s in range(n):
        if cur == val:
            return s
        cur = cur * zeta
    raise ValueError(f"{val!r} is not an n-th root of unity for n={n}")


def eval_avatar(chi: HeckeCharacterData, a, ctx: CMContext) -> AlgebraicValue:
    """Exact avatar value chi1(a1) chi2(a2)^-1 sigma(a)^(-k-nu) conj(a)^nu."""
    if isinstance(a, (int, Fraction)):
        a = FieldElement.from_rational(a, ctx.D)
    x1, x2 = embed_p(a, ctx)
    q = ctx.level
    if x1 % ctx.p == 0 or x2 % ctx.p == 0:
        raise ValueError("element is not prime to p")
    fin = chi.fin.value(x1 % q, x2 % q, q)
    k, nu = chi.inf.k, chi.inf.nu
    alg = _field_power(a, -k - nu) * _field_power(a.conj(), nu)
    return fin * alg


def avatar_of(chi: HeckeCharacterData) -> PAdicAvatar:
    return PAdicAvatar(fin=chi.fin, exp1=-chi.inf.k - chi.inf.nu, exp2=chi.inf.nu)


def _field_power(a: FieldElement, n: int) -> AlgebraicValue:
    if n >= 0:
        return a.to_algebraic() ** n
    return a.inv().to_algebraic() ** (-n)


@dataclass(frozen=True)
class WeightFunction:
    """Locally constant table on ((Z/p^c)^x)^2 together with infinity data.

    Represents the function a -> table(a mod p^c) * sigma(a)^(-k-nu) *
    conj_sigma(a)^nu; the table transforms under the w roots of unity by
    sigma(e)^(k+2nu) exactly when the represented function is invariant under
    the closure of the global units.
    """

    c: int
    table: dict  # {(x1, x2): AlgebraicValue}
    inf: InfinityType
    tag: str = ""

    def at(self, x1: int, x2: int) -> AlgebraicValue:
        return self.table[(x1, x2)]

    def value_at_rational(self, q, ctx: CMContext) -> AlgebraicValue:
        """Represented function at a rational prime to p: table * q^(-k)."""
        q = Fraction(q)
        level = ctx.p ** self.c
        res = int(q.numerator * pow(q.denominator, -1, level) % level)
        return self.table[(res, res)] * (Fraction(1) / q) ** self.inf.k


def avatar_weight_function(chi: HeckeCharacterData, ctx: CMContext) -> WeightFunction:
    q = ctx.level
    table = {}
    for x1 in group_units(ctx.p, ctx.c):
        for x2 in group_units(ctx.p, ctx.c):
            table[(x1, x2)] = chi.fin.value(x1, x2, q)
    return WeightFunction(c=ctx.c, table=table, inf=chi.inf, tag=chi.char_id)


def check_weight_relation(F: WeightFunction, ctx: CMContext) -> Report:
    """Verify the unit transformation law on the whole level-p^c table."""
    q = ctx.p ** F.c
    failures = []
    for e in unit_group(ctx):
        factor = unit_algebraic_factor(e, F.inf.k, F.inf.nu)
        e1, e2 = embed_p(e, ctx)
        e1, e2 = e1 % q, e2 % q
        for (x1, x2), val in F.table.items():
            moved = F.table[(e1 * x1 % q, e2 * x2 % q)]
            if moved != factor * val:
                failures.append({
                    "unit": f"{e.u}+{e.v}i*", "point": [x1, x2],
                    "lhs": moved.to_json(), "rhs": (factor * val).to_json(),
                })
    return Report(check="weight-relation", params={"c": F.c, "k": F.inf.k, "nu": F.inf.nu},
                  passed=not failures, failures=failures)


def decompose_locally_constant(F: WeightFunction, ctx: CMContext
                               ) -> list[tuple[AlgebraicValue, HeckeCharacterData]]:
    """Finite Fourier inversion of the table over the character group of
    ((Z/p^c)^x)^2, returned as avatars sharing F's infinity type.

    Characters failing unit compatibility must carry coefficient zero; a
    nonzero coefficient there means the input violated the weight relation.
    """
    p, c = ctx.p, F.c
    q = p ** c
    _, n, logs = _group_data(p, c)
    units = group_units(p, c)
    size = Fraction(len(units) ** 2)
    out = []
    for j1 in range(n):
        for j2 in range(n):
            coef = AlgebraicValue.zero()
            for x1 in units:
                for x2 in units:
                    val = F.table[(x1, x2)]
                    if val.is_zero():
                        continue
                    character = AlgebraicValue.root_of_unity(n, -(j1 * logs[x1] + j2 * logs[x2]))
                    coef = coef + val * character
            coef = coef * (1 / size)
            if coef.is_zero():
                continue
            fin = FiniteCharacterPair(
                c=c,
                chi1=cyclic_character(p, c, n, j1),
                chi2=cyclic_character(p, c, n, (-j2) % n),
                tag=f"{n}:{j1},{n}:{(-j2) % n}",
            )
            chi = HeckeCharacterData(inf=F.inf, fin=fin)
            try:
                make_character(F.inf, fin, ctx)
            except ValueError:
                raise ValueError(
                    "nonzero coefficient on a unit-incompatible character: corrupted input table")
            out.append((coef, chi))
    return out


def weight_function_from_terms(terms, ctx: CMContext, inf: InfinityType) -> WeightFunction:
    """Assemble sum(c_i * avatar_table_i) back into a WeightFunction."""
    units = group_units(ctx.p, ctx.c)
    q = ctx.level
    table = {}
    for x1 in units:
        for x2 in units:
            acc = AlgebraicValue.zero()
            for coef, chi in terms:
                acc = acc + coef * chi.fin.value(x1, x2, q)
            table[(x1, x2)] = acc
    return WeightFunction(c=ctx.c, table=table, inf=inf)


def unit_symmetrize(table: dict, inf: InfinityType, ctx: CMContext) -> dict:
    """Average a raw table into the unit-equivariant subspace."""
    q = ctx.level
    out = {}
    units = unit_group(ctx)
    for (x1, x2) in table:
        acc = AlgebraicValue.zero()
        for e in units:
            e1, e2 = embed_p(e, ctx)
            factor = unit_algebraic_factor(e, inf.k, inf.nu)
            acc = acc + table[(e1 * x1 % q, e2 * x2 % q)] * factor.inv()
        out[(x1, x2)] = acc * Fraction(1, len(units))
    return out
