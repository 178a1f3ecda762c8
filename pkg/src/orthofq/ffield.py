"""Exact arithmetic in prime fields F_p and quadratic extensions F_{p^2}.

Elements of F_{p^2} are written a + b*t with t^2 = r for a fixed non-residue r.
Every element has a canonical integer encoding ``enc = a + b*p`` in ``[0, q)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator


def is_prime(n: int) -> bool:
    """Trial division primality test, adequate for desk-scale fields."""
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


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of ``n`` in increasing order."""
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a|p) for odd prime p, via Euler's criterion."""
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


@dataclass(frozen=True)
class FieldSpec:
    """The field F_q with q = p**e, e in {1, 2}.

    For ``e == 2`` the extension is generated by ``t`` with ``t*t == residue``.
    """

    p: int
    e: int = 1
    residue: int = 0

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"characteristic must be prime, got {self.p}")
        if self.e not in (1, 2):
            raise ValueError(f"only degrees 1 and 2 are supported, got {self.e}")
        if self.e == 2:
            if self.p == 2:
                raise ValueError("characteristic-2 extension fields are not supported")
            if legendre(self.residue, self.p) != -1:
                raise ValueError(
                    f"residue {self.residue} is not a quadratic non-residue mod {self.p}"
                )

    @property
    def q(self) -> int:
        return self.p**self.e

    @property
    def order(self) -> int:
        return self.q

    def __repr__(self):
        if self.e == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^2, t^2={self.residue})"

    # -- element construction -------------------------------------------------

    def __call__(self, a: int, b: int = 0) -> FieldElement:
        return FieldElement(self, a % self.p, b % self.p if self.e == 2 else 0)

    def from_enc(self, enc: int) -> FieldElement:
        if not 0 <= enc < self.q:
            raise ValueError(f"encoding {enc} out of range [0, {self.q})")
        return FieldElement(self, enc % self.p, enc // self.p)

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, 0, 0)

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, 1, 0)

    def elements(self) -> Iterator[FieldElement]:
        for enc in range(self.q):
            yield self.from_enc(enc)

    # -- arithmetic on encodings (hot paths) -----------------------------------

    def add_enc(self, x: int, y: int) -> int:
        p = self.p
        return (x % p + y % p) % p + ((x // p + y // p) % p) * p

    def neg_enc(self, x: int) -> int:
        p = self.p
        return (-(x % p)) % p + ((-(x // p)) % p) * p

    def mul_enc(self, x: int, y: int) -> int:
        if self.e == 1:
            return x * y % self.p
        return self._mul_table[x][y]

    def inv_enc(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("0 has no multiplicative inverse")
        return self._inv_table[x]

    def pow_enc(self, x: int, n: int) -> int:
        result = 1
        while n:
            if n & 1:
                result = self.mul_enc(result, x)
            x = self.mul_enc(x, x)
            n >>= 1
        return result

    def _mul_coeffs(self, x: int, y: int) -> int:
        p, r = self.p, self.residue
        a, b = x % p, x // p
        c, d = y % p, y // p
        return (a * c + r * b * d) % p + ((a * d + b * c) % p) * p

    @cached_property
    def _mul_table(self) -> list[list[int]]:
        q = self.q
        return [[self._mul_coeffs(x, y) for y in range(q)] for x in range(q)]

    @cached_property
    def _inv_table(self) -> list[int]:
        q = self.q
        if self.e == 1:
            return [0] + [pow(x, q - 2, q) for x in range(1, q)]
        # x^(q-2) is the inverse in F_q^*
        return [0] + [self.pow_enc(x, q - 2) for x in range(1, q)]

    def multiplicative_order(self, x: int) -> int:
        """Order of the element with encoding ``x`` in F_q^*."""
        if x == 0:
            raise ValueError("0 is not in the multiplicative group")
        n = self.q - 1
        for ell in prime_factors(self.q - 1):
            while n % ell == 0 and self.pow_enc(x, n // ell) == 1:
                n //= ell
        return n


def field_make(p: int, e: int = 1) -> FieldSpec:
    """Build F_{p^e} with the canonical modulus.

    For ``e == 2``: ``t^2 = -1`` when p = 3 (mod 4), otherwise t^2 equals the
    smallest quadratic non-residue mod p.
    """
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"characteristic must be prime, got {p!r}")
    if e not in (1, 2):
        raise ValueError(f"only degrees 1 and 2 are supported, got {e!r}")
    if e == 1:
        return FieldSpec(p, 1, 0)
    if p == 2:
        raise ValueError("characteristic-2 extension fields are not supported")
    if p % 4 == 3:
        return FieldSpec(p, 2, p - 1)
    r = next(a for a in range(2, p) if legendre(a, p) == -1)
    return FieldSpec(p, 2, r)


def field_for_order(q: int) -> FieldSpec:
    """Field of order ``q`` where q is a prime or the square of an odd prime."""
    if is_prime(q):
        return field_make(q, 1)
    root = int(round(q**0.5))
    if root * root == q and is_prime(root):
        return field_make(root, 2)
    raise ValueError(f"no supported field of order {q}")


@dataclass(frozen=True)
class FieldElement:
    field: FieldSpec = field(repr=False)
    a: int
    b: int = 0

    @property
    def enc(self) -> int:
        return self.a + self.b * self.field.p

    def _check(self, other) -> FieldElement:
        if isinstance(other, int):
            return self.field(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.field != self.field:
            raise ValueError(f"mixed-field operands: {self.field} and {other.field}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self.field.from_enc(self.field.add_enc(self.enc, other.enc))

    __radd__ = __add__

    def __neg__(self):
        return self.field.from_enc(self.field.neg_enc(self.enc))

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self.field.from_enc(self.field.mul_enc(self.enc, other.enc))

    __rmul__ = __mul__

    def inverse(self) -> FieldElement:
        return self.field.from_enc(self.field.inv_enc(self.enc))

    def __truediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return self.field.from_enc(self.field.pow_enc(self.enc, n))

    def __bool__(self):
        return self.enc != 0

    def __int__(self):
        return self.enc

    def __str__(self):
        if self.field.e == 1 or self.b == 0:
            return str(self.a)
        if self.a == 0:
            return "t" if self.b == 1 else f"{self.b}t"
        return f"{self.a}+{'' if self.b == 1 else self.b}t"

    def order(self) -> int:
        return self.field.multiplicative_order(self.enc)


def add(x: FieldElement, y: FieldElement) -> FieldElement:
    return x + y


def mul(x: FieldElement, y: FieldElement) -> FieldElement:
    return x * y


def neg(x: FieldElement) -> FieldElement:
    return -x


def inv(x: FieldElement) -> FieldElement:
    return x.inverse()


def find_generator(f: FieldSpec) -> FieldElement:
    """Generator of F_q^* with the smallest encoding."""
    n = f.q - 1
    factors = prime_factors(n)
    for x in range(1, f.q):
        if all(f.pow_enc(x, n // ell) != 1 for ell in factors):
            return f.from_enc(x)
    raise AssertionError("unreachable: F_q^* is cyclic")


@dataclass(frozen=True)
class MultiplicativeSubgroup:
    """Cyclic subgroup of F_q^*; ``elements`` holds encodings sorted ascending."""

    field: FieldSpec
    generator: FieldElement
    order: int
    elements: tuple[int, ...]

    def __len__(self):
        return self.order

    def __contains__(self, x) -> bool:
        enc = x.enc if isinstance(x, FieldElement) else x
        return enc in self._members

    def __iter__(self) -> Iterator[FieldElement]:
        return (self.field.from_enc(x) for x in self.elements)

    @cached_property
    def _members(self) -> frozenset[int]:
        return frozenset(self.elements)


def cyclic_subgroup(f: FieldSpec, m: int) -> MultiplicativeSubgroup:
    """The unique subgroup of order ``m`` in F_q^*, generated by g^((q-1)/m)."""
    if m <= 0 or (f.q - 1) % m:
        raise ValueError(f"subgroup order {m} does not divide q-1 = {f.q - 1}")
    g = find_generator(f)
    h = f.pow_enc(g.enc, (f.q - 1) // m)
    members = []
    x = 1
    for _ in range(m):
        members.append(x)
        x = f.mul_enc(x, h)
    return MultiplicativeSubgroup(f, f.from_enc(h), m, tuple(sorted(members)))


def has_element_of_order_4(g: MultiplicativeSubgroup) -> bool:
    return g.order % 4 == 0


def sqrt_minus_one(f: FieldSpec) -> FieldElement | None:
    """The square root of -1 with smaller encoding, or None if -1 is not a square."""
    minus_one = f.neg_enc(1)
    for x in range(f.q):
        if f.mul_enc(x, x) == minus_one:
            return f.from_enc(x)
    return None
