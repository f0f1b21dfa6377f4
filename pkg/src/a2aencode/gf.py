"""Exact arithmetic in prime fields F_q.

Elements are canonical residues in [0, q) and every operation is pure and
exact; Python's arbitrary-precision integers make overflow a non-issue for
the supported moduli (odd primes below 2**31). A field is constructed
together with its smallest multiplicative generator, so primitive roots of
unity of any order dividing q-1 are available on demand.
"""

from __future__ import annotations

MAX_MODULUS = 1 << 31


class FieldMismatch(ValueError):
    """Operands belong to different prime fields."""


class DivisionByZero(ZeroDivisionError):
    """Multiplicative inverse of zero requested."""


class NotPrime(ValueError):
    """Modulus is not an odd prime in the supported range."""


class NoSuchRoot(ValueError):
    """Requested root-of-unity order does not divide q-1."""


def is_prime(n: int) -> bool:
    """Deterministic trial-division primality check; adequate below 2**31."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> tuple[int, ...]:
    """Prime factors of n with multiplicity, in ascending order."""
    out = []
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.append(d)
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return tuple(out)


class PrimeField:
    """The prime field F_q, carrying its smallest generator g.

    g has multiplicative order exactly q-1, verified through the
    prime-factor criterion (g**((q-1)/r) != 1 for every prime r | q-1).
    Instances are immutable after construction and safe to share across
    threads. Elements are made by calling the field::

        F = PrimeField(17)
        a = F(5)
    """

    __slots__ = ("q", "g", "factors")

    def __init__(self, q: int):
        if not isinstance(q, int) or isinstance(q, bool) or not 2 < q < MAX_MODULUS:
            raise NotPrime(f"modulus must be a prime in (2, 2**31), got {q!r}")
        if not is_prime(q):
            raise NotPrime(f"{q} is not prime")
        self.q = q
        self.factors = prime_factors(q - 1)
        self.g = self._smallest_generator()

    def _smallest_generator(self) -> int:
        checks = [(self.q - 1) // r for r in sorted(set(self.factors))]
        for cand in range(2, self.q):
            if all(pow(cand, e, self.q) != 1 for e in checks):
                return cand
        raise AssertionError("every prime field has a generator")

    def __call__(self, value: int) -> "Fe":
        return Fe(value, self)

    def zero(self) -> "Fe":
        return Fe(0, self)

    def one(self) -> "Fe":
        return Fe(1, self)

    def root_of_unity(self, order: int) -> "Fe":
        """Primitive root of unity of the given order, namely g**((q-1)/order).

        The result r satisfies r**order == 1 and r**j != 1 for 0 < j < order.
        """
        if order < 1 or (self.q - 1) % order != 0:
            raise NoSuchRoot(f"order {order} does not divide q-1 = {self.q - 1}")
        return Fe(pow(self.g, (self.q - 1) // order, self.q), self)

    def __eq__(self, other):
        if isinstance(other, PrimeField):
            return self.q == other.q
        return NotImplemented

    def __hash__(self):
        return hash(("PrimeField", self.q))

    def __repr__(self):
        return f"PrimeField({self.q})"


def find_generator(q: int) -> PrimeField:
    """Validate primality of q and return F_q with its smallest generator."""
    return PrimeField(q)


class Fe:
    """One field element: a canonical residue plus a reference to its field."""

    __slots__ = ("value", "field")

    def __init__(self, value: int, field: PrimeField):
        self.value = value % field.q
        self.field = field

    def _coerce(self, other) -> "Fe":
        if not isinstance(other, Fe):
            raise TypeError(f"expected a field element, got {type(other).__name__}")
        if other.field.q != self.field.q:
            raise FieldMismatch(
                f"mixed fields F_{self.field.q} and F_{other.field.q}"
            )
        return other

    def __add__(self, other):
        other = self._coerce(other)
        return Fe(self.value + other.value, self.field)

    def __sub__(self, other):
        other = self._coerce(other)
        return Fe(self.value - other.value, self.field)

    def __mul__(self, other):
        other = self._coerce(other)
        return Fe(self.value * other.value, self.field)

    def __neg__(self):
        return Fe(-self.value, self.field)

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise ValueError("negative exponent; use inv() for inverses")
        return Fe(pow(self.value, exponent, self.field.q), self.field)

    def inv(self) -> "Fe":
        if self.value == 0:
            raise DivisionByZero(f"0 has no inverse in F_{self.field.q}")
        return Fe(pow(self.value, -1, self.field.q), self.field)

    def __truediv__(self, other):
        other = self._coerce(other)
        return self * other.inv()

    def __eq__(self, other):
        if isinstance(other, Fe):
            return self.field.q == other.field.q and self.value == other.value
        return NotImplemented

    def __hash__(self):
        return hash((self.field.q, self.value))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"Fe({self.value} mod {self.field.q})"
