"""Exact arithmetic in GF(p^h).

Elements are integers in ``[0, q)`` whose base-p digits are the polynomial
coefficients, constant term first: in GF(9) with modulus x^2+1 the element
``x`` is 3 and ``x + 2`` is 5.  Prime fields use plain modular arithmetic;
extension fields precompute addition and exp/log tables once per spec.

All operations accept either Python ints or integer numpy arrays, which is
what lets the plane builder compute incidences for all points at once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from planedom.errors import DivisionByZero, NotPrime, Unsupported

MAX_ORDER = 1 << 16

# Monic irreducible moduli, coefficients constant term first, for every
# proper prime power up to 169.
MODULI: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 0, 0, 0, 1),
    (2, 7): (1, 1, 0, 0, 0, 0, 0, 1),
    (3, 2): (1, 0, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 1, 0, 0, 1),
    (5, 2): (2, 0, 1),
    (5, 3): (1, 1, 0, 1),
    (7, 2): (1, 0, 1),
    (11, 2): (1, 0, 1),
    (13, 2): (2, 0, 1),
}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % d for d in range(3, math.isqrt(n) + 1, 2))


def prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, h)`` with ``q == p**h``, or None if q is not a prime power."""
    if q < 2:
        return None
    for p in range(2, q + 1):
        if q % p == 0:
            h = 0
            while q % p == 0:
                q //= p
                h += 1
            return (p, h) if q == 1 else None
    return None


def _poly_mulmod(a: list[int], b: list[int], mod: tuple[int, ...], p: int) -> list[int]:
    h = len(mod) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for deg in range(len(prod) - 1, h - 1, -1):
        c = prod[deg]
        if c:
            for i in range(h + 1):
                prod[deg - h + i] = (prod[deg - h + i] - c * mod[i]) % p
    return (prod + [0] * h)[:h]


@dataclass(frozen=True)
class FieldSpec:
    """GF(p^h) context.  Immutable; tables are built lazily on first use."""

    p: int
    h: int
    modulus: tuple[int, ...] = field(repr=False)

    @property
    def q(self) -> int:
        return self.p**self.h

    @property
    def is_prime_field(self) -> bool:
        return self.h == 1

    def digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.h):
            a, d = divmod(a, self.p)
            out.append(d)
        return out

    def from_digits(self, coeffs) -> int:
        return sum(int(c) * self.p**i for i, c in enumerate(coeffs))

    @cached_property
    def _tables(self):
        q, p = self.q, self.p
        reps = np.arange(q)
        dig = np.stack([(reps // p**i) % p for i in range(self.h)], axis=1)
        weights = p ** np.arange(self.h)
        add = ((dig[:, None, :] + dig[None, :, :]) % p) @ weights
        neg = ((-dig) % p) @ weights

        # exp/log over a primitive element found by trial
        for g in range(2, q):
            exp = [1]
            cur = self.digits(1)
            gd = self.digits(g)
            for _ in range(q - 2):
                cur = _poly_mulmod(cur, gd, self.modulus, p)
                exp.append(self.from_digits(cur))
            if len(set(exp)) == q - 1:
                break
        else:  # pragma: no cover - every finite field has a primitive element
            raise Unsupported(f"no primitive element found for GF({q})")
        exp_arr = np.array(exp + exp, dtype=np.int64)
        log_arr = np.zeros(q, dtype=np.int64)
        log_arr[np.array(exp)] = np.arange(q - 1)
        return add.astype(np.int64), neg.astype(np.int64), exp_arr, log_arr

    # arithmetic -----------------------------------------------------------

    def add(self, a, b):
        if self.is_prime_field:
            return (a + b) % self.p
        return self._lookup(self._tables[0], a, b)

    def neg(self, a):
        if self.is_prime_field:
            return (-a) % self.p
        return self._scalar(self._tables[1][a])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.is_prime_field:
            return (a * b) % self.p
        _, _, exp, log = self._tables
        a_arr, b_arr = np.asarray(a), np.asarray(b)
        out = np.where((a_arr == 0) | (b_arr == 0), 0, exp[log[a_arr] + log[b_arr]])
        return self._scalar(out)

    def inv(self, a):
        if np.any(np.asarray(a) == 0):
            raise DivisionByZero("inverse of 0")
        if self.is_prime_field:
            if isinstance(a, np.ndarray):
                return np.array([pow(int(x), -1, self.p) for x in a.ravel()]).reshape(a.shape)
            return pow(int(a), -1, self.p)
        _, _, exp, log = self._tables
        return self._scalar(exp[(self.q - 1 - log[a]) % (self.q - 1)])

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        result, base = 1, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return int(result)

    def elements(self) -> list[int]:
        return list(range(self.q))

    def subfield(self, order: int) -> list[int]:
        """Elements of the unique subfield of the given order (x^order == x)."""
        return [a for a in range(self.q) if self.pow(a, order) == a]

    @staticmethod
    def _lookup(table, a, b):
        out = table[a, b]
        return int(out) if np.ndim(out) == 0 else out

    @staticmethod
    def _scalar(out):
        return int(out) if np.ndim(out) == 0 else out


def field_new(p: int, h: int = 1) -> FieldSpec:
    """Build the field GF(p^h) from the built-in modulus table.

    >>> field_new(3, 2).modulus
    (1, 0, 1)
    """
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if h < 1:
        raise Unsupported(f"exponent must be >= 1, got {h}")
    if p**h > MAX_ORDER:
        raise Unsupported(f"GF({p}^{h}) exceeds the supported order {MAX_ORDER}")
    if h == 1:
        return FieldSpec(p, 1, (0, 1))
    try:
        return FieldSpec(p, h, MODULI[(p, h)])
    except KeyError:
        raise Unsupported(f"no built-in modulus for GF({p}^{h})") from None


def field_of_order(q: int) -> FieldSpec:
    ph = prime_power(q)
    if ph is None:
        raise Unsupported(f"{q} is not a prime power")
    return field_new(*ph)


_OPS = {
    "add": FieldSpec.add,
    "sub": FieldSpec.sub,
    "mul": FieldSpec.mul,
    "inv": lambda spec, a, _b=None: spec.inv(a),
    "pow": FieldSpec.pow,
}


def arith(spec: FieldSpec, op: str, a: int, b: int | None = None) -> int:
    """Dispatch one of add/sub/mul/inv/pow by name."""
    for x in (a, b):
        if op != "pow" and x is not None and not 0 <= x < spec.q:
            raise ValueError(f"{x} is not an element of GF({spec.q})")
    return int(_OPS[op](spec, a, b))
