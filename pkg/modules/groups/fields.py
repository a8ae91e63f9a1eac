"""
Finite Field Arithmetic
Table-driven F_q for the supported prime powers, primitive roots and discrete logs
"""
import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from sympy import factorint

from modules.core import UnsupportedFieldError
from modules.groups.config import SUPPORTED_Q, IRREDUCIBLE_POLYNOMIALS

logger = logging.getLogger(__name__)


def _digits(value, p, k):
    out = []
    for _ in range(k):
        value, d = divmod(value, p)
        out.append(d)
    return out


def _encode(digits, p):
    return sum(d * p ** i for i, d in enumerate(digits))


class GaloisField:
    """F_q with elements encoded as integers 0..q-1 (base-p coefficient digits)"""

    def __init__(self, q):
        if q not in SUPPORTED_Q:
            raise UnsupportedFieldError(f'q={q} is not one of the supported field sizes {SUPPORTED_Q}')
        (p, k), = factorint(q).items()
        self.q = q
        self.p = p
        self.k = k
        self.modulus = IRREDUCIBLE_POLYNOMIALS.get(q, (0, 1))
        self.add_table = self._build_add_table()
        self.mul_table = self._build_mul_table()
        # python lists are faster than numpy scalars in the inner loops of matrix products
        self.add_list = self.add_table.tolist()
        self.mul_list = self.mul_table.tolist()
        self.neg = np.array([int(np.argmax(self.add_table[a] == 0)) for a in range(q)], dtype=np.int64)
        self.primitive_root = self._find_primitive_root()
        self.exp_table, self.log_table = self._build_log_tables()
        self._verify()
        logger.debug(f'built F_{q} with primitive root {self.primitive_root}')

    def _build_add_table(self):
        q, p, k = self.q, self.p, self.k
        digits = np.array([_digits(a, p, k) for a in range(q)], dtype=np.int64)
        weights = p ** np.arange(k, dtype=np.int64)
        summed = (digits[:, None, :] + digits[None, :, :]) % p
        return summed @ weights

    def _poly_mul(self, a, b):
        p, k = self.p, self.k
        da, db = _digits(a, p, k), _digits(b, p, k)
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        # reduce by the monic modulus from the top degree down
        mod = self.modulus
        for deg in range(len(prod) - 1, k - 1, -1):
            c = prod[deg]
            if c:
                for i, m in enumerate(mod):
                    prod[deg - k + i] = (prod[deg - k + i] - c * m) % p
        return _encode(prod[:k], p)

    def _build_mul_table(self):
        q = self.q
        table = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            for b in range(a, q):
                table[a, b] = table[b, a] = self._poly_mul(a, b)
        return table

    def power(self, a, n):
        result = 1
        n %= self.q - 1
        while n:
            if n & 1:
                result = self.mul_list[result][a]
            a = self.mul_list[a][a]
            n >>= 1
        return result

    def _find_primitive_root(self):
        order = self.q - 1
        if order == 1:
            return 1
        primes = list(factorint(order))
        for g in range(2, self.q):
            if all(self.power(g, order // r) != 1 for r in primes):
                return g
        raise ArithmeticError(f'no primitive root found in F_{self.q}')

    def _build_log_tables(self):
        order = self.q - 1
        exp_table = np.zeros(order, dtype=np.int64)
        log_table = np.full(self.q, -1, dtype=np.int64)
        x = 1
        for i in range(order):
            exp_table[i] = x
            log_table[x] = i
            x = self.mul_list[x][self.primitive_root]
        return exp_table, log_table

    def _verify(self):
        if np.any(self.log_table[1:] < 0):
            raise ArithmeticError(f'primitive root of F_{self.q} does not generate all units')
        if np.any(self.mul_table[1:, 1:] == 0):
            raise ArithmeticError(f'modulus for F_{self.q} is reducible')

    # Element operations
    def add(self, a, b):
        return self.add_list[a][b]

    def sub(self, a, b):
        return self.add_list[a][int(self.neg[b])]

    def mul(self, a, b):
        return self.mul_list[a][b]

    def inverse(self, a):
        if a == 0:
            raise ZeroDivisionError('0 has no inverse')
        return int(self.exp_table[(-self.log_table[a]) % (self.q - 1)])

    def dlog(self, a):
        """Discrete logarithm to the primitive root"""
        if a == 0:
            raise ValueError('discrete log of 0')
        return int(self.log_table[a])

    def exp(self, n):
        return int(self.exp_table[n % (self.q - 1)])

    def one_minus(self, a):
        return self.sub(1, a)

    def element(self, value):
        return FieldElement(self.q, int(value))

    def units(self):
        return list(range(1, self.q))


@lru_cache(maxsize=None)
def get_field(q):
    """Shared field instance per q"""
    return GaloisField(q)


@dataclass(frozen=True)
class FieldElement:
    """Element of F_q; value is the base-p coefficient encoding"""
    q: int
    value: int

    def __post_init__(self):
        if self.q not in SUPPORTED_Q:
            raise UnsupportedFieldError(f'q={self.q} is not supported')
        if not 0 <= self.value < self.q:
            raise ValueError(f'{self.value} is not a reduced element of F_{self.q}')

    @property
    def field(self):
        return get_field(self.q)

    def _check(self, other):
        if isinstance(other, int):
            other = FieldElement(self.q, other % self.q if self.field.k == 1 else other)
        if other.q != self.q:
            raise ValueError('elements of different fields')
        return other

    def __add__(self, other):
        other = self._check(other)
        return FieldElement(self.q, self.field.add(self.value, other.value))

    def __sub__(self, other):
        other = self._check(other)
        return FieldElement(self.q, self.field.sub(self.value, other.value))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        return FieldElement(self.q, self.field.mul(self.value, other.value))

    def __neg__(self):
        return FieldElement(self.q, int(self.field.neg[self.value]))

    def inverse(self):
        return FieldElement(self.q, self.field.inverse(self.value))

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        return FieldElement(self.q, self.field.power(self.value, n) if self.value else int(n == 0))

    def is_zero(self):
        return self.value == 0
