"""
Finite Abelian Groups
Products of cyclic groups with lexicographically ordered exponent vectors
"""
import math

import numpy as np

from modules.groups.fields import get_field
from modules.groups.finite_group import FiniteGroup, GroupHom


class FiniteAbelianGroup(FiniteGroup):
    """Z/m1 x ... x Z/mr; element index = mixed-radix value of its exponent vector"""

    def __init__(self, orders, name=None):
        orders = tuple(int(m) for m in orders)
        if any(m < 1 for m in orders):
            raise ValueError(f'cyclic factor orders must be >= 1, got {orders}')
        self.orders = orders
        self._order = math.prod(orders)
        self._strides = tuple(math.prod(orders[i + 1:]) for i in range(len(orders)))
        self._mul = None
        self._inv = None
        self._table = None
        self.identity = 0
        self.name = name or ('x'.join(f'Z/{m}' for m in orders) if orders else '1')
        self.description = {'kind': 'abelian', 'orders': list(orders)}

    def vector(self, g):
        return tuple((g // s) % m for s, m in zip(self._strides, self.orders))

    def index(self, vector):
        if len(vector) != len(self.orders):
            raise ValueError(f'vector {vector} does not match factor orders {self.orders}')
        return sum((int(v) % m) * s for v, m, s in zip(vector, self.orders, self._strides))

    def _coordinates(self):
        if not self.orders:
            return np.zeros((0, self._order), dtype=np.int64)
        return np.array(np.unravel_index(np.arange(self._order), self.orders), dtype=np.int64)

    @property
    def mul(self):
        if self._mul is None:
            coords = self._coordinates()
            total = np.zeros((self._order, self._order), dtype=np.int64)
            for axis, (m, s) in enumerate(zip(self.orders, self._strides)):
                c = coords[axis]
                total += ((c[:, None] + c[None, :]) % m) * s
            self._mul = total.astype(np.int32)
        return self._mul

    @property
    def inv(self):
        if self._inv is None:
            coords = self._coordinates()
            total = np.zeros(self._order, dtype=np.int64)
            for axis, (m, s) in enumerate(zip(self.orders, self._strides)):
                total += ((-coords[axis]) % m) * s
            self._inv = total.astype(np.int32)
        return self._inv

    @property
    def labels(self):
        return [self.vector(g) for g in range(self._order)]

    def label(self, g):
        return self.vector(g)

    def has_label(self, label):
        return len(label) == len(self.orders) and all(0 <= int(v) < m for v, m in zip(label, self.orders))

    def index_of(self, label):
        if not self.has_label(label):
            raise KeyError(f'{label!r} is not an element of {self.name}')
        return self.index(label)

    def multiply(self, a, b):
        if self._table is not None:
            return self._table[a][b]
        va, vb = self.vector(a), self.vector(b)
        return self.index(tuple(x + y for x, y in zip(va, vb)))

    def inverse(self, a):
        return self.index(tuple(-x for x in self.vector(a)))

    def commute(self, a, b):
        return True

    def is_abelian(self):
        return True

    def verify_axioms(self):
        return True

    def generators(self):
        """Unit vectors of the nontrivial factors"""
        gens = []
        for axis, m in enumerate(self.orders):
            if m > 1:
                e = [0] * len(self.orders)
                e[axis] = 1
                gens.append(self.index(e))
        return gens

    def factor_element(self, axis, k):
        """k times the generator of factor axis"""
        e = [0] * len(self.orders)
        e[axis] = k
        return self.index(e)

    def projection(self, axes):
        """Homomorphism onto the product of the chosen factors"""
        axes = list(axes)
        target = FiniteAbelianGroup([self.orders[a] for a in axes])
        coords = self._coordinates()
        images = np.zeros(self._order, dtype=np.int64)
        for a, s in zip(axes, target._strides):
            images += coords[a] * s
        return GroupHom(self, target, images, check=False)

    def inclusion(self, target, axes):
        """Homomorphism placing this group's factors at the given axes of target"""
        axes = list(axes)
        if [target.orders[a] for a in axes] != list(self.orders):
            raise ValueError('factor orders do not match the target axes')
        coords = self._coordinates()
        images = np.zeros(self._order, dtype=np.int64)
        for axis, a in enumerate(axes):
            images += coords[axis] * target._strides[a]
        return GroupHom(self, target, images, check=False)


def cyclic(n):
    return FiniteAbelianGroup((n,))


def product(A, B):
    """A x B with element (a, b) at index a*|B| + b"""
    return FiniteAbelianGroup(A.orders + B.orders)


def trivial():
    return FiniteAbelianGroup(())


class UnitGroup(FiniteAbelianGroup):
    """F_q* as a cyclic group; element k is the k-th power of the primitive root"""

    def __init__(self, field):
        super().__init__((field.q - 1,), name=f'F{field.q}*')
        self.field = field
        self.primitive_root = field.primitive_root
        self.description = {'kind': 'units', 'q': field.q}

    def dlog(self, value):
        """Group element (an exponent) of a nonzero field value"""
        return self.field.dlog(value)

    def exp(self, g):
        """Field value of a group element"""
        return self.field.exp(g)

    def field_values(self):
        return [self.exp(g) for g in range(self.order)]


def units_of_field(q):
    """Unit group of F_q with its discrete-log map"""
    return UnitGroup(get_field(q))
