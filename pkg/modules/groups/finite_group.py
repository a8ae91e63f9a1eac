"""
Finite Groups
Cayley-table groups, matrix groups over F_q, subgroups, products and homomorphisms
"""
import logging
from collections import deque
from itertools import permutations as all_permutations

import numpy as np

from modules.core import CapExceededError, HomomorphismError, fingerprint
from modules.groups import config as group_config
from modules.groups.config import AXIOM_CHECK_LIMIT
from modules.groups.fields import get_field

logger = logging.getLogger(__name__)


class FiniteGroup:
    """
    Finite group on element indices 0..order-1 with a Cayley table
    Labels are hashable descriptions of the elements (matrices, vectors, pairs)
    """

    def __init__(self, mul, labels=None, name=None, description=None, check=None):
        self._mul = np.ascontiguousarray(mul, dtype=np.int32)
        if self._mul.ndim != 2 or self._mul.shape[0] != self._mul.shape[1]:
            raise ValueError('Cayley table must be square')
        self._order = int(self._mul.shape[0])
        self._table = None
        self.identity = self._find_identity()
        self._inv = self._compute_inverses()
        self._labels = list(labels) if labels is not None else list(range(self._order))
        if len(self._labels) != self._order:
            raise ValueError('one label per element required')
        self._label_index = {label: i for i, label in enumerate(self._labels)}
        self.name = name or f'G{self._order}'
        self.description = description or {'kind': 'table', 'mul': self._mul.tolist()}
        if check is None:
            check = self._order <= AXIOM_CHECK_LIMIT
        if check:
            self.verify_axioms()

    def _find_identity(self):
        ar = np.arange(self._order, dtype=np.int32)
        hits = np.nonzero(np.all(self._mul == ar[None, :], axis=1))[0]
        if len(hits) != 1:
            raise ValueError('Cayley table has no unique identity')
        return int(hits[0])

    def _compute_inverses(self):
        rows, cols = np.nonzero(self._mul == self.identity)
        inv = np.full(self._order, -1, dtype=np.int32)
        inv[rows] = cols
        if np.any(inv < 0):
            raise ValueError('Cayley table has elements without inverses')
        return inv

    def __repr__(self):
        return f'<{type(self).__name__} {self.name} order={self.order}>'

    def __len__(self):
        return self.order

    @property
    def order(self):
        return self._order

    @property
    def mul(self):
        return self._mul

    @property
    def inv(self):
        return self._inv

    @property
    def table(self):
        """Cayley table as nested python lists for fast scalar lookups"""
        if self._table is None:
            self._table = self.mul.tolist()
        return self._table

    @property
    def labels(self):
        return self._labels

    def elements(self):
        return range(self.order)

    def non_identity(self):
        return [g for g in range(self.order) if g != self.identity]

    def label(self, g):
        return self._labels[g]

    def has_label(self, label):
        return label in self._label_index

    def index_of(self, label):
        try:
            return self._label_index[label]
        except KeyError:
            raise KeyError(f'{label!r} is not an element of {self.name}') from None

    def multiply(self, a, b):
        return self.table[a][b]

    def inverse(self, a):
        return int(self.inv[a])

    def power(self, a, k):
        if k < 0:
            a, k = self.inverse(a), -k
        result = self.identity
        for _ in range(k):
            result = self.multiply(result, a)
        return result

    def element_order(self, a):
        k, x = 1, a
        while x != self.identity:
            x = self.multiply(x, a)
            k += 1
        return k

    def commute(self, a, b):
        return self.multiply(a, b) == self.multiply(b, a)

    def conjugate(self, w, g):
        """w g w^-1"""
        return self.multiply(self.multiply(w, g), self.inverse(w))

    def is_abelian(self):
        return bool(np.array_equal(self.mul, self.mul.T))

    def fingerprint(self):
        return fingerprint(self.mul.tobytes())

    def verify_axioms(self):
        """Exhaustive identity, inverse and associativity check"""
        mul = self.mul
        n = self.order
        ar = np.arange(n)
        if not (np.array_equal(mul[self.identity], ar) and np.array_equal(mul[:, self.identity], ar)):
            raise ValueError(f'{self.name}: identity law fails')
        if not np.all(mul[ar, self.inv] == self.identity) or not np.all(mul[self.inv, ar] == self.identity):
            raise ValueError(f'{self.name}: inverse law fails')
        if not np.array_equal(mul[mul], mul[:, mul]):
            raise ValueError(f'{self.name}: multiplication is not associative')
        return True

    def closure(self, generators):
        """Elements of the subgroup generated by generators, in BFS order from the identity"""
        generators = [int(g) for g in generators]
        seen = {self.identity: 0}
        order = [self.identity]
        queue = deque([self.identity])
        while queue:
            x = queue.popleft()
            for s in generators:
                y = self.multiply(x, s)
                if y not in seen:
                    seen[y] = len(order)
                    order.append(y)
                    queue.append(y)
        return order

    def subgroup(self, generators, name=None):
        """Subgroup generated by generators, with its inclusion homomorphism"""
        generators = sorted({int(g) for g in generators})
        elements = np.array(self.closure(generators), dtype=np.int64)
        position = np.full(self.order, -1, dtype=np.int64)
        position[elements] = np.arange(len(elements))
        sub_mul = position[self.mul[np.ix_(elements, elements)]]
        labels = [self.label(int(g)) for g in elements]
        description = {'kind': 'subgroup', 'parent': self.description,
                       'generators': [_jsonable(self.label(g)) for g in generators]}
        H = FiniteGroup(sub_mul, labels=labels, name=name or f'<{len(generators)} gens in {self.name}>',
                        description=description, check=False)
        return H, GroupHom(H, self, elements, check=False)


def _jsonable(label):
    if isinstance(label, tuple):
        return [_jsonable(x) for x in label]
    return label


# ============ HOMOMORPHISMS ============
class GroupHom:
    """Homomorphism given by its full image table"""

    def __init__(self, source, target, images, check=True):
        self.source = source
        self.target = target
        self.images = np.asarray(images, dtype=np.int64)
        if self.images.shape != (source.order,):
            raise HomomorphismError('image table must list one image per source element')
        if check:
            self.verify()

    def verify(self):
        img = self.images
        lhs = self.target.mul[img[:, None], img[None, :]]
        rhs = img[self.source.mul]
        if not np.array_equal(lhs, rhs):
            raise HomomorphismError(f'map {self.source.name} -> {self.target.name} is not a homomorphism')
        return True

    def __call__(self, g):
        return int(self.images[g])

    def is_injective(self):
        return len(np.unique(self.images)) == self.source.order

    def is_surjective(self):
        return len(np.unique(self.images)) == self.target.order

    def compose(self, other):
        """self after other"""
        return GroupHom(other.source, self.target, self.images[other.images], check=False)


def hom(source, target, generator_images):
    """Extend {source generator: target element} to a homomorphism

    Breadth-first over the source from the identity; every relation met on the
    way is checked, then the full law is verified exhaustively.
    """
    gens = [(int(s), int(t)) for s, t in generator_images.items()]
    images = {source.identity: target.identity}
    queue = deque([source.identity])
    while queue:
        x = queue.popleft()
        for s, t in gens:
            y = source.multiply(x, s)
            img = target.multiply(images[x], t)
            if y not in images:
                images[y] = img
                queue.append(y)
            elif images[y] != img:
                raise HomomorphismError(f'generator images are inconsistent at element {source.label(y)!r}')
    if len(images) != source.order:
        raise HomomorphismError('given elements do not generate the source group')
    table = np.array([images[g] for g in range(source.order)], dtype=np.int64)
    return GroupHom(source, target, table)


def identity_hom(G):
    return GroupHom(G, G, np.arange(G.order), check=False)


# ============ MATRIX GROUPS ============
def _mat_mul(field, a, b):
    n = len(a)
    add, mul = field.add_list, field.mul_list
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = 0
            for k in range(n):
                acc = add[acc][mul[a[i][k]][b[k][j]]]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def _determinant(field, m):
    """Determinant over F_q by elimination"""
    rows = [list(r) for r in m]
    n = len(rows)
    det = 1
    for c in range(n):
        pivot = next((r for r in range(c, n) if rows[r][c]), None)
        if pivot is None:
            return 0
        if pivot != c:
            rows[c], rows[pivot] = rows[pivot], rows[c]
            det = int(field.neg[det])
        det = field.mul(det, rows[c][c])
        inv = field.inverse(rows[c][c])
        for r in range(c + 1, n):
            f = field.mul(rows[r][c], inv)
            if f:
                rows[r] = [field.sub(x, field.mul(f, y)) for x, y in zip(rows[r], rows[c])]
    return det


def identity_matrix(n):
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def diagonal_matrix(entries):
    n = len(entries)
    return tuple(tuple(int(entries[i]) if i == j else 0 for j in range(n)) for i in range(n))


def permutation_matrix(perm):
    """Matrix sending basis vector e_i to e_perm[i]"""
    n = len(perm)
    return tuple(tuple(int(perm[j] == i) for j in range(n)) for i in range(n))


def normalize_matrix(m):
    return tuple(tuple(int(x) for x in row) for row in m)


def from_matrix_generators(q, gens, cap=None, name=None):
    """Closure of invertible matrices over F_q as a Cayley-table group

    Elements are ordered by breadth-first discovery from the identity using
    right multiplication by the generators; labels are the matrices.
    """
    cap = cap or group_config.CONSTRUCTION_CAP
    field = get_field(q)
    gens = [normalize_matrix(g) for g in gens]
    if not gens:
        raise ValueError('at least one generator is required')
    n = len(gens[0])
    for g in gens:
        if len(g) != n or any(len(row) != n for row in g):
            raise ValueError('generators must be square matrices of the same size')
        if any(not 0 <= x < q for row in g for x in row):
            raise ValueError(f'matrix entries must be encoded elements of F_{q}')
        if _determinant(field, g) == 0:
            raise ValueError(f'generator {g} is not invertible over F_{q}')

    identity = identity_matrix(n)
    elements = [identity]
    index = {identity: 0}
    steps = [[] for _ in gens]
    parent = [None]
    i = 0
    while i < len(elements):
        x = elements[i]
        for k, s in enumerate(gens):
            y = _mat_mul(field, x, s)
            j = index.get(y)
            if j is None:
                if len(elements) >= cap:
                    raise CapExceededError('matrix group closure', f'more than {cap} elements', cap)
                j = len(elements)
                index[y] = j
                elements.append(y)
                parent.append((i, k))
            steps[k].append(j)
        i += 1

    order = len(elements)
    steps = [np.array(s, dtype=np.int32) for s in steps]
    mul = np.empty((order, order), dtype=np.int32)
    mul[:, 0] = np.arange(order)
    for j in range(1, order):
        i, k = parent[j]
        mul[:, j] = steps[k][mul[:, i]]
    logger.info(f'matrix group over F_{q} generated by {len(gens)} matrices has order {order}')
    description = {'kind': 'matrix', 'q': q, 'gens': [[list(r) for r in g] for g in gens]}
    return FiniteGroup(mul, labels=elements, name=name or f'<{len(gens)} gens in GL{n}(F{q})>',
                       description=description)


def direct_product(G, H, name=None):
    """G x H with element (i, j) at index i*|H| + j"""
    ng, nh = G.order, H.order
    mul = (G.mul.astype(np.int64)[:, None, :, None] * nh + H.mul[None, :, None, :]).reshape(ng * nh, ng * nh)
    labels = [(G.label(i), H.label(j)) for i in range(ng) for j in range(nh)]
    description = {'kind': 'product', 'factors': [G.description, H.description]}
    return FiniteGroup(mul, labels=labels, name=name or f'{G.name}x{H.name}', description=description,
                       check=False)


def torus_with_weyl(q, n, perms=None, cap=None):
    """Diagonal torus of GL_n(F_q) extended by permutation matrices

    The torus is generated by the primitive root in each diagonal slot. perms
    defaults to the adjacent transpositions (the whole symmetric group); pass
    an empty tuple for the torus alone.
    """
    field = get_field(q)
    g = field.primitive_root
    gens = []
    for slot in range(n):
        gens.append(diagonal_matrix([g if s == slot else 1 for s in range(n)]))
    if perms is None:
        perms = []
        for s in range(n - 1):
            p = list(range(n))
            p[s], p[s + 1] = p[s + 1], p[s]
            perms.append(tuple(p))
    for perm in perms:
        gens.append(permutation_matrix(perm))
    kind = 'torus' if not perms else 'torus+weyl'
    return from_matrix_generators(q, gens, cap=cap, name=f'{kind}(GL{n}(F{q}))')


def weyl_elements(G, n):
    """Indices of all n x n permutation matrices present in G, keyed by permutation"""
    found = {}
    for perm in all_permutations(range(n)):
        label = permutation_matrix(perm)
        if G.has_label(label):
            found[perm] = G.index_of(label)
    return found
