"""
Bar Chains
Normalized bar-complex chains, the boundary operator, c-symbols, shuffle products and pushforwards
"""
import logging
from collections import defaultdict
from functools import lru_cache
from itertools import combinations, permutations

import numpy as np
from sympy.combinatorics import Permutation

from modules.core import NonCommutingError, PreconditionError
from modules.groups.abelian import FiniteAbelianGroup, product
from modules.groups.finite_group import GroupHom, direct_product
from modules.groups.utils import element_from_json, element_to_json, group_from_description

logger = logging.getLogger(__name__)

MAX_SYMBOL_LENGTH = 4


def _same_group(G, H):
    return G is H or (G.order == H.order and G.fingerprint() == H.fingerprint())


class BarChain:
    """Integer combination of normalized cells [g1|...|gn]; cells containing the identity are zero"""

    __slots__ = ('group', 'degree', 'terms')

    def __init__(self, group, degree, terms=None):
        if degree < 0:
            raise ValueError('chain degree must be nonnegative')
        self.group = group
        self.degree = degree
        identity = group.identity
        order = group.order
        clean = defaultdict(int)
        for cell, coeff in (terms or {}).items():
            cell = tuple(int(g) for g in cell)
            if len(cell) != degree:
                raise ValueError(f'cell {cell} has length {len(cell)}, expected {degree}')
            if any(not 0 <= g < order for g in cell):
                raise ValueError(f'cell {cell} has elements outside {group.name}')
            if identity in cell:
                continue
            clean[cell] += int(coeff)
        self.terms = {cell: k for cell, k in clean.items() if k}

    @classmethod
    def zero(cls, group, degree):
        return cls(group, degree)

    @classmethod
    def cell(cls, group, elements, coeff=1):
        return cls(group, len(elements), {tuple(elements): coeff})

    def _compatible(self, other):
        if not isinstance(other, BarChain):
            raise TypeError('expected a BarChain')
        if self.degree != other.degree or not _same_group(self.group, other.group):
            raise ValueError('chains live in different groups or degrees')

    def __add__(self, other):
        self._compatible(other)
        terms = defaultdict(int, self.terms)
        for cell, k in other.terms.items():
            terms[cell] += k
        return BarChain(self.group, self.degree, terms)

    def __neg__(self):
        return BarChain(self.group, self.degree, {c: -k for c, k in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        if not isinstance(scalar, int):
            return NotImplemented
        return BarChain(self.group, self.degree, {c: scalar * k for c, k in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, BarChain):
            return NotImplemented
        return self.degree == other.degree and _same_group(self.group, other.group) and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f'BarChain({self.group.name}, degree={self.degree}, cells={len(self.terms)})'

    def items(self):
        return sorted(self.terms.items())

    def support(self):
        """Elements occurring in any cell"""
        return sorted({g for cell in self.terms for g in cell})

    def to_json(self):
        G = self.group
        return {
            'group': G.description,
            'degree': self.degree,
            'terms': [{'cells': [element_to_json(G, g) for g in cell], 'coeff': k} for cell, k in self.items()]
        }

    @classmethod
    def from_json(cls, data, group=None):
        G = group or group_from_description(data['group'])
        terms = defaultdict(int)
        for term in data.get('terms', []):
            cell = tuple(element_from_json(G, g) for g in term['cells'])
            terms[cell] += int(term['coeff'])
        return cls(G, int(data['degree']), terms)


# ============ BOUNDARY ============
def boundary(chain):
    """∂[g1|..|gn] = [g2|..|gn] + Σ (-1)^i [..|gi·gi+1|..] + (-1)^n [g1|..|gn-1]"""
    n = chain.degree
    if n < 1:
        raise PreconditionError('boundary needs degree >= 1')
    G = chain.group
    table = G.table
    e = G.identity
    out = defaultdict(int)
    last_sign = -1 if n % 2 else 1
    for cell, k in chain.terms.items():
        out[cell[1:]] += k
        for i in range(n - 1):
            prod = table[cell[i]][cell[i + 1]]
            if prod != e:
                out[cell[:i] + (prod,) + cell[i + 2:]] += k if i % 2 else -k
        out[cell[:-1]] += last_sign * k
    return BarChain(G, n - 1, out)


def is_cycle(chain):
    if chain.degree == 0:
        return True
    return not boundary(chain)


# ============ C-SYMBOLS ============
@lru_cache(maxsize=None)
def signed_permutations(n):
    """All permutations of range(n) with their signs"""
    return tuple((perm, Permutation(list(perm)).signature()) for perm in permutations(range(n)))


def c_symbol(group, *elements):
    """c(g1,..,gn) = Σ_σ sign(σ) [g_σ(1)|..|g_σ(n)] for pairwise commuting gi"""
    n = len(elements)
    if not 1 <= n <= MAX_SYMBOL_LENGTH:
        raise PreconditionError(f'c-symbols take 1 to {MAX_SYMBOL_LENGTH} elements, got {n}')
    elements = [int(g) for g in elements]
    for i in range(n):
        for j in range(i + 1, n):
            if not group.commute(elements[i], elements[j]):
                raise NonCommutingError(
                    f'{group.label(elements[i])!r} and {group.label(elements[j])!r} do not commute'
                )
    terms = defaultdict(int)
    for perm, sign in signed_permutations(n):
        terms[tuple(elements[p] for p in perm)] += sign
    return BarChain(group, n, terms)


# ============ SHUFFLE PRODUCT ============
@lru_cache(maxsize=None)
def shuffles(p, q):
    """(positions of the first factor, sign) for every (p, q)-shuffle"""
    out = []
    for positions in combinations(range(p + q), p):
        inversions = sum(pos - k for k, pos in enumerate(positions))
        out.append((positions, -1 if inversions % 2 else 1))
    return tuple(out)


def product_group(G, H):
    """G x H with the (i, j) -> i*|H| + j convention; abelian inputs stay abelian"""
    if isinstance(G, FiniteAbelianGroup) and isinstance(H, FiniteAbelianGroup):
        return product(G, H)
    return direct_product(G, H)


def shuffle_product(a, b, target=None):
    """Cross product a × b in G × G' via the shuffle map"""
    G, H = a.group, b.group
    target = target or product_group(G, H)
    if target.order != G.order * H.order:
        raise ValueError('target is not the product of the two chain groups')
    nh = H.order
    p, q = a.degree, b.degree
    left = lambda g: g * nh + H.identity  # noqa: E731
    right = lambda h: G.identity * nh + h  # noqa: E731
    terms = defaultdict(int)
    for cell_a, ka in a.terms.items():
        ia = [left(g) for g in cell_a]
        for cell_b, kb in b.terms.items():
            ib = [right(h) for h in cell_b]
            for positions, sign in shuffles(p, q):
                cell = [None] * (p + q)
                pos_set = set(positions)
                for pos, g in zip(positions, ia):
                    cell[pos] = g
                rest = iter(ib)
                for pos in range(p + q):
                    if pos not in pos_set:
                        cell[pos] = next(rest)
                terms[tuple(cell)] += sign * ka * kb
    return BarChain(target, p + q, terms)


def unit_chain(group, coeff=1):
    """coeff·[] in degree 0"""
    return BarChain(group, 0, {(): coeff})


# ============ FUNCTORIALITY ============
def pushforward(f, chain):
    """Chain map induced by a homomorphism; degenerate images vanish"""
    if not _same_group(f.source, chain.group):
        raise ValueError('chain does not live in the source of the homomorphism')
    images = f.images
    terms = defaultdict(int)
    for cell, k in chain.terms.items():
        terms[tuple(int(images[g]) for g in cell)] += k
    return BarChain(f.target, chain.degree, terms)


def conjugation_hom(group, w):
    """Inner automorphism x -> w x w^-1"""
    mul = group.mul
    images = mul[mul[w], group.inverse(w)]
    return GroupHom(group, group, np.asarray(images, dtype=np.int64), check=False)


def conjugate(chain, w):
    return pushforward(conjugation_hom(chain.group, w), chain)


def restrict(chain, inclusion):
    """Rewrite a chain of G supported in a subgroup H as a chain of H"""
    position = {int(g): i for i, g in enumerate(inclusion.images)}
    terms = {}
    for cell, k in chain.terms.items():
        try:
            terms[tuple(position[g] for g in cell)] = k
        except KeyError:
            raise ValueError('chain is not supported in the subgroup') from None
    return BarChain(inclusion.source, chain.degree, terms)
