"""
Torus Wedge Calculus
c-symbols of commuting diagonal matrices modelled as exterior powers of a named unit
lattice with GL_n slot structure, compared modulo slot-permutation coinvariance

Equality in the coinvariant quotient is sufficient for equality of the
corresponding homology classes (conjugation acts trivially on homology); it is
never claimed to be necessary.
"""
import logging
import re
from collections import defaultdict
from dataclasses import dataclass
from itertools import permutations, product as cartesian

from modules.barhomology import BarChain, c_symbol, is_boundary
from modules.exactlinalg import SparseIntMatrix, solve_integer
from modules.groups.fields import get_field
from modules.groups.finite_group import diagonal_matrix, torus_with_weyl, weyl_elements

logger = logging.getLogger(__name__)

UNIT_ONE = '1'


# ============ LATTICE ============
class UnitLattice:
    """Free abelian group on e_{u,s} for unit names u and GL_n slots s = 1..n"""

    def __init__(self, unit_names, slots):
        names = tuple(unit_names)
        if len(set(names)) != len(names):
            raise ValueError(f'unit names must be distinct: {names}')
        if UNIT_ONE in names:
            raise ValueError('"1" is reserved for the trivial unit')
        if slots < 1:
            raise ValueError('need at least one slot')
        self.unit_names = names
        self.slots = slots
        self._unit_index = {u: i for i, u in enumerate(names)}
        # longest names first so that words like 'ab' or 'a1b2' split unambiguously
        self._word_pattern = re.compile(
            r'\s*\*?\s*(' + '|'.join(re.escape(u) for u in sorted(names, key=len, reverse=True)) + r')(?:\^(-?\d+))?'
        ) if names else None

    def __eq__(self, other):
        return isinstance(other, UnitLattice) and (self.unit_names, self.slots) == (other.unit_names, other.slots)

    def __hash__(self):
        return hash((self.unit_names, self.slots))

    def __repr__(self):
        return f'UnitLattice({list(self.unit_names)}, slots={self.slots})'

    @property
    def rank(self):
        return len(self.unit_names) * self.slots

    def basis_index(self, unit, slot):
        if unit not in self._unit_index:
            raise KeyError(f'unknown unit name {unit!r}')
        if not 1 <= slot <= self.slots:
            raise ValueError(f'slot {slot} outside 1..{self.slots}')
        return self._unit_index[unit] * self.slots + (slot - 1)

    def basis_label(self, index):
        u, s = divmod(index, self.slots)
        return self.unit_names[u], s + 1

    def parse_word(self, word):
        """Exponent map of a unit word such as 'ab', 'c^-1', 'a*b^2' or '1'"""
        if isinstance(word, dict):
            exps = defaultdict(int)
            for u, e in word.items():
                if u != UNIT_ONE:
                    self.basis_index(u, 1)
                    exps[u] += int(e)
            return {u: e for u, e in exps.items() if e}
        word = str(word).strip()
        if word in ('', UNIT_ONE):
            return {}
        exps = defaultdict(int)
        pos = 0
        while pos < len(word):
            match = self._word_pattern.match(word, pos) if self._word_pattern else None
            if not match or match.end() == pos:
                raise KeyError(f'cannot parse unit word {word!r} at position {pos}')
            exps[match.group(1)] += int(match.group(2) or 1)
            pos = match.end()
        return {u: e for u, e in exps.items() if e}

    def zero(self):
        return LatticeVector(self, {})


class LatticeVector:
    """Integer vector of a UnitLattice"""

    __slots__ = ('lattice', 'coords')

    def __init__(self, lattice, coords):
        self.lattice = lattice
        self.coords = {i: v for i, v in coords.items() if v}

    def __add__(self, other):
        coords = defaultdict(int, self.coords)
        for i, v in other.coords.items():
            coords[i] += v
        return LatticeVector(self.lattice, coords)

    def __neg__(self):
        return LatticeVector(self.lattice, {i: -v for i, v in self.coords.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k):
        return LatticeVector(self.lattice, {i: k * v for i, v in self.coords.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, LatticeVector) and self.lattice == other.lattice and self.coords == other.coords

    def __repr__(self):
        parts = [f'{v:+d}·e({u},{s})' for i, v in sorted(self.coords.items()) for u, s in [self.lattice.basis_label(i)]]
        return ' '.join(parts) or '0'


def basis_vector(lattice, unit, slot):
    return LatticeVector(lattice, {lattice.basis_index(unit, slot): 1})


def diag_vector(lattice, *entries):
    """diag(w_1, ..., w_n) as Σ_s Σ_u exp_u(w_s)·e_{u,s}"""
    if len(entries) == 1 and isinstance(entries[0], (list, tuple)):
        entries = tuple(entries[0])
    if len(entries) != lattice.slots:
        raise ValueError(f'expected {lattice.slots} diagonal entries, got {len(entries)}')
    coords = defaultdict(int)
    for slot, word in enumerate(entries, start=1):
        for unit, e in lattice.parse_word(word).items():
            coords[lattice.basis_index(unit, slot)] += e
    return LatticeVector(lattice, coords)


# ============ WEDGE CLASSES ============
def sort_with_sign(indices):
    """Sorted tuple and permutation sign, or (None, 0) if an index repeats"""
    if len(set(indices)) != len(indices):
        return None, 0
    items = list(indices)
    sign = 1
    for i in range(len(items)):
        for j in range(len(items) - 1 - i):
            if items[j] > items[j + 1]:
                items[j], items[j + 1] = items[j + 1], items[j]
                sign = -sign
    return tuple(items), sign


class WedgeClass:
    """Element of Λ^k of a unit lattice on strictly increasing basis monomials"""

    __slots__ = ('lattice', 'degree', 'terms')

    def __init__(self, lattice, degree, terms=None):
        self.lattice = lattice
        self.degree = degree
        clean = defaultdict(int)
        for monomial, k in (terms or {}).items():
            if len(monomial) != degree:
                raise ValueError(f'monomial {monomial} is not of degree {degree}')
            ordered, sign = sort_with_sign(tuple(monomial))
            if sign:
                clean[ordered] += sign * int(k)
        self.terms = {m: k for m, k in clean.items() if k}

    def _compatible(self, other):
        if not isinstance(other, WedgeClass) or self.lattice != other.lattice or self.degree != other.degree:
            raise ValueError('wedge classes live in different lattices or degrees')

    def __add__(self, other):
        self._compatible(other)
        terms = defaultdict(int, self.terms)
        for m, k in other.terms.items():
            terms[m] += k
        return WedgeClass(self.lattice, self.degree, terms)

    def __neg__(self):
        return WedgeClass(self.lattice, self.degree, {m: -k for m, k in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        return WedgeClass(self.lattice, self.degree, {m: k * v for m, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, WedgeClass):
            return NotImplemented
        return self.lattice == other.lattice and self.degree == other.degree and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f'WedgeClass(degree={self.degree}, terms={len(self.terms)})'

    def items(self):
        return sorted(self.terms.items())

    def to_json(self):
        label = self.lattice.basis_label
        return {
            'lattice': {'units': list(self.lattice.unit_names), 'slots': self.lattice.slots},
            'degree': self.degree,
            'terms': [{'monomial': [list(label(i)) for i in m], 'coeff': k} for m, k in self.items()],
        }

    @classmethod
    def from_json(cls, data):
        lattice = UnitLattice(data['lattice']['units'], data['lattice']['slots'])
        terms = defaultdict(int)
        for term in data['terms']:
            monomial = tuple(lattice.basis_index(u, s) for u, s in term['monomial'])
            terms[monomial] += int(term['coeff'])
        return cls(lattice, int(data['degree']), terms)


def wedge(*vectors):
    """Multilinear alternating product of lattice vectors"""
    if not vectors:
        raise ValueError('wedge needs at least one vector')
    lattice = vectors[0].lattice
    if any(v.lattice != lattice for v in vectors):
        raise ValueError('vectors belong to different lattices')
    terms = defaultdict(int)
    for choice in cartesian(*(sorted(v.coords.items()) for v in vectors)):
        coeff = 1
        for _, c in choice:
            coeff *= c
        terms[tuple(i for i, _ in choice)] += coeff
    return WedgeClass(lattice, len(vectors), terms)


# ============ NAMED CLASSES ============
def _gl2(lattice):
    if lattice.slots != 2:
        raise ValueError('this class lives in a GL2 lattice')


def l_class(lattice, a, b, c):
    """l_{a,b,c} = c(diag(a,1), diag(1,b), diag(c,c^-1))"""
    _gl2(lattice)
    return wedge(diag_vector(lattice, a, UNIT_ONE), diag_vector(lattice, UNIT_ONE, b), _antidiag_pair(lattice, c))


def iota_class(lattice, a, b):
    """Image of the symbol {a,b}: c(diag(a,1), diag(b,b^-1))"""
    _gl2(lattice)
    return wedge(diag_vector(lattice, a, UNIT_ONE), _antidiag_pair(lattice, b))


def cup_class(lattice, a, b):
    """c(diag(a,1), diag(1,b))"""
    _gl2(lattice)
    return wedge(diag_vector(lattice, a, UNIT_ONE), diag_vector(lattice, UNIT_ONE, b))


def phi_class(lattice, a, b, c):
    """Φ(a⊗{b,c}) = c(diag(a,a), diag(b,1), diag(c,c^-1))"""
    _gl2(lattice)
    return wedge(diag_vector(lattice, a, a), diag_vector(lattice, b, UNIT_ONE), _antidiag_pair(lattice, c))


def psi_class(lattice, a, b, c):
    """Ψ(a⊗{b,c}) = c(diag(a,1,1), diag(1,b,1), diag(1,c,c^-1))"""
    if lattice.slots != 3:
        raise ValueError('Ψ lives in a GL3 lattice')
    return wedge(
        diag_vector(lattice, a, UNIT_ONE, UNIT_ONE),
        diag_vector(lattice, UNIT_ONE, b, UNIT_ONE),
        diag_vector(lattice, UNIT_ONE, c, UNIT_ONE) - diag_vector(lattice, UNIT_ONE, UNIT_ONE, c),
    )


def _antidiag_pair(lattice, c):
    """diag(c, c^-1)"""
    return diag_vector(lattice, c, UNIT_ONE) - diag_vector(lattice, UNIT_ONE, c)


def include(w, target):
    """Slot-preserving embedding GL_m lattice -> GL_n lattice (m <= n)"""
    source = w.lattice
    if target.slots < source.slots:
        raise ValueError('target lattice has fewer slots')
    mapping = {}
    for i in range(source.rank):
        unit, slot = source.basis_label(i)
        mapping[i] = target.basis_index(unit, slot)
    return WedgeClass(target, w.degree, {tuple(mapping[i] for i in m): k for m, k in w.terms.items()})


def substitute(w, mapping, target=None):
    """Apply the lattice map induced by unit substitution u -> word (slots kept)"""
    source = w.lattice
    target = target or source
    images = {}
    for i in range(source.rank):
        unit, slot = source.basis_label(i)
        word = mapping.get(unit, unit)
        coords = {target.basis_index(u, slot): e for u, e in target.parse_word(word).items()}
        images[i] = LatticeVector(target, coords)
    total = WedgeClass(target, w.degree)
    for monomial, k in w.terms.items():
        total = total + k * wedge(*(images[i] for i in monomial))
    return total


# ============ WEYL COINVARIANTS ============
def act(lattice, perm, monomial):
    """σ·monomial for a slot permutation given as a tuple on 0..n-1; returns (monomial, sign)"""
    moved = []
    for i in monomial:
        u, s = divmod(i, lattice.slots)
        moved.append(u * lattice.slots + perm[s])
    return sort_with_sign(tuple(moved))


@dataclass
class WeylRelationLattice:
    """Relations ω - σ·ω over an orbit-closed monomial set, as matrix columns"""
    lattice: UnitLattice
    degree: int
    monomials: list
    matrix: SparseIntMatrix

    @property
    def relation_count(self):
        return self.matrix.cols


def relation_lattice(lattice, degree, seed_monomials, perms=None):
    """Close the seed monomials under the slot action and collect every relation"""
    perms = list(perms) if perms is not None else list(permutations(range(lattice.slots)))
    closure = set()
    frontier = list(seed_monomials)
    while frontier:
        m = frontier.pop()
        if m in closure:
            continue
        closure.add(m)
        for perm in perms:
            image, sign = act(lattice, perm, m)
            if sign and image not in closure:
                frontier.append(image)
    monomials = sorted(closure)
    position = {m: i for i, m in enumerate(monomials)}
    columns = []
    seen = set()
    for m in monomials:
        for perm in perms:
            image, sign = act(lattice, perm, m)
            if image == m and sign == 1:
                continue
            column = defaultdict(int)
            column[position[m]] += 1
            column[position[image]] -= sign
            key = tuple(sorted(column.items()))
            if key not in seen:
                seen.add(key)
                columns.append(dict(column))
    return WeylRelationLattice(lattice, degree, monomials, SparseIntMatrix.from_columns(len(monomials), columns))


def coinvariant_witness(w1, w2, perms=None):
    """Integer combination of relations equal to w1 - w2, or None"""
    difference = w1 - w2
    if not difference:
        return []
    rel = relation_lattice(difference.lattice, difference.degree, difference.terms, perms=perms)
    position = {m: i for i, m in enumerate(rel.monomials)}
    rhs = [0] * len(rel.monomials)
    for m, k in difference.terms.items():
        rhs[position[m]] = k
    return solve_integer(rel.matrix, rhs)


def coinvariant_equal(w1, w2, perms=None):
    """True iff w1 - w2 lies in the span of {ω - σω} over its slot-orbit closure"""
    return coinvariant_witness(w1, w2, perms=perms) is not None


# ============ IDENTITY CHECKS ============
def _lattice(slots, units=('a', 'b', 'c')):
    return UnitLattice(units, slots)


def two_torsion_combination(lattice, a='a', b='b', c='c'):
    """Φ(a⊗{b,c}) + Φ(b⊗{a,c}) + 2·l_{a,b,c}"""
    return phi_class(lattice, a, b, c) + phi_class(lattice, b, a, c) + 2 * l_class(lattice, a, b, c)


def gl3_lift_combination(lattice, a='a', b='b', c='c'):
    """inc(l_{a,b,c}) + Ψ(a⊗{b,c}) + Ψ(b⊗{a,c})"""
    gl2 = UnitLattice(lattice.unit_names, 2)
    return include(l_class(gl2, a, b, c), lattice) + psi_class(lattice, a, b, c) + psi_class(lattice, b, a, c)


DEFAULT_SPECIALIZATIONS = {'b=a': {'b': 'a'}, 'c=1': {'c': UNIT_ONE}, 'a=b': {'a': 'b'}}


def _identity_report(combination, slots, specializations):
    lattice = _lattice(slots)
    value = combination(lattice)
    zero = WedgeClass(lattice, 3)
    holds = coinvariant_equal(value, zero)
    report = {
        'lattice': {'units': list(lattice.unit_names), 'slots': slots},
        'expanded_terms': len(value),
        'holds': holds,
        'specializations': {},
    }
    for name, mapping in specializations.items():
        substituted = substitute(value, mapping)
        report['specializations'][name] = {
            'holds': coinvariant_equal(substituted, zero),
            'substitution_consistent': substituted == _specialized(combination, lattice, mapping),
            'terms': len(substituted),
        }
    report['passed'] = holds and all(
        s['holds'] and s['substitution_consistent'] for s in report['specializations'].values()
    )
    return report


def _specialized(combination, lattice, mapping):
    args = {u: mapping.get(u, u) for u in ('a', 'b', 'c')}
    return combination(lattice, **args)


def verify_two_torsion_identity(specializations=None):
    """Φ(a⊗{b,c}) + Φ(b⊗{a,c}) + 2·l_{a,b,c} ≡ 0 in S_2-coinvariants of Λ^3"""
    specs = specializations if specializations is not None else {
        k: DEFAULT_SPECIALIZATIONS[k] for k in ('b=a', 'c=1')
    }
    return _identity_report(two_torsion_combination, 2, specs)


def verify_gl3_lift_identity(specializations=None):
    """inc(l_{a,b,c}) + Ψ(a⊗{b,c}) + Ψ(b⊗{a,c}) ≡ 0 in S_3-coinvariants of Λ^3"""
    specs = specializations if specializations is not None else {
        k: DEFAULT_SPECIALIZATIONS[k] for k in ('a=b', 'c=1')
    }
    return _identity_report(gl3_lift_combination, 3, specs)


def square_identity(lattice=None):
    """l_{a,b,c^2} = 2·l_{a,b,c} exactly"""
    lattice = lattice or _lattice(2)
    return l_class(lattice, 'a', 'b', 'c^2') == 2 * l_class(lattice, 'a', 'b', 'c')


# ============ COMPILATION TO BAR CHAINS ============
def evaluate_word(field, lattice, word, assignment):
    """Field value of a unit word under an assignment name -> nonzero F_q value"""
    value = 1
    for unit, e in lattice.parse_word(word).items():
        x = assignment[unit]
        if x == 0:
            raise ValueError(f'unit {unit!r} is assigned 0')
        value = field.mul(value, field.power(x, e) if e >= 0 else field.power(field.inverse(x), -e))
    return value


def _diagonal_index(ambient, entries):
    label = diagonal_matrix(entries)
    if not ambient.has_label(label):
        raise ValueError(f'diag{tuple(entries)} is not an element of {ambient.name}')
    return ambient.index_of(label)


def compile_to_bar(w, assignment, ambient, field):
    """Compile each wedge monomial e_{u1,s1}∧... to c(diag(..), ...) in the ambient group"""
    lattice = w.lattice
    for unit in lattice.unit_names:
        if unit in assignment and not 0 < assignment[unit] < field.q:
            raise ValueError(f'unit {unit!r} is assigned {assignment[unit]}, not a unit of F{field.q}')
    total = BarChain.zero(ambient, w.degree)
    for monomial, k in w.terms.items():
        elements = []
        for i in monomial:
            unit, slot = lattice.basis_label(i)
            entries = [1] * lattice.slots
            entries[slot - 1] = evaluate_word(field, lattice, unit, assignment)
            elements.append(_diagonal_index(ambient, entries))
        total = total + k * c_symbol(ambient, *elements)
    return total


def compile_c_symbol(ambient, field, lattice, diagonals, assignment):
    """c(diag(w11,..), diag(w21,..), ...) compiled without multilinear expansion"""
    elements = []
    for words in diagonals:
        entries = [evaluate_word(field, lattice, word, assignment) for word in words]
        elements.append(_diagonal_index(ambient, entries))
    return c_symbol(ambient, *elements)


def two_torsion_direct_chain(ambient, field, assignment, a='a', b='b', c='c'):
    """Φ(a⊗{b,c}) + Φ(b⊗{a,c}) + 2·l_{a,b,c} with each term a single c-symbol"""
    lattice = _lattice(2)
    ci = f'{c}^-1'
    return (
        compile_c_symbol(ambient, field, lattice, [(a, a), (b, UNIT_ONE), (c, ci)], assignment)
        + compile_c_symbol(ambient, field, lattice, [(b, b), (a, UNIT_ONE), (c, ci)], assignment)
        + 2 * compile_c_symbol(ambient, field, lattice, [(a, UNIT_ONE), (UNIT_ONE, b), (c, ci)], assignment)
    )


def bridge_check(w1, w2, assignment, ambient, field, cap=None):
    """Compile two classes and decide whether their difference is a boundary"""
    slots = w1.lattice.slots
    hint = list(weyl_elements(ambient, slots).values())
    difference = compile_to_bar(w1, assignment, ambient, field) - compile_to_bar(w2, assignment, ambient, field)
    decision = is_boundary(difference, hint=hint, cap=cap)
    return {
        'assignment': dict(sorted(assignment.items())),
        'cells': len(difference),
        **decision.to_dict(),
    }


# identity name -> (combination, GL_n size, default field size)
BRIDGED_IDENTITIES = {
    'two-torsion': (two_torsion_combination, 2, 5),
    'gl3-lift': (gl3_lift_combination, 3, 3),
}


def identity_bridge(identity, assignments, q=None, cap=None, construction_cap=None):
    """
    Compile an identity's two sides into the torus-plus-Weyl group of GL_n(F_q)
    for each assignment and decide whether they differ by a boundary

    The GL2 identity runs in the order-32 group over F5, the GL3 one in the
    order-48 group over F3 by default.
    """
    if identity not in BRIDGED_IDENTITIES:
        raise ValueError(f'no bridge for identity {identity!r}; expected one of {sorted(BRIDGED_IDENTITIES)}')
    if not assignments:
        raise ValueError('identity_bridge needs at least one assignment')
    combination, slots, default_q = BRIDGED_IDENTITIES[identity]
    q = q or default_q
    field = get_field(q)
    ambient = torus_with_weyl(q, slots, cap=construction_cap)
    lattice = _lattice(slots)
    value = combination(lattice)
    zero = WedgeClass(lattice, 3)
    samples = [bridge_check(value, zero, assignment, ambient, field, cap=cap) for assignment in assignments]
    passed = sum(bool(s['is_boundary']) for s in samples)
    logger.info(f'{identity} bridge in {ambient.name}: {passed}/{len(samples)} boundaries')
    return {
        'identity': identity,
        'q': q,
        'group': ambient.name,
        'group_order': ambient.order,
        'passed': passed == len(samples),
        'boundaries': passed,
        'samples': samples,
    }


def random_assignments(rng, q, count, units=('a', 'b', 'c')):
    """count assignments of the unit names to nonzero F_q values drawn from a numpy Generator"""
    return [{u: int(rng.integers(1, q)) for u in units} for _ in range(count)]
