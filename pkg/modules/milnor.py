"""
Milnor K-theory Models
Unit tensor modules modulo Steinberg relations over small finite fields, the three-term
δ complex U⊗U⊗U -> U⊗U⊗K1 -> U⊗K2 -> K3 and the kernel-element builder Σ l_{a,b,c}

Finite fields lack many units: every model here is a computational surrogate and the
reports say so. Their K2 and K3 are trivial, which makes them regression oracles.
"""
import logging
from dataclasses import dataclass, field
from itertools import product as cartesian

from modules.barhomology import is_boundary
from modules.core import PreconditionError, UnsupportedFieldError, cached, model_cache
from modules.exactlinalg import PresentedAbelianGroup, SparseIntMatrix, kernel_basis
from modules.groups.config import SUPPORTED_Q
from modules.groups.fields import get_field
from modules.groups.finite_group import torus_with_weyl, weyl_elements
from modules.toruscalc import (
    UNIT_ONE, UnitLattice, WedgeClass, coinvariant_equal, compile_to_bar,
    l_class, phi_class, two_torsion_direct_chain
)

logger = logging.getLogger(__name__)

SURROGATE_NOTE = 'finite-field surrogate: K2 and K3 of finite fields vanish'


# ============ UNIT MODULES ============
class UnitModule:
    """Presented unit group with a logarithm into its generator coordinates"""

    def __init__(self, presentation, log, field=None, names=None):
        self.presentation = presentation
        self._log = log
        self.field = field
        self.names = names

    @classmethod
    def for_field(cls, q):
        """F_q* = Z/(q-1) on the primitive root, logarithm = discrete log"""
        if q not in SUPPORTED_Q:
            raise UnsupportedFieldError(f'q={q} is not one of the supported field sizes {SUPPORTED_Q}')
        F = get_field(q)
        presentation = PresentedAbelianGroup.from_relation_vectors(('g',), [{0: q - 1}])

        def log(value):
            value = int(value)
            if not 0 <= value < q:
                raise ValueError(f'{value} is not an element of F_{q}')
            if value == 0:
                raise PreconditionError('0 is not a unit')
            return {0: F.dlog(value)}
        return cls(presentation, log, field=F)

    @classmethod
    def formal(cls, names):
        """Free abelian group on named units; '1' and products like 'ab' are words"""
        names = tuple(names)
        lattice = UnitLattice(names, 1)
        presentation = PresentedAbelianGroup.free(names)

        def log(word):
            return {names.index(u): e for u, e in lattice.parse_word(word).items()}
        return cls(presentation, log, names=names)

    @property
    def rank(self):
        return self.presentation.rank

    @property
    def q(self):
        return self.field.q if self.field else None

    def log(self, unit):
        return self._log(unit)

    def units(self):
        """Units for exhaustive checks: field units, or the named generators"""
        return self.field.units() if self.field else list(self.names)

    def steinberg_pairs(self):
        """(a, 1-a) for a outside {0, 1}"""
        if not self.field:
            return []
        F = self.field
        return [(a, F.one_minus(a)) for a in range(2, F.q)]


def outer(module, *units):
    """Coordinates of log(u1)⊗...⊗log(uk) in the k-fold tensor power"""
    n = module.rank
    vector = {0: 1}
    for u in units:
        logs = module.log(u)
        nxt = {}
        for i, a in vector.items():
            for j, b in logs.items():
                idx = i * n + j
                nxt[idx] = nxt.get(idx, 0) + a * b
        vector = {k: v for k, v in nxt.items() if v}
    return vector


def tensor_power(module, k):
    power = module.presentation
    for _ in range(k - 1):
        power = power.tensor(module.presentation)
    return power


def _basis(n, k):
    """Generator coordinates of the k-fold tensor power as tuples"""
    return list(cartesian(range(n), repeat=k))


def _flat(n, coords):
    idx = 0
    for c in coords:
        idx = idx * n + c
    return idx


# ============ K-THEORY MODELS ============
@dataclass
class TensorModel:
    """(U^⊗k) / ⟨Steinberg in adjacent slots⟩ with its reduction map"""
    units: UnitModule
    degree: int
    presentation: PresentedAbelianGroup
    synthetic: bool = False

    @property
    def q(self):
        return self.units.q

    def symbol(self, *units):
        """Unreduced coordinates of {u1, ..., uk}"""
        if len(units) != self.degree:
            raise ValueError(f'a degree-{self.degree} symbol takes {self.degree} units')
        return outer(self.units, *units)

    def reduce(self, vector):
        return self.presentation.normal_form(vector)

    def is_zero(self, vector):
        return self.presentation.is_zero(vector)

    def invariants(self):
        return self.presentation.invariants()

    def is_trivial(self):
        return self.invariants().is_trivial

    def to_dict(self):
        return {
            'q': self.q,
            'degree': self.degree,
            'invariants': self.invariants().to_dict(),
            'trivial': self.is_trivial(),
            'synthetic': self.synthetic,
            'note': None if self.synthetic else SURROGATE_NOTE,
        }


class K2Model(TensorModel):
    """K2 = U⊗U / ⟨log a ⊗ log(1-a)⟩"""


class K3Model(TensorModel):
    """K3 = U⊗U⊗U / ⟨{a,1-a,c}, {c,a,1-a}⟩"""


def _steinberg_relations(units, degree):
    n = units.rank
    relations = []
    for a, b in units.steinberg_pairs():
        pair = outer(units, a, b)
        for left in range(degree - 1):
            right = degree - 2 - left
            for prefix in _basis(n, left):
                for suffix in _basis(n, right):
                    column = {}
                    for idx, v in pair.items():
                        i, j = divmod(idx, n)
                        key = _flat(n, prefix + (i, j) + suffix)
                        column[key] = column.get(key, 0) + v
                    relations.append(column)
    return relations


@cached(model_cache)
def k2_model(q):
    """K2^M(F_q) presented as a quotient of U⊗U"""
    units = UnitModule.for_field(q)
    presentation = tensor_power(units, 2).quotient(_steinberg_relations(units, 2))
    model = K2Model(units, 2, presentation)
    logger.info(f'K2 model of F_{q}: {model.invariants().describe()}')
    return model


@cached(model_cache)
def k3_model(q):
    """K3^M(F_q) presented as a quotient of U⊗U⊗U"""
    units = UnitModule.for_field(q)
    presentation = tensor_power(units, 3).quotient(_steinberg_relations(units, 3))
    model = K3Model(units, 3, presentation)
    logger.info(f'K3 model of F_{q}: {model.invariants().describe()}')
    return model


def synthetic_k2_model(units, relations=None):
    """
    K2 on formal units with caller-chosen relations
    relations are pairs (x, y) imposing log x ⊗ log y = 0; by default only
    antisymmetry u⊗v + v⊗u is imposed, leaving a nontrivial group
    """
    module = units if isinstance(units, UnitModule) else UnitModule.formal(units)
    n = module.rank
    columns = []
    if relations is None:
        for i in range(n):
            for j in range(i, n):
                col = {i * n + j: 1}
                col[j * n + i] = col.get(j * n + i, 0) + 1
                columns.append(col)
    else:
        columns = [outer(module, x, y) for x, y in relations]
    presentation = tensor_power(module, 2).quotient(columns)
    return K2Model(module, 2, presentation, synthetic=True)


def synthetic_k3_model(k2):
    """K3 matching a synthetic K2: its relations imposed in both adjacent slot pairs"""
    n = k2.units.rank
    columns = []
    for rel in k2.presentation.relations.column_dicts():
        for c in range(n):
            columns.append({i * n + c: v for i, v in rel.items()})
            columns.append({c * n * n + i: v for i, v in rel.items()})
    presentation = tensor_power(k2.units, 3).quotient(columns)
    return K3Model(k2.units, 3, presentation, synthetic=True)


# ============ THE δ COMPLEX ============
@dataclass
class DeltaComplex:
    """
    U⊗U⊗U --δ0--> U⊗U⊗K1 --δ1--> U⊗K2 --δ2--> K3
    All four terms share the generator coordinates e_i⊗e_j⊗e_k of U^⊗3
    """
    units: UnitModule
    k2: K2Model
    k3: K3Model
    terms: list = field(default_factory=list)
    maps: list = field(default_factory=list)

    @classmethod
    def build(cls, k2, k3=None):
        units = k2.units
        k3 = k3 or (synthetic_k3_model(k2) if k2.synthetic else k3_model(units.q))
        n = units.rank
        free3 = tensor_power(units, 3)
        c2 = units.presentation.tensor(k2.presentation)
        terms = [free3, free3, c2, k3.presentation]

        delta0, delta1, delta2 = {}, {}, {}
        for i, j, k in _basis(n, 3):
            src = _flat(n, (i, j, k))
            # a⊗b⊗c -> b⊗c⊗{a} + a⊗c⊗{b} + a⊗b⊗{c}
            delta0[src] = _accumulate([_flat(n, (j, k, i)), _flat(n, (i, k, j)), src])
            # a⊗b⊗{c} -> a⊗{b,c} + b⊗{a,c}
            delta1[src] = _accumulate([src, _flat(n, (j, i, k))])
            # a⊗{b,c} -> {a,b,c}
            delta2[src] = {src: 1}
        size = n ** 3
        maps = [SparseIntMatrix.from_columns(size, [m[c] for c in range(size)]) for m in (delta0, delta1, delta2)]
        return cls(units, k2, k3, terms, maps)

    @property
    def delta0(self):
        return self.maps[0]

    @property
    def delta1(self):
        return self.maps[1]

    @property
    def delta2(self):
        return self.maps[2]

    def apply(self, k, vector):
        return self.maps[k].apply(vector)


def _accumulate(indices):
    out = {}
    for idx in indices:
        out[idx] = out.get(idx, 0) + 1
    return {k: v for k, v in out.items() if v}


def delta_complex(q=None, k2=None):
    if k2 is None:
        k2 = k2_model(q)
    return DeltaComplex.build(k2)


def delta0(complex_, a, b, c):
    """δ0(a⊗b⊗c) in U⊗U⊗K1"""
    return complex_.apply(0, outer(complex_.units, a, b, c))


def delta1(complex_, a, b, c):
    """δ1(a⊗b⊗{c}) in U⊗K2"""
    return complex_.apply(1, outer(complex_.units, a, b, c))


def delta2(complex_, a, b, c):
    """δ2(a⊗{b,c}) in K3"""
    return complex_.apply(2, outer(complex_.units, a, b, c))


def verify_complex(q=None, k2=None, exhaustive=True):
    """δ1∘δ0 = 0 and δ2∘δ1 = 0 on every generator, plus well-definedness of each map"""
    cx = delta_complex(q, k2)
    report = {'q': cx.units.q, 'synthetic': cx.k2.synthetic, 'note': None if cx.k2.synthetic else SURROGATE_NOTE}
    for k in range(3):
        source, target = cx.terms[k], cx.terms[k + 1]
        image = cx.maps[k] @ source.relations
        report[f'delta{k}_well_defined'] = target.contains_lattice(image)
    report['delta1_delta0_zero'] = cx.terms[2].contains_lattice(cx.delta1 @ cx.delta0)
    report['delta2_delta1_zero'] = cx.terms[3].contains_lattice(cx.delta2 @ cx.delta1)
    if exhaustive:
        failures = 0
        units = cx.units.units()
        for a, b, c in cartesian(units, repeat=3):
            if not cx.terms[2].is_zero(cx.apply(1, delta0(cx, a, b, c))):
                failures += 1
            if not cx.terms[3].is_zero(cx.apply(2, delta1(cx, a, b, c))):
                failures += 1
        report['unit_triples_checked'] = len(units) ** 3
        report['unit_triple_failures'] = failures
    report['passed'] = all(v for k, v in report.items() if k.endswith(('_zero', '_well_defined'))) and \
        report.get('unit_triple_failures', 0) == 0
    if not report['passed']:
        logger.warning(f'δ complex check failed: {report}')
    return report


def _order_or_none(invariants):
    order = invariants.order
    return int(order) if order != float('inf') else None


def exactness_report(q=None, k2=None):
    """Compare ker δ2 and im δ1 as subgroups of U⊗K2"""
    cx = delta_complex(q, k2)
    c2, c3 = cx.terms[2], cx.terms[3]
    size = c2.rank
    image_group = c2.quotient(cx.delta1.column_dicts())
    negated = SparseIntMatrix.from_columns(c3.rank, [{r: -v for r, v in col.items()} for col in c3.relations.column_dicts()])
    kernel = kernel_basis(cx.delta2.hstack(negated))
    kernel_vectors = [{r: v for r, v in col.items() if r < size} for col in kernel.column_dicts()]
    kernel_group = c2.quotient(kernel_vectors)

    image_in_kernel = all(kernel_group.is_zero(col) for col in cx.delta1.column_dicts())
    kernel_in_image = all(image_group.is_zero(v) for v in kernel_vectors)
    ambient = c2.invariants()
    report = {
        'q': cx.units.q,
        'synthetic': cx.k2.synthetic,
        'k2_trivial': cx.k2.is_trivial(),
        'ambient': ambient.to_dict(),
        'ambient_mod_image': image_group.invariants().to_dict(),
        'ambient_mod_kernel': kernel_group.invariants().to_dict(),
        'image_in_kernel': image_in_kernel,
        'kernel_in_image': kernel_in_image,
        'equal': image_in_kernel and kernel_in_image,
    }
    total = _order_or_none(ambient)
    if total is not None:
        report['image_order'] = total // _order_or_none(image_group.invariants())
        report['kernel_order'] = total // _order_or_none(kernel_group.invariants())
    if cx.k2.is_trivial():
        report['note'] = 'U⊗K2 is zero, so both subgroups are zero and agree trivially'
    elif not cx.k2.synthetic:
        report['note'] = SURROGATE_NOTE
    return report


def two_divisibility_check(q=None, model=None):
    """Multiplication by 2 is bijective on the K2 carrier"""
    model = model or k2_model(q)
    inv = model.invariants()
    return inv.free_rank == 0 and all(d % 2 for d in inv.torsion)


# ============ KERNEL ELEMENTS ============
@dataclass
class KernelElement:
    """Σ l_{a,b,c} built from triples whose δ1-image vanishes"""
    triples: list
    accepted: bool
    residue: list = None
    symbolic: WedgeClass = None
    assignment: dict = None
    compiled: object = None
    symbolic_identity: bool = None

    def to_dict(self):
        out = {
            'triples': [list(t) for t in self.triples],
            'accepted': self.accepted,
            'residue': self.residue,
            'symbolic': self.symbolic.to_json() if self.symbolic is not None else None,
            'symbolic_identity': self.symbolic_identity,
        }
        if self.compiled is not None:
            out['compiled_cells'] = len(self.compiled)
        return out


def _formal_names(triples, one):
    """Positional unit names a{k}, b{k}, c{k}; the unit 1 stays '1'"""
    names, words, assignment = [], [], {}
    for k, triple in enumerate(triples):
        row = []
        for prefix, value in zip('abc', triple):
            if value == one:
                row.append(UNIT_ONE)
                continue
            name = f'{prefix}{k}'
            names.append(name)
            assignment[name] = value
            row.append(name)
        words.append(tuple(row))
    return names, words, assignment


def surjection_image(lattice, words, coefficients=None):
    """Σ k·(a⊗b⊗{c}) -> Σ k·l_{a,b,c}"""
    coefficients = coefficients or [1] * len(words)
    total = WedgeClass(lattice, 3)
    for (a, b, c), k in zip(words, coefficients):
        total = total + k * l_class(lattice, a, b, c)
    return total


def phi_sum(lattice, words, coefficients=None):
    """Σ k·(Φ(a⊗{b,c}) + Φ(b⊗{a,c}))"""
    coefficients = coefficients or [1] * len(words)
    total = WedgeClass(lattice, 3)
    for (a, b, c), k in zip(words, coefficients):
        total = total + k * (phi_class(lattice, a, b, c) + phi_class(lattice, b, a, c))
    return total


def kernel_element_builder(triples, q=None, model=None, compile_into=None):
    """
    Accept triples (a, b, c) when Σ a⊗{b,c} + b⊗{a,c} vanishes in U⊗K2 and emit Σ l_{a,b,c}
    triples are F_q values when q is given, or formal unit words with a supplied model.
    compile_into is an ambient torus group for the numeric chain (F_q triples only).
    """
    if model is None:
        if q is None:
            raise ValueError('either q or a K2 model is required')
        model = k2_model(q)
    triples = [tuple(t) for t in triples]
    if any(len(t) != 3 for t in triples):
        raise ValueError('every triple needs exactly three units')
    units = model.units
    c2 = units.presentation.tensor(model.presentation)
    residue = {}
    for a, b, c in triples:
        for idx, v in outer(units, a, b, c).items():
            residue[idx] = residue.get(idx, 0) + v
        for idx, v in outer(units, b, a, c).items():
            residue[idx] = residue.get(idx, 0) + v
    if not c2.is_zero(residue):
        reduced = c2.normal_form(residue)
        logger.warning(f'kernel element rejected, residue {reduced}')
        return KernelElement(triples, accepted=False, residue=list(reduced))

    if units.field is not None:
        names, words, assignment = _formal_names(triples, 1)
    else:
        names = list(units.names)
        words = [tuple(str(x) for x in t) for t in triples]
        assignment = None
    lattice = UnitLattice(names, 2)
    symbolic = surjection_image(lattice, words)
    identity = coinvariant_equal(2 * symbolic + phi_sum(lattice, words), WedgeClass(lattice, 3))
    compiled = None
    if compile_into is not None:
        if assignment is None:
            raise PreconditionError('formal units have no numeric assignment to compile')
        compiled = compile_to_bar(symbolic, assignment, compile_into, units.field)
    logger.info(f'kernel element accepted: {len(triples)} triples, {len(symbolic)} wedge terms')
    return KernelElement(triples, True, None, symbolic, assignment, compiled, identity)


def verify_phi_pairing(element, ambient=None, cap=None):
    """2·(Σ l) + Σ(Φ(a⊗{b,c}) + Φ(b⊗{a,c})) compiled to c-symbols is a boundary"""
    if not element.accepted:
        raise PreconditionError('only accepted kernel elements can be paired')
    if element.assignment is None:
        raise PreconditionError('formal kernel elements have no numeric assignment')
    ambient = ambient or torus_with_weyl(5, 2)
    F = get_field(ambient.description['q'])
    total = None
    for a, b, c in element.triples:
        chain = two_torsion_direct_chain(ambient, F, {'a': a, 'b': b, 'c': c})
        total = chain if total is None else total + chain
    hint = list(weyl_elements(ambient, 2).values())
    decision = is_boundary(total, hint=hint, cap=cap)
    return {'cells': len(total), **decision.to_dict()}
