"""
Bar Complex Matrices
Cell indexing, boundary matrices, boundary decisions, class orders and homology
"""
import logging
from dataclasses import dataclass, field
from itertools import product as cartesian

from modules.barhomology.chains import BarChain, boundary, is_cycle, pushforward, restrict
from modules.barhomology import config as bar_config
from modules.barhomology.config import MAX_HOMOLOGY_DEGREE
from modules.core import (
    CapExceededError, HomforgeError, PreconditionError,
    factorization_cache, homology_cache, timer
)
from modules.exactlinalg import AbelianInvariants, FactorizedMatrix, SparseIntMatrix, refute_mod_primes

logger = logging.getLogger(__name__)


class CellIndex:
    """Mixed-radix numbering of degree-n cells over the non-identity elements"""

    def __init__(self, group, degree):
        self.group = group
        self.degree = degree
        self.elements = group.non_identity()
        self.position = {g: i for i, g in enumerate(self.elements)}
        self.base = len(self.elements)
        self.count = self.base ** degree

    def index(self, cell):
        idx = 0
        for g in cell:
            idx = idx * self.base + self.position[g]
        return idx

    def cell(self, idx):
        digits = []
        for _ in range(self.degree):
            idx, d = divmod(idx, self.base)
            digits.append(self.elements[d])
        return tuple(reversed(digits))

    def vector(self, chain):
        """Sparse coefficient vector {cell index: coeff}"""
        return {self.index(cell): k for cell, k in chain.terms.items()}

    def chain(self, vector):
        if isinstance(vector, dict):
            items = vector.items()
        else:
            items = ((i, v) for i, v in enumerate(vector) if v)
        return BarChain(self.group, self.degree, {self.cell(i): v for i, v in items})


def cell_count(group, degree):
    return (group.order - 1) ** degree


def boundary_matrix(group, degree, cap=None):
    """Matrix of ∂_degree: rows are (degree-1)-cells, columns degree-cells"""
    cap = cap or bar_config.BAR_CELL_CAP
    if degree < 0:
        raise ValueError('degree must be nonnegative')
    cols = cell_count(group, degree)
    if cols > cap:
        raise CapExceededError(f'boundary matrix of degree {degree} for {group.name}', cols, cap)
    if degree == 0:
        return SparseIntMatrix(0, 1)
    base = group.order - 1
    rows = base ** (degree - 1)
    elements = group.non_identity()
    position = {g: i for i, g in enumerate(elements)}
    table = group.table
    e = group.identity
    last_sign = -1 if degree % 2 else 1
    row_dicts = {}

    def encode(positions):
        idx = 0
        for p in positions:
            idx = idx * base + p
        return idx

    def add(r, c, v):
        row = row_dicts.setdefault(r, {})
        total = row.get(c, 0) + v
        if total:
            row[c] = total
        else:
            row.pop(c, None)

    for col, digits in enumerate(cartesian(range(base), repeat=degree)):
        add(encode(digits[1:]), col, 1)
        for i in range(degree - 1):
            prod = table[elements[digits[i]]][elements[digits[i + 1]]]
            if prod != e:
                face = digits[:i] + (position[prod],) + digits[i + 2:]
                add(encode(face), col, 1 if i % 2 else -1)
        add(encode(digits[:-1]), col, last_sign)
    logger.info(f'assembled ∂_{degree} of {group.name}: {rows}x{cols}')
    return SparseIntMatrix.from_row_dicts(rows, cols, row_dicts)


def factorization(group, degree, cap=None, matrix=None):
    """Cached unit-pivot factorisation of ∂_degree"""
    key = factorization_cache._make_key('factorization', group.fingerprint(), degree)
    cached = factorization_cache.get(key)
    if cached is not None:
        return cached
    if matrix is None:
        matrix = boundary_matrix(group, degree, cap=cap)
    with timer(f'factorising ∂_{degree} of {group.name}'):
        result = FactorizedMatrix(matrix)
    factorization_cache.set(key, result)
    return result


def has_factorization(group, degree):
    key = factorization_cache._make_key('factorization', group.fingerprint(), degree)
    return factorization_cache.get(key) is not None


# ============ BOUNDARY DECISIONS ============
@dataclass
class BoundaryDecision:
    """Outcome of a boundary query; witness satisfies ∂witness = chain when present"""
    is_boundary: bool
    witness: BarChain = None
    searched_in: int = None
    refuted_mod: int = None

    def __bool__(self):
        return self.is_boundary

    def to_dict(self):
        return {
            'is_boundary': self.is_boundary,
            'searched_in_order': self.searched_in,
            'witness_cells': len(self.witness) if self.witness is not None else None,
            'refuted_mod': self.refuted_mod,
        }


def _checked_witness(chain, witness):
    if boundary(witness) != chain:
        raise HomforgeError('boundary witness failed verification')
    return witness


def is_boundary(chain, hint=(), cap=None, refute_primes=None, refute_threshold=None):
    """
    Decide whether a cycle is a boundary, returning a witness when it is
    Solves first in the subgroup generated by the chain's support, then with
    the hint elements added; a witness there is a witness in the whole group.
    A negative answer is only ever given from the whole group's matrix.
    """
    G = chain.group
    n = chain.degree
    cap = cap or bar_config.BAR_CELL_CAP
    if refute_primes is None:
        refute_primes = bar_config.REFUTE_PRIMES
    if refute_threshold is None:
        refute_threshold = bar_config.REFUTE_THRESHOLD
    if not chain:
        return BoundaryDecision(True, BarChain.zero(G, n + 1), searched_in=1)
    if not is_cycle(chain):
        raise PreconditionError('only cycles can be boundaries')

    support = chain.support()
    tried = set()
    for gens in (support, sorted(set(support) | {int(h) for h in hint})):
        H, inclusion = G.subgroup(gens)
        elements = frozenset(int(g) for g in inclusion.images)
        if H.order == G.order or elements in tried:
            continue
        tried.add(elements)
        if cell_count(H, n + 1) > cap:
            continue
        local = restrict(chain, inclusion)
        index = CellIndex(H, n)
        solution = factorization(H, n + 1, cap=cap).solve(index.vector(local))
        if solution is not None:
            witness = pushforward(inclusion, CellIndex(H, n + 1).chain(solution))
            logger.debug(f'boundary witness found in a subgroup of order {H.order}')
            return BoundaryDecision(True, _checked_witness(chain, witness), searched_in=H.order)

    needed = cell_count(G, n + 1)
    if needed > cap:
        raise CapExceededError(f'boundary query in degree {n} for {G.name}', needed, cap)
    rhs = CellIndex(G, n).vector(chain)
    matrix = None
    if needed > refute_threshold and refute_primes and not has_factorization(G, n + 1):
        matrix = boundary_matrix(G, n + 1, cap=cap)
        p = refute_mod_primes(matrix, rhs, refute_primes)
        if p is not None:
            return BoundaryDecision(False, None, searched_in=G.order, refuted_mod=p)
    solution = factorization(G, n + 1, cap=cap, matrix=matrix).solve(rhs)
    if solution is None:
        return BoundaryDecision(False, None, searched_in=G.order)
    witness = CellIndex(G, n + 1).chain(solution)
    return BoundaryDecision(True, _checked_witness(chain, witness), searched_in=G.order)


def class_order(chain, cap=None):
    """Smallest k >= 1 with k·chain a boundary; math.inf when no multiple is"""
    if not chain:
        return 1
    if not is_cycle(chain):
        raise PreconditionError('class order is defined for cycles only')
    G, n = chain.group, chain.degree
    F = factorization(G, n + 1, cap=cap)
    return F.class_order(CellIndex(G, n).vector(chain))


# ============ HOMOLOGY ============
@dataclass
class HomologyReport:
    """H_n(G; Z) with the sizes of the matrices behind it"""
    group: str
    group_order: int
    degree: int
    invariants: AbelianInvariants
    cells: dict = field(default_factory=dict)
    ranks: dict = field(default_factory=dict)
    elapsed: float = None

    def to_dict(self, include_timing=False):
        out = {
            'group': self.group,
            'group_order': self.group_order,
            'degree': self.degree,
            'invariants': self.invariants.to_dict(),
            'describe': self.invariants.describe(),
            'cells': self.cells,
            'ranks': self.ranks,
        }
        if include_timing:
            out['elapsed'] = self.elapsed
        return out


def homology(group, degree, cap=None):
    """H_degree(G) = ker ∂_degree / im ∂_degree+1 from the normalized bar complex"""
    cap = cap or bar_config.BAR_CELL_CAP
    if degree < 0:
        raise ValueError('degree must be nonnegative')
    if degree > MAX_HOMOLOGY_DEGREE:
        raise PreconditionError(f'homology is computed up to degree {MAX_HOMOLOGY_DEGREE}')
    if degree >= 2 and group.order > bar_config.BAR_GROUP_CAP:
        raise CapExceededError(f'H_{degree}({group.name}) group order', group.order, bar_config.BAR_GROUP_CAP)
    needed = cell_count(group, degree + 1)
    if needed > cap:
        raise CapExceededError(f'H_{degree}({group.name})', needed, cap)
    key = homology_cache._make_key('homology', group.fingerprint(), degree)
    report = homology_cache.get(key)
    if report is not None:
        return report
    with timer() as clock:
        chains = cell_count(group, degree)
        rank_in = factorization(group, degree, cap=cap).rank if degree >= 1 else 0
        outgoing = factorization(group, degree + 1, cap=cap)
        torsion = [d for d in outgoing.invariant_factors() if d > 1]
        free_rank = chains - rank_in - outgoing.rank
        invariants = AbelianInvariants.from_orders(torsion, free_rank)
    report = HomologyReport(
        group=group.name,
        group_order=group.order,
        degree=degree,
        invariants=invariants,
        cells={'n': chains, 'n+1': needed},
        ranks={'boundary_in': rank_in, 'boundary_out': outgoing.rank},
        elapsed=clock['elapsed'],
    )
    logger.info(f'H_{degree}({group.name}) = {invariants.describe()}')
    homology_cache.set(key, report)
    return report


def homology_table(group, max_degree=MAX_HOMOLOGY_DEGREE, cap=None):
    return [homology(group, k, cap=cap) for k in range(max_degree + 1)]
