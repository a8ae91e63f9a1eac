"""
Exact Integer Linear Algebra
Sparse matrices, Smith/Hermite normal forms, integer solves and abelian invariants
"""
import heapq
import logging
import math
from dataclasses import dataclass, field
from functools import reduce

from sympy import factorint

from modules.core import DimensionMismatchError

logger = logging.getLogger(__name__)


def xgcd(a, b):
    """Return (g, x, y) with g = gcd(a, b) >= 0 and a*x + b*y = g"""
    prevx, x = 1, 0
    prevy, y = 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        prevx, x = x, prevx - q * x
        prevy, y = y, prevy - q * y
    if a < 0:
        return -a, -prevx, -prevy
    return a, prevx, prevy


def lcm(*values):
    return reduce(lambda acc, v: acc * v // math.gcd(acc, v), values, 1)


# ============ SPARSE MATRIX ============
class SparseIntMatrix:
    """Sparse integer matrix stored row-major as {row: {col: value}}"""

    __slots__ = ('rows', 'cols', '_data')

    def __init__(self, rows, cols, entries=None):
        if rows < 0 or cols < 0:
            raise ValueError('matrix dimensions must be nonnegative')
        self.rows = rows
        self.cols = cols
        self._data = {}
        for (r, c), v in (entries or {}).items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise IndexError(f'entry ({r}, {c}) outside a {rows}x{cols} matrix')
            v = int(v)
            if v:
                self._data.setdefault(r, {})[c] = v

    @classmethod
    def from_row_dicts(cls, rows, cols, row_dicts):
        """Build from {row: {col: value}} without bounds checks; zero values dropped"""
        matrix = cls(rows, cols)
        for r, row in row_dicts.items():
            cleaned = {c: v for c, v in row.items() if v}
            if cleaned:
                matrix._data[r] = cleaned
        return matrix

    @classmethod
    def from_dense(cls, dense, cols=None):
        rows = len(dense)
        if cols is None:
            cols = len(dense[0]) if rows else 0
        row_dicts = {}
        for r, row in enumerate(dense):
            if len(row) != cols:
                raise DimensionMismatchError('ragged dense matrix')
            row_dicts[r] = {c: int(v) for c, v in enumerate(row) if v}
        return cls.from_row_dicts(rows, cols, row_dicts)

    @classmethod
    def from_columns(cls, rows, columns):
        """Build from a list of sparse columns {row: value}"""
        row_dicts = {}
        for c, column in enumerate(columns):
            for r, v in column.items():
                if v:
                    row_dicts.setdefault(r, {})[c] = v
        return cls.from_row_dicts(rows, len(columns), row_dicts)

    @classmethod
    def identity(cls, n):
        return cls.from_row_dicts(n, n, {i: {i: 1} for i in range(n)})

    @property
    def entries(self):
        return {(r, c): v for r, row in self._data.items() for c, v in row.items()}

    @property
    def shape(self):
        return self.rows, self.cols

    def nnz(self):
        return sum(len(row) for row in self._data.values())

    def row(self, r):
        return dict(self._data.get(r, {}))

    def row_dicts(self):
        """Copy of the row-major storage"""
        return {r: dict(row) for r, row in self._data.items()}

    def column_dicts(self):
        columns = [dict() for _ in range(self.cols)]
        for r, row in self._data.items():
            for c, v in row.items():
                columns[c][r] = v
        return columns

    def __getitem__(self, key):
        r, c = key
        return self._data.get(r, {}).get(c, 0)

    def __eq__(self, other):
        if not isinstance(other, SparseIntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __repr__(self):
        return f'SparseIntMatrix({self.rows}x{self.cols}, nnz={self.nnz()})'

    def transpose(self):
        row_dicts = {}
        for r, row in self._data.items():
            for c, v in row.items():
                row_dicts.setdefault(c, {})[r] = v
        return SparseIntMatrix.from_row_dicts(self.cols, self.rows, row_dicts)

    def to_dense(self):
        dense = [[0] * self.cols for _ in range(self.rows)]
        for r, row in self._data.items():
            for c, v in row.items():
                dense[r][c] = v
        return dense

    def apply(self, vector):
        """Matrix-vector product for a dense or {index: value} vector"""
        if isinstance(vector, dict):
            lookup = vector.get
        else:
            if len(vector) != self.cols:
                raise DimensionMismatchError(f'vector of length {len(vector)} for {self.cols} columns')
            lookup = lambda c, default=0: vector[c]  # noqa: E731
        out = [0] * self.rows
        for r, row in self._data.items():
            out[r] = sum(v * lookup(c, 0) for c, v in row.items())
        return out

    def matmul(self, other):
        if self.cols != other.rows:
            raise DimensionMismatchError(f'cannot multiply {self.shape} by {other.shape}')
        result = {}
        for r, row in self._data.items():
            acc = {}
            for k, v in row.items():
                for c, w in other._data.get(k, {}).items():
                    acc[c] = acc.get(c, 0) + v * w
            result[r] = acc
        return SparseIntMatrix.from_row_dicts(self.rows, other.cols, result)

    __matmul__ = matmul

    def hstack(self, other):
        if self.rows != other.rows:
            raise DimensionMismatchError('hstack needs equal row counts')
        row_dicts = self.row_dicts()
        for r, row in other._data.items():
            target = row_dicts.setdefault(r, {})
            for c, v in row.items():
                target[self.cols + c] = v
        return SparseIntMatrix.from_row_dicts(self.rows, self.cols + other.cols, row_dicts)

    def to_triplets(self):
        """Textual exchange format: 'rows cols' then one 'r c value' line per entry"""
        lines = [f'{self.rows} {self.cols}']
        for r in sorted(self._data):
            for c in sorted(self._data[r]):
                lines.append(f'{r} {c} {self._data[r][c]}')
        return '\n'.join(lines) + '\n'

    @classmethod
    def from_triplets(cls, text):
        lines = [line.split() for line in text.strip().splitlines() if line.strip()]
        if not lines or len(lines[0]) != 2:
            raise ValueError('triplet text must start with "rows cols"')
        rows, cols = int(lines[0][0]), int(lines[0][1])
        entries = {}
        for parts in lines[1:]:
            if len(parts) != 3:
                raise ValueError(f'malformed triplet line: {" ".join(parts)}')
            r, c, v = int(parts[0]), int(parts[1]), int(parts[2])
            entries[(r, c)] = entries.get((r, c), 0) + v
        return cls(rows, cols, entries)


# ============ INVARIANTS ============
@dataclass(frozen=True)
class AbelianInvariants:
    """Finite direct sum Z^free_rank + Z/t1 + ... with t1 | t2 | ..."""
    torsion: tuple = ()
    free_rank: int = 0

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError('free rank must be nonnegative')
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f'invariant factors {self.torsion} do not form a divisibility chain')
        if any(t <= 1 for t in self.torsion):
            raise ValueError('invariant factors must exceed 1')

    @classmethod
    def from_orders(cls, orders, free_rank=0):
        """Normalise any list of cyclic orders (0 meaning Z) into invariant factors"""
        primary = {}
        for order in orders:
            order = int(order)
            if order == 0:
                free_rank += 1
                continue
            if order < 0:
                raise ValueError('cyclic orders must be nonnegative')
            for p, e in factorint(order).items():
                primary.setdefault(p, []).append(p ** e)
        length = max((len(v) for v in primary.values()), default=0)
        factors = [1] * length
        for powers in primary.values():
            powers.sort(reverse=True)
            for i, power in enumerate(powers):
                factors[length - 1 - i] *= power
        return cls(tuple(f for f in factors if f > 1), free_rank)

    @classmethod
    def trivial(cls):
        return cls((), 0)

    @classmethod
    def integers(cls):
        return cls((), 1)

    @classmethod
    def cyclic(cls, n):
        return cls.from_orders([n])

    @property
    def is_trivial(self):
        return not self.torsion and self.free_rank == 0

    @property
    def order(self):
        if self.free_rank:
            return math.inf
        return math.prod(self.torsion)

    @property
    def exponent(self):
        if self.free_rank:
            return math.inf
        return self.torsion[-1] if self.torsion else 1

    def direct_sum(self, *others):
        orders = list(self.torsion)
        free = self.free_rank
        for other in others:
            orders.extend(other.torsion)
            free += other.free_rank
        return AbelianInvariants.from_orders(orders, free)

    __add__ = direct_sum

    def tensor(self, other):
        """Tensor product over Z using Z/a (x) Z/b = Z/gcd(a, b)"""
        orders = [math.gcd(a, b) for a in self.torsion for b in other.torsion]
        orders += list(self.torsion) * other.free_rank + list(other.torsion) * self.free_rank
        return AbelianInvariants.from_orders(orders, self.free_rank * other.free_rank)

    def tor(self, other):
        """Tor_1 over Z; free parts contribute nothing"""
        return AbelianInvariants.from_orders([math.gcd(a, b) for a in self.torsion for b in other.torsion])

    def describe(self):
        parts = ['Z'] * self.free_rank + [f'Z/{t}' for t in self.torsion]
        return ' + '.join(parts) if parts else '0'

    def to_dict(self):
        return {'torsion': list(self.torsion), 'free_rank': self.free_rank}


@dataclass
class SNFResult:
    """U·A·V = D; U and V are None when transforms were not requested"""
    D: SparseIntMatrix
    U: SparseIntMatrix = None
    V: SparseIntMatrix = None
    invariant_factors: tuple = ()

    @property
    def rank(self):
        return len(self.invariant_factors)


# ============ DENSE SMITH NORMAL FORM ============
def _apply_row_op(vec, op):
    kind = op[0]
    if kind == 'swap':
        _, i, j = op
        vec[i], vec[j] = vec[j], vec[i]
    elif kind == 'add':
        _, dst, src, k = op
        vec[dst] += k * vec[src]
    elif kind == 'mix':
        _, i, j, a, b, c, d = op
        vec[i], vec[j] = a * vec[i] + b * vec[j], c * vec[i] + d * vec[j]
    elif kind == 'neg':
        vec[op[1]] = -vec[op[1]]


def _apply_col_op_to_solution(vec, op):
    """Left-multiply a vector by the elementary matrix of a recorded column op"""
    kind = op[0]
    if kind == 'swap':
        _, i, j = op
        vec[i], vec[j] = vec[j], vec[i]
    elif kind == 'add':
        _, dst, src, k = op
        vec[src] += k * vec[dst]
    elif kind == 'mix':
        _, i, j, a, b, c, d = op
        vec[i], vec[j] = a * vec[i] + c * vec[j], b * vec[i] + d * vec[j]
    elif kind == 'neg':
        vec[op[1]] = -vec[op[1]]


def _row_op_matrix(A, op):
    kind = op[0]
    if kind == 'swap':
        A[op[1]], A[op[2]] = A[op[2]], A[op[1]]
    elif kind == 'add':
        _, dst, src, k = op
        A[dst] = [x + k * y for x, y in zip(A[dst], A[src])]
    elif kind == 'mix':
        _, i, j, a, b, c, d = op
        ri, rj = A[i], A[j]
        A[i] = [a * x + b * y for x, y in zip(ri, rj)]
        A[j] = [c * x + d * y for x, y in zip(ri, rj)]
    elif kind == 'neg':
        A[op[1]] = [-x for x in A[op[1]]]


def _col_op_matrix(A, op):
    kind = op[0]
    for row in A:
        if kind == 'swap':
            row[op[1]], row[op[2]] = row[op[2]], row[op[1]]
        elif kind == 'add':
            row[op[1]] += op[3] * row[op[2]]
        elif kind == 'mix':
            _, i, j, a, b, c, d = op
            row[i], row[j] = a * row[i] + b * row[j], c * row[i] + d * row[j]
        elif kind == 'neg':
            row[op[1]] = -row[op[1]]


class DenseSmith:
    """Smith normal form of a small dense block with recorded row/column operations

    Operations are kept as a log instead of explicit U, V so that solving
    against a block with thousands of columns stays cheap.
    """

    def __init__(self, dense, rows, cols):
        self.rows = rows
        self.cols = cols
        self.row_ops = []
        self.col_ops = []
        self.diagonal = []
        self._reduce([list(r) for r in dense])

    def _row(self, A, op):
        self.row_ops.append(op)
        _row_op_matrix(A, op)

    def _col(self, A, op):
        self.col_ops.append(op)
        _col_op_matrix(A, op)

    def _choose_pivot(self, A, t):
        """Minimal |value|, then fewest nonzeros in row+column, then lowest (row, col)"""
        row_counts = {r: sum(1 for x in A[r][t:] if x) for r in range(t, self.rows)}
        col_counts = [0] * self.cols
        for r in range(t, self.rows):
            row = A[r]
            for c in range(t, self.cols):
                if row[c]:
                    col_counts[c] += 1
        best = None
        for r in range(t, self.rows):
            if not row_counts[r]:
                continue
            row = A[r]
            for c in range(t, self.cols):
                if row[c]:
                    key = (abs(row[c]), row_counts[r] + col_counts[c], r, c)
                    if best is None or key < best:
                        best = key
        return None if best is None else (best[2], best[3])

    def _reduce(self, A):
        t = 0
        limit = min(self.rows, self.cols)
        while t < limit:
            pivot = self._choose_pivot(A, t)
            if pivot is None:
                break
            r, c = pivot
            if r != t:
                self._row(A, ('swap', t, r))
            if c != t:
                self._col(A, ('swap', t, c))
            while True:
                for i in range(t + 1, self.rows):
                    a, b = A[t][t], A[i][t]
                    if not b:
                        continue
                    if b % a == 0:
                        self._row(A, ('add', i, t, -(b // a)))
                    else:
                        g, x, y = xgcd(a, b)
                        self._row(A, ('mix', t, i, x, y, -(b // g), a // g))
                for j in range(t + 1, self.cols):
                    a, b = A[t][t], A[t][j]
                    if not b:
                        continue
                    if b % a == 0:
                        self._col(A, ('add', j, t, -(b // a)))
                    else:
                        g, x, y = xgcd(a, b)
                        self._col(A, ('mix', t, j, x, y, -(b // g), a // g))
                if any(A[i][t] for i in range(t + 1, self.rows)):
                    continue
                pivot_value = A[t][t]
                offender = next(
                    (i for i in range(t + 1, self.rows)
                     if any(A[i][j] % pivot_value for j in range(t + 1, self.cols))),
                    None
                )
                if offender is None:
                    break
                self._row(A, ('add', t, offender, 1))
            if A[t][t] < 0:
                self._row(A, ('neg', t))
            self.diagonal.append(A[t][t])
            t += 1
        self.rank = len(self.diagonal)

    def transform_rhs(self, vector):
        vec = list(vector)
        for op in self.row_ops:
            _apply_row_op(vec, op)
        return vec

    def solve(self, vector):
        """Integer solution of the original block against vector, or None"""
        c = self.transform_rhs(vector)
        y = [0] * self.cols
        for i, d in enumerate(self.diagonal):
            if c[i] % d:
                return None
            y[i] = c[i] // d
        if any(c[self.rank:]):
            return None
        for op in reversed(self.col_ops):
            _apply_col_op_to_solution(y, op)
        return y

    def class_order(self, vector):
        """Smallest k >= 1 with k·vector in the column span, or math.inf"""
        c = self.transform_rhs(vector)
        if any(c[self.rank:]):
            return math.inf
        return lcm(*(d // math.gcd(d, ci) for d, ci in zip(self.diagonal, c)))

    def normal_form(self, vector):
        """Canonical coordinates of vector modulo the column span"""
        c = self.transform_rhs(vector)
        reduced = [ci % d for ci, d in zip(c, self.diagonal)]
        return tuple(reduced + c[self.rank:])

    def matrices(self):
        """Materialise (U, V) as dense lists"""
        U = [[int(i == j) for j in range(self.rows)] for i in range(self.rows)]
        columns = [list(col) for col in zip(*U)] if self.rows else []
        for op in self.row_ops:
            for col in columns:
                _apply_row_op(col, op)
        U = [list(r) for r in zip(*columns)] if self.rows else []
        V = [[int(i == j) for j in range(self.cols)] for i in range(self.cols)]
        for op in self.col_ops:
            _col_op_matrix(V, op)
        return U, V


# ============ UNIT-PIVOT SPARSE ELIMINATION ============
class FactorizedMatrix:
    """Sparse elimination record of an integer matrix

    Unit entries are pivoted first (Markowitz-style, fewest nonzeros), which is
    unimodular and leaves SNF(A) = 1^k + SNF(residual). The non-unit residual
    is handed to DenseSmith. With a modulus p every nonzero entry is a unit and
    the record describes A mod p.
    """

    def __init__(self, matrix, modulus=None):
        self.rows = matrix.rows
        self.cols = matrix.cols
        self.modulus = modulus
        self.pivots = []
        self._eliminate(matrix)

    def _is_unit(self, v):
        return True if self.modulus else v in (1, -1)

    def _inverse(self, v):
        return pow(v, -1, self.modulus) if self.modulus else v

    def _eliminate(self, matrix):
        p = self.modulus
        rows = matrix.row_dicts()
        if p:
            rows = {r: {c: v % p for c, v in row.items() if v % p} for r, row in rows.items()}
            rows = {r: row for r, row in rows.items() if row}
        colidx = {}
        for r, row in rows.items():
            for c in row:
                colidx.setdefault(c, set()).add(r)

        def key(r):
            row = rows[r]
            has_unit = any(self._is_unit(v) for v in row.values())
            return (0 if has_unit else 1, len(row), r)

        heap = [key(r) for r in rows]
        heapq.heapify(heap)
        active = set(rows)
        while heap:
            entry = heapq.heappop(heap)
            r = entry[2]
            if r not in active or not rows[r] or key(r) != entry:
                continue
            if entry[0] == 1:
                break
            row = rows[r]
            q = min((c for c, v in row.items() if self._is_unit(v)), key=lambda c: (len(colidx[c]), c))
            u = self._inverse(row[q])
            active.discard(r)
            pivot_row = rows.pop(r)
            for c in pivot_row:
                colidx[c].discard(r)
            ops = []
            for i in sorted(colidx.pop(q, ())):
                target = rows[i]
                f = target.pop(q) * u
                if p:
                    f %= p
                for c, v in pivot_row.items():
                    if c == q:
                        continue
                    nv = target.get(c, 0) - f * v
                    if p:
                        nv %= p
                    if nv:
                        if c not in target:
                            colidx.setdefault(c, set()).add(i)
                        target[c] = nv
                    elif c in target:
                        del target[c]
                        colidx[c].discard(i)
                ops.append((i, f))
                if target:
                    heapq.heappush(heap, key(i))
                else:
                    active.discard(i)
            self.pivots.append((r, q, u, pivot_row, ops))

        self.pivot_rows = {piv[0] for piv in self.pivots}
        self.pivot_cols = {piv[1] for piv in self.pivots}
        residual = {r: row for r, row in rows.items() if row}
        self.residual_rows = sorted(residual)
        self.residual_cols = sorted({c for row in residual.values() for c in row})
        col_pos = {c: j for j, c in enumerate(self.residual_cols)}
        dense = []
        for r in self.residual_rows:
            line = [0] * len(self.residual_cols)
            for c, v in residual[r].items():
                line[col_pos[c]] = v
            dense.append(line)
        if p and dense:
            raise AssertionError('modular elimination left a residual block')
        self.residual = DenseSmith(dense, len(self.residual_rows), len(self.residual_cols))
        logger.debug(
            f'eliminated {self.rows}x{self.cols}: {len(self.pivots)} unit pivots, '
            f'residual {len(self.residual_rows)}x{len(self.residual_cols)}'
        )

    @property
    def rank(self):
        return len(self.pivots) + self.residual.rank

    def invariant_factors(self):
        """Nonzero diagonal of the Smith form in divisibility order"""
        return tuple([1] * len(self.pivots) + list(self.residual.diagonal))

    def cokernel(self):
        torsion = tuple(d for d in self.invariant_factors() if d > 1)
        return AbelianInvariants.from_orders(torsion, self.rows - self.rank)

    def _check_rhs(self, b):
        if isinstance(b, dict):
            return {int(k): int(v) for k, v in b.items() if v}
        if len(b) != self.rows:
            raise DimensionMismatchError(f'right-hand side of length {len(b)} for {self.rows} rows')
        return {i: int(v) for i, v in enumerate(b) if v}

    def transform_rhs(self, b):
        """Replay the recorded row operations on a sparse right-hand side"""
        bb = self._check_rhs(b)
        p = self.modulus
        if p:
            bb = {k: v % p for k, v in bb.items() if v % p}
        for r, _, _, _, ops in self.pivots:
            br = bb.get(r, 0)
            if not br:
                continue
            for i, f in ops:
                nv = bb.get(i, 0) - f * br
                if p:
                    nv %= p
                if nv:
                    bb[i] = nv
                else:
                    bb.pop(i, None)
        return bb

    def _residual_rhs(self, bb):
        """Residual-block right-hand side, or None if a dead row is inconsistent"""
        residual_rows = set(self.residual_rows)
        for k, v in bb.items():
            if v and k not in self.pivot_rows and k not in residual_rows:
                return None
        return [bb.get(r, 0) for r in self.residual_rows]

    def solve(self, b):
        """Return x (list) with A·x = b, or None if no integer solution exists"""
        bb = self.transform_rhs(b)
        rhs = self._residual_rhs(bb)
        if rhs is None:
            return None
        y = self.residual.solve(rhs)
        if y is None:
            return None
        x = {c: v for c, v in zip(self.residual_cols, y) if v}
        p = self.modulus
        for r, q, u, pivot_row, _ in reversed(self.pivots):
            s = bb.get(r, 0) - sum(v * x.get(c, 0) for c, v in pivot_row.items() if c != q)
            value = u * s
            if p:
                value %= p
            if value:
                x[q] = value
        solution = [0] * self.cols
        for c, v in x.items():
            solution[c] = v
        return solution

    def class_order(self, b):
        """Smallest k >= 1 with k·b in the column span; math.inf if none"""
        bb = self.transform_rhs(b)
        rhs = self._residual_rhs(bb)
        if rhs is None:
            return math.inf
        return self.residual.class_order(rhs)

    def contains(self, b):
        return self.solve(b) is not None


# ============ PUBLIC OPERATIONS ============
def snf(A, transforms=False):
    """Smith normal form U·A·V = D

    Without transforms the sparse unit-pivot engine is used and only D is
    returned; with transforms a dense reduction materialises U and V.
    """
    if transforms:
        smith = DenseSmith(A.to_dense(), A.rows, A.cols)
        factors = tuple(smith.diagonal)
        U, V = smith.matrices()
        U = SparseIntMatrix.from_dense(U, A.rows)
        V = SparseIntMatrix.from_dense(V, A.cols)
    else:
        factors = FactorizedMatrix(A).invariant_factors()
        U = V = None
    D = SparseIntMatrix.from_row_dicts(A.rows, A.cols, {i: {i: d} for i, d in enumerate(factors)})
    return SNFResult(D=D, U=U, V=V, invariant_factors=factors)


def solve_integer(A, b):
    """Integer x with A·x = b, or None"""
    if len(b) != A.rows:
        raise DimensionMismatchError(f'right-hand side of length {len(b)} for {A.rows} rows')
    return FactorizedMatrix(A).solve(b)


def cokernel_invariants(A):
    """Invariants of Z^rows / image(A)"""
    return FactorizedMatrix(A).cokernel()


def rank(A):
    return FactorizedMatrix(A).rank


def hermite_normal_form(A):
    """Row Hermite form H = U·A with U unimodular

    Pivots are positive and entries above each pivot are reduced into [0, pivot).
    Returns (H, U) as SparseIntMatrix.
    """
    rows, cols = A.rows, A.cols
    H = A.to_dense()
    U = [[int(i == j) for j in range(rows)] for i in range(rows)]
    pivot_row = 0
    for c in range(cols):
        if pivot_row >= rows:
            break
        nonzero = [r for r in range(pivot_row, rows) if H[r][c]]
        if not nonzero:
            continue
        first = nonzero[0]
        H[pivot_row], H[first] = H[first], H[pivot_row]
        U[pivot_row], U[first] = U[first], U[pivot_row]
        for r in range(pivot_row + 1, rows):
            if not H[r][c]:
                continue
            a, b = H[pivot_row][c], H[r][c]
            g, x, y = xgcd(a, b)
            ag, bg = a // g, b // g
            H[pivot_row], H[r] = (
                [x * s + y * t for s, t in zip(H[pivot_row], H[r])],
                [-bg * s + ag * t for s, t in zip(H[pivot_row], H[r])],
            )
            U[pivot_row], U[r] = (
                [x * s + y * t for s, t in zip(U[pivot_row], U[r])],
                [-bg * s + ag * t for s, t in zip(U[pivot_row], U[r])],
            )
        if H[pivot_row][c] < 0:
            H[pivot_row] = [-v for v in H[pivot_row]]
            U[pivot_row] = [-v for v in U[pivot_row]]
        pivot = H[pivot_row][c]
        for r in range(pivot_row):
            k = H[r][c] // pivot
            if k:
                H[r] = [s - k * t for s, t in zip(H[r], H[pivot_row])]
                U[r] = [s - k * t for s, t in zip(U[r], U[pivot_row])]
        pivot_row += 1
    return SparseIntMatrix.from_dense(H, cols), SparseIntMatrix.from_dense(U, rows)


def kernel_basis(A):
    """Columns spanning {x : A·x = 0} over Z

    Row-reduce A^T to Hermite form; rows of the transform belonging to zero
    rows of H form a lattice basis of the kernel.
    """
    H, U = hermite_normal_form(A.transpose())
    nonzero = {r for r, _ in H.entries}
    basis = [U.row(r) for r in range(H.rows) if r not in nonzero]
    return SparseIntMatrix.from_columns(A.cols, basis)


def determinant(A):
    """Fraction-free (Bareiss) determinant of a square matrix"""
    if A.rows != A.cols:
        raise DimensionMismatchError('determinant needs a square matrix')
    n = A.rows
    if n == 0:
        return 1
    M = A.to_dense()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if M[r][k]), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def refute_mod_primes(A, b, primes=(2, 3, 5)):
    """Return a prime p with b outside image(A mod p), or None

    Any such p proves b has no integer preimage; None proves nothing.
    """
    for p in primes:
        if FactorizedMatrix(A, modulus=p).solve(b) is None:
            logger.debug(f'right-hand side refuted modulo {p}')
            return p
    return None


# ============ PRESENTED ABELIAN GROUPS ============
@dataclass
class PresentedAbelianGroup:
    """Z^k / image(relations) with named generators; relations are columns"""
    generators: tuple
    relations: SparseIntMatrix
    _factored: FactorizedMatrix = field(default=None, init=False, repr=False, compare=False)
    _smith: DenseSmith = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        self.generators = tuple(self.generators)
        if self.relations.rows != len(self.generators):
            raise DimensionMismatchError(
                f'{len(self.generators)} generators but relation matrix has {self.relations.rows} rows'
            )
        self._index = {g: i for i, g in enumerate(self.generators)}

    @classmethod
    def free(cls, generators):
        generators = tuple(generators)
        return cls(generators, SparseIntMatrix(len(generators), 0))

    @classmethod
    def from_relation_vectors(cls, generators, vectors):
        """Relations given as sparse dicts {generator index: coefficient}"""
        return cls(tuple(generators), SparseIntMatrix.from_columns(len(generators), [dict(v) for v in vectors]))

    @property
    def rank(self):
        return len(self.generators)

    def index(self, generator):
        return self._index[generator]

    @property
    def factored(self):
        if self._factored is None:
            self._factored = FactorizedMatrix(self.relations)
        return self._factored

    def invariants(self):
        return self.factored.cokernel()

    def order(self):
        return self.invariants().order

    def _dense_vector(self, vector):
        if isinstance(vector, dict):
            out = [0] * self.rank
            for k, v in vector.items():
                out[k if isinstance(k, int) else self._index[k]] += v
            return out
        if len(vector) != self.rank:
            raise DimensionMismatchError(f'vector of length {len(vector)} for {self.rank} generators')
        return list(vector)

    def is_zero(self, vector):
        return self.factored.contains(self._dense_vector(vector))

    def element_order(self, vector):
        return self.factored.class_order(self._dense_vector(vector))

    def normal_form(self, vector):
        """Canonical coordinates; equal exactly when two vectors agree in the group"""
        if self._smith is None:
            self._smith = DenseSmith(self.relations.to_dense(), self.relations.rows, self.relations.cols)
        return self._smith.normal_form(self._dense_vector(vector))

    def contains_lattice(self, matrix):
        """True when every column of matrix lies in the relation lattice"""
        return all(self.factored.contains(col) for col in matrix.column_dicts())

    def quotient(self, extra_vectors):
        columns = self.relations.column_dicts() + [dict(v) for v in extra_vectors]
        return PresentedAbelianGroup(self.generators, SparseIntMatrix.from_columns(self.rank, columns))

    def tensor(self, other):
        """Presentation of A (x) B on generator pairs: R_A (x) I together with I (x) R_B"""
        generators = tuple((a, b) for a in self.generators for b in other.generators)
        nb = other.rank
        columns = []
        for rel in self.relations.column_dicts():
            for j in range(nb):
                columns.append({i * nb + j: v for i, v in rel.items()})
        for rel in other.relations.column_dicts():
            for i in range(self.rank):
                columns.append({i * nb + j: v for j, v in rel.items()})
        return PresentedAbelianGroup(generators, SparseIntMatrix.from_columns(len(generators), columns))
