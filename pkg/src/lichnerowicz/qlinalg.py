"""
Exact sparse linear algebra over Q.

Vectors are dicts ``{column: Fraction}`` with no stored zeros.  Elimination
works on primitive integer rows (content removed after every step), so no
rational arithmetic happens inside the inner loop.  Before eliminating, the
rows are split into connected components of the row/column incidence
graph: the operators used in this package preserve a parity grading of
the coordinates, so their matrices are block diagonal up to permutation and
each block is reduced on its own.  Reduced echelon form is unique, so the
split never changes the result.
"""

from fractions import Fraction
from math import gcd, lcm


class DimensionMismatch(ValueError):
    pass


def _clean(vec):
    return {c: Fraction(v) for c, v in vec.items() if v != 0}


class QMatrix:
    """Sparse rational matrix stored as a list of row dicts."""

    __slots__ = ("rows", "cols", "_rows")

    def __init__(self, rows, cols, entries=None):
        self.rows = rows
        self.cols = cols
        self._rows = [dict() for _ in range(rows)]
        for (i, j), v in (entries or {}).items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise IndexError(f"entry {(i, j)} outside {rows}x{cols}")
            if v != 0:
                self._rows[i][j] = Fraction(v)

    @classmethod
    def from_rows(cls, rows, cols):
        m = cls(len(rows), cols)
        for i, row in enumerate(rows):
            for j, v in row.items():
                if not 0 <= j < cols:
                    raise IndexError(f"column {j} outside {cols}")
                if v != 0:
                    m._rows[i][j] = Fraction(v)
        return m

    @classmethod
    def from_columns(cls, columns, rows):
        m = cls(rows, len(columns))
        for j, col in enumerate(columns):
            for i, v in col.items():
                if v != 0:
                    m._rows[i][j] = Fraction(v)
        return m

    @classmethod
    def from_dense(cls, data):
        data = [list(r) for r in data]
        cols = len(data[0]) if data else 0
        return cls.from_rows([{j: v for j, v in enumerate(r) if v} for r in data], cols)

    @classmethod
    def identity(cls, n):
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def vstack(cls, mats):
        if not mats:
            raise ValueError("nothing to stack")
        cols = mats[0].cols
        rows = []
        for m in mats:
            if m.cols != cols:
                raise DimensionMismatch("column counts differ")
            rows.extend(m._rows)
        return cls.from_rows(rows, cols)

    @property
    def entries(self):
        return {(i, j): v for i, row in enumerate(self._rows) for j, v in row.items()}

    def row(self, i):
        return dict(self._rows[i])

    def row_dicts(self):
        return [dict(r) for r in self._rows]

    def transpose(self):
        return QMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self.entries.items()})

    def matvec(self, vec):
        out = {}
        for i, row in enumerate(self._rows):
            s = sum((v * vec[j] for j, v in row.items() if j in vec), Fraction(0))
            if s:
                out[i] = s
        return out

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise DimensionMismatch("inner dimensions differ")
        out = {}
        for i, row in enumerate(self._rows):
            for k, a in row.items():
                for j, b in other._rows[k].items():
                    out[i, j] = out.get((i, j), 0) + a * b
        return QMatrix(self.rows, other.cols, out)

    def __eq__(self, other):
        return (isinstance(other, QMatrix) and (self.rows, self.cols) == (other.rows, other.cols)
                and self._rows == other._rows)

    def to_dense(self):
        return [[r.get(j, Fraction(0)) for j in range(self.cols)] for r in self._rows]

    def __repr__(self):
        return f"QMatrix({self.rows}x{self.cols}, nnz={sum(len(r) for r in self._rows)})"


# -- integer row kernels --------------------------------------------------------


def _primitive(row):
    """Scale a rational or integer row to coprime integers with positive lead."""
    if not row:
        return {}
    den = 0
    for v in row.values():
        if isinstance(v, Fraction):
            den = lcm(den or 1, v.denominator)
    if den:
        row = {c: int(v * den) for c, v in row.items()}
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    lead = row[min(row)]
    if lead < 0:
        g = -g
    if g != 1:
        row = {c: v // g for c, v in row.items()}
    return row


def _combine(a, row, b, piv):
    """a*row - b*piv for integer sparse rows."""
    out = {c: a * v for c, v in row.items()} if a != 1 else dict(row)
    for c, v in piv.items():
        w = out.get(c, 0) - b * v
        if w:
            out[c] = w
        else:
            out.pop(c, None)
    return out


def _components(rows):
    """Group row indices by connected components of their column supports."""
    parent = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for row in rows:
        cols = iter(row)
        first = next(cols, None)
        if first is None:
            continue
        parent.setdefault(first, first)
        r0 = find(first)
        for c in cols:
            parent.setdefault(c, c)
            rc = find(c)
            if rc != r0:
                if rc < r0:
                    rc, r0 = r0, rc
                parent[rc] = r0
    groups = {}
    for i, row in enumerate(rows):
        if row:
            groups.setdefault(find(next(iter(row))), []).append(i)
    return [groups[k] for k in sorted(groups)]


def _echelon_block(rows):
    """Forward elimination of integer rows; returns {lead column: row}."""
    pivots = {}
    # sparsest rows first keeps fill-in down; ties broken by input order
    order = sorted(range(len(rows)), key=lambda i: (min(rows[i]), len(rows[i]), i))
    for i in order:
        row = rows[i]
        while row:
            c = min(row)
            piv = pivots.get(c)
            if piv is None:
                pivots[c] = _primitive(row)
                break
            a, b = piv[c], row[c]
            g = gcd(a, b)
            row = _primitive(_combine(a // g, row, b // g, piv))
    return pivots


def _reduce_block(pivots):
    """Back-substitute an echelon basis into reduced form (integer rows)."""
    cols = sorted(pivots)
    for idx in range(len(cols) - 1, -1, -1):
        c = cols[idx]
        piv = pivots[c]
        a = piv[c]
        for c2 in cols[:idx]:
            row = pivots[c2]
            b = row.get(c)
            if b:
                g = gcd(a, b)
                pivots[c2] = _primitive(_combine(a // g, row, b // g, piv))
    return pivots


def _to_fraction_rows(pivots):
    out = []
    for c in sorted(pivots):
        row = pivots[c]
        lead = row[c]
        out.append({j: Fraction(v, lead) for j, v in sorted(row.items())})
    return out


def rref_rows(rows, reduced=True):
    """Reduced row echelon basis (leading ones) of the span of sparse rows."""
    rows = [_primitive(_clean(r)) for r in rows]
    rows = [r for r in rows if r]
    pivots = {}
    for group in _components(rows):
        block = _echelon_block([rows[i] for i in group])
        if reduced:
            block = _reduce_block(block)
        pivots.update(block)
    return _to_fraction_rows(pivots)


def rank(m):
    rows = [_primitive(r) for r in m.row_dicts()]
    rows = [r for r in rows if r]
    return sum(len(_echelon_block([rows[i] for i in g])) for g in _components(rows))


# -- subspaces ------------------------------------------------------------------


class Subspace:
    """Subspace of Q^ambient_dim, basis kept in reduced row echelon form."""

    __slots__ = ("ambient_dim", "basis", "pivots")

    def __init__(self, ambient_dim, vectors=(), _canonical=False):
        self.ambient_dim = ambient_dim
        vectors = list(vectors)
        for v in vectors:
            if any(not 0 <= c < ambient_dim for c in v):
                raise IndexError("vector coordinate outside the ambient space")
        basis = vectors if _canonical else rref_rows(vectors)
        self.basis = tuple(basis)
        self.pivots = tuple(min(v) for v in self.basis)

    @classmethod
    def full(cls, n):
        return cls(n, [{i: Fraction(1)} for i in range(n)], _canonical=True)

    @classmethod
    def zero(cls, n):
        return cls(n, (), _canonical=True)

    @property
    def dim(self):
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.ambient_dim == other.ambient_dim
                and self.basis == other.basis)

    def __hash__(self):
        return hash((self.ambient_dim, tuple(tuple(v.items()) for v in self.basis)))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"

    def _check(self, other):
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatch(f"ambient {self.ambient_dim} vs {other.ambient_dim}")

    def reduce(self, vec):
        """Remainder of ``vec`` after eliminating the pivot columns."""
        out = _clean(vec)
        for piv, row in zip(self.pivots, self.basis):
            a = out.get(piv)
            if a:
                for c, v in row.items():
                    w = out.get(c, 0) - a * v
                    if w:
                        out[c] = w
                    else:
                        out.pop(c, None)
        return out

    def contains_vector(self, vec):
        return not self.reduce(vec)

    def coordinates(self, vec):
        """Coefficients of ``vec`` in this basis; ValueError if not a member."""
        if not self.contains_vector(vec):
            raise ValueError("vector is not in the subspace")
        return [Fraction(vec.get(p, 0)) for p in self.pivots]

    def __add__(self, other):
        return subspace_sum(self, other)

    def __and__(self, other):
        return subspace_intersect(self, other)

    def __le__(self, other):
        return subspace_contains(other, self)


def nullspace(m):
    """Kernel of ``m`` as a Subspace of Q^cols."""
    rows = [_primitive(r) for r in m.row_dicts()]
    rows = [r for r in rows if r]
    vectors = []
    touched = set()
    for group in _components(rows):
        block = _reduce_block(_echelon_block([rows[i] for i in group]))
        cols = set()
        for i in group:
            cols.update(rows[i])
        touched |= cols
        free = sorted(cols - set(block))
        red = _to_fraction_rows(block)
        lead_rows = [(min(r), r) for r in red]
        for f in free:
            v = {f: Fraction(1)}
            for c, r in lead_rows:
                x = r.get(f)
                if x:
                    v[c] = -x
            vectors.append(v)
    for c in range(m.cols):
        if c not in touched:
            vectors.append({c: Fraction(1)})
    return Subspace(m.cols, vectors)


def image(m):
    """Column space of ``m`` as a Subspace of Q^rows."""
    return Subspace(m.rows, m.transpose().row_dicts())


def span(vectors, ambient_dim):
    return Subspace(ambient_dim, vectors)


def subspace_sum(a, b):
    a._check(b)
    return Subspace(a.ambient_dim, list(a.basis) + list(b.basis))


def subspace_intersect(a, b):
    a._check(b)
    if not a.dim or not b.dim:
        return Subspace.zero(a.ambient_dim)
    # kernel of [A^T | -B^T] gives the relations sum x_i a_i = sum y_j b_j
    cols = [dict(v) for v in a.basis] + [{c: -x for c, x in v.items()} for v in b.basis]
    ker = nullspace(QMatrix.from_columns(cols, a.ambient_dim))
    vectors = []
    for rel in ker.basis:
        out = {}
        for i, x in rel.items():
            if i < a.dim:
                for c, v in a.basis[i].items():
                    out[c] = out.get(c, 0) + x * v
        vectors.append(out)
    return Subspace(a.ambient_dim, vectors)


def subspace_contains(a, b):
    """True when b is a subspace of a."""
    a._check(b)
    return all(a.contains_vector(v) for v in b.basis)


def is_direct_sum(parts, whole=None):
    """Parts are independent, and (optionally) their sum is ``whole``."""
    if not parts:
        return whole is None or whole.dim == 0
    total = parts[0]
    for p in parts[1:]:
        total = total + p
    if total.dim != sum(p.dim for p in parts):
        return False
    return whole is None or total == whole


def apply(m, space):
    """Image of a subspace under a matrix."""
    if m.cols != space.ambient_dim:
        raise DimensionMismatch("matrix does not act on this space")
    return Subspace(m.rows, [m.matvec(v) for v in space.basis])
