"""
Covariant tensors on R^(n+1) with homogeneous polynomial components.

All tensor flavours share one storage scheme: a flat map
``(index tuple, exponent vector) -> Fraction`` whose values are component
values ``T(e_{i_1}, ..., e_{i_p})`` (coefficient of ``x^e``).  General
tensors key on arbitrary index tuples, symmetric tensors on sorted tuples
and forms on strictly increasing tuples; the embedding into general
tensors supplies the permutations (and signs).

Indices, slots and variables are 0-based throughout.  Orders or degrees
below zero denote the zero space: such tensors exist but carry no terms,
which keeps identities like ``Tr(T) = 0`` for ``p < 2`` uniform.

The operators here are the flat-space ones: ``D`` has no Christoffel
terms, ``flat_delta`` is ``D^* D = -sum_i d_i^2`` componentwise.
"""

from fractions import Fraction
from itertools import permutations, product
from math import factorial

from .qpoly import HomoPoly, monomials


class TensorError(ValueError):
    pass


def _unit_add(e, i, step):
    f = list(e)
    f[i] += step
    return tuple(f)


def _acc(out, key, value):
    v = out.get(key, 0) + value
    if v:
        out[key] = v
    else:
        out.pop(key, None)


def perm_sign(seq):
    """Sign of the permutation sorting ``seq`` (0 if entries repeat)."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


class Tensor:
    """Common storage and vector-space structure; see module docstring."""

    kind = "gen"
    __slots__ = ("n", "p", "k", "terms")

    def __init__(self, n, p, k, comps=None):
        self.n, self.p, self.k = n, p, k
        terms = {}
        for idx, poly in (comps or {}).items():
            idx = tuple(idx)
            if isinstance(poly, (int, Fraction)):
                poly = HomoPoly.const(n + 1, poly) if poly else HomoPoly.zero(n + 1, k)
            if poly.is_zero():
                continue
            if poly.nvars != n + 1 or poly.degree != k:
                raise TensorError(f"component {idx} has wrong degree or variable count")
            if len(idx) != p or any(not 0 <= i <= n for i in idx):
                raise TensorError(f"bad index tuple {idx} for order {p}")
            key, sign = self._canon(idx)
            if sign == 0:
                raise TensorError(f"index tuple {idx} vanishes for a {self.kind} tensor")
            if key != idx:
                raise TensorError(f"{self.kind} tensors are stored on canonical tuples, got {idx}")
            for e, c in poly.terms.items():
                terms[(idx, e)] = c
        self.terms = terms

    @classmethod
    def _make(cls, n, p, k, terms):
        obj = cls.__new__(cls)
        obj.n, obj.p, obj.k = n, p, k
        obj.terms = terms if (p >= 0 and k >= 0) else {}
        return obj

    @classmethod
    def zero(cls, n, p, k):
        return cls._make(n, p, k, {})

    @staticmethod
    def _canon(idx):
        return idx, 1

    @property
    def nvars(self):
        return self.n + 1

    @property
    def shape(self):
        return (self.n, self.p, self.k)

    @property
    def comps(self):
        grouped = {}
        for (idx, e), c in self.terms.items():
            grouped.setdefault(idx, {})[e] = c
        return {idx: HomoPoly._raw(self.nvars, self.k, t) for idx, t in sorted(grouped.items())}

    def component(self, idx):
        """Component polynomial on an arbitrary index tuple."""
        key, sign = self._canon(tuple(idx))
        out = {e: sign * c for (i, e), c in self.terms.items() if i == key} if sign else {}
        return HomoPoly._raw(self.nvars, self.k, out)

    def is_zero(self):
        return not self.terms

    def _same(self, other):
        if type(self) is not type(other) or self.shape != other.shape:
            raise TensorError(f"cannot combine {type(self).__name__}{self.shape} "
                              f"with {type(other).__name__}{other.shape}")

    def degenerate(self):
        return self.p < 0 or self.k < 0

    def __add__(self, other):
        if type(self) is type(other) and self.shape != other.shape:
            # members of the zero space act as zero in any shape
            if other.degenerate() and self.n == other.n:
                return self
            if self.degenerate() and self.n == other.n:
                return other
        self._same(other)
        out = dict(self.terms)
        for key, c in other.terms.items():
            _acc(out, key, c)
        return self._make(self.n, self.p, self.k, out)

    def __neg__(self):
        return self._make(self.n, self.p, self.k, {key: -c for key, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = Fraction(c)
        if not c:
            return self.zero(*self.shape)
        return self._make(self.n, self.p, self.k, {key: c * v for key, v in self.terms.items()})

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def mul_poly(self, f):
        """Multiply every component by the homogeneous polynomial ``f``."""
        out = {}
        for (idx, e), c in self.terms.items():
            for e2, c2 in f.terms.items():
                _acc(out, (idx, tuple(a + b for a, b in zip(e, e2))), c * c2)
        return self._make(self.n, self.p, self.k + f.degree, out)

    def __eq__(self, other):
        if not isinstance(other, Tensor):
            return NotImplemented
        if type(self) is not type(other):
            return False
        if not self.terms and not other.terms:
            return self.n == other.n
        return self.shape == other.shape and self.terms == other.terms

    def __hash__(self):
        return hash((type(self).__name__, self.shape, tuple(sorted(self.terms.items()))))

    def __repr__(self):
        body = ", ".join(f"{idx}: {poly}" for idx, poly in self.comps.items()) or "0"
        return f"{type(self).__name__}(n={self.n}, p={self.p}, k={self.k}; {body})"

    def as_gen(self):
        return GenTensor._make(self.n, self.p, self.k, dict(self.terms))


class GenTensor(Tensor):
    kind = "gen"
    __slots__ = ()

    @classmethod
    def from_poly(cls, f, n=None):
        n = f.nvars - 1 if n is None else n
        return cls._make(n, 0, f.degree, {((), e): c for e, c in f.terms.items()})


# -- flat operators on general tensors ------------------------------------------------


def covar_D(T):
    """(DT)_{i, J} = d_i T_J."""
    out = {}
    for (idx, e), c in T.terms.items():
        for i, a in enumerate(e):
            if a:
                _acc(out, ((i,) + idx, _unit_add(e, i, -1)), c * a)
    return GenTensor._make(T.n, T.p + 1, T.k - 1, out)


def diverg(T):
    """D^* contracted on the first slot: (dT)_J = -sum_i d_i T_{i, J}."""
    if T.p < 1:
        raise TensorError("divergence needs order >= 1")
    out = {}
    for (idx, e), c in T.as_gen().terms.items():
        i = idx[0]
        if e[i]:
            _acc(out, (idx[1:], _unit_add(e, i, -1)), -c * e[i])
    return GenTensor._make(T.n, T.p - 1, T.k - 1, out)


def _flat_delta_terms(T):
    out = {}
    for (idx, e), c in T.terms.items():
        for i, a in enumerate(e):
            if a >= 2:
                _acc(out, (idx, _unit_add(e, i, -2)), -c * a * (a - 1))
    return out


def flat_delta(T):
    """Flat Lichnerowicz Laplacian D^*D: componentwise -sum_i d_i^2."""
    return T._make(T.n, T.p, T.k - 2, _flat_delta_terms(T))


def interior_radial(T, j=0):
    """Insert the radial field sum_i x_i d/dx_i into slot ``j``."""
    T = T.as_gen()
    if not 0 <= j < T.p:
        raise TensorError(f"slot {j} out of range for order {T.p}")
    out = {}
    for (idx, e), c in T.terms.items():
        i = idx[j]
        _acc(out, (idx[:j] + idx[j + 1:], _unit_add(e, i, 1)), c)
    return GenTensor._make(T.n, T.p - 1, T.k + 1, out)


def trace_slots(T, i, j):
    """Contract slots ``i < j`` with the flat metric."""
    T = T.as_gen()
    if not 0 <= i < j < T.p:
        raise TensorError(f"bad slot pair ({i}, {j}) for order {T.p}")
    out = {}
    for (idx, e), c in T.terms.items():
        if idx[i] == idx[j]:
            _acc(out, (idx[:i] + idx[i + 1:j] + idx[j + 1:], e), c)
    return GenTensor._make(T.n, T.p - 2, T.k, out)


def permute(T, sigma):
    """T^sigma(X_0, ..., X_{p-1}) = T(X_sigma(0), ..., X_sigma(p-1))."""
    T = T.as_gen()
    sigma = tuple(sigma)
    if sorted(sigma) != list(range(T.p)):
        raise TensorError(f"{sigma} is not a permutation of {T.p} slots")
    out = {}
    for (idx, e), c in T.terms.items():
        # source idx = (i_sigma(0), ..., i_sigma(p-1)); recover (i_0, ..., i_{p-1})
        new = [0] * T.p
        for a, s in enumerate(sigma):
            new[s] = idx[a]
        _acc(out, (tuple(new), e), c)
    return GenTensor._make(T.n, T.p, T.k, out)


def transposition(p, i, j):
    s = list(range(p))
    s[i], s[j] = s[j], s[i]
    return tuple(s)


def lie_radial(T):
    """L_r T = sum_j x_j d_j T + p T (componentwise)."""
    out = {key: c * (sum(key[1]) + T.p) for key, c in T.terms.items()}
    return T._make(T.n, T.p, T.k, {key: c for key, c in out.items() if c})


def _insert_metric(T, i, j):
    """<X_i, X_j> T(rest): an order p+2 tensor with the metric in slots i < j."""
    out = {}
    for (idx, e), c in T.terms.items():
        rest = list(idx)
        for l in range(T.nvars):
            new = rest[:i] + [l] + rest[i:]
            new = new[:j] + [l] + new[j:]
            _acc(out, (tuple(new), e), c)
    return GenTensor._make(T.n, T.p + 2, T.k, out)


def _move_first_slot(T, j):
    """Send slot 0 to slot j, keeping the others in order."""
    out = {}
    for (idx, e), c in T.terms.items():
        rest = list(idx[1:])
        _acc(out, (tuple(rest[:j] + [idx[0]] + rest[j:]), e), c)
    return GenTensor._make(T.n, T.p, T.k, out)


def correction_O(T):
    """2 sum_{i<j} <X_i,X_j> Tr_{i,j}T(...) - 2 sum_j D_{X_j}(i_{r,j}T)(...)."""
    T = T.as_gen()
    total = GenTensor.zero(T.n, T.p, T.k)
    for i in range(T.p):
        for j in range(i + 1, T.p):
            total = total + _insert_metric(trace_slots(T, i, j), i, j).scale(2)
    for j in range(T.p):
        total = total - _move_first_slot(covar_D(interior_radial(T, j)), j).scale(2)
    return total


def general_correction(T):
    """Ambient correction term C(T) with i*(Delta_flat T) = Delta_S i*T + i*C(T).

    Uses the general-tensor formula (transposition sum and O(T)).  It is
    only checked against the symmetric and antisymmetric specialisations.
    """
    T = T.as_gen()
    p, n = T.p, T.n
    LT = lie_radial(T)
    out = T.scale(p * (1 - p)) + LT.scale(2 * p - n + 1) - lie_radial(LT)
    for i in range(p):
        for j in range(i + 1, p):
            out = out - permute(T, transposition(p, i, j)).scale(2)
    return out + correction_O(T)


# -- tangential projection, used by the pullback test ---------------------------------


def project_slot(T, j):
    """r^2 T - (x-weighted) i_{r,j}T in slot j: kills the radial direction there."""
    T = T.as_gen()
    out = {}
    for (idx, e), c in T.terms.items():
        for i in range(T.nvars):
            _acc(out, (idx, _unit_add(e, i, 2)), c)
    for (idx, e), c in interior_radial(T, j).terms.items():
        for i in range(T.nvars):
            new = idx[:j] + (i,) + idx[j:]
            _acc(out, (new, _unit_add(e, i, 1)), -c)
    return GenTensor._make(T.n, T.p, T.k + 2, out)


def tangential(T):
    T = T.as_gen()
    for j in range(T.p):
        T = project_slot(T, j)
    return T


# -- coordinates -------------------------------------------------------------------------


class CoordSpace:
    """Monomial-tuple coordinates of a space of tensors of one flavour."""

    def __init__(self, cls, n, p, k):
        self.cls, self.n, self.p, self.k = cls, n, p, k
        if p < 0 or k < 0:
            tuples = []
        else:
            tuples = cls.index_tuples(n, p)
        self.basis = [(idx, e) for idx in tuples for e in monomials(n + 1, k)]
        self.index = {key: i for i, key in enumerate(self.basis)}

    @property
    def dim(self):
        return len(self.basis)

    def to_vector(self, T):
        if (type(T), T.shape) != (self.cls, (self.n, self.p, self.k)):
            raise TensorError("tensor does not live in this coordinate space")
        return {self.index[key]: c for key, c in T.terms.items()}

    def to_tensor(self, vec):
        terms = {self.basis[i]: Fraction(c) for i, c in vec.items() if c}
        return self.cls._make(self.n, self.p, self.k, terms)

    def unit(self, i):
        return self.cls._make(self.n, self.p, self.k, {self.basis[i]: Fraction(1)})

    def __repr__(self):
        return f"CoordSpace({self.cls.__name__}, n={self.n}, p={self.p}, k={self.k}, dim={self.dim})"


def _gen_tuples(n, p):
    return list(product(range(n + 1), repeat=p))


GenTensor.index_tuples = staticmethod(_gen_tuples)

_SPACES = {}


def coord_space(cls, n, p, k):
    key = (cls, n, p, k)
    if key not in _SPACES:
        _SPACES[key] = CoordSpace(cls, n, p, k)
    return _SPACES[key]


def operator_matrix(op, cls, n, p, k, out_cls=None, out_p=None, out_k=None):
    """Matrix of a linear tensor operator on monomial-tuple coordinates.

    Returns (QMatrix, source space, target space).  The target shape is
    inferred from the image of the first basis vector unless given.
    """
    from .qlinalg import QMatrix

    src = coord_space(cls, n, p, k)
    cols = []
    tgt = None
    if out_cls is not None:
        tgt = coord_space(out_cls, n, out_p, out_k)
    for i in range(src.dim):
        img = op(src.unit(i))
        if tgt is None:
            tgt = coord_space(type(img), img.n, img.p, img.k)
        cols.append(tgt.to_vector(img) if not img.is_zero() else {})
    if tgt is None:
        raise TensorError("cannot infer target space of an operator on an empty space")
    return QMatrix.from_columns(cols, tgt.dim), src, tgt


def random_tensor(cls, n, p, k, rng, density=1.0, den=3):
    """Pseudo-random tensor with small rational coefficients."""
    space = coord_space(cls, n, p, k)
    vec = {}
    for i in range(space.dim):
        if density >= 1 or rng.random() < density:
            c = Fraction(rng.randint(-4, 4), rng.randint(1, den))
            if c:
                vec[i] = c
    return space.to_tensor(vec)


def all_permutations(p):
    return list(permutations(range(p)))


def multinomial_arrangements(idx):
    """Number of distinct orderings of a multiset of indices."""
    out = factorial(len(idx))
    for v in set(idx):
        out //= factorial(idx.count(v))
    return out
