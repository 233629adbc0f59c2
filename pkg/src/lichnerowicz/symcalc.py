"""
Symmetric covariant tensors: delta^*, Tr, i_r, the symmetric product and
the two projectors onto Ker delta^* (k <= p) and Ker i_r (k >= p).

Components are stored on sorted index tuples with no multiplicity
weights.  The symmetric product is the unnormalised shuffle sum, so
``delta^* f = df``, ``delta^* T`` is the shuffle of ``DT`` and
``Tr(T) . <,>`` matches the metric-insertion sum of the general formula.
"""

from collections import Counter
from fractions import Fraction
from itertools import combinations_with_replacement, permutations
from math import comb

from .tensorcalc import GenTensor, Tensor, TensorError, _acc, _unit_add, multinomial_arrangements


def _sorted_insert(idx, i):
    return tuple(sorted(idx + (i,)))


def _remove_one(idx, i):
    pos = idx.index(i)
    return idx[:pos] + idx[pos + 1:]


class SymTensor(Tensor):
    kind = "sym"
    __slots__ = ()

    @staticmethod
    def _canon(idx):
        return tuple(sorted(idx)), 1

    @staticmethod
    def index_tuples(n, p):
        return list(combinations_with_replacement(range(n + 1), p))

    @classmethod
    def from_poly(cls, f, n=None):
        n = f.nvars - 1 if n is None else n
        return cls._make(n, 0, f.degree, {((), e): c for e, c in f.terms.items()})

    def as_gen(self):
        out = {}
        for (idx, e), c in self.terms.items():
            for perm in set(permutations(idx)):
                out[(perm, e)] = c
        return GenTensor._make(self.n, self.p, self.k, out)


def symmetrize(T):
    """Average over slot permutations; inverse of the embedding on symmetric input."""
    out = {}
    for (idx, e), c in T.as_gen().terms.items():
        key = tuple(sorted(idx))
        _acc(out, (key, e), Fraction(c, multinomial_arrangements(key)))
    return SymTensor._make(T.n, T.p, T.k, out)


def embed(T):
    return T.as_gen()


def delta_star(T):
    """(delta^* T)(X_0..X_p) = sum_j D_{X_j} T(..X_j omitted..)."""
    out = {}
    for (idx, e), c in T.terms.items():
        for j, a in enumerate(e):
            if a:
                new = _sorted_insert(idx, j)
                _acc(out, (new, _unit_add(e, j, -1)), c * a * new.count(j))
    return SymTensor._make(T.n, T.p + 1, T.k - 1, out)


def delta(T):
    """Divergence -sum_i d_i T(e_i, ...); zero on functions."""
    out = {}
    for (idx, e), c in T.terms.items():
        for i in set(idx):
            if e[i]:
                _acc(out, (_remove_one(idx, i), _unit_add(e, i, -1)), -c * e[i])
    return SymTensor._make(T.n, T.p - 1, T.k - 1, out)


def trace(T):
    """Contract the first two slots; zero for p < 2."""
    out = {}
    for (idx, e), c in T.terms.items():
        for l, m in Counter(idx).items():
            if m >= 2:
                _acc(out, (_remove_one(_remove_one(idx, l), l), e), c)
    return SymTensor._make(T.n, T.p - 2, T.k, out)


def ir(T):
    """Radial contraction i_r (slot choice is irrelevant); zero on functions."""
    out = {}
    for (idx, e), c in T.terms.items():
        for i in set(idx):
            _acc(out, (_remove_one(idx, i), _unit_add(e, i, 1)), c)
    return SymTensor._make(T.n, T.p - 1, T.k + 1, out)


def ir_power(T, h):
    for _ in range(h):
        T = ir(T)
    return T


def delta_star_power(T, h):
    for _ in range(h):
        T = delta_star(T)
    return T


def sym_prod(S, T):
    """Unnormalised shuffle product S . T."""
    if S.n != T.n:
        raise TensorError("symmetric product of tensors on different spaces")
    out = {}
    for (i1, e1), c1 in S.terms.items():
        m1 = Counter(i1)
        for (i2, e2), c2 in T.terms.items():
            new = tuple(sorted(i1 + i2))
            weight = 1
            for l, m in Counter(new).items():
                weight *= comb(m, m1.get(l, 0))
            e = tuple(a + b for a, b in zip(e1, e2))
            _acc(out, (new, e), c1 * c2 * weight)
    return SymTensor._make(S.n, S.p + T.p, S.k + T.k, out)


def metric(n):
    return SymTensor._make(n, 2, 0, {((i, i), (0,) * (n + 1)): Fraction(1) for i in range(n + 1)})


def metric_power(n, l):
    """l-fold symmetric product of the flat metric (l = 0 gives the constant 1)."""
    if l < 0:
        raise ValueError("metric power must be non-negative")
    out = SymTensor._make(n, 0, 0, {((), (0,) * (n + 1)): Fraction(1)})
    g = metric(n)
    for _ in range(l):
        out = sym_prod(out, g)
    return out


def dr_squared(n):
    """d(r^2) = 2 sum_i x_i dx_i."""
    terms = {}
    for i in range(n + 1):
        terms[((i,), _unit_add((0,) * (n + 1), i, 1))] = Fraction(2)
    return SymTensor._make(n, 1, 1, terms)


def r_squared_times(T):
    from .qpoly import HomoPoly

    return T.mul_poly(HomoPoly.r_squared(T.nvars))


def lie_radial(T):
    return T.scale(T.k + T.p)


# -- projectors ---------------------------------------------------------------------------


def _recurrence(length, factor):
    """c_0 = 1, c_s = (s+1) * factor(s) * c_{s+1}."""
    coeffs = [Fraction(1)]
    for s in range(length):
        f = (s + 1) * factor(s)
        assert f != 0, "projector recurrence hit a zero factor"
        coeffs.append(coeffs[-1] / f)
    return coeffs


def delta_star_coefficients(p, k):
    if k > p:
        raise ValueError(f"p_delta* is only defined for k <= p (got p={p}, k={k})")
    return _recurrence(k, lambda s: k - p - s - 2)


def radial_coefficients(p, k):
    if k < p:
        raise ValueError(f"p_r is only defined for k >= p (got p={p}, k={k})")
    return _recurrence(p, lambda s: p - k - s - 2)


def proj_delta_star(T):
    """sum_s alpha_s i_r^s delta*^s T, projecting S^pP_k onto Ker delta* (k <= p)."""
    alphas = delta_star_coefficients(T.p, T.k)
    out = SymTensor.zero(*T.shape)
    cur = T
    for s, a in enumerate(alphas):
        out = out + ir_power(cur, s).scale(a)
        cur = delta_star(cur)
    return out


def proj_radial(T):
    """sum_s beta_s delta*^s i_r^s T, projecting S^pP_k onto Ker i_r (k >= p)."""
    betas = radial_coefficients(T.p, T.k)
    out = SymTensor.zero(*T.shape)
    cur = T
    for s, b in enumerate(betas):
        out = out + delta_star_power(cur, s).scale(b)
        cur = ir(cur)
    return out


def commutator_defect(T, h=1, which=1):
    """LHS - RHS of the three commutation rules between delta* and i_r.

    1: delta*(i_r T) - i_r delta*(T) = (p-k) T
    2: delta*^h(i_r T) - i_r delta*^h(T) = h(p-k+h-1) delta*^{h-1}(T)
    3: delta*(i_r^h T) - i_r^h delta*(T) = h(p-k-h+1) i_r^{h-1} T
    """
    p, k = T.p, T.k
    if which == 1:
        return delta_star(ir(T)) - ir(delta_star(T)) - T.scale(p - k)
    if h < 1:
        raise ValueError("h must be at least 1")
    if which == 2:
        lhs = delta_star_power(ir(T), h) - ir(delta_star_power(T, h))
        return lhs - delta_star_power(T, h - 1).scale(h * (p - k + h - 1))
    if which == 3:
        lhs = delta_star(ir_power(T, h)) - ir_power(delta_star(T), h)
        return lhs - ir_power(T, h - 1).scale(h * (p - k - h + 1))
    raise ValueError(f"unknown identity {which}")


def sym_correction(T):
    """Ambient correction of the symmetric relation between the flat and sphere Laplacians."""
    p, n = T.p, T.n
    LT = lie_radial(T)
    out = T.scale(2 * p * (1 - p)) + LT.scale(2 * p - n + 1) - lie_radial(LT)
    out = out - delta_star(ir(T)).scale(2)
    return out + sym_prod(trace(T), metric(n)).scale(2)
