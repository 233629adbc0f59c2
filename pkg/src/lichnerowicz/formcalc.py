"""
Differential forms with homogeneous polynomial coefficients.

Components are the values ``alpha(e_{i_1}, ..., e_{i_p})`` on strictly
increasing tuples, so ``dx_1 ^ dx_2`` has component 1 on ``(0, 1)``.  The
exterior derivative is the alternating sum of flat derivatives, the
coderivative is the restriction of the tensor divergence, and with these
conventions Cartan's formula ``L_r = d i_r + i_r d`` holds with no extra signs.
"""

from fractions import Fraction
from itertools import combinations, permutations

from . import tensorcalc
from .tensorcalc import GenTensor, Tensor, _acc, _unit_add, perm_sign


class FormTensor(Tensor):
    kind = "form"
    __slots__ = ()

    @staticmethod
    def _canon(idx):
        sign = perm_sign(idx)
        return tuple(sorted(idx)), sign

    @staticmethod
    def index_tuples(n, p):
        return list(combinations(range(n + 1), p))

    @classmethod
    def from_poly(cls, f, n=None):
        n = f.nvars - 1 if n is None else n
        return cls._make(n, 0, f.degree, {((), e): c for e, c in f.terms.items()})

    def as_gen(self):
        out = {}
        for (idx, e), c in self.terms.items():
            for perm in permutations(idx):
                out[(perm, e)] = c * perm_sign(perm)
        return GenTensor._make(self.n, self.p, self.k, out)


def antisymmetrize(T):
    """Alternating average; inverse of the embedding on forms."""
    out = {}
    T = T.as_gen()
    fact = 1
    for i in range(2, T.p + 1):
        fact *= i
    for (idx, e), c in T.terms.items():
        s = perm_sign(idx)
        if s:
            _acc(out, (tuple(sorted(idx)), e), Fraction(s * c, fact))
    return FormTensor._make(T.n, T.p, T.k, out)


def ext_d(alpha):
    """d alpha(X_0..X_p) = sum_j (-1)^j D_{X_j} alpha(..X_j omitted..)."""
    out = {}
    for (idx, e), c in alpha.terms.items():
        for j, a in enumerate(e):
            if a and j not in idx:
                new = tuple(sorted(idx + (j,)))
                pos = new.index(j)
                _acc(out, (new, _unit_add(e, j, -1)), c * a * (-1) ** pos)
    return FormTensor._make(alpha.n, alpha.p + 1, alpha.k - 1, out)


def form_delta(alpha):
    """Coderivative: -sum_i d_i alpha(e_i, ...); zero on functions."""
    out = {}
    for (idx, e), c in alpha.terms.items():
        for pos, i in enumerate(idx):
            if e[i]:
                rest = idx[:pos] + idx[pos + 1:]
                _acc(out, (rest, _unit_add(e, i, -1)), -c * e[i] * (-1) ** pos)
    return FormTensor._make(alpha.n, alpha.p - 1, alpha.k - 1, out)


def form_ir(alpha):
    """alpha(r, ...); zero on functions."""
    out = {}
    for (idx, e), c in alpha.terms.items():
        for pos, i in enumerate(idx):
            rest = idx[:pos] + idx[pos + 1:]
            _acc(out, (rest, _unit_add(e, i, 1)), c * (-1) ** pos)
    return FormTensor._make(alpha.n, alpha.p - 1, alpha.k + 1, out)


def lie_radial(alpha):
    return tensorcalc.lie_radial(alpha)


def cartan_lie(alpha):
    """L_r via Cartan's formula, d i_r + i_r d."""
    return ext_d(form_ir(alpha)) + form_ir(ext_d(alpha))


def omega_proj(alpha):
    """alpha - d i_r alpha / (p + k); projects onto Ker i_r along exact forms."""
    p, k = alpha.p, alpha.k
    if p + k == 0:
        raise ValueError("omega is undefined for p = k = 0")
    return alpha - ext_d(form_ir(alpha)).scale(Fraction(1, p + k))


def form_correction(alpha):
    """Ambient correction of the relation between flat and sphere Hodge Laplacians."""
    p, n = alpha.p, alpha.n
    L = lie_radial(alpha)
    return L.scale(2 * p - n + 1) - lie_radial(L) - ext_d(form_ir(alpha)).scale(2)
