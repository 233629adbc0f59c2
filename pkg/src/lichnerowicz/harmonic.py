"""
Exact bases of the polynomial tensor spaces on R^(n+1) and their closed-form
dimensions.

Every kernel-type space is the nullspace of a stack of operator matrices
on the monomial-tuple coordinates of S^pP_k (or of the p-forms with degree
k coefficients).  The eigenspace building blocks are images of such
kernels:

    V(k, q, l) = i_r^(k-q)   (S^(p-2l+k-q) H0_q  cap Ker delta*) . <,>^l   for k <= p-2l
    W(k, q, l) = delta*^(p-2l-q) (S^q H0_(p-2l+k-q) cap Ker i_r)   . <,>^l   for k >  p-2l

where H0 denotes the harmonic, divergence free, trace free tensors.

Blocks with l >= 1 are not divergence free in R^(n+1) (for instance
delta(f <,>) = -df), so they are not subspaces of S^pH_k^delta.  They are
independent modulo r^2 S^pP_(k-2) + dr^2 . S^(p-1)P_(k-1) and project
isomorphically onto S^pH_k^delta along it; both readings have a check below.
On homogeneous tensors the restriction to the sphere kills exactly
dr^2 . S^(p-1)P_(k-1) (``pullback_kernel``).
"""

import hashlib
import os
import tempfile
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from pathlib import Path

from . import formcalc, symcalc
from .formcalc import FormTensor
from .qlinalg import QMatrix, Subspace, is_direct_sum, nullspace, rank
from .symcalc import SymTensor
from .tensorcalc import coord_space, operator_matrix

CONVENTIONS = (
    "format=1; component values on canonical tuples; unnormalised shuffle product; "
    "0-based indices; exponent vectors lex-descending; flat_delta=-sum d_i^2"
)
CONVENTION_HASH = hashlib.sha256(CONVENTIONS.encode()).hexdigest()[:16]


class Kind(str, Enum):
    PolyFull = "PolyFull"
    Hdelta = "Hdelta"
    Hdelta0 = "Hdelta0"
    Hdelta0KerDstar = "Hdelta0KerDstar"
    Hdelta0KerIr = "Hdelta0KerIr"
    FormsHk = "FormsHk"
    FormsKerIr = "FormsKerIr"
    FormsExact = "FormsExact"
    V = "V"
    W = "W"

    def __str__(self):
        return self.value


FORM_KINDS = {Kind.FormsHk, Kind.FormsKerIr, Kind.FormsExact}
KERNEL_KINDS = {Kind.Hdelta, Kind.Hdelta0, Kind.Hdelta0KerDstar, Kind.Hdelta0KerIr,
                Kind.FormsHk, Kind.FormsKerIr}


class RegimeError(ValueError):
    pass


def in_S0(p, k, l, q):
    return 0 <= l <= p // 2 and 0 <= k <= p - 2 * l and 0 <= q <= k


def in_S1(p, k, l, q):
    return 0 <= l <= p // 2 and k > p - 2 * l and k >= 0 and 0 <= q <= p - 2 * l


@dataclass(frozen=True)
class SpaceTag:
    kind: Kind
    n: int
    p: int
    k: int
    q: int = None
    l: int = None

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if self.n < 1:
            raise RegimeError("sphere dimension must be at least 1")
        if self.kind is Kind.V and not in_S0(self.p, self.k, self.l, self.q):
            raise RegimeError(f"V needs (k,l,q) in S0, got {(self.k, self.l, self.q)} at p={self.p}")
        if self.kind is Kind.W and not in_S1(self.p, self.k, self.l, self.q):
            raise RegimeError(f"W needs (k,l,q) in S1, got {(self.k, self.l, self.q)} at p={self.p}")
        if self.kind not in (Kind.V, Kind.W) and (self.q is not None or self.l is not None):
            raise RegimeError(f"{self.kind} takes no (q, l)")

    @property
    def tensor_class(self):
        return FormTensor if self.kind in FORM_KINDS else SymTensor

    def label(self):
        base = f"{self.kind}(n={self.n},p={self.p},k={self.k}"
        if self.q is not None:
            base += f",q={self.q},l={self.l}"
        return base + ")"

    def source(self):
        """Kernel tag whose image is this V/W block."""
        p, k, q, l = self.p, self.k, self.q, self.l
        if self.kind is Kind.V:
            return SpaceTag(Kind.Hdelta0KerDstar, self.n, p - 2 * l + k - q, q)
        if self.kind is Kind.W:
            return SpaceTag(Kind.Hdelta0KerIr, self.n, q, p - 2 * l + k - q)
        raise RegimeError(f"{self.kind} has no source space")


@dataclass
class BuiltSpace:
    tag: SpaceTag
    subspace: Subspace

    @property
    def coords(self):
        return coord_space(self.tag.tensor_class, self.tag.n, self.tag.p, self.tag.k)

    @property
    def dim(self):
        return self.subspace.dim

    @property
    def basis_tensors(self):
        space = self.coords
        return [space.to_tensor(v) for v in self.subspace.basis]


# -- operator matrices ---------------------------------------------------------------------

_SYM_OPS = {
    # name: (function, change in p, change in k)
    "lap": (lambda T: _flat_delta(T), 0, -2),
    "delta": (symcalc.delta, -1, -1),
    "trace": (symcalc.trace, -2, 0),
    "dstar": (symcalc.delta_star, 1, -1),
    "ir": (symcalc.ir, -1, 1),
    "r2": (symcalc.r_squared_times, 0, 2),
}

_FORM_OPS = {
    "lap": (lambda a: _flat_delta(a), 0, -2),
    "delta": (formcalc.form_delta, -1, -1),
    "d": (formcalc.ext_d, 1, -1),
    "ir": (formcalc.form_ir, -1, 1),
}


def _flat_delta(T):
    from .tensorcalc import flat_delta

    return flat_delta(T)


@lru_cache(maxsize=None)
def op_matrix(name, n, p, k, forms=False):
    """Coordinate matrix of a named operator on S^pP_k (or p-forms)."""
    ops = _FORM_OPS if forms else _SYM_OPS
    cls = FormTensor if forms else SymTensor
    fn, dp, dk = ops[name]
    m, _, _ = operator_matrix(fn, cls, n, p, k, cls, p + dp, k + dk)
    return m


def _dr2_matrix(n, p, k):
    """dr^2 . (-) from S^(p-1)P_(k-1) into S^pP_k."""
    dr2 = symcalc.dr_squared(n)
    m, _, _ = operator_matrix(lambda T: symcalc.sym_prod(dr2, T), SymTensor, n, p - 1, k - 1,
                              SymTensor, p, k)
    return m


def defining_matrix(tag):
    """Stacked operators whose common kernel is the space (kernel kinds only)."""
    n, p, k = tag.n, tag.p, tag.k
    forms = tag.kind in FORM_KINDS
    names = {
        Kind.Hdelta: ["lap", "delta"],
        Kind.Hdelta0: ["lap", "delta", "trace"],
        Kind.Hdelta0KerDstar: ["lap", "delta", "trace", "dstar"],
        Kind.Hdelta0KerIr: ["lap", "delta", "trace", "ir"],
        Kind.FormsHk: ["lap", "delta"],
        Kind.FormsKerIr: ["lap", "delta", "ir"],
    }[tag.kind]
    return QMatrix.vstack([op_matrix(name, n, p, k, forms) for name in names])


def _image(m, space):
    return Subspace(m.rows, [m.matvec(v) for v in space.basis])


# -- construction ----------------------------------------------------------------------------


_MEMO = {}


def build_space(tag, cache=None):
    """Exact basis of the tagged space (reduced echelon form)."""
    if not isinstance(tag, SpaceTag):
        raise TypeError("build_space expects a SpaceTag")
    if tag in _MEMO:
        return _MEMO[tag]
    cache = cache if cache is not None else default_cache()
    coords = coord_space(tag.tensor_class, tag.n, tag.p, tag.k)
    if tag.kind is Kind.PolyFull:
        sub = Subspace.full(coords.dim)
    elif tag.kind in KERNEL_KINDS:
        sub = cache.load(tag) if cache else None
        if sub is None:
            sub = nullspace(defining_matrix(tag))
            if cache:
                cache.store(tag, sub)
    elif tag.kind is Kind.FormsExact:
        src = build_space(SpaceTag(Kind.FormsHk, tag.n, tag.p - 1, tag.k + 1), cache)
        sub = _image(op_matrix("d", tag.n, tag.p - 1, tag.k + 1, True), src.subspace)
    else:
        sub = _build_block(tag, cache)
    built = BuiltSpace(tag, sub)
    _MEMO[tag] = built
    return built


def _build_block(tag, cache):
    n, p, k, q, l = tag.n, tag.p, tag.k, tag.q, tag.l
    src = build_space(tag.source(), cache)
    if tag.kind is Kind.V:
        step, times = symcalc.ir, k - q
    else:
        step, times = symcalc.delta_star, p - 2 * l - q
    g_l = symcalc.metric_power(n, l)
    target = coord_space(SymTensor, n, p, k)
    vectors = []
    for T in src.basis_tensors:
        for _ in range(times):
            T = step(T)
        if l:
            T = symcalc.sym_prod(T, g_l)
        vectors.append(target.to_vector(T) if not T.is_zero() else {})
    return Subspace(target.dim, vectors)


def clear_memo():
    _MEMO.clear()


def poly_full(n, p, k):
    return build_space(SpaceTag(Kind.PolyFull, n, p, k))


def pullback_kernel(n, p, k):
    """dr^2 . S^(p-1)P_(k-1): the homogeneous tensors restricting to zero on the sphere."""
    target = coord_space(SymTensor, n, p, k)
    if p < 1 or k < 1:
        return Subspace.zero(target.dim)
    m = _dr2_matrix(n, p, k)
    return Subspace(target.dim, m.transpose().row_dicts())


def modulo_pullback(space, n, p, k):
    return space + pullback_kernel(n, p, k)


# -- closed-form dimensions ---------------------------------------------------------------


def _fact(m):
    if m < 0:
        raise _Undefined
    return factorial(m)


class _Undefined(Exception):
    pass


def _exact(num, den):
    if den == 0:
        raise _Undefined
    v = Fraction(num, den)
    if v.denominator != 1:
        raise ArithmeticError(f"closed form gave a non-integer {v}")
    return int(v)


def dim_poly(n, p, k):
    """dim S^pP_k = (n+p)!/(n!p!) * (n+k)!/(n!k!)."""
    if p < 0 or k < 0:
        return 0
    return _exact(factorial(n + p) * factorial(n + k), factorial(n) * factorial(p) * factorial(n) * factorial(k))


def homo_dim(nvars, k):
    return comb(nvars - 1 + k, k) if k >= 0 else 0


def hdelta_dim(n, p, k):
    if p < 0 or k < 0:
        return 0
    P = dim_poly
    return P(n, p, k) - P(n, p, k - 2) - P(n, p - 1, k - 1) + P(n, p - 1, k - 3)


def hdelta0_dim(n, p, k):
    if p < 0 or k < 0:
        return 0
    return hdelta_dim(n, p, k) - hdelta_dim(n, p - 2, k)


def ker_dstar_dim_by_difference(n, p, k):
    if k > p:
        return None
    return hdelta0_dim(n, p, k) - hdelta0_dim(n, p + 1, k - 1)


def ker_ir_dim_by_difference(n, p, k):
    if k < p:
        return None
    return hdelta0_dim(n, p, k) - hdelta0_dim(n, p - 1, k + 1)


def kernel_dim_closed(kind, n, p, k):
    """Closed-form dimensions of the trace-free kernel slices; None where no formula applies."""
    kind = Kind(kind)
    F = _fact
    try:
        if kind is Kind.Hdelta0KerIr:
            if p == 0 and k >= 0:
                return _exact(F(n + k - 2) * (n + 2 * k - 1), F(k) * F(n - 1))
            if p == 1 and k >= 1:
                return _exact(F(n + k - 3) * k * (n + 2 * k - 1) * (n + k - 1), F(n - 2) * F(k + 1))
            if k >= p >= 2:
                num = F(n + k - 3) * F(n + p - 4) * (n + p + k - 2)
                num *= (n - 2) * (n + 2 * k - 1) * (n + 2 * p - 3) * (k - p + 1)
                return _exact(num, F(k + 1) * F(p) * F(n - 1) * F(n - 2))
        if kind is Kind.Hdelta0KerDstar:
            if k == 0 and p >= 0:
                return _exact(F(n + p - 2) * (n + 2 * p - 1), F(p) * F(n - 1))
            if k == 1 and p >= 1:
                return _exact(F(n + p - 3) * p * (n + 2 * p - 1) * (n + p - 1), F(n - 2) * F(p + 1))
            if 2 <= k <= p:
                num = F(n + k - 4) * F(n + p - 3) * (n + p + k - 2)
                num *= (n - 2) * (n + 2 * k - 3) * (n + 2 * p - 1) * (p - k + 1)
                return _exact(num, F(k) * F(p + 1) * F(n - 1) * F(n - 2))
    except _Undefined:
        return None
    return None


def forms_dim_closed(family, n, p, k):
    """Closed-form multiplicities for harmonic forms; None outside the formula's range.

    family: "functions" (p = 0), "coexact" (Im omega at degree k >= 1),
    "exact" (d of degree k+1 forms), "merged" (n = 2p: coexact at degree k+1 together with exact at degree k).
    """
    F = _fact
    try:
        if family == "functions":
            if p != 0 or k < 0:
                return None
            return _exact(F(n + k - 2) * (n + 2 * k - 1), F(k) * F(n - 1))
        if family == "coexact":
            if not (1 <= p <= n and k >= 1):
                return None
            return _exact(F(n + k - 1) * (n + 2 * k - 1),
                          F(p) * F(k - 1) * F(n - p - 1) * (n + k - p - 1) * (k + p))
        if family == "exact":
            if not (1 <= p <= n and k >= 0):
                return None
            return _exact(F(n + k) * (n + 2 * k + 1),
                          F(p - 1) * F(k) * F(n - p) * (n + k - p + 1) * (k + p))
        if family == "merged":
            if not (1 <= p <= n and n == 2 * p and k >= 0):
                return None
            return _exact(2 * F(2 * p + k) * (2 * p + 2 * k + 1),
                          F(p) * F(p - 1) * F(k) * (k + p + 1) * (k + p))
    except _Undefined:
        return None
    raise ValueError(f"unknown forms family {family!r}")


def dim_formula(tag):
    """Closed-form dimension of a tagged space, or None when no closed form applies."""
    n, p, k = tag.n, tag.p, tag.k
    kind = tag.kind
    if kind is Kind.PolyFull:
        return dim_poly(n, p, k)
    if kind is Kind.Hdelta:
        return hdelta_dim(n, p, k)
    if kind is Kind.Hdelta0:
        return hdelta0_dim(n, p, k)
    if kind is Kind.Hdelta0KerDstar:
        t = kernel_dim_closed(kind, n, p, k)
        return t if t is not None else ker_dstar_dim_by_difference(n, p, k)
    if kind is Kind.Hdelta0KerIr:
        t = kernel_dim_closed(kind, n, p, k)
        return t if t is not None else ker_ir_dim_by_difference(n, p, k)
    if kind in (Kind.V, Kind.W):
        return dim_formula(tag.source())
    if kind is Kind.FormsKerIr:
        if p == 0:
            return None
        return forms_dim_closed("coexact", n, p, k)
    if kind is Kind.FormsExact:
        if p == 0:
            return 0
        return forms_dim_closed("exact", n, p, k)
    if kind is Kind.FormsHk:
        if p == 0:
            return forms_dim_closed("functions", n, 0, k)
        a, b = forms_dim_closed("coexact", n, p, k), forms_dim_closed("exact", n, p, k)
        if a is None or b is None:
            return None
        return a + b
    return None


# -- decompositions ---------------------------------------------------------------------------


def block_tags(n, p, k):
    """V/W tags of degree k: for each l, V(q=0..k) if k <= p-2l else W(q=0..p-2l)."""
    tags = []
    for l in range(p // 2 + 1):
        if k <= p - 2 * l:
            tags += [SpaceTag(Kind.V, n, p, k, q, l) for q in range(k + 1)]
        else:
            tags += [SpaceTag(Kind.W, n, p, k, q, l) for q in range(p - 2 * l + 1)]
    return tags


def decompose_Hdelta(n, p, k, cache=None):
    """The V/W blocks of degree k (see the module docstring for how they relate to S^pH_k^delta)."""
    return [build_space(t, cache) for t in block_tags(n, p, k)]


@dataclass
class FormsSplit:
    whole: BuiltSpace
    ker_ir: BuiltSpace
    exact: BuiltSpace

    @property
    def omega_matrix(self):
        """Matrix of omega on the basis of the whole space (columns = images)."""
        tag = self.whole.tag
        space = self.whole.coords
        cols = []
        for a in self.whole.basis_tensors:
            w = formcalc.omega_proj(a)
            cols.append(space.to_vector(w) if not w.is_zero() else {})
        return QMatrix.from_columns(cols, space.dim) if cols else QMatrix(space.dim, 0)


def build_forms_space(n, p, k, cache=None):
    whole = build_space(SpaceTag(Kind.FormsHk, n, p, k), cache)
    ker_ir = build_space(SpaceTag(Kind.FormsKerIr, n, p, k), cache)
    exact = build_space(SpaceTag(Kind.FormsExact, n, p, k), cache)
    return FormsSplit(whole, ker_ir, exact)


# -- structural checks (each returns a bool) ---------------------------------------------------


def check_harmonic_splitting(n, p, k):
    """S^pP_k = S^pH_k^delta (+) (r^2 S^pP_(k-2) + dr^2 . S^(p-1)P_(k-1))."""
    full = poly_full(n, p, k).subspace
    hd = build_space(SpaceTag(Kind.Hdelta, n, p, k)).subspace
    return is_direct_sum([hd, harmonic_complement(n, p, k)], full)


def _metric_blocks(n, p, k):
    """S^(p-2l)H0_k . <,>^l for l = 0..p/2, as subspaces of S^pP_k."""
    target = coord_space(SymTensor, n, p, k)
    parts = []
    for l in range(p // 2 + 1):
        src = build_space(SpaceTag(Kind.Hdelta0, n, p - 2 * l, k))
        g_l = symcalc.metric_power(n, l)
        parts.append(Subspace(target.dim, [target.to_vector(symcalc.sym_prod(T, g_l))
                                           for T in src.basis_tensors]))
    return parts


def harmonic_complement(n, p, k):
    """r^2 S^pP_(k-2) + dr^2 . S^(p-1)P_(k-1)."""
    rest = pullback_kernel(n, p, k)
    if k >= 2:
        rest = rest + _image(op_matrix("r2", n, p, k - 2), poly_full(n, p, k - 2).subspace)
    return rest


def check_metric_blocks(n, p, k):
    """S^pH_k^delta = (+)_l S^(p-2l)H0_k . <,>^l as subspaces of S^pP_k.

    False once p >= 2 and k >= 1: delta(f <,>) = -df, so the l >= 1 blocks
    leave Ker delta.
    """
    whole = build_space(SpaceTag(Kind.Hdelta, n, p, k)).subspace
    return is_direct_sum(_metric_blocks(n, p, k), whole)


def check_metric_blocks_projected(n, p, k):
    """The metric blocks are independent modulo the harmonic complement and span with it.

    Equivalently, the harmonic projection along that complement maps their
    direct sum isomorphically onto S^pH_k^delta.
    """
    parts = [harmonic_complement(n, p, k)] + _metric_blocks(n, p, k)
    return is_direct_sum(parts, poly_full(n, p, k).subspace)


def check_ker_dstar_splitting(n, p, k):
    """k <= p: H0 = (H0 cap Ker delta*) (+) i_r(S^(p+1)H0_(k-1))."""
    if k > p:
        raise RegimeError("needs k <= p")
    h0 = build_space(SpaceTag(Kind.Hdelta0, n, p, k)).subspace
    kd = build_space(SpaceTag(Kind.Hdelta0KerDstar, n, p, k)).subspace
    parts = [kd]
    if k >= 1:
        src = build_space(SpaceTag(Kind.Hdelta0, n, p + 1, k - 1)).subspace
        parts.append(_image(op_matrix("ir", n, p + 1, k - 1), src))
    return is_direct_sum(parts, h0)


def check_ker_ir_splitting(n, p, k):
    """k >= p: H0 = (H0 cap Ker i_r) (+) delta*(S^(p-1)H0_(k+1))."""
    if k < p:
        raise RegimeError("needs k >= p")
    h0 = build_space(SpaceTag(Kind.Hdelta0, n, p, k)).subspace
    ki = build_space(SpaceTag(Kind.Hdelta0KerIr, n, p, k)).subspace
    parts = [ki]
    if p >= 1:
        src = build_space(SpaceTag(Kind.Hdelta0, n, p - 1, k + 1)).subspace
        parts.append(_image(op_matrix("dstar", n, p - 1, k + 1), src))
    return is_direct_sum(parts, h0)


def _chain_image(step, src, times):
    target = None
    vecs = []
    for T in src.basis_tensors:
        for _ in range(times):
            T = step(T)
        if target is None:
            target = coord_space(SymTensor, T.n, T.p, T.k)
        vecs.append(target.to_vector(T) if not T.is_zero() else {})
    return vecs, target


def chain_parts(n, p, k, route):
    """Summands of S^pH0_k from i_r powers of Ker delta* (route='ir') or delta* powers of Ker i_r."""
    target = coord_space(SymTensor, n, p, k)
    parts = []
    if route == "ir":
        for l in range(k + 1):
            src = build_space(SpaceTag(Kind.Hdelta0KerDstar, n, p + l, k - l))
            vecs, _ = _chain_image(symcalc.ir, src, l)
            parts.append(Subspace(target.dim, vecs))
    elif route == "dstar":
        for l in range(p + 1):
            src = build_space(SpaceTag(Kind.Hdelta0KerIr, n, p - l, k + l))
            vecs, _ = _chain_image(symcalc.delta_star, src, l)
            parts.append(Subspace(target.dim, vecs))
    else:
        raise ValueError(route)
    return parts


def check_chain_decomposition(n, p, k):
    """Direct sum descriptions of S^pH0_k; at k = p both routes agree summand by summand."""
    h0 = build_space(SpaceTag(Kind.Hdelta0, n, p, k)).subspace
    ok = True
    if k <= p:
        ok &= is_direct_sum(chain_parts(n, p, k, "ir"), h0)
    if k >= p:
        ok &= is_direct_sum(chain_parts(n, p, k, "dstar"), h0)
    if k == p:
        a, b = chain_parts(n, p, k, "ir"), chain_parts(n, p, k, "dstar")
        ok &= all(x == y for x, y in zip(a, b))
    return bool(ok)


def check_injectivity(n, p, k):
    """i_r injective for k < p, delta* injective for k > p, equal kernels at k = p."""
    src_dim = coord_space(SymTensor, n, p, k).dim
    if k < p:
        return rank(op_matrix("ir", n, p, k)) == src_dim
    if k > p:
        return rank(op_matrix("dstar", n, p, k)) == src_dim
    return nullspace(op_matrix("ir", n, p, k)) == nullspace(op_matrix("dstar", n, p, k))


def check_decomposition(n, p, k, projected=False):
    """S^pH0_k is the direct sum of the l = 0 blocks, and all blocks together give S^pH_k^delta.

    With ``projected`` the second statement is taken modulo the harmonic complement.
    """
    blocks = decompose_Hdelta(n, p, k)
    h0 = build_space(SpaceTag(Kind.Hdelta0, n, p, k)).subspace
    if not is_direct_sum([b.subspace for b in blocks if b.tag.l == 0], h0):
        return False
    parts = [b.subspace for b in blocks]
    if projected:
        return is_direct_sum([harmonic_complement(n, p, k)] + parts, poly_full(n, p, k).subspace)
    return is_direct_sum(parts, build_space(SpaceTag(Kind.Hdelta, n, p, k)).subspace)


# -- persistent cache -------------------------------------------------------------------------


def _fmt(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class BasisCache:
    """One plain-text file per tag; every load re-verifies the defining equations.

    File layout (one item per line)::

        # lichnerowicz exact basis
        format 1
        kind <Kind>
        n <int>
        p <int>
        k <int>
        convention <hash>
        ambient <int>
        dim <int>
        vectors
        <col>:<num>[/<den>] <col>:<num>[/<den>] ...     (one vector per line)
    """

    def __init__(self, directory):
        self.dir = Path(directory)

    def path(self, tag):
        return self.dir / f"{tag.kind}_n{tag.n}_p{tag.p}_k{tag.k}.basis"

    @staticmethod
    def serialize(tag, sub):
        lines = ["# lichnerowicz exact basis", "format 1", f"kind {tag.kind}",
                 f"n {tag.n}", f"p {tag.p}", f"k {tag.k}", f"convention {CONVENTION_HASH}",
                 f"ambient {sub.ambient_dim}", f"dim {sub.dim}", "vectors"]
        for v in sub.basis:
            lines.append(" ".join(f"{c}:{_fmt(x)}" for c, x in sorted(v.items())))
        return "\n".join(lines) + "\n"

    def store(self, tag, sub):
        atomic_write(self.path(tag), self.serialize(tag, sub))

    def load(self, tag):
        path = self.path(tag)
        if not path.exists():
            return None
        try:
            sub = self._parse(tag, path.read_text())
        except (ValueError, KeyError, IndexError):
            return None
        if sub is None or not self._verify(tag, sub):
            return None
        return sub

    def _parse(self, tag, text):
        lines = text.splitlines()
        header = {}
        it = iter(lines[1:])
        for line in it:
            if line == "vectors":
                break
            key, value = line.split(" ", 1)
            header[key] = value
        expected = {"format": "1", "kind": str(tag.kind), "n": str(tag.n), "p": str(tag.p),
                    "k": str(tag.k), "convention": CONVENTION_HASH}
        if any(header.get(k) != v for k, v in expected.items()):
            return None
        vectors = []
        for line in it:
            if not line.strip():
                continue
            vec = {}
            for item in line.split():
                c, x = item.split(":")
                vec[int(c)] = Fraction(x)
            vectors.append(vec)
        if len(vectors) != int(header["dim"]):
            return None
        return Subspace(int(header["ambient"]), vectors)

    def _verify(self, tag, sub):
        m = defining_matrix(tag)
        if m.cols != sub.ambient_dim:
            return False
        if any(m.matvec(v) for v in sub.basis):
            return False
        expected = dim_formula(tag)
        if expected is None:
            expected = m.cols - rank(m)
        return sub.dim == expected


def atomic_write(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


CACHE_ENV = "LICHNEROWICZ_CACHE"
_DEFAULT = {"cache": None, "resolved": False}


def default_cache():
    if not _DEFAULT["resolved"]:
        d = os.environ.get(CACHE_ENV)
        _DEFAULT["cache"] = BasisCache(d) if d else None
        _DEFAULT["resolved"] = True
    return _DEFAULT["cache"]


def set_default_cache(directory):
    _DEFAULT["cache"] = BasisCache(directory) if directory else None
    _DEFAULT["resolved"] = True
