"""
Exact homogeneous polynomials over the rationals.

A ``HomoPoly`` is a sparse map from exponent vectors to nonzero
``Fraction`` coefficients, every exponent vector summing to the same
degree.  Negative degrees are allowed only for the zero polynomial; they
show up naturally as derivatives of constants.

``ReducedPoly`` is the canonical representative of a (not necessarily
homogeneous) polynomial modulo the sphere ideal ``x_1^2 + ... + x_m^2 - 1``,
where the square of the last variable is always eliminated.
"""

from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb


class DimensionMismatch(ValueError):
    pass


def monomials(nvars, k):
    """All exponent vectors of total degree ``k``, graded-lex descending."""
    if k < 0:
        return []
    return _monomials(nvars, k)


@lru_cache(maxsize=None)
def _monomials(nvars, k):
    out = []
    for combo in combinations_with_replacement(range(nvars), k):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    # combinations_with_replacement gives lex-ascending variable lists,
    # which is lex-descending on exponent vectors
    return tuple(out)


def homo_dim(nvars, k):
    if k < 0:
        return 0
    return comb(nvars - 1 + k, k)


def _clean(terms):
    return {e: c for e, c in terms.items() if c != 0}


class HomoPoly:
    """Homogeneous polynomial with exact rational coefficients."""

    __slots__ = ("nvars", "degree", "terms", "_hash")

    def __init__(self, nvars, degree, terms=None):
        if nvars < 1:
            raise ValueError("nvars must be positive")
        self.nvars = nvars
        self.degree = degree
        terms = {} if terms is None else terms
        clean = {}
        for e, c in terms.items():
            if c == 0:
                continue
            if len(e) != nvars or sum(e) != degree or min(e) < 0:
                raise DimensionMismatch(f"exponent {e} not of degree {degree} in {nvars} vars")
            clean[tuple(e)] = Fraction(c)
        self.terms = dict(sorted(clean.items(), reverse=True))
        self._hash = None

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, nvars, degree=0):
        return cls(nvars, degree)

    @classmethod
    def const(cls, nvars, c):
        return cls(nvars, 0, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars, i):
        if not 0 <= i < nvars:
            raise IndexError(f"variable index {i} out of range")
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, 1, {tuple(e): 1})

    @classmethod
    def r_squared(cls, nvars):
        terms = {}
        for i in range(nvars):
            e = [0] * nvars
            e[i] = 2
            terms[tuple(e)] = 1
        return cls(nvars, 2, terms)

    @classmethod
    def _raw(cls, nvars, degree, terms):
        # trusted fast path: terms already validated, zeros dropped
        obj = cls.__new__(cls)
        obj.nvars = nvars
        obj.degree = degree
        obj.terms = dict(sorted(terms.items(), reverse=True))
        obj._hash = None
        return obj

    # -- basics -----------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, HomoPoly):
            if not self.terms and not other.terms:
                return self.nvars == other.nvars
            return (self.nvars, self.degree, self.terms) == (other.nvars, other.degree, other.terms)
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return not self.terms
            return self.degree == 0 and self.terms == {(0,) * self.nvars: Fraction(other)}
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, self.degree if self.terms else None,
                               tuple(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"HomoPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms.items():
            mono = "*".join(
                f"x{i + 1}" if a == 1 else f"x{i + 1}^{a}" for i, a in enumerate(e) if a
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    # -- arithmetic -------------------------------------------------------

    def _check(self, other, same_degree):
        if self.nvars != other.nvars:
            raise DimensionMismatch("polynomials live in different numbers of variables")
        if same_degree and self.degree != other.degree and self.terms and other.terms:
            raise DimensionMismatch(f"degree {self.degree} vs {other.degree}")

    def __add__(self, other):
        self._check(other, True)
        degree = self.degree if self.terms else other.degree
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return HomoPoly._raw(self.nvars, degree, _clean(out))

    def __neg__(self):
        return HomoPoly._raw(self.nvars, self.degree, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = Fraction(c)
        if c == 0:
            return HomoPoly._raw(self.nvars, self.degree, {})
        return HomoPoly._raw(self.nvars, self.degree, {e: c * v for e, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other, False)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return HomoPoly._raw(self.nvars, self.degree + other.degree, _clean(out))

    __rmul__ = __mul__

    def partial(self, i):
        if not 0 <= i < self.nvars:
            raise IndexError(f"variable index {i} out of range")
        out = {}
        for e, c in self.terms.items():
            a = e[i]
            if a:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * a
        return HomoPoly._raw(self.nvars, self.degree - 1, out)

    def euler(self):
        """sum_i x_i d_i p, i.e. degree * p."""
        return self.scale(self.degree)

    def evaluate(self, point):
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for x, a in zip(point, e):
                if a:
                    term *= Fraction(x) ** a
            total += term
        return total


def poly_add(a, b):
    return a + b


def poly_scale(a, c):
    return a.scale(c)


def poly_mul(a, b):
    return a * b


def partial(p, i):
    return p.partial(i)


def flat_laplacian(p):
    """sum_i d_i d_i p (the positive, analyst's sign)."""
    out = {}
    for e, c in p.terms.items():
        for i, a in enumerate(e):
            if a >= 2:
                f = list(e)
                f[i] -= 2
                f = tuple(f)
                out[f] = out.get(f, 0) + c * a * (a - 1)
    return HomoPoly._raw(p.nvars, p.degree - 2, _clean(out))


class ReducedPoly:
    """Normal form modulo the sphere ideal; last-variable exponent is 0 or 1."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        terms = {} if terms is None else terms
        for e in terms:
            if e[-1] > 1:
                raise ValueError(f"exponent {e} is not reduced")
        self.terms = dict(sorted(((e, Fraction(c)) for e, c in terms.items() if c != 0),
                                 reverse=True))

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, ReducedPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return not self.terms
            return self.terms == {(0,) * self.nvars: Fraction(other)}
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, tuple(self.terms.items())))

    def __repr__(self):
        return f"ReducedPoly({self.terms})"

    def __add__(self, other):
        if self.nvars != other.nvars:
            raise DimensionMismatch("different numbers of variables")
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return ReducedPoly(self.nvars, out)

    def __neg__(self):
        return ReducedPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        """Product, re-reduced."""
        if isinstance(other, (int, Fraction)):
            return ReducedPoly(self.nvars, {e: c * other for e, c in self.terms.items()})
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                for f, d in _reduce_monomial(e):
                    out[f] = out.get(f, 0) + c1 * c2 * d
        return ReducedPoly(self.nvars, out)

    def evaluate(self, point):
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for x, a in zip(point, e):
                if a:
                    term *= Fraction(x) ** a
            total += term
        return total


@lru_cache(maxsize=None)
def _reduce_monomial(e):
    """x^e with x_last^2 -> 1 - x_1^2 - ... - x_{m-1}^2, as a tuple of (exp, coeff)."""
    m, b = divmod(e[-1], 2)
    head = e[:-1]
    if m == 0:
        return ((e, 1),)
    out = {}
    nhead = len(head)
    # (1 - s)^m with s = sum of squares of the other variables
    for j in range(m + 1):
        sign_binom = (-1) ** j * comb(m, j)
        for combo in combinations_with_replacement(range(nhead), j):
            counts = [0] * nhead
            for i in combo:
                counts[i] += 1
            coef = sign_binom * _multinomial(j, counts)
            f = tuple(h + 2 * c for h, c in zip(head, counts)) + (b,)
            out[f] = out.get(f, 0) + coef
    return tuple((f, c) for f, c in out.items() if c)


def _multinomial(j, counts):
    out = 1
    left = j
    for c in counts:
        out *= comb(left, c)
        left -= c
    return out


def reduce_mod_sphere(p):
    if p.nvars < 2:
        raise ValueError("sphere reduction needs at least two variables")
    out = {}
    for e, c in p.terms.items():
        for f, d in _reduce_monomial(e):
            out[f] = out.get(f, 0) + c * d
    return ReducedPoly(p.nvars, out)
