"""
Eigenvalues and multiplicities of the sphere Laplacian on symmetric
tensors and on forms, grouped by eigenvalue.

Each line lists its contributors (a tagged space and its dimension).
Dimensions come from the closed forms when they apply and from exact
nullspaces otherwise (or always, with ``computed=True``).

Truncation: a line is emitted when some contributor has degree k <= k_max.
For fixed (l, q), or a fixed forms family, the eigenvalue grows strictly
with k, so whether a higher-degree contributor could join a line is
decidable; such lines carry ``complete=False``.
"""

from dataclasses import dataclass, field
from enum import Enum

from . import harmonic
from .harmonic import Kind, RegimeError, SpaceTag, build_space, dim_formula, in_S0, in_S1


class Regime(str, Enum):
    SymmetricN2 = "SymmetricN2"
    SymmetricNge3 = "SymmetricNge3"
    Forms = "Forms"

    def __str__(self):
        return self.value


@dataclass
class Contributor:
    tag: SpaceTag
    dim: int
    source: str  # "closed" or "computed"
    family: str = None

    def to_dict(self):
        t = self.tag
        return {"kind": str(t.kind), "k": t.k, "l": t.l, "q": t.q, "dim": self.dim,
                "source": self.source, "family": self.family}


@dataclass
class SpectralLine:
    eigenvalue: int
    contributors: list
    regime: Regime
    complete: bool = True
    formula_multiplicity: int = None
    formula_note: str = None
    mismatch: bool = False
    skipped: list = field(default_factory=list)
    relabelled: list = field(default_factory=list)

    @property
    def multiplicity(self):
        return sum(c.dim for c in self.contributors)

    def to_dict(self):
        d = {"eigenvalue": self.eigenvalue, "multiplicity": self.multiplicity,
             "contributors": [c.to_dict() for c in self.contributors], "complete": self.complete}
        if self.regime is Regime.SymmetricN2 or self.formula_multiplicity is not None:
            d["formula_multiplicity"] = self.formula_multiplicity
            d["mismatch"] = self.mismatch
        if self.formula_note:
            d["formula_note"] = self.formula_note
        if self.skipped:
            d["skipped"] = list(self.skipped)
        if self.relabelled:
            d["relabelled"] = list(self.relabelled)
        return d


def _check_int(lam):
    if not isinstance(lam, int):
        raise AssertionError(f"eigenvalue {lam!r} is not an integer")
    return lam


def sym_eigenvalue(n, p, k, l, q):
    """(k+p-2l)(n+p+k-2l-2q-1) + 2q(q-1) for (k, l, q) in S0 or S1."""
    if not (in_S0(p, k, l, q) or in_S1(p, k, l, q)):
        raise RegimeError(f"(k,l,q)={(k, l, q)} is outside S0 and S1 for p={p}")
    return _check_int((k + p - 2 * l) * (n + p + k - 2 * l - 2 * q - 1) + 2 * q * (q - 1))


def form_eigenvalue(family, n, p, k):
    if family == "functions":
        return k * (k + n - 1)
    if family == "coexact":
        return (k + p) * (k + n - p - 1)
    if family == "exact":
        return (k + p) * (k + n - p + 1)
    raise ValueError(f"unknown forms family {family!r}")


def _dim(tag, computed):
    if not computed:
        d = dim_formula(tag)
        if d is not None:
            return d, "closed"
    return build_space(tag).dim, "computed"


def _closed_or_computed(tag):
    d = dim_formula(tag)
    return d if d is not None else build_space(tag).dim


def _group(contribs, regime):
    lines = {}
    for lam, c in contribs:
        lines.setdefault(lam, []).append(c)
    return [SpectralLine(lam, cs, regime) for lam, cs in sorted(lines.items())]


def _sym_tag(n, p, k, l, q):
    kind = Kind.V if in_S0(p, k, l, q) else Kind.W
    return SpaceTag(kind, n, p, k, q, l)


def _sym_families(p):
    return [(l, q) for l in range(p // 2 + 1) for q in range(p - 2 * l + 1)]


def sym_spectrum(n, p, k_max, computed=False):
    """Lines from every V/W block of degree k <= k_max (n >= 3)."""
    if n < 3:
        raise ValueError("use n2_spectrum for n = 2")
    contribs = []
    for k in range(k_max + 1):
        for tag in harmonic.block_tags(n, p, k):
            d, src = _dim(tag, computed)
            if d:
                contribs.append((sym_eigenvalue(n, p, k, tag.l, tag.q), Contributor(tag, d, src)))
    lines = _group(contribs, Regime.SymmetricNge3)
    for line in lines:
        line.complete = not _sym_beyond(n, p, k_max, line.eigenvalue)
    return lines


def _sym_beyond(n, p, k_max, lam):
    """Some nonzero block of degree > k_max has eigenvalue lam."""
    for l, q in _sym_families(p):
        k = k_max + 1
        while True:
            if in_S0(p, k, l, q) or in_S1(p, k, l, q):
                mu = sym_eigenvalue(n, p, k, l, q)
                if mu > lam:
                    break
                if mu == lam and _closed_or_computed(_sym_tag(n, p, k, l, q)):
                    return True
            elif k > p:
                break
            k += 1
    return False


# -- n = 2 ------------------------------------------------------------------------------------


def n2_lambda(p, k, l):
    return (k + p - 2 * l) * (k + p - 2 * l + 1)


def n2_formula_multiplicity(p, k, l):
    return 2 * (min(l, k // 2) + 1) * (1 + 2 * p + 2 * k - 4 * l)


def n2_eigenspace_tags(p, k, l):
    """Summands of the eigenspace for lambda(k, l).

    Every summand is nominally V (if k <= p-2l) or W (otherwise), but
    some of the indices lie in the other regime; those are placed in the
    regime that contains them and reported as relabelled.  Indices in
    neither regime are skipped.  Returns (tags, relabelled, skipped).
    """
    tags, relabelled, skipped = [], [], []
    kind = Kind.V if k <= p - 2 * l else Kind.W
    for a in range(min(l, k // 2) + 1):
        for kk, q in ((k - 2 * a, 0), (k + 1 - 2 * a, 1)):
            ll = l - a
            label = f"{kind}(k={kk},q={q},l={ll})"
            if in_S0(p, kk, ll, q):
                actual = Kind.V
            elif in_S1(p, kk, ll, q):
                actual = Kind.W
            else:
                skipped.append(label)
                continue
            if actual is not kind:
                relabelled.append(f"{label} -> {actual}")
            tags.append(SpaceTag(actual, 2, p, kk, q, ll))
    return tags, relabelled, skipped


def n2_spectrum(p, k_max, computed=True):
    """Lines lambda(k, l) for k <= k_max, with the closed multiplicity beside the summed dims.

    Each eigenvalue is realised by several (k, l) with equal k + p - 2l; the
    one with the largest l lists the summands of all others, so it is used
    both for the composition and for the closed multiplicity.
    """
    by_lam = {}
    for k in range(k_max + 1):
        for l in range(p // 2 + 1):
            lam = n2_lambda(p, k, l)
            K = k + p - 2 * l
            by_lam.setdefault(lam, K)
    lines = []
    for lam, K in sorted(by_lam.items()):
        pairs = [(K - p + 2 * l, l) for l in range(p // 2 + 1) if K - p + 2 * l >= 0]
        kc, lc = max(pairs, key=lambda kl: kl[1])
        tags, relabelled, skipped = n2_eigenspace_tags(p, kc, lc)
        contribs = []
        for tag in tags:
            d, src = _dim(tag, computed)
            if d:
                contribs.append(Contributor(tag, d, src))
        line = SpectralLine(lam, contribs, Regime.SymmetricN2, complete=True, skipped=skipped,
                            relabelled=relabelled)
        line.formula_multiplicity = n2_formula_multiplicity(p, kc, lc)
        line.formula_note = f"m(lambda(k={kc},l={lc}))"
        line.mismatch = line.formula_multiplicity != line.multiplicity
        lines.append(line)
    return lines


def n2_consistency(p, k_max):
    """Per degree d <= k_max: summed contributor dims at degree d vs dim S^pH_d^delta.

    Returns {d: (sum of dims, closed-form value)}; lines are generated far
    enough out that every block of degree <= k_max is listed.
    """
    lines = n2_spectrum(p, k_max + p + 1)
    seen = {}
    for line in lines:
        for c in line.contributors:
            seen[c.tag] = c.dim
    out = {}
    for d in range(k_max + 1):
        total = sum(dim for tag, dim in seen.items() if tag.k == d)
        out[d] = (total, harmonic.hdelta_dim(2, p, d))
    return out


# -- forms ---------------------------------------------------------------------------------


def _form_families(n, p):
    """(family, tag kind, least k) for the forms eigenvalue families."""
    if p == 0:
        return [("functions", Kind.FormsHk, 0)]
    return [("coexact", Kind.FormsKerIr, 1), ("exact", Kind.FormsExact, 0)]


def forms_spectrum(n, p, k_max, computed=False):
    if not 0 <= p <= n:
        raise ValueError("forms spectrum needs 0 <= p <= n")
    contribs = []
    for family, kind, k0 in _form_families(n, p):
        for k in range(k0, k_max + 1):
            tag = SpaceTag(kind, n, p, k)
            d, src = _dim(tag, computed)
            if d:
                contribs.append((form_eigenvalue(family, n, p, k), Contributor(tag, d, src, family)))
    lines = _group(contribs, Regime.Forms)
    for line in lines:
        line.complete = not _forms_beyond(n, p, k_max, line.eigenvalue)
        if p >= 1 and n == 2 * p:
            # merged family: coexact at degree k+1 with exact at degree k
            for k in range(k_max + 2):
                if (k + p) * (k + p + 1) == line.eigenvalue:
                    line.formula_multiplicity = harmonic.forms_dim_closed("merged", n, p, k)
                    line.formula_note = f"merged n=2p family at k={k}"
                    line.mismatch = line.complete and line.formula_multiplicity != line.multiplicity
    return lines


def _forms_beyond(n, p, k_max, lam):
    for family, kind, k0 in _form_families(n, p):
        k = max(k0, k_max + 1)
        while True:
            mu = form_eigenvalue(family, n, p, k)
            if mu > lam:
                break
            if mu == lam and _closed_or_computed(SpaceTag(kind, n, p, k)):
                return True
            k += 1
    return False


def lines_signature(lines):
    """(eigenvalue, multiplicity, complete) triples, for comparing spectra."""
    return [(l.eigenvalue, l.multiplicity, l.complete) for l in lines]
