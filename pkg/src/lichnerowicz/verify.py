"""
Exact checks: vanishing of restrictions to the sphere, eigen-equations of
constructed tensors, and batches of randomized operator identities.

The sphere Laplacian is never discretised.  For T with flat_delta T = 0 the
relation between the flat and sphere Laplacians gives

    Delta_S i*T = i*(-C(T))

with C the ambient correction (``symcalc.sym_correction`` for symmetric
tensors, ``formcalc.form_correction`` for forms), so T is an eigentensor
for lambda iff i*(C(T) + lambda T) = 0, which ``pullback_is_zero`` decides
exactly.
"""

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import formcalc, harmonic, symcalc, tensorcalc
from .formcalc import FormTensor
from .harmonic import Kind, SpaceTag, build_space, coord_space
from .qlinalg import Subspace
from .qpoly import HomoPoly, reduce_mod_sphere
from .symcalc import SymTensor
from .tensorcalc import GenTensor, flat_delta, random_tensor


class PreconditionError(ValueError):
    """Input tensor is outside the domain of the check (not a false verdict)."""


def _fmt(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_reduced(poly):
    """Readable form of a ReducedPoly, monomials in x0..xn."""
    parts = []
    for e, c in sorted(poly.terms.items(), reverse=True):
        mono = "*".join(f"x{i}" + (f"^{a}" if a > 1 else "") for i, a in enumerate(e) if a)
        parts.append(_fmt(c) + ("*" + mono if mono else ""))
    return " + ".join(parts) if parts else "0"


# -- restriction to the sphere ---------------------------------------------------------


@dataclass
class PullbackResidual:
    source: object
    residual_tensor: GenTensor
    reduced_norm_zero: bool
    witness: object = None

    def __bool__(self):
        return self.reduced_norm_zero


def pullback_residual(*tensors, source=None):
    """Tangentially project every slot, reduce modulo the sphere, sum.

    Several tensors of one order (possibly of different degrees) may be
    passed; their restrictions are summed.
    """
    if not tensors:
        raise ValueError("nothing to test")
    n, p = tensors[0].n, tensors[0].p
    reduced = {}
    residual = None
    for T in tensors:
        if T.n != n or T.p != p:
            raise tensorcalc.TensorError("tensors of different order or dimension")
        if T.degenerate():
            continue
        P = tensorcalc.tangential(T)
        residual = P if residual is None or residual.k != P.k else residual + P
        comps = {}
        for (idx, e), c in P.terms.items():
            comps.setdefault(idx, {})[e] = c
        for idx, terms in comps.items():
            r = reduce_mod_sphere(HomoPoly._raw(n + 1, P.k, terms))
            reduced[idx] = reduced[idx] + r if idx in reduced else r
    witness = None
    for idx in sorted(reduced):
        if not reduced[idx].is_zero():
            witness = (idx, reduced[idx])
            break
    if residual is None:
        residual = GenTensor.zero(n, p, 0)
    return PullbackResidual(source, residual, witness is None, witness)


def pullback_is_zero(*tensors):
    """True iff the restriction of the (summed) tensors to the unit sphere vanishes."""
    return pullback_residual(*tensors).reduced_norm_zero


# -- eigen-equations -------------------------------------------------------------------------


def sym_residual(T, lam):
    """C(T) + lam T; its restriction vanishes iff i*T is an eigentensor for lam."""
    return symcalc.sym_correction(T) + T.scale(lam)


def form_residual(alpha, lam):
    return formcalc.form_correction(alpha) + alpha.scale(lam)


def eigen_check_sym(T, lam, witness=False):
    """Does i*T satisfy Delta_S i*T = lam i*T?  T must be flat-harmonic.

    Divergence-freeness is not required: the relation between the Laplacians
    only uses flat_delta T = 0, and the blocks carrying metric factors are
    not divergence free.
    """
    if not isinstance(T, SymTensor):
        raise PreconditionError("eigen_check_sym expects a SymTensor")
    if not flat_delta(T).is_zero():
        raise PreconditionError("tensor is not flat-harmonic")
    res = pullback_residual(sym_residual(T, lam))
    return res if witness else res.reduced_norm_zero


def eigen_check_form(alpha, lam, witness=False):
    """Does i*alpha satisfy Delta_S i*alpha = lam i*alpha?  alpha must be harmonic and coclosed."""
    if not isinstance(alpha, FormTensor):
        raise PreconditionError("eigen_check_form expects a FormTensor")
    if not flat_delta(alpha).is_zero():
        raise PreconditionError("form is not flat-harmonic")
    if not formcalc.form_delta(alpha).is_zero():
        raise PreconditionError("form is not coclosed")
    res = pullback_residual(form_residual(alpha, lam))
    return res if witness else res.reduced_norm_zero


# -- reports --------------------------------------------------------------------------------


@dataclass
class CheckResult:
    check_id: str
    inputs: dict
    verdict: bool
    witness: str = None
    trials: int = 1

    def to_dict(self):
        return {"check": self.check_id, "inputs": self.inputs, "verdict": "pass" if self.verdict else "fail",
                "trials": self.trials, "witness": self.witness}


@dataclass
class Report:
    suite: str
    params: dict = field(default_factory=dict)
    results: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def add(self, check_id, inputs, verdict, witness=None, trials=1):
        self.results.append(CheckResult(check_id, dict(inputs), bool(verdict), witness, trials))

    @property
    def passed(self):
        return all(r.verdict for r in self.results)

    @property
    def failures(self):
        return [r for r in self.results if not r.verdict]

    def to_text(self):
        lines = [f"suite {self.suite} " + " ".join(f"{k}={v}" for k, v in self.params.items())]
        for r in self.results:
            inputs = " ".join(f"{k}={v}" for k, v in r.inputs.items())
            line = f"{'PASS' if r.verdict else 'FAIL'} {r.check_id} {inputs} trials={r.trials}"
            if r.witness:
                line += f" witness: {r.witness}"
            lines.append(line)
        for note in self.notes:
            lines.append(f"note: {note}")
        fails = len(self.failures)
        lines.append(f"total {len(self.results)} checks, {fails} failed")
        return "\n".join(lines) + "\n"

    def to_json(self):
        doc = {"suite": self.suite, "params": self.params, "passed": self.passed,
               "results": [r.to_dict() for r in self.results], "notes": self.notes}
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _defect_witness(T):
    """First nonzero term of a defect tensor, or None."""
    if T.is_zero():
        return None
    (idx, e), c = min(T.terms.items())
    mono = "*".join(f"x{i}" + (f"^{a}" if a > 1 else "") for i, a in enumerate(e) if a) or "1"
    return f"component {idx}: {_fmt(c)}*{mono}"


# -- randomized identity suite -------------------------------------------------------------


def _rand_in(space, rng):
    """Random rational combination of a subspace basis, as a tensor."""
    vec = {}
    for v in space.subspace.basis:
        c = Fraction(rng.randint(-3, 3), rng.randint(1, 2))
        if c:
            for i, x in v.items():
                vec[i] = vec.get(i, 0) + c * x
    return space.coords.to_tensor({i: x for i, x in vec.items() if x})


def _member(space_sub, coords, T):
    if T.is_zero():
        return True
    return space_sub.contains_vector(coords.to_vector(T))


_IMAGE_CACHE = {}


def _image_space(name, n, p, k):
    """Images used by membership checks, built once per shape."""
    key = (name, n, p, k)
    if key in _IMAGE_CACHE:
        return _IMAGE_CACHE[key]
    target = coord_space(SymTensor, n, p, k)
    if name == "ir_full":            # i_r(S^(p+1)P_(k-1))
        sub = _span_of_images(target, symcalc.ir, SymTensor, n, p + 1, k - 1)
    elif name == "dstar_full":       # delta*(S^(p-1)P_(k+1))
        sub = _span_of_images(target, symcalc.delta_star, SymTensor, n, p - 1, k + 1)
    elif name == "ir_h0":            # i_r(S^(p+1)H0_(k-1))
        sub = _image_of_built(target, symcalc.ir, SpaceTag(Kind.Hdelta0, n, p + 1, k - 1))
    elif name == "dstar_h0":         # delta*(S^(p-1)H0_(k+1))
        sub = _image_of_built(target, symcalc.delta_star, SpaceTag(Kind.Hdelta0, n, p - 1, k + 1))
    elif name == "harmonic_complement":
        sub = harmonic.harmonic_complement(n, p, k)
    else:
        raise KeyError(name)
    _IMAGE_CACHE[key] = sub
    return sub


def _span_of_images(target, op, cls, n, p, k):
    if p < 0 or k < 0:
        return Subspace.zero(target.dim)
    src = coord_space(cls, n, p, k)
    vecs = []
    for i in range(src.dim):
        img = op(src.unit(i))
        vecs.append(target.to_vector(img) if not img.is_zero() else {})
    return Subspace(target.dim, vecs)


def _image_of_built(target, op, tag):
    if tag.p < 0 or tag.k < 0:
        return Subspace.zero(target.dim)
    vecs = []
    for T in build_space(tag).basis_tensors:
        img = op(T)
        vecs.append(target.to_vector(img) if not img.is_zero() else {})
    return Subspace(target.dim, vecs)


def _sym_identities():
    """(id, function(n, p, k, rng) -> defect tensor or (bool, witness))."""
    S = symcalc

    def rnd(n, p, k, rng):
        return random_tensor(SymTensor, n, p, k, rng)

    def weitzenbock(n, p, k, rng):
        T = rnd(n, p, k, rng)
        return flat_delta(T) - (S.delta(S.delta_star(T)) - S.delta_star(S.delta(T)))

    def trace_laplacian(n, p, k, rng):
        T = rnd(n, p, k, rng)
        return S.trace(flat_delta(T)) - flat_delta(S.trace(T))

    def metric_power_laplacian(n, p, k, rng):
        T = rnd(n, p, k, rng)
        out = None
        for l in (1, 2):
            g = S.metric_power(n, l)
            d = flat_delta(S.sym_prod(T, g)) - S.sym_prod(flat_delta(T), g)
            out = d if out is None or out.is_zero() else out
        return out

    def laplacian_ir(n, p, k, rng):
        T = rnd(n, p, k, rng)
        return flat_delta(S.ir(T)) - S.ir(flat_delta(T)) - S.delta(T).scale(2)

    def divergence_ir(n, p, k, rng):
        T = rnd(n, p, k, rng)
        return S.delta(S.ir(T)) - S.ir(S.delta(T)) + S.trace(T)

    def trace_dstar(n, p, k, rng):
        T = rnd(n, p, k, rng)
        return S.trace(S.delta_star(T)) + S.delta(T).scale(2) - S.delta_star(S.trace(T))

    def trace_ir(n, p, k, rng):
        T = rnd(n, p, k, rng)
        return S.trace(S.ir(T)) - S.ir(S.trace(T))

    def lie(n, p, k, rng):
        T = rnd(n, p, k, rng)
        return tensorcalc.lie_radial(T.as_gen()) - S.lie_radial(T).as_gen()

    def commutator(which):
        def check(n, p, k, rng):
            T = rnd(n, p, k, rng)
            if which == 1:
                return S.commutator_defect(T, 1, 1)
            for h in range(1, 5):
                d = S.commutator_defect(T, h, which)
                if not d.is_zero():
                    return d
            return d
        return check

    def harmonic_split(n, p, k, rng):
        # T = h + rest with h in S^pH_k^delta
        T = rnd(n, p, k, rng)
        hd = build_space(SpaceTag(Kind.Hdelta, n, p, k))
        total = hd.subspace + _image_space("harmonic_complement", n, p, k)
        ok = _member(total, hd.coords, T)
        return ok, None if ok else "not in S^pH_k^delta + complement"

    def metric_blocks(n, p, k, rng):
        # an element of the sum of the metric blocks lies in S^pH_k^delta
        parts = []
        for l in range(p // 2 + 1):
            A = _rand_in(build_space(SpaceTag(Kind.Hdelta0, n, p - 2 * l, k)), rng)
            parts.append(S.sym_prod(A, S.metric_power(n, l)) if l else A)
        T = parts[0]
        for U in parts[1:]:
            T = T + U
        lap, div = flat_delta(T), S.delta(T)
        if lap.is_zero() and div.is_zero():
            return True, None
        return False, "flat Laplacian " + (_defect_witness(lap) or "0") + "; divergence " + (_defect_witness(div) or "0")

    def dstar_split(n, p, k, rng):
        if k > p:
            return None
        T = _rand_in(build_space(SpaceTag(Kind.Hdelta0, n, p, k)), rng)
        P = S.proj_delta_star(T)
        kd = build_space(SpaceTag(Kind.Hdelta0KerDstar, n, p, k))
        ok = _member(kd.subspace, kd.coords, P) and _member(_image_space("ir_h0", n, p, k), kd.coords, T - P)
        return ok, None if ok else "projection splitting failed"

    def ir_split(n, p, k, rng):
        if k < p:
            return None
        T = _rand_in(build_space(SpaceTag(Kind.Hdelta0, n, p, k)), rng)
        P = S.proj_radial(T)
        ki = build_space(SpaceTag(Kind.Hdelta0KerIr, n, p, k))
        ok = _member(ki.subspace, ki.coords, P) and _member(_image_space("dstar_h0", n, p, k), ki.coords, T - P)
        return ok, None if ok else "projection splitting failed"

    def proj_dstar(n, p, k, rng):
        if k > p:
            return None
        T = rnd(n, p, k, rng)
        P = S.proj_delta_star(T)
        for d in (S.proj_delta_star(P) - P, S.delta_star(P)):
            if not d.is_zero():
                return d
        if k >= 1:
            d = S.proj_delta_star(S.ir(rnd(n, p + 1, k - 1, rng)))
            if not d.is_zero():
                return d
        target = coord_space(SymTensor, n, p, k)
        ok = _member(_image_space("ir_full", n, p, k), target, T - P)
        return ok, None if ok else "T - p(T) outside the image of i_r"

    def proj_radial(n, p, k, rng):
        if k < p:
            return None
        T = rnd(n, p, k, rng)
        P = S.proj_radial(T)
        for d in (S.proj_radial(P) - P, S.ir(P)):
            if not d.is_zero():
                return d
        if p >= 1:
            d = S.proj_radial(S.delta_star(rnd(n, p - 1, k + 1, rng)))
            if not d.is_zero():
                return d
        target = coord_space(SymTensor, n, p, k)
        ok = _member(_image_space("dstar_full", n, p, k), target, T - P)
        return ok, None if ok else "T - p(T) outside the image of delta*"

    def general_vs_sym(n, p, k, rng):
        T = rnd(n, p, k, rng)
        return tensorcalc.general_correction(T.as_gen()) - symcalc.sym_correction(T).as_gen()

    return [
        ("weitzenbock_flat", weitzenbock), ("trace_commutes_with_laplacian", trace_laplacian), ("laplacian_commutes_with_metric_power", metric_power_laplacian),
        ("lie_radial_is_scalar", lie), ("harmonic_splitting", harmonic_split), ("metric_blocks_in_harmonic", metric_blocks),
        ("laplacian_of_radial_contraction", laplacian_ir), ("divergence_of_radial_contraction", divergence_ir), ("trace_of_symmetrized_derivative", trace_dstar),
        ("trace_of_radial_contraction", trace_ir), ("ker_dstar_splitting", dstar_split), ("ker_ir_splitting", ir_split),
        ("commutator_dstar_ir", commutator(1)), ("commutator_dstar_power_ir", commutator(2)), ("commutator_dstar_ir_power", commutator(3)),
        ("projector_delta_star", proj_dstar), ("projector_radial", proj_radial),
        ("general_correction_vs_symmetric", general_vs_sym),
    ]


def _form_identities():
    F = formcalc

    def rnd(n, p, k, rng):
        return random_tensor(FormTensor, n, p, k, rng)

    def hodge(n, p, k, rng):
        a = rnd(n, p, k, rng)
        return flat_delta(a) - (F.ext_d(F.form_delta(a)) + F.form_delta(F.ext_d(a)))

    def cartan(n, p, k, rng):
        a = rnd(n, p, k, rng)
        L = F.cartan_lie(a)
        d = L - F.lie_radial(a)
        return d if not d.is_zero() else L - a.scale(k + p)

    def omega_laws(n, p, k, rng):
        if p + k == 0:
            return None
        split = harmonic.build_forms_space(n, p, k)
        a = _rand_in(split.whole, rng)
        w = F.omega_proj(a)
        coords = split.whole.coords
        checks = [(F.omega_proj(w) - w).is_zero(), F.form_ir(w).is_zero(),
                  _member(split.whole.subspace, coords, w),
                  _member(split.ker_ir.subspace, coords, w),
                  _member(split.exact.subspace, coords, a - w)]
        if split.exact.dim:
            checks.append(F.omega_proj(_rand_in(split.exact, rng)).is_zero())
        if split.ker_ir.dim:
            b = _rand_in(split.ker_ir, rng)
            checks.append((F.omega_proj(b) - b).is_zero())
        ok = all(checks)
        return ok, None if ok else f"omega law failures at positions {[i for i, c in enumerate(checks) if not c]}"

    def omega_harmonic(n, p, k, rng):
        # omega is the projector along exact forms: harmonic and coclosed output
        if p + k == 0:
            return None
        split = harmonic.build_forms_space(n, p, k)
        w = F.omega_proj(_rand_in(split.whole, rng))
        d1, d2 = flat_delta(w), F.form_delta(w)
        return d1 if not d1.is_zero() else d2

    def general_vs_forms(n, p, k, rng):
        a = rnd(n, p, k, rng)
        return tensorcalc.general_correction(a.as_gen()) - F.form_correction(a).as_gen()

    def laplacian_ir_forms(n, p, k, rng):
        # the same commutation rule holds for forms (i_r of a form is a form)
        a = rnd(n, p, k, rng)
        return flat_delta(F.form_ir(a)) - F.form_ir(flat_delta(a)) - F.form_delta(a).scale(2)

    return [
        ("hodge_de_rham_flat", hodge), ("cartan_formula", cartan), ("omega_output_harmonic", omega_harmonic),
        ("laplacian_of_radial_contraction_forms", laplacian_ir_forms), ("omega_kernel_and_image", omega_laws),
        ("general_correction_vs_forms", general_vs_forms),
    ]


def _run_one(fn, n, p, k, rng):
    """(verdict, witness) or None when the identity does not apply."""
    out = fn(n, p, k, rng)
    if out is None:
        return None
    if isinstance(out, tuple):
        return bool(out[0]), out[1]
    return out.is_zero(), _defect_witness(out)


def run_identity_suite(seed=1, trials=50, ns=(2, 3), ps=range(4), ks=range(4), only=None):
    """Every identity on ``trials`` pseudo-random rational instances per (n, p, k).

    Deterministic in ``seed``.  A failing entry keeps the failing instance
    with the shortest witness.
    """
    report = Report("identities", {"seed": seed, "trials": trials, "n": list(ns), "p": list(ps), "k": list(ks)})
    families = [("sym", ident) for ident in _sym_identities()]
    families += [("form", ident) for ident in _form_identities()]
    for family, (check_id, fn) in families:
        if only and check_id not in only:
            continue
        for n in ns:
            for p in ps:
                if family == "form" and p > n + 1:
                    continue
                for k in ks:
                    rng = random.Random(f"{seed}:{check_id}:{n}:{p}:{k}")
                    best, done = None, 0
                    for t in range(trials):
                        got = _run_one(fn, n, p, k, rng)
                        if got is None:
                            break
                        done += 1
                        if not got[0]:
                            w = got[1] or "defect"
                            if best is None or len(w) < len(best[1]):
                                best = (t, w)
                    if done:
                        witness = f"trial {best[0]}: {best[1]}" if best else None
                        report.add(check_id, {"n": n, "p": p, "k": k}, best is None, witness, done)
    return report


# -- structural and eigen suites ----------------------------------------------------------


STRUCTURAL_CHECKS = {
    "harmonic_splitting": (harmonic.check_harmonic_splitting, lambda p, k: True),
    "metric_blocks": (harmonic.check_metric_blocks, lambda p, k: True),
    "ker_dstar_splitting": (harmonic.check_ker_dstar_splitting, lambda p, k: k <= p),
    "ker_ir_splitting": (harmonic.check_ker_ir_splitting, lambda p, k: k >= p),
    "injectivity": (harmonic.check_injectivity, lambda p, k: True),
    "chain_decomposition": (harmonic.check_chain_decomposition, lambda p, k: True),
}


def run_structural_suite(ns=(2, 3), ps=range(4), ks=range(5), checks=None):
    report = Report("structural", {"n": list(ns), "p": list(ps), "k": list(ks)})
    for name, (fn, applies) in STRUCTURAL_CHECKS.items():
        if checks and name not in checks:
            continue
        for n in ns:
            for p in ps:
                for k in ks:
                    if applies(p, k):
                        ok = fn(n, p, k)
                        report.add(name, {"n": n, "p": p, "k": k}, ok,
                                   None if ok else "subspace equality fails")
    report.notes.append("metric_blocks is checked as a literal subspace equality in S^pP_k; "
                        "harmonic.check_metric_blocks_projected tests the projected form")
    return report


def run_eigen_suite(n, p, k_max, forms=False):
    """eigen_check on every basis tensor of every block (or forms family) with k <= k_max."""
    from . import spectrum

    report = Report("eigen", {"n": n, "p": p, "k_max": k_max, "variant": "forms" if forms else "symmetric"})
    if forms:
        for k in range(k_max + 1):
            split = harmonic.build_forms_space(n, p, k)
            fams = [("exact", split.exact, spectrum.form_eigenvalue("exact", n, p, k))]
            if p >= 1 and k >= 1:
                fams.append(("coexact", split.ker_ir, spectrum.form_eigenvalue("coexact", n, p, k)))
            if p == 0:
                fams = [("functions", split.whole, spectrum.form_eigenvalue("functions", n, p, k))]
            for fam, space, lam in fams:
                _eigen_batch(report, space, lam, eigen_check_form, {"family": fam})
        return report
    for k in range(k_max + 1):
        for tag in harmonic.block_tags(n, p, k):
            lam = spectrum.sym_eigenvalue(n, p, tag.k, tag.l, tag.q)
            _eigen_batch(report, build_space(tag), lam, eigen_check_sym, {"kind": str(tag.kind), "q": tag.q, "l": tag.l})
    return report


def _eigen_batch(report, space, lam, check, extra):
    tag = space.tag
    failures = []
    for i, T in enumerate(space.basis_tensors):
        res = check(T, lam, witness=True)
        if not res:
            idx, poly = res.witness
            failures.append(f"basis {i}: component {idx} reduces to {format_reduced(poly)}")
    inputs = {"n": tag.n, "p": tag.p, "k": tag.k, **extra, "lambda": lam, "dim": space.dim}
    report.add("eigen_" + ("form" if check is eigen_check_form else "sym"), inputs, not failures,
               failures[0] if failures else None, space.dim)
