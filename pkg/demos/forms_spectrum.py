"""Coexact and exact families of harmonic 1-forms, and the symmetric 1-tensor spectrum beside them."""
from lichnerowicz import spectrum
from lichnerowicz.harmonic import build_forms_space

n = 3
forms = spectrum.forms_spectrum(n, 1, 3)
for line in forms:
    fams = ", ".join(f"{c.family}(k={c.tag.k}):{c.dim}" for c in line.contributors)
    print(line.eigenvalue, line.multiplicity, fams, "" if line.complete else "(possibly incomplete)")

# 1-tensors are 1-forms: same lines either way
print(spectrum.lines_signature(forms) == spectrum.lines_signature(spectrum.sym_spectrum(n, 1, 3)))

split = build_forms_space(n, 1, 2)   # harmonic 1-forms of degree 2 = radial kernel + exact part
print(split.whole.dim, split.ker_ir.dim, split.exact.dim)
