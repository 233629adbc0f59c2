"""Symmetric 2-tensors on S^3: the V/W blocks, their eigenvalues, and an exact eigen check of each basis."""
from lichnerowicz import harmonic, spectrum
from lichnerowicz.verify import run_eigen_suite

n, p = 3, 2
for k in range(3):
    for tag in harmonic.block_tags(n, p, k):
        lam = spectrum.sym_eigenvalue(n, p, tag.k, tag.l, tag.q)
        print(tag.label(), "dim", harmonic.dim_formula(tag), "lambda", lam)

report = run_eigen_suite(n, p, 2)
print(report.to_text())
