"""Spherical harmonics from harmonic polynomials: eigenvalues k(k+n-1), multiplicities by degree."""
from lichnerowicz import spectrum
from lichnerowicz.harmonic import Kind, SpaceTag, build_space
from lichnerowicz.verify import eigen_check_sym

n = 3
for line in spectrum.sym_spectrum(n, 0, 4):
    print(line.eigenvalue, line.multiplicity)

# every basis polynomial of degree 2 restricts to an eigenfunction
space = build_space(SpaceTag(Kind.Hdelta0, n, 0, 2))
print(space.dim, all(eigen_check_sym(T, 2 * (2 + n - 1)) for T in space.basis_tensors))
