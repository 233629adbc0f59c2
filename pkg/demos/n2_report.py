"""On S^2 the closed multiplicity formula is printed beside the computed dimension sums."""
from lichnerowicz import spectrum

for p in range(4):
    print(f"p={p}")
    for line in spectrum.n2_spectrum(p, 3):
        flag = "MISMATCH" if line.mismatch else ""
        print(f"  {line.eigenvalue:>4} computed {line.multiplicity:>3} formula {line.formula_multiplicity:>3} {flag}")
        for s in line.skipped:
            print("     skipped", s)
    # per degree, the blocks still add up to the full divergence-free space
    print("  totals", spectrum.n2_consistency(p, 3))
