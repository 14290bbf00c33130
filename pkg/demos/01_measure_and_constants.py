"""Signed residue windows and the tunable counting measure.

Every dimension D gets a window of signed representatives for Z_D and a
weighted counting measure mu(S) = #S * nu^2.  The default weight makes
the whole window measure sqrt(D), which is the choice that turns the
Fourier generator into a unitary.  Run this to see the constants move
as D and nu change.
"""

from quditzx import MeasureContext

for D in (2, 3, 4, 5, 9):
    ctx = MeasureContext(D)
    print(f"D={D}:")
    print(f"  window        [{ctx.lower}, {ctx.upper}]  (sigma={ctx.sigma})")
    print(f"  residues      {list(ctx.residues())}")
    print(f"  nu (default)  {ctx.nu:.6f}   total measure {ctx.total_measure:.6f}")
    print(f"  omega         {ctx.omega:.4f}")
    print(f"  tau           {ctx.tau:.4f}")

print()
print("The same dimension under a flat weight nu=1:")
flat = MeasureContext(5, nu=1.0)
print(f"  D=5, nu=1: total measure {flat.total_measure}  well-tempered? {flat.is_well_tempered}")

# tau squares to omega up to the sign bookkeeping, which is what lets
# quadratic phase labels live on the doubled modulus
ctx = MeasureContext(4)
print()
print(f"  D=4: tau^2 = {ctx.tau**2:.4f}  vs omega = {ctx.omega:.4f}")
