"""The eight generators as dense tensors, and Fourier unitarity.

Generators are tiny dense tensors over the residue window.  The
negative-exponent Hadamard box is the discrete Fourier transform; at
the default measure weight it is exactly unitary, while at any other
weight the product F^dag F is the constant D nu^4 times the identity.
"""

import numpy as np

from quditzx import Generator, MeasureContext, One, Phase, eval_generator

ctx = MeasureContext(3)

print("Copy dot (white), 1 input 2 outputs: entries nu^(2-3) on the diagonal")
w = eval_generator(ctx, Generator.white(1, 2))
print(np.round(w.data, 4))

print()
print("Phase dot (green) with a smooth phase ramp, 1 -> 1:")
g = eval_generator(ctx, Generator.green(Phase(0.7), 1, 1))
print(np.round(g.as_matrix(), 4))

print()
print("Fourier generator F (1 -> 1) at several dimensions:")
for D in (2, 3, 4, 5, 8):
    ctx = MeasureContext(D)
    f = eval_generator(ctx, Generator.hminus()).as_matrix()
    err = np.max(np.abs(f.conj().T @ f - np.eye(D)))
    print(f"  D={D}: max |F^dag F - I| = {err:.3e}")

print()
print("And with the flat weight nu=1 the same product is D*I:")
for D in (2, 5):
    ctx = MeasureContext(D, nu=1.0)
    f = eval_generator(ctx, Generator.hminus()).as_matrix()
    gram = f.conj().T @ f
    print(f"  D={D}: F^dag F [0,0] = {gram[0, 0]:.4f}  (expect {D}.0)")

print()
print("A scalar H-box holds its value exactly at any weight:")
for nu in (None, 1.0, 0.33):
    ctx = MeasureContext(4, nu=nu) if nu else MeasureContext(4)
    from quditzx import UnitPow

    box = eval_generator(ctx, Generator.hbox(UnitPow(2.5 - 1j), 0, 0))
    print(f"  nu={ctx.nu:.4f}: box value {box.data.reshape(()):.4f}")
