"""Successive minima of F_q[X]-lattices from a weak Popov form.

Run with:  python demos/02_lattices.py
"""
from ffdioph.field_arith import make_field
from ffdioph.polylattice import (LatticeBasis, Submodule, delta, det_norm, enumerate_primitive,
                                 reduce_basis)

F = make_field(3)

for rows in ["1,0;0,1", "X,0;0,X^-1", "1,X^2;0,1", "X^2+1,X;X^3,X^2+2"]:
    b = LatticeBasis.parse(F, rows)
    red = reduce_basis(b)
    print(f"{rows:22s} minima exps {[m.e for m in red.minima]}  det exp {det_norm(b).e}")
    print("   reduced rows:", [[str(v) for v in r] for r in red.rows])

# The flowed standard lattice diag(X^2, X^-1, X^-1) Z^3.
print("delta(diag(X^2, X^-1, X^-1)) = 3^%d" % delta(LatticeBasis.diagonal(F, [2, -1, -1])).e)

# Primitive submodules and their wedge norms.
for s in ["X,0", "X,1", "1,X;0,X"]:
    d = Submodule.parse(F, s)
    print(f"span{{{s}}}: primitive={d.primitive}, |Delta| = 3^{d.norm().e}")

lines = list(enumerate_primitive(F, 2, 1, 1))
print(len(lines), "primitive lines in Z^2 with entries of degree <= 1")
