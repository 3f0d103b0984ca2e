"""Sublevel sets of polynomials on the unit ball, measured exactly.

Run with:  python demos/03_good_functions.py
"""
from fractions import Fraction

from ffdioph.calculus import MPoly, PolyMap, factorial_identity_check, nondeg_order, phi_n
from ffdioph.field_arith import make_field
from ffdioph.goodfn import BallSpec, check_good, polynomial_family_sweep, sublevel_measure
from ffdioph.laurent import LaurentBall, NormExp

F = make_field(3)
B = BallSpec.unit(F)

# Difference quotients stay meaningful where derivatives vanish.
f = MPoly.parse(F, "x^3")
a, b = MPoly.var(F, 2, 0), MPoly.var(F, 2, 1)
print("Phi_1 x^3 =", phi_n(f, [a, b]))
print("(x^3)' =", f.derivative((1,)), "  and 3! D_3 x^3 = x^3''' :", factorial_identity_check(f, 3))
zero = [LaurentBall.zero(F)]
print("nondeg order of (x, x^2):", nondeg_order(PolyMap.parse(F, "x;x^2"), zero, 4))
print("nondeg order of (x, x^3):", nondeg_order(PolyMap.parse(F, "x;x^3"), zero, 4))

for text in ["x", "x^2", "x^3+X^-1*x"]:
    g = MPoly.parse(F, text)
    ms = [sublevel_measure(g, B, NormExp(-j)) for j in (1, 2, 3)]
    print(f"{text:12s} lambda(|f| < 3^-j sup) for j=1,2,3:", [str(m) for m in ms])

rep = check_good(MPoly.parse(F, "x^2"), B, 1, Fraction(1, 2), [NormExp(-2 * j) for j in (1, 2, 3)])
print("x^2 is (1, 1/2)-good on the grid:", rep.overall, " least C:", rep.c_emp)

# A small exhaustive family: degree <= 2, coefficients of degree <= 1.
fam = polynomial_family_sweep(F, 2, 1, Fraction(1, 3), (0, -1, -2, -3), N=10)
print(f"{fam.family_size} polynomials ({fam.orbits} orbits): C_emp = {fam.c_emp},"
      f" worst {fam.worst}")
