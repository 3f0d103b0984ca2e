"""How often does the flowed lattice of (x, x^2) have a short vector?

Run with:  python demos/04_nondivergence.py
"""
from fractions import Fraction

from ffdioph.calculus import PolyMap
from ffdioph.field_arith import make_field
from ffdioph.goodfn import BallSpec, Radical
from ffdioph.laurent import NormExp
from ffdioph.nondiv import (HSpec, bc_partial_sums, conditions_check, flows_up_to, measure_E,
                            verify_impmain)

F = make_field(3)
B = BallSpec.unit(F)
f = PolyMap.parse(F, "x;x^2")

for t in [(1, 0), (1, 1), (2, 1), (2, 2)]:
    row = [str(measure_E(f, B, t, NormExp(-j))) for j in (1, 2, 3)]
    print(f"t={t}: lambda(delta < 3^-j) for j=1,2,3:", row)

# The hypotheses of the non-divergence criterion at t = 0, scanning submodules of degree <= 1.
cond = conditions_check(B, HSpec(f, (0, 0)), NormExp(0), Radical(32, 2), Fraction(1, 2))
print(f"{len(cond.rows)} submodules scanned: good={cond.cond1}, sup >= rho: {cond.cond2}")

rep = verify_impmain(f, B, flows_up_to(2, 3), [NormExp(-1), NormExp(-2)])
print(f"measure bound with C = {rep.C}, alpha = {rep.alpha}: all rows pass = {rep.overall}")
worst = max(rep.rows, key=lambda r: float(Radical(r.measure.to_fraction()) / r.bound))
print(f"  tightest row t={worst.t} eps=3^{worst.eps.e}: {worst.measure} vs {worst.bound}")

for q, shell, partial in bc_partial_sums(f, B, 1, 6, N=12):
    print(f"t_sum={q}: shell {shell}, partial sum {partial}")
