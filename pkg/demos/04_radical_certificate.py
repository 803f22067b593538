"""
Certifying a Jacobson radical, not just computing one
=====================================================

For each congruence case of (p, n) there is an explicit candidate family
for Rad(T).  The certificate has four stages, each exact:

  (a) the candidate spans a two-sided ideal V,
  (b) V is nilpotent (powers of the subspace hit zero),
  (c) an explicit matrix-unit table satisfies the delta relations modulo V,
  (d) dim T - dim V equals the sum of squares of the block sizes.

Together these prove V = Rad(T) and pin the Wedderburn decomposition of
T/Rad(T) -- no semisimplicity theory is trusted at runtime.
"""
from tforge.structure import CaseLabel, certify_radical, decompose
from tforge.talgebra import closure_generate, make_context
from tforge.scheme import GroupSpec

# A non-semisimple point: p = 2, n = 8.
rep = decompose(2, 8)
print(f"(2,8) is case {rep['case']}: dim T = {rep['dim_T']}, "
      f"dim Rad = {rep['dim_rad']}")
print("blocks of T/Rad:", rep["blocks"])
print("certificate stages:", rep["certificate"])

# The per-corner reports carry the same structure in miniature, plus the
# rank equality E_4*.Rad(T).E_4* = Rad(E_4*TE_4*).
c4 = rep["corners"][4]
print(f"\nE_4* corner: dim {c4['dim']}, radical {c4['rad_dim']}, "
      f"blocks {c4['blocks']}, projection ok: {c4['radical_projection']['pass']}")

# A semisimple point: p = 5, n = 4 (the radical candidate is empty).
rep = decompose(5, 4)
print(f"\n(5,4) is case {rep['case']}: dim Rad = {rep['dim_rad']}, "
      f"blocks {rep['blocks']}, semisimple = {rep['semisimple']}")

# The certifier is falsifiable: feed it the wrong candidate and stage (c)
# fails with concrete unit products that land outside the claimed ideal.
ctx = make_context(GroupSpec.elementary_abelian_2(3), p=2)
alg = closure_generate(ctx)
bogus = certify_radical(alg, CaseLabel.P2, [])   # empty candidate: V = 0
print("\nwrong candidate at (2,8): pass =", bogus["pass"])
print("first failing unit products:",
      bogus["stages"]["units"]["failures"][:2])
