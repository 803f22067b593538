"""
A registry of exact matrix identities
=====================================

The identity registry holds 89 matrix identities (products of dual words
that collapse to closed forms, with coefficients that are polynomials in n)
and 14 entrywise predicates (statements about individual matrix entries in
terms of group coordinates).  Everything is checked in exact GF(p)
arithmetic -- a failure is a counterexample, not a tolerance issue.
"""
from tforge.scheme import GroupSpec
from tforge.talgebra import make_context
from tforge.verify import (
    check_transpose_pairing,
    registry_manifest,
    run_identities,
    run_predicates,
    transpose_pairs,
)

# What's registered?
man = registry_manifest()
print(f"{len(man)} registered checks:")
for kind in ("identity", "predicate"):
    ids = [m["id"] for m in man if m["kind"] == kind]
    print(f"  {kind}: {len(ids)} (e.g. {', '.join(ids[:6])}, ...)")

# Run the whole registry at p = 2, n = 8.
ctx = make_context(GroupSpec.elementary_abelian_2(3), p=2)
rep = run_identities(ctx)
print("\nidentities at (2,8):", rep["counts"])

# Entries are gated on their hypotheses: the Klein-only identities skip at
# n = 8, while the p = 2, n = 8 special identity runs exactly here.
by_id = {r["id"]: r for r in rep["results"]}
print("L1.20.i (Klein four-group only):", by_id["L1.20.i"]["status"])
print("L1.19 (p = 2 and n = 8 only):  ", by_id["L1.19"]["status"])

# Predicates scan matrix entries exhaustively and report how many they saw.
rep = run_predicates(ctx)
print("\npredicates at (2,8):", rep["counts"])
for row in rep["results"][:5]:
    print(f"  {row['id']:<6} {row['status']:<7} checked {row['checked']}")

# Many identities come in transpose pairs: reversing every word in one
# member gives the other.  That is a symbolic fact, checked symbolically.
pairs = transpose_pairs()
print(f"\n{len(pairs)} transpose pairs, e.g. {pairs[0]} and {pairs[5]}")
print("symbolic pairing check (empty = all verified):", check_transpose_pairing())
