"""
Where the Euler characteristic is negative
==========================================

chi(L2, L1) at nu = 0 is an explicit cubic in d.  Wherever it is below -2 the
scheme carries families of Ulrich modules of every rank.  This script
recomputes the table of such triples from the criterion alone and prints the
resulting verdicts on a small grid.
"""

from detrep.formulas import (TABLE, chi_bound, fgh, format_row, reproduce_table, table_boundary_failures,
                             verdict, wild_criterion)

for t, c in [(2, 2), (3, 2), (3, 3), (5, 4)]:
    print(f"f, g, h at t={t}, c={c}:", fgh(t, c)["closed"])

print("\nthe three places where chi is -1 or -2:")
for tcd in [(2, 2, 2), (2, 3, 2), (3, 2, 16)]:
    print("  ", tcd, chi_bound(*tcd))

print("\nrecomputed table (paper row -> recomputed row):")
for paper, mine in zip(TABLE, reproduce_table()):
    flag = "" if paper == mine else "   <-- differs"
    print(f"  {format_row(paper):22s} {format_row(mine):22s}{flag}")

print("\none step outside each bound the criterion fails:")
for row, found in table_boundary_failures()[:5]:
    print("  ", format_row(row), "->", found, wild_criterion(*found))

print("\nverdicts for t = 2..4, c = 2, n = 3..8:")
for t in (2, 3, 4):
    print("  ", t, [verdict(t, 2, n).classification for n in range(3, 9)])
