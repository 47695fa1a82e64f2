"""Library-level tour: homology, Moore spaces, a plus-construction and a G-dense check."""

from genplus import (GroupHom, GroupModel, PlusResult, SpaceModel, Word, group_homology, matrix_criterion, moore_space,
                     parse_group, parse_matrix, plus_construction, relatively_perfect)
from genplus.rings import ZZ

A4 = GroupModel.realize(parse_group("group { gens: a b; rels: a^2 b^3 (a*b)^3 }"))
print("H_q(A4; Z):", [str(group_homology(A4, ZZ, q)) for q in range(3)])

for text in ["group { gens: a; rels: a^5 }", "group { gens: a b; rels: a^2 b^2 a*b*a^-1*b^-1 }"]:
    r = moore_space(GroupModel.realize(parse_group(text)))
    verdict = f"Y cells {r.Y.cells}" if isinstance(r, PlusResult) else f"no Moore space: {r.reason}"
    print(text, "->", verdict)

ok, five = relatively_perfect(A4, [Word.gen(0)])
print("V4 in A4 relatively perfect:", ok, "| N/[pi,N] =", five.middle)

X = SpaceModel(parse_group("group { gens: a b; rels: a^2 b^3 (a*b)^5 }"))
G = GroupModel.realize(parse_group("group { gens: a b; rels: a^2 b^3 (a*b)^5 a b }"))
r = plus_construction(X, GroupHom.by_names(X.base, G.presentation), [Word.gen(0), Word.gen(1)], G)
print("A5 -> 1:", r.certificates, "| H(Y) =", [str(m) for m in r.homology_Y])
for w, why in r.ledger.two_cells:
    print("   2-cell", X.base.format_word(w), f"({why})")

A = parse_matrix("Z[i]: [[3,2-1i],[2+1i,2]]")
v = matrix_criterion(A, 1, A.ring)
print("Gaussian example:", v.kind)
for line in v.transcript():
    print("  ", line)
