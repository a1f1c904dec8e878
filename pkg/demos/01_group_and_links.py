"""
The q=2 group, its normal forms, and the link of a vertex.

Each panel subgroup has q+1 = 3 elements, two panel subgroups generate the
21 chambers around a vertex, and the link of that vertex is the incidence
graph of the Fano plane.
"""

from a2boundary.building import build_chamber_ball, validate_link
from a2boundary.group import Group

G = Group.from_preset("paper-q2")
print(f"rewriting system: {G.rs.status}, {len(G.rs.rules)} rules")

for text in ["s0 s0 s0", "s1 s0 s1 s0", "s0 s1", "s2 s2"]:
    print(f"  {text:14s} -> {G.format(G.normal_form(G.parse(text)))}")

for p, P in enumerate(G.panel_subgroups):
    print(f"panel {p}: {[G.format(h) for h in P]}")
print("chambers at a type-0 vertex:", len(G.vertex_subgroup(0)))

ball = build_chamber_ball(G, 5)
print(f"ball of radius 5: {len(ball)} chambers")
v = ball.vertex_of(0, 0)
rep = validate_link(ball.vertex_link(v), G.q)
print("link of the type-0 vertex of the identity chamber:")
for k, ok in rep.checks.items():
    print(f"  {k:10s} {ok}")
print(f"  girth {rep.details['girth']}, diameter {rep.details['diameter']}")

verts = ball.interior_vertices()
bad = sum(not validate_link(ball.vertex_link(w), G.q).passed for w in verts)
print(f"{len(verts)} interior vertices, {bad} bad links")
