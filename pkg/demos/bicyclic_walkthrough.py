"""The whole pipeline on the bicyclic monoid Mon<b, c | bc>.

Pieces, the units graph, the Schützenberger graph of 1 by three routes, and
the strong components of a Cayley ball.
"""

from specmon.fixtures import load_fixture
from specmon.graph import rooted_iso
from specmon.pieces import compute_piece_table, compute_unit_presentation, default_strategy
from specmon.schutz import cayley_ball, condensation, r1_ball_via_tree, r1_via_cayley, stephen_ball
from specmon.units import build_units_graph, hairy

fx = load_fixture("bicyclic")
p = fx.presentation
st = default_strategy(fx)
pt = compute_piece_table(p, st)
print(p)
print("pieces:", [p.render(w) for w in pt.pieces], "prefixes:", [p.render(w) for w in pt.frak_p])
print("units:", compute_unit_presentation(pt).to_text())

u = build_units_graph(p, pt, 3, st)
print("units graph edges:", sorted(u.graph.edges()))
h = hairy(u, p.letters)
print("hairs at:", sorted((h.prefix[o], a) for o, a, t in h.graph.edges() if t in h.hair_tips))

radius = 4
s = stephen_ball(p, radius)
t = r1_ball_via_tree(p, pt, radius, st)
c = r1_via_cayley(p, radius, st)
print(f"ℜ₁ ball of radius {radius}: {len(s.graph)} vertices;",
      "routes agree:", rooted_iso(s.graph, t.graph) is not None and rooted_iso(s.graph, c.graph) is not None)

cond = condensation(cayley_ball(p, 8, st))
print("radius-8 Cayley ball:", cond.to_json()["components"], "components, acyclic:", cond.acyclic,
      "one entering edge each:", cond.unique_entry)
