"""End classes of ℤ × ℤ keep growing, those of the bicyclic monoid do not."""

from specmon.fixtures import load_fixture
from specmon.graph import classify_ends
from specmon.pieces import default_strategy
from specmon.schutz import cayley_ball

DEPTH = 3
for name, radius in (("zxz", 8), ("bicyclic", 10)):
    fx = load_fixture(name)
    g = cayley_ball(fx.presentation, radius + DEPTH + 1, default_strategy(fx)).graph
    rep = classify_ends(g, radius, DEPTH)
    print(f"{name}: frontier sizes {[sum(s) for s in rep.frontier_sizes[DEPTH]]}")
    print(f"{name}: end classes   {rep.counts[DEPTH]}  (stabilized: {rep.stabilized(DEPTH)})")
