"""In Mon<a, p, q | apa, aqa> the letters p and q are equal.

Bounded search finds a derivation, and a common ancestor W deletes to both
p and q.
"""

from specmon.fixtures import load_fixture
from specmon.rewriting import Bounded, common_ancestor, deletion_path, word_problem

fx = load_fixture("apa-aqa")
p = fx.presentation
v = word_problem(p.word("p"), p.word("q"), p, Bounded(12, 200_000, fx.images))
print("p vs q:", v.status.value)
print("  " + " → ".join(p.render(w) for w in v.derivation.words()))
w = common_ancestor(v.derivation, p)
print("common ancestor:", p.render(w))
for target in ("p", "q"):
    d = deletion_path(w, p.word(target), p)
    print(f"  deletes to {target}:", " → ".join(p.render(x) for x in d.words()))
