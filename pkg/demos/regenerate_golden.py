"""Rewrite the golden files under fixtures/golden from the current code.

Run after an intentional change of output format, then review the diff:
the tests compare against these files and against hand-derived values.
"""

import json
from pathlib import Path

from specmon.fixtures import FIXTURE_DIR, load_fixture
from specmon.graph import classify_ends
from specmon.pieces import compute_piece_table, compute_unit_presentation, default_strategy
from specmon.schutz import cayley_ball, r1_ball_via_tree
from specmon.units import build_units_graph

GOLDEN = FIXTURE_DIR / "golden"
PIECE_FIXTURES = ("bicyclic", "abc-ac", "babcb", "apa-aqa", "abc-def", "babcb-bd", "one-letter", "zxz")
DEPTH = 3


def write(name: str, data: dict) -> None:
    path = GOLDEN / name
    path.write_text(json.dumps(data, ensure_ascii=False, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print("wrote", path.relative_to(Path.cwd()) if path.is_relative_to(Path.cwd()) else path)


def pieces() -> None:
    for name in PIECE_FIXTURES:
        fx = load_fixture(name)
        pt = compute_piece_table(fx.presentation, default_strategy(fx))
        data = pt.to_json()
        data["unit_presentation"] = compute_unit_presentation(pt).to_text()
        write(f"pieces_{name}.json", data)


def ends() -> None:
    runs = {
        "zxz": ("cayley", 10),
        "bicyclic": ("cayley", 12),
    }
    for name, (graph, radius) in runs.items():
        fx = load_fixture(name)
        g = cayley_ball(fx.presentation, radius + DEPTH + 1, default_strategy(fx)).graph
        write(f"ends_{name}.json", {"graph": graph, **classify_ends(g, radius, DEPTH).to_json()})
    fx = load_fixture("abc-def")
    p, st = fx.presentation, default_strategy(fx)
    pt = compute_piece_table(p, st)
    units = classify_ends(build_units_graph(p, pt, 12 + DEPTH + 1, st).graph, 12, DEPTH)
    r1 = classify_ends(r1_ball_via_tree(p, pt, 3 + DEPTH + 1, st).graph, 3, DEPTH)
    write("ends_abc-def.json", {"units": units.to_json(), "r1": r1.to_json()})


if __name__ == "__main__":
    GOLDEN.mkdir(exist_ok=True)
    pieces()
    ends()
