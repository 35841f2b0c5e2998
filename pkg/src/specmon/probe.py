"""End-class probes on three graphs of a presentation.

The Cayley-graph ball, the units graph and the Stephen ball are each
classified by end type; the verdicts are heuristics at a finite scale and
are only reported, never turned into a decision.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .graph import EndClassReport, IncompleteEnd, classify_ends
from .pieces import PieceTable, compute_piece_table, default_strategy
from .presentations import SpecialPresentation
from .schutz import cayley_ball, stephen_ball
from .units import build_units_graph

log = logging.getLogger(__name__)

GRAPHS = ("cayley", "units", "stephen")


@dataclass
class ProbeReport:
    radius: int
    depth: int
    reports: dict[str, EndClassReport] = field(default_factory=dict)
    errors: dict[str, str] = field(default_factory=dict)

    def stabilized(self) -> dict[str, bool]:
        return {k: r.stabilized(self.depth) for k, r in self.reports.items()}

    @property
    def consistent(self) -> bool:
        """The probed graphs agree on whether their counts settle."""
        return len(set(self.stabilized().values())) <= 1

    @property
    def verdict(self) -> str:
        flags = self.stabilized()
        if not flags:
            return "no graph could be probed"
        if not self.consistent:
            return "probes disagree"
        if all(flags.values()):
            return "consistent with context-free"
        return "inconsistent with context-free at this scale"

    def to_json(self) -> dict:
        return {
            "radius": self.radius,
            "depth": self.depth,
            "verdict": self.verdict,
            "consistent": self.consistent,
            "graphs": {k: r.to_json() for k, r in self.reports.items()},
            "errors": dict(self.errors),
        }


def context_free_probe(p: SpecialPresentation, radius: int, depth: int, strategy=None, pt: PieceTable | None = None,
                       graphs=GRAPHS, window: int = 3) -> ProbeReport:
    """Classify ends of levels ``0..radius`` at ``depth`` in each requested graph.

    Each host ball is built to ``radius + depth + 1`` so that every end
    examined is complete.  A graph that cannot be built is reported in
    ``errors`` and left out of the verdict.
    """
    strategy = strategy or default_strategy(p)
    host = radius + depth + 1
    out = ProbeReport(radius, depth)
    builders = {
        "cayley": lambda: cayley_ball(p, host, strategy).graph,
        "units": lambda: build_units_graph(p, pt or compute_piece_table(p, strategy), host, strategy).graph,
        "stephen": lambda: stephen_ball(p, host).graph,
    }
    for name in graphs:
        try:
            g = builders[name]()
            out.reports[name] = classify_ends(g, radius, depth, window)
        except (ValueError, RuntimeError, IncompleteEnd) as exc:
            log.info("probe on %s skipped: %s", name, exc)
            out.errors[name] = str(exc)
    return out
