"""Load ``.mon`` fixture files: a presentation plus optional oracle declarations.

A fixture is the presentation text followed by directive lines::

    # comment
    bicyclic:
    Mon<b, c | bc>
    image: b=1, c=-1            # letter weights into ℤ^k
    bicyclic-image: b=x, c=y    # letters into ⟨x, y | xy = 1⟩
    violations: none            # or 1:1-2 (relator:start-end), comma separated
    order: a ā b b̄              # shortlex letter order used for completion
    note: free text

Directive lines must come after the closing ``>`` of the presentation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .images import BicyclicImage, IntegerImage, parse_bicyclic_image, parse_integer_image
from .presentations import PresentationError, SpecialPresentation, parse_presentation

FIXTURE_DIR = Path(__file__).resolve().parent / "fixtures"

# The presentations the whole pipeline runs on (no unit proper subwords).
CORPUS = ("bicyclic", "abc-ac", "babcb", "apa-aqa", "abc-def", "zxz", "babcb-bd", "one-letter")

_DIRECTIVES = ("image", "bicyclic-image", "violations", "order", "note")


@dataclass(frozen=True)
class Fixture:
    presentation: SpecialPresentation
    integer_image: IntegerImage | None = None
    bicyclic_image: BicyclicImage | None = None
    violations: tuple[tuple[int, int, int], ...] = ()
    order: str | None = None  # letter order for shortlex completion, if not the declared one
    notes: tuple[str, ...] = field(default=())

    @property
    def name(self) -> str | None:
        return self.presentation.name

    @property
    def images(self) -> tuple:
        return tuple(x for x in (self.integer_image, self.bicyclic_image) if x is not None)


def parse_fixture(text: str) -> Fixture:
    body, directives = [], []
    closed = False
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].rstrip() if not raw.lstrip().startswith("note:") else raw.rstrip()
        if not line.strip():
            continue
        key = line.split(":", 1)[0].strip()
        if closed and key in _DIRECTIVES:
            directives.append((key, line.split(":", 1)[1].strip()))
            continue
        if closed:
            raise PresentationError(f"unexpected line after presentation: {line.strip()!r}")
        body.append(line)
        if ">" in line:
            closed = True
    p = parse_presentation("\n".join(body))
    kwargs: dict = {"notes": []}
    for key, value in directives:
        if key == "image":
            kwargs["integer_image"] = parse_integer_image(value, p)
        elif key == "bicyclic-image":
            kwargs["bicyclic_image"] = parse_bicyclic_image(value, p)
        elif key == "order":
            kwargs["order"] = "".join(p.word(x) for x in value.split())
        elif key == "violations":
            kwargs["violations"] = _parse_violations(value)
        else:
            kwargs["notes"].append(value)
    kwargs["notes"] = tuple(kwargs["notes"])
    return Fixture(p, **kwargs)


def _parse_violations(value: str) -> tuple[tuple[int, int, int], ...]:
    if value.strip() == "none":
        return ()
    out = []
    for item in value.split(","):
        rel, span = item.strip().split(":")
        start, end = span.split("-")
        out.append((int(rel), int(start), int(end)))
    return tuple(out)


def load_fixture(name_or_path: str | Path) -> Fixture:
    """Load by fixture name (``"bicyclic"``) or by path to a ``.mon`` file."""
    path = Path(name_or_path)
    if not path.exists():
        path = FIXTURE_DIR / f"{name_or_path}.mon"
    return parse_fixture(path.read_text(encoding="utf-8"))


def fixture_names() -> list[str]:
    return sorted(p.stem for p in FIXTURE_DIR.glob("*.mon"))
