"""Invertible pieces of a special presentation.

Each relator factors uniquely into minimal invertible words.  A prefix ``u``
of a relator ``u·s`` is invertible exactly when ``s·u`` is congruent to 1, so
the factor boundaries are the cuts where that equality holds.  Cuts are
certified by search or a complete system and refuted by a complete system or
a homomorphic image; a cut that is neither aborts the factorization.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from typing import Iterable

from .presentations import SpecialPresentation
from .rewriting import Bounded, CompleteRS, Derivation, EqualityVerdict, normalize, word_problem


class UndecidedCut(RuntimeError):
    def __init__(self, relator: int, cut: int):
        self.relator, self.cut = relator, cut
        super().__init__(f"cannot decide whether the prefix of relator {relator} of length {cut} is invertible")


class UndecidedEquality(RuntimeError):
    def __init__(self, u: str, v: str, render=None):
        self.pair = (u, v)
        r = render or repr
        super().__init__(f"cannot decide whether {r(u)} and {r(v)} are equal")


class BiprefixViolation(RuntimeError):
    pass


class Invertibility(Enum):
    INVERTIBLE = "invertible"
    NOT_INVERTIBLE = "not_invertible"
    NOT_CERTIFIED = "not_certified"


@dataclass(frozen=True)
class InvertibilityVerdict:
    status: Invertibility
    inverse: str | None = None
    right: Derivation | None = None  # u·inverse <->* ε
    left: Derivation | None = None  # inverse·u <->* ε
    certificate: object = None


def refutes_invertible(word: str, strategy) -> object | None:
    """A certificate that ``word`` is not invertible, if the strategy has one."""
    if isinstance(strategy, CompleteRS):
        return None  # normal forms settle it through word_problem directly
    for image in getattr(strategy, "images", ()):
        if not image.is_invertible(word):
            return ("image", type(image).__name__, image(word))
    return None


def is_invertible_prefix(relator: str, cut: int, p: SpecialPresentation, strategy) -> InvertibilityVerdict:
    """Decide whether ``relator[:cut]`` is invertible."""
    if not 0 < cut <= len(relator):
        raise ValueError("cut must satisfy 0 < cut <= len(relator)")
    u, s = relator[:cut], relator[cut:]
    i = p.relators.index(relator) if relator in p.relators else None
    right = Derivation.from_moves(u + s, [("delete", i, 0)], p.relators) if i is not None else None
    refuted = refutes_invertible(u, strategy)
    if refuted is not None:
        return InvertibilityVerdict(Invertibility.NOT_INVERTIBLE, certificate=refuted)
    verdict = word_problem(s + u, "", p, strategy)
    if verdict.equal:
        return InvertibilityVerdict(Invertibility.INVERTIBLE, s, right, verdict.derivation)
    if verdict.not_equal:
        return InvertibilityVerdict(Invertibility.NOT_INVERTIBLE, certificate=verdict.certificate)
    return InvertibilityVerdict(Invertibility.NOT_CERTIFIED, certificate=verdict.certificate)


def factor_relator(i: int, p: SpecialPresentation, strategy) -> list[str]:
    """Split relator ``i`` into its minimal invertible factors."""
    r = p.relators[i]
    cuts = [0]
    for k in range(1, len(r)):
        v = is_invertible_prefix(r, k, p, strategy)
        if v.status is Invertibility.INVERTIBLE:
            cuts.append(k)
        elif v.status is Invertibility.NOT_CERTIFIED:
            raise UndecidedCut(i, k)
    cuts.append(len(r))
    return [r[a:b] for a, b in zip(cuts, cuts[1:])]


def check_biprefix(words: Iterable[str]) -> tuple[bool, tuple[str, str] | None]:
    """No element is a proper prefix or proper suffix of another."""
    ws = sorted(set(words), key=len)
    for x in ws:
        for y in ws:
            if len(x) < len(y) and (y.startswith(x) or y.endswith(x)):
                return False, (x, y)
    return True, None


def check_cross_bifix_free(words: Iterable[str]) -> tuple[bool, tuple[str, str, str] | None]:
    """No nonempty proper prefix of any element is a suffix of any element (itself included)."""
    ws = sorted(set(words))
    for x in ws:
        for k in range(1, len(x)):
            for y in ws:
                if len(y) >= k and y.endswith(x[:k]):
                    return False, (x, y, x[:k])
    return True, None


@dataclass(frozen=True)
class PieceTable:
    presentation: SpecialPresentation
    factorizations: tuple[tuple[str, ...], ...]
    pieces: tuple[str, ...]  # distinct pieces in order of first appearance
    classes: tuple[tuple[str, ...], ...]
    witnesses: dict = field(compare=False, repr=False)  # piece -> derivation to its class leader

    @property
    def kappa(self) -> int:
        return len(self.classes)

    @property
    def tagged(self) -> list[tuple[str, int, int]]:
        """Every factor occurrence as (piece, relator index, factor index), 0-based."""
        return [(w, i, j) for i, fs in enumerate(self.factorizations) for j, w in enumerate(fs)]

    def class_of(self, piece: str) -> int:
        """0-based class index."""
        for k, cls in enumerate(self.classes):
            if piece in cls:
                return k
        raise KeyError(piece)

    def b_name(self, piece: str) -> tuple[int, int]:
        """The 1-based pair (class, index in class) naming ``piece``."""
        k = self.class_of(piece)
        return k + 1, self.classes[k].index(piece) + 1

    @property
    def frak_b(self) -> list[tuple[str, str]]:
        """The generator names ``b{i}_{j}`` with their pieces, class by class."""
        return [(f"b{k + 1}_{j + 1}", w) for k, cls in enumerate(self.classes) for j, w in enumerate(cls)]

    @property
    def xi(self) -> frozenset[str]:
        return frozenset(w[:k] for w in self.pieces for k in range(1, len(w) + 1))

    @property
    def frak_p(self) -> frozenset[str]:
        return self.xi - set(self.pieces)

    @property
    def frak_p_eps(self) -> frozenset[str]:
        return self.frak_p | {""}

    @property
    def max_piece_length(self) -> int:
        return max((len(w) for w in self.pieces), default=0)

    def phi(self, i: int) -> tuple[int, ...]:
        """Relator ``i`` as a word over class indices."""
        return tuple(self.class_of(w) for w in self.factorizations[i])

    def to_json(self) -> dict:
        r = self.presentation.render
        return {
            "presentation": self.presentation.to_text().splitlines()[-1],
            "pieces": [{"word": r(w), "relator": i, "factor": j, "b": list(self.b_name(w))} for w, i, j in self.tagged],
            "lambda": [r(w) for w in self.pieces],
            "classes": [[r(w) for w in c] for c in self.classes],
            "kappa": self.kappa,
            "xi": sorted(r(w) for w in self.xi),
            "frak_p": sorted(r(w) for w in self.frak_p),
        }


def compute_piece_table(p: SpecialPresentation, strategy) -> PieceTable:
    factorizations = tuple(tuple(factor_relator(i, p, strategy)) for i in range(len(p.relators)))
    pieces: list[str] = []
    for fs in factorizations:
        for w in fs:
            if w not in pieces:
                pieces.append(w)
    ok, bad = check_biprefix(pieces)
    if not ok:
        raise BiprefixViolation(f"{p.render(bad[0])} is a prefix or suffix of {p.render(bad[1])}")
    classes: list[list[str]] = []
    witnesses: dict[str, Derivation] = {}
    for w in pieces:
        for cls in classes:
            v = word_problem(w, cls[0], p, strategy)
            if v.equal:
                cls.append(w)
                witnesses[w] = v.derivation
                break
            if v.unknown:
                raise UndecidedEquality(w, cls[0], p.render)
        else:
            classes.append([w])
            witnesses[w] = Derivation(w)
    return PieceTable(p, factorizations, tuple(pieces), tuple(tuple(c) for c in classes), witnesses)


@dataclass(frozen=True)
class UnitPresentation:
    """Presentation of the group of units over the piece names 𝔅.

    ``pairs`` are the relations ``b{i}_{j} = b{i}_{k}`` inside each class and
    ``relators`` the words over 𝔅 that equal 1.  ``chi`` sends each 𝔅 name to
    its class name ``b{i}``.
    """

    generators: tuple[str, ...]
    pieces: dict
    chi: dict
    pairs: tuple[tuple[str, str], ...]
    relators: tuple[tuple[str, ...], ...]

    def class_presentation(self) -> SpecialPresentation:
        """The special presentation over class names obtained by applying chi."""
        names = tuple(dict.fromkeys(self.chi.values()))
        rels = []
        for w in self.relators:
            text = "".join(f"[{self.chi[b]}]" for b in w)
            if text not in rels:
                rels.append(text)
        return SpecialPresentation.build(names, rels, "units")

    def to_text(self) -> str:
        rels = [f"{a}={b}" for a, b in self.pairs] + ["".join(w) + "=1" for w in self.relators]
        return f"⟨{', '.join(self.generators)} | {', '.join(rels)}⟩"

    def to_json(self) -> dict:
        return {
            "generators": list(self.generators),
            "chi": dict(self.chi),
            "pairs": [list(x) for x in self.pairs],
            "relators": [list(w) for w in self.relators],
        }


def compute_unit_presentation(pt: PieceTable) -> UnitPresentation:
    names = pt.frak_b
    by_class: dict[int, list[str]] = {}
    for name, w in names:
        by_class.setdefault(pt.class_of(w), []).append(name)
    chi = {name: f"b{pt.class_of(w) + 1}" for name, w in names}
    pairs = tuple((ns[0], other) for ns in by_class.values() for other in ns[1:])
    relators: list[tuple[str, ...]] = []
    for i in range(len(pt.factorizations)):
        s = pt.phi(i)
        for shift in range(len(s)):
            rot = s[shift:] + s[:shift]
            for choice in product(*(by_class[k] for k in rot)):
                if choice not in relators:
                    relators.append(choice)
    return UnitPresentation(tuple(n for n, _ in names), dict(names), chi, pairs, tuple(relators))


def unit_generators_trivial(up: UnitPresentation, max_rules: int = 100, max_lhs_len: int = 20) -> bool | None:
    """True when completion of the class presentation sends every generator to 1.

    None when completion does not finish within budget.
    """
    from .rewriting import RewritingSystem, knuth_bendix

    cp = up.class_presentation()
    result = knuth_bendix(RewritingSystem.special(cp), max_rules, max_lhs_len)
    if not result.complete:
        return None
    return all(normalize(cp.word(f"[{up.chi[g]}]"), result.system) == "" for g in up.generators)


def default_strategy(fixture_or_p, completion: bool = True, max_len: int = 12, max_steps: int = 200_000):
    """CompleteRS when shortlex completion finishes, else Bounded with the fixture's images."""
    from .rewriting import RewritingSystem, knuth_bendix

    p = getattr(fixture_or_p, "presentation", fixture_or_p)
    images = getattr(fixture_or_p, "images", ())
    if completion:
        order = getattr(fixture_or_p, "order", None)
        result = knuth_bendix(RewritingSystem.special(p, order), max_rules=200, max_lhs_len=30, max_seconds=5.0)
        if result.complete:
            return CompleteRS(result.system)
    return Bounded(max_len, max_steps, tuple(images))


def verdict_equal(v: EqualityVerdict, u: str, w: str, render=None) -> bool:
    """Map a verdict to a bool, raising on Unknown."""
    if v.unknown:
        raise UndecidedEquality(u, w, render)
    return v.equal
