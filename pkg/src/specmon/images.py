"""Homomorphic images used as refutation oracles.

A monoid homomorphism sends equal words to equal values and invertible words
to invertible values, so a difference downstairs is a sound certificate of a
difference upstairs.  Two targets are supported: free abelian groups ℤ^k
(letter weights) and the bicyclic monoid ``⟨x, y | xy = 1⟩``, whose
non-invertible elements make it useful for refuting invertibility.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .presentations import PresentationError, SpecialPresentation


@dataclass(frozen=True)
class IntegerImage:
    """Letter weights into ℤ^k; letters not listed weigh zero."""

    weights: Mapping[str, tuple[int, ...]]
    rank: int

    def __call__(self, word: str) -> tuple[int, ...]:
        total = [0] * self.rank
        for ch in word:
            for n, x in enumerate(self.weights.get(ch, ())):
                total[n] += x
        return tuple(total)

    def is_invertible(self, word: str) -> bool:
        return True

    def is_right_invertible(self, word: str) -> bool:
        return True

    def check(self, p: SpecialPresentation) -> None:
        zero = (0,) * self.rank
        for i, r in enumerate(p.relators):
            if self(r) != zero:
                raise PresentationError(f"image of relator {i} is {self(r)}, not zero")


def _bicyclic_mul(a: tuple[int, int], b: tuple[int, int]) -> tuple[int, int]:
    # (i, j) stands for y^i x^j; x^j y^k cancels to x^(j-k) or y^(k-j)
    i, j = a
    k, l = b
    return i + max(0, k - j), l + max(0, j - k)


@dataclass(frozen=True)
class BicyclicImage:
    """Letters sent to words over x, y in ``⟨x, y | xy = 1⟩``; unlisted letters go to 1."""

    targets: Mapping[str, tuple[int, int]]

    @classmethod
    def from_words(cls, targets: Mapping[str, str]) -> "BicyclicImage":
        out = {}
        for letter, w in targets.items():
            value = (0, 0)
            for ch in w:
                if ch not in "xy1":
                    raise PresentationError(f"bicyclic image uses {ch!r}; only x, y and 1 are allowed")
                if ch != "1":
                    value = _bicyclic_mul(value, (0, 1) if ch == "x" else (1, 0))
            out[letter] = value
        return cls(out)

    def __call__(self, word: str) -> tuple[int, int]:
        value = (0, 0)
        for ch in word:
            value = _bicyclic_mul(value, self.targets.get(ch, (0, 0)))
        return value

    def is_invertible(self, word: str) -> bool:
        return self(word) == (0, 0)

    def is_right_invertible(self, word: str) -> bool:
        return self(word)[0] == 0

    def check(self, p: SpecialPresentation) -> None:
        for i, r in enumerate(p.relators):
            if self(r) != (0, 0):
                raise PresentationError(f"bicyclic image of relator {i} is not 1")


def parse_integer_image(text: str, p: SpecialPresentation) -> IntegerImage:
    """Parse ``a=1, p=-2`` or ``a=(1,0), b=(0,1)``."""
    weights: dict[str, tuple[int, ...]] = {}
    rank = None
    for name, value in _assignments(text):
        value = value.strip()
        if value.startswith("("):
            vec = tuple(int(x) for x in value.strip("()").split(","))
        else:
            vec = (int(value),)
        if rank is not None and len(vec) != rank:
            raise PresentationError("image weights must all have the same length")
        rank = len(vec)
        weights[p.alphabet.char(name)] = vec
    image = IntegerImage(weights, rank or 1)
    image.check(p)
    return image


def parse_bicyclic_image(text: str, p: SpecialPresentation) -> BicyclicImage:
    """Parse ``a=x, c=y``."""
    image = BicyclicImage.from_words({p.alphabet.char(n): v.strip() for n, v in _assignments(text)})
    image.check(p)
    return image


def _assignments(text: str):
    depth, last, parts = 0, 0, []
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append(text[last:i])
            last = i + 1
    parts.append(text[last:])
    for part in parts:
        if not part.strip():
            continue
        if "=" not in part:
            raise PresentationError(f"expected letter=value, got {part.strip()!r}")
        name, value = part.split("=", 1)
        name = name.strip()
        if name.startswith("[") and name.endswith("]"):
            name = name[1:-1]
        yield name, value
