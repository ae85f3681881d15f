"""Placement orders: descending radius, shuffled inside fixed blocks."""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import CountExceedsSpace, ValidationError
from .layout import CircleSpec

# spaces up to this size are enumerated and sampled exactly
ENUMERATION_LIMIT = 200_000


def descending_order(circles: Sequence[CircleSpec]) -> list[int]:
    return [c.id for c in sorted(circles, key=lambda c: (-c.radius, c.id))]


def default_block_param(n: int) -> int:
    return 5 if n >= 10 else 1


def permutation_space_size(n: int, b: int) -> int:
    if not 1 <= b <= n:
        raise ValidationError(f"block parameter must satisfy 1 <= b <= n, got b={b}, n={n}")
    ell = n // b
    return math.factorial(ell) ** b * math.factorial(n - b * ell)


@dataclass(frozen=True)
class PermutationScheme:
    base: tuple[int, ...]
    b: int
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "base", tuple(self.base))
        if not 1 <= self.b <= len(self.base):
            raise ValidationError(f"block parameter must satisfy 1 <= b <= n, got b={self.b}, n={len(self.base)}")

    @classmethod
    def for_circles(cls, circles: Sequence[CircleSpec], b: int | None = None, seed: int = 0) -> PermutationScheme:
        base = descending_order(circles)
        return cls(tuple(base), default_block_param(len(base)) if b is None else b, seed)

    @property
    def n(self) -> int:
        return len(self.base)

    @property
    def block_size(self) -> int:
        return self.n // self.b

    def blocks(self) -> list[tuple[int, ...]]:
        """The b leading blocks of size ⌊n/b⌋ followed by the (possibly empty) tail."""
        ell = self.block_size
        out = [self.base[i * ell : (i + 1) * ell] for i in range(self.b)]
        out.append(self.base[self.b * ell :])
        return out

    def space_size(self) -> int:
        return permutation_space_size(self.n, self.b)


def enumerate_permutations(scheme: PermutationScheme) -> Iterator[tuple[int, ...]]:
    """Every order obtained by shuffling each block in place, in lexicographic block order."""
    per_block = [list(itertools.permutations(block)) for block in scheme.blocks()]
    for combo in itertools.product(*per_block):
        yield tuple(itertools.chain.from_iterable(combo))


def _shuffle_blocks(scheme: PermutationScheme, rng: random.Random) -> tuple[int, ...]:
    out: list[int] = []
    for block in scheme.blocks():
        block = list(block)
        rng.shuffle(block)
        out.extend(block)
    return tuple(out)


def sample_permutations(scheme: PermutationScheme, count: int, replace: bool = False) -> list[tuple[int, ...]]:
    """Draw ``count`` block-shuffled orders, distinct unless ``replace`` is set."""
    if count < 1:
        raise ValidationError("count must be at least 1")
    size = scheme.space_size()
    rng = random.Random(scheme.seed)
    if count > size and not replace:
        raise CountExceedsSpace(f"{count} orders requested but only {size} exist")
    if size <= ENUMERATION_LIMIT:
        space = list(enumerate_permutations(scheme))
        if count <= size:
            return rng.sample(space, count)
        return [rng.choice(space) for _ in range(count)]
    if replace:
        return [_shuffle_blocks(scheme, rng) for _ in range(count)]
    seen: set[tuple[int, ...]] = set()
    out = []
    while len(out) < count:
        perm = _shuffle_blocks(scheme, rng)
        if perm not in seen:
            seen.add(perm)
            out.append(perm)
    return out
