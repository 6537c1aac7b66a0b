"""Small permutation groups, fully enumerated.

Everything downstream counts orbits of a subgroup G <= S(n) acting on
n-tuples, so groups are kept as explicit element sets (degree is capped at 8
by default; 8! = 40320 elements is still comfortable).  `orbit_count_free`
computes the orbit count on enumerating tuples twice, by the index formula
n!/#G and by direct enumeration, and refuses to return if the two disagree:
the action there is free, so every orbit has exactly #G elements, and a
mismatch means the engine is broken.
"""

from __future__ import annotations

import itertools
import math
from typing import Iterable, Sequence

from circlespec.errors import EnumerationCapError

DEFAULT_DEGREE_CAP = 8
DEFAULT_TUPLE_CAP = 10**7


class Perm:
    """A permutation of {0..n-1} stored as its image tuple."""

    __slots__ = ("images", "_hash")

    def __init__(self, images: Iterable[int]):
        images = tuple(images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation of 0..{len(images) - 1}: {images!r}")
        object.__setattr__(self, "images", images)
        object.__setattr__(self, "_hash", hash(images))

    def __setattr__(self, name, value):
        raise AttributeError("Perm is immutable")

    @classmethod
    def identity(cls, n: int) -> "Perm":
        return cls(range(n))

    @classmethod
    def transposition(cls, n: int, i: int, j: int) -> "Perm":
        images = list(range(n))
        images[i], images[j] = images[j], images[i]
        return cls(images)

    @classmethod
    def from_cycle(cls, n: int, cycle: Sequence[int]) -> "Perm":
        images = list(range(n))
        for a, b in zip(cycle, cycle[1:] + type(cycle)([cycle[0]])):
            images[a] = b
        return cls(images)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: "Perm") -> "Perm":
        if not isinstance(other, Perm):
            return NotImplemented
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        # (self * other)(i) = self(other(i))
        return Perm(self.images[j] for j in other.images)

    def inverse(self) -> "Perm":
        images = [0] * self.degree
        for i, j in enumerate(self.images):
            images[j] = i
        return Perm(images)

    @property
    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Perm):
            return NotImplemented
        return self.images == other.images

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "Perm") -> bool:
        return self.images < other.images

    def serialize(self) -> str:
        return "[" + ",".join(map(str, self.images)) + "]"

    def __repr__(self) -> str:
        return f"Perm({list(self.images)})"


def closure(n: int, generators: Iterable[Perm], degree_cap: int = DEFAULT_DEGREE_CAP) -> tuple[Perm, ...]:
    """Breadth-first closure of the generators inside S(n), sorted."""
    if n < 0:
        raise ValueError("degree must be non-negative")
    if n > degree_cap:
        raise EnumerationCapError(f"degree {n} exceeds the cap {degree_cap}")
    gens = list(generators)
    for g in gens:
        if g.degree != n:
            raise ValueError(f"generator degree {g.degree} does not match {n}")
    els = {Perm.identity(n)}
    frontier = list(els)
    while frontier:
        new = []
        for p in frontier:
            for g in gens:
                q = p * g
                if q not in els:
                    els.add(q)
                    new.append(q)
        frontier = new
    return tuple(sorted(els))


class PermSubgroup:
    """A subgroup of S(degree) held as generators plus the full element set."""

    __slots__ = ("degree", "generators", "elements")

    def __init__(self, degree: int, generators: Iterable[Perm], degree_cap: int = DEFAULT_DEGREE_CAP):
        generators = tuple(generators)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "generators", generators)
        object.__setattr__(self, "elements", closure(degree, generators, degree_cap))

    def __setattr__(self, name, value):
        raise AttributeError("PermSubgroup is immutable")

    @classmethod
    def trivial(cls, n: int) -> "PermSubgroup":
        return cls(n, ())

    @classmethod
    def symmetric(cls, n: int, degree_cap: int = DEFAULT_DEGREE_CAP) -> "PermSubgroup":
        if n < 2:
            return cls.trivial(n)
        gens = [Perm.transposition(n, 0, 1)]
        if n > 2:
            gens.append(Perm.from_cycle(n, list(range(n))))
        return cls(n, gens, degree_cap)

    @classmethod
    def cyclic(cls, n: int) -> "PermSubgroup":
        if n < 2:
            return cls.trivial(n)
        return cls(n, [Perm.from_cycle(n, list(range(n)))])

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, p: Perm) -> bool:
        return isinstance(p, Perm) and p.degree == self.degree and p in set(self.elements)

    def describe(self) -> dict:
        return {
            "degree": self.degree,
            "order": self.order,
            "generators": [g.serialize() for g in self.generators],
        }

    def __repr__(self) -> str:
        return f"PermSubgroup(degree={self.degree}, order={self.order})"


def orbit_count_free(G: PermSubgroup, tuple_cap: int = DEFAULT_TUPLE_CAP) -> int:
    """Orbit count of G on tuples enumerating {0..n-1}, computed two ways.

    G acts freely there (a permutation fixing an enumerating tuple fixes
    every value), so the count is n!/#G; the direct enumeration must agree
    exactly or the engine has a defect worth crashing over.
    """
    n = G.degree
    n_fact = math.factorial(n)
    if n_fact * G.order > tuple_cap:
        raise EnumerationCapError(
            f"orbit enumeration needs {n_fact * G.order} steps, above the cap {tuple_cap}"
        )
    if n_fact % G.order:
        raise RuntimeError(f"Lagrange violation: {G.order} does not divide {n}!")
    formula = n_fact // G.order
    images = [p.images for p in G.elements]
    seen: set[tuple[int, ...]] = set()
    enumerated = 0
    for t in itertools.permutations(range(n)):
        if t in seen:
            continue
        orbit = {tuple(imgs[v] for v in t) for imgs in images}
        if len(orbit) != G.order:
            raise RuntimeError(f"action not free on {t}: orbit size {len(orbit)} != {G.order}")
        seen |= orbit
        enumerated += 1
    if enumerated != formula:
        raise RuntimeError(
            f"orbit count mismatch: formula {formula}, enumeration {enumerated}"
        )
    return enumerated


def blockwise_group(degree: int, blocks: Sequence[Sequence[int]], degree_cap: int = DEFAULT_DEGREE_CAP) -> PermSubgroup:
    """Direct product of full symmetric groups, one per block of positions."""
    seen_positions: set[int] = set()
    for block in blocks:
        for pos in block:
            if not 0 <= pos < degree or pos in seen_positions:
                raise ValueError(f"blocks must partition a subset of 0..{degree - 1}")
            seen_positions.add(pos)
    gens = []
    for block in blocks:
        block = list(block)
        if len(block) >= 2:
            gens.append(Perm.transposition(degree, block[0], block[1]))
        if len(block) >= 3:
            gens.append(Perm.from_cycle(degree, block))
    G = PermSubgroup(degree, gens, degree_cap)
    expected = math.prod(math.factorial(len(b)) for b in blocks)
    if G.order != expected:
        raise RuntimeError(f"blockwise closure gave order {G.order}, expected {expected}")
    return G


def contiguous_block_group(block_size: int, blocks: int, degree_cap: int = DEFAULT_DEGREE_CAP) -> PermSubgroup:
    """Permutations acting within each of `blocks` contiguous runs of
    `block_size` positions: order (block_size!)^blocks.

    Positions encode pairs (i, j), i in [block_size], j in [blocks],
    column-major: position = i + block_size * j, so block j is the run
    [block_size*j, block_size*(j+1)).
    """
    if block_size < 1 or blocks < 1:
        raise ValueError("block_size and blocks must be >= 1")
    degree = block_size * blocks
    parts = [list(range(block_size * j, block_size * (j + 1))) for j in range(blocks)]
    return blockwise_group(degree, parts, degree_cap)


def interleaved_block_group(strands: int, strand_len: int, degree_cap: int = DEFAULT_DEGREE_CAP) -> PermSubgroup:
    """Permutations acting within each of `strands` arithmetic strands of
    `strand_len` positions: order (strand_len!)^strands.

    Positions encode pairs (i, j), i in [strands], j in [strand_len],
    column-major: position = i + strands * j, so strand i is
    {i, i + strands, i + 2*strands, ...}.
    """
    if strands < 1 or strand_len < 1:
        raise ValueError("strands and strand_len must be >= 1")
    degree = strands * strand_len
    parts = [list(range(i, degree, strands)) for i in range(strands)]
    return blockwise_group(degree, parts, degree_cap)


def wreath_block_group(block_size: int, blocks: int, degree_cap: int = DEFAULT_DEGREE_CAP) -> PermSubgroup:
    """Within-block permutations plus whole-block swaps:
    order (block_size!)^blocks * blocks!."""
    if block_size < 1 or blocks < 1:
        raise ValueError("block_size and blocks must be >= 1")
    degree = block_size * blocks
    gens = list(contiguous_block_group(block_size, blocks, degree_cap).generators)
    for j in range(blocks - 1):
        images = list(range(degree))
        for i in range(block_size):
            a, b = block_size * j + i, block_size * (j + 1) + i
            images[a], images[b] = images[b], images[a]
        gens.append(Perm(images))
    G = PermSubgroup(degree, gens, degree_cap)
    expected = math.factorial(block_size) ** blocks * math.factorial(blocks)
    if G.order != expected:
        raise RuntimeError(f"wreath closure gave order {G.order}, expected {expected}")
    return G


def orbits_on_points(G: PermSubgroup, points: Sequence[tuple]) -> list[list[tuple]]:
    """Partition the given coordinate tuples into G-orbits.

    Tuples are related when some element of G permutes one into the other;
    the orbit of a tuple may extend beyond the input list, in which case only
    the listed members are returned.  Output order follows first appearance.
    """
    n = G.degree
    for t in points:
        if len(t) != n:
            raise ValueError(f"tuple length {len(t)} does not match degree {n}")
    images = [p.images for p in G.elements]
    reps: dict[tuple, int] = {}
    orbits: list[list[tuple]] = []
    for t in points:
        canon = min(tuple(t[i] for i in imgs) for imgs in images)
        k = reps.get(canon)
        if k is None:
            reps[canon] = len(orbits)
            orbits.append([t])
        else:
            orbits[k].append(t)
    return orbits
