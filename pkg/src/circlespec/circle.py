"""Exact arithmetic on the circle group.

A point carries a rational rotation (reduced fraction in [0, 1), standing for
e^{2 pi i r}) together with a formal product of "generic" generators g_i with
integer exponents.  The generators are free abelian symbols: a point built
from fresh generators satisfies no multiplicative relation beyond those
forced by construction.  That freeness is the exact stand-in this library
uses for points drawn from a continuous measure, and it is what makes every
downstream counting argument a matter of integer bookkeeping instead of
floating point.

Products of distinct fresh generators factor uniquely: two exponent vectors
give the same point only when they are equal and the rational parts agree.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Tuple, Union

ExponentPairs = Union[Mapping[int, int], Iterable[Tuple[int, int]]]

_GENERATOR_TOKEN = re.compile(r"^g(\d+)\^(-?\d+)$")
_FRACTION_TOKEN = re.compile(r"^\d+(?:/\d+)?$")


class GeneratorAllocator:
    """Issues strictly increasing generator indices, never reused.

    One allocator per model run keeps "fresh" meaningful: a point minted via
    `fresh_point` shares no generator with anything allocated before it.
    """

    def __init__(self, start: int = 0):
        if start < 0:
            raise ValueError("allocator start index must be non-negative")
        self.next_index = start

    def fresh(self) -> int:
        i = self.next_index
        self.next_index += 1
        return i

    def fresh_point(self) -> "CirclePoint":
        return CirclePoint.generator(self.fresh())


class CirclePoint:
    """An element of the circle group: e^{2 pi i r} * prod_i g_i^{e_i}.

    `rational` is a Fraction reduced into [0, 1); `generic` is a sorted tuple
    of (generator index, non-zero exponent) pairs.  Instances are immutable
    and hashable.  The group operation is `*`; `**` raises to an integer
    power; `inverse()` inverts.  Ordering is lexicographic on
    (rational, generic) and is a total order used for every canonical sort
    in the library.
    """

    __slots__ = ("rational", "generic", "_hash")

    def __init__(self, rational=0, generic: ExponentPairs = ()):
        r = Fraction(rational) % 1
        pairs = generic.items() if isinstance(generic, Mapping) else generic
        acc: dict[int, int] = {}
        for i, e in pairs:
            if not isinstance(i, int) or isinstance(i, bool) or i < 0:
                raise ValueError(f"generator index must be a non-negative int, got {i!r}")
            if not isinstance(e, int) or isinstance(e, bool):
                raise ValueError(f"exponent must be an int, got {e!r}")
            acc[i] = acc.get(i, 0) + e
        gen = tuple(sorted((i, e) for i, e in acc.items() if e != 0))
        object.__setattr__(self, "rational", r)
        object.__setattr__(self, "generic", gen)
        object.__setattr__(self, "_hash", hash((r, gen)))

    def __setattr__(self, name, value):
        raise AttributeError("CirclePoint is immutable")

    @classmethod
    def identity(cls) -> "CirclePoint":
        return cls()

    @classmethod
    def generator(cls, index: int, exponent: int = 1) -> "CirclePoint":
        return cls(0, ((index, exponent),))

    @property
    def is_identity(self) -> bool:
        return self.rational == 0 and not self.generic

    @property
    def is_rational(self) -> bool:
        """True when the point has no generic part (a pure rational rotation)."""
        return not self.generic

    def __mul__(self, other: "CirclePoint") -> "CirclePoint":
        if not isinstance(other, CirclePoint):
            return NotImplemented
        if not other.generic:
            gen: ExponentPairs = self.generic
        elif not self.generic:
            gen = other.generic
        else:
            acc = dict(self.generic)
            for i, e in other.generic:
                v = acc.get(i, 0) + e
                if v:
                    acc[i] = v
                else:
                    del acc[i]
            gen = acc
        return CirclePoint(self.rational + other.rational, gen)

    def inverse(self) -> "CirclePoint":
        return CirclePoint(-self.rational, tuple((i, -e) for i, e in self.generic))

    def __pow__(self, k: int) -> "CirclePoint":
        if not isinstance(k, int) or isinstance(k, bool):
            raise ValueError(f"exponent must be an int, got {k!r}")
        # Scalar action agrees with the k-fold product because the group is abelian.
        return CirclePoint(self.rational * k, tuple((i, e * k) for i, e in self.generic))

    def sort_key(self):
        return (self.rational, self.generic)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CirclePoint):
            return NotImplemented
        return self.rational == other.rational and self.generic == other.generic

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "CirclePoint") -> bool:
        return self.sort_key() < other.sort_key()

    def __le__(self, other: "CirclePoint") -> bool:
        return self.sort_key() <= other.sort_key()

    def __gt__(self, other: "CirclePoint") -> bool:
        return self.sort_key() > other.sort_key()

    def __ge__(self, other: "CirclePoint") -> bool:
        return self.sort_key() >= other.sort_key()

    def __str__(self) -> str:
        factors = []
        if self.rational:
            factors.append(str(self.rational))
        factors.extend(f"g{i}^{e}" for i, e in self.generic)
        return " * ".join(factors) if factors else "1"

    def __repr__(self) -> str:
        return f"CirclePoint({str(self)!r})"

    @classmethod
    def parse(cls, text: str) -> "CirclePoint":
        """Inverse of str(): accepts "1", "1/3", "g0^2", "1/3 * g0^2 * g5^-1"."""
        from circlespec.errors import MeasureFormatError

        s = text.strip()
        if s == "1":
            return cls()
        rational = Fraction(0)
        seen_rational = False
        pairs: list[tuple[int, int]] = []
        seen_indices: set[int] = set()
        for token in s.split("*"):
            token = token.strip()
            m = _GENERATOR_TOKEN.match(token)
            if m:
                i, e = int(m.group(1)), int(m.group(2))
                if e == 0:
                    raise MeasureFormatError(f"zero exponent in point {text!r}")
                if i in seen_indices:
                    raise MeasureFormatError(f"repeated generator g{i} in point {text!r}")
                seen_indices.add(i)
                pairs.append((i, e))
            elif _FRACTION_TOKEN.match(token):
                if seen_rational:
                    raise MeasureFormatError(f"two rational factors in point {text!r}")
                seen_rational = True
                rational = Fraction(token)
            else:
                raise MeasureFormatError(f"bad factor {token!r} in point {text!r}")
        return cls(rational, pairs)
