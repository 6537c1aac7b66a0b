"""Finite atomic measures on the circle with exact rational weights.

A measure is a finite map from circle points to strictly positive weights.
Convolution multiplies atoms pairwise and adds weights; singularity is
support disjointness and absolute continuity is support inclusion, which is
the whole story for purely atomic measures.  `generic_measure` builds the
model of "d points drawn from a continuous measure": d fresh generators,
equal weight, no multiplicative relations.  `relation_scan` certifies that
absence of relations by exhaustive search.
"""

from __future__ import annotations

import itertools
import json
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Tuple, Union

from circlespec.circle import CirclePoint, GeneratorAllocator
from circlespec.errors import EnumerationCapError, MeasureFormatError

DEFAULT_TUPLE_CAP = 10**7

_FRACTION_RE = re.compile(r"^-?\d+(?:/\d+)?$")

WeightPairs = Union[Mapping[CirclePoint, Fraction], Iterable[Tuple[CirclePoint, Fraction]]]


def parse_fraction(text) -> Fraction:
    """Parse a decimal-free fraction string like "1/4" or "2"."""
    if not isinstance(text, str) or not _FRACTION_RE.match(text.strip()):
        raise MeasureFormatError(f"bad fraction {text!r} (expected p or p/q)")
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise MeasureFormatError(f"zero denominator in fraction {text!r}") from None


class AtomicMeasure:
    """Finite positive measure: CirclePoint -> positive rational weight.

    Atoms are kept in canonical point order.  Measures are not normalized
    automatically; `normalize()` is explicit.  The empty measure is allowed
    (mass zero) so that `add` has a unit.
    """

    __slots__ = ("_atoms",)

    def __init__(self, atoms: WeightPairs = ()):
        pairs = atoms.items() if isinstance(atoms, Mapping) else atoms
        acc: dict[CirclePoint, Fraction] = {}
        for p, w in pairs:
            if not isinstance(p, CirclePoint):
                raise ValueError(f"atom must be a CirclePoint, got {p!r}")
            w = Fraction(w)
            acc[p] = acc.get(p, Fraction(0)) + w
        for p, w in acc.items():
            if w <= 0:
                raise ValueError(f"weight of atom {p} must be positive, got {w}")
        object.__setattr__(self, "_atoms", dict(sorted(acc.items(), key=lambda kv: kv[0].sort_key())))

    def __setattr__(self, name, value):
        raise AttributeError("AtomicMeasure is immutable")

    @classmethod
    def delta(cls, point: CirclePoint, weight=1) -> "AtomicMeasure":
        return cls(((point, Fraction(weight)),))

    @classmethod
    def zero(cls) -> "AtomicMeasure":
        return cls()

    def items(self):
        """(point, weight) pairs in canonical point order."""
        return self._atoms.items()

    def support(self) -> tuple[CirclePoint, ...]:
        return tuple(self._atoms)

    def weight(self, point: CirclePoint) -> Fraction:
        return self._atoms.get(point, Fraction(0))

    @property
    def mass(self) -> Fraction:
        return sum(self._atoms.values(), Fraction(0))

    def __len__(self) -> int:
        return len(self._atoms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AtomicMeasure):
            return NotImplemented
        return self._atoms == other._atoms

    def __repr__(self) -> str:
        inner = ", ".join(f"{p}: {w}" for p, w in self.items())
        return f"AtomicMeasure({{{inner}}})"

    def convolve(self, other: "AtomicMeasure") -> "AtomicMeasure":
        """Pushforward of the product measure under multiplication."""
        acc: dict[CirclePoint, Fraction] = {}
        for p, wp in self.items():
            for q, wq in other.items():
                point = p * q
                acc[point] = acc.get(point, Fraction(0)) + wp * wq
        return AtomicMeasure(acc)

    def convolve_power(self, k: int) -> "AtomicMeasure":
        if not isinstance(k, int) or isinstance(k, bool) or k < 1:
            raise ValueError(f"convolution power must be an int >= 1, got {k!r}")
        out = self
        for _ in range(k - 1):
            out = out.convolve(self)
        return out

    def translate(self, a: CirclePoint) -> "AtomicMeasure":
        """Same as convolving with delta(a); atoms shift, weights survive."""
        return AtomicMeasure(((p * a, w) for p, w in self.items()))

    def __add__(self, other: "AtomicMeasure") -> "AtomicMeasure":
        if not isinstance(other, AtomicMeasure):
            return NotImplemented
        acc = dict(self._atoms)
        for p, w in other.items():
            acc[p] = acc.get(p, Fraction(0)) + w
        return AtomicMeasure(acc)

    def scale(self, c) -> "AtomicMeasure":
        c = Fraction(c)
        if c <= 0:
            raise ValueError(f"scale factor must be positive, got {c}")
        return AtomicMeasure(((p, c * w) for p, w in self.items()))

    def normalize(self) -> "AtomicMeasure":
        m = self.mass
        if m == 0:
            raise ValueError("cannot normalize the zero measure")
        return self.scale(Fraction(1) / m)

    def is_singular_to(self, other: "AtomicMeasure") -> bool:
        """Mutual singularity: the supports are disjoint."""
        small, large = (self, other) if len(self) <= len(other) else (other, self)
        return not any(p in large._atoms for p in small._atoms)

    def is_absolutely_continuous_wrt(self, other: "AtomicMeasure") -> bool:
        """Absolute continuity: every atom here already carries other-mass."""
        return all(p in other._atoms for p in self._atoms)


def cs_witness_check(sigma: AtomicMeasure, factors: Iterable[AtomicMeasure]) -> bool:
    """Is sigma singular to the convolution of the given measures?

    A True answer for factors drawn from the generic model witnesses the
    convolution-singularity behaviour at the model level only; it proves
    nothing about honest continuous measures.
    """
    factors = list(factors)
    if not factors:
        raise ValueError("cs_witness_check needs at least one factor measure")
    conv = factors[0]
    for nu in factors[1:]:
        conv = conv.convolve(nu)
    return sigma.is_singular_to(conv)


def product_spectral_type(sigma: AtomicMeasure, n: int) -> AtomicMeasure:
    """delta at the identity plus the first n convolution powers of sigma."""
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValueError(f"level count must be an int >= 1, got {n!r}")
    total = AtomicMeasure.delta(CirclePoint.identity())
    power = None
    for _ in range(n):
        power = sigma if power is None else power.convolve(sigma)
        total = total + power
    return total


def generic_measure(d: int, allocator: GeneratorAllocator | None = None) -> AtomicMeasure:
    """d fresh atoms, weight 1/d each: the exact model of d points of a
    continuous measure, free of multiplicative relations."""
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise ValueError(f"atom count must be an int >= 1, got {d!r}")
    allocator = allocator or GeneratorAllocator()
    w = Fraction(1, d)
    return AtomicMeasure(((allocator.fresh_point(), w) for _ in range(d)))


@dataclass(frozen=True)
class Relation:
    """A multiplicative relation among distinct atoms: prod atoms[i]^exponents[i]
    equals `constant`, a point with empty generic part."""

    atoms: tuple[CirclePoint, ...]
    exponents: tuple[int, ...]
    constant: CirclePoint

    def __str__(self) -> str:
        lhs = " * ".join(f"({a})^{e}" for a, e in zip(self.atoms, self.exponents))
        return f"{lhs} = {self.constant}"

    def to_json_obj(self):
        return {
            "atoms": [str(a) for a in self.atoms],
            "exponents": list(self.exponents),
            "constant": str(self.constant),
        }


def relation_scan(mu: AtomicMeasure, degree: int, tuple_cap: int = DEFAULT_TUPLE_CAP) -> list[Relation]:
    """Exhaustive search for relations prod z_i^{+-1} = rational constant.

    Scans every subset of 1..degree distinct atoms with sign vectors
    normalized to a +1 leading exponent, so each relation is reported once.
    An empty result certifies the measure is generic up to that degree.
    """
    if not isinstance(degree, int) or isinstance(degree, bool) or degree < 2:
        raise ValueError(f"scan degree must be an int >= 2, got {degree!r}")
    atoms = mu.support()
    d = len(atoms)
    total = sum(math.comb(d, L) * 2 ** (L - 1) for L in range(1, min(degree, d) + 1))
    if total > tuple_cap:
        raise EnumerationCapError(
            f"relation scan needs {total} sign tuples, above the cap {tuple_cap}"
        )
    found = []
    for L in range(1, min(degree, d) + 1):
        for subset in itertools.combinations(atoms, L):
            for tail in itertools.product((1, -1), repeat=L - 1):
                signs = (1,) + tail
                prod = subset[0]
                for a, e in zip(subset[1:], tail):
                    prod = prod * (a if e == 1 else a.inverse())
                if prod.is_rational:
                    found.append(Relation(subset, signs, prod))
    return found


# -- JSON measure format ------------------------------------------------------
#
# {"atoms":[{"weight":"1/4","rational":"1/3","generic":{"0":1,"3":-2}},...]}
#
# Weights and rational parts are decimal-free fraction strings; generic maps
# generator index (as a string) to a non-zero integer exponent.  Serialization
# is canonical: atoms in point order, generator keys in index order, compact
# separators.  parse -> serialize is byte-identical on canonical input.


def measure_to_json_obj(mu: AtomicMeasure) -> dict:
    atoms = []
    for p, w in mu.items():
        atoms.append(
            {
                "weight": str(w),
                "rational": str(p.rational),
                "generic": {str(i): e for i, e in p.generic},
            }
        )
    return {"atoms": atoms}


def measure_to_json(mu: AtomicMeasure) -> str:
    return json.dumps(measure_to_json_obj(mu), separators=(",", ":"))


def measure_from_json_obj(obj) -> AtomicMeasure:
    if not isinstance(obj, dict) or set(obj) != {"atoms"} or not isinstance(obj["atoms"], list):
        raise MeasureFormatError('measure JSON must be {"atoms": [...]}')
    pairs = []
    for k, entry in enumerate(obj["atoms"]):
        if not isinstance(entry, dict) or set(entry) != {"weight", "rational", "generic"}:
            raise MeasureFormatError(
                f"atom {k} must have exactly the keys weight/rational/generic"
            )
        weight = parse_fraction(entry["weight"])
        if weight <= 0:
            raise MeasureFormatError(f"atom {k} weight must be positive, got {weight}")
        rational = parse_fraction(entry["rational"])
        generic = entry["generic"]
        if not isinstance(generic, dict):
            raise MeasureFormatError(f"atom {k} generic part must be an object")
        exponents = []
        for key, e in generic.items():
            if not isinstance(key, str) or not key.isdigit():
                raise MeasureFormatError(f"atom {k} generator index {key!r} must be a digit string")
            if not isinstance(e, int) or isinstance(e, bool):
                raise MeasureFormatError(f"atom {k} exponent {e!r} must be an integer")
            exponents.append((int(key), e))
        pairs.append((CirclePoint(rational, exponents), weight))
    try:
        return AtomicMeasure(pairs)
    except ValueError as exc:
        raise MeasureFormatError(str(exc)) from None


def measure_from_json(text: str) -> AtomicMeasure:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MeasureFormatError(f"measure is not valid JSON: {exc}") from None
    return measure_from_json_obj(obj)
