"""Finite couplings, Markov operators, and the projection identities.

A coupling of two finite probability spaces is a joint matrix with the two
spaces as exact marginals.  It corresponds one-to-one with a Markov operator
from functions on the left space to functions on the right: divide the
joint column of a target point by that point's probability.  Both directions
of the correspondence are exact and round-trip to the byte.

The module's centerpiece is an executable identity: composing a Markov
operator into a product space with the conditional expectation onto a
sub-product equals the operator of the relatively independent extension of
the restricted coupling.  `project_markov` computes both sides separately
and refuses to return if they differ.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from circlespec import linalg
from circlespec.errors import EnumerationCapError
from circlespec.permgroup import Perm

DEFAULT_MATRIX_CAP = 4096


class FiniteSpace:
    """A finite probability space: point labels plus strictly positive
    rational probabilities summing to one."""

    __slots__ = ("labels", "probs")

    def __init__(self, labels: Iterable[str], probs: Iterable[Fraction]):
        labels = tuple(labels)
        probs = tuple(Fraction(p) for p in probs)
        if len(labels) != len(probs):
            raise ValueError(f"{len(labels)} labels vs {len(probs)} probabilities")
        if len(set(labels)) != len(labels):
            raise ValueError("labels must be distinct")
        if any(p <= 0 for p in probs):
            raise ValueError("probabilities must be strictly positive")
        if sum(probs) != 1:
            raise ValueError(f"probabilities sum to {sum(probs)}, not 1")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "probs", probs)

    def __setattr__(self, name, value):
        raise AttributeError("FiniteSpace is immutable")

    @classmethod
    def uniform(cls, n: int, prefix: str = "x") -> "FiniteSpace":
        if n < 1:
            raise ValueError("space needs at least one point")
        return cls((f"{prefix}{i}" for i in range(n)), (Fraction(1, n),) * n)

    @property
    def size(self) -> int:
        return len(self.labels)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiniteSpace):
            return NotImplemented
        return self.labels == other.labels and self.probs == other.probs

    def __hash__(self):
        return hash((self.labels, self.probs))

    def __repr__(self) -> str:
        return f"FiniteSpace({list(self.labels)})"

    def to_json_obj(self) -> dict:
        return {"labels": list(self.labels), "probs": [str(p) for p in self.probs]}


def product_space(components: Sequence[FiniteSpace]) -> FiniteSpace:
    """Product probability space; points are label tuples joined with commas,
    ordered with the last component varying fastest."""
    if not components:
        raise ValueError("product of no spaces")
    labels = []
    probs = []
    for combo in itertools.product(*(range(c.size) for c in components)):
        labels.append(",".join(c.labels[i] for c, i in zip(components, combo)))
        probs.append(math.prod((c.probs[i] for c, i in zip(components, combo)), start=Fraction(1)))
    return FiniteSpace(labels, probs)


class Coupling:
    """A joint distribution on left x right with the two spaces as exact
    marginals.  joint[i][j] is the mass on (left point i, right point j)."""

    __slots__ = ("left", "right", "joint")

    def __init__(self, left: FiniteSpace, right: FiniteSpace, joint: Sequence[Sequence[Fraction]]):
        joint = tuple(tuple(Fraction(x) for x in row) for row in joint)
        if len(joint) != left.size or any(len(row) != right.size for row in joint):
            raise ValueError(f"joint must be {left.size}x{right.size}")
        if any(x < 0 for row in joint for x in row):
            raise ValueError("joint entries must be non-negative")
        for i, row in enumerate(joint):
            if sum(row) != left.probs[i]:
                raise ValueError(
                    f"row {i} sums to {sum(row)}, expected left marginal {left.probs[i]}"
                )
        for j in range(right.size):
            col = sum(row[j] for row in joint)
            if col != right.probs[j]:
                raise ValueError(
                    f"column {j} sums to {col}, expected right marginal {right.probs[j]}"
                )
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        object.__setattr__(self, "joint", joint)

    def __setattr__(self, name, value):
        raise AttributeError("Coupling is immutable")

    @classmethod
    def product(cls, left: FiniteSpace, right: FiniteSpace) -> "Coupling":
        """The independent coupling mu x nu."""
        joint = [[p * q for q in right.probs] for p in left.probs]
        return cls(left, right, joint)

    @classmethod
    def diagonal(cls, space: FiniteSpace) -> "Coupling":
        """The identity coupling of a space with itself."""
        joint = [
            [space.probs[i] if i == j else Fraction(0) for j in range(space.size)]
            for i in range(space.size)
        ]
        return cls(space, space, joint)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Coupling):
            return NotImplemented
        return self.left == other.left and self.right == other.right and self.joint == other.joint

    def __repr__(self) -> str:
        return f"Coupling({self.left.size}x{self.right.size})"

    def to_json_obj(self) -> dict:
        return {
            "left": self.left.to_json_obj(),
            "right": self.right.to_json_obj(),
            "joint": [[str(x) for x in row] for row in self.joint],
        }


class MarkovOp:
    """A measure-preserving Markov operator from functions on `source` to
    functions on `target`; matrix[t][s] is indexed target x source.

    Two stochastic constraints, both induced by the coupling correspondence:
    rows sum to one (constants are preserved) and target-weighted columns
    reproduce the source probabilities (the measure is preserved)."""

    __slots__ = ("source", "target", "matrix")

    def __init__(self, source: FiniteSpace, target: FiniteSpace, matrix: Sequence[Sequence[Fraction]]):
        matrix = tuple(tuple(Fraction(x) for x in row) for row in matrix)
        if len(matrix) != target.size or any(len(row) != source.size for row in matrix):
            raise ValueError(f"matrix must be {target.size}x{source.size}")
        if any(x < 0 for row in matrix for x in row):
            raise ValueError("matrix entries must be non-negative")
        for t, row in enumerate(matrix):
            if sum(row) != 1:
                raise ValueError(f"row {t} sums to {sum(row)}, not 1")
        for s in range(source.size):
            pushed = sum(target.probs[t] * matrix[t][s] for t in range(target.size))
            if pushed != source.probs[s]:
                raise ValueError(
                    f"column {s} pushes mass {pushed}, expected {source.probs[s]}"
                )
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "matrix", matrix)

    def __setattr__(self, name, value):
        raise AttributeError("MarkovOp is immutable")

    @classmethod
    def identity(cls, space: FiniteSpace) -> "MarkovOp":
        return cls(space, space, linalg.identity(space.size))

    @classmethod
    def mean(cls, source: FiniteSpace, target: FiniteSpace) -> "MarkovOp":
        """The rank-one operator sending every function to its mean."""
        return cls(source, target, [list(source.probs)] * target.size)

    def apply(self, f: Sequence[Fraction]) -> list[Fraction]:
        if len(f) != self.source.size:
            raise ValueError("function length does not match the source space")
        return [sum(x * y for x, y in zip(row, f)) for row in self.matrix]

    def compose(self, other: "MarkovOp") -> "MarkovOp":
        """self after other (other: A -> B, self: B -> C gives A -> C)."""
        if other.target != self.source:
            raise ValueError("spaces do not chain")
        return MarkovOp(other.source, self.target, linalg.mat_mul(self.matrix, other.matrix))

    def __eq__(self, other) -> bool:
        if not isinstance(other, MarkovOp):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.matrix == other.matrix
        )

    def __repr__(self) -> str:
        return f"MarkovOp({self.target.size}x{self.source.size})"

    def to_json_obj(self) -> dict:
        return {
            "source": self.source.to_json_obj(),
            "target": self.target.to_json_obj(),
            "matrix": [[str(x) for x in row] for row in self.matrix],
        }


def markov_from_coupling(c: Coupling) -> MarkovOp:
    """Divide the joint column of each target point by its probability."""
    matrix = [
        [c.joint[s][t] / c.right.probs[t] for s in range(c.left.size)]
        for t in range(c.right.size)
    ]
    return MarkovOp(c.left, c.right, matrix)


def coupling_from_markov(phi: MarkovOp) -> Coupling:
    """Exact inverse of markov_from_coupling."""
    joint = [
        [phi.matrix[t][s] * phi.target.probs[t] for t in range(phi.target.size)]
        for s in range(phi.source.size)
    ]
    return Coupling(phi.source, phi.target, joint)


@dataclass(frozen=True)
class FactorStructure:
    """A product of component spaces with a chosen sub-product: the selected
    component indices, strictly increasing.  The empty selection means the
    trivial (one-point-algebra) factor."""

    components: tuple[FiniteSpace, ...]
    selected: tuple[int, ...]

    def __post_init__(self):
        if not self.components:
            raise ValueError("factor structure needs at least one component")
        if list(self.selected) != sorted(set(self.selected)):
            raise ValueError("selected indices must be strictly increasing")
        if any(not 0 <= i < len(self.components) for i in self.selected):
            raise ValueError("selected index out of range")

    def full_space(self) -> FiniteSpace:
        return product_space(self.components)

    def sub_space(self) -> FiniteSpace | None:
        if not self.selected:
            return None
        return product_space([self.components[i] for i in self.selected])

    def full_points(self) -> list[tuple[int, ...]]:
        return list(itertools.product(*(range(c.size) for c in self.components)))

    def sub_index(self, point: tuple[int, ...]) -> int:
        """Flat index of the selected coordinates inside the sub-product."""
        idx = 0
        for i in self.selected:
            idx = idx * self.components[i].size + point[i]
        return idx


def marginal_coupling(lam: Coupling, factor: FactorStructure) -> Coupling:
    """Restrict a coupling of X with the full product to the sub-product of
    the selected components, summing out the rest."""
    if lam.right != factor.full_space():
        raise ValueError("coupling right space is not the factor's full product")
    sub = factor.sub_space()
    if sub is None:
        raise ValueError("cannot restrict onto the empty selection")
    points = factor.full_points()
    joint = [[Fraction(0)] * sub.size for _ in range(lam.left.size)]
    for x in range(lam.left.size):
        for j, point in enumerate(points):
            joint[x][factor.sub_index(point)] += lam.joint[x][j]
    return Coupling(lam.left, sub, joint)


def rel_indep_extension(lam: Coupling, factor: FactorStructure) -> Coupling:
    """Extend a coupling of X with the selected sub-product to the full
    product, making the unselected components independent given the rest:
    the extension's mass at (x, y) is the restricted mass at (x, y_selected)
    times the product of the unselected coordinate probabilities."""
    sub = factor.sub_space()
    unselected = [i for i in range(len(factor.components)) if i not in factor.selected]
    if sub is None:
        if lam.right.size != 1:
            raise ValueError("empty selection takes a coupling with a one-point right space")
    elif lam.right != sub:
        raise ValueError("coupling right space is not the selected sub-product")
    full = factor.full_space()
    points = factor.full_points()
    joint = []
    for x in range(lam.left.size):
        row = []
        for point in points:
            base = lam.joint[x][factor.sub_index(point)] if sub is not None else lam.joint[x][0]
            extra = math.prod(
                (factor.components[i].probs[point[i]] for i in unselected), start=Fraction(1)
            )
            row.append(base * extra)
        joint.append(row)
    return Coupling(lam.left, full, joint)


def conditional_expectation_matrix(factor: FactorStructure) -> list[list[Fraction]]:
    """Matrix on functions over the full product averaging out the unselected
    coordinates: (Ef)(y) depends only on the selected part of y."""
    points = factor.full_points()
    unselected = [i for i in range(len(factor.components)) if i not in factor.selected]
    n = len(points)
    matrix = [[Fraction(0)] * n for _ in range(n)]
    for r, y in enumerate(points):
        for c, y2 in enumerate(points):
            if all(y[i] == y2[i] for i in factor.selected):
                matrix[r][c] = math.prod(
                    (factor.components[i].probs[y2[i]] for i in unselected), start=Fraction(1)
                )
    return matrix


def project_markov(phi: MarkovOp, factor: FactorStructure) -> MarkovOp:
    """Compose phi (into the full product) with conditional expectation onto
    the selected components, and verify, by exact computation, that the
    result is the Markov operator of the relatively independent extension of
    the restricted coupling.  The identity failing raises: it is the point."""
    full = factor.full_space()
    if phi.target != full:
        raise ValueError("operator target is not the factor's full product")
    direct = linalg.mat_mul(conditional_expectation_matrix(factor), list(map(list, phi.matrix)))

    lam = coupling_from_markov(phi)
    if factor.selected:
        restricted = marginal_coupling(lam, factor)
    else:
        one_point = FiniteSpace(("*",), (Fraction(1),))
        restricted = Coupling(
            lam.left, one_point, [[lam.left.probs[x]] for x in range(lam.left.size)]
        )
    via_extension = markov_from_coupling(rel_indep_extension(restricted, factor))
    if direct != list(map(list, via_extension.matrix)):
        raise RuntimeError(
            "projection identity failed: conditional expectation of the operator "
            "differs from the relatively-independent-extension operator"
        )
    return MarkovOp(phi.source, full, direct)


def dimension_identity(dims: Sequence[int]) -> dict:
    """prod d_i - 1 = sum over non-empty S of prod_{i in S} (d_i - 1),
    the count of dimensions removed by subtracting the constants from a
    product, computed exactly on both sides."""
    dims = list(dims)
    n = len(dims)
    if n < 1 or any(not isinstance(d, int) or isinstance(d, bool) or d < 1 for d in dims):
        raise ValueError("dims must be a non-empty list of ints >= 1")
    lhs = math.prod(dims) - 1
    rhs = sum(
        math.prod(dims[i] - 1 for i in S)
        for k in range(1, n + 1)
        for S in itertools.combinations(range(n), k)
    )
    return {
        "dims": dims,
        "dimension_lhs": lhs,
        "dimension_rhs": rhs,
        "dimension_identity": lhs == rhs,
    }


def inclusion_exclusion_identity(
    dims: Sequence[int],
    probs: Sequence[Sequence[Fraction]] | None = None,
    matrix_cap: int = DEFAULT_MATRIX_CAP,
) -> dict:
    """Check, entry by entry, that the projection onto functions depending on
    all coordinates complements the sub-product projections with alternating
    signs, and check the dimension count it forces.

    With q_i the mean projection on component i and p_T the projection onto
    functions of the coordinates in T (p_empty = projection onto constants):

        Id - tensor_i (Id - q_i) = sum_{k=0}^{n-1} (-1)^(n-k-1) sum_{|T|=k} p_T

    and on dimensions:  prod d_i - 1 = sum over non-empty S of prod_{i in S} (d_i - 1).
    """
    dims = list(dims)
    n = len(dims)
    if n < 1 or any(not isinstance(d, int) or isinstance(d, bool) or d < 1 for d in dims):
        raise ValueError("dims must be a non-empty list of ints >= 1")
    total = math.prod(dims)
    if total > matrix_cap:
        raise EnumerationCapError(f"full dimension {total} exceeds the cap {matrix_cap}")
    if probs is None:
        probs = [[Fraction(1, d)] * d for d in dims]
    probs = [[Fraction(p) for p in row] for row in probs]
    if len(probs) != n or any(len(row) != d for row, d in zip(probs, dims)):
        raise ValueError("probs shape does not match dims")
    for row in probs:
        if any(p <= 0 for p in row) or sum(row) != 1:
            raise ValueError("each probability row must be positive and sum to 1")

    def q(i):
        return [list(probs[i])] * dims[i]

    def tensor_chain(factors):
        out = factors[0]
        for f in factors[1:]:
            out = linalg.kron(out, f)
        return out

    lhs = linalg.mat_sub(
        linalg.identity(total),
        tensor_chain([linalg.mat_sub(linalg.identity(dims[i]), q(i)) for i in range(n)]),
    )
    rhs = linalg.zeros(total, total)
    for k in range(n):
        sign = (-1) ** (n - k - 1)
        for T in itertools.combinations(range(n), k):
            term = tensor_chain(
                [linalg.identity(dims[i]) if i in T else q(i) for i in range(n)]
            )
            rhs = linalg.mat_add(rhs, linalg.scalar_mul(sign, term))
    matrix_identity = linalg.mat_eq(lhs, rhs)

    dim_report = dimension_identity(dims)
    return {
        "dims": dims,
        "matrix_identity": matrix_identity,
        "dimension_lhs": dim_report["dimension_lhs"],
        "dimension_rhs": dim_report["dimension_rhs"],
        "dimension_identity": dim_report["dimension_identity"],
        "passed": matrix_identity and dim_report["dimension_identity"],
    }


def commutation_check(phi: MarkovOp, t_perm: Perm, s_perm: Perm) -> bool:
    """Does phi intertwine the two point permutations (phi after T equals S
    after phi, with permutations acting by composition on functions)?

    Both permutations must preserve their space's measure; anything else is
    an input error, not a falsified identity."""
    if t_perm.degree != phi.source.size or s_perm.degree != phi.target.size:
        raise ValueError("permutation degrees do not match the spaces")
    if any(phi.source.probs[t_perm(i)] != phi.source.probs[i] for i in range(t_perm.degree)):
        raise ValueError("source permutation does not preserve the measure")
    if any(phi.target.probs[s_perm(i)] != phi.target.probs[i] for i in range(s_perm.degree)):
        raise ValueError("target permutation does not preserve the measure")

    def koopman(perm):
        m = linalg.zeros(perm.degree, perm.degree)
        for x in range(perm.degree):
            m[x][perm(x)] = Fraction(1)
        return m

    left = linalg.mat_mul(list(map(list, phi.matrix)), koopman(t_perm))
    right = linalg.mat_mul(koopman(s_perm), list(map(list, phi.matrix)))
    return linalg.mat_eq(left, right)
