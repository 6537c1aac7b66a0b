"""Multiplicity bookkeeping for tensor and symmetric powers of atomic models.

The n-th tensor power of the unitary attached to an atomic measure sigma has,
at an eigenvalue z, multiplicity equal to the number of ordered n-tuples of
atoms multiplying to z.  Restricting to the subspace invariant under a
subgroup G <= S(n) of coordinate permutations replaces tuple counts by
G-orbit counts; G = S(n) gives the symmetric power, where the orbit count is
the number of distinct atom multisets with product z.

Everything here runs on that combinatorial picture with exact arithmetic.
A "fiber" collects the tuples over one eigenvalue; a fiber is generic when
its tuples realize one single multiset made of n distinct atoms, which is
the only kind of fiber a fully generic measure produces.  Each counting
claim is computable by at least two independent routes (orbit enumeration,
multiset-partition counting, exact rational matrix rank), and the check
operations below run every route their caps allow and insist on exact
agreement.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from circlespec import linalg
from circlespec.circle import CirclePoint, GeneratorAllocator
from circlespec.errors import EnumerationCapError
from circlespec.measure import AtomicMeasure, generic_measure, relation_scan
from circlespec.permgroup import (
    PermSubgroup,
    contiguous_block_group,
    wreath_block_group,
)

DEFAULT_TUPLE_CAP = 10**7
DEFAULT_MATRIX_CAP = 4096


@dataclass(frozen=True)
class FiberClass:
    """All ordered atom tuples over one eigenvalue of the coordinate product.

    `tuples` holds indices into `atoms` (the measure support in canonical
    order), lexicographically sorted.  `orbits` partitions tuple positions
    into orbits of the acting subgroup once one has acted, else None.
    """

    eigenvalue: CirclePoint
    atoms: tuple[CirclePoint, ...]
    tuples: tuple[tuple[int, ...], ...]
    orbits: tuple[tuple[int, ...], ...] | None = None

    @property
    def size(self) -> int:
        return len(self.tuples)

    def point_tuples(self) -> list[tuple[CirclePoint, ...]]:
        return [tuple(self.atoms[i] for i in t) for t in self.tuples]

    def multisets(self) -> list[tuple[int, ...]]:
        """Distinct atom multisets realized in this fiber, as sorted index tuples."""
        return sorted({tuple(sorted(t)) for t in self.tuples})

    @property
    def is_generic(self) -> bool:
        ms = self.multisets()
        return len(ms) == 1 and len(set(ms[0])) == len(ms[0])


def fibers(sigma: AtomicMeasure, n: int, tuple_cap: int = DEFAULT_TUPLE_CAP) -> list[FiberClass]:
    """Group all ordered n-tuples of atoms by their product, eigenvalue-sorted."""
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValueError(f"power must be an int >= 1, got {n!r}")
    atoms = sigma.support()
    d = len(atoms)
    if d**n > tuple_cap:
        raise EnumerationCapError(f"{d}^{n} tuples exceed the cap {tuple_cap}")
    by_eig: dict[CirclePoint, list[tuple[int, ...]]] = {}
    identity = CirclePoint.identity()

    def descend(depth: int, prod: CirclePoint, tup: tuple[int, ...]):
        if depth == n:
            by_eig.setdefault(prod, []).append(tup)
            return
        for i in range(d):
            descend(depth + 1, prod * atoms[i], tup + (i,))

    descend(0, identity, ())
    return [
        FiberClass(eig, atoms, tuple(ts))
        for eig, ts in sorted(by_eig.items(), key=lambda kv: kv[0].sort_key())
    ]


@dataclass
class MultiplicityReport:
    """Per-eigenvalue multiplicities of a tensor power restricted to the
    G-invariant subspace, with the generic/degenerate split made explicit."""

    power: int
    group: dict
    entries: dict[CirclePoint, int]
    generic_value: int | None
    degenerate: list[tuple[CirclePoint, int]]
    homogeneous_on_generic: bool
    generic_fiber_count: int
    total_tuples: int

    def to_json_obj(self) -> dict:
        return {
            "power": self.power,
            "group": self.group,
            "entries": {str(eig): mult for eig, mult in self.entries.items()},
            "generic_value": self.generic_value,
            "degenerate": [[str(eig), mult] for eig, mult in self.degenerate],
            "homogeneous_on_generic": self.homogeneous_on_generic,
            "generic_fiber_count": self.generic_fiber_count,
            "total_tuples": self.total_tuples,
        }

    def to_table(self) -> str:
        degenerate = {eig for eig, _ in self.degenerate}
        rows = [("eigenvalue", "multiplicity", "kind")]
        rows += [
            (str(eig), str(mult), "degenerate" if eig in degenerate else "generic")
            for eig, mult in self.entries.items()
        ]
        widths = [max(len(r[c]) for r in rows) for c in range(3)]
        lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows]
        lines.append(
            f"generic value: {self.generic_value}  "
            f"(homogeneous: {self.homogeneous_on_generic}, "
            f"generic fibers: {self.generic_fiber_count}, tuples: {self.total_tuples})"
        )
        return "\n".join(lines)


def _build_report(power: int, group: PermSubgroup, classified) -> MultiplicityReport:
    """classified: list of (fiber, multiplicity)."""
    entries: dict[CirclePoint, int] = {}
    degenerate = []
    generic_values = []
    total = 0
    for fc, mult in classified:
        entries[fc.eigenvalue] = mult
        total += fc.size
        if fc.is_generic:
            generic_values.append(mult)
        else:
            degenerate.append((fc.eigenvalue, mult))
    homogeneous = bool(generic_values) and len(set(generic_values)) == 1
    return MultiplicityReport(
        power=power,
        group=group.describe(),
        entries=entries,
        generic_value=generic_values[0] if homogeneous else None,
        degenerate=degenerate,
        homogeneous_on_generic=homogeneous,
        generic_fiber_count=len(generic_values),
        total_tuples=total,
    )


def multiplicity(
    sigma: AtomicMeasure,
    n: int,
    G: PermSubgroup,
    tuple_cap: int = DEFAULT_TUPLE_CAP,
) -> MultiplicityReport:
    """Orbit-count route: multiplicity at z = number of G-orbits on the fiber."""
    if G.degree != n:
        raise ValueError(f"group degree {G.degree} does not match power {n}")
    images = [p.images for p in G.elements]
    classified = []
    for fc in fibers(sigma, n, tuple_cap):
        index_of = {t: k for k, t in enumerate(fc.tuples)}
        seen = [False] * fc.size
        orbits = []
        for k0, t in enumerate(fc.tuples):
            if seen[k0]:
                continue
            orbit = sorted({index_of[tuple(t[i] for i in imgs)] for imgs in images})
            for j in orbit:
                seen[j] = True
            orbits.append(tuple(orbit))
        classified.append(
            (FiberClass(fc.eigenvalue, fc.atoms, fc.tuples, tuple(orbits)), len(orbits))
        )
    return _build_report(n, G, classified)


def matrix_oracle(
    sigma: AtomicMeasure,
    n: int,
    G: PermSubgroup,
    matrix_cap: int = DEFAULT_MATRIX_CAP,
) -> MultiplicityReport:
    """Rank route: multiplicity at z = rank of the averaged coordinate-
    permutation block over the fiber, computed by exact rational elimination.

    The block of (1/#G) sum_pi U_pi over a fiber is a projection whose rank
    is the orbit count; this route never looks at orbits, only at ranks.
    """
    if G.degree != n:
        raise ValueError(f"group degree {G.degree} does not match power {n}")
    d = len(sigma.support())
    if d**n > matrix_cap:
        raise EnumerationCapError(f"matrix dimension {d**n} exceeds the cap {matrix_cap}")
    images = [p.images for p in G.elements]
    order = Fraction(G.order)
    classified = []
    for fc in fibers(sigma, n, tuple_cap=matrix_cap):
        index_of = {t: k for k, t in enumerate(fc.tuples)}
        block = [[Fraction(0)] * fc.size for _ in range(fc.size)]
        for j, t in enumerate(fc.tuples):
            for imgs in images:
                i = index_of[tuple(t[i0] for i0 in imgs)]
                block[i][j] += Fraction(1) / order
        classified.append((fc, linalg.rank(block)))
    return _build_report(n, G, classified)


def simple_spectrum(sigma: AtomicMeasure, n: int, tuple_cap: int = DEFAULT_TUPLE_CAP) -> bool:
    """True when the n-th symmetric power is multiplicity-free: every product
    of n atoms is achieved by exactly one atom multiset."""
    return all(len(fc.multisets()) == 1 for fc in fibers(sigma, n, tuple_cap))


def check_simplicity_levels(
    sigma: AtomicMeasure, max_level: int, tuple_cap: int = DEFAULT_TUPLE_CAP
) -> dict:
    """Simplicity level by level, with the downward-monotonicity check:
    a simple level k forces simplicity at every level below it."""
    if not isinstance(max_level, int) or isinstance(max_level, bool) or max_level < 1:
        raise ValueError(f"max level must be an int >= 1, got {max_level!r}")
    levels: dict[int, bool] = {}
    witnesses: dict[int, dict] = {}
    for j in range(1, max_level + 1):
        bad = [fc for fc in fibers(sigma, j, tuple_cap) if len(fc.multisets()) > 1]
        levels[j] = not bad
        if bad:
            fc = bad[0]
            witnesses[j] = {
                "eigenvalue": str(fc.eigenvalue),
                "multisets": [[str(fc.atoms[i]) for i in ms] for ms in fc.multisets()],
            }
    violations = [
        {"lower": j, "higher": k, "witness": witnesses[j]}
        for j in range(1, max_level + 1)
        for k in range(j + 1, max_level + 1)
        if levels[k] and not levels[j]
    ]
    return {
        "max_level": max_level,
        "levels": {str(j): levels[j] for j in range(1, max_level + 1)},
        "monotone": not violations,
        "violations": violations,
    }


# -- powers of a convolution power -------------------------------------------


def _multiset_atom_table(atoms: tuple[CirclePoint, ...], k: int) -> tuple[list[tuple[int, ...]], list[CirclePoint]]:
    """Atoms of the k-fold convolution of a generic measure, each tagged with
    the k-multiset of base atoms producing it.  Collisions would mean the
    base measure was not generic; that is a caller error worth crashing on."""
    combos = list(itertools.combinations_with_replacement(range(len(atoms)), k))
    points = []
    seen: dict[CirclePoint, tuple[int, ...]] = {}
    identity = CirclePoint.identity()
    for combo in combos:
        p = identity
        for i in combo:
            p = p * atoms[i]
        if p in seen:
            raise RuntimeError(
                f"base measure is not generic: multisets {seen[p]} and {combo} share product {p}"
            )
        seen[p] = combo
        points.append(p)
    return combos, points


def _merge_sorted(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(sorted(a + b))


def _level_counts_from_groups(groups: dict[CirclePoint, tuple[int, tuple[int, ...]]], width: int) -> dict:
    """Split per-eigenvalue counts by whether the total base multiset has
    `width` distinct atoms (the generic case)."""
    entries: dict[CirclePoint, int] = {}
    generic: dict[CirclePoint, int] = {}
    degenerate: dict[CirclePoint, int] = {}
    for eig in sorted(groups, key=lambda p: p.sort_key()):
        count, total = groups[eig]
        entries[eig] = count
        if len(set(total)) == width:
            generic[eig] = count
        else:
            degenerate[eig] = count
    return {"entries": entries, "generic": generic, "degenerate": degenerate}


def _tensor_level_counts(
    sigma: AtomicMeasure, k: int, m: int, tuple_cap: int = DEFAULT_TUPLE_CAP
) -> dict:
    """Partition-counting route for the m-th tensor power of the k-fold
    convolution: per eigenvalue, count ordered m-tuples of k-multisets of
    base atoms with that total product."""
    atoms = sigma.support()
    combos, points = _multiset_atom_table(atoms, k)
    T = len(combos)
    if T**m > tuple_cap:
        raise EnumerationCapError(f"{T}^{m} level tuples exceed the cap {tuple_cap}")
    groups: dict[CirclePoint, tuple[int, tuple[int, ...]]] = {}

    def descend(depth: int, prod: CirclePoint, total: tuple[int, ...]):
        if depth == m:
            prev = groups.get(prod)
            if prev is None:
                groups[prod] = (1, total)
            else:
                count, seen_total = prev
                if seen_total != total:
                    raise RuntimeError(
                        f"base measure is not generic: totals {seen_total} and {total} share product {prod}"
                    )
                groups[prod] = (count + 1, total)
            return
        for c in range(T):
            descend(depth + 1, prod * points[c], _merge_sorted(total, combos[c]))

    descend(0, CirclePoint.identity(), ())
    return _level_counts_from_groups(groups, k * m)


def _symmetric_level_counts(
    sigma: AtomicMeasure, k: int, m: int, tuple_cap: int = DEFAULT_TUPLE_CAP
) -> dict:
    """Partition-counting route for the m-th symmetric power: per eigenvalue,
    count unordered m-multisets of k-multisets with that total product."""
    atoms = sigma.support()
    combos, points = _multiset_atom_table(atoms, k)
    T = len(combos)
    n_multisets = math.comb(T + m - 1, m)
    if n_multisets > tuple_cap:
        raise EnumerationCapError(f"{n_multisets} level multisets exceed the cap {tuple_cap}")
    groups: dict[CirclePoint, tuple[int, tuple[int, ...]]] = {}
    identity = CirclePoint.identity()
    for selection in itertools.combinations_with_replacement(range(T), m):
        prod = identity
        total: tuple[int, ...] = ()
        for c in selection:
            prod = prod * points[c]
            total = _merge_sorted(total, combos[c])
        prev = groups.get(prod)
        if prev is None:
            groups[prod] = (1, total)
        else:
            count, seen_total = prev
            if seen_total != total:
                raise RuntimeError(
                    f"base measure is not generic: totals {seen_total} and {total} share product {prod}"
                )
            groups[prod] = (count + 1, total)
    return _level_counts_from_groups(groups, k * m)


def _histogram(values) -> dict[str, int]:
    out: dict[int, int] = {}
    for v in values:
        out[v] = out.get(v, 0) + 1
    return {str(v): out[v] for v in sorted(out)}


def _generic_summary(counts: dict) -> tuple[int | None, bool]:
    values = set(counts["generic"].values())
    if len(values) == 1:
        return values.pop(), True
    return None, False


def _cross_check_routes(
    sigma: AtomicMeasure,
    k: int,
    m: int,
    counts: dict,
    G: PermSubgroup,
    tuple_cap: int,
    matrix_cap: int,
) -> tuple[dict, dict, bool]:
    """Run the subgroup-orbit and matrix-rank routes when their caps allow and
    compare them per eigenvalue against the partition-counting entries."""
    d = len(sigma.support())
    n = k * m
    agree = True

    orbit_route: dict = {"ran": False}
    if d**n <= tuple_cap:
        rep = multiplicity(sigma, n, G, tuple_cap)
        matches = rep.entries == counts["entries"]
        orbit_route = {
            "ran": True,
            "generic_value": rep.generic_value,
            "matches_partition_count": matches,
        }
        agree = agree and matches

    matrix_route: dict = {"ran": False}
    if d**n <= matrix_cap:
        rep = matrix_oracle(sigma, n, G, matrix_cap)
        matches = rep.entries == counts["entries"]
        matrix_route = {
            "ran": True,
            "generic_value": rep.generic_value,
            "matches_partition_count": matches,
        }
        agree = agree and matches

    return orbit_route, matrix_route, agree


def check_tensor_power(
    k: int,
    m: int,
    d: int,
    tuple_cap: int = DEFAULT_TUPLE_CAP,
    matrix_cap: int = DEFAULT_MATRIX_CAP,
    allocator: GeneratorAllocator | None = None,
) -> dict:
    """Multiplicity of the m-th tensor power of the k-fold convolution of a
    generic d-atom measure, against the closed form (mk)!/(k!)^m.

    Three routes where caps allow: ordered-partition counting over level
    atoms, orbit counting under the within-blocks subgroup of S(mk), and
    exact matrix rank.  All present routes must agree on every eigenvalue.
    """
    for name, v in (("k", k), ("m", m), ("d", d)):
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            raise ValueError(f"{name} must be an int >= 1, got {v!r}")
    sigma = generic_measure(d, allocator)
    counts = _tensor_level_counts(sigma, k, m, tuple_cap)
    formula = math.factorial(m * k) // math.factorial(k) ** m
    generic_value, homogeneous = _generic_summary(counts)
    G = contiguous_block_group(k, m)
    orbit_route, matrix_route, agree = _cross_check_routes(
        sigma, k, m, counts, G, tuple_cap, matrix_cap
    )
    warning = None if d >= m * k else f"no generic fiber: d={d} < {m * k}"
    formula_ok = warning is not None or (homogeneous and generic_value == formula)
    return {
        "conv_power": k,
        "tensor_power": m,
        "atoms": d,
        "formula": formula,
        "generic_value": generic_value,
        "homogeneous_on_generic": homogeneous,
        "generic_eigenvalues": len(counts["generic"]),
        "degenerate_histogram": _histogram(counts["degenerate"].values()),
        "group": G.describe(),
        "orbit_route": orbit_route,
        "matrix_route": matrix_route,
        "warning": warning,
        "passed": bool(agree and formula_ok),
    }


def check_symmetric_power(
    k: int,
    m: int,
    d: int,
    tuple_cap: int = DEFAULT_TUPLE_CAP,
    matrix_cap: int = DEFAULT_MATRIX_CAP,
    allocator: GeneratorAllocator | None = None,
) -> dict:
    """Same as check_tensor_power but for the symmetric power: unordered
    m-multisets of k-multisets, closed form (mk)!/((k!)^m m!), cross-checked
    against the wreath subgroup (within-block permutations plus block swaps)."""
    for name, v in (("k", k), ("m", m), ("d", d)):
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            raise ValueError(f"{name} must be an int >= 1, got {v!r}")
    sigma = generic_measure(d, allocator)
    counts = _symmetric_level_counts(sigma, k, m, tuple_cap)
    formula = math.factorial(m * k) // (math.factorial(k) ** m * math.factorial(m))
    generic_value, homogeneous = _generic_summary(counts)
    G = wreath_block_group(k, m)
    orbit_route, matrix_route, agree = _cross_check_routes(
        sigma, k, m, counts, G, tuple_cap, matrix_cap
    )
    warning = None if d >= m * k else f"no generic fiber: d={d} < {m * k}"
    formula_ok = warning is not None or (homogeneous and generic_value == formula)
    return {
        "conv_power": k,
        "symmetric_power": m,
        "atoms": d,
        "formula": formula,
        "generic_value": generic_value,
        "homogeneous_on_generic": homogeneous,
        "generic_eigenvalues": len(counts["generic"]),
        "degenerate_histogram": _histogram(counts["degenerate"].values()),
        "group": G.describe(),
        "orbit_route": orbit_route,
        "matrix_route": matrix_route,
        "warning": warning,
        "passed": bool(agree and formula_ok),
    }


def fock_multiplicity_set(
    k: int,
    m_max: int,
    d: int,
    tuple_cap: int = DEFAULT_TUPLE_CAP,
    matrix_cap: int = DEFAULT_MATRIX_CAP,
) -> dict:
    """Generic multiplicities of the symmetric powers m = 1..m_max of the
    k-fold convolution of one shared generic d-atom measure, plus the check
    that the convolution levels sigma^{*k}, sigma^{*2k}, ... are pairwise
    mutually singular (so the multiplicities genuinely live on disjoint
    spectral pieces)."""
    for name, v in (("k", k), ("m_max", m_max), ("d", d)):
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            raise ValueError(f"{name} must be an int >= 1, got {v!r}")
    sigma = generic_measure(d)
    per_level: dict[str, int | None] = {}
    values = []
    formulas = {}
    ok = True
    for m in range(1, m_max + 1):
        counts = _symmetric_level_counts(sigma, k, m, tuple_cap)
        value, homogeneous = _generic_summary(counts)
        formula = math.factorial(m * k) // (math.factorial(k) ** m * math.factorial(m))
        per_level[str(m)] = value
        formulas[str(m)] = formula
        if d >= k * m:
            ok = ok and homogeneous and value == formula
            values.append(value)
        else:
            ok = False
    levels = [sigma.convolve_power(k * m) for m in range(1, m_max + 1)]
    disjoint = all(
        levels[i].is_singular_to(levels[j])
        for i in range(len(levels))
        for j in range(i + 1, len(levels))
    )
    warning = None if d >= k * m_max else f"no generic fiber above level {d // k}: d={d} < {k * m_max}"
    return {
        "conv_power": k,
        "max_level": m_max,
        "atoms": d,
        "per_level": per_level,
        "formula_per_level": formulas,
        "set": sorted(set(v for v in values if v is not None)),
        "levels_pairwise_singular": disjoint,
        "warning": warning,
        "passed": bool(ok and disjoint),
    }


# -- arithmetic criteria -------------------------------------------------------


def cs_criterion(k: int, m: int, n: int) -> dict:
    """Exact big-integer comparison (m!)^n * (k!)^m > (mk)!.

    When it holds, the order of the strand-wise subgroup exceeds the level
    multiplicity (mk)!/(k!)^m, which is the model's finite witness for the
    k-fold convolution being singular to every product of n levels."""
    for name, v in (("k", k), ("m", m), ("n", n)):
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            raise ValueError(f"{name} must be an int >= 1, got {v!r}")
    group_order = math.factorial(m) ** n
    tensor_multiplicity = math.factorial(m * k) // math.factorial(k) ** m
    return {
        "conv_power": k,
        "level_power": m,
        "factors": n,
        "group_order": group_order,
        "tensor_multiplicity": tensor_multiplicity,
        "holds": group_order > tensor_multiplicity,
    }


def minimal_m_for_cs(k: int, m_cap: int = 64) -> dict:
    """Smallest m with a_m = (m!)^(k+1) (k!)^m / (mk)! > 1, with the full
    exact sequence of a_m values computed along the way."""
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        raise ValueError(f"k must be an int >= 1, got {k!r}")
    if not isinstance(m_cap, int) or isinstance(m_cap, bool) or m_cap < 1:
        raise ValueError(f"m_cap must be an int >= 1, got {m_cap!r}")
    sequence: list[Fraction] = []
    found = None
    for m in range(1, m_cap + 1):
        a_m = Fraction(
            math.factorial(m) ** (k + 1) * math.factorial(k) ** m, math.factorial(m * k)
        )
        sequence.append(a_m)
        if a_m > 1:
            found = m
            break
    return {
        "conv_power": k,
        "m": found,
        "found": found is not None,
        "m_cap": m_cap,
        "sequence": [str(a) for a in sequence],
    }


# -- translate singularity and the non-simple construction ---------------------


def _conv_support_guard(d: int, j: int, tuple_cap: int):
    if d and math.comb(d + j - 1, j) > tuple_cap:
        raise EnumerationCapError(
            f"convolution level {j} of a {d}-atom measure may carry "
            f"{math.comb(d + j - 1, j)} atoms, above the cap {tuple_cap}"
        )


def check_translate_singularity(
    sigma: AtomicMeasure,
    n: int,
    m: int,
    a: CirclePoint,
    tuple_cap: int = DEFAULT_TUPLE_CAP,
) -> dict:
    """Is sigma^{*n} singular to the a-translate of sigma^{*m}?

    For a generic base measure this holds whenever n != m (the total-degree
    strata are disjoint) or a is not the identity; it fails exactly for
    n = m, a = identity, where the two measures coincide."""
    for name, v in (("n", n), ("m", m)):
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            raise ValueError(f"{name} must be an int >= 1, got {v!r}")
    d = len(sigma)
    _conv_support_guard(d, max(n, m), tuple_cap)
    left = sigma.convolve_power(n)
    right = sigma.convolve_power(m).translate(a)
    return {
        "n": n,
        "m": m,
        "shift": str(a),
        "singular": left.is_singular_to(right),
    }


def nonsimple_counterexample(
    sigma: AtomicMeasure, a: CirclePoint, tuple_cap: int = DEFAULT_TUPLE_CAP
) -> dict:
    """Build tau = sigma + sigma * delta_a and exhibit the failure of
    simplicity of its symmetric square.

    tau's translate by a shares the whole shifted copy with tau, so the two
    are far from singular, and any two base atoms x, y give one eigenvalue
    x*y*a realized by the two distinct multisets {x, y*a} and {x*a, y}.
    With a single base atom there is no second multiset and the symmetric
    square stays simple; the report says so instead of pretending."""
    if len(sigma) < 1:
        raise ValueError("base measure must have at least one atom")
    if a.is_identity:
        raise ValueError("shift must not be the identity")
    if relation_scan(sigma, 2, tuple_cap):
        raise ValueError("base measure must be generic (relation scan up to degree 2 failed)")
    shifted = sigma.translate(a)
    if not sigma.is_singular_to(shifted):
        raise ValueError("shift collides with the base measure; pick a relation-free shift")
    tau = sigma + shifted
    tau_shift = tau.translate(a)
    overlap = [p for p in tau.support() if tau_shift.weight(p) > 0]
    d = len(sigma)
    report = {
        "base_atoms": d,
        "shift": str(a),
        "tau_atoms": len(tau),
        "overlap": [str(p) for p in overlap],
        "translate_not_singular": bool(overlap),
        "simple_level_2": simple_spectrum(tau, 2, tuple_cap),
        "witness": None,
        "note": None,
    }
    if d < 2:
        report["note"] = "needs at least 2 base atoms for a second multiset"
        report["found"] = False
        return report
    witness = next(
        (fc for fc in fibers(tau, 2, tuple_cap) if len(fc.multisets()) > 1), None
    )
    if witness is not None:
        report["witness"] = {
            "eigenvalue": str(witness.eigenvalue),
            "multiplicity": len(witness.multisets()),
            "multisets": [[str(witness.atoms[i]) for i in ms] for ms in witness.multisets()],
        }
    report["found"] = bool(
        overlap and not report["simple_level_2"] and witness is not None
    )
    return report


# -- multiplicity amplification -------------------------------------------------


def _symmetric_counts_by_eigenvalue(
    sigma: AtomicMeasure, n: int, tuple_cap: int
) -> dict[CirclePoint, list[tuple[int, ...]]]:
    return {fc.eigenvalue: fc.multisets() for fc in fibers(sigma, n, tuple_cap)}


def girsanov_step(sigma: AtomicMeasure, n: int, tuple_cap: int = DEFAULT_TUPLE_CAP) -> dict:
    """Squares a symmetric multiplicity by doubling the level.

    If some level-n eigenvalue is realized by q distinct multisets, gluing
    those multisets pairwise onto a second high-multiplicity eigenvalue
    yields a level-2n eigenvalue realized by at least q^2 multisets.  The
    search tries the product of the two highest-multiplicity level-n
    eigenvalues first (the construction's own witness) before scanning all
    level-2n fibers.  q = 1 makes the claim trivially true."""
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValueError(f"power must be an int >= 1, got {n!r}")
    if len(sigma) < 1:
        raise ValueError("measure must have at least one atom")
    level_1 = _symmetric_counts_by_eigenvalue(sigma, 1, tuple_cap)
    level_n = _symmetric_counts_by_eigenvalue(sigma, n, tuple_cap)
    level_2n = _symmetric_counts_by_eigenvalue(sigma, 2 * n, tuple_cap)

    def top(counts, skip=None):
        best = None
        for eig in counts:
            if eig == skip:
                continue
            if best is None or len(counts[eig]) > len(counts[best]):
                best = eig
        return best

    s = top(level_n)
    s2 = top(level_n, skip=s) or s
    q = len(level_n[s])
    atoms = sigma.support()

    def names(multisets):
        return [[str(atoms[i]) for i in ms] for ms in multisets]

    candidate = s * s2
    required = q * q
    if len(level_2n.get(candidate, ())) >= required:
        chosen = candidate
    else:
        chosen = top(level_2n)
    chosen_count = len(level_2n[chosen])
    max_2n = max(len(ms) for ms in level_2n.values())
    return {
        "level": n,
        "q": q,
        "trivial": q == 1,
        "top_eigenvalue": str(s),
        "top_multisets": names(level_n[s]),
        "second_eigenvalue": str(s2),
        "second_multisets": names(level_n[s2]),
        "candidate_eigenvalue": str(candidate),
        "candidate_count": len(level_2n.get(candidate, ())),
        "chosen_eigenvalue": str(chosen),
        "chosen_count": chosen_count,
        "required": required,
        "witness_multisets": names(level_2n[chosen]),
        "level_max": {
            "1": max(len(ms) for ms in level_1.values()),
            str(n): q,
            str(2 * n): max_2n,
        },
        "satisfied": chosen_count >= required,
    }


def paired_relation_measure(allocator: GeneratorAllocator | None = None) -> AtomicMeasure:
    """Eight atoms carrying two independent product relations
    x*y = z*w and x'*y' = z'*w': the designed input whose symmetric square
    has multiplicity 2 and whose fourth symmetric power reaches 4."""
    alloc = allocator or GeneratorAllocator()
    weights = {}
    for _ in range(2):
        x, y, z = (alloc.fresh_point() for _ in range(3))
        w = x * y * z.inverse()
        for p in (x, y, z, w):
            weights[p] = Fraction(1, 8)
    return AtomicMeasure(weights)


def tensor_vs_symmetric(
    sigma: AtomicMeasure, n: int, tuple_cap: int = DEFAULT_TUPLE_CAP
) -> dict:
    """Per fiber: the full tuple count against n! times the multiset count.

    On generic fibers the tensor multiplicity must be exactly n! times the
    symmetric one (each multiset of n distinct atoms has n! orderings);
    degenerate fibers, where orderings collide, are flagged rather than
    asserted against."""
    n_fact = math.factorial(n)
    rows = []
    generic_ok = True
    flagged = 0
    for fc in fibers(sigma, n, tuple_cap):
        sym = len(fc.multisets())
        split = fc.size == n_fact * sym
        if fc.is_generic:
            generic_ok = generic_ok and split
        elif not split:
            flagged += 1
        rows.append(
            {
                "eigenvalue": str(fc.eigenvalue),
                "tensor": fc.size,
                "symmetric": sym,
                "generic": fc.is_generic,
                "factorial_split": split,
            }
        )
    return {
        "power": n,
        "factorial": n_fact,
        "rows": rows,
        "generic_rows_ok": generic_ok,
        "degenerate_flagged": flagged,
        "passed": generic_ok,
    }
