"""Multiplicity combinatorics of support products and the GF(2) unit search.

Everything here works on plain element lists: the multiplicity table
counting representations g_i h_j = w, unique-product witnesses, the CNF
encoding of the "some proper subpair has no unique product" question, an
exhaustive subpair checker for desk-scale instances, and the exhaustive
search for unit coefficient vectors over F2.
"""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import _f2kernel
from .groups import GroupElement


class ResourceBoundError(RuntimeError):
    """An operation exceeded its configured desk-scale bound."""


def _check_supports(a: Sequence[GroupElement], b: Sequence[GroupElement]) -> None:
    if not a or not b:
        raise ValueError("supports must be nonempty")
    if len(set(a)) != len(a) or len(set(b)) != len(b):
        raise ValueError("support entries must be distinct")


@dataclass(frozen=True)
class MultiplicityTable:
    """All representations of each product, as 1-based (i, j) index pairs."""

    table: Tuple[Tuple[GroupElement, Tuple[Tuple[int, int], ...]], ...]

    def as_dict(self) -> Dict[GroupElement, Tuple[Tuple[int, int], ...]]:
        return dict(self.table)

    def count(self, w: GroupElement) -> int:
        for elem, pairs in self.table:
            if elem == w:
                return len(pairs)
        return 0

    def min_multiplicity(self) -> int:
        return min(len(pairs) for _, pairs in self.table)

    def identity_pairs(self) -> int:
        for elem, pairs in self.table:
            if elem.is_identity():
                return len(pairs)
        return 0

    def __len__(self) -> int:
        return len(self.table)


def multiplicity_table(a: Sequence[GroupElement], b: Sequence[GroupElement]) -> MultiplicityTable:
    _check_supports(a, b)
    acc: Dict[GroupElement, List[Tuple[int, int]]] = {}
    for i, g in enumerate(a, start=1):
        for j, h in enumerate(b, start=1):
            acc.setdefault(g * h, []).append((i, j))
    ordered = sorted(acc)
    return MultiplicityTable(tuple((w, tuple(sorted(acc[w]))) for w in ordered))


def has_unique_product(
    a: Sequence[GroupElement], b: Sequence[GroupElement]
) -> Optional[Tuple[GroupElement, int, int]]:
    """The first product (in canonical element order) with one representation."""
    for w, pairs in multiplicity_table(a, b).table:
        if len(pairs) == 1:
            i, j = pairs[0]
            return (w, i, j)
    return None


@dataclass(frozen=True)
class CnfFormula:
    nvars: int
    clauses: Tuple[Tuple[int, ...], ...]
    legend: Tuple[str, ...]

    def to_dimacs(self) -> str:
        lines = [f"c {entry}" for entry in self.legend]
        lines.append(f"p cnf {self.nvars} {len(self.clauses)}")
        lines.extend(" ".join(str(l) for l in clause) + " 0" for clause in self.clauses)
        return "\n".join(lines) + "\n"


def encode_two_unique_product_cnf(
    a: Sequence[GroupElement],
    b: Sequence[GroupElement],
    left_labels: Optional[Sequence[str]] = None,
    right_labels: Optional[Sequence[str]] = None,
) -> CnfFormula:
    """SAT instance: is there a proper nonempty subpair with no unique product?

    Membership variables come first (left then right), then one auxiliary
    variable per index pair.  UNSAT means every proper subpair keeps a
    uniquely represented product.
    """
    _check_supports(a, b)
    m, n = len(a), len(b)
    left_labels = list(left_labels) if left_labels else [f"g{i}" for i in range(1, m + 1)]
    right_labels = list(right_labels) if right_labels else [f"h{j}" for j in range(1, n + 1)]

    def x(i: int) -> int:
        return i

    def y(j: int) -> int:
        return m + j

    def p(i: int, j: int) -> int:
        return m + n + (i - 1) * n + j

    same_product: Dict[GroupElement, List[Tuple[int, int]]] = {}
    for i, g in enumerate(a, start=1):
        for j, h in enumerate(b, start=1):
            same_product.setdefault(g * h, []).append((i, j))

    clauses: List[Tuple[int, ...]] = []
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            clauses.append((-p(i, j), x(i)))
            clauses.append((-p(i, j), y(j)))
            clauses.append((-x(i), -y(j), p(i, j)))
    for pairs in same_product.values():
        for i, j in pairs:
            others = [p(i2, j2) for i2, j2 in pairs if (i2, j2) != (i, j)]
            clauses.append(tuple([-p(i, j)] + others))
    clauses.append(tuple(x(i) for i in range(1, m + 1)))
    clauses.append(tuple(y(j) for j in range(1, n + 1)))
    clauses.append(
        tuple([-x(i) for i in range(1, m + 1)] + [-y(j) for j in range(1, n + 1)])
    )

    legend = (
        [f"var {x(i)}: left membership {left_labels[i - 1]}" for i in range(1, m + 1)]
        + [f"var {y(j)}: right membership {right_labels[j - 1]}" for j in range(1, n + 1)]
        + [f"vars {m + n + 1}..{m + n + m * n}: auxiliary pair variables, row-major (i,j)"]
    )
    return CnfFormula(m + n + m * n, tuple(clauses), tuple(legend))


def solve_cnf_naive(formula: CnfFormula, var_limit: int = 80) -> Optional[Dict[int, bool]]:
    """DPLL with unit propagation; None if unsatisfiable.  Tiny instances only."""
    if formula.nvars > var_limit:
        raise ResourceBoundError(
            f"naive CNF solving is capped at {var_limit} variables; "
            "export DIMACS and use an external SAT solver"
        )

    def assign(clauses, lit):
        out = []
        for c in clauses:
            if lit in c:
                continue
            if -lit in c:
                reduced = tuple(l for l in c if l != -lit)
                if not reduced:
                    return None
                out.append(reduced)
            else:
                out.append(c)
        return out

    def rec(clauses, model):
        while True:
            unit = next((c[0] for c in clauses if len(c) == 1), None)
            if unit is None:
                break
            clauses = assign(clauses, unit)
            if clauses is None:
                return None
            model = dict(model)
            model[abs(unit)] = unit > 0
        if not clauses:
            return model
        branch = min(abs(l) for l in clauses[0])
        polarity = branch if branch in clauses[0] else -branch
        for lit in (polarity, -polarity):
            reduced = assign(clauses, lit)
            if reduced is None:
                continue
            result = rec(reduced, {**model, abs(lit): lit > 0})
            if result is not None:
                return result
        return None

    return rec([tuple(c) for c in formula.clauses], {})


@dataclass(frozen=True)
class SubpairVerdict:
    all_have_unique_product: bool
    bad_left: Optional[Tuple[int, ...]] = None
    bad_right: Optional[Tuple[int, ...]] = None


def exhaustive_subpair_check(
    a: Sequence[GroupElement], b: Sequence[GroupElement], cap: int = 24
) -> SubpairVerdict:
    """Scan every nonempty proper subpair for one lacking a unique product."""
    _check_supports(a, b)
    m, n = len(a), len(b)
    if m + n > cap:
        raise ResourceBoundError(
            f"exhaustive subpair check is capped at |A|+|B| <= {cap}; "
            "export the CNF and use an external SAT solver"
        )
    product_pairs = [
        [(i - 1, j - 1) for i, j in pairs] for _, pairs in multiplicity_table(a, b).table
    ]
    full_a, full_b = (1 << m) - 1, (1 << n) - 1
    for amask in range(1, full_a + 1):
        for bmask in range(1, full_b + 1):
            if amask == full_a and bmask == full_b:
                continue
            found_unique = False
            for pairs in product_pairs:
                count = 0
                for i, j in pairs:
                    if (amask >> i) & 1 and (bmask >> j) & 1:
                        count += 1
                        if count > 1:
                            break
                if count == 1:
                    found_unique = True
                    break
            if not found_unique:
                return SubpairVerdict(
                    False,
                    tuple(i + 1 for i in range(m) if (amask >> i) & 1),
                    tuple(j + 1 for j in range(n) if (bmask >> j) & 1),
                )
    return SubpairVerdict(True)


@dataclass(frozen=True)
class F2Family:
    """A u whose v-solution space was too large to enumerate."""

    u: Tuple[int, ...]
    particular: Tuple[int, ...]
    basis: Tuple[Tuple[int, ...], ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)


@dataclass(frozen=True)
class F2SearchResult:
    m: int
    n: int
    solutions: Tuple[Tuple[Tuple[int, ...], Tuple[int, ...]], ...]
    families: Tuple[F2Family, ...]

    def __iter__(self):
        return iter(self.solutions)

    def __len__(self) -> int:
        return len(self.solutions)


def _bits(value: int, width: int) -> Tuple[int, ...]:
    return tuple((value >> k) & 1 for k in range(width))


def _build_csr(a, b):
    identity_present = False
    products: Dict[GroupElement, Dict[int, int]] = {}
    for i, g in enumerate(a):
        for j, h in enumerate(b):
            w = g * h
            if w.is_identity():
                identity_present = True
            products.setdefault(w, {}).setdefault(j, 0)
            products[w][j] |= 1 << i
    identity = None
    for w in products:
        if w.is_identity():
            identity = w
    ordered = sorted(products, key=lambda w: (w != identity, w))
    ptr, cols, masks, rhs = [0], [], [], []
    for w in ordered:
        for j in sorted(products[w]):
            cols.append(j)
            masks.append(products[w][j])
        ptr.append(len(cols))
        rhs.append(1 if w == identity else 0)
    return (
        identity_present,
        np.asarray(ptr, np.int64),
        np.asarray(cols, np.int64),
        np.asarray(masks, np.int64),
        np.asarray(rhs, np.int64),
    )


def _scan_with_retry(scan, eq, n, lo, hi, parity, pair_a, pair_b, maxdim):
    cap, fam_cap = 4096, 64
    while True:
        out_u = np.empty(cap, np.int64)
        out_v = np.empty(cap, np.int64)
        fam_u = np.empty(fam_cap, np.int64)
        count, fam, overflow = scan(
            eq[0], eq[1], eq[2], eq[3], n, lo, hi, parity, pair_a, pair_b, maxdim, out_u, out_v, fam_u
        )
        if not overflow:
            return out_u[:count].tolist(), out_v[:count].tolist(), fam_u[:fam].tolist()
        cap *= 4
        fam_cap *= 4


def search_units_f2(
    a: Sequence[GroupElement],
    b: Sequence[GroupElement],
    threads: int = 1,
    symmetric_pairs: Optional[Sequence[Tuple[int, int]]] = None,
    v_dim_cap: int = 8,
) -> F2SearchResult:
    """All (u, v) over F2 with (sum u_i g_i)(sum v_j h_j) = 1, u nonzero.

    Enumerates every odd-weight u (the equations sum to parity(u)parity(v)=1),
    solving the linear system in v by packed-bit elimination.  Solutions come
    out with u ascending as an integer; v-spaces of dimension above the cap
    are reported as parametric families instead of being expanded.
    """
    _check_supports(a, b)
    m, n = len(a), len(b)
    if m > 24:
        raise ResourceBoundError("the left support is capped at 24 elements")
    if n > 62:
        raise ResourceBoundError("the right support is capped at 62 elements")

    identity_present, ptr, cols, masks, rhs = _build_csr(a, b)
    if not identity_present:
        return F2SearchResult(m, n, (), ())
    eq = (ptr, cols, masks, rhs)

    if symmetric_pairs:
        pair_a = np.asarray([i - 1 for i, _ in symmetric_pairs], np.int64)
        pair_b = np.asarray([j - 1 for _, j in symmetric_pairs], np.int64)
    else:
        pair_a = np.empty(0, np.int64)
        pair_b = np.empty(0, np.int64)

    scan = _f2kernel.scan_chunk
    total = 1 << m
    chunk_count = max(1, min(threads * 8, total - 1))
    bounds = [1 + (total - 1) * k // chunk_count for k in range(chunk_count + 1)]
    jobs = [(lo, hi) for lo, hi in zip(bounds, bounds[1:]) if lo < hi]

    if threads > 1 and len(jobs) > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
            chunk_results = list(
                pool.map(
                    lambda span: _scan_with_retry(
                        scan, eq, n, span[0], span[1], 1, pair_a, pair_b, v_dim_cap
                    ),
                    jobs,
                )
            )
    else:
        chunk_results = [
            _scan_with_retry(scan, eq, n, lo, hi, 1, pair_a, pair_b, v_dim_cap)
            for lo, hi in jobs
        ]

    solutions: List[Tuple[Tuple[int, ...], Tuple[int, ...]]] = []
    family_us: List[int] = []
    for us, vs, fams in chunk_results:
        start = 0
        while start < len(us):
            stop = start
            while stop < len(us) and us[stop] == us[start]:
                stop += 1
            for v in sorted(vs[start:stop]):
                solutions.append((_bits(us[start], m), _bits(v, n)))
            start = stop
        family_us.extend(fams)

    families = []
    for u in sorted(family_us):
        consistent, pivots, free = _f2kernel.solve_single_u(ptr, cols, masks, rhs, n, u)
        particular = 0
        for col, row in pivots:
            if (row >> n) & 1:
                particular |= 1 << col
        basis = []
        for f in free:
            vec = 1 << f
            for col, row in pivots:
                if (row >> f) & 1:
                    vec |= 1 << col
            basis.append(_bits(vec, n))
        families.append(F2Family(_bits(u, m), _bits(particular, n), tuple(basis)))
    return F2SearchResult(m, n, tuple(solutions), tuple(families))
