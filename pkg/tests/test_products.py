"""Product multiplicities, unique-product CNF encoding, and the F2 unit search."""

import pathlib
import random

import numpy as np
import pytest

from ringunits._f2kernel import HAVE_NUMBA, scan_chunk_py, solve_single_u
from ringunits.groupring import F2_RING, GroupRingElem, verify_unit
from ringunits.products import (
    CnfFormula,
    ResourceBoundError,
    _build_csr,
    encode_two_unique_product_cnf,
    exhaustive_subpair_check,
    has_unique_product,
    multiplicity_table,
    search_units_f2,
    solve_cnf_naive,
)

DATA = pathlib.Path(__file__).parent / "data"

WORD_POOL = (
    "1", "x", "x^-1", "y", "y^-1", "z", "z^-1", "a", "b", "a*b",
    "x*a", "x*b", "y*a", "y*b", "x*y", "z*a*b", "x^-1*b", "y^-1*a",
)


def _elements(group, words):
    return [group.element(w) for w in words]


def _random_supports(rng, group, max_each=5):
    na = rng.randint(1, max_each)
    nb = rng.randint(1, max_each)
    a = _elements(group, rng.sample(WORD_POOL, na))
    b = _elements(group, rng.sample(WORD_POOL, nb))
    return a, b


def _oracle_multiplicities(a, b):
    counts = {}
    for i, g in enumerate(a, start=1):
        for j, h in enumerate(b, start=1):
            counts.setdefault(g * h, []).append((i, j))
    return counts


# -- multiplicity tables


def test_multiplicity_matches_oracle(group_p):
    rng = random.Random(601)
    for _ in range(25):
        a, b = _random_supports(rng, group_p)
        table = multiplicity_table(a, b)
        oracle = _oracle_multiplicities(a, b)
        assert len(table) == len(oracle)
        for w, pairs in table.as_dict().items():
            assert tuple(oracle[w]) == pairs
        assert table.min_multiplicity() == min(len(v) for v in oracle.values())


def test_multiplicity_table_is_sorted(group_p):
    rng = random.Random(602)
    a, b = _random_supports(rng, group_p, max_each=6)
    table = multiplicity_table(a, b)
    elems = [w for w, _ in table.table]
    assert elems == sorted(elems)


def test_catalog_multiplicities(supports):
    table = multiplicity_table(supports.left_elements(), supports.right_elements())
    assert len(table) == 121
    assert table.identity_pairs() == 17
    assert table.min_multiplicity() == 2


def test_supports_must_be_distinct_and_nonempty(group_p):
    x = group_p.element("x")
    with pytest.raises(ValueError):
        multiplicity_table([x, x], [x])
    with pytest.raises(ValueError):
        multiplicity_table([], [x])


def test_has_unique_product(group_p, supports):
    assert has_unique_product(supports.left_elements(), supports.right_elements()) is None
    a = _elements(group_p, ["1", "x"])
    found = has_unique_product(a, a)
    assert found is not None
    w, i, j = found
    assert a[i - 1] * a[j - 1] == w
    assert len(_oracle_multiplicities(a, a)[w]) == 1


def test_has_unique_product_consistency(group_p):
    rng = random.Random(603)
    for _ in range(25):
        a, b = _random_supports(rng, group_p)
        table = multiplicity_table(a, b)
        found = has_unique_product(a, b)
        assert (found is None) == (table.min_multiplicity() >= 2)


# -- CNF encoding


def _validate_dimacs(text):
    """Strict format check; returns (nvars, clauses)."""
    lines = text.splitlines()
    k = 0
    while lines[k].startswith("c"):
        k += 1
    header = lines[k].split()
    assert header[:2] == ["p", "cnf"]
    nvars, nclauses = int(header[2]), int(header[3])
    clauses = []
    for line in lines[k + 1:]:
        lits = [int(tok) for tok in line.split()]
        assert lits[-1] == 0 and 0 not in lits[:-1]
        assert all(1 <= abs(l) <= nvars for l in lits[:-1])
        clauses.append(tuple(lits[:-1]))
    assert len(clauses) == nclauses
    return nvars, clauses


def test_catalog_cnf_counts(supports):
    cnf = encode_two_unique_product_cnf(supports.left_elements(), supports.right_elements())
    assert cnf.nvars == 42 + 441
    assert len(cnf.clauses) == 3 * 441 + 441 + 2 + 1


def test_catalog_cnf_dimacs_golden(supports):
    cnf = encode_two_unique_product_cnf(
        supports.left_elements(),
        supports.right_elements(),
        left_labels=[str(w) for w in supports.left_words],
        right_labels=[str(w) for w in supports.right_words],
    )
    text = cnf.to_dimacs()
    assert text == (DATA / "catalog.cnf").read_text()
    nvars, clauses = _validate_dimacs(text)
    assert (nvars, len(clauses)) == (483, 1767)


def test_dimacs_legend_lines(group_p):
    a = _elements(group_p, ["1", "x"])
    b = _elements(group_p, ["1", "y"])
    cnf = encode_two_unique_product_cnf(a, b, left_labels=["1", "x"], right_labels=["1", "y"])
    comments = [l for l in cnf.to_dimacs().splitlines() if l.startswith("c ")]
    assert any("left membership x" in l for l in comments)
    assert any("right membership y" in l for l in comments)
    assert any("auxiliary" in l for l in comments)


def test_cnf_singleton_pair_unsat(group_p):
    one = [group_p.identity()]
    cnf = encode_two_unique_product_cnf(one, one)
    assert solve_cnf_naive(cnf) is None


def test_cnf_z_interval_unsat(group_p):
    a = _elements(group_p, ["1", "x"])
    cnf = encode_two_unique_product_cnf(a, a)
    assert solve_cnf_naive(cnf) is None


def test_cnf_agrees_with_exhaustive_on_corpus(group_p):
    rng = random.Random(604)
    checked = 0
    while checked < 20:
        a, b = _random_supports(rng, group_p)
        if len(a) + len(b) > 10:
            continue
        checked += 1
        verdict = exhaustive_subpair_check(a, b)
        model = solve_cnf_naive(encode_two_unique_product_cnf(a, b))
        assert (model is None) == verdict.all_have_unique_product
        if model is not None:
            # the satisfying assignment names a genuinely bad subpair
            sel_a = [a[i] for i in range(len(a)) if model.get(i + 1)]
            sel_b = [b[j] for j in range(len(b)) if model.get(len(a) + j + 1)]
            assert sel_a and sel_b
            assert min(len(v) for v in _oracle_multiplicities(sel_a, sel_b).values()) >= 2


def test_solve_cnf_naive_var_limit():
    cnf = CnfFormula(100, ((1, 2),), ())
    with pytest.raises(ResourceBoundError):
        solve_cnf_naive(cnf)


# -- exhaustive subpair scan


def test_exhaustive_abelian_examples(group_p):
    a = _elements(group_p, ["1", "x", "x^2"])
    assert exhaustive_subpair_check(a, a).all_have_unique_product
    b = _elements(group_p, ["1", "y"])
    assert exhaustive_subpair_check([group_p.identity()], b).all_have_unique_product


def test_exhaustive_cap(supports):
    with pytest.raises(ResourceBoundError):
        exhaustive_subpair_check(supports.left_elements(), supports.right_elements())


# -- F2 unit search


def _oracle_search(a, b):
    m, n = len(a), len(b)
    found = []
    for u in range(1, 1 << m):
        for v in range(1 << n):
            prods = {}
            for i in range(m):
                if not (u >> i) & 1:
                    continue
                for j in range(n):
                    if not (v >> j) & 1:
                        continue
                    w = a[i] * b[j]
                    prods[w] = prods.get(w, 0) ^ 1
            survivors = {w for w, c in prods.items() if c}
            if len(survivors) == 1 and next(iter(survivors)).is_identity():
                found.append((
                    tuple((u >> i) & 1 for i in range(m)),
                    tuple((v >> j) & 1 for j in range(n)),
                ))
    return found


def test_search_trivial_cases(group_p):
    one = [group_p.identity()]
    res = search_units_f2(one, one)
    assert [(s[0], s[1]) for s in res.solutions] == [((1,), (1,))]
    # identity absent from the product set: no solutions at all
    res2 = search_units_f2(_elements(group_p, ["x"]), _elements(group_p, ["y"]))
    assert len(res2.solutions) == 0 and len(res2.families) == 0


def test_search_inverse_pair_supports(group_p):
    # both singleton sub-supports give trivial units
    res = search_units_f2(_elements(group_p, ["1", "x"]), _elements(group_p, ["1", "x^-1"]))
    assert [(s[0], s[1]) for s in res.solutions] == [((1, 0), (1, 0)), ((0, 1), (0, 1))]


def test_search_matches_bruteforce_oracle(group_p):
    rng = random.Random(605)
    for _ in range(12):
        a, b = _random_supports(rng, group_p, max_each=4)
        got = sorted((s[0], s[1]) for s in search_units_f2(a, b).solutions)
        expected = sorted(_oracle_search(a, b))
        assert got == expected


def test_search_solutions_are_units(group_p):
    rng = random.Random(606)
    for _ in range(8):
        a, b = _random_supports(rng, group_p, max_each=4)
        for u, v in [(s[0], s[1]) for s in search_units_f2(a, b).solutions]:
            ea = GroupRingElem(group_p, F2_RING,
                               {a[i]: F2_RING.one() for i in range(len(a)) if u[i]})
            eb = GroupRingElem(group_p, F2_RING,
                               {b[j]: F2_RING.one() for j in range(len(b)) if v[j]})
            assert verify_unit(ea, eb)


def test_search_relabeling_invariance(group_p):
    rng = random.Random(607)
    a, b = _random_supports(rng, group_p, max_each=5)
    perm = list(range(len(a)))
    rng.shuffle(perm)
    a2 = [a[p] for p in perm]
    base = {(s[0], s[1]) for s in search_units_f2(a, b).solutions}
    permuted = {(s[0], s[1]) for s in search_units_f2(a2, b).solutions}
    unshuffled = {(tuple(u[perm.index(i)] for i in range(len(a))), v) for u, v in base}
    assert permuted == unshuffled


def test_search_ordering_is_u_ascending(group_p):
    a = _elements(group_p, ["1", "x", "y", "x*y"])
    res = search_units_f2(a, a)
    keys = [sum(bit << i for i, bit in enumerate(s[0])) for s in res.solutions]
    assert keys == sorted(keys)


def test_search_bounds(group_p):
    big = [group_p.element(f"x^{k}") for k in range(25)]
    with pytest.raises(ResourceBoundError):
        search_units_f2(big, [group_p.identity()])


def test_search_thread_determinism(group_p):
    rng = random.Random(608)
    words = rng.sample(WORD_POOL, 12)
    a = _elements(group_p, words)
    single = search_units_f2(a, a, threads=1)
    for threads in (2, 5):
        multi = search_units_f2(a, a, threads=threads)
        assert multi.solutions == single.solutions
        assert multi.families == single.families


def test_symmetric_pair_filter_restricts(supports):
    pairing = ((2, 3), (4, 5), (6, 7), (8, 9), (10, 11), (12, 13),
               (14, 15), (16, 17), (18, 19), (20, 21))
    full = search_units_f2(supports.left_elements(), supports.right_elements(), threads=2)
    sym = search_units_f2(supports.left_elements(), supports.right_elements(),
                          threads=2, symmetric_pairs=pairing)
    assert set(sym.solutions) <= set(full.solutions)
    for u, _ in [(s[0], s[1]) for s in sym.solutions]:
        assert all(u[i - 1] == u[j - 1] for i, j in pairing)


# -- the packed-bit kernel itself


def test_solve_single_u_reference(group_p):
    a = _elements(group_p, ["1", "x"])
    b = _elements(group_p, ["1", "x^-1"])
    present, ptr, cols, masks, rhs = _build_csr(a, b)
    assert present
    consistent, pivots, free = solve_single_u(ptr, cols, masks, rhs, len(b), 0b01)
    assert consistent and free == []
    consistent, _, _ = solve_single_u(ptr, cols, masks, rhs, len(b), 0b11)
    assert not consistent  # a two-term Laurent series is not a unit


def test_scan_chunk_python_path(group_p):
    a = _elements(group_p, ["1", "x", "y"])
    present, ptr, cols, masks, rhs = _build_csr(a, a)
    n = 3
    out_u = np.zeros(64, np.int64)
    out_v = np.zeros(64, np.int64)
    fam_u = np.zeros(64, np.int64)
    count, fam, overflow = scan_chunk_py(
        ptr, cols, masks, rhs, n, 1, 1 << 3, 1,
        np.zeros(0, np.int64), np.zeros(0, np.int64), 8, out_u, out_v, fam_u,
    )
    assert overflow == 0 and fam == 0
    got = {(int(out_u[k]), int(out_v[k])) for k in range(count)}
    assert got == {(0b001, 0b001)}  # only the identity singleton survives


def test_scan_chunk_family_path():
    # synthetic singular system: one equation over 2 unknowns, v1 ^ v2 = 0,
    # consistent for every u with a one-dimensional solution space
    ptr = np.array([0, 2], np.int64)
    cols = np.array([0, 1], np.int64)
    masks = np.array([1, 1], np.int64)
    rhs = np.array([0], np.int64)
    out_u = np.zeros(16, np.int64)
    out_v = np.zeros(16, np.int64)
    fam_u = np.zeros(16, np.int64)
    count, fam, overflow = scan_chunk_py(
        ptr, cols, masks, rhs, 2, 1, 2, 1,
        np.zeros(0, np.int64), np.zeros(0, np.int64), 0, out_u, out_v, fam_u,
    )
    assert (count, overflow) == (0, 0)
    assert fam == 1 and fam_u[0] == 1
    consistent, pivots, free = solve_single_u(ptr, cols, masks, rhs, 2, 1)
    assert consistent and len(free) == 1


@pytest.mark.skipif(not HAVE_NUMBA, reason="compiled kernel unavailable")
def test_compiled_kernel_matches_python(group_p):
    from ringunits._f2kernel import scan_chunk

    rng = random.Random(609)
    a, b = _random_supports(rng, group_p, max_each=5)
    present, ptr, cols, masks, rhs = _build_csr(a, b)
    if not present:
        return
    n = len(b)
    args = (ptr, cols, masks, rhs, n, 1, 1 << len(a), 1,
            np.zeros(0, np.int64), np.zeros(0, np.int64), 8)
    buf = lambda: (np.zeros(4096, np.int64), np.zeros(4096, np.int64), np.zeros(4096, np.int64))
    u1, v1, f1 = buf()
    c1 = scan_chunk_py(*args, u1, v1, f1)
    u2, v2, f2 = buf()
    c2 = scan_chunk(*args, u2, v2, f2)
    assert c1 == c2
    assert np.array_equal(u1, u2) and np.array_equal(v1, v2)
