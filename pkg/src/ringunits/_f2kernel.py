"""Bit-packed GF(2) linear solving behind the exhaustive unit search.

For a fixed left vector u the product equations become a linear system in
v; each row packs the v-coefficients into the low bits of an integer with
the right-hand side in bit n.  The sparse structure (equation, column,
mask of contributing u-bits) is CSR-encoded so a row build touches only
the pairs that exist.  A numba kernel is the fast path (nogil, so chunks
run in real threads); the pure-Python twin has identical semantics and
serves as the fallback and the reference for tests.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        return wrap


def _scan_chunk_impl(
    eq_ptr,
    eq_col,
    eq_mask,
    rhs,
    n,
    u_start,
    u_end,
    parity_req,
    pair_a,
    pair_b,
    maxdim,
    out_u,
    out_v,
    fam_u,
):
    count = 0
    fam = 0
    n_eq = rhs.shape[0]
    rhs_bit = 1 << n
    pivcol = np.empty(n, np.int64)
    pivrow = np.empty(n, np.int64)
    freecols = np.empty(n, np.int64)
    for u in range(u_start, u_end):
        if parity_req >= 0:
            x = u
            x ^= x >> 16
            x ^= x >> 8
            x ^= x >> 4
            x ^= x >> 2
            x ^= x >> 1
            if x & 1 != parity_req:
                continue
        ok = True
        for k in range(pair_a.shape[0]):
            if ((u >> pair_a[k]) & 1) != ((u >> pair_b[k]) & 1):
                ok = False
                break
        if not ok:
            continue

        npiv = 0
        inconsistent = False
        for e in range(n_eq):
            row = 0
            for idx in range(eq_ptr[e], eq_ptr[e + 1]):
                x = eq_mask[idx] & u
                if x != 0:
                    x ^= x >> 16
                    x ^= x >> 8
                    x ^= x >> 4
                    x ^= x >> 2
                    x ^= x >> 1
                    if x & 1:
                        row |= 1 << eq_col[idx]
            if rhs[e]:
                row |= rhs_bit
            for k in range(npiv):
                if (row >> pivcol[k]) & 1:
                    row ^= pivrow[k]
            if row == 0:
                continue
            if row == rhs_bit:
                inconsistent = True
                break
            c = 0
            while (row >> c) & 1 == 0:
                c += 1
            for k in range(npiv):
                if (pivrow[k] >> c) & 1:
                    pivrow[k] ^= row
            pivcol[npiv] = c
            pivrow[npiv] = row
            npiv += 1
        if inconsistent:
            continue

        dim = n - npiv
        if dim > maxdim:
            if fam >= fam_u.shape[0]:
                return count, fam, 1
            fam_u[fam] = u
            fam += 1
            continue

        nf = 0
        for c in range(n):
            used = False
            for k in range(npiv):
                if pivcol[k] == c:
                    used = True
                    break
            if not used:
                freecols[nf] = c
                nf += 1
        for fa in range(1 << nf):
            v = 0
            for b in range(nf):
                if (fa >> b) & 1:
                    v |= 1 << freecols[b]
            for k in range(npiv):
                r = pivrow[k]
                val = (r >> n) & 1
                z = r & v
                z ^= z >> 32
                z ^= z >> 16
                z ^= z >> 8
                z ^= z >> 4
                z ^= z >> 2
                z ^= z >> 1
                val ^= z & 1
                if val:
                    v |= 1 << pivcol[k]
            if count >= out_u.shape[0]:
                return count, fam, 1
            out_u[count] = u
            out_v[count] = v
            count += 1
    return count, fam, 0


scan_chunk_py = _scan_chunk_impl
scan_chunk = njit(nogil=True, cache=True)(_scan_chunk_impl) if HAVE_NUMBA else _scan_chunk_impl


def solve_single_u(eq_ptr, eq_col, eq_mask, rhs, n, u):
    """Reference solve for one u: (consistent, pivots [(col,row)], free columns)."""
    pivots = []
    rhs_bit = 1 << n
    for e in range(rhs.shape[0]):
        row = 0
        for idx in range(eq_ptr[e], eq_ptr[e + 1]):
            x = int(eq_mask[idx]) & u
            if x and bin(x).count("1") & 1:
                row |= 1 << int(eq_col[idx])
        if rhs[e]:
            row |= rhs_bit
        for col, prow in pivots:
            if (row >> col) & 1:
                row ^= prow
        if row == 0:
            continue
        if row == rhs_bit:
            return False, [], []
        c = (row & -row).bit_length() - 1
        pivots = [(col, prow ^ row if (prow >> c) & 1 else prow) for col, prow in pivots]
        pivots.append((c, row))
    used = {col for col, _ in pivots}
    return True, pivots, [c for c in range(n) if c not in used]
