"""Bit-packed GF(2) and stabilizer-tableau update kernels.

Tableau rows are kept in two packed layouts at once: row-major masks
``X, Z`` of shape ``(2n, Wn)`` for cheap row arithmetic, and a column
mirror ``TX, TZ`` of shape ``(n, Rw)`` holding the same bits transposed,
so that anticommutation of a weight-w operator against all rows costs
O(w * Rw) words instead of a scan over every row. Every mutating kernel
keeps the two layouts consistent.

Row layout convention (R = 2n rows, k active stabilizers):
    [0, k)        stabilizer generators
    [k, n)        logical-X completions
    [n, n+k)      destabilizer partners of the stabilizers
    [n+k, 2n)     logical-Z partners of the completions
The symplectic pairing is row i vs row n+i; all other pairs commute.
``live`` is a packed row bitset: rows outside it are stale storage and
are never read (lightweight states drop the destabilizer half).

Packed bitsets over rows (``signs``, ``live``, anticommutation masks)
index row r at word r >> 6, bit r & 63, matching the mirror columns.
"""

import numpy as np
from numba import njit

BITS = 64

_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)
_ONE = np.uint64(1)
_ZERO = np.uint64(0)
_FULL = np.uint64(0xFFFFFFFFFFFFFFFF)
_TWO = np.uint64(2)
_THREE = np.uint64(3)


def n_words(bits: int) -> int:
    return (bits + BITS - 1) // BITS


@njit(cache=True, inline="always")
def _pc(x):
    # SWAR popcount; numba has no portable intrinsic for this.
    x = x - ((x >> _ONE) & _M1)
    x = (x & _M2) + ((x >> _TWO) & _M2)
    x = (x + (x >> np.uint64(4))) & _M4
    return (x * _H01) >> np.uint64(56)


@njit(cache=True, inline="always")
def _get_bit(bs, i):
    return np.int64((bs[i >> 6] >> np.uint64(i & 63)) & _ONE)


@njit(cache=True, inline="always")
def _set_bit(bs, i, v):
    m = _ONE << np.uint64(i & 63)
    if v:
        bs[i >> 6] |= m
    else:
        bs[i >> 6] &= ~m


@njit(cache=True, inline="always")
def _first_set(bs, lo, hi):
    """Index of the first set bit in [lo, hi), or -1."""
    if lo >= hi:
        return np.int64(-1)
    wlo = lo >> 6
    whi = (hi - 1) >> 6
    for wi in range(wlo, whi + 1):
        w = bs[wi]
        if wi == wlo:
            w &= _FULL << np.uint64(lo & 63)
        if wi == whi and (hi & 63) != 0:
            w &= _FULL >> np.uint64(64 - (hi & 63))
        if w != _ZERO:
            b = w & (~w + _ONE)
            return np.int64(wi * 64) + np.int64(_pc(b - _ONE))
    return np.int64(-1)


@njit(cache=True, inline="always")
def _phase4(ax, az, bx, bz, Wn):
    """Exponent e of i in the Pauli product a*b, mod 4.

    Per-qubit convention P(x, z) = i^(x.z) X^x Z^z, accumulated across
    the whole register: e = sum(x1 z1) + sum(x2 z2) + 2 sum(z1 x2)
    - sum((x1^x2)(z1^z2)) mod 4.
    """
    e = _ZERO
    for w in range(Wn):
        e += _pc(ax[w] & az[w])
        e += _pc(bx[w] & bz[w])
        e += _TWO * _pc(az[w] & bx[w])
        e += _THREE * _pc((ax[w] ^ bx[w]) & (az[w] ^ bz[w]))
    return np.int64(e & _THREE)


@njit(cache=True, inline="always")
def _anticommutes_rows(ax, az, bx, bz, Wn):
    acc = _ZERO
    for w in range(Wn):
        acc ^= _pc((ax[w] & bz[w]) ^ (az[w] & bx[w])) & _ONE
    return np.int64(acc)


@njit(cache=True)
def detect_anti(TX, TZ, Rw, supp, sx, sz, nsupp, anti):
    """Packed row bitset of rows anticommuting with the operator.

    The operator is given by its support qubits and per-qubit letter
    bits; only O(nsupp * Rw) words are touched.
    """
    for wi in range(Rw):
        anti[wi] = _ZERO
    for s in range(nsupp):
        q = supp[s]
        if sz[s]:
            for wi in range(Rw):
                anti[wi] ^= TX[q, wi]
        if sx[s]:
            for wi in range(Rw):
                anti[wi] ^= TZ[q, wi]


@njit(cache=True)
def classify_kernel(TX, TZ, live, n, k, Rw, supp, sx, sz, nsupp, anti):
    """Case a measurement would take: 0 / 2 random, 1 deterministic."""
    detect_anti(TX, TZ, Rw, supp, sx, sz, nsupp, anti)
    for wi in range(Rw):
        anti[wi] &= live[wi]
    if _first_set(anti, 0, k) >= 0:
        return 0
    if _first_set(anti, k, n) >= 0 or _first_set(anti, n + k, 2 * n) >= 0:
        return 2
    return 1


@njit(cache=True)
def _swap_rows(X, Z, TX, TZ, signs, live, anti, n, Wn, a, b):
    if a == b:
        return
    for w in range(Wn):
        t = X[a, w]
        X[a, w] = X[b, w]
        X[b, w] = t
        t = Z[a, w]
        Z[a, w] = Z[b, w]
        Z[b, w] = t
    wa = a >> 6
    ba = np.uint64(a & 63)
    wb = b >> 6
    bb = np.uint64(b & 63)
    ma = _ONE << ba
    mb = _ONE << bb
    for q in range(n):
        if ((TX[q, wa] >> ba) ^ (TX[q, wb] >> bb)) & _ONE:
            TX[q, wa] ^= ma
            TX[q, wb] ^= mb
        if ((TZ[q, wa] >> ba) ^ (TZ[q, wb] >> bb)) & _ONE:
            TZ[q, wa] ^= ma
            TZ[q, wb] ^= mb
    for bs in (signs, live, anti):
        va = _get_bit(bs, a)
        vb = _get_bit(bs, b)
        if va != vb:
            bs[wa] ^= ma
            bs[wb] ^= mb


@njit(cache=True)
def _write_row(X, Z, TX, TZ, Wn, r, newx, newz):
    """Replace row r, updating only the mirror columns that change."""
    wr = r >> 6
    bit = _ONE << np.uint64(r & 63)
    for w in range(Wn):
        dx = X[r, w] ^ newx[w]
        base = w << 6
        while dx != _ZERO:
            b = dx & (~dx + _ONE)
            TX[base + np.int64(_pc(b - _ONE)), wr] ^= bit
            dx ^= b
        X[r, w] = newx[w]
        dz = Z[r, w] ^ newz[w]
        while dz != _ZERO:
            b = dz & (~dz + _ONE)
            TZ[base + np.int64(_pc(b - _ONE)), wr] ^= bit
            dz ^= b
        Z[r, w] = newz[w]


@njit(cache=True)
def _sweep_pivot(X, Z, TX, TZ, signs, k, Wn, Rw, anti, pvx, pvz, psign, full):
    """Multiply every row flagged in `anti` by the pivot row.

    Sign bookkeeping is restricted to stabilizer rows (r < k); partner
    and completion rows have no physical sign. The pivot's own bit must
    already be cleared from `anti`.
    """
    for wi in range(Rw):
        w = anti[wi]
        while w != _ZERO:
            b = w & (~w + _ONE)
            r = np.int64(wi * 64) + np.int64(_pc(b - _ONE))
            if full and r < k:
                e4 = _phase4(X[r], Z[r], pvx, pvz, Wn)
                if ((e4 >> 1) ^ psign) & 1:
                    signs[wi] ^= b
            for w2 in range(Wn):
                X[r, w2] ^= pvx[w2]
                Z[r, w2] ^= pvz[w2]
            w ^= b
    # mirror: every qubit in the pivot's support picks up the same row set
    for w2 in range(Wn):
        base = w2 << 6
        t = pvx[w2]
        while t != _ZERO:
            b = t & (~t + _ONE)
            q = base + np.int64(_pc(b - _ONE))
            for wi in range(Rw):
                TX[q, wi] ^= anti[wi]
            t ^= b
        t = pvz[w2]
        while t != _ZERO:
            b = t & (~t + _ONE)
            q = base + np.int64(_pc(b - _ONE))
            for wi in range(Rw):
                TZ[q, wi] ^= anti[wi]
            t ^= b


@njit(cache=True)
def measure_core(X, Z, TX, TZ, signs, live, n, k, Wn, Rw,
                 opx, opz, opsign, supp, sx, sz, nsupp,
                 coin, forced, want_outcome, full,
                 anti, accx, accz):
    """Project onto a Pauli operator. Returns (k', case, outbit, status).

    case: 0 random replacing a generator, 1 deterministic, 2 random
    extending the group. outbit 0/1 encodes outcome +1/-1 (meaningful
    for random cases always; for the deterministic case only when
    want_outcome and full). forced: -1 take the coin, else 0/1 demand
    that outcome. status: 0 ok, 1 forced outcome contradicts a
    deterministic one, 2 forcing requires sign tracking.
    """
    detect_anti(TX, TZ, Rw, supp, sx, sz, nsupp, anti)
    for wi in range(Rw):
        anti[wi] &= live[wi]

    p = _first_set(anti, 0, k)
    if p >= 0:
        # case (i): random, pivot generator replaced by the operator
        outbit = coin if forced < 0 else forced
        if forced >= 0 and not full:
            return k, 0, 0, 2
        _set_bit(anti, p, 0)
        psign = _get_bit(signs, p)
        _sweep_pivot(X, Z, TX, TZ, signs, k, Wn, Rw, anti, X[p], Z[p], psign, full)
        if full:
            _write_row(X, Z, TX, TZ, Wn, n + p, X[p], Z[p])
        _write_row(X, Z, TX, TZ, Wn, p, opx, opz)
        _set_bit(signs, p, outbit ^ opsign)
        return k, 0, outbit, 0

    r = _first_set(anti, k, n)
    if r < 0:
        r = _first_set(anti, n + k, 2 * n)
    if r >= 0:
        # case (iii): random, a completion pair is promoted
        outbit = coin if forced < 0 else forced
        if forced >= 0 and not full:
            return k, 2, 0, 2
        if r < n:
            # make the pivot the Z-slot row of its pair
            _swap_rows(X, Z, TX, TZ, signs, live, anti, n, Wn, r, n + r)
            j0 = r
        else:
            j0 = r - n
        if j0 != k:
            _swap_rows(X, Z, TX, TZ, signs, live, anti, n, Wn, j0, k)
            _swap_rows(X, Z, TX, TZ, signs, live, anti, n, Wn, n + j0, n + k)
        _set_bit(anti, n + k, 0)
        _set_bit(anti, k, 0)  # slot k is overwritten below, never swept
        _sweep_pivot(X, Z, TX, TZ, signs, k, Wn, Rw, anti, X[n + k], Z[n + k], 0, full)
        _write_row(X, Z, TX, TZ, Wn, k, opx, opz)
        _set_bit(signs, k, outbit ^ opsign)
        if not full:
            _set_bit(live, n + k, 0)
        return k + 1, 2, outbit, 0

    # case (ii): deterministic, state unchanged
    if not want_outcome and forced < 0:
        return k, 1, 0, 0
    if not full:
        return k, 1, 0, 2
    for w in range(Wn):
        accx[w] = _ZERO
        accz[w] = _ZERO
    e = np.int64(0)
    sgn = np.int64(0)
    for wi in range(n >> 6, ((n + k - 1) >> 6) + 1 if k > 0 else (n >> 6)):
        w = anti[wi]
        if wi == (n >> 6):
            w &= _FULL << np.uint64(n & 63)
        hi = n + k
        if wi == ((hi - 1) >> 6) and (hi & 63) != 0:
            w &= _FULL >> np.uint64(64 - (hi & 63))
        while w != _ZERO:
            b = w & (~w + _ONE)
            j = np.int64(wi * 64) + np.int64(_pc(b - _ONE)) - n
            e = (e + _phase4(accx, accz, X[j], Z[j], Wn)) & 3
            for w2 in range(Wn):
                accx[w2] ^= X[j, w2]
                accz[w2] ^= Z[j, w2]
            sgn ^= _get_bit(signs, j)
            w ^= b
    ok = (e & 1) == 0
    for w in range(Wn):
        if accx[w] != opx[w] or accz[w] != opz[w]:
            ok = False
    if not ok:
        return k, 1, 0, 3
    outbit = sgn ^ (e >> 1) ^ opsign
    if forced >= 0 and forced != outbit:
        return k, 1, outbit, 1
    return k, 1, outbit, 0


@njit(cache=True)
def sweep_kernel(X, Z, TX, TZ, signs, live, n, k, Wn, Rw,
                 opx_tab, opz_tab, supp_tab, sx_tab, sz_tab, nsupp_tab,
                 thresholds, type_draws, loc_draws, out_bits, out_pos,
                 full, anti, accx, accz, counts):
    """Run one block of microsteps; returns (k', out_pos', status).

    Operator tables are indexed [type, location]; type 0 is the
    plaquette interaction, 1..3 the x/y/z bond checks. Each microstep
    consumes type_draws[m] against the cumulative thresholds and
    loc_draws[m]; random measurement outcomes consume out_bits
    sequentially from out_pos, deterministic ones consume nothing.
    """
    for m in range(type_draws.shape[0]):
        t = type_draws[m]
        ty = 0
        if t >= thresholds[0]:
            ty = 1
        if t >= thresholds[1]:
            ty = 2
        if t >= thresholds[2]:
            ty = 3
        loc = loc_draws[m]
        counts[ty] += 1
        k, case, _, status = measure_core(
            X, Z, TX, TZ, signs, live, n, k, Wn, Rw,
            opx_tab[ty, loc], opz_tab[ty, loc], 0,
            supp_tab[ty, loc], sx_tab[ty, loc], sz_tab[ty, loc], nsupp_tab[ty],
            np.int64(_get_bit(out_bits, out_pos)), -1, False, full,
            anti, accx, accz)
        if case != 1:
            out_pos += 1
        if status != 0:
            return k, out_pos, status
    return k, out_pos, 0


@njit(cache=True)
def apply_h(X, Z, TX, TZ, signs, n, Rw, q):
    # X <-> Z on qubit q; sign flips where both bits are set (Y -> -Y).
    for wi in range(Rw):
        signs[wi] ^= TX[q, wi] & TZ[q, wi]
        t = TX[q, wi]
        TX[q, wi] = TZ[q, wi]
        TZ[q, wi] = t
    wq = q >> 6
    mq = _ONE << np.uint64(q & 63)
    for wi in range(Rw):
        d = TX[q, wi] ^ TZ[q, wi]
        base = wi << 6
        while d != _ZERO:
            b = d & (~d + _ONE)
            r = base + np.int64(_pc(b - _ONE))
            X[r, wq] ^= mq
            Z[r, wq] ^= mq
            d ^= b


@njit(cache=True)
def apply_s(X, Z, TX, TZ, signs, n, Rw, q):
    # Z ^= X on qubit q; sign flips where both bits were set (Y -> -X).
    wq = q >> 6
    mq = _ONE << np.uint64(q & 63)
    for wi in range(Rw):
        signs[wi] ^= TX[q, wi] & TZ[q, wi]
        t = TX[q, wi]
        TZ[q, wi] ^= t
        base = wi << 6
        while t != _ZERO:
            b = t & (~t + _ONE)
            Z[base + np.int64(_pc(b - _ONE)), wq] ^= mq
            t ^= b


@njit(cache=True)
def apply_cnot(X, Z, TX, TZ, signs, n, Rw, c, t):
    # x_t ^= x_c, z_c ^= z_t; sign flips iff x_c z_t (x_t ^ z_c ^ 1).
    wc = c >> 6
    mc = _ONE << np.uint64(c & 63)
    wt = t >> 6
    mt = _ONE << np.uint64(t & 63)
    for wi in range(Rw):
        xc = TX[c, wi]
        zt = TZ[t, wi]
        signs[wi] ^= xc & zt & ~(TX[t, wi] ^ TZ[c, wi])
        TX[t, wi] ^= xc
        TZ[c, wi] ^= zt
        base = wi << 6
        while xc != _ZERO:
            b = xc & (~xc + _ONE)
            X[base + np.int64(_pc(b - _ONE)), wt] ^= mt
            xc ^= b
        while zt != _ZERO:
            b = zt & (~zt + _ONE)
            Z[base + np.int64(_pc(b - _ONE)), wc] ^= mc
            zt ^= b


@njit(cache=True)
def mirror_from_rows(X, Z, n, R, TX, TZ):
    for q in range(n):
        for wi in range((R + 63) >> 6):
            TX[q, wi] = _ZERO
            TZ[q, wi] = _ZERO
    for r in range(R):
        wr = r >> 6
        mr = _ONE << np.uint64(r & 63)
        for w in range(X.shape[1]):
            base = w << 6
            t = X[r, w]
            while t != _ZERO:
                b = t & (~t + _ONE)
                TX[base + np.int64(_pc(b - _ONE)), wr] |= mr
                t ^= b
            t = Z[r, w]
            while t != _ZERO:
                b = t & (~t + _ONE)
                TZ[base + np.int64(_pc(b - _ONE)), wr] |= mr
                t ^= b


@njit(cache=True)
def gather_columns(X, Z, n_rows, order, out):
    """Column-permuted restriction: qubit order[i] lands in interleaved
    bit columns (2i, 2i+1) = (x, z) of the packed output matrix."""
    for i in range(out.shape[0]):
        for w in range(out.shape[1]):
            out[i, w] = _ZERO
    for i in range(order.shape[0]):
        q = order[i]
        wq = q >> 6
        mq = _ONE << np.uint64(q & 63)
        cx = 2 * i
        cz = 2 * i + 1
        wxm = _ONE << np.uint64(cx & 63)
        wzm = _ONE << np.uint64(cz & 63)
        for r in range(n_rows):
            if X[r, wq] & mq:
                out[r, cx >> 6] |= wxm
            if Z[r, wq] & mq:
                out[r, cz >> 6] |= wzm


@njit(cache=True)
def rank_profile(M, n_rows, n_cols, bounds, out_ranks):
    """In-place left-to-right elimination; records the rank of each
    column prefix listed in `bounds` (ascending, in bit columns)."""
    r = 0
    bi = 0
    for c in range(n_cols):
        while bi < bounds.shape[0] and bounds[bi] == c:
            out_ranks[bi] = r
            bi += 1
        w = c >> 6
        m = _ONE << np.uint64(c & 63)
        piv = -1
        for i in range(r, n_rows):
            if M[i, w] & m:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for w2 in range(w, M.shape[1]):
                t = M[r, w2]
                M[r, w2] = M[piv, w2]
                M[piv, w2] = t
        for i in range(r + 1, n_rows):
            if M[i, w] & m:
                for w2 in range(w, M.shape[1]):
                    M[i, w2] ^= M[r, w2]
        r += 1
        if r == n_rows:
            break
    # bounds at or past the stopping column all see the final rank
    while bi < bounds.shape[0]:
        out_ranks[bi] = r
        bi += 1
    return r
