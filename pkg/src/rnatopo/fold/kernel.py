"""Compiled four-index table fill.

The recursions are the ones enumerated in :mod:`grammar`, written out as
loops so they can be compiled.  ``mode`` selects the semiring:

0  sum-product over floats (Boltzmann weights, or plain counts)
1  min-plus over floats (free energies)
2  sum-product modulo the prime ``p`` over int64 (exact counting via CRT)

Every table is dense; mixed tables are indexed ``[i, j, h, l]`` over
``R[i,j) x S[h,l)`` and one-backbone gap tables ``[a, b, c, d]``.  ``G`` and
``GStar`` (and likewise ``Hy`` and ``HyStar``) obey the same recursion and
share one array.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(inline="always", cache=True)
def _add(mode, p, a, b):
    if mode == 1:
        return a if a <= b else b
    if mode == 2:
        return (a + b) % p
    return a + b


@njit(inline="always", cache=True)
def _mul(mode, p, a, b):
    if mode == 1:
        return a + b
    if mode == 2:
        return (a * b) % p
    return a * b


@njit(cache=True)
def fill_side(mode, p, n, w, v, st, upow, zero, one):
    dt = upow.dtype
    sec = np.full((n + 1, n + 1), zero, dtype=dt)
    secn = np.full((n + 1, n + 1), zero, dtype=dt)
    pair = np.full((n + 1, n + 1), zero, dtype=dt)
    secp = np.full((n + 1, n + 1), zero, dtype=dt)
    u1 = upow[1]
    for width in range(n + 1):
        for a in range(n - width + 1):
            b = a + width
            if width == 0:
                sec[a, b] = one
                secn[a, b] = one
                continue
            if width >= 2 and v[a, b - 1]:
                inner = secn[a + 1, b - 1]
                if width >= 4 and v[a + 1, b - 2]:
                    inner = _add(mode, p, inner, _mul(mode, p, st, pair[a + 1, b - 1]))
                pair[a, b] = _mul(mode, p, w[a, b - 1], inner)
            acc = _mul(mode, p, sec[a, b - 1], u1)
            accp = _mul(mode, p, secp[a, b - 1], u1)
            for k in range(a, b - 1):
                if v[k, b - 1]:
                    t = _mul(mode, p, sec[a, k], pair[k, b])
                    accp = _add(mode, p, accp, t)
                    if k > a:
                        acc = _add(mode, p, acc, t)
            secn[a, b] = acc
            secp[a, b] = accp
            sec[a, b] = _add(mode, p, acc, pair[a, b])

    gap = np.full((n + 1, n + 1, n + 1, n + 1), zero, dtype=dt)
    for width in range(2, n + 1):
        for wl in range(1, width):
            wr = width - wl
            for a in range(n + 1):
                b = a + wl
                for c in range(b, n + 1):
                    d = c + wr
                    if d > n:
                        break
                    if not v[a, d - 1]:
                        continue
                    acc = one if (b == a + 1 and c == d - 1) else zero
                    for x in range(a + 1, b):
                        for y in range(c + 1, d):
                            if not v[x, y - 1]:
                                continue
                            t = gap[x, b, c, y]
                            if x == a + 1 and y == d - 1:
                                t = _mul(mode, p, t, st)
                            else:
                                t = _mul(mode, p, t, _mul(mode, p, sec[a + 1, x], sec[y, d - 1]))
                            acc = _add(mode, p, acc, t)
                    gap[a, b, c, d] = _mul(mode, p, w[a, d - 1], acc)

    vt = np.full((n + 1, n + 1, n + 1, n + 1), zero, dtype=dt)
    for i in range(n + 1):
        for l in range(i + 1, n + 1):
            if not v[i, l - 1]:
                continue
            for j in range(i + 1, n + 1):
                for h in range(j, l):
                    acc = zero
                    for i1 in range(i + 1, j + 1):
                        for h1 in range(h, l):
                            if v[i1 - 1, h1]:
                                t = _mul(mode, p, gap[i, i1, h1, l], _mul(mode, p, sec[i1, j], sec[h, h1]))
                                acc = _add(mode, p, acc, t)
                    vt[i, j, h, l] = acc
    return sec, secn, pair, secp, gap, vt


@njit(cache=True)
def fill_mixed(mode, p, nr, ns, wx, vx, stx, upow, zero, one,
               sec_r, secp_r, vt_r, sec_s, secp_s, vt_s):
    dt = upow.dtype
    shape = (nr + 1, nr + 1, ns + 1, ns + 1)
    hy = np.full(shape, zero, dtype=dt)
    hs = np.full(shape, zero, dtype=dt)
    hsl = np.full(shape, zero, dtype=dt)
    uu = np.full(shape, zero, dtype=dt)
    xx = np.full(shape, zero, dtype=dt)
    ww = np.full(shape, zero, dtype=dt)
    yy = np.full(shape, zero, dtype=dt)
    tt = np.full(shape, zero, dtype=dt)
    ptt = np.full(shape, zero, dtype=dt)
    pth = np.full(shape, zero, dtype=dt)
    pt = np.full(shape, zero, dtype=dt)
    inh = np.full(shape, zero, dtype=dt)
    ii = np.full(shape, zero, dtype=dt)

    for width in range(nr + ns + 1):
        for dr in range(min(width, nr) + 1):
            ds = width - dr
            if ds > ns:
                continue
            for i in range(nr - dr + 1):
                j = i + dr
                for h in range(ns - ds + 1):
                    l = h + ds
                    # hybrids
                    if dr > 0 and ds > 0 and vx[i, l - 1]:
                        acc = one if (dr == 1 and ds == 1) else zero
                        for i1 in range(i + 1, j):
                            for l1 in range(h + 1, l):
                                if vx[i1, l1 - 1]:
                                    t = _mul(mode, p, hy[i1, j, h, l1], upow[(i1 - i - 1) + (l - 1 - l1)])
                                    if i1 == i + 1 and l1 == l - 1:
                                        t = _mul(mode, p, t, stx)
                                    acc = _add(mode, p, acc, t)
                        hy[i, j, h, l] = _mul(mode, p, wx[i, l - 1], acc)
                    # exterior class
                    if dr > 0 and ds > 0:
                        acc = hy[i, j, h, l] if vx[j - 1, h] else zero
                        if vx[i, l - 1]:
                            for i1 in range(i + 1, j):
                                for l1 in range(h + 1, l):
                                    if vx[i1 - 1, l1]:
                                        acc = _add(mode, p, acc, _mul(mode, p, hy[i, i1, l1, l], hsl[i1, j, h, l1]))
                        hs[i, j, h, l] = acc
                        acc = zero
                        for i2 in range(i, j):
                            for l2 in range(h + 1, l + 1):
                                rest = hs[i2, j, h, l2]
                                if i2 > i:
                                    acc = _add(mode, p, acc, _mul(mode, p, rest, _mul(mode, p, secp_r[i, i2], sec_s[l2, l])))
                                if l > l2:
                                    acc = _add(mode, p, acc, _mul(mode, p, rest, _mul(mode, p, upow[i2 - i], secp_s[l2, l])))
                        hsl[i, j, h, l] = acc
                        # products
                        acc = zero
                        for i1 in range(i + 1, j + 1):
                            for h1 in range(h + 1, l + 1):
                                acc = _add(mode, p, acc, _mul(mode, p, hs[i, i1, h, h1], _mul(mode, p, sec_r[i1, j], sec_s[h1, l])))
                        uu[i, j, h, l] = acc
                        acc = zero
                        for x in range(i + 1, j):
                            for y in range(h + 1, l):
                                acc = _add(mode, p, acc, _mul(mode, p, uu[i, x, h, y], hs[x, j, y, l]))
                        xx[i, j, h, l] = acc
                        accw = zero
                        accy = zero
                        for i1 in range(i + 1, j):
                            for j1 in range(i1 + 1, j):
                                g = vt_r[i, i1, j1, j]
                                accw = _add(mode, p, accw, _mul(mode, p, g, hs[i1, j1, h, l]))
                                accy = _add(mode, p, accy, _mul(mode, p, g, xx[i1, j1, h, l]))
                        ww[i, j, h, l] = accw
                        yy[i, j, h, l] = accy
                        acc = _add(mode, p, xx[i, j, h, l], _add(mode, p, accw, accy))
                        for h1 in range(h + 1, l):
                            for l1 in range(h1 + 1, l):
                                core = _add(mode, p, _add(mode, p, hs[i, j, h1, l1], xx[i, j, h1, l1]),
                                            _add(mode, p, ww[i, j, h1, l1], yy[i, j, h1, l1]))
                                acc = _add(mode, p, acc, _mul(mode, p, vt_s[h, h1, l1, l], core))
                        tt[i, j, h, l] = acc
                        # innermost layer
                        acct = zero
                        acch = zero
                        for k1 in range(i, j):
                            for k2 in range(h + 1, l + 1):
                                acct = _add(mode, p, acct, _mul(mode, p, ii[i, k1, k2, l], tt[k1, j, h, k2]))
                                if vx[k1, k2 - 1] and vx[j - 1, h]:
                                    acch = _add(mode, p, acch, _mul(mode, p, inh[i, k1, k2, l], hy[k1, j, h, k2]))
                        ptt[i, j, h, l] = acct
                        pth[i, j, h, l] = acch
                        pt[i, j, h, l] = _add(mode, p, acct, acch)
                    # layered structures
                    base = _mul(mode, p, sec_r[i, j], sec_s[h, l])
                    acci = base
                    accn = base
                    for j1 in range(i + 1, j + 1):
                        for h1 in range(h, l):
                            sr = sec_r[j1, j]
                            ss = sec_s[h, h1]
                            acci = _add(mode, p, acci, _mul(mode, p, pt[i, j1, h1, l], _mul(mode, p, sr, ss)))
                            accn = _add(mode, p, accn, _mul(mode, p, ptt[i, j1, h1, l], _mul(mode, p, sr, ss)))
                            sep = zero
                            if j > j1:
                                sep = _mul(mode, p, secp_r[j1, j], ss)
                            if h1 > h:
                                sep = _add(mode, p, sep, _mul(mode, p, upow[j - j1], secp_s[h, h1]))
                            accn = _add(mode, p, accn, _mul(mode, p, pth[i, j1, h1, l], sep))
                    ii[i, j, h, l] = acci
                    inh[i, j, h, l] = accn
    return hy, hs, hsl, uu, xx, ww, yy, tt, ptt, pth, pt, inh, ii
