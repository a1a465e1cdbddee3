"""Sparse multivariate integer polynomials, Laurent in the first variable.

A polynomial is a dict mapping packed monomials to nonzero ints.  A packed
monomial is one Python int holding all exponents in 16-bit fields, the
q-slot (index 0, the only one allowed to go negative) in the most
significant field.  Packing makes monomial multiplication an integer
addition and the lex order (q first, then the group variables) the plain
integer order, which is what all the hot loops live on.
"""

from __future__ import annotations

import heapq
from math import gcd

WIDTH = 16
MASK = (1 << WIDTH) - 1


def _shift0(nvars: int) -> int:
    return WIDTH * (nvars - 1)


def pack_mono(exps, nvars: int) -> int:
    """Pack an exponent tuple (q first) into one int."""
    m = exps[0] << _shift0(nvars)
    for i in range(1, nvars):
        e = exps[i]
        if e < 0 or e > MASK:
            raise ValueError("exponent out of packing range")
        m += e << (WIDTH * (nvars - 1 - i))
    return m


def unpack_mono(m: int, nvars: int) -> tuple:
    """Inverse of pack_mono; the q field is signed."""
    out = [0] * nvars
    out[0] = m >> _shift0(nvars)
    for i in range(1, nvars):
        out[i] = (m >> (WIDTH * (nvars - 1 - i))) & MASK
    return tuple(out)


def pzero() -> dict:
    return {}


def pconst(c: int, nvars: int) -> dict:
    if c == 0:
        return {}
    return {0: c}


def pvar(idx: int, nvars: int, exp: int = 1, coef: int = 1) -> dict:
    if coef == 0:
        return {}
    if idx == 0:
        return {exp << _shift0(nvars): coef}
    return {exp << (WIDTH * (nvars - 1 - idx)): coef}


def pis_const(a: dict):
    """Return the constant value if `a` is constant (incl. 0), else None."""
    if not a:
        return 0
    if len(a) == 1:
        c = a.get(0)
        if c is not None:
            return c
    return None


def padd(a: dict, b: dict) -> dict:
    out = dict(a)
    for m, c in b.items():
        s = out.get(m, 0) + c
        if s:
            out[m] = s
        else:
            del out[m]
    return out


def pneg(a: dict) -> dict:
    return {m: -c for m, c in a.items()}


def psub(a: dict, b: dict) -> dict:
    out = dict(a)
    for m, c in b.items():
        s = out.get(m, 0) - c
        if s:
            out[m] = s
        else:
            del out[m]
    return out


def pmul_term(a: dict, mono: int, coef: int) -> dict:
    if coef == 0:
        return {}
    if mono == 0:
        if coef == 1:
            return dict(a)
        return {m: c * coef for m, c in a.items()}
    return {m + mono: c * coef for m, c in a.items()}


def pmul_qpow(a: dict, k: int, nvars: int) -> dict:
    """Multiply by q**k."""
    if k == 0:
        return a
    d = k << _shift0(nvars)
    return {m + d: c for m, c in a.items()}


def pmul(a: dict, b: dict) -> dict:
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    out = {}
    get = out.get
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = ma + mb
            s = get(m, 0) + ca * cb
            if s:
                out[m] = s
            else:
                del out[m]
            get = out.get
    return out


def ppow(a: dict, e: int) -> dict:
    if e < 0:
        raise ValueError("negative power")
    if e == 0:
        return {0: 1}
    out = a
    for _ in range(e - 1):
        out = pmul(out, a)
    return out


def pleading(a: dict) -> int:
    return max(a)


def pcontent(a: dict) -> int:
    g = 0
    for c in a.values():
        g = gcd(g, c)
        if g == 1:
            return 1
    return g


def pqshift(a: dict, delta_by_var: tuple, nvars: int) -> dict:
    """Substitute x_i -> q^{delta_by_var[i]} x_i (slot 0 ignored)."""
    s0 = _shift0(nvars)
    out = {}
    for m, c in a.items():
        d = 0
        for i in range(1, nvars):
            dv = delta_by_var[i]
            if dv:
                e = (m >> (WIDTH * (nvars - 1 - i))) & MASK
                if e:
                    d += dv * e
        out[m + (d << s0) if d else m] = c
    return out


def punit_normal(a: dict, nvars: int):
    """Split a nonzero poly as unit * canonical.

    Returns (sign, qexp, content, canon): a == sign * content * q**qexp *
    canon with canon integer-primitive, minimal q-exponent 0, positive
    leading coefficient.
    """
    if not a:
        raise ValueError("zero polynomial has no unit normal form")
    s0 = _shift0(nvars)
    qmin = min(m >> s0 for m in a)
    cont = pcontent(a)
    sign = 1 if a[max(a)] > 0 else -1
    div = sign * cont
    if qmin == 0 and div == 1:
        return (sign, 0, cont, a)
    d = qmin << s0
    canon = {m - d: c // div for m, c in a.items()}
    return (sign, qmin, cont, canon)


def pdiv_exact(a: dict, b: dict, nvars: int):
    """Exact division a / b; None if not divisible.

    Operands are normalized to minimal q-exponent 0, so all fields are
    nonnegative and the packed order is a well-order: a lazy max-heap
    visits each remainder monomial once.
    """
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if not a:
        return {}
    s0 = _shift0(nvars)
    qa = min(m >> s0 for m in a)
    qb = min(m >> s0 for m in b)
    if qa:
        d = qa << s0
        rem = {m - d: c for m, c in a.items()}
    else:
        rem = dict(a)
    if qb:
        d = qb << s0
        b = {m - d: c for m, c in b.items()}
    qoff = (qa - qb) << s0
    bitems = sorted(b.items(), reverse=True)
    lb, cb = bitems[0]
    btail = bitems[1:]
    # guard bits on every non-q field: after (la | HI) - lb each guard
    # survives iff that field did not borrow (fields stay below 15 bits)
    hi = 0
    for k in range(nvars - 1):
        hi |= 1 << (WIDTH * k + WIDTH - 1)
    heap = [-m for m in rem]
    heapq.heapify(heap)
    out = {}
    while heap:
        la = -heapq.heappop(heap)
        ca = rem.pop(la, 0)
        if not ca:
            continue
        if ((la | hi) - lb) & hi != hi:
            return None
        mono = la - lb
        if mono >> s0 < 0:
            return None
        if ca % cb:
            return None
        ct = ca // cb
        out[mono + qoff] = ct
        for mb, c in btail:
            m = mb + mono
            prev = rem.get(m)
            if prev is None:
                rem[m] = -c * ct
                heapq.heappush(heap, -m)
            else:
                s = prev - c * ct
                if s:
                    rem[m] = s
                else:
                    del rem[m]
    return out if not rem else None


def ptotal_degree(a: dict, nvars: int) -> int:
    if not a:
        return 0
    return max(sum(abs(e) for e in unpack_mono(m, nvars)) for m in a)


def pevaluate(a: dict, values, nvars: int):
    """Evaluate at a point; values[0] must be invertible for Laurent q."""
    total = 0
    for m, c in a.items():
        term = c
        for i, e in enumerate(unpack_mono(m, nvars)):
            if e:
                term = term * values[i] ** e
        total = total + term
    return total


def pkey(a: dict) -> tuple:
    return tuple(sorted(a.items()))
