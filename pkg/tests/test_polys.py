"""Unit tests for the sparse packed-monomial polynomial layer."""

import random
from fractions import Fraction

from dynqmat.polys import (
    pack_mono,
    padd,
    pconst,
    pdiv_exact,
    pevaluate,
    pis_const,
    pmul,
    pneg,
    ppow,
    pqshift,
    psub,
    ptotal_degree,
    punit_normal,
    pvar,
    unpack_mono,
)

NV = 5  # q, z1, z2, u1, u2


def P(*terms):
    """Polynomial from (coef, exps) pairs."""
    out = {}
    for coef, exps in terms:
        key = pack_mono(exps, NV)
        out[key] = out.get(key, 0) + coef
    return {m: c for m, c in out.items() if c}


def rand_poly(rng, nterms=4, nvars=NV):
    out = {}
    for _ in range(nterms):
        exps = [rng.randrange(-2, 3)] + [rng.randrange(0, 3) for _ in range(nvars - 1)]
        c = rng.randrange(-5, 6)
        if c:
            key = pack_mono(tuple(exps), nvars)
            out[key] = out.get(key, 0) + c
    return {m: c for m, c in out.items() if c}


def test_pack_roundtrip():
    rng = random.Random(1)
    for _ in range(100):
        exps = tuple([rng.randrange(-40, 40)] + [rng.randrange(0, 60) for _ in range(NV - 1)])
        assert unpack_mono(pack_mono(exps, NV), NV) == exps
    # packed order is lex order with q most significant
    a = pack_mono((1, 0, 0, 0, 0), NV)
    b = pack_mono((0, 5, 5, 5, 5), NV)
    assert a > b
    c = pack_mono((-1, 5, 0, 0, 0), NV)
    assert c < b and c < 0


def test_ring_axioms_random():
    rng = random.Random(7)
    for _ in range(200):
        a, b, c = (rand_poly(rng) for _ in range(3))
        assert padd(a, b) == padd(b, a)
        assert pmul(a, b) == pmul(b, a)
        assert pmul(a, padd(b, c)) == padd(pmul(a, b), pmul(a, c))
        assert psub(padd(a, b), b) == a
        assert pmul(pmul(a, b), c) == pmul(a, pmul(b, c))


def test_exact_division_roundtrip():
    rng = random.Random(11)
    for _ in range(200):
        a = rand_poly(rng)
        b = rand_poly(rng, nterms=2)
        if not b:
            continue
        prod = pmul(a, b)
        quo = pdiv_exact(prod, b, NV)
        assert quo == a
        junk = padd(prod, pconst(1, NV))
        if junk != prod and pis_const(b) is None:
            assert pdiv_exact(junk, b, NV) is None


def test_division_by_q_unit_polynomials_terminates():
    # q - 1 divides q^2 - 1 but not z1 - z2
    qm1 = P((1, (1, 0, 0, 0, 0)), (-1, (0, 0, 0, 0, 0)))
    q2m1 = P((1, (2, 0, 0, 0, 0)), (-1, (0, 0, 0, 0, 0)))
    z12 = P((1, (0, 1, 0, 0, 0)), (-1, (0, 0, 1, 0, 0)))
    assert pdiv_exact(q2m1, qm1, NV) == P((1, (1, 0, 0, 0, 0)), (1, (0, 0, 0, 0, 0)))
    assert pdiv_exact(z12, qm1, NV) is None


def test_unit_normal():
    p = P((-6, (-2, 1, 0, 0, 0)), (2, (-1, 1, 1, 0, 0)))
    sign, qexp, cont, canon = punit_normal(p, NV)
    assert qexp == -2 and cont == 2
    assert min(unpack_mono(m, NV)[0] for m in canon) == 0
    assert canon[max(canon)] > 0
    rebuilt = {}
    for m, c in canon.items():
        exps = unpack_mono(m, NV)
        rebuilt[pack_mono((exps[0] + qexp,) + exps[1:], NV)] = c * sign * cont
    assert rebuilt == p


def test_qshift_evaluates_consistently():
    rng = random.Random(3)
    vals = [Fraction(3, 2)] + [
        Fraction(rng.randrange(1, 50), rng.randrange(1, 50)) for _ in range(NV - 1)
    ]
    deltas = (0, -2, 4, 0, 2)
    for _ in range(50):
        a = rand_poly(rng)
        shifted = pqshift(a, deltas, NV)
        moved = list(vals)
        for i in range(1, NV):
            moved[i] = vals[i] * vals[0] ** deltas[i]
        assert pevaluate(shifted, vals, NV) == pevaluate(a, moved, NV)


def test_pow_and_degree():
    z1 = pvar(1, NV)
    p = padd(z1, pconst(-1, NV))
    assert ppow(p, 3) == pmul(p, pmul(p, p))
    assert ptotal_degree(ppow(p, 3), NV) == 3
    assert ptotal_degree(pneg(p), NV) == 1
