"""Exact coefficient arithmetic for the dynamical matrix algebras.

The coefficient field is QQ(q)(z_1..z_n, u_1..u_n, ...): one variable group
per weight namespace (z encodes q^{-2*lambda_i}, u encodes q^{-2*mu_j};
tensor constructions add more groups).  Integer weight shifts act as the
monomial substitutions x_i -> q^{-2k} x_i, so the whole field is closed
under them.

A Coefficient is stored as

    num / (dint * prod(atom_k ** e_k))

where num is an integer polynomial (Laurent in q), dint a positive integer
and every atom an irreducible canonical polynomial (primitive, minimal
q-exponent 0, positive leading coefficient).  All arithmetic the rewrite
engine performs only ever inverts variables and binomials, so denominators
stay fully factored and cancellation is exact division -- no multivariate
GCD is needed on the hot path.

`PointField` mirrors the same interface for randomized identity testing:
its coefficients are lazy expression nodes evaluated at a pole-avoiding
sample point, with shifts pushed down to the leaves (a plain number cannot
be shifted; a closure over the sample point can).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .polys import (
    pack_mono,
    padd,
    pconst,
    pcontent,
    pdiv_exact,
    pevaluate,
    pis_const,
    pkey,
    pmul,
    pmul_qpow,
    pneg,
    pqshift,
    ptotal_degree,
    punit_normal,
    pvar,
    pzero,
    unpack_mono,
)

try:  # pragma: no cover - speed only
    from gmpy2 import mpq as _mpq
except ImportError:  # pragma: no cover
    _mpq = Fraction

LAMBDA = "lambda"
MU = "mu"


class PoleError(ArithmeticError):
    """Evaluation or construction hit a genuine pole (e.g. h at 0)."""


class DomainError(ValueError):
    """Invalid arguments for an operation (overlapping sets, size mismatch)."""


class DegenerateSampleError(RuntimeError):
    """The pole-avoiding sampler failed to produce a usable point."""


@dataclass(frozen=True)
class ShiftVector:
    """Integer weight shift: lambda_part acts on z, mu_part on u."""

    lambda_part: tuple
    mu_part: tuple

    def __post_init__(self):
        object.__setattr__(self, "lambda_part", tuple(self.lambda_part))
        object.__setattr__(self, "mu_part", tuple(self.mu_part))

    def __add__(self, other):
        return ShiftVector(
            tuple(a + b for a, b in zip(self.lambda_part, other.lambda_part)),
            tuple(a + b for a, b in zip(self.mu_part, other.mu_part)),
        )

    def __neg__(self):
        return ShiftVector(
            tuple(-a for a in self.lambda_part), tuple(-a for a in self.mu_part)
        )

    def raw(self):
        return (self.lambda_part, self.mu_part)

    @staticmethod
    def zero(n):
        return ShiftVector((0,) * n, (0,) * n)

    @staticmethod
    def unit(n, side, i, amount=1):
        v = [0] * n
        v[i - 1] = amount
        v = tuple(v)
        z = (0,) * n
        return ShiftVector(v, z) if side == LAMBDA else ShiftVector(z, v)


def _zero_shift(ngroups, n):
    return ((0,) * n,) * ngroups


_FILTER_PRIME = (1 << 61) - 1


def _divides_filter(field, num, atom, rng_seed=0x9E3779B9):
    """Cheap sound negative test for atom | num (atoms linear in some var).

    Picks a modular root of the atom (it is linear in at least one
    variable on every engine path) and evaluates num there: a nonzero
    value proves non-divisibility.  Returns True when unsure.
    """
    items = list(atom.items())
    if len(items) != 2:
        return True
    p = _FILTER_PRIME
    nv = field.nvars
    (pm1, c1), (pm2, c2) = items
    m1 = unpack_mono(pm1, nv)
    m2 = unpack_mono(pm2, nv)
    pivot = -1
    for idx in range(1, nv):
        if {m1[idx], m2[idx]} == {0, 1}:
            pivot = idx
            break
    if pivot < 0:
        return True
    if m1[pivot] < m2[pivot]:
        m1, c1, m2, c2 = m2, c2, m1, c1
    rng = random.Random(rng_seed)
    for _ in range(2):
        vals = [0] + [rng.randrange(1, p) for _ in range(nv - 1)]
        vals[0] = rng.randrange(2, p)

        def mono_val(m):
            v = 1
            for i, e in enumerate(m):
                if e and i != pivot:
                    v = v * pow(vals[i], e, p) % p
            return v

        a = c1 % p * mono_val(m1) % p
        b = c2 % p * mono_val(m2) % p
        if a == 0:
            continue
        root = -b * pow(a, -1, p) % p
        if root == 0:
            continue
        vals[pivot] = root
        total = 0
        cache = {}
        from .polys import MASK, WIDTH

        s0 = WIDTH * (nv - 1)
        for m, c in num.items():
            v = 1
            e0 = m >> s0
            if e0:
                key = (0, e0)
                pv = cache.get(key)
                if pv is None:
                    pv = pow(vals[0], e0, p)
                    cache[key] = pv
                v = pv
            for i in range(1, nv):
                e = (m >> (WIDTH * (nv - 1 - i))) & MASK
                if e:
                    key = (i, e)
                    pv = cache.get(key)
                    if pv is None:
                        pv = pow(vals[i], e, p)
                        cache[key] = pv
                    v = v * pv % p
            total = (total + c * v) % p
        return total == 0
    return True


def _cancel_cross(field, num, den):
    """Cancel den atoms out of num (den given as ((key, exp), ...))."""
    if not den:
        return num, {}
    out = {}
    for key, exp in den:
        atom = field._atoms[key]
        while exp > 0:
            if not _divides_filter(field, num, atom):
                break
            quo = pdiv_exact(num, atom, field.nvars)
            if quo is None:
                break
            num = quo
            exp -= 1
        if exp:
            out[key] = exp
    return num, out


class CoeffField:
    """Exact rational-function field with `len(groups)` weight namespaces."""

    exact = True

    def __init__(self, n, groups=("z", "u")):
        if n < 1:
            raise DomainError("need at least one index")
        self.n = n
        self.groups = tuple(groups)
        self.slots = self._slots_per_group()
        self.nvars = 1 + len(self.groups) * self.slots
        self._atoms = {}
        self._zero_sv = _zero_shift(len(self.groups), n)
        self.zero = Coefficient(self, pzero(), 1, ())
        self.one = Coefficient(self, pconst(1, self.nvars), 1, ())
        # q -+ 1 seed the registry so unit-like contents factor fully
        for poly in (
            padd(pvar(0, self.nvars), pconst(-1, self.nvars)),
            padd(pvar(0, self.nvars), pconst(1, self.nvars)),
        ):
            self._register_atom(poly)

    def _slots_per_group(self):
        return self.n

    # -- construction -------------------------------------------------

    def slot_of(self, group, i):
        """Variable slot for index i of a group; None if pinned to 1."""
        if not 1 <= i <= self.n:
            raise DomainError(f"index {i} out of range [1,{self.n}]")
        if i > self.slots:
            return None
        return 1 + group * self.slots + (i - 1)

    def var_index(self, group, i):
        idx = self.slot_of(group, i)
        if idx is None:
            raise DomainError(f"index {i} is pinned in this field")
        return idx

    def var_name(self, idx):
        g, i = divmod(idx - 1, self.slots)
        return f"{self.groups[g]}{i + 1}"

    def group_of_side(self, side):
        if side == LAMBDA:
            return 0
        if side == MU:
            if len(self.groups) < 2:
                raise DomainError("field has no mu namespace")
            return len(self.groups) - 1
        raise DomainError(f"unknown side {side!r}")

    def from_int(self, k):
        return Coefficient(self, pconst(k, self.nvars), 1, ())

    def var(self, group, i):
        idx = self.slot_of(group, i)
        if idx is None:
            return self.one
        return Coefficient(self, pvar(idx, self.nvars), 1, ())

    def q(self, exp=1):
        return Coefficient(self, pvar(0, self.nvars, exp), 1, ())

    def _register_atom(self, poly):
        key = pkey(poly)
        if key not in self._atoms:
            self._atoms[key] = poly
        return key

    def atom_poly(self, key):
        return self._atoms[key]

    # -- canonicalization helpers --------------------------------------

    def _factor_poly(self, poly):
        """Split a nonzero poly into (sign*q^k unit monomial, factors).

        Returns (int_content, q_exp, sign, [(atom_key, exp), ...]).  Factors
        found: registered atoms by trial division, single variables, and
        primitive binomials; anything left is registered as-is.
        """
        sign, qexp, cont, canon = punit_normal(poly, self.nvars)
        factors = {}
        const = pis_const(canon)
        if const is not None:
            if const != 1:
                raise AssertionError("unit normal form broke")
            return cont * sign, qexp, []
        for key in sorted(self._atoms):
            atom = self._atoms[key]
            if len(atom) > 4 or len(atom) > len(canon):
                # heavy opaque registrations (from inverting exotic sums)
                # would make this scan quadratic; they still cancel via the
                # denominator-driven pass in _build
                continue
            while True:
                quo = pdiv_exact(canon, atom, self.nvars)
                if quo is None:
                    break
                factors[key] = factors.get(key, 0) + 1
                canon = quo
                if pis_const(canon) is not None:
                    break
            if pis_const(canon) is not None:
                break
        s2, q2, c2, canon = punit_normal(canon, self.nvars)
        sign *= s2
        qexp += q2
        cont *= c2
        const = pis_const(canon)
        if const is None:
            if len(canon) == 1:
                mono = unpack_mono(next(iter(canon)), self.nvars)
                qexp += mono[0]
                for idx in range(1, self.nvars):
                    e = mono[idx]
                    if e:
                        key = self._register_atom(pvar(idx, self.nvars))
                        factors[key] = factors.get(key, 0) + e
            else:
                if len(canon) == 2:
                    # strip the common monomial part of a binomial
                    monos = [unpack_mono(m, self.nvars) for m in canon]
                    shared = tuple(
                        min(a, b) if i else 0
                        for i, (a, b) in enumerate(zip(*monos))
                    )
                    if any(shared):
                        for idx in range(1, self.nvars):
                            e = shared[idx]
                            if e:
                                key = self._register_atom(pvar(idx, self.nvars))
                                factors[key] = factors.get(key, 0) + e
                        packed_shared = pack_mono(shared, self.nvars)
                        canon = {m - packed_shared: c for m, c in canon.items()}
                        s3, q3, c3, canon = punit_normal(canon, self.nvars)
                        sign *= s3
                        qexp += q3
                        cont *= c3
                key = self._register_atom(canon)
                factors[key] = factors.get(key, 0) + 1
        return cont * sign, qexp, sorted(factors.items())

    def _build(self, num, dint, den):
        """Canonicalize a raw (num, dint, den) triple into a Coefficient.

        Atoms are prime, so a single pass per atom (with a cheap modular
        root filter first) restores coprimality.
        """
        if not num:
            return self.zero
        if dint < 0:
            raise AssertionError("denominator integer must stay positive")
        den = dict(den)
        for key in list(den):
            exp = den[key]
            atom = self._atoms[key]
            while exp > 0:
                if not _divides_filter(self, num, atom):
                    break
                quo = pdiv_exact(num, atom, self.nvars)
                if quo is None:
                    break
                num = quo
                exp -= 1
            if exp:
                den[key] = exp
            else:
                del den[key]
        if dint != 1:
            c = gcd(pcontent(num), dint)
            if c > 1:
                num = {m: v // c for m, v in num.items()}
                dint //= c
        return Coefficient(self, num, dint, tuple(sorted(den.items())))

    def fraction(self, numpoly, denpoly):
        """num/den from raw polynomials; den is factored on the fly."""
        if not denpoly:
            raise ZeroDivisionError("zero denominator")
        if not numpoly:
            return self.zero
        cont, qexp, factors = self._factor_poly(denpoly)
        if cont < 0:
            cont, numpoly = -cont, pneg(numpoly)
        if qexp:
            numpoly = pmul_qpow(numpoly, -qexp, self.nvars)
        return self._build(numpoly, cont, factors)

    # -- shift --------------------------------------------------------

    def shift_deltas(self, sv):
        """Per-variable q-exponent deltas for the substitution x -> q^{-2s}x."""
        deltas = [0] * self.nvars
        for g, vec in enumerate(sv):
            for i, s in enumerate(vec):
                if s and i < self.slots:
                    deltas[1 + g * self.slots + i] = -2 * s
        return tuple(deltas)


class SliceField(CoeffField):
    """Degree-0 homogeneous coefficients with each group's last index
    pinned to 1.

    Every coefficient the engine produces is homogeneous of degree 0 in
    each variable group (everything is built from h-ratios), so pinning
    x_n = 1 per group is an injective restriction: equalities and zero
    tests computed here are equivalent to the full field's, on far fewer
    variables.  Used internally for the heavy exact identity checks; the
    public field keeps all variables.
    """

    def _slots_per_group(self):
        return self.n - 1

    def shift_deltas(self, sv):
        # x_i/x_n is the real coordinate: shifting by s multiplies it by
        # q^{-2(s_i - s_n)}
        deltas = [0] * self.nvars
        for g, vec in enumerate(sv):
            base = vec[self.n - 1]
            for i in range(self.slots):
                s = vec[i] - base
                if s:
                    deltas[1 + g * self.slots + i] = -2 * s
        return tuple(deltas)


class Coefficient:
    """Element of a CoeffField in canonical factored form."""

    __slots__ = ("field", "num", "dint", "den")

    def __init__(self, field, num, dint, den):
        self.field = field
        self.num = num
        self.dint = dint
        self.den = den

    # -- predicates ----------------------------------------------------

    def is_zero(self):
        return not self.num

    def is_one(self):
        return self.dint == 1 and not self.den and pis_const(self.num) == 1

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if not isinstance(other, Coefficient) or other.field is not self.field:
            return NotImplemented
        if self.num == other.num and self.dint == other.dint and self.den == other.den:
            return True
        # cross multiply: sound even if an opaque factor slipped through
        return pmul(self.num, other._den_poly()) == pmul(other.num, self._den_poly())

    def __hash__(self):
        return hash((pkey(self.num), self.dint, self.den))

    # -- arithmetic -----------------------------------------------------

    def _den_poly(self):
        out = pconst(self.dint, self.field.nvars)
        for key, exp in self.den:
            atom = self.field._atoms[key]
            for _ in range(exp):
                out = pmul(out, atom)
        return out

    def __add__(self, other):
        if isinstance(other, int):
            other = self.field.from_int(other)
        if other.field is not self.field:
            raise DomainError("coefficients from different fields")
        if not self.num:
            return other
        if not other.num:
            return self
        da, db = dict(self.den), dict(other.den)
        only_a, only_b = {}, {}
        for key, e in da.items():
            d = e - db.get(key, 0)
            if d > 0:
                only_a[key] = d
        for key, e in db.items():
            d = e - da.get(key, 0)
            if d > 0:
                only_b[key] = d
        la = self.dint // gcd(self.dint, other.dint)
        lb = other.dint // gcd(self.dint, other.dint)
        numa = self.num if lb == 1 else {m: c * lb for m, c in self.num.items()}
        numb = other.num if la == 1 else {m: c * la for m, c in other.num.items()}
        for key, e in only_b.items():
            atom = self.field._atoms[key]
            for _ in range(e):
                numa = pmul(numa, atom)
        for key, e in only_a.items():
            atom = self.field._atoms[key]
            for _ in range(e):
                numb = pmul(numb, atom)
        den = {}
        for key in set(da) | set(db):
            den[key] = max(da.get(key, 0), db.get(key, 0))
        return self.field._build(padd(numa, numb), self.dint * lb, den)

    __radd__ = __add__

    @staticmethod
    def sum_many(field, coeffs):
        """Sum a batch over one common denominator, cancelling once."""
        return Coefficient.sum_products(field, [(c, None) for c in coeffs])

    @staticmethod
    def sum_products(field, pairs):
        """Canonical sum of lazy products c*d ((c, None) means just c).

        One common denominator for the whole batch; each summand's small
        cofactor absorbs the missing atoms first, then one fused
        multiply-accumulate with its big factor.  Cancellation runs once,
        on the final sum, where the alternating combinatorics has already
        collapsed most of it in the plain dict merges.
        """
        items = []
        for c, d in pairs:
            if not c.num or (d is not None and not d.num):
                continue
            items.append((c, d))
        if not items:
            return field.zero
        if len(items) == 1 and items[0][1] is None:
            return items[0][0]
        dens = []
        dints = []
        union = {}
        lcm = 1
        for c, d in items:
            dd = dict(c.den)
            di = c.dint
            if d is not None:
                di *= d.dint
                for k, e in d.den:
                    dd[k] = dd.get(k, 0) + e
            dens.append(dd)
            dints.append(di)
            lcm = lcm // gcd(lcm, di) * di
            for k, e in dd.items():
                if union.get(k, 0) < e:
                    union[k] = e
        total = {}
        get = total.get
        for (c, d), dd, di in zip(items, dens, dints):
            small = c.num
            scale = lcm // di
            if scale != 1:
                small = {m: v * scale for m, v in small.items()}
            for k, e in union.items():
                need = e - dd.get(k, 0)
                atom = field._atoms[k]
                for _ in range(need):
                    small = pmul(small, atom)
            big = d.num if d is not None else None
            if big is None:
                for m, v in small.items():
                    s = get(m, 0) + v
                    if s:
                        total[m] = s
                    else:
                        del total[m]
            else:
                if len(small) > len(big):
                    small, big = big, small
                for ms, vs in small.items():
                    for mb, vb in big.items():
                        m = ms + mb
                        s = get(m, 0) + vs * vb
                        if s:
                            total[m] = s
                        else:
                            del total[m]
            get = total.get
        return field._build(total, lcm, union)

    def __neg__(self):
        return Coefficient(self.field, pneg(self.num), self.dint, self.den)

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.field.from_int(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            other = self.field.from_int(other)
        if other.field is not self.field:
            raise DomainError("coefficients from different fields")
        if not self.num or not other.num:
            return self.field.zero
        f = self.field
        # each operand is canonical, so only cross cancellations can occur;
        # atoms are prime, so cancelling against the factors separately is
        # complete and the product below is already coprime to the den
        anum, bden = _cancel_cross(f, self.num, other.den)
        bnum, aden = _cancel_cross(f, other.num, self.den)
        den = dict(aden)
        for key, e in bden.items():
            den[key] = den.get(key, 0) + e
        num = pmul(anum, bnum)
        dint = self.dint * other.dint
        if dint != 1:
            c = gcd(pcontent(num), dint)
            if c > 1:
                num = {m: v // c for m, v in num.items()}
                dint //= c
        return Coefficient(f, num, dint, tuple(sorted(den.items())))

    __rmul__ = __mul__

    def inv(self):
        if not self.num:
            raise ZeroDivisionError("inverse of zero coefficient")
        f = self.field
        cont, qexp, factors = f._factor_poly(self.num)
        num = pconst(self.dint, f.nvars)
        for key, e in self.den:
            atom = f._atoms[key]
            for _ in range(e):
                num = pmul(num, atom)
        sign = -1 if cont < 0 else 1
        if qexp:
            num = pmul_qpow(num, -qexp, f.nvars)
        if sign < 0:
            num = pneg(num)
        return f._build(num, abs(cont), dict(factors))

    def __truediv__(self, other):
        if isinstance(other, int):
            other = self.field.from_int(other)
        return self * other.inv()

    def __pow__(self, e):
        if e == 0:
            return self.field.one
        base = self if e > 0 else self.inv()
        out = base
        for _ in range(abs(e) - 1):
            out = out * base
        return out

    # -- shift automorphism ----------------------------------------------

    def shift(self, sv):
        """Apply the automorphism x_{g,i} -> q^{-2 sv[g][i]} x_{g,i}."""
        if isinstance(sv, ShiftVector):
            sv = sv.raw()
        if all(not any(vec) for vec in sv):
            return self
        f = self.field
        deltas = f.shift_deltas(sv)
        num = pqshift(self.num, deltas, f.nvars)
        den = {}
        unit_q = 0
        unit_sign = 1
        for key, e in self.den:
            shifted = pqshift(f._atoms[key], deltas, f.nvars)
            s, qe, cont, canon = punit_normal(shifted, f.nvars)
            if cont != 1:
                raise AssertionError("shift changed atom content")
            nkey = f._register_atom(canon)
            den[nkey] = den.get(nkey, 0) + e
            unit_q += qe * e
            unit_sign *= s**e
        if unit_q:
            num = pmul_qpow(num, -unit_q, f.nvars)
        if unit_sign < 0:
            num = pneg(num)
        # a field automorphism preserves coprimality: build directly
        return Coefficient(f, num, self.dint, tuple(sorted(den.items())))

    # -- numerics ---------------------------------------------------------

    def degree_bound(self):
        nv = self.field.nvars
        d = ptotal_degree(self.num, nv)
        for key, e in self.den:
            d += e * ptotal_degree(self.field._atoms[key], nv)
        return d

    def evaluate(self, point):
        """Exact value at a sample point; raises PoleError on a zero atom."""
        nv = self.field.nvars
        num = pevaluate(self.num, point.values, nv)
        den = _mpq(self.dint)
        for key, e in self.den:
            v = pevaluate(self.field._atoms[key], point.values, nv)
            if v == 0:
                raise PoleError("sample point hits a denominator atom")
            den *= v**e
        return _mpq(num) / den

    def remap(self, new_field, group_map):
        """Transport into another field, sending group g to group_map[g].

        Indices pinned in the target (slice fields) drop out of the
        monomials; remapped denominator atoms are re-normalized and their
        units folded into the numerator.
        """
        f = self.field
        perm = [None] * f.nvars
        for g_old, g_new in enumerate(group_map):
            for r in range(f.slots):
                perm[1 + g_old * f.slots + r] = new_field.slot_of(g_new, r + 1)

        def remap_poly(p):
            out = {}
            for m, c in p.items():
                me = unpack_mono(m, f.nvars)
                nm = [0] * new_field.nvars
                nm[0] = me[0]
                for idx in range(1, f.nvars):
                    if me[idx] and perm[idx] is not None:
                        nm[perm[idx]] += me[idx]
                key = pack_mono(tuple(nm), new_field.nvars)
                out[key] = out.get(key, 0) + c
            return out

        num = remap_poly(self.num)
        if not num:
            return new_field.zero
        den = {}
        unit_q = 0
        unit_sign = 1
        dint = self.dint
        for key, e in self.den:
            mapped = remap_poly(f._atoms[key])
            s, qe, cont, canon = punit_normal(mapped, new_field.nvars)
            nkey = new_field._register_atom(canon)
            den[nkey] = den.get(nkey, 0) + e
            unit_q += qe * e
            unit_sign *= s**e
            dint *= cont**e
        if unit_q:
            num = pmul_qpow(num, -unit_q, new_field.nvars)
        if unit_sign < 0:
            num = pneg(num)
        return new_field._build(num, dint, den)

    def __repr__(self):
        from .serialize import coeff_to_text

        return f"Coefficient({coeff_to_text(self)})"


# -- special functions -------------------------------------------------


def h_fun(field, i, j, side=LAMBDA, offset=0):
    """h evaluated on the weight difference of indices i, j (plus offset).

    With x = q^{-2 weight}: h = (q x_i - q^{2c-1} x_j) / (x_i - q^{2c} x_j).
    The offset bumps the functional argument by c, which the reciprocity
    between the two generalized sign products needs.
    """
    if i == j and offset == 0:
        raise PoleError("h has a pole at weight difference 0")
    g = field.group_of_side(side)
    return _h_group(field, g, i, j, offset)


def _h_group(field, g, i, j, offset=0):
    xi = field.var(g, i)
    xj = field.var(g, j)
    num = field.q() * xi - field.q(2 * offset - 1) * xj
    den = xi - field.q(2 * offset) * xj
    if getattr(den, "is_zero", lambda: False)():
        raise PoleError("h has a pole at weight difference 0")
    return num * den.inv()


def g_fun(field, i, j, side=LAMBDA):
    """g = h(x)h(-x): (x_i - q^{-2}x_j)(x_i - q^2 x_j) / (x_i - x_j)^2."""
    if i == j:
        raise PoleError("g has a pole at weight difference 0")
    g = field.group_of_side(side)
    return _g_group(field, g, i, j)


def _g_group(field, g, i, j):
    xi = field.var(g, i)
    xj = field.var(g, j)
    num = (xi - field.q(-2) * xj) * (xi - field.q(2) * xj)
    return num * (((xi - xj).inv()) ** 2)


def sign_S(field, sigma, I, side=LAMBDA, offset=0):
    """Generalized sign: product of -h over the inversions of sigma in I.

    sigma is a permutation of {1..r} given as a tuple of images; I is the
    ascending index tuple it acts on.  `offset` bumps every h argument.
    """
    r = len(sigma)
    if r != len(I) or sorted(sigma) != list(range(1, r + 1)):
        raise DomainError("sigma must be a permutation of the positions of I")
    g = field.group_of_side(side)
    out = field.one
    for k in range(r):
        for l in range(k + 1, r):
            if sigma[k] > sigma[l]:
                out = out * (-_h_group(field, g, I[sigma[k] - 1], I[sigma[l] - 1], offset))
    return out


def sign_S_tilde(field, sigma, I, side=LAMBDA):
    """Tilde sign: the same product with reversed h arguments."""
    r = len(sigma)
    if r != len(I) or sorted(sigma) != list(range(1, r + 1)):
        raise DomainError("sigma must be a permutation of the positions of I")
    g = field.group_of_side(side)
    out = field.one
    for k in range(r):
        for l in range(k + 1, r):
            if sigma[k] > sigma[l]:
                out = out * (-_h_group(field, g, I[sigma[l] - 1], I[sigma[k] - 1]))
    return out


def qsign(field, I1, I2, side=LAMBDA, variant="plain"):
    """Quantum sign element: prod of -h(weight_k - weight_l) over cross pairs.

    plain: pairs k > l with k in I1, l in I2; tilde: pairs k < l.
    """
    if set(I1) & set(I2):
        raise DomainError("index sets must be disjoint")
    if variant not in ("plain", "tilde"):
        raise DomainError(f"unknown variant {variant!r}")
    g = field.group_of_side(side)
    out = field.one
    for k in I1:
        for l in I2:
            if (k > l) if variant == "plain" else (k < l):
                out = out * (-_h_group(field, g, k, l))
    return out


# -- sampling and randomized equality ------------------------------------


class SamplePoint:
    """Exact rational assignment to q and every group variable."""

    def __init__(self, field_shape, values, seed, degree_bound):
        self.shape = field_shape  # (n, ngroups)
        self.values = values  # tuple, index 0 = q
        self.seed = seed
        self.degree_bound = degree_bound
        self._qpows = {0: _mpq(1)}

    def qpow(self, k):
        v = self._qpows.get(k)
        if v is None:
            v = self.values[0] ** k
            self._qpows[k] = v
        return v

    def check(self):
        """Verify every pole-avoidance constraint; raise if one fails."""
        n, ngroups = self.shape
        q = self.values[0]
        if q == 0 or q == 1 or q == -1:
            raise DegenerateSampleError("q degenerate")
        bound = self.degree_bound
        qpows = [self.qpow(2 * k) for k in range(-bound, bound + 1)]
        groups = [
            self.values[1 + g * n : 1 + (g + 1) * n] for g in range(ngroups)
        ]
        ratios = []
        for vals in groups:
            for i in range(n):
                for j in range(n):
                    if i != j:
                        ratios.append(vals[i] / vals[j])
        # mixed-atom constraint: (x_i y_k) / (x_j y_l) off the q-power lattice
        for a in range(ngroups):
            for b in range(a + 1, ngroups):
                for i in range(n):
                    for j in range(n):
                        if i == j:
                            continue
                        for k in range(n):
                            for l in range(n):
                                if k == l:
                                    continue
                                ratios.append(
                                    (groups[a][i] * groups[b][k])
                                    / (groups[a][j] * groups[b][l])
                                )
        for r in ratios:
            if r in qpows or r == 1:
                raise DegenerateSampleError("ratio hits the q-power lattice")


def sample_point(seed, n, degree_bound=24, ngroups=2, max_tries=64):
    """Pole-avoiding exact rational sample point, reproducible from seed."""
    rng = random.Random(f"dynqmat:{seed}:{n}:{ngroups}:{degree_bound}")
    for _ in range(max_tries):
        a = rng.randrange(2, 1 << 16)
        b = rng.randrange(2, 1 << 16)
        if a == b:
            continue
        values = [_mpq(a, b)]
        for _ in range(ngroups * n):
            values.append(_mpq(rng.randrange(1, 1 << 30), rng.randrange(1, 1 << 30)))
        pt = SamplePoint((n, ngroups), tuple(values), seed, degree_bound)
        try:
            pt.check()
        except DegenerateSampleError:
            continue
        return pt
    raise DegenerateSampleError(
        f"no valid sample point after {max_tries} tries (seed={seed})"
    )


SAMPLE_ENTROPY_BITS = 29  # each coordinate takes >= 2^29 distinct values


def exact_equal(a, b):
    """Decide equality of two exact coefficients (canonical comparison)."""
    return a == b


def randomized_equal(a, b, seed=0, trials=2):
    """Schwartz-Zippel style equality: exact evaluation at random points.

    Returns (equal, failure_bound): failure_bound is an upper bound on the
    probability that unequal inputs passed every trial, from the total
    degrees of the operands and the sampler entropy.
    """
    field = a.field
    ngroups = len(field.groups)
    d = max(1, a.degree_bound() + b.degree_bound())
    bound = Fraction(1)
    for t in range(trials):
        for retry in range(8):
            pt = sample_point(
                (seed, t, retry), field.n, degree_bound=24, ngroups=ngroups
            )
            try:
                va = a.evaluate(pt)
                vb = b.evaluate(pt)
            except PoleError:
                continue
            break
        else:
            raise DegenerateSampleError("persistent pole hits while sampling")
        if va != vb:
            return False, Fraction(0)
        bound *= Fraction(d, 1 << SAMPLE_ENTROPY_BITS)
    return True, bound


# -- randomized-mode coefficient domain ----------------------------------


class PointCoeff:
    """Lazy expression over a sample point; shifts rewrite the leaves."""

    __slots__ = ("field", "op", "a", "b", "val", "sv", "deg", "serial")

    def __init__(self, field, op, a=None, b=None, val=None, sv=None, deg=0):
        self.field = field
        self.op = op
        self.a = a
        self.b = b
        self.val = val
        self.sv = sv
        self.deg = deg
        self.serial = field._next_serial()

    def is_zero(self):
        return self.op == "c" and self.val == 0

    def is_one(self):
        return self.op == "c" and self.val == 1

    def __add__(self, other):
        if isinstance(other, int):
            other = self.field.from_int(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        return PointCoeff(
            self.field, "+", self, other, deg=max(self.deg, other.deg)
        )

    __radd__ = __add__

    def __neg__(self):
        return PointCoeff(self.field, "n", self, deg=self.deg)

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.field.from_int(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            other = self.field.from_int(other)
        if self.is_zero() or other.is_zero():
            return self.field.zero
        if self.is_one():
            return other
        if other.is_one():
            return self
        return PointCoeff(self.field, "*", self, other, deg=self.deg + other.deg)

    __rmul__ = __mul__

    def inv(self):
        return PointCoeff(self.field, "i", self, deg=self.deg)

    def __truediv__(self, other):
        return self * other.inv()

    def __pow__(self, e):
        if e == 0:
            return self.field.one
        base = self if e > 0 else self.inv()
        out = base
        for _ in range(abs(e) - 1):
            out = out * base
        return out

    def shift(self, sv):
        if isinstance(sv, ShiftVector):
            sv = sv.raw()
        if all(not any(vec) for vec in sv):
            return self
        if self.op == "c":
            return self
        if self.op == "s":
            merged = tuple(
                tuple(x + y for x, y in zip(va, vb)) for va, vb in zip(self.sv, sv)
            )
            return PointCoeff(self.field, "s", self.a, sv=merged, deg=self.deg)
        return PointCoeff(self.field, "s", self, sv=sv, deg=self.deg)

    def value(self, sv=None):
        return self.field.eval(self, sv or self.field._zero_sv)

    def degree_bound(self):
        return self.deg

    def __eq__(self, other):
        if not isinstance(other, PointCoeff):
            return NotImplemented
        return self.value() == other.value()

    def __hash__(self):
        raise TypeError("PointCoeff is not hashable")

    def __repr__(self):
        return f"PointCoeff({self.value()})"


class PointField:
    """Coefficient domain evaluating everything at one pole-avoiding point."""

    exact = False

    def __init__(self, n, groups=("z", "u"), seed=0, degree_bound=24):
        self.n = n
        self.groups = tuple(groups)
        self.point = sample_point(
            seed, n, degree_bound=degree_bound, ngroups=len(self.groups)
        )
        self.seed = seed
        self._serial = 0
        self._memo = {}
        self._zero_sv = _zero_shift(len(self.groups), n)
        self.zero = self.from_int(0)
        self.one = self.from_int(1)

    def _next_serial(self):
        self._serial += 1
        return self._serial

    def group_of_side(self, side):
        if side == LAMBDA:
            return 0
        if side == MU:
            if len(self.groups) < 2:
                raise DomainError("field has no mu namespace")
            return len(self.groups) - 1
        raise DomainError(f"unknown side {side!r}")

    def from_int(self, k):
        return PointCoeff(self, "c", val=_mpq(k))

    def var(self, group, i):
        if not 1 <= i <= self.n:
            raise DomainError(f"index {i} out of range [1,{self.n}]")
        return PointCoeff(self, "v", a=(group, i - 1), deg=1)

    def q(self, exp=1):
        return PointCoeff(self, "q", a=exp, deg=abs(exp))

    # -- evaluation -----------------------------------------------------

    def eval(self, node, sv):
        memo = self._memo
        stack = [(node, sv)]
        while stack:
            nd, s = stack[-1]
            key = (nd.serial, s)
            if key in memo:
                stack.pop()
                continue
            op = nd.op
            if op == "c":
                memo[key] = nd.val
                stack.pop()
            elif op == "q":
                memo[key] = self.point.qpow(nd.a)
                stack.pop()
            elif op == "v":
                g, i0 = nd.a
                shift_amt = s[g][i0]
                v = self.point.values[1 + g * self.n + i0]
                if shift_amt:
                    v = v * self.point.qpow(-2 * shift_amt)
                memo[key] = v
                stack.pop()
            elif op == "s":
                merged = tuple(
                    tuple(x + y for x, y in zip(va, vb))
                    for va, vb in zip(nd.sv, s)
                )
                ck = (nd.a.serial, merged)
                if ck in memo:
                    memo[key] = memo[ck]
                    stack.pop()
                else:
                    stack.append((nd.a, merged))
            elif op in ("n", "i"):
                ck = (nd.a.serial, s)
                if ck in memo:
                    v = memo[ck]
                    if op == "i":
                        if v == 0:
                            raise DegenerateSampleError(
                                "randomized run divided by zero; resample"
                            )
                        memo[key] = 1 / v
                    else:
                        memo[key] = -v
                    stack.pop()
                else:
                    stack.append((nd.a, s))
            else:  # '+', '*'
                ka, kb = (nd.a.serial, s), (nd.b.serial, s)
                va, vb = memo.get(ka), memo.get(kb)
                if va is not None and vb is not None:
                    memo[key] = va + vb if op == "+" else va * vb
                    stack.pop()
                else:
                    if va is None:
                        stack.append((nd.a, s))
                    if vb is None:
                        stack.append((nd.b, s))
        return memo[(node.serial, sv)]
