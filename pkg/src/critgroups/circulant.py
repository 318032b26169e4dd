"""Invertible circulant matrices over F_p and their brute-force oracles.

An n x n circulant over F_p is a polynomial in the cyclic shift, so the
group C(n, p) of invertible circulants is the unit group of the ring
F_p[x]/(x^n - 1).  Writing n = m * p^s with gcd(m, p) = 1, the ring splits
along the irreducible factors of x^m - 1, whose degrees are the sizes of
the p-cyclotomic cosets of Z_m; each factor of degree r contributes a
Teichmueller part Z_{p^r - 1} and a one-unit part determined by p^s.

The structure formula for the one-unit part is standard but deliberately
treated as a conjecture here: `bruteforce_unit_group` recomputes the group
by enumerating every ring element, so the test suite fails loudly if the
formula ever disagrees.  All brute-force paths are vectorized with numpy
over the whole ring at once.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import prod

import numpy as np
from sympy import isprime

from .abelian import AbelianGroup, canonicalize, factor, from_order_statistics

DEFAULT_BRUTE_CAP = 1 << 20


class ResourceLimitError(RuntimeError):
    """Raised when a brute-force enumeration would exceed the size cap."""


# ---------------------------------------------------------------------------
# element-level polynomial arithmetic


def _poly_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_divmod(a, b, p):
    a = list(a)
    db, lead_inv = len(b) - 1, pow(b[-1], p - 2, p)
    q = [0] * max(len(a) - db, 0)
    for i in range(len(a) - db - 1, -1, -1):
        c = a[i + db] * lead_inv % p
        if c:
            q[i] = c
            for j, bj in enumerate(b):
                a[i + j] = (a[i + j] - c * bj) % p
    return _poly_trim(q), _poly_trim(a)


def _poly_gcd(a, b, p):
    a, b = _poly_trim(list(a)), _poly_trim(list(b))
    while b:
        _, r = _poly_divmod(a, b, p)
        a, b = b, r
    return a


def _poly_xgcd(a, b, p):
    """(g, u, v) with u*a + v*b = g over F_p, g monic (or empty for 0)."""
    a, b = _poly_trim(list(a)), _poly_trim(list(b))
    r0, r1 = a, b
    u0, u1 = [1], []
    v0, v1 = [], [1]
    while r1:
        q, r = _poly_divmod(r0, r1, p)
        r0, r1 = r1, r
        u0, u1 = u1, _poly_sub(u0, _poly_mul(q, u1, p), p)
        v0, v1 = v1, _poly_sub(v0, _poly_mul(q, v1, p), p)
    if r0:
        c = pow(r0[-1], p - 2, p)
        r0 = [x * c % p for x in r0]
        u0 = [x * c % p for x in u0]
        v0 = [x * c % p for x in v0]
    return r0, u0, v0


def _poly_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_trim(out)


def _poly_sub(a, b, p):
    out = [0] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] = x
    for i, x in enumerate(b):
        out[i] = (out[i] - x) % p
    return _poly_trim(out)


def _gf2_poly_gcd(a: int, b: int) -> int:
    """gcd of F_2 polynomials packed into integer bitmasks."""
    while b:
        lb = b.bit_length()
        r = a
        while r and r.bit_length() >= lb:
            r ^= b << (r.bit_length() - lb)
        a, b = b, r
    return a


class PolyModRing:
    """F_p[x]/(x^n - 1) with elements as coefficient tuples of length n."""

    def __init__(self, n: int, p: int):
        if not isprime(p):
            raise ValueError(f"{p} is not prime")
        if n < 1:
            raise ValueError(f"n = {n} < 1")
        self.n = n
        self.p = p
        self._modulus = [p - 1] + [0] * (n - 1) + [1]  # x^n - 1

    def zero(self):
        return (0,) * self.n

    def one(self):
        return (1,) + (0,) * (self.n - 1)

    def shift(self):
        """The polynomial x, i.e. the cyclic-shift circulant."""
        if self.n == 1:
            return (1,)
        return (0, 1) + (0,) * (self.n - 2)

    def element(self, coeffs):
        c = tuple(int(x) % self.p for x in coeffs)
        if len(c) != self.n:
            raise ValueError(f"need {self.n} coefficients, got {len(c)}")
        return c

    def from_code(self, code: int):
        digits = []
        for _ in range(self.n):
            code, r = divmod(code, self.p)
            digits.append(r)
        return tuple(digits)

    def mul(self, a, b):
        n, p = self.n, self.p
        out = [0] * n
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    k = i + j
                    if k >= n:
                        k -= n
                    out[k] = (out[k] + ai * bj) % p
        return tuple(out)

    def pow(self, a, e: int):
        result = self.one()
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def eval_at_one(self, a) -> int:
        return sum(a) % self.p

    def is_unit(self, a) -> bool:
        g = _poly_gcd(list(a), self._modulus, self.p)
        return len(g) == 1

    def inverse(self, a):
        g, u, _ = _poly_xgcd(list(a), self._modulus, self.p)
        if len(g) != 1:
            raise ZeroDivisionError("not a unit")
        u = u + [0] * self.n
        out = list(u[:self.n])
        for i, c in enumerate(u[self.n:]):  # fold back mod x^n - 1
            out[i] = (out[i] + c) % self.p
        return tuple(out)

    def multiplicative_order(self, a, bound: int) -> int:
        """Order of a unit, given any multiple `bound` of it."""
        o = bound
        for q in factor(bound):
            while o % q == 0 and self.pow(a, o // q) == self.one():
                o //= q
        return o


# ---------------------------------------------------------------------------
# cyclotomic cosets and the structure formula


def cyclotomic_cosets(m: int, p: int) -> list[list[int]]:
    """Partition of Z_m into orbits {i, i*p, i*p^2, ...}, sorted by minimum.

    Coset sizes are the degrees of the irreducible factors of x^m - 1
    over F_p, which is all the structure formula needs.
    """
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    if m < 1:
        raise ValueError(f"m = {m} < 1")
    if m % p == 0:
        raise ValueError(f"p = {p} divides m = {m}")
    cosets = []
    seen = set()
    for i in range(m):
        if i not in seen:
            orbit = [i]
            x = i * p % m
            while x != i:
                orbit.append(x)
                x = x * p % m
            seen.update(orbit)
            cosets.append(orbit)
    return cosets


def _coprime_split(n: int, p: int) -> tuple[int, int]:
    s = 0
    m = n
    while m % p == 0:
        m //= p
        s += 1
    return m, s


def _one_unit_orders(p: int, s: int) -> list[int]:
    # cyclic decomposition of the one-units of F_q[t]/(t^{p^s}), per residue
    # field coordinate: one Z_{p^ceil(log_p(p^s / i))} for each p-free i < p^s
    orders = []
    p_pow = p**s
    for i in range(1, p_pow):
        if i % p:
            t = 0
            x = i
            while x < p_pow:
                x *= p
                t += 1
            orders.append(p**t)
    return orders


@dataclass(frozen=True)
class CirculantFactor:
    """Contribution of one irreducible factor of x^m - 1 to the unit group."""

    coset: tuple[int, ...]
    degree: int
    teichmuller_order: int  # p^degree - 1
    one_unit_part: AbelianGroup


@dataclass(frozen=True)
class UnitGroupStructure:
    n: int
    p: int
    group: AbelianGroup
    factors: tuple[CirculantFactor, ...]

    def __post_init__(self):
        m, s = _coprime_split(self.n, self.p)
        if sum(f.degree for f in self.factors) != m:
            raise RuntimeError("coset degrees do not sum to the coprime part")
        if sum(f.degree * self.p**s for f in self.factors) != self.n:
            raise RuntimeError("local ring dimensions do not sum to n")
        expected = prod(f.teichmuller_order * f.one_unit_part.order()
                        for f in self.factors)
        if self.group.order() != expected:
            raise RuntimeError("factor orders do not multiply to the group order")


def circulant_group(n: int, p: int) -> UnitGroupStructure:
    """Structure of C(n, p), the invertible circulants over F_p."""
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    if n < 1:
        raise ValueError(f"n = {n} < 1")
    m, s = _coprime_split(n, p)
    one_unit = _one_unit_orders(p, s)
    factors = []
    orders = []
    for coset in cyclotomic_cosets(m, p):
        r = len(coset)
        local_one_units = [o for o in one_unit for _ in range(r)]
        factors.append(CirculantFactor(
            coset=tuple(coset),
            degree=r,
            teichmuller_order=p**r - 1,
            one_unit_part=canonicalize(local_one_units)))
        orders.append(p**r - 1)
        orders.extend(local_one_units)
    return UnitGroupStructure(n, p, canonicalize(orders), tuple(factors))


def circulant_group_fixing_ones(n: int, p: int) -> AbelianGroup:
    """Structure of C'(n, p) = {a : a(1) = 1}.

    Evaluation at 1 is the projection onto the multiplicative group of the
    x - 1 component, so exactly one Z_{p-1} disappears (nothing at all for
    p = 2).
    """
    structure = circulant_group(n, p)
    orders = []
    for f in structure.factors:
        if 0 not in f.coset:
            orders.append(f.teichmuller_order)
        orders.extend(f.one_unit_part.invariant_factors)
    return canonicalize(orders)


def count_normal_elements(p: int, n: int) -> int:
    """Number of normal elements of F_{p^n} over F_p: the order of C(n, p)."""
    return circulant_group(n, p).group.order()


# ---------------------------------------------------------------------------
# batched enumeration of F_p[x]/(x^n - 1)


class _BatchRing:
    """Vectorized arithmetic on arrays of ring elements.

    p = 2 packs each polynomial into one int64 bitmask (cyclic carry-less
    multiply); odd p keeps an (count, n) coefficient matrix.
    """

    def __init__(self, n: int, p: int):
        self.n = n
        self.p = p
        self.mask = (1 << n) - 1

    def all_elements(self):
        n, p = self.n, self.p
        if p == 2:
            return np.arange(1 << n, dtype=np.int64)
        idx = np.arange(p**n, dtype=np.int64)
        out = np.empty((p**n, n), dtype=np.int8)
        for j in range(n):
            out[:, j] = (idx // p**j) % p
        return out

    def one(self, count: int):
        if self.p == 2:
            return np.ones(count, dtype=np.int64)
        out = np.zeros((count, self.n), dtype=np.int8)
        out[:, 0] = 1
        return out

    def mul(self, a, b):
        n, p = self.n, self.p
        if p == 2:
            out = np.zeros_like(a)
            for j in range(n):
                rot = ((b << j) | (b >> (n - j))) & self.mask if j else b
                bit = ((a >> j) & 1).astype(bool)
                out ^= np.where(bit, rot, 0)
            return out
        acc = np.zeros(a.shape, dtype=np.int16)
        for j in range(n):
            acc += a[:, j:j + 1].astype(np.int16) * np.roll(b, j, axis=1)
        return (acc % p).astype(np.int8)

    def pow(self, a, e: int):
        result = self.one(len(a))
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def is_one(self, a):
        if self.p == 2:
            return a == 1
        ok = a[:, 0] == 1
        if self.n > 1:
            ok &= ~a[:, 1:].any(axis=1)
        return ok

    def is_shift_power(self, a):
        """Elements x^t: exactly one nonzero coefficient, equal to 1."""
        if self.p == 2:
            return (a != 0) & ((a & (a - 1)) == 0)
        return ((a == 1).sum(axis=1) == 1) & ((a != 0).sum(axis=1) == 1)

    def eval_at_one(self, a):
        if self.p == 2:
            x = a.copy()
            for shift in (32, 16, 8, 4, 2, 1):
                x ^= x >> shift
            return (x & 1).astype(np.int8)
        return (a.sum(axis=1, dtype=np.int32) % self.p).astype(np.int8)

    def residues_mod_coprime_part(self, a, m: int):
        """Reduce every element mod x^m - 1 and encode as an integer code."""
        n, p = self.n, self.p
        chunks = n // m
        if p == 2:
            r = np.zeros_like(a)
            for c in range(chunks):
                r ^= (a >> (c * m)) & ((1 << m) - 1)
            return r
        folded = a.reshape(len(a), chunks, m).sum(axis=1, dtype=np.int32) % p
        code = np.zeros(len(a), dtype=np.int64)
        for j in range(m):
            code += folded[:, j].astype(np.int64) * p**j
        return code

    def unit_mask(self, a, m: int):
        """gcd(a, x^n - 1) = 1, tested on the residue mod x^m - 1.

        The extended-gcd test runs once per distinct residue; for p | n
        that collapses p^n elements onto p^m residues.
        """
        p = self.p
        codes = self.residues_mod_coprime_part(a, m)
        uniq, inverse = np.unique(codes, return_inverse=True)
        if p == 2:
            modulus = (1 << m) | 1  # x^m - 1 = x^m + 1 over F_2
            flags = np.fromiter((_gf2_poly_gcd(int(c), modulus) == 1 for c in uniq),
                                dtype=bool, count=len(uniq))
        else:
            small = PolyModRing(m, p)
            flags = np.fromiter(
                (small.is_unit(small.from_code(int(c))) for c in uniq),
                dtype=bool, count=len(uniq))
        return flags[inverse]


def _batched_orders(ring: _BatchRing, elems, group_order: int, is_identity):
    """Multiplicative order of every element of a group, vectorized.

    Every order divides `group_order` (Lagrange), so the q-adic part of
    each order is found by one power ladder per prime q.
    """
    orders = np.ones(len(elems), dtype=np.int64)
    for q, e in factor(group_order).items():
        cur = ring.pow(elems, group_order // q**e)
        done = is_identity(cur)
        exps = np.zeros(len(elems), dtype=np.int64)
        j = 0
        while not done.all():
            j += 1
            cur = ring.pow(cur, q)
            now = is_identity(cur)
            exps[now & ~done] = j
            done = now
            if j > e:
                raise RuntimeError("order ladder exceeded its exponent bound")
        orders *= q**exps
    return orders


def _stats_dict(orders) -> dict[int, int]:
    values, counts = np.unique(orders, return_counts=True)
    return {int(v): int(c) for v, c in zip(values, counts)}


def _check_cap(n: int, p: int, cap: int):
    if p**n > cap:
        raise ResourceLimitError(
            f"ring F_{p}[x]/(x^{n} - 1) has {p}**{n} elements, over the cap {cap}")


@lru_cache(maxsize=8)
def _enumerated_units(n: int, p: int):
    """All ring elements plus the extended-gcd unit mask, cached: the unit
    and quotient oracles walk the same rings."""
    ring = _BatchRing(n, p)
    m, _ = _coprime_split(n, p)
    elems = ring.all_elements()
    mask = ring.unit_mask(elems, m)
    return ring, elems, mask


def bruteforce_unit_group(n: int, p: int, cap: int = DEFAULT_BRUTE_CAP) -> AbelianGroup:
    """Unit group of F_p[x]/(x^n - 1) by enumerating all p^n elements.

    Orders are computed against the unit count (Lagrange), so nothing here
    depends on the structure formula being validated.
    """
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    _check_cap(n, p, cap)
    ring, elems, mask = _enumerated_units(n, p)
    units = elems[mask]
    orders = _batched_orders(ring, units, len(units), ring.is_one)
    return from_order_statistics(_stats_dict(orders))


def bruteforce_fixing_ones_group(n: int, p: int,
                                 cap: int = DEFAULT_BRUTE_CAP) -> AbelianGroup:
    """C'(n, p) by enumeration: units with a(1) = 1, orders by ladder."""
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    _check_cap(n, p, cap)
    ring, elems, unit_mask = _enumerated_units(n, p)
    fixing = elems[unit_mask & (ring.eval_at_one(elems) == 1)]
    orders = _batched_orders(ring, fixing, len(fixing), ring.is_one)
    return from_order_statistics(_stats_dict(orders))


def quotient_by_shift(n: int, p: int, cap: int = DEFAULT_BRUTE_CAP) -> AbelianGroup:
    """C'(n, p) modulo the cyclic subgroup generated by the shift x.

    Enumerates C', computes each element's order in the quotient (identity
    test: "is a power of x"), and divides the census by the coset size n.
    """
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    _check_cap(n, p, cap)

    scalar = PolyModRing(n, p)
    x = scalar.shift()
    assert scalar.eval_at_one(x) == 1, "shift does not fix the all-ones vector"
    cur, order_of_x = x, 1
    while cur != scalar.one():
        cur = scalar.mul(cur, x)
        order_of_x += 1
    assert order_of_x == n, f"shift has order {order_of_x}, expected {n}"

    ring, elems, unit_mask = _enumerated_units(n, p)
    mask = unit_mask & (ring.eval_at_one(elems) == 1)
    fixing = elems[mask]
    if len(fixing) % n:
        raise RuntimeError(f"|C'| = {len(fixing)} is not divisible by n = {n}")
    quotient_order = len(fixing) // n
    orders = _batched_orders(ring, fixing, quotient_order, ring.is_shift_power)
    census = _stats_dict(orders)
    for t in census:
        if census[t] % n:
            raise RuntimeError("coset census is not a multiple of the coset size")
        census[t] //= n
    return from_order_statistics(census)


# ---------------------------------------------------------------------------
# normal elements counted from scratch in an explicit F_{p^n}


def _find_irreducible(p: int, n: int) -> list[int]:
    """Smallest monic irreducible of degree n over F_p, by direct search."""
    if n == 1:
        return [0, 1]  # y
    x_poly = [0, 1]
    prime_divs = list(factor(n))
    for code in range(p**n):
        h = []
        c = code
        for _ in range(n):
            c, r = divmod(c, p)
            h.append(r)
        h.append(1)
        # h irreducible iff y^{p^n} = y mod h and, for every prime q | n,
        # y^{p^{n/q}} - y is coprime to h
        t = x_poly
        ok = True
        powers = {}
        for i in range(1, n + 1):
            t = _poly_rem_pow_p(t, h, p)
            powers[i] = t
        if _poly_sub(powers[n], x_poly, p):
            continue
        for q in prime_divs:
            diff = _poly_sub(powers[n // q], x_poly, p)
            if len(_poly_gcd(diff, h, p)) != 1:
                ok = False
                break
        if ok:
            return h
    raise RuntimeError(f"no irreducible of degree {n} over F_{p} found")


def _poly_rem_pow_p(a, h, p):
    """a^p mod h, by square-and-multiply on the exponent p."""
    result = [1]
    base = list(a)
    e = p
    while e:
        if e & 1:
            result = _poly_divmod(_poly_mul(result, base, p), h, p)[1]
        e >>= 1
        if e:
            base = _poly_divmod(_poly_mul(base, base, p), h, p)[1]
    return result


def bruteforce_count_normal(p: int, n: int, cap: int = DEFAULT_BRUTE_CAP) -> int:
    """Count normal elements of F_{p^n} by testing every Frobenius orbit.

    Builds the field as F_p[y]/(h), then checks for each element whether
    its orbit under t -> t^p spans the field over F_p (batched rank test).
    """
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    if n < 1:
        raise ValueError(f"n = {n} < 1")
    _check_cap(n, p, cap)
    h = _find_irreducible(p, n)

    # Frobenius is F_p-linear: column j holds the coordinates of y^{jp} mod h
    frob = np.zeros((n, n), dtype=np.int8)
    for j in range(n):
        col = _poly_divmod(_poly_rem_pow_p([0] * j + [1], h, p), h, p)[1]
        for i, c in enumerate(col):
            frob[i, j] = c

    count = p**n
    coords = np.empty((count, n), dtype=np.int8)
    idx = np.arange(count, dtype=np.int64)
    for j in range(n):
        coords[:, j] = (idx // p**j) % p

    mats = np.empty((count, n, n), dtype=np.int16)
    cur = coords
    for i in range(n):
        mats[:, i, :] = cur
        cur = cur @ frob.T % p  # next Frobenius power, all elements at once

    return int(_batch_full_rank(mats, p).sum())


def _batch_full_rank(mats, p: int):
    """Full-rank test over F_p for a stack of square matrices, in place."""
    count, n, _ = mats.shape
    ok = np.ones(count, dtype=bool)
    inv = np.array([pow(i, p - 2, p) if i else 0 for i in range(p)],
                   dtype=np.int16)
    rows = np.arange(count)
    for k in range(n):
        sub = mats[:, k:, k]
        nonzero = sub != 0
        ok &= nonzero.any(axis=1)
        piv = nonzero.argmax(axis=1)  # 0 for dead lanes, harmless
        piv_rows = mats[rows, k + piv, :].copy()
        mats[rows, k + piv, :] = mats[:, k, :]
        mats[:, k, :] = piv_rows * inv[piv_rows[:, k]][:, None] % p
        if k + 1 < n:
            f = mats[:, k + 1:, k]
            mats[:, k + 1:, :] = (mats[:, k + 1:, :]
                                  - f[:, :, None] * mats[:, None, k, :]) % p
    return ok
