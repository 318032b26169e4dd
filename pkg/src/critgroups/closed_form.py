"""Closed formulas for the sandpile and sand-dune groups of DB/Kautz digraphs.

The de Bruijn sandpile group on n vertices embeds with index n in an
auxiliary "sand dune" group, the quotient of the augmentation-zero
polynomials Z_n = <e_v = x^v - 1> modulo the relations eps_v = d*e_v - e_{dv}.
Everything here is driven by the arithmetic of the map x -> d*x on Z_n:
the chain obtained by repeatedly dividing n by gcd(n, d), and the orbits of
multiplication by d (by -d for the Kautz family) on the coprime part.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from .abelian import AbelianGroup, canonicalize, factor
from .exact_linalg import IntegerMatrix


@dataclass(frozen=True)
class DSequence:
    """The chain n = n_0 > n_1 > ... > n_k with n_{i+1} = n_i / gcd(n_i, d)."""

    chain: tuple[int, ...]
    gcds: tuple[int, ...]  # g_i = gcd(n_i, d) for i < k, all > 1
    k: int
    m: int  # n_k, the part of n coprime to d
    g: int  # g_0 * ... * g_{k-1}, so n = g * m


def d_sequence(n: int, d: int) -> DSequence:
    if n < 1:
        raise ValueError(f"n = {n} < 1")
    if d < 2:
        raise ValueError(f"d = {d} < 2 (degree-1 graphs have no closed form)")
    chain = [n]
    gcds = []
    while (g := gcd(chain[-1], d)) > 1:
        gcds.append(g)
        chain.append(chain[-1] // g)
    prod_g = 1
    for g in gcds:
        prod_g *= g
    return DSequence(tuple(chain), tuple(gcds), len(gcds), chain[-1], prod_g)


@dataclass(frozen=True)
class OrbitData:
    """Orbits of x -> multiplier*x on Z_m minus 0, with chosen representatives.

    Every integer m/p^j (p prime dividing m, 1 <= j <= v_p(m)) represents its
    own orbit; multiplication by a unit preserves gcd with m, so these always
    lie in distinct orbits and the overrides never clash.
    """

    modulus: int
    multiplier: int
    orbits: tuple[tuple[int, ...], ...]  # each listed from its representative
    representatives: tuple[int, ...]

    @property
    def orbit_sizes(self) -> dict[int, int]:
        return {v: len(orb) for orb in self.orbits for v in orb}

    def size(self, v: int) -> int:
        for orb in self.orbits:
            if v in orb:
                return len(orb)
        raise ValueError(f"{v} is not in Z_{self.modulus} minus 0")


def orbits(m: int, multiplier: int) -> OrbitData:
    if m < 1:
        raise ValueError(f"modulus {m} < 1")
    if multiplier == 0 or gcd(m, multiplier) != 1:
        raise ValueError(f"multiplier {multiplier} is not a unit mod {m}")

    def chase(start: int) -> tuple[int, ...]:
        cyc = [start]
        x = start * multiplier % m
        while x != start:
            cyc.append(x)
            x = x * multiplier % m
        return tuple(cyc)

    reps = []
    cycles = []
    seen = set()
    for v in range(1, m):
        if v not in seen:
            cyc = chase(v)
            seen.update(cyc)
            reps.append(v)
            cycles.append(cyc)

    # override: each m/p^j must be the representative of its orbit
    mandated = sorted({m // p**j
                       for p, e in factor(m).items() for j in range(1, e + 1)})
    for w in mandated:
        for idx, cyc in enumerate(cycles):
            if w in cyc:
                if reps[idx] != w:
                    reps[idx] = w
                    cycles[idx] = chase(w)
                break
    return OrbitData(m, multiplier, tuple(cycles), tuple(reps))


def d_type(v: int, n: int, d: int) -> tuple[int, int]:
    """(f, e): tail length and cycle length of v under x -> d*x mod n."""
    if n < 1:
        raise ValueError(f"n = {n} < 1")
    if d < 2:
        raise ValueError(f"d = {d} < 2")
    first_seen = {}
    x = v % n
    step = 0
    while x not in first_seen:
        first_seen[x] = step
        x = x * d % n
        step += 1
    f = first_seen[x]
    return f, step - f


def _prime_power_part(m: int, p: int) -> int:
    pi = 1
    while m % (pi * p) == 0:
        pi *= p
    return pi


def c_value(v: int, m: int, d: int, sign: int = 1) -> int:
    """Division constant attached to an orbit representative.

    All representatives give 1 except the designated ones m/pi_p(m) (and
    m/2 in one extra case); for the Kautz family pass sign=-1, which flips
    which residue of d mod 4 triggers the halved power-of-two case.
    """
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    if d < 2 or gcd(m, d) != 1:
        raise ValueError(f"need d >= 2 coprime to m, got d={d}, m={m}")
    data = orbits(m, sign * d)
    if v not in data.representatives:
        raise ValueError(f"{v} is not an orbit representative mod {m}")
    dd = sign * d
    for p in factor(m):
        pi = _prime_power_part(m, p)
        if v == m // pi:
            if p != 2 or dd % 4 == 1 or m % 4 != 0:
                return pi
            return pi // 2  # p = 2, dd = 3 mod 4, 4 | m
    if m % 4 == 0 and dd % 4 == 3 and v == m // 2:
        return 2
    return 1


def _exponent_block(seq: DSequence) -> list[tuple[int, int]]:
    """[(d-power index i, multiplicity n_i - 2n_{i+1} + n_{i+2})] with the
    convention n_{k+1} = n_{k+2} = n_k."""
    ext = list(seq.chain) + [seq.m, seq.m]
    out = []
    for i in range(seq.k):
        e = ext[i] - 2 * ext[i + 1] + ext[i + 2]
        if e < 1:
            raise RuntimeError(
                f"exponent {e} < 1 at i={i} for chain {seq.chain}: "
                "d-sequence arithmetic is broken")
        out.append((i, e))
    return out


def _orbit_cyclic_orders(m: int, d: int, sign: int, divide: bool) -> list[int]:
    data = orbits(m, sign * d)
    dd = sign * d
    orders = []
    for v in data.representatives:
        o = data.size(v)
        cyc = abs(dd**o - 1)
        if divide:
            c = c_value(v, m, d, sign)
            if cyc % c:
                raise RuntimeError(
                    f"c({v}) = {c} does not divide {cyc} (m={m}, d={dd})")
            cyc //= c
        orders.append(cyc)
    return orders


def sand_dune_group(n: int, d: int) -> AbelianGroup:
    """Direct sum over the d-sequence block and one Z_{d^o(v)-1} per orbit."""
    seq = d_sequence(n, d)
    orders = []
    for i, e in _exponent_block(seq):
        orders.extend([d ** (i + 1)] * e)
    orders.extend(_orbit_cyclic_orders(seq.m, d, 1, divide=False))
    return canonicalize(orders)


def _kautz_dune_order(n: int, d: int) -> int:
    # order of the Kautz analogue of the sand dune group, for the n|S| check
    seq = d_sequence(n, d)
    total = 1
    for i, e in _exponent_block(seq):
        total *= d ** ((i + 1) * e)
    for cyc in _orbit_cyclic_orders(seq.m, d, -1, divide=False):
        total *= cyc
    return total


def _sandpile_closed(n: int, d: int, sign: int) -> AbelianGroup:
    seq = d_sequence(n, d)
    orders = []
    for i, e in _exponent_block(seq):
        power = d ** (i + 1)
        orders.append(power // seq.gcds[i])
        orders.extend([power] * (e - 1))
    orders.extend(_orbit_cyclic_orders(seq.m, d, sign, divide=True))
    group = canonicalize(orders)

    dune_order = (sand_dune_group(n, d).order() if sign == 1
                  else _kautz_dune_order(n, d))
    if dune_order != n * group.order():
        raise RuntimeError(
            f"index-n embedding violated for n={n}, d={sign * d}: "
            f"dune order {dune_order} != {n} * {group.order()}")
    return group


def sandpile_group_db(n: int, d: int) -> AbelianGroup:
    """Closed form of the sandpile (= critical) group of DB(n, d)."""
    return _sandpile_closed(n, d, 1)


def sandpile_group_kautz(n: int, d: int) -> AbelianGroup:
    """Closed form of the sandpile group of Kautz(n, d).

    Orbits are taken under x -> -d*x and the cyclic orders are
    |(-d)^o(v) - 1| / c'(v): the sign matters for odd orbit sizes, where the
    literal d^o - 1 would not even be divisible by c'(v).
    """
    return _sandpile_closed(n, d, -1)


def epsilon_relation_matrix(n: int, d: int) -> IntegerMatrix:
    """Relations eps_v = d*e_v - e_{dv} over the basis {e_w : w in Z_n'}.

    Row v has d in column v and -1 in column d*v mod n, dropped when
    d*v = 0 (e_0 = 0) and merged to d-1 on the diagonal when d*v = v.
    The finite part of this (n-1) x (n-1) matrix is the sand dune group.
    """
    if n < 2:
        raise ValueError(f"n = {n} < 2")
    if d < 2:
        raise ValueError(f"d = {d} < 2")
    rows = []
    for v in range(1, n):
        row = [0] * (n - 1)
        row[v - 1] = d
        w = d * v % n
        if w == v:
            row[v - 1] = d - 1
        elif w != 0:
            row[w - 1] = -1
        rows.append(row)
    return IntegerMatrix.from_rows(rows)


@dataclass(frozen=True)
class EpsilonCoordinates:
    """Exact rational coordinates of some element of Z_n in the eps basis."""

    n: int
    d: int
    coefficients: tuple  # ((basis index, Fraction), ...) sorted by index

    def as_dict(self) -> dict[int, Fraction]:
        return dict(self.coefficients)

    def denominator_lcm(self) -> int:
        out = 1
        for _, c in self.coefficients:
            out = lcm(out, c.denominator)
        return out


def epsilon_coordinates_of_ev(v: int, n: int, d: int) -> EpsilonCoordinates:
    """Expansion of e_v in the eps basis, eps_0 terms dropped.

    With (f, e) the d-type of v the tail contributes d^{-i-1} eps_{d^i v}
    and the cycle contributes d^{e-1-j} / (d^f (d^e - 1)) eps_{d^{f+j} v};
    multiplying back through eps_w = d e_w - e_{dw} telescopes to e_v.
    """
    if d < 2:
        raise ValueError(f"d = {d} < 2")
    if n < 1 or not 0 < v < n:
        raise ValueError(f"v = {v} is not in Z_{n} minus 0 (e_0 = 0)")
    f, e = d_type(v, n, d)
    coeffs = {}
    x = v
    for i in range(f):
        coeffs[x] = Fraction(1, d ** (i + 1))
        x = x * d % n
    cycle_den = d**f * (d**e - 1)
    for j in range(e):
        if x != 0:
            coeffs[x] = Fraction(d ** (e - 1 - j), cycle_den)
        x = x * d % n
    return EpsilonCoordinates(n, d, tuple(sorted(coeffs.items())))


def order_of_ev(v: int, n: int, d: int) -> int:
    """Order of e_v in the dune group: lcm of coordinate denominators.

    Equals d^f (d^e - 1) when the cycle of v avoids 0 and just d^f when the
    tail of v falls into the fixed point 0 (possible only for gcd(n, d) > 1).
    """
    return epsilon_coordinates_of_ev(v, n, d).denominator_lcm()


def membership_in_sandpile(coeffs, n: int) -> bool:
    """Whether sum a_v e_v lies in the embedded index-n sandpile subgroup:
    the test is sum of v * a_v = 0 mod n."""
    return sum(v * a for v, a in coeffs.items()) % n == 0
