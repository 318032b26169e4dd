"""Finitely generated abelian groups in canonical invariant-factor form.

A group is stored as a free rank plus a divisor chain d_1 | d_2 | ... | d_r
with every d_i >= 2.  Two values are isomorphic as groups exactly when they
are equal as values, so group identities proved elsewhere in the package
reduce to ``==`` on this type.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd, prod

from sympy import factorint


class InfiniteOrderError(ValueError):
    """Raised when a finite-only quantity is asked of an infinite group."""


class MalformedStatisticsError(ValueError):
    """Raised when an element-order census fits no finite abelian group."""


@lru_cache(maxsize=None)
def factor(n: int) -> dict[int, int]:
    """Prime factorization of ``n >= 1`` as {prime: exponent}, memoized.

    Invariant factors produced by the closed-form theorems repeat numbers of
    the shape d^o - 1 across many (n, d) instances, so caching pays off.
    """
    if n < 1:
        raise ValueError(f"cannot factor non-positive integer {n}")
    return {int(p): int(e) for p, e in factorint(n).items()}


def _chain_from_partitions(parts: dict[int, list[int]]) -> tuple[int, ...]:
    # Zip per-prime exponent partitions into a divisor chain: the largest
    # exponent of every prime lands in the last (largest) invariant factor.
    width = max((len(exps) for exps in parts.values()), default=0)
    chain = [1] * width
    for p, exps in parts.items():
        for i, e in enumerate(sorted(exps, reverse=True)):
            chain[width - 1 - i] *= p**e
    return tuple(chain)


@dataclass(frozen=True)
class AbelianGroup:
    """Z^free_rank + Z_{d_1} + ... + Z_{d_r} with d_i | d_{i+1}, d_i >= 2."""

    free_rank: int = 0
    invariant_factors: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError(f"negative free rank {self.free_rank}")
        object.__setattr__(self, "invariant_factors",
                           tuple(int(d) for d in self.invariant_factors))
        facs = self.invariant_factors
        for d in facs:
            if d < 2:
                raise ValueError(f"invariant factor {d} < 2")
        for a, b in zip(facs, facs[1:]):
            if b % a:
                raise ValueError(f"{a} does not divide {b}: not a divisor chain")

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    def order(self) -> int:
        """Number of elements; raises InfiniteOrderError if free_rank > 0."""
        if self.free_rank > 0:
            raise InfiniteOrderError(f"group has free rank {self.free_rank}")
        return prod(self.invariant_factors)

    def exponent(self) -> int:
        """Largest element order, i.e. the last invariant factor."""
        if self.free_rank > 0:
            raise InfiniteOrderError(f"group has free rank {self.free_rank}")
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def torsion_part(self) -> "AbelianGroup":
        return AbelianGroup(0, self.invariant_factors)

    def direct_sum(self, other: "AbelianGroup") -> "AbelianGroup":
        """Canonical form of self + other; free ranks add, torsion re-merges."""
        merged = canonicalize(self.invariant_factors + other.invariant_factors)
        return AbelianGroup(self.free_rank + other.free_rank,
                            merged.invariant_factors)

    def element_count_of_order(self, t: int) -> int:
        """Number of elements of exact order t (finite groups only)."""
        if self.free_rank > 0:
            raise InfiniteOrderError("infinite group")
        if t < 1:
            raise ValueError(f"order {t} < 1")

        def dividing(s: int) -> int:
            return prod(gcd(s, d) for d in self.invariant_factors)

        primes = list(factor(t)) if t > 1 else []
        total = 0
        for r in range(len(primes) + 1):
            for subset in itertools.combinations(primes, r):
                total += (-1) ** r * dividing(t // prod(subset))
        return total

    def __str__(self) -> str:
        pieces = []
        if self.free_rank == 1:
            pieces.append("Z")
        elif self.free_rank > 1:
            pieces.append(f"Z^{self.free_rank}")
        for d, group in itertools.groupby(self.invariant_factors):
            k = len(list(group))
            pieces.append(f"Z_{d}" + (f"^{k}" if k > 1 else ""))
        return " x ".join(pieces) if pieces else "trivial"

    def to_json(self) -> dict:
        # factors as decimal strings: they routinely exceed 64-bit range
        return {"free_rank": self.free_rank,
                "invariant_factors": [str(d) for d in self.invariant_factors]}

    @classmethod
    def from_json(cls, data: dict) -> "AbelianGroup":
        return cls(int(data["free_rank"]),
                   tuple(int(s) for s in data["invariant_factors"]))


TRIVIAL_GROUP = AbelianGroup()


def canonicalize(cyclic_orders) -> AbelianGroup:
    """Invariant-factor form of the direct sum of cyclic groups Z_c.

    Orders equal to 1 contribute nothing; the result does not depend on the
    input order.  Each order is split into prime powers and the per-prime
    partitions are re-zipped into a divisor chain (CRT merge).
    """
    parts: dict[int, list[int]] = {}
    for c in cyclic_orders:
        c = int(c)
        if c < 1:
            raise ValueError(f"cyclic order {c} < 1")
        if c == 1:
            continue
        for p, e in factor(c).items():
            parts.setdefault(p, []).append(e)
    return AbelianGroup(0, _chain_from_partitions(parts))


def cyclic(n: int) -> AbelianGroup:
    """The cyclic group Z_n in canonical form."""
    return canonicalize([n])


def from_order_statistics(counts: dict[int, int]) -> AbelianGroup:
    """Reconstruct the unique finite abelian group with the given census.

    ``counts`` maps an element order to the number of elements of exactly
    that order.  For each prime p, the number N_k of elements of order
    dividing p^k equals p^(sum_i min(lambda_i, k)) where lambda is the
    p-part partition, so the partial sums of the census determine lambda
    uniquely.  Inconsistent counts raise MalformedStatisticsError.
    """
    if not counts:
        raise MalformedStatisticsError("empty statistics")
    for t, c in counts.items():
        if t < 1 or c < 0:
            raise MalformedStatisticsError(f"bad entry order={t} count={c}")
    if counts.get(1) != 1:
        raise MalformedStatisticsError("count of order-1 elements must be 1")
    counts = {t: c for t, c in counts.items() if c}

    total = sum(counts.values())
    primes = set()
    for t in counts:
        if t > 1:
            primes.update(factor(t))

    parts: dict[int, list[int]] = {}
    for p in sorted(primes):
        max_k = max(e for t in counts if t > 1
                    for q, e in factor(t).items() if q == p)
        # cumulative counts N_k of elements with order dividing p^k
        cum = []
        running = 1
        for k in range(1, max_k + 1):
            running += counts.get(p**k, 0)
            cum.append(running)
        # s_k = log_p N_k must be an exact integer
        s_prev = 0
        deltas = []
        for n_k in cum:
            s_k = 0
            m = n_k
            while m % p == 0:
                m //= p
                s_k += 1
            if m != 1:
                raise MalformedStatisticsError(
                    f"count of order dividing {p}^k is {n_k}, not a power of {p}")
            deltas.append(s_k - s_prev)
            s_prev = s_k
        if any(d2 > d1 for d1, d2 in zip(deltas, deltas[1:])) or deltas[-1] < 1:
            raise MalformedStatisticsError(
                f"{p}-part counts do not come from a partition")
        # conjugate of the delta sequence is the p-part partition
        lam = [sum(1 for d in deltas if d >= i) for i in range(1, deltas[0] + 1)]
        parts[p] = lam

    group = AbelianGroup(0, _chain_from_partitions(parts))
    if group.order() != total:
        raise MalformedStatisticsError(
            f"census totals {total} elements but the implied group has "
            f"{group.order()}")
    for t, c in counts.items():
        if group.element_count_of_order(t) != c:
            raise MalformedStatisticsError(
                f"census has {c} elements of order {t}, the implied group {group} "
                f"has {group.element_count_of_order(t)}")
    return group
