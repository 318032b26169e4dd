"""Exact dense integer linear algebra: Smith Normal Form and friends.

Everything works on arbitrary-precision integers; nothing is ever computed
modulo anything.  Matrices are dense and desk-scale (a few hundred rows at
most), so the algorithms favour simplicity and small intermediate entries
over asymptotics: elimination always pivots on a minimal-absolute-value
entry, which in practice keeps the numbers tiny until the very last
diagonal positions.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, lcm

from .abelian import AbelianGroup, InfiniteOrderError


@dataclass(frozen=True)
class IntegerMatrix:
    rows: int
    cols: int
    entries: tuple  # row-major, len == rows * cols

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative dimension")
        object.__setattr__(self, "entries", tuple(int(x) for x in self.entries))
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} "
                f"entries, got {len(self.entries)}")

    @classmethod
    def from_rows(cls, rows) -> "IntegerMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), ncols, tuple(x for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> "IntegerMatrix":
        return cls(n, n, tuple(1 if i == j else 0
                               for i in range(n) for j in range(n)))

    @classmethod
    def zero(cls, rows: int, cols: int) -> "IntegerMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    def at(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def to_rows(self) -> list[list[int]]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def transpose(self) -> "IntegerMatrix":
        return IntegerMatrix(self.cols, self.rows,
                             tuple(self.at(i, j) for j in range(self.cols)
                                   for i in range(self.rows)))

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        a, b = self.to_rows(), other.to_rows()
        bt = list(zip(*b)) if b else []
        out = [sum(x * y for x, y in zip(row, col)) for row in a for col in bt]
        return IntegerMatrix(self.rows, other.cols, tuple(out))

    def is_diagonal(self) -> bool:
        return all(self.at(i, j) == 0
                   for i in range(self.rows) for j in range(self.cols) if i != j)

    def diagonal(self) -> list[int]:
        return [self.at(i, i) for i in range(min(self.rows, self.cols))]


@dataclass(frozen=True)
class SnfResult:
    """U @ M @ V == S with U, V unimodular and S in Smith form."""

    U: IntegerMatrix
    S: IntegerMatrix
    V: IntegerMatrix


def _xgcd(a: int, b: int):
    x, nx = 1, 0
    y, ny = 0, 1
    g, ng = a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    if g < 0:
        x, y, g = -x, -y, -g
    return g, x, y


def _diagonalize(D, need_u: bool, need_v: bool):
    """In-place elimination of the list-of-lists D to a diagonal matrix.

    Returns (U, V) as lists-of-lists (or None where not requested) with
    U @ input @ V == D on exit.  Divisor chain on the diagonal is NOT yet
    enforced here.

    Pivots are cleared Euclid-style: divide, keep the remainder, swap the
    smallest remainder into the pivot seat and go again.  One-shot Bezout
    combinations would clear each entry immediately but their multipliers
    scale with the entries, which blows coordinates up to hundreds of
    kilobits on some Kautz Laplacians; remainder chasing keeps everything
    word-sized.
    """
    m = len(D)
    n = len(D[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)] if need_u else None
    V = [[int(i == j) for j in range(n)] for i in range(n)] if need_v else None

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        if need_u:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for Dr in D:
            Dr[i], Dr[j] = Dr[j], Dr[i]
        if need_v:
            for Vr in V:
                Vr[i], Vr[j] = Vr[j], Vr[i]

    for k in range(min(m, n)):
        best = 0
        bi = bj = -1
        for i in range(k, m):
            Di = D[i]
            for j in range(k, n):
                v = Di[j]
                if v and (bi < 0 or -best < v < best):
                    best, bi, bj = abs(v), i, j
                    if best == 1:
                        break
            if best == 1:
                break
        if bi < 0:
            break  # trailing block is zero
        if bi != k:
            swap_rows(k, bi)
        if bj != k:
            swap_cols(k, bj)
        while True:
            while True:  # clear column k below the pivot
                p = D[k][k]
                Dk = D[k]
                small = 0
                si = -1
                for i in range(k + 1, m):
                    Di = D[i]
                    b = Di[k]
                    if b:
                        q = b // p
                        if q:
                            Di[k:] = [x - q * y
                                      for x, y in zip(Di[k:], Dk[k:])]
                            if need_u:
                                Ui, Uk = U[i], U[k]
                                U[i] = [x - q * y for x, y in zip(Ui, Uk)]
                            b = Di[k]
                        if b and (si < 0 or -small < b < small):
                            small, si = abs(b), i
                if si < 0:
                    break
                swap_rows(k, si)
            while True:  # clear row k right of the pivot
                p = D[k][k]
                small = 0
                sj = -1
                for j in range(k + 1, n):
                    b = D[k][j]
                    if b:
                        q = b // p
                        if q:
                            for Dr in D[k:]:
                                Dr[j] -= q * Dr[k]
                            if need_v:
                                for Vr in V:
                                    Vr[j] -= q * Vr[k]
                            b = D[k][j]
                        if b and (sj < 0 or -small < b < small):
                            small, sj = abs(b), j
                if sj < 0:
                    break
                swap_cols(k, sj)
            # a column swap can reintroduce entries below the pivot
            if all(D[i][k] == 0 for i in range(k + 1, m)):
                break
    return U, V


def _chain_fix_diagonal(diag: list[int]) -> list[int]:
    """gcd/lcm bubble passes until the divisor chain holds, zeros trailing."""
    diag = [abs(x) for x in diag]
    changed = True
    while changed:
        changed = False
        for i in range(len(diag) - 1):
            a, b = diag[i], diag[i + 1]
            if a == 0 and b != 0:
                diag[i], diag[i + 1] = b, 0
                changed = True
            elif a and b and b % a:
                g = gcd(a, b)
                diag[i], diag[i + 1] = g, a * b // g
                changed = True
    return diag


def smith_normal_form(M: IntegerMatrix) -> SnfResult:
    """Smith Normal Form with unimodular transforms: U @ M @ V == S."""
    D = M.to_rows()
    U, V = _diagonalize(D, need_u=True, need_v=True)
    m, n = M.rows, M.cols

    # negative pivots: flip the row
    for i in range(min(m, n)):
        if D[i][i] < 0:
            D[i] = [-x for x in D[i]]
            U[i] = [-x for x in U[i]]

    # zeros trailing: bubble nonzero diagonal entries up by row+col swaps
    def swap(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]
        for Dr in D:
            Dr[i], Dr[j] = Dr[j], Dr[i]
        for Vr in V:
            Vr[i], Vr[j] = Vr[j], Vr[i]

    k = min(m, n)
    nz = [i for i in range(k) if D[i][i] != 0]
    for target, src in enumerate(nz):
        if target != src:
            swap(target, src)
    r = len(nz)

    # enforce d_i | d_{i+1} by 2x2 gcd/lcm steps carrying the transforms
    changed = True
    while changed:
        changed = False
        for i in range(r - 1):
            a, b = D[i][i], D[i + 1][i + 1]
            if b % a == 0:
                continue
            changed = True
            j = i + 1
            # C_i += C_j, then a 2x2 unimodular row block, then clear (i, j)
            for Dr in D:
                Dr[i] += Dr[j]
            for Vr in V:
                Vr[i] += Vr[j]
            g, x, y = _xgcd(a, b)
            ag, bg = a // g, b // g
            Di, Dj = D[i], D[j]
            Ui, Uj = U[i], U[j]
            for jj in range(n):
                s, t = Di[jj], Dj[jj]
                Di[jj] = x * s + y * t
                Dj[jj] = ag * t - bg * s
            for jj in range(m):
                s, t = Ui[jj], Uj[jj]
                Ui[jj] = x * s + y * t
                Uj[jj] = ag * t - bg * s
            q = D[i][j] // g
            for Dr in D:
                Dr[j] -= q * Dr[i]
            for Vr in V:
                Vr[j] -= q * Vr[i]

    return SnfResult(IntegerMatrix.from_rows(U) if m else IntegerMatrix.zero(0, 0),
                     IntegerMatrix.from_rows(D) if m else IntegerMatrix.zero(0, n),
                     IntegerMatrix.from_rows(V) if n else IntegerMatrix.zero(0, 0))


def invariant_factors(M: IntegerMatrix) -> list[int]:
    """Nonzero invariant factors of M, in divisor-chain order.

    Transform-free fast path of :func:`smith_normal_form`.
    """
    D = M.to_rows()
    _diagonalize(D, need_u=False, need_v=False)
    diag = _chain_fix_diagonal([D[i][i] for i in range(min(M.rows, M.cols))])
    return [x for x in diag if x]


def smith_group(M: IntegerMatrix, ambient_dim: int | None = None) -> AbelianGroup:
    """Z^n modulo the integer row span of M (n = number of columns)."""
    n = M.cols if ambient_dim is None else ambient_dim
    if n != M.cols:
        raise ValueError(f"ambient dimension {n} != column count {M.cols}")
    factors = invariant_factors(M)
    return AbelianGroup(n - len(factors),
                        tuple(d for d in factors if d > 1))


def finite_part(M: IntegerMatrix, ambient_dim: int | None = None) -> AbelianGroup:
    """Torsion part of the Smith group (free rank forced to zero)."""
    return smith_group(M, ambient_dim).torsion_part()


def determinant(M: IntegerMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if M.rows != M.cols:
        raise ValueError(f"determinant of non-square {M.rows}x{M.cols} matrix")
    n = M.rows
    if n == 0:
        return 1
    D = M.to_rows()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if D[k][k] == 0:
            for i in range(k + 1, n):
                if D[i][k]:
                    D[k], D[i] = D[i], D[k]
                    sign = -sign
                    break
            else:
                return 0
        pk = D[k][k]
        tail = D[k][k + 1:]
        for i in range(k + 1, n):
            Di = D[i]
            mik = Di[k]
            if mik:
                Di[k + 1:] = [(x * pk - mik * y) // prev
                              for x, y in zip(Di[k + 1:], tail)]
            elif pk != prev:
                Di[k + 1:] = [x * pk // prev for x in Di[k + 1:]]
        prev = pk
    return sign * D[n - 1][n - 1]


def cokernel_element_order(M: IntegerMatrix, v) -> int:
    """Smallest positive k with k*v inside the integer row span of M.

    Works in the Smith basis: with w = v^T V and diagonal s_1, ..., the
    answer is lcm(s_i / gcd(s_i, w_i)) over the nonzero s_i, provided w
    vanishes where the diagonal does (otherwise no multiple ever lands in
    the span and InfiniteOrderError is raised).
    """
    v = [int(x) for x in v]
    if len(v) != M.cols:
        raise ValueError(f"vector length {len(v)} != column count {M.cols}")
    D = M.to_rows()
    _, V = _diagonalize(D, need_u=False, need_v=True)
    diag = [D[i][i] for i in range(min(M.rows, M.cols))]
    # the chain fix alters the lattice basis; redo it with column tracking
    # instead: order only needs s_i and w_i for the *diagonalized* basis,
    # which is already a valid basis of the row span.
    w = [sum(v[i] * V[i][j] for i in range(M.cols)) for j in range(M.cols)]
    order = 1
    for j in range(M.cols):
        s = diag[j] if j < len(diag) else 0
        if s == 0:
            if w[j]:
                raise InfiniteOrderError(
                    f"no multiple of the vector lies in the row span "
                    f"(coordinate {j} is free)")
        else:
            order = lcm(order, abs(s) // gcd(s, w[j]))
    return order


def parse_matrix_text(text: str) -> IntegerMatrix:
    """Parse the CLI matrix format: a "rows cols" line, then the entries.

    Raises ValueError mentioning the offending 1-based line number.
    """
    lines = text.splitlines()
    body = [(i + 1, ln) for i, ln in enumerate(lines) if ln.strip()]
    if not body:
        raise ValueError("line 1: empty matrix file")
    lineno, header = body[0]
    parts = header.split()
    if len(parts) != 2:
        raise ValueError(f"line {lineno}: expected 'rows cols', got {header!r}")
    try:
        rows, cols = int(parts[0]), int(parts[1])
    except ValueError:
        raise ValueError(f"line {lineno}: non-integer dimensions {header!r}") from None
    if rows < 1 or cols < 1:
        raise ValueError(f"line {lineno}: dimensions must be positive")
    if len(body) - 1 != rows:
        raise ValueError(
            f"line {body[-1][0]}: expected {rows} matrix rows, got {len(body) - 1}")
    entries = []
    for r, (lineno, ln) in enumerate(body[1:]):
        fields = ln.split()
        if len(fields) != cols:
            raise ValueError(f"line {lineno}: expected {cols} entries, got {len(fields)}")
        for f in fields:
            try:
                entries.append(int(f))
            except ValueError:
                raise ValueError(f"line {lineno}: bad integer {f!r}") from None
    return IntegerMatrix(rows, cols, tuple(entries))


def read_matrix_file(path) -> IntegerMatrix:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_matrix_text(fh.read())


def format_matrix(M: IntegerMatrix) -> str:
    lines = [f"{M.rows} {M.cols}"]
    lines += [" ".join(str(x) for x in row) for row in M.to_rows()]
    return "\n".join(lines) + "\n"
