"""Exact integer linear algebra.

Sparse integer matrices, Smith normal form, cokernels with explicit
projections (the workhorse behind homology), and linear congruence solving.
Everything is exact and uses Python's arbitrary precision integers.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, Sequence

from sympy import factorint

Vec = dict  # sparse integer vector: index -> nonzero int


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) >= 0 and x*a + y*b = g."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


class IntMat:
    """Sparse integer matrix, stored column-wise with no explicit zeros."""

    __slots__ = ("rows", "cols", "_c")

    def __init__(self, rows: int, cols: int, columns: dict[int, dict[int, int]] | None = None):
        self.rows = rows
        self.cols = cols
        self._c: dict[int, dict[int, int]] = {}
        if columns:
            for j, col in columns.items():
                if not 0 <= j < cols:
                    raise IndexError(f"column {j} out of range")
                clean = {}
                for i, v in col.items():
                    if not 0 <= i < rows:
                        raise IndexError(f"row {i} out of range")
                    if v:
                        clean[i] = int(v)
                if clean:
                    self._c[j] = clean

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]], ncols: int | None = None) -> "IntMat":
        m = len(rows)
        n = len(rows[0]) if m else (ncols or 0)
        cols: dict[int, dict[int, int]] = {}
        for i, row in enumerate(rows):
            if len(row) != n:
                raise ValueError("ragged matrix")
            for j, v in enumerate(row):
                if v:
                    cols.setdefault(j, {})[i] = int(v)
        out = cls(m, n)
        out._c = cols
        return out

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: dict[tuple[int, int], int]) -> "IntMat":
        c: dict[int, dict[int, int]] = {}
        for (i, j), v in entries.items():
            c.setdefault(j, {})[i] = v
        return cls(rows, cols, c)

    @classmethod
    def identity(cls, n: int) -> "IntMat":
        out = cls(n, n)
        out._c = {i: {i: 1} for i in range(n)}
        return out

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def column(self, j: int) -> dict[int, int]:
        return dict(self._c.get(j, {}))

    def columns(self) -> list[dict[int, int]]:
        return [dict(self._c.get(j, {})) for j in range(self.cols)]

    def entries(self) -> dict[tuple[int, int], int]:
        return {(i, j): v for j, col in self._c.items() for i, v in col.items()}

    def nnz(self) -> int:
        return sum(len(c) for c in self._c.values())

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self._c.get(j, {}).get(i, 0)

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for j, col in self._c.items():
            for i, v in col.items():
                out[i][j] = v
        return out

    def transpose(self) -> "IntMat":
        c: dict[int, dict[int, int]] = {}
        for j, col in self._c.items():
            for i, v in col.items():
                c.setdefault(i, {})[j] = v
        out = IntMat(self.cols, self.rows)
        out._c = c
        return out

    def apply(self, x: dict[int, int]) -> dict[int, int]:
        """Return M x for a sparse vector x indexed by columns."""
        out: dict[int, int] = {}
        for j, a in x.items():
            if not a:
                continue
            for i, v in self._c.get(j, {}).items():
                s = out.get(i, 0) + a * v
                if s:
                    out[i] = s
                else:
                    out.pop(i, None)
        return out

    def __matmul__(self, other: "IntMat") -> "IntMat":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out = IntMat(self.rows, other.cols)
        for j, col in other._c.items():
            prod = self.apply(col)
            if prod:
                out._c[j] = prod
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntMat):
            return NotImplemented
        return self.shape == other.shape and self._c == other._c

    def is_zero(self) -> bool:
        return not self._c

    def hstack(self, other: "IntMat") -> "IntMat":
        if self.rows != other.rows:
            raise ValueError("row mismatch")
        out = IntMat(self.rows, self.cols + other.cols)
        out._c = {j: dict(c) for j, c in self._c.items()}
        for j, c in other._c.items():
            out._c[self.cols + j] = dict(c)
        return out

    def __repr__(self) -> str:
        return f"IntMat({self.rows}x{self.cols}, nnz={self.nnz()})"


# ---------------------------------------------------------------------------
# dense Smith normal form with transforms


@dataclass
class SnfResult:
    """U @ M @ V == S, U and V unimodular, diag(S) = d1 | d2 | ... (>= 0)."""

    U: IntMat
    S: IntMat
    V: IntMat
    diagonal: list[int]
    Uinv: IntMat | None = None
    Vinv: IntMat | None = None

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


def _ident(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _snf_dense(A: list[list[int]], m: int, n: int, want_u: bool = True, want_v: bool = True):
    """In-place Smith form of the dense m x n list-of-rows matrix A.

    Returns (diag, U, Uinv, V, Vinv); transforms are None when not requested.
    Pivot rule: smallest magnitude in the trailing block, lowest (row, col) on ties.
    """
    U = _ident(m) if want_u else None
    Ui = _ident(m) if want_u else None
    V = _ident(n) if want_v else None
    Vi = _ident(n) if want_v else None

    def row_addmul(i, t, q):  # row_i -= q * row_t
        Ai, At = A[i], A[t]
        for j in range(n):
            if At[j]:
                Ai[j] -= q * At[j]
        if U is not None:
            Ui_, Ut = U[i], U[t]
            for j in range(m):
                if Ut[j]:
                    Ui_[j] -= q * Ut[j]
            for r in Ui:  # Uinv: col_t += q * col_i
                if r[i]:
                    r[t] += q * r[i]

    def col_addmul(j, t, q):  # col_j -= q * col_t
        for r in A:
            if r[t]:
                r[j] -= q * r[t]
        if V is not None:
            for r in V:
                if r[t]:
                    r[j] -= q * r[t]
            Vt, Vj = Vi[t], Vi[j]  # Vinv: row_t += q * row_j
            for k in range(n):
                if Vj[k]:
                    Vt[k] += q * Vj[k]

    def row_swap(i, t):
        A[i], A[t] = A[t], A[i]
        if U is not None:
            U[i], U[t] = U[t], U[i]
            for r in Ui:
                r[i], r[t] = r[t], r[i]

    def col_swap(j, t):
        for r in A:
            r[j], r[t] = r[t], r[j]
        if V is not None:
            for r in V:
                r[j], r[t] = r[t], r[j]
            Vi[j], Vi[t] = Vi[t], Vi[j]

    def row_neg(t):
        A[t] = [-v for v in A[t]]
        if U is not None:
            U[t] = [-v for v in U[t]]
            for r in Ui:
                r[t] = -r[t]

    diag = []
    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            row_swap(i, t)
        if j != t:
            col_swap(j, t)
        while True:
            p = A[t][t]
            moved = False
            for i in range(t + 1, m):
                a = A[i][t]
                if a:
                    row_addmul(i, t, a // p)
                    if A[i][t] and abs(A[i][t]) < abs(p) and not moved:
                        moved = True
            for j in range(t + 1, n):
                a = A[t][j]
                if a:
                    col_addmul(j, t, a // p)
            # bring the smallest leftover in row/col t to the pivot
            cand = None
            for i in range(t + 1, m):
                if A[i][t] and (cand is None or abs(A[i][t]) < cand[0]):
                    cand = (abs(A[i][t]), "r", i)
            for j in range(t + 1, n):
                if A[t][j] and (cand is None or abs(A[t][j]) < cand[0]):
                    cand = (abs(A[t][j]), "c", j)
            if cand is not None:
                if cand[1] == "r":
                    row_swap(cand[2], t)
                else:
                    col_swap(cand[2], t)
                continue
            bad = None
            for i in range(t + 1, m):
                row = A[i]
                for j in range(t + 1, n):
                    if row[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_addmul(t, bad, -1)  # row_t += row_bad
        if A[t][t] < 0:
            row_neg(t)
        diag.append(A[t][t])
    return diag, U, Ui, V, Vi


def smith_normal_form(M: IntMat, *, check: bool = False, inverses: bool = False) -> SnfResult:
    """Smith normal form with unimodular transforms (dense; for moderate sizes)."""
    m, n = M.shape
    A = M.to_dense()
    diag, U, Ui, V, Vi = _snf_dense(A, m, n)
    k = min(m, n)
    diag = diag + [0] * (k - len(diag))
    S = IntMat(m, n, {j: {j: d} for j, d in enumerate(diag) if d})
    res = SnfResult(
        U=IntMat.from_dense(U, m) if m else IntMat(0, 0),
        S=S,
        V=IntMat.from_dense(V, n) if n else IntMat(0, 0),
        diagonal=diag,
        Uinv=(IntMat.from_dense(Ui, m) if m else IntMat(0, 0)) if inverses else None,
        Vinv=(IntMat.from_dense(Vi, n) if n else IntMat(0, 0)) if inverses else None,
    )
    if check:
        check_snf(M, res)
    return res


def check_snf(M: IntMat, res: SnfResult) -> None:
    from .errors import InternalInvariantError

    if res.U @ M @ res.V != res.S:
        raise InternalInvariantError("U M V != S")
    nz = [d for d in res.diagonal if d]
    if any(b % a for a, b in zip(nz, nz[1:])):
        raise InternalInvariantError("divisibility chain broken")


# ---------------------------------------------------------------------------
# sparse cokernel


class Cokernel:
    """The cokernel Z^rows / (column span of M) with an explicit projection.

    Unit pivots are eliminated sparsely (sparsest column first, then the
    shortest row among its unit entries, lowest index on ties).  What is left
    has small rank; it is reduced to a lattice basis and finished by a dense
    Smith form.  The composed projection is kept as a replayable list of
    elimination steps so any vector can be mapped to invariant-factor
    coordinates, and zero-extension gives a section.
    """

    def __init__(self, M: IntMat):
        self.nrows = M.rows
        cols = [dict(c) for c in M._c.values()]
        self._steps: list[tuple[int, dict[int, int], int]] = []
        rest = self._eliminate_units(cols)
        self._finish(rest)

    def _eliminate_units(self, cols: list[dict[int, int]]) -> list[dict[int, int]]:
        R: dict[int, set[int]] = {}
        for j, c in enumerate(cols):
            for i in c:
                R.setdefault(i, set()).add(j)
        heap = [(len(c), j) for j, c in enumerate(cols) if c]
        heapq.heapify(heap)
        deferred: set[int] = set()
        steps = self._steps
        while heap:
            k, j = heapq.heappop(heap)
            c = cols[j]
            if k != len(c) or j in deferred or not c:
                continue
            best = None
            for i, v in c.items():
                if v == 1 or v == -1:
                    key = (len(R[i]), i)
                    if best is None or key < best:
                        best = key
            if best is None:
                deferred.add(j)
                continue
            r = best[1]
            p = c[r]
            for j2 in list(R[r]):
                if j2 == j:
                    continue
                c2 = cols[j2]
                q = c2[r] * p
                for i, v in c.items():
                    nv = c2.get(i, 0) - q * v
                    if nv:
                        if i not in c2:
                            R[i].add(j2)
                        c2[i] = nv
                    else:
                        del c2[i]
                        R[i].discard(j2)
                deferred.discard(j2)
                if c2:
                    heapq.heappush(heap, (len(c2), j2))
            for i in c:
                R[i].discard(j)
            del R[r]
            snap = {i: v for i, v in c.items() if i != r}
            steps.append((r, snap, p))
            cols[j] = {}
        self._dead = {s[0] for s in steps}
        return [c for c in cols if c]

    def _finish(self, rest: list[dict[int, int]]) -> None:
        alive = [i for i in range(self.nrows) if i not in self._dead]
        pos = {i: k for k, i in enumerate(alive)}
        self._alive = alive
        # lattice basis of the leftover columns, keyed by leading (lowest) index
        basis: dict[int, dict[int, int]] = {}
        for c in rest:
            v = {pos[i]: a for i, a in c.items()}
            while v:
                r = min(v)
                b = basis.get(r)
                if b is None:
                    if v[r] < 0:
                        v = {i: -a for i, a in v.items()}
                    basis[r] = v
                    break
                a, bb = v[r], b[r]
                if a % bb == 0:
                    q = a // bb
                    v = _axpy(v, b, -q)
                else:
                    g, x, y = xgcd(a, bb)
                    nb = _lincomb(v, x, b, y)
                    v = _lincomb(v, bb // g, b, -(a // g))
                    basis[r] = nb
        m = len(alive)
        keys = sorted(basis)
        A = [[0] * len(keys) for _ in range(m)]
        for j, r in enumerate(keys):
            for i, a in basis[r].items():
                A[i][j] = a
        diag, U, Ui, _, _ = _snf_dense(A, m, len(keys), want_u=True, want_v=False)
        self._U = U
        self._Ui = Ui
        self._rest_diag = diag
        self.rank = len(self._steps) + len(diag)
        self.divisors = [1] * len(self._steps) + diag
        # invariant-factor positions (in the compact alive coordinates)
        self.torsion = [(k, d) for k, d in enumerate(diag) if d > 1]
        self.free_rank = m - len(diag)

    @property
    def torsion_orders(self) -> list[int]:
        return [d for _, d in self.torsion]

    def _reduce(self, x: dict[int, int]) -> list[int]:
        x = {i: a for i, a in x.items() if a}
        for r, snap, p in self._steps:
            t = x.pop(r, 0)
            if t:
                q = t * p
                for i, v in snap.items():
                    nv = x.get(i, 0) - q * v
                    if nv:
                        x[i] = nv
                    else:
                        x.pop(i, None)
        m = len(self._alive)
        y = [0] * m
        for k, i in enumerate(self._alive):
            a = x.get(i)
            if a:
                y[k] = a
        U = self._U
        return [sum(U[k][l] * y[l] for l in range(m) if y[l]) for k in range(m)]

    def coordinates(self, x: dict[int, int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """(torsion residues, free coordinates) of the class of x."""
        z = self._reduce(x)
        tors = tuple(z[k] % d for k, d in self.torsion)
        free = tuple(z[len(self._rest_diag):])
        return tors, free

    def lift_torsion(self, t: int) -> dict[int, int]:
        """An integer vector whose class is the t-th torsion generator."""
        k = self.torsion[t][0]
        out = {}
        for row, i in zip(self._Ui, self._alive):
            if row[k]:
                out[i] = row[k]
        return out


def _axpy(v: dict[int, int], b: dict[int, int], q: int) -> dict[int, int]:
    out = dict(v)
    for i, a in b.items():
        nv = out.get(i, 0) + q * a
        if nv:
            out[i] = nv
        else:
            out.pop(i, None)
    return out


def _lincomb(v: dict[int, int], x: int, b: dict[int, int], y: int) -> dict[int, int]:
    out: dict[int, int] = {}
    for i, a in v.items():
        if x * a:
            out[i] = x * a
    for i, a in b.items():
        nv = out.get(i, 0) + y * a
        if nv:
            out[i] = nv
        else:
            out.pop(i, None)
    return out


def image_divisors(M: IntMat) -> list[int]:
    """Nonzero Smith diagonal entries of M (sparse path, no transforms)."""
    return Cokernel(M).divisors


def rank(M: IntMat) -> int:
    return Cokernel(M).rank


def integer_kernel(M: IntMat) -> IntMat:
    """Basis of {x : M x = 0} as the columns of the returned matrix."""
    res = smith_normal_form(M)
    r = res.rank
    n = M.cols
    V = res.V
    cols = {k: V.column(r + k) for k in range(n - r)}
    return IntMat(n, n - r, cols)


# ---------------------------------------------------------------------------
# congruence solving


def _solve_mod_2(rows: list[dict[int, int]], b: Sequence[int], ncols: int) -> list[int] | None:
    rhs_bit = 1 << ncols
    piv: dict[int, int] = {}  # column -> reduced row (bitmask, rhs at bit ncols)
    pivmask = 0
    for row, bi in zip(rows, b):
        x = 0
        for j, a in row.items():
            if a & 1:
                x ^= 1 << j
        if bi & 1:
            x ^= rhs_bit
        hit = x & pivmask
        while hit:
            low = hit & -hit
            x ^= piv[low.bit_length() - 1]
            hit ^= low
        body = x & (rhs_bit - 1)
        if not body:
            if x:
                return None
            continue
        low = body & -body
        c = low.bit_length() - 1
        for k, pr in piv.items():
            if pr & low:
                piv[k] = pr ^ x
        piv[c] = x
        pivmask |= low
    sol = [0] * ncols
    for c, pr in piv.items():
        if pr & rhs_bit:
            sol[c] = 1
    return sol


def _solve_prime_power(rows: list[dict[int, int]], b: Sequence[int], ncols: int, p: int, k: int) -> list[int] | None:
    q = p ** k

    def val(a: int) -> int:
        v = 0
        while a % p == 0 and v < k:
            a //= p
            v += 1
        return v

    R = []
    for row, bi in zip(rows, b):
        r = {j: a % q for j, a in row.items() if a % q}
        R.append([r, bi % q])
    colidx: dict[int, set[int]] = {}
    for idx, (r, _) in enumerate(R):
        for j in r:
            colidx.setdefault(j, set()).add(idx)
    remaining = set(range(len(R)))
    pivots: list[tuple[int, int, int]] = []  # (row idx, col, valuation)
    for v in range(k):
        while True:
            found = None
            for idx in sorted(remaining):
                r = R[idx][0]
                for j in sorted(r):
                    if val(r[j]) == v:
                        found = (idx, j)
                        break
                if found:
                    break
            if found is None:
                break
            idx, c = found
            remaining.discard(idx)
            pr, pb = R[idx]
            a = pr[c]
            u = a // p ** v
            uinv = pow(u, -1, q)
            for other in list(colidx.get(c, ())):
                if other not in remaining:
                    continue
                orow, ob = R[other]
                m = (orow[c] // p ** v) * uinv % q
                for j, x in pr.items():
                    nv = (orow.get(j, 0) - m * x) % q
                    if nv:
                        if j not in orow:
                            colidx.setdefault(j, set()).add(other)
                        orow[j] = nv
                    else:
                        orow.pop(j, None)
                        colidx[j].discard(other)
                R[other][1] = (ob - m * pb) % q
            pivots.append((idx, c, v))
    for idx in remaining:
        if R[idx][1] % q:
            return None
    sol = [0] * ncols
    for idx, c, v in reversed(pivots):
        pr, pb = R[idx]
        s = pb
        for j, x in pr.items():
            if j != c:
                s -= x * sol[j]
        s %= q
        pv = p ** v
        if s % pv:
            return None
        u = pr[c] // pv
        mod = q // pv
        sol[c] = (s // pv) * pow(u, -1, mod) % mod if mod > 1 else 0
    return sol


def solve_mod(rows: Iterable[dict[int, int]], modulus: int, b: Sequence[int], ncols: int) -> list[int] | None:
    """Solve rows . x = b (mod modulus); entries of the answer lie in [0, modulus)."""
    rows = list(rows)
    if modulus == 1:
        return [0] * ncols
    parts = []
    for p, k in sorted(factorint(modulus).items()):
        if p == 2 and k == 1:
            s = _solve_mod_2(rows, b, ncols)
        else:
            s = _solve_prime_power(rows, b, ncols, p, k)
        if s is None:
            return None
        parts.append((p ** k, s))
    if len(parts) == 1:
        return parts[0][1]
    sol = []
    for j in range(ncols):
        x, m = 0, 1
        for q, s in parts:
            # combine x mod m with s[j] mod q
            g, a, _ = xgcd(m, q)
            x = (x + (s[j] - x) * a % q * m) % (m * q)
            m *= q
        sol.append(x)
    return sol


def solve_mixed_congruences(M: IntMat, moduli: Sequence[int], b: Sequence[int]) -> list[int] | None:
    """Find x with (M x)_i == b_i mod moduli[i] (modulus 0: exact equality).

    Returns a deterministic solution or None when the system is inconsistent.
    When all moduli agree and are positive the answer is reduced into
    [0, modulus); otherwise it is reduced against the lattice of homogeneous
    solutions (for one unknown this is the least non-negative solution).
    """
    m, n = M.shape
    if len(moduli) != m or len(b) != m:
        raise ValueError("moduli / right-hand side length mismatch")
    if m == 0:
        return [0] * n
    if len(set(moduli)) == 1 and moduli[0] > 0:
        return solve_mod(_row_dicts(M), moduli[0], b, n)
    slack = [i for i in range(m) if moduli[i]]
    A = M.hstack(IntMat(m, len(slack), {k: {i: -moduli[i]} for k, i in enumerate(slack)}))
    res = smith_normal_form(A)
    Ub = res.U.apply({i: v for i, v in enumerate(b) if v})
    N = A.cols
    z = {}
    for i in range(m):
        t = Ub.get(i, 0)
        d = res.diagonal[i] if i < len(res.diagonal) else 0
        if d == 0:
            if t:
                return None
        else:
            if t % d:
                return None
            if t:
                z[i] = t // d
    y = res.V.apply(z)
    x = [y.get(j, 0) for j in range(n)]
    # reduce against the homogeneous solution lattice projected to x
    r = res.rank
    gens = []
    for k in range(r, N):
        col = res.V.column(k)
        g = [col.get(j, 0) for j in range(n)]
        if any(g):
            gens.append(g)
    for j, g in _hermite_rows(gens, n):
        x = [xi - (x[j] // g[j]) * gi for xi, gi in zip(x, g)]
    return x


def _hermite_rows(gens: list[list[int]], n: int) -> list[tuple[int, list[int]]]:
    """Echelon basis (positive leading entries) of the row lattice spanned by gens."""
    basis: dict[int, list[int]] = {}
    for v in gens:
        v = list(v)
        while any(v):
            r = next(j for j in range(n) if v[j])
            b = basis.get(r)
            if b is None:
                if v[r] < 0:
                    v = [-a for a in v]
                basis[r] = v
                break
            g, x, y = xgcd(v[r], b[r])
            if v[r] % b[r] == 0:
                q = v[r] // b[r]
                v = [a - q * c for a, c in zip(v, b)]
            else:
                nb = [x * a + y * c for a, c in zip(v, b)]
                v = [(b[r] // g) * a - (v[r] // g) * c for a, c in zip(v, b)]
                basis[r] = nb
    return [(r, basis[r]) for r in sorted(basis)]


def _row_dicts(M: IntMat) -> list[dict[int, int]]:
    rows: list[dict[int, int]] = [dict() for _ in range(M.rows)]
    for j, col in M._c.items():
        for i, v in col.items():
            rows[i][j] = v
    return rows
