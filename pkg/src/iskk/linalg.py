"""Exact rational linear algebra: RREF, kernels, spans, quotients, LDL^T PSD checks.

All matrices are lists/tuples of rows of fractions.Fraction; nothing here is
floating point.
"""

from fractions import Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def zeros(n: int) -> list:
    return [ZERO] * n


def identity(n: int) -> list:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def mat_vec(m, v) -> list:
    return [sum((row[j] * v[j] for j in range(len(v)) if v[j]), ZERO) for row in m]


def mat_mul(a, b) -> list:
    n, k = len(a), len(b)
    cols = len(b[0]) if b else 0
    out = [[ZERO] * cols for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for j in range(k):
            x = ai[j]
            if x:
                bj = b[j]
                for c in range(cols):
                    if bj[c]:
                        oi[c] += x * bj[c]
    return out


def transpose(m) -> list:
    return [list(col) for col in zip(*m)] if m else []


def vec_add(u, v) -> list:
    return [a + b for a, b in zip(u, v)]


def vec_sub(u, v) -> list:
    return [a - b for a, b in zip(u, v)]


def vec_scale(u, c) -> list:
    return [c * a for a in u]


def is_zero_vec(v) -> bool:
    return all(x == 0 for x in v)


def rref(rows):
    """Reduced row echelon form. Returns (reduced nonzero rows, pivot columns)."""
    work = [list(map(frac, r)) for r in rows]
    pivots = []
    r = 0
    ncols = len(work[0]) if work else 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(work)):
            if work[i][c]:
                piv = i
                break
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        lead = work[r][c]
        if lead != 1:
            work[r] = [x / lead for x in work[r]]
        for i in range(len(work)):
            if i != r and work[i][c]:
                f = work[i][c]
                work[i] = [a - f * b for a, b in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
        if r == len(work):
            break
    return work[:r], pivots


def rank(rows) -> int:
    return len(rref(rows)[0])


def nullspace(m) -> list:
    """Basis of {v : m v = 0} for a matrix given as rows."""
    if not m:
        return []
    ncols = len(m[0])
    red, pivots = rref(m)
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = zeros(ncols)
        v[free] = ONE
        for i, p in enumerate(pivots):
            v[p] = -red[i][free]
        basis.append(v)
    return basis


def solve(m, b):
    """One solution x of m x = b, or None. m given as rows."""
    if not m:
        return None if any(b) else []
    aug = [list(row) + [bv] for row, bv in zip(m, b)]
    red, pivots = rref(aug)
    ncols = len(m[0])
    for row in red:
        if all(x == 0 for x in row[:ncols]) and row[ncols] != 0:
            return None
    x = zeros(ncols)
    for i, p in enumerate(pivots):
        if p == ncols:
            return None
        x[p] = red[i][ncols]
    return x


def mat_inv(m):
    """Inverse of a square rational matrix, or None if singular."""
    n = len(m)
    aug = [list(map(frac, m[i])) + identity(n)[i] for i in range(n)]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        return None
    return [row[n:] for row in red]


class Span:
    """Row span with reduced basis; supports membership and coordinates."""

    def __init__(self, vectors=()):
        self.rows = []
        self.pivots = []
        for v in vectors:
            self.add(v)

    def add(self, v) -> bool:
        """Reduce v against the span; add if independent. Returns True if added."""
        v = self._reduce(list(map(frac, v)))
        for c, x in enumerate(v):
            if x:
                v = [a / x for a in v]
                # keep rows sorted by pivot and fully reduced
                for i, row in enumerate(self.rows):
                    if row[c]:
                        self.rows[i] = [a - row[c] * b for a, b in zip(row, v)]
                pos = sum(1 for p in self.pivots if p < c)
                self.rows.insert(pos, v)
                self.pivots.insert(pos, c)
                return True
        return False

    def _reduce(self, v):
        for row, p in zip(self.rows, self.pivots):
            if v[p]:
                f = v[p]
                v = [a - f * b for a, b in zip(v, row)]
        return v

    def contains(self, v) -> bool:
        return is_zero_vec(self._reduce(list(map(frac, v))))

    def coords(self, v):
        """Coefficients of v over the reduced basis rows, or None."""
        v = list(map(frac, v))
        cs = [v[p] for p in self.pivots]
        if is_zero_vec(self._reduce(v)):
            return cs
        return None

    @property
    def dim(self) -> int:
        return len(self.rows)


class Basis:
    """Independent vectors with coordinate solving in the given order."""

    def __init__(self, vectors):
        self.vectors = [list(map(frac, v)) for v in vectors]
        n = len(self.vectors)
        self._rows = []    # internal rref rows
        self._pivots = []
        self._trans = []   # rref row as a combination of self.vectors
        for idx, v in enumerate(self.vectors):
            row = list(v)
            t = zeros(n)
            t[idx] = ONE
            for r, p, tr in zip(self._rows, self._pivots, self._trans):
                if row[p]:
                    f = row[p]
                    row = [a - f * b for a, b in zip(row, r)]
                    t = [a - f * b for a, b in zip(t, tr)]
            piv = next((c for c, x in enumerate(row) if x), None)
            if piv is None:
                raise ValueError(f"vector {idx} is dependent on its predecessors")
            lead = row[piv]
            row = [a / lead for a in row]
            t = [a / lead for a in t]
            for i in range(len(self._rows)):
                if self._rows[i][piv]:
                    f = self._rows[i][piv]
                    self._rows[i] = [a - f * b for a, b in zip(self._rows[i], row)]
                    self._trans[i] = [a - f * b for a, b in zip(self._trans[i], t)]
            self._rows.append(row)
            self._pivots.append(piv)
            self._trans.append(t)

    @property
    def dim(self):
        return len(self.vectors)

    def coords(self, v):
        """Coefficients of v over the original vectors, or None."""
        v = list(map(frac, v))
        out = zeros(self.dim)
        for r, p, tr in zip(self._rows, self._pivots, self._trans):
            if v[p]:
                f = v[p]
                v = [a - f * b for a, b in zip(v, r)]
                out = [a + f * b for a, b in zip(out, tr)]
        if not is_zero_vec(v):
            return None
        return out


class QuotientSpace:
    """Ambient space modulo a relation span, with reduced representatives."""

    def __init__(self, ambient_dim: int, relations=()):
        self.ambient_dim = ambient_dim
        self.span = Span(relations)
        self.free = [c for c in range(ambient_dim) if c not in set(self.span.pivots)]

    @property
    def dim(self) -> int:
        return self.ambient_dim - self.span.dim

    def reduce(self, v) -> list:
        return self.span._reduce(list(map(frac, v)))

    def to_coords(self, v) -> list:
        red = self.reduce(v)
        return [red[c] for c in self.free]

    def lift(self, coords) -> list:
        v = zeros(self.ambient_dim)
        for c, x in zip(self.free, coords):
            v[c] = frac(x)
        return self.reduce(v)


def psd_certificate(m):
    """Exact pivoted LDL^T check that a symmetric rational matrix is PSD.

    Returns (True, None) or (False, witness) where witness identifies the
    failing pivot: negative diagonal entry, or a nonzero row with a fully
    zero diagonal (which PSD forbids).
    """
    n = len(m)
    a = [list(map(frac, row)) for row in m]
    idx = list(range(n))
    for step in range(n):
        piv, best = None, ZERO
        for i in range(step, n):
            d = a[i][i]
            if d < 0:
                return False, {"kind": "negative_diagonal", "index": idx[i], "value": str(d)}
            if d > best:
                piv, best = i, d
        if piv is None:
            for i in range(step, n):
                for j in range(step, n):
                    if a[i][j] != 0:
                        return False, {
                            "kind": "zero_diagonal_nonzero_entry",
                            "index": (idx[i], idx[j]),
                            "value": str(a[i][j]),
                        }
            return True, None
        if piv != step:
            a[step], a[piv] = a[piv], a[step]
            for row in a:
                row[step], row[piv] = row[piv], row[step]
            idx[step], idx[piv] = idx[piv], idx[step]
        d = a[step][step]
        for i in range(step + 1, n):
            f = a[i][step] / d
            if f:
                for j in range(step, n):
                    a[i][j] -= f * a[step][j]
    return True, None
