"""Dense coefficient kernel for polynomials and truncated series over F_{p^s}.

Coefficient blocks are int64 arrays of shape (n, s): row i holds the s
coordinates of the coefficient of T^i (low degree first).  Entries are kept
in [0, p).  The coordinate reduction u^j -> basis uses the table carried by
the FieldDesc, so everything here works uniformly for s = 1 and s > 1.

Multiplication switches from np.convolve to an FFT path for long operands.
The FFT result is validated (distance from integers) and falls back to exact
chunked convolution if the rounding margin is not comfortable; products here
are small enough (entries < p, p <= 13ish at desk scale) that the fallback
is not expected to trigger.
"""

from __future__ import annotations

import zlib

import numpy as np

_FFT_CUTOFF = 4096


def zeros(field, n: int) -> np.ndarray:
    return np.zeros((n, field.s), dtype=np.int64)


def from_rows(rows) -> np.ndarray:
    return np.array(rows, dtype=np.int64)


def trim(b: np.ndarray) -> np.ndarray:
    n = b.shape[0]
    while n > 0 and not b[n - 1].any():
        n -= 1
    return b[:n]


def is_zero(b: np.ndarray) -> bool:
    return b.shape[0] == 0 or not b.any()


def deg(b: np.ndarray) -> int:
    """Degree of a trimmed block; -1 for zero."""
    return b.shape[0] - 1


def add(a: np.ndarray, b: np.ndarray, field) -> np.ndarray:
    if a.shape[0] < b.shape[0]:
        a, b = b, a
    out = a.copy()
    out[: b.shape[0]] += b
    out %= field.p
    return trim(out)


def sub(a: np.ndarray, b: np.ndarray, field) -> np.ndarray:
    n = max(a.shape[0], b.shape[0])
    out = np.zeros((n, field.s), dtype=np.int64)
    out[: a.shape[0]] = a
    out[: b.shape[0]] -= b
    out %= field.p
    return trim(out)


def neg(a: np.ndarray, field) -> np.ndarray:
    return (-a) % field.p


def _conv1d(x: np.ndarray, y: np.ndarray, p: int) -> np.ndarray:
    if x.shape[0] == 0 or y.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    n = x.shape[0] + y.shape[0] - 1
    if min(x.shape[0], y.shape[0]) <= 64 or n <= _FFT_CUTOFF:
        return np.convolve(x, y) % p
    m = 1
    while m < n:
        m <<= 1
    fx = np.fft.rfft(x.astype(np.float64), m)
    fy = np.fft.rfft(y.astype(np.float64), m)
    c = np.fft.irfft(fx * fy, m)[:n]
    rounded = np.rint(c)
    if np.max(np.abs(c - rounded)) >= 0.25:
        return _conv_chunked(x, y, p)
    return rounded.astype(np.int64) % p


def _conv_chunked(x: np.ndarray, y: np.ndarray, p: int) -> np.ndarray:
    if x.shape[0] < y.shape[0]:
        x, y = y, x
    n = x.shape[0] + y.shape[0] - 1
    out = np.zeros(n, dtype=np.int64)
    step = _FFT_CUTOFF
    for start in range(0, x.shape[0], step):
        piece = np.convolve(x[start : start + step], y)
        out[start : start + piece.shape[0]] += piece
        out[start : start + piece.shape[0]] %= p
    return out % p


def mul(a: np.ndarray, b: np.ndarray, field) -> np.ndarray:
    p, s = field.p, field.s
    if a.shape[0] == 0 or b.shape[0] == 0:
        return np.zeros((0, s), dtype=np.int64)
    n = a.shape[0] + b.shape[0] - 1
    if s == 1:
        return trim(_conv1d(a[:, 0], b[:, 0], p).reshape(-1, 1))
    raw = np.zeros((n, 2 * s - 1), dtype=np.int64)
    for i in range(s):
        col = a[:, i]
        if not col.any():
            continue
        for j in range(s):
            if b[:, j].any():
                raw[:, i + j] = (raw[:, i + j] + _conv1d(col, b[:, j], p)) % p
    red = np.array(field._upow_reduction, dtype=np.int64)  # (2s-1, s)
    return trim(raw @ red % p)


def scalar_mul(a: np.ndarray, c_row, field) -> np.ndarray:
    """Multiply a block by one field element given as its coordinate row."""
    c = np.asarray(c_row, dtype=np.int64)
    if not c.any() or a.shape[0] == 0:
        return np.zeros((0, field.s), dtype=np.int64)
    if field.s == 1:
        return trim(a * int(c[0]) % field.p)
    return trim(a @ mult_matrix(field, c).T % field.p)


def mult_matrix(field, c_row) -> np.ndarray:
    """Matrix M over F_p with M @ coords(x) = coords(c * x)."""
    s, p = field.s, field.p
    red = field._upow_reduction
    m = np.zeros((s, s), dtype=np.int64)
    for j in range(s):
        # column j: c * u^j written in the basis
        col = [0] * s
        for i, ci in enumerate(c_row):
            if ci:
                row = red[i + j]
                for t in range(s):
                    col[t] = (col[t] + ci * row[t]) % p
        m[:, j] = col
    return m


def row_inverse(field, c_row):
    """Coordinate row of the inverse field element."""
    from .ffield import FieldElement

    x = FieldElement(field, tuple(int(v) % field.p for v in c_row))
    return np.array(x.inverse().coeffs, dtype=np.int64)


def divmod_block(a: np.ndarray, b: np.ndarray, field):
    b = trim(b)
    if b.shape[0] == 0:
        raise ZeroDivisionError("polynomial division by zero")
    a = trim(a).copy()
    db, da = b.shape[0] - 1, a.shape[0] - 1
    if da < db:
        return np.zeros((0, field.s), dtype=np.int64), a
    p, s = field.p, field.s
    inv_lead = row_inverse(field, b[db])
    q = np.zeros((da - db + 1, s), dtype=np.int64)
    if s == 1:
        bcol = b[:, 0]
        acol = a[:, 0]
        il = int(inv_lead[0])
        for i in range(da, db - 1, -1):
            c = acol[i] % p
            if c:
                c = c * il % p
                q[i - db, 0] = c
                acol[i - db : i + 1] = (acol[i - db : i + 1] - c * bcol) % p
        return trim(q), trim(acol.reshape(-1, 1))
    inv_m = mult_matrix(field, inv_lead)
    for i in range(da, db - 1, -1):
        lead = a[i] % p
        if lead.any():
            c = inv_m @ lead % p
            q[i - db] = c
            cm = mult_matrix(field, c)
            a[i - db : i + 1] = (a[i - db : i + 1] - b @ cm.T) % p
    return trim(q), trim(a)


def rem_block(a: np.ndarray, b: np.ndarray, field) -> np.ndarray:
    return divmod_block(a, b, field)[1]


def gcd_block(a: np.ndarray, b: np.ndarray, field) -> np.ndarray:
    a, b = trim(a), trim(b)
    while b.shape[0] > 0:
        a, b = b, rem_block(a, b, field)
    if a.shape[0] == 0:
        return a
    return scalar_mul(a, row_inverse(field, a[-1]), field)


# ---------------------------------------------------------------------------
# modular arithmetic and factorization over a prime field (s = 1)
# ---------------------------------------------------------------------------


def _col(a: np.ndarray) -> np.ndarray:
    return a.reshape(-1, 1)


def mulmod(a: np.ndarray, b: np.ndarray, f: np.ndarray, field) -> np.ndarray:
    return rem_block(mul(a, b, field), f, field)


def powmod(a: np.ndarray, e: int, f: np.ndarray, field) -> np.ndarray:
    result = zeros(field, 1)
    result[0, 0] = 1
    a = rem_block(a, f, field)
    while e:
        if e & 1:
            result = mulmod(result, a, f, field)
        a = mulmod(a, a, f, field)
        e >>= 1
    return result


def derivative(a: np.ndarray, field) -> np.ndarray:
    if a.shape[0] <= 1:
        return np.zeros((0, field.s), dtype=np.int64)
    mults = np.arange(1, a.shape[0], dtype=np.int64).reshape(-1, 1)
    return trim(a[1:] * mults % field.p)


def monic(a: np.ndarray, field) -> np.ndarray:
    a = trim(a)
    if a.shape[0] == 0:
        return a
    return scalar_mul(a, row_inverse(field, a[-1]), field)


def pth_root(a: np.ndarray, field) -> np.ndarray:
    """For f with zero derivative over F_p: f = g(X^p); return g.

    Coefficients are Frobenius-fixed in a prime field, so g just reads off
    every p-th coefficient.
    """
    return a[:: field.p].copy()


def squarefree_decomposition(f: np.ndarray, field) -> list[tuple[np.ndarray, int]]:
    """Monic square-free parts with multiplicities; prime fields only."""
    p = field.p
    f = monic(f, field)
    if f.shape[0] <= 1:
        return []
    out: dict[int, np.ndarray] = {}
    df = derivative(f, field)
    if is_zero(df):
        inner = pth_root(f, field)
        for g, m in squarefree_decomposition(inner, field):
            out[m * p] = g
        return sorted(((g, m) for m, g in out.items()), key=lambda t: t[1])
    c = gcd_block(f, df, field)
    w = divmod_block(f, c, field)[0]
    i = 1
    while w.shape[0] > 1:
        y = gcd_block(w, c, field)
        z = divmod_block(w, y, field)[0]
        if z.shape[0] > 1:
            out[i] = monic(z, field)
        w = y
        c = divmod_block(c, y, field)[0]
        i += 1
    if c.shape[0] > 1:
        inner = pth_root(c, field)
        for g, m in squarefree_decomposition(inner, field):
            mp = m * p
            if mp in out:
                out[mp] = mul(out[mp], g, field)
            else:
                out[mp] = g
    return sorted(((g, m) for m, g in out.items()), key=lambda t: t[1])


def distinct_degree(f: np.ndarray, field) -> list[tuple[np.ndarray, int]]:
    """Split a monic square-free f into products of same-degree irreducibles."""
    p = field.p
    out = []
    x = zeros(field, 2)
    x[1, 0] = 1
    h = x.copy()  # x^(p^j) mod f as j advances
    j = 0
    f = monic(f, field)
    while f.shape[0] - 1 >= 2 * (j + 1):
        j += 1
        h = rem_block(h, f, field)
        h = _frob_step(h, f, field)
        g = gcd_block(sub(h, x, field), f, field)
        if g.shape[0] > 1:
            out.append((g, j))
            f = divmod_block(f, g, field)[0]
    if f.shape[0] > 1:
        out.append((f, f.shape[0] - 1))
    return out


def _frob_step(h: np.ndarray, f: np.ndarray, field) -> np.ndarray:
    """h -> h^p mod f by square and multiply on the exponent p."""
    p = field.p
    result = zeros(field, 1)
    result[0, 0] = 1
    base = h
    e = p
    while e:
        if e & 1:
            result = mulmod(result, base, f, field)
        e >>= 1
        if e:
            base = mulmod(base, base, f, field)
    return result


def equal_degree(f: np.ndarray, d: int, field, rng: np.random.Generator) -> list[np.ndarray]:
    """Cantor-Zassenhaus split of a product of degree-d irreducibles (p odd)."""
    n = f.shape[0] - 1
    if n == d:
        return [monic(f, field)]
    p = field.p
    e = (p**d - 1) // 2
    while True:
        r = trim(_col(rng.integers(0, p, size=n, dtype=np.int64)))
        if r.shape[0] == 0:
            continue
        g = powmod(r, e, f, field)
        if g.shape[0] == 0:
            continue
        g = g.copy()
        g[0, 0] = (g[0, 0] - 1) % p
        g = gcd_block(trim(g), f, field)
        if 0 < g.shape[0] - 1 < n:
            other = divmod_block(f, g, field)[0]
            return equal_degree(g, d, field, rng) + equal_degree(other, d, field, rng)


def factor(f: np.ndarray, field) -> tuple[np.ndarray, list[tuple[np.ndarray, int]]]:
    """Full factorization over a prime field: (unit row, [(monic irreducible, mult)])."""
    if field.s != 1:
        raise ValueError("factorization is implemented over prime fields only")
    f = trim(f)
    if f.shape[0] == 0:
        raise ZeroDivisionError("cannot factor the zero polynomial")
    unit = f[-1].copy()
    f = monic(f, field)
    if f.shape[0] == 1:
        return unit, []
    seed = field.p * 1000003 + zlib.crc32(f.tobytes())
    rng = np.random.default_rng(seed)
    found: list[tuple[np.ndarray, int]] = []
    for part, mult in squarefree_decomposition(f, field):
        for prod, d in distinct_degree(part, field):
            for irr in equal_degree(prod, d, field, rng):
                found.append((irr, mult))
    found.sort(key=lambda t: (t[0].shape[0], [int(v) for v in t[0][:, 0]]))
    return unit, found
