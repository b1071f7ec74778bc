"""Dense linear algebra over prime fields on int64 arrays.

Exact throughout: entries live in [0, p) and p is capped well below the
int64 overflow threshold.  These routines back the search-heavy paths
(fuzzing, coset enumeration over F_p); composite moduli go through the
integer Smith kernel instead.
"""

import numpy as np

_P_MAX = 1 << 20


def _check_prime_size(p: int):
    if p < 2 or p > _P_MAX:
        raise ValueError(f"prime modulus out of supported range: {p}")


def as_modp(a, p: int) -> np.ndarray:
    arr = np.asarray(a)
    if arr.dtype == object:
        arr = np.vectorize(lambda v: int(v) % p, otypes=[np.int64])(arr) if arr.size else arr.astype(np.int64)
    else:
        arr = arr.astype(np.int64)
    return arr % p


def inv_mod(a: int, p: int) -> int:
    return pow(int(a) % p, p - 2, p)


def rref(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form mod p; returns (R, pivot column list)."""
    _check_prime_size(p)
    r = a.astype(np.int64, copy=True) % p
    nrows, ncols = r.shape
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        if row >= nrows:
            break
        hits = np.nonzero(r[row:, col])[0]
        if hits.size == 0:
            continue
        pr = row + int(hits[0])
        if pr != row:
            r[[row, pr]] = r[[pr, row]]
        r[row] = (r[row] * inv_mod(r[row, col], p)) % p
        others = np.nonzero(r[:, col])[0]
        others = others[others != row]
        if others.size:
            r[others] = (r[others] - np.outer(r[others, col], r[row])) % p
        pivots.append(col)
        row += 1
    return r, pivots


def rank(a: np.ndarray, p: int) -> int:
    if a.size == 0:
        return 0
    _, pivots = rref(a, p)
    return len(pivots)


def kernel(a: np.ndarray, p: int) -> np.ndarray:
    """Columns form a basis of the null space of a over F_p."""
    nrows, ncols = a.shape
    if ncols == 0:
        return np.zeros((0, 0), dtype=np.int64)
    if nrows == 0:
        return np.eye(ncols, dtype=np.int64)
    r, pivots = rref(a, p)
    free = [j for j in range(ncols) if j not in pivots]
    basis = np.zeros((ncols, len(free)), dtype=np.int64)
    for k, j in enumerate(free):
        basis[j, k] = 1
        for row_idx, pc in enumerate(pivots):
            basis[pc, k] = (-int(r[row_idx, j])) % p
    return basis


def solve(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """One particular solution of A x = b mod p, or None."""
    nrows, ncols = a.shape
    b = as_modp(b, p).reshape(-1)
    if b.shape[0] != nrows:
        raise ValueError("rhs length mismatch")
    if ncols == 0:
        return np.zeros(0, dtype=np.int64) if not b.any() else None
    aug = np.hstack([a % p, b.reshape(-1, 1)])
    r, pivots = rref(aug, p)
    if ncols in pivots:
        return None
    x = np.zeros(ncols, dtype=np.int64)
    for row_idx, pc in enumerate(pivots):
        x[pc] = r[row_idx, ncols]
    return x


def solve_with_kernel(a: np.ndarray, b: np.ndarray, p: int):
    x = solve(a, b, p)
    if x is None:
        return None
    return x, kernel(a, p)


def diagonalize(a: np.ndarray, p: int):
    """U A V = diag(1,...,1,0,...) over F_p, with all four transforms.

    Returns (u, uinv, v, vinv, rank).
    """
    _check_prime_size(p)
    d = a.astype(np.int64, copy=True) % p
    nr, nc = d.shape
    u = np.eye(nr, dtype=np.int64)
    uinv = np.eye(nr, dtype=np.int64)
    v = np.eye(nc, dtype=np.int64)
    vinv = np.eye(nc, dtype=np.int64)
    t = 0
    while t < min(nr, nc):
        sub = d[t:, t:]
        nz = np.nonzero(sub)
        if nz[0].size == 0:
            break
        i, j = int(nz[0][0]) + t, int(nz[1][0]) + t
        if i != t:
            d[[t, i]] = d[[i, t]]
            u[[t, i]] = u[[i, t]]
            uinv[:, [t, i]] = uinv[:, [i, t]]
        if j != t:
            d[:, [t, j]] = d[:, [j, t]]
            v[:, [t, j]] = v[:, [j, t]]
            vinv[[t, j]] = vinv[[j, t]]
        s = inv_mod(d[t, t], p)
        d[t] = (d[t] * s) % p
        u[t] = (u[t] * s) % p
        uinv[:, t] = (uinv[:, t] * inv_mod(s, p)) % p
        col = np.nonzero(d[:, t])[0]
        col = col[col != t]
        if col.size:
            factors = d[col, t].copy()
            d[col] = (d[col] - np.outer(factors, d[t])) % p
            u[col] = (u[col] - np.outer(factors, u[t])) % p
            uinv[:, t] = (uinv[:, t] + uinv[:, col] @ factors) % p
        rowz = np.nonzero(d[t, :])[0]
        rowz = rowz[rowz != t]
        if rowz.size:
            factors = d[t, rowz].copy()
            d[:, rowz] = (d[:, rowz] - np.outer(d[:, t], factors)) % p
            v[:, rowz] = (v[:, rowz] - np.outer(v[:, t], factors)) % p
            vinv[t, :] = (vinv[t, :] + factors @ vinv[rowz, :]) % p
        t += 1
    return u, uinv, v, vinv, t


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    if a.shape[1] == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    return (a.astype(np.int64) @ b.astype(np.int64)) % p
