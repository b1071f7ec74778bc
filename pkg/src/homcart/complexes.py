"""Bounded complexes of finitely generated free modules over Z or Z/m.

Grading is cohomological: the differential in degree i maps degree i to
degree i+1 and is stored as a matrix of shape rank(i+1) x rank(i).  A chain
map f : X -> Y has components f_i of shape rank_Y(i) x rank_X(i) satisfying
d_Y(i) f_i = f_{i+1} d_X(i).  A homotopy h between parallel maps f and g has
components h_i : X^i -> Y^(i-1) with f_i - g_i = d_Y(i-1) h_i + h_{i+1} d_X(i);
the witness equation is checked on construction.  The shift X[1] has
rank(i) = rank_X(i+1) and differential -d_X(i+1).

Over a modular ring all entries are kept canonical in [0, m); equality of
matrices is therefore plain equality.  Homology is computed over Z only;
residue-ring questions are answered by lifting and modular solving.
"""

from dataclasses import dataclass

import numpy as np

from . import modp
from .intmat import (
    DimensionMismatch,
    FGAbelianGroup,
    IntMatrix,
    smith_normal_form,
    solve_linear,
)


class ComplexError(ValueError):
    """A complex, chain map or homotopy failed its defining equations."""

    def __init__(self, message: str, degree: int | None = None):
        super().__init__(message)
        self.degree = degree


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class Ring:
    """Coefficient ring: Z when modulus is None, else Z/m (m >= 2)."""

    modulus: int | None = None

    def __post_init__(self):
        if self.modulus is not None and self.modulus < 2:
            raise ValueError("modulus must be at least 2")

    @property
    def is_integers(self) -> bool:
        return self.modulus is None

    @property
    def is_prime_field(self) -> bool:
        return self.modulus is not None and _is_prime(self.modulus)

    def canon(self, m: IntMatrix) -> IntMatrix:
        return m if self.modulus is None else m.reduce_mod(self.modulus)

    def matrices_equal(self, a: IntMatrix, b: IntMatrix) -> bool:
        if self.modulus is None:
            return a == b
        return a.reduce_mod(self.modulus) == b.reduce_mod(self.modulus)

    def __str__(self):
        return "Z" if self.modulus is None else f"Z/{self.modulus}"

    def to_json(self):
        return "Z" if self.modulus is None else {"mod": self.modulus}

    @classmethod
    def from_json(cls, data) -> "Ring":
        if data == "Z":
            return cls(None)
        if isinstance(data, dict) and "mod" in data:
            return cls(int(data["mod"]))
        raise ValueError(f"unrecognized ring descriptor: {data!r}")


ZZ = Ring(None)


def Zmod(m: int) -> Ring:
    return Ring(int(m))


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    message: str = ""
    degree: int | None = None


class Complex:
    """Bounded complex of free modules, validated on construction."""

    __slots__ = ("ring", "_ranks", "_diffs")

    def __init__(self, ring: Ring, ranks: dict[int, int], differentials: dict[int, IntMatrix]):
        clean_ranks = {int(i): int(r) for i, r in ranks.items() if int(r) != 0}
        if any(r < 0 for r in clean_ranks.values()):
            raise ComplexError("negative rank")
        clean_diffs: dict[int, IntMatrix] = {}
        for i, m in differentials.items():
            i = int(i)
            rs = clean_ranks.get(i, 0)
            rt = clean_ranks.get(i + 1, 0)
            if rs == 0 or rt == 0:
                if not m.is_zero():
                    raise ComplexError(f"differential at degree {i} maps to/from rank 0", degree=i)
                continue
            if m.shape != (rt, rs):
                raise ComplexError(
                    f"differential at degree {i} has shape {m.shape}, expected {(rt, rs)}",
                    degree=i,
                )
            clean_diffs[i] = ring.canon(m)
        for i in clean_diffs:
            if i + 1 in clean_diffs:
                comp = clean_diffs[i + 1] @ clean_diffs[i]
                if not ring.canon(comp).is_zero():
                    raise ComplexError(
                        f"differentials do not compose to zero at degree {i}", degree=i
                    )
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "_ranks", clean_ranks)
        object.__setattr__(self, "_diffs", clean_diffs)

    def __setattr__(self, *a):
        raise AttributeError("Complex is immutable")

    def degrees(self) -> list[int]:
        return sorted(self._ranks)

    def rank(self, i: int) -> int:
        return self._ranks.get(i, 0)

    @property
    def min_degree(self) -> int | None:
        return min(self._ranks) if self._ranks else None

    @property
    def max_degree(self) -> int | None:
        return max(self._ranks) if self._ranks else None

    def total_rank(self) -> int:
        return sum(self._ranks.values())

    def differential(self, i: int) -> IntMatrix:
        got = self._diffs.get(i)
        if got is not None:
            return got
        return IntMatrix.zeros(self.rank(i + 1), self.rank(i))

    def is_zero(self) -> bool:
        return not self._ranks

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Complex)
            and self.ring == other.ring
            and self._ranks == other._ranks
            and self._diffs == other._diffs
        )

    def __hash__(self):
        return hash((self.ring, tuple(sorted(self._ranks.items()))))

    def __repr__(self):
        parts = ", ".join(f"{i}:{r}" for i, r in sorted(self._ranks.items()))
        return f"Complex({self.ring}; ranks {{{parts}}})"


def validate_data(ring: Ring, ranks: dict[int, int], differentials: dict[int, IntMatrix]) -> ValidationReport:
    """Check complex data without constructing; reports the first failure."""
    try:
        Complex(ring, ranks, differentials)
    except ComplexError as e:
        return ValidationReport(False, str(e), e.degree)
    return ValidationReport(True)


class ChainMap:
    """Degreewise map between complexes over the same ring."""

    __slots__ = ("source", "target", "_comps")

    def __init__(self, source: Complex, target: Complex, components: dict[int, IntMatrix], check: bool = True):
        if source.ring != target.ring:
            raise ComplexError("chain map between different rings")
        ring = source.ring
        comps: dict[int, IntMatrix] = {}
        for i in set(source.degrees()) & set(target.degrees()):
            rs, rt = source.rank(i), target.rank(i)
            m = components.get(i)
            if m is None:
                m = IntMatrix.zeros(rt, rs)
            if m.shape != (rt, rs):
                raise ComplexError(
                    f"component at degree {i} has shape {m.shape}, expected {(rt, rs)}", degree=i
                )
            comps[i] = ring.canon(m)
        for i, m in components.items():
            i = int(i)
            if i not in comps and not m.is_zero():
                raise ComplexError(f"nonzero component at degree {i} outside common support", degree=i)
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "_comps", comps)
        if check:
            bad = self.first_chain_violation()
            if bad is not None:
                raise ComplexError(f"chain condition fails at degree {bad}", degree=bad)

    def __setattr__(self, *a):
        raise AttributeError("ChainMap is immutable")

    def first_chain_violation(self) -> int | None:
        ring = self.source.ring
        for i in sorted(set(self.source.degrees()) | set(self.target.degrees())):
            if self.source.rank(i) == 0 or self.target.rank(i + 1) == 0:
                continue
            lhs = self.target.differential(i) @ self.component(i)
            rhs = self.component(i + 1) @ self.source.differential(i)
            if not ring.matrices_equal(lhs, rhs):
                return i
        return None

    def component(self, i: int) -> IntMatrix:
        got = self._comps.get(i)
        if got is not None:
            return got
        return IntMatrix.zeros(self.target.rank(i), self.source.rank(i))

    def components(self) -> dict[int, IntMatrix]:
        return dict(self._comps)

    def compose(self, other: "ChainMap") -> "ChainMap":
        """self o other (apply `other` first)."""
        if other.target != self.source:
            raise DimensionMismatch("chain maps do not compose")
        comps = {}
        for i in set(other.source.degrees()) & set(self.target.degrees()):
            comps[i] = self.component(i) @ other.component(i)
        return ChainMap(other.source, self.target, comps, check=False)

    def __add__(self, other: "ChainMap") -> "ChainMap":
        self._require_parallel(other)
        return ChainMap(
            self.source, self.target,
            {i: self.component(i) + other.component(i) for i in self._comps},
            check=False,
        )

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        self._require_parallel(other)
        return ChainMap(
            self.source, self.target,
            {i: self.component(i) - other.component(i) for i in self._comps},
            check=False,
        )

    def __neg__(self) -> "ChainMap":
        return ChainMap(self.source, self.target, {i: -m for i, m in self._comps.items()}, check=False)

    def scale(self, k: int) -> "ChainMap":
        return ChainMap(self.source, self.target, {i: m.scale(k) for i, m in self._comps.items()}, check=False)

    def shift(self) -> "ChainMap":
        """f[1] : X[1] -> Y[1], components f[1]_i = f_{i+1}."""
        return ChainMap(
            shift(self.source), shift(self.target),
            {i - 1: m for i, m in self._comps.items()},
            check=False,
        )

    def is_zero(self) -> bool:
        ring = self.source.ring
        return all(ring.canon(m).is_zero() for m in self._comps.values())

    def _require_parallel(self, other: "ChainMap"):
        if self.source != other.source or self.target != other.target:
            raise DimensionMismatch("chain maps are not parallel")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ChainMap)
            and self.source == other.source
            and self.target == other.target
            and self._comps == other._comps
        )

    def __hash__(self):
        return hash((self.source, self.target, tuple(sorted(self._comps.items(), key=lambda kv: kv[0]))))

    def __repr__(self):
        return f"ChainMap({self.source!r} -> {self.target!r})"


def identity_map(c: Complex) -> ChainMap:
    return ChainMap(c, c, {i: IntMatrix.identity(c.rank(i)) for i in c.degrees()}, check=False)


def zero_map(x: Complex, y: Complex) -> ChainMap:
    return ChainMap(x, y, {}, check=False)


class Homotopy:
    """Witness that two parallel chain maps agree in the homotopy category.

    Components h_i : X^i -> Y^(i-1); the defining equation
    f_i - g_i = d_Y(i-1) h_i + h_{i+1} d_X(i) is verified on construction.
    """

    __slots__ = ("lhs", "rhs", "_comps")

    def __init__(self, lhs: ChainMap, rhs: ChainMap, components: dict[int, IntMatrix], check: bool = True):
        lhs._require_parallel(rhs)
        x, y = lhs.source, lhs.target
        ring = x.ring
        comps = {}
        for i in x.degrees():
            rs = x.rank(i)
            rt = y.rank(i - 1)
            if rs == 0 or rt == 0:
                continue
            m = components.get(i)
            if m is None:
                m = IntMatrix.zeros(rt, rs)
            if m.shape != (rt, rs):
                raise ComplexError(f"homotopy component at degree {i} has shape {m.shape}, expected {(rt, rs)}", degree=i)
            comps[i] = ring.canon(m)
        for i, m in components.items():
            i = int(i)
            if i not in comps and not m.is_zero():
                raise ComplexError(f"nonzero homotopy component at impossible degree {i}", degree=i)
        object.__setattr__(self, "lhs", lhs)
        object.__setattr__(self, "rhs", rhs)
        object.__setattr__(self, "_comps", comps)
        if check:
            bad = self._first_violation()
            if bad is not None:
                raise ComplexError(f"homotopy witness equation fails at degree {bad}", degree=bad)

    def __setattr__(self, *a):
        raise AttributeError("Homotopy is immutable")

    def component(self, i: int) -> IntMatrix:
        got = self._comps.get(i)
        if got is not None:
            return got
        return IntMatrix.zeros(self.lhs.target.rank(i - 1), self.lhs.source.rank(i))

    def components(self) -> dict[int, IntMatrix]:
        return dict(self._comps)

    def _first_violation(self) -> int | None:
        x, y = self.lhs.source, self.lhs.target
        ring = x.ring
        for i in sorted(set(x.degrees()) | set(y.degrees())):
            if x.rank(i) == 0 or y.rank(i) == 0:
                continue
            want = self.lhs.component(i) - self.rhs.component(i)
            acc = IntMatrix.zeros(y.rank(i), x.rank(i))
            if y.rank(i - 1) > 0:
                acc = acc + self.target_differential(i - 1) @ self.component(i)
            if x.rank(i + 1) > 0:
                acc = acc + self.component(i + 1) @ x.differential(i)
            if not ring.matrices_equal(want, acc):
                return i
        return None

    def target_differential(self, i: int) -> IntMatrix:
        return self.lhs.target.differential(i)

    def negate(self) -> "Homotopy":
        return Homotopy(self.rhs, self.lhs, {i: -m for i, m in self._comps.items()}, check=False)

    def __repr__(self):
        return f"Homotopy({self.lhs!r} ~ {self.rhs!r})"


def shift(c: Complex) -> Complex:
    """c[1]: rank(i) = rank_c(i+1) and differential(i) = -d_c(i+1)."""
    ranks = {i - 1: r for i, r in ((d, c.rank(d)) for d in c.degrees())}
    diffs = {i - 1: -c.differential(i) for i in c.degrees() if c.rank(i + 1) > 0 and c.rank(i) > 0}
    return Complex(c.ring, ranks, diffs)


def direct_sum(x: Complex, y: Complex) -> Complex:
    if x.ring != y.ring:
        raise ComplexError("direct sum over different rings")
    ranks = {}
    for i in set(x.degrees()) | set(y.degrees()):
        ranks[i] = x.rank(i) + y.rank(i)
    diffs = {}
    for i in ranks:
        if ranks.get(i + 1, 0) == 0 or ranks[i] == 0:
            continue
        diffs[i] = IntMatrix.block(
            [
                [x.differential(i), IntMatrix.zeros(x.rank(i + 1), y.rank(i))],
                [IntMatrix.zeros(y.rank(i + 1), x.rank(i)), y.differential(i)],
            ]
        )
    return Complex(x.ring, ranks, diffs)


def cone(f: ChainMap) -> tuple[Complex, ChainMap, ChainMap]:
    """Mapping cone of f : X -> Y.

    Degree i is Y^i + X^(i+1) with differential [[d_Y, f], [0, -d_X]];
    returns (cone, inclusion of Y, projection to X[1]).  The composite
    projection o inclusion is zero on the nose.
    """
    x, y = f.source, f.target
    ranks = {}
    for i in set(y.degrees()) | {d - 1 for d in x.degrees()}:
        r = y.rank(i) + x.rank(i + 1)
        if r:
            ranks[i] = r
    diffs = {}
    for i in ranks:
        if ranks.get(i + 1, 0) == 0:
            continue
        diffs[i] = IntMatrix.block(
            [
                [y.differential(i), f.component(i + 1)],
                [IntMatrix.zeros(x.rank(i + 2), y.rank(i)), -x.differential(i + 1)],
            ]
        )
    cn = Complex(x.ring, ranks, diffs)
    incl = ChainMap(
        y, cn,
        {
            i: IntMatrix.vstack([IntMatrix.identity(y.rank(i)), IntMatrix.zeros(x.rank(i + 1), y.rank(i))])
            for i in y.degrees()
            if cn.rank(i) > 0
        },
        check=False,
    )
    proj = ChainMap(
        cn, shift(x),
        {
            i: IntMatrix.hstack([IntMatrix.zeros(x.rank(i + 1), y.rank(i)), IntMatrix.identity(x.rank(i + 1))])
            for i in ranks
            if x.rank(i + 1) > 0
        },
        check=False,
    )
    return cn, incl, proj


# ---------------------------------------------------------------------------
# linear systems in degreewise matrix unknowns


class _BlockSystem:
    """Assembles equations  sum_k  L_k @ VAR_k @ R_k = RHS  over matrix unknowns.

    Vectorization is row-major, so a term L @ X @ R contributes
    kron(L, R^T) on the columns of X.
    """

    def __init__(self, ring: Ring):
        self.ring = ring
        self._int64 = ring.is_prime_field
        self.vars: dict[object, tuple[int, int, int]] = {}  # name -> (offset, rows, cols)
        self._size = 0
        self._rows = 0
        self._eqs: list[tuple[int, int, int, list, np.ndarray]] = []

    def add_var(self, name, rows: int, cols: int):
        if rows * cols == 0 or name in self.vars:
            return
        self.vars[name] = (self._size, rows, cols)
        self._size += rows * cols

    def add_equation(self, rows: int, cols: int, terms, rhs: IntMatrix):
        """terms: iterable of (var name, L IntMatrix | None, R IntMatrix | None)."""
        if rows * cols == 0:
            return
        live = [(n, l, r) for (n, l, r) in terms if n in self.vars]
        self._eqs.append((self._rows, rows, cols, live, rhs.array))
        self._rows += rows * cols

    def _assemble(self):
        dtype = np.int64 if self._int64 else object
        p = self.ring.modulus
        a = np.zeros((self._rows, self._size), dtype=dtype)
        b = np.zeros(self._rows, dtype=dtype)
        for row0, rows, cols, terms, rhs in self._eqs:
            if self._int64:
                b[row0 : row0 + rows * cols] = modp.as_modp(rhs, p).reshape(-1)
            else:
                b[row0 : row0 + rows * cols] = rhs.reshape(-1)
            for name, left, right in terms:
                off, vr, vc = self.vars[name]
                l = left.array if left is not None else IntMatrix.identity(rows).array
                r = right.array if right is not None else IntMatrix.identity(cols).array
                if self._int64:
                    l = modp.as_modp(l, p)
                    r = modp.as_modp(r, p)
                a[row0 : row0 + rows * cols, off : off + vr * vc] += np.kron(l, r.T)
        if self._int64:
            a %= p
        return a, b

    def solve_particular(self) -> dict | None:
        """One solution as {var name: IntMatrix} or None."""
        a, b = self._assemble()
        if self._size == 0:
            if self._int64:
                return {} if not b.any() else None
            return {} if not any(b) else None
        if self._int64:
            x = modp.solve(a, b, self.ring.modulus)
            if x is None:
                return None
        else:
            res = solve_linear(IntMatrix(a), list(b), modulus=self.ring.modulus)
            if res is None:
                return None
            x = res[0]
        return self.unpack(x)

    def unpack(self, x) -> dict:
        out = {}
        for name, (off, vr, vc) in self.vars.items():
            chunk = x[off : off + vr * vc]
            mat = np.empty((vr, vc), dtype=object)
            flat = list(chunk)
            for i in range(vr):
                for j in range(vc):
                    mat[i, j] = int(flat[i * vc + j])
            out[name] = IntMatrix(mat)
        return out


def _homotopy_system(f: ChainMap, g: ChainMap) -> _BlockSystem:
    x, y = f.source, f.target
    sys = _BlockSystem(x.ring)
    for i in x.degrees():
        if y.rank(i - 1) > 0:
            sys.add_var(i, y.rank(i - 1), x.rank(i))
    for i in sorted(set(x.degrees()) | set(y.degrees())):
        rs, rt = x.rank(i), y.rank(i)
        if rs == 0 or rt == 0:
            continue
        terms = [
            (i, y.differential(i - 1), None),
            (i + 1, None, x.differential(i)),
        ]
        sys.add_equation(rt, rs, terms, f.component(i) - g.component(i))
    return sys


def homotopic(f: ChainMap, g: ChainMap) -> Homotopy | None:
    """A verified homotopy between parallel maps f and g, if one exists.

    Decided by solving d h + h d = f - g over the coefficient ring.
    """
    f._require_parallel(g)
    sys = _homotopy_system(f, g)
    sol = sys.solve_particular()
    if sol is None:
        return None
    return Homotopy(f, g, sol)


def _acyclic_split_contraction(c: Complex) -> Homotopy | None:
    """Contraction of an exact complex by splitting each degree.

    Over Z exactness of a bounded complex of free modules forces every
    differential to have unit invariant factors, so preimages can be chosen
    integrally; over a prime field only ranks matter.
    """
    degs = c.degrees()
    if not degs:
        return Homotopy(identity_map(c), zero_map(c, c), {}, check=False)
    p = c.ring.modulus
    info = {}
    lo, hi = degs[0], degs[-1]
    for i in range(lo, hi + 1):
        d = c.differential(i)
        if p is None:
            s = smith_normal_form(d)
            r = s.rank
            if any(x != 1 for x in s.diagonal()[:r]):
                return None
            info[i] = (s.u.array, s.v.array, s.vinv.array, r)
        else:
            u, uinv, v, vinv, r = modp.diagonalize(np.array(d.tolist(), dtype=np.int64) if d.rows and d.cols else np.zeros(d.shape, dtype=np.int64), p)
            info[i] = (u, v, vinv, r)
    # exactness: rank d(i-1) + rank d(i) = rank(i)
    for i in range(lo, hi + 1):
        prev_r = info[i - 1][3] if i - 1 in info else 0
        if prev_r + info[i][3] != c.rank(i):
            return None
    comps = {}
    for i in range(lo + 1, hi + 1):
        if c.rank(i) == 0 or c.rank(i - 1) == 0:
            continue
        u_prev, v_prev, _, r_prev = info[i - 1]
        _, v_cur, vinv_cur, r_cur = info[i]
        n = c.rank(i)
        if p is None:
            proj = np.zeros((n, n), dtype=object)
            for j in range(r_cur, n):
                proj[j, j] = 1
            kerproj = v_cur @ proj @ vinv_cur
            h = (v_prev[:, :r_prev] @ (u_prev @ kerproj)[:r_prev, :]) if r_prev else np.zeros((c.rank(i - 1), n), dtype=object)
            comps[i] = IntMatrix(h)
        else:
            proj = np.zeros((n, n), dtype=np.int64)
            for j in range(r_cur, n):
                proj[j, j] = 1
            kerproj = modp.matmul(modp.matmul(v_cur, proj, p), vinv_cur, p)
            h = modp.matmul(v_prev[:, :r_prev], modp.matmul(u_prev, kerproj, p)[:r_prev, :], p) if r_prev else np.zeros((c.rank(i - 1), n), dtype=np.int64)
            comps[i] = IntMatrix(h.astype(object))
    return Homotopy(identity_map(c), zero_map(c, c), comps)


def is_contractible(c: Complex) -> Homotopy | None:
    """A contraction (identity null-homotopic) if the complex is contractible."""
    if c.ring.is_integers or c.ring.is_prime_field:
        return _acyclic_split_contraction(c)
    return homotopic(identity_map(c), zero_map(c, c))


def is_homotopy_equivalence(f: ChainMap) -> Homotopy | None:
    """Witness that f is a homotopy equivalence: a contraction of cone(f)."""
    cn, _, _ = cone(f)
    return is_contractible(cn)


def homotopy_inverse(f: ChainMap, contraction: Homotopy | None = None) -> ChainMap | None:
    """A homotopy inverse of an equivalence f : X -> Y.

    Extracted from a contraction of cone(f): the block of the contraction
    mapping the Y-part to the X[1]-part is a chain map Y -> X inverting f up
    to homotopy on both sides.
    """
    if contraction is None:
        contraction = is_homotopy_equivalence(f)
        if contraction is None:
            return None
    x, y = f.source, f.target
    comps = {}
    for i in y.degrees():
        if x.rank(i) == 0:
            continue
        h = contraction.component(i)  # cone^i -> cone^(i-1)
        comps[i] = IntMatrix(h.array[y.rank(i - 1) :, : y.rank(i)])
    return ChainMap(y, x, comps)


def homology(c: Complex) -> dict[int, FGAbelianGroup]:
    """H^i = ker d(i) / im d(i-1) by invariant factors, over Z only."""
    if not c.ring.is_integers:
        raise ComplexError("homology is computed over the integers; reduce or lift explicitly")
    out = {}
    degs = c.degrees()
    if not degs:
        return out
    for i in range(degs[0], degs[-1] + 1):
        n = c.rank(i)
        if n == 0:
            out[i] = FGAbelianGroup(0)
            continue
        s = smith_normal_form(c.differential(i))
        k = n - s.rank
        kbasis = s.v.array[:, s.rank :]
        if k == 0:
            out[i] = FGAbelianGroup(0)
            continue
        img = c.differential(i - 1)
        if img.cols == 0:
            out[i] = FGAbelianGroup(k)
            continue
        coords = _coords_in_lattice(kbasis, img.array)
        from .intmat import cokernel as _cok

        out[i] = _cok(IntMatrix(coords))
    return out


def _coords_with_snf(s, shape: tuple[int, int], vectors: np.ndarray) -> np.ndarray:
    rows, k = shape
    diag = s.diagonal()
    y = s.u.array @ vectors
    out = np.zeros((k, vectors.shape[1]), dtype=object)
    for col in range(vectors.shape[1]):
        z = np.zeros(k, dtype=object)
        for j in range(rows):
            dj = diag[j] if j < len(diag) else 0
            if j < k and dj != 0:
                if y[j, col] % dj != 0:
                    raise AssertionError("vector is not in the lattice")
                z[j] = y[j, col] // dj
            elif y[j, col] != 0:
                raise AssertionError("vector is not in the lattice")
        out[:, col] = s.v.array @ z
    return out


def _coords_in_lattice(basis: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """Integer coordinates of each column of `vectors` in the lattice `basis`.

    Requires the columns to lie in the lattice; this is asserted.
    """
    bm = IntMatrix(basis)
    return _coords_with_snf(smith_normal_form(bm), bm.shape, vectors)


# ---------------------------------------------------------------------------
# Hom in the homotopy category


def _cm_layout(x: Complex, y: Complex) -> list[tuple[int, int, int, int]]:
    """(degree, rows, cols, offset) for the chain-map variable space."""
    out = []
    off = 0
    for i in sorted(set(x.degrees()) & set(y.degrees())):
        r, c = y.rank(i), x.rank(i)
        if r and c:
            out.append((i, r, c, off))
            off += r * c
    return out


def _h_layout(x: Complex, y: Complex) -> list[tuple[int, int, int, int]]:
    out = []
    off = 0
    for i in sorted(x.degrees()):
        r, c = y.rank(i - 1), x.rank(i)
        if r and c:
            out.append((i, r, c, off))
            off += r * c
    return out


def _layout_size(layout) -> int:
    return layout[-1][3] + layout[-1][1] * layout[-1][2] if layout else 0


def _chain_condition_matrix(x: Complex, y: Complex, dtype) -> np.ndarray:
    """Matrix of f |-> (d_Y f - f d_X) on the chain-map variable space."""
    layout = _cm_layout(x, y)
    n = _layout_size(layout)
    pos = {i: (r, c, off) for (i, r, c, off) in layout}
    rows = []
    for i in sorted(set(x.degrees())):
        rt, rs = y.rank(i + 1), x.rank(i)
        if rt == 0 or rs == 0:
            continue
        block = np.zeros((rt * rs, n), dtype=dtype)
        if i in pos:
            r, c, off = pos[i]
            dmat = y.differential(i).array
            block[:, off : off + r * c] += np.kron(
                dmat.astype(dtype) if dtype is np.int64 else dmat,
                np.eye(c, dtype=np.int64) if dtype is np.int64 else IntMatrix.identity(c).array,
            )
        if i + 1 in pos:
            r, c, off = pos[i + 1]
            dmat = x.differential(i).array
            ident = np.eye(r, dtype=np.int64) if dtype is np.int64 else IntMatrix.identity(r).array
            block[:, off : off + r * c] -= np.kron(ident, (dmat.astype(dtype) if dtype is np.int64 else dmat).T)
        rows.append(block)
    if not rows:
        return np.zeros((0, n), dtype=dtype)
    return np.vstack(rows)


def _boundary_matrix(x: Complex, y: Complex, dtype) -> np.ndarray:
    """Matrix of h |-> d_Y h + h d_X from homotopy space to chain-map space."""
    cm = _cm_layout(x, y)
    hl = _h_layout(x, y)
    n = _layout_size(cm)
    m = _layout_size(hl)
    hpos = {i: (r, c, off) for (i, r, c, off) in hl}
    out = np.zeros((n, m), dtype=dtype)
    for i, r, c, off in cm:
        if i in hpos:
            hr, hc, hoff = hpos[i]
            dmat = y.differential(i - 1).array
            ident = np.eye(c, dtype=np.int64) if dtype is np.int64 else IntMatrix.identity(c).array
            out[off : off + r * c, hoff : hoff + hr * hc] += np.kron(
                dmat.astype(dtype) if dtype is np.int64 else dmat, ident
            )
        if i + 1 in hpos:
            hr, hc, hoff = hpos[i + 1]
            dmat = x.differential(i).array
            ident = np.eye(r, dtype=np.int64) if dtype is np.int64 else IntMatrix.identity(r).array
            out[off : off + r * c, hoff : hoff + hr * hc] += np.kron(
                ident, (dmat.astype(dtype) if dtype is np.int64 else dmat).T
            )
    return out


def vec_of_chain_map(f: ChainMap) -> np.ndarray:
    layout = _cm_layout(f.source, f.target)
    v = np.zeros(_layout_size(layout), dtype=object)
    for i, r, c, off in layout:
        v[off : off + r * c] = f.component(i).array.reshape(-1)
    return v


def chain_map_of_vec(x: Complex, y: Complex, v) -> ChainMap:
    layout = _cm_layout(x, y)
    comps = {}
    for i, r, c, off in layout:
        mat = np.empty((r, c), dtype=object)
        flat = list(v[off : off + r * c])
        for a in range(r):
            for b in range(c):
                mat[a, b] = int(flat[a * c + b])
        comps[i] = IntMatrix(mat)
    return ChainMap(x, y, comps)


class HomGroupPresentation:
    """Hom in the homotopy category as a finitely generated abelian group.

    Coordinates returned by `lookup` are (torsion residues..., free
    integers...) aligned with `torsion_reps` + `free_reps`; two chain maps get
    equal coordinates exactly when they are homotopic.
    """

    def __init__(self, x: Complex, y: Complex):
        if x.ring != y.ring:
            raise ComplexError("hom group over different rings")
        self.x = x
        self.y = y
        self.ring = x.ring
        t = _chain_condition_matrix(x, y, object)
        n = t.shape[1]
        bd = _boundary_matrix(x, y, object)
        m = x.ring.modulus
        if m is None:
            if t.shape[0] == 0:
                kbasis = np.eye(n, dtype=object) if n else np.zeros((0, 0), dtype=object)
            else:
                s = smith_normal_form(IntMatrix(t))
                kbasis = s.v.array[:, s.rank :]
            rels = bd
        else:
            # lattice of solutions of T x = 0 (mod m): project the integer
            # kernel of [T | m I], then extract a basis of the column span
            if t.shape[0] == 0:
                lat_gens = np.eye(n, dtype=object) * 1 if n else np.zeros((0, 0), dtype=object)
            else:
                aug = np.hstack([t, np.eye(t.shape[0], dtype=object) * m])
                sk = smith_normal_form(IntMatrix(aug))
                lat_gens = sk.v.array[:n, sk.rank :]
            if n:
                lat_gens = np.hstack([lat_gens, np.eye(n, dtype=object) * m])
                sg = smith_normal_form(IntMatrix(lat_gens))
                if sg.rank != n:
                    raise AssertionError("solution lattice mod m must have full rank")
                kbasis = sg.uinv.array @ sg.d.array[:, :n]
            else:
                kbasis = np.zeros((0, 0), dtype=object)
            rels = np.hstack([bd, np.eye(n, dtype=object) * m]) if n else bd
        self._kbasis = kbasis
        self._ksnf = smith_normal_form(IntMatrix(kbasis)) if kbasis.size else None
        k = kbasis.shape[1]
        if rels.shape[1] == 0 or k == 0:
            coords = np.zeros((k, rels.shape[1]), dtype=object)
        else:
            coords = _coords_with_snf(self._ksnf, kbasis.shape, rels)
        srel = smith_normal_form(IntMatrix(coords))
        diag = srel.diagonal()
        self._u = srel.u.array
        self._uinv = srel.uinv.array
        self._torsion_idx = [j for j, d in enumerate(diag) if d >= 2]
        self._torsion = [diag[j] for j in self._torsion_idx]
        rank_rel = sum(1 for d in diag if d != 0)
        self._free_idx = list(range(rank_rel, k))
        self.group = FGAbelianGroup(len(self._free_idx), tuple(self._torsion))

    def _rep_from_k(self, kvec) -> ChainMap:
        return chain_map_of_vec(self.x, self.y, self._kbasis @ kvec)

    @property
    def torsion_reps(self) -> list[ChainMap]:
        return [self._rep_from_k(self._uinv[:, j]) for j in self._torsion_idx]

    @property
    def free_reps(self) -> list[ChainMap]:
        return [self._rep_from_k(self._uinv[:, j]) for j in self._free_idx]

    def reps(self) -> list[ChainMap]:
        return self.torsion_reps + self.free_reps

    def lookup(self, f: ChainMap) -> tuple[int, ...]:
        """Coordinates of the homotopy class of f."""
        if f.source != self.x or f.target != self.y:
            raise DimensionMismatch("chain map does not belong to this hom group")
        v = vec_of_chain_map(f)
        if self._kbasis.shape[1] == 0:
            return ()
        coords = _coords_with_snf(self._ksnf, self._kbasis.shape, v.reshape(-1, 1))[:, 0]
        y = self._u @ coords
        tors = tuple(int(y[j]) % self._torsion[a] for a, j in enumerate(self._torsion_idx))
        free = tuple(int(y[j]) for j in self._free_idx)
        return tors + free

    def same_class(self, f: ChainMap, g: ChainMap) -> bool:
        return self.lookup(f) == self.lookup(g)


def hom_group(x: Complex, y: Complex) -> HomGroupPresentation:
    """Chain maps modulo null-homotopic maps, with explicit representatives."""
    return HomGroupPresentation(x, y)


def reduce_mod(obj, m: int):
    """Entrywise reduction of a complex, chain map, or homotopy into Z/m."""
    if m < 2:
        raise ValueError("modulus must be at least 2")
    if isinstance(obj, Complex):
        if not obj.ring.is_integers:
            raise ComplexError("reduce_mod expects integer coefficients")
        ring = Zmod(m)
        return Complex(ring, {i: obj.rank(i) for i in obj.degrees()}, {i: obj.differential(i) for i in obj.degrees() if obj.rank(i + 1) > 0})
    if isinstance(obj, ChainMap):
        src = reduce_mod(obj.source, m)
        tgt = reduce_mod(obj.target, m)
        return ChainMap(src, tgt, obj.components())
    if isinstance(obj, Homotopy):
        lhs = reduce_mod(obj.lhs, m)
        rhs = reduce_mod(obj.rhs, m)
        return Homotopy(lhs, rhs, obj.components())
    raise TypeError(f"cannot reduce object of type {type(obj).__name__}")


# ---------------------------------------------------------------------------
# prime-field hom-space machinery (used by the search and fuzz layers)


class HomModP:
    """Chain maps x -> y over F_p: basis, null-homotopic subspace, classes."""

    def __init__(self, x: Complex, y: Complex):
        p = x.ring.modulus
        if p is None or not x.ring.is_prime_field:
            raise ComplexError("HomModP requires a prime field")
        self.x, self.y, self.p = x, y, p
        self.layout = _cm_layout(x, y)
        self.dim = _layout_size(self.layout)
        t = _chain_condition_matrix(x, y, np.int64) % p
        self.chain_basis = modp.kernel(t, p) if self.dim else np.zeros((0, 0), dtype=np.int64)
        bd = _boundary_matrix(x, y, np.int64) % p
        self.null_gens = bd
        # independent columns of bd inside the chain-map space
        if bd.shape[1]:
            r, pivots = modp.rref(bd.T, p)
            self.null_basis = r[: len(pivots)].T
        else:
            self.null_basis = np.zeros((self.dim, 0), dtype=np.int64)
        # quotient class basis: chain basis columns independent from null space
        stacked = np.hstack([self.null_basis, self.chain_basis])
        _, pivots = modp.rref(stacked, p)
        nn = self.null_basis.shape[1]
        self.class_cols = [j - nn for j in pivots if j >= nn]
        self.class_basis = self.chain_basis[:, self.class_cols] if self.class_cols else np.zeros((self.dim, 0), dtype=np.int64)

    def to_map(self, v) -> ChainMap:
        return chain_map_of_vec(self.x, self.y, np.asarray(v, dtype=np.int64) % self.p)

    def vec(self, f: ChainMap) -> np.ndarray:
        return modp.as_modp(vec_of_chain_map(f), self.p)

    def class_dim(self) -> int:
        return self.class_basis.shape[1]

    def coords_matrix(self) -> np.ndarray:
        """Transform E with E @ [null_basis | class_basis] = [I; 0]."""
        mcols = np.hstack([self.null_basis, self.class_basis])
        n = mcols.shape[0]
        aug = np.hstack([mcols, np.eye(n, dtype=np.int64)])
        r, pivots = modp.rref(aug, self.p)
        return r[:, mcols.shape[1] :]


def _random_combo(basis: np.ndarray, rng, p: int) -> np.ndarray:
    if basis.shape[1] == 0:
        return np.zeros(basis.shape[0], dtype=np.int64)
    coeffs = np.array([rng.randrange(p) for _ in range(basis.shape[1])], dtype=np.int64)
    return (basis @ coeffs) % p


def random_complex(ring: Ring, rng, n_degrees: int, max_rank: int, low_degree: int = 0) -> Complex:
    """Random bounded complex over a prime field; d^2 = 0 by construction.

    Each differential is drawn uniformly from the solution space of
    d(i) @ d(i-1) = 0 given the previously drawn one.
    """
    p = ring.modulus
    if p is None or not ring.is_prime_field:
        raise ComplexError("random_complex requires a prime field")
    ranks = {}
    for i in range(low_degree, low_degree + n_degrees):
        r = rng.randint(0, max_rank)
        if r:
            ranks[i] = r
    diffs: dict[int, IntMatrix] = {}
    prev: np.ndarray | None = None
    for i in range(low_degree, low_degree + n_degrees):
        rs, rt = ranks.get(i, 0), ranks.get(i + 1, 0)
        if rs == 0 or rt == 0:
            prev = None
            continue
        if prev is None:
            mat = np.array([[rng.randrange(p) for _ in range(rs)] for _ in range(rt)], dtype=np.int64)
        else:
            # unknown X (rt x rs) with X @ prev = 0; vec is row-major
            constraint = np.kron(np.eye(rt, dtype=np.int64), prev.T)
            basis = modp.kernel(constraint % p, p)
            mat = _random_combo(basis, rng, p).reshape(rt, rs)
        diffs[i] = IntMatrix(mat.astype(object))
        prev = mat
    return Complex(ring, ranks, diffs)


def random_chain_map(x: Complex, y: Complex, rng) -> ChainMap:
    """Uniformly random chain map x -> y over a prime field."""
    hm = HomModP(x, y)
    v = _random_combo(hm.chain_basis, rng, hm.p)
    return hm.to_map(v)


def end_structure_mod_p(c: Complex):
    """The endomorphism algebra of c in the homotopy category over F_p.

    Returns (table, identity coordinates, basis representatives, to_coords)
    where table[i][j] holds the coordinates of basis_i o basis_j, and
    to_coords maps any endomorphism chain map to its class coordinates.
    """
    hm = HomModP(c, c)
    p = hm.p
    e = hm.coords_matrix()
    nn = hm.null_basis.shape[1]

    def to_coords(f: ChainMap) -> tuple[int, ...]:
        v = hm.vec(f)
        full = (e @ v) % p
        # residual must vanish: f must be a chain map in the span
        return tuple(int(t) for t in full[nn : nn + hm.class_dim()])

    reps = [hm.to_map(hm.class_basis[:, j]) for j in range(hm.class_dim())]
    table = [[to_coords(a.compose(b)) for b in reps] for a in reps]
    ident = to_coords(identity_map(c))
    return table, ident, reps, to_coords
