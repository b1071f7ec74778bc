"""Shared builders for the test suite."""

from homcart.complexes import ChainMap, Complex, Ring, ZZ
from homcart.intmat import IntMatrix


def cpx(ranks: dict[int, int], diffs: dict[int, list[list[int]]] | None = None, ring: Ring = ZZ) -> Complex:
    mats = {i: IntMatrix(m) for i, m in (diffs or {}).items()}
    return Complex(ring, ranks, mats)


def cmap(src: Complex, tgt: Complex, comps: dict[int, list[list[int]]]) -> ChainMap:
    return ChainMap(src, tgt, {i: IntMatrix(m) for i, m in comps.items()})


def one_term(ring: Ring = ZZ, degree: int = 0) -> Complex:
    """[R] concentrated in one degree."""
    return cpx({degree: 1}, ring=ring)


def two_term(d: int, degrees: tuple[int, int] = (0, 1), ring: Ring = ZZ) -> Complex:
    """[R --d--> R] in consecutive degrees."""
    lo, hi = degrees
    assert hi == lo + 1
    return cpx({lo: 1, hi: 1}, {lo: [[d]]}, ring=ring)
