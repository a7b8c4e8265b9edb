"""Exact cylinder measures for the GF(2) three-dot shift system.

Configurations are 0/1 fields on the upper half-plane lattice subject to
x[a,b] + x[a+1,b] + x[a,b+1] = 0 at every site.  Row b = 0 is a free i.i.d.
fair-coin row and determines all rows above it, so any finite linear event
reduces to a system over row-0 bits; its measure is 0 when the system is
inconsistent and 2^-rank otherwise.  The reduction of a single site follows
the parity of binomial coefficients: x[a,b] is the XOR of x[a+k,0] over the
submasks k of b, so a height that is a power of two spreads a site into
exactly two row-0 bits.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Q = Fraction

__all__ = [
    "SiteFunctional",
    "site_functional",
    "base_event",
    "shift_functional",
    "xor_functionals",
    "reduce_functional",
    "event_measure",
    "identity_holds",
    "symdiff_identity_check",
    "pair_measure",
    "triple_measure",
]

_EXPANSION_CAP = 16  # submask expansion is 2**popcount(b); keep it desk-scale


@dataclass(frozen=True)
class SiteFunctional:
    """A GF(2) equation: XOR of the named sites equals `constant`."""

    sites: frozenset
    constant: int = 0

    def __post_init__(self) -> None:
        if self.constant not in (0, 1):
            raise ValueError("constant must be a bit")
        for a, b in self.sites:
            if b < 0:
                raise ValueError(
                    "sites below the generating row are not reducible to it"
                )


def site_functional(a: int, b: int, constant: int = 0) -> SiteFunctional:
    return SiteFunctional(frozenset([(int(a), int(b))]), constant)


def base_event() -> SiteFunctional:
    """The event {x[0,0] = 1} every canonical family is built from."""
    return site_functional(0, 0, 1)


def shift_functional(f: SiteFunctional, z: Sequence[int]) -> SiteFunctional:
    """Pullback along the shift: site (a, b) moves to (a + z0, b + z1)."""
    da, db = int(z[0]), int(z[1])
    return SiteFunctional(
        frozenset((a + da, b + db) for a, b in f.sites), f.constant
    )


def xor_functionals(*fs: SiteFunctional) -> SiteFunctional:
    sites: set = set()
    constant = 0
    for f in fs:
        sites ^= f.sites
        constant ^= f.constant
    return SiteFunctional(frozenset(sites), constant)


def _submasks(b: int):
    sub = b
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & b


def reduce_functional(f: SiteFunctional) -> SiteFunctional:
    """Equivalent equation supported on the generating row b = 0."""
    row0: set = set()
    for a, b in f.sites:
        if b.bit_count() > _EXPANSION_CAP:
            raise ValueError(f"site height {b} expands beyond the desk-scale cap")
        for k in _submasks(b):
            row0 ^= {(a + k, 0)}
    return SiteFunctional(frozenset(row0), f.constant)


def event_measure(system: Iterable[SiteFunctional]) -> Fraction:
    """Exact measure of the intersection event of a finite equation system."""
    reduced = [reduce_functional(f) for f in system]
    columns = sorted({a for f in reduced for a, _ in f.sites})
    slot = {a: i for i, a in enumerate(columns)}
    rows = []
    for f in reduced:
        bits = 0
        for a, _ in f.sites:
            bits |= 1 << slot[a]
        rows.append((bits, f.constant))

    pivots: list[tuple[int, int]] = []  # (row bits, constant), one pivot bit each
    rank = 0
    for bits, constant in rows:
        for p_bits, p_const in pivots:
            low = p_bits & -p_bits
            if bits & low:
                bits ^= p_bits
                constant ^= p_const
        if bits == 0:
            if constant == 1:
                return Q(0)
            continue
        pivots.append((bits, constant))
        rank += 1
    return Q(1, 2**rank)


def identity_holds(z: Sequence[int], w: Sequence[int]) -> bool:
    """Whether {x0 = 1} equals the symmetric difference of its z and w shifts.

    With all three right-hand sides equal to 1 the indicator identity is
    equivalent to the combined form x[0,0] + x[z] + x[w] vanishing on every
    configuration, i.e. reducing to the empty equation.
    """
    base = base_event()
    combined = xor_functionals(
        base, shift_functional(base, z), shift_functional(base, w)
    )
    return reduce_functional(combined).sites == frozenset()


def symdiff_identity_check(k: int) -> bool:
    """Identity check for the dyadic pair (2^k, 0), (0, 2^k)."""
    if k < 0:
        raise ValueError("k must be non-negative")
    return identity_holds((2**k, 0), (0, 2**k))


def pair_measure(z: Sequence[int]) -> Fraction:
    base = base_event()
    return event_measure([base, shift_functional(base, z)])


def triple_measure(z: Sequence[int], w: Sequence[int]) -> Fraction:
    base = base_event()
    return event_measure(
        [base, shift_functional(base, z), shift_functional(base, w)]
    )
