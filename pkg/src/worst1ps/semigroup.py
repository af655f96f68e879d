"""Numerical semigroups: elements, gaps, conductor.

Elements are listed in increasing order as ``gamma_0 = 0 < gamma_1 < ...``.
Past the conductor every integer is an element, so ``gamma_i`` has the closed
form ``cond + (i - ci)`` for ``i >= ci``; :meth:`NumericalSemigroup.prefix`
uses it to produce arbitrarily long element lists without re-sieving.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from math import gcd

from worst1ps.errors import EmptyGenerators, GcdNotOne, IndexOutOfRange


def sieve(gens, bound):
    """Boolean membership table for the additive closure of ``gens`` on ``0..bound``."""
    member = [False] * (bound + 1)
    member[0] = True
    for n in range(1, bound + 1):
        for g in gens:
            if g <= n and member[n - g]:
                member[n] = True
                break
    return member


@dataclass(frozen=True)
class NumericalSemigroup:
    generators: tuple
    elements: tuple
    conductor: int
    conductor_index: int
    genus: int

    @property
    def ci(self) -> int:
        return self.conductor_index

    def gamma(self, i: int) -> int:
        if i < 0 or i >= len(self.elements):
            raise IndexOutOfRange(f"gamma_{i} outside computed range 0..{len(self.elements) - 1}")
        return self.elements[i]

    def prefix(self, n: int) -> list:
        """Return ``[gamma_0, ..., gamma_n]``."""
        if n < 0:
            raise IndexOutOfRange(f"negative index {n}")
        head = list(self.elements[: min(n + 1, self.conductor_index + 1)])
        head.extend(self.conductor + i - self.conductor_index for i in range(len(head), n + 1))
        return head

    def gaps(self) -> list:
        present = set(self.elements)
        return [n for n in range(self.conductor) if n not in present]

    def is_trivial(self) -> bool:
        return self.conductor == 0

    def to_json(self) -> dict:
        return {
            "generators": list(self.generators),
            "conductor": self.conductor,
            "conductor_index": self.conductor_index,
            "genus": self.genus,
            "elements": list(self.elements),
        }

    def __str__(self):
        return "<" + ",".join(map(str, self.generators)) + ">"


def from_generators(gens, count: int = 1) -> NumericalSemigroup:
    """Build the semigroup generated by ``gens`` with at least ``count + 1`` elements listed."""
    gens = sorted({int(g) for g in gens})
    if not gens:
        raise EmptyGenerators("at least one generator is required")
    if gens[0] <= 0:
        raise ValueError(f"generators must be positive, got {gens}")
    if reduce(gcd, gens) != 1:
        raise GcdNotOne(f"gcd of {gens} is not 1; the complement of the semigroup is infinite")
    count = max(int(count), 1)

    # Schur's bound: the Frobenius number is below (g_min - 1)(g_max - 1).
    cond_bound = (gens[0] - 1) * (gens[-1] - 1)
    member = sieve(gens, cond_bound + count + 2)
    conductor = 0
    for n in range(len(member) - 1, -1, -1):
        if not member[n]:
            conductor = n + 1
            break
    elements = [n for n, ok in enumerate(member) if ok]
    ci = elements.index(conductor)
    keep = max(count + 1, ci + 3)
    return NumericalSemigroup(
        generators=tuple(gens),
        elements=tuple(elements[:keep]),
        conductor=conductor,
        conductor_index=ci,
        genus=conductor - ci,
    )


def cusp(r: int) -> NumericalSemigroup:
    """The semigroup <2, 2r+1> of the cusp y^2 = x^(2r+1)."""
    return from_generators([2, 2 * r + 1], 2 * r + 4)


def semigroups_of_genus(g: int) -> list:
    """All numerical semigroups of genus ``g``, via the Frobenius-number tree.

    Children of S are S minus a minimal generator larger than the Frobenius number.
    """
    level = [frozenset()]  # gap sets; genus 0 is N itself
    for _ in range(g):
        nxt = []
        for gap_set in level:
            frob = max(gap_set) if gap_set else -1
            cond = frob + 1
            limit = 2 * (cond + 1) + 2
            members = [n for n in range(1, limit + 1) if n not in gap_set]
            mset = set(members)
            for m in members:
                if m <= frob:
                    continue
                if m > 2 * cond + 1 and m > 1:
                    # anything above 2*cond+1 is a sum of smaller elements
                    break
                if any((m - s) in mset for s in members if s < m and (m - s) > 0):
                    continue
                nxt.append(gap_set | {m})
        level = nxt
    out = []
    for gap_set in level:
        cond = max(gap_set) + 1 if gap_set else 0
        elements = [n for n in range(cond + 1) if n not in gap_set]
        gens = minimal_generators(elements, cond)
        out.append(from_generators(gens, len(elements) + 2))
    return sorted(out, key=lambda s: s.generators)


def minimal_generators(elements, conductor):
    """Minimal generating set of the semigroup whose elements up to ``conductor`` are given."""
    pool = set(elements) | set(range(conductor, 2 * conductor + 2))
    pool.discard(0)
    gens = []
    for m in sorted(pool):
        if m > 2 * max(conductor, 1) + 1:
            break
        if not any((m - s) in pool for s in pool if 0 < s < m):
            gens.append(m)
    return gens or [1]
