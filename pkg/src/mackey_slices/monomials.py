"""Monomials in the translated bordism generators and their strata.

The group C_{2^n} permutes the generators gamma^j r_i cyclically in j,
with gamma^{2^{n-1}} acting as the identity (the sign it picks up
disappears mod 2).  A monomial of underlying degree 2w determines a slice
cell: its stabilizer C_{2^k} and the induced sphere (w / 2^{k-1}) rho_k.

By default only the generators r_i with i = 2^a - 1 are used, matching
the splitting of the underlying spectrum into wedge summands; pass
``all_generators=True`` to work with every r_i.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement


@dataclass(frozen=True)
class Monomial:
    """Exponent vector over the translated generators gamma^j r_i."""

    n: int
    exps: tuple  # sorted tuple of ((i, j), e) with e > 0 and 0 <= j < 2^{n-1}

    @classmethod
    def from_dict(cls, n, d):
        items = tuple(sorted((key, e) for key, e in d.items() if e))
        return cls(n, items)

    @classmethod
    def one(cls, n):
        return cls(n, ())

    def as_dict(self):
        return dict(self.exps)

    @property
    def degree(self):
        return sum(2 * i * e for (i, _), e in self.exps)

    def translate(self, t):
        """Apply gamma^t."""
        period = 2 ** (self.n - 1)
        return Monomial.from_dict(
            self.n, {(i, (j + t) % period): e for (i, j), e in self.exps}
        )

    def times(self, other):
        d = self.as_dict()
        for key, e in other.exps:
            d[key] = d.get(key, 0) + e
        return Monomial.from_dict(self.n, d)

    def stabilizer_exponent(self):
        """k with H(p) = C_{2^k}: the largest subgroup fixing the monomial."""
        period = 2 ** (self.n - 1)
        t = 1
        while t < period:
            if self.translate(t) == self:
                break
            t *= 2
        # gamma^t is the smallest 2-power translation fixing p, so the
        # stabilizer is generated by gamma^t (and always contains C_2).
        if t >= period:
            t = period
        k = self.n
        while (1 << (self.n - k)) < t:
            k -= 1
        return k

    def slice_cell(self):
        """(k, m): the monomial indexes an induced cell S^{m rho_k}."""
        k = self.stabilizer_exponent()
        m = self.degree // (1 << k)
        return k, m

    def orbit(self):
        seen = []
        cur = self
        while cur not in seen:
            seen.append(cur)
            cur = cur.translate(1)
        return seen

    def __str__(self):
        if not self.exps:
            return "1"
        parts = []
        for (i, j), e in self.exps:
            head = f"r{i}" if j == 0 else f"g{j}r{i}"
            parts.append(head if e == 1 else f"{head}^{e}")
        return " ".join(parts)


def norm_generator(n, k, i, translate=0):
    """gamma^translate N_1^k r_i as a monomial: the product of the
    gamma^{2^{n-k} j} r_i over j < 2^{k-1}."""
    period = 2 ** (n - 1)
    d = {}
    step = 2 ** (n - k)
    for jj in range(2 ** (k - 1)):
        key = (i, (translate + step * jj) % period)
        d[key] = d.get(key, 0) + 1
    return Monomial.from_dict(n, d)


def default_generator_weights(max_weight):
    """The BP-reduced generator indices 2^a - 1 up to the weight bound."""
    out = []
    a = 1
    while 2 ** a - 1 <= max_weight:
        out.append(2 ** a - 1)
        a += 1
    return out


def fixed_monomials(n, k, max_weight, all_generators=False):
    """All monomials of weight <= max_weight in the translates of N_1^k r_i.

    A weight-w monomial here has underlying degree w * 2^k; the variables
    are the 2^{n-k} translates gamma^j N_1^k r_i, of weight i each.
    """
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    weights = (
        list(range(1, max_weight + 1))
        if all_generators
        else default_generator_weights(max_weight)
    )
    variables = []
    for i in weights:
        for j in range(2 ** (n - k)):
            variables.append((i, norm_generator(n, k, i, translate=j)))
    out = set()
    def rec(idx, remaining, acc):
        out.add(acc)
        for t in range(idx, len(variables)):
            w, mono = variables[t]
            if w <= remaining:
                rec(t, remaining - w, acc.times(mono))
    rec(0, max_weight, Monomial.one(n))
    return out


def stratum(n, m, k, all_generators=False):
    """P_{n,m}(C_{2^k}): degree m 2^k monomials with stabilizer exactly
    C_{2^k} (for k < n; the top stratum keeps everything fixed)."""
    if not 1 <= k <= n or m < 1:
        raise ValueError("need 1 <= k <= n and m >= 1")
    found = fixed_monomials(n, k, m, all_generators=all_generators)
    target = m * 2 ** k
    out = set()
    for p in found:
        if p.degree != target:
            continue
        if k < n and p.translate(2 ** (n - k - 1)) == p:
            continue  # fixed by the next larger subgroup
        out.add(p)
    return out


def orbits(monos):
    """Partition a gamma-stable set of monomials into orbits (sorted reps)."""
    remaining = set(monos)
    out = []
    for p in sorted(remaining, key=lambda q: (q.degree, q.exps)):
        if p not in remaining:
            continue
        orb = p.orbit()
        for q in orb:
            remaining.discard(q)
        out.append(sorted(orb, key=lambda q: q.exps)[0])
    return sorted(out, key=lambda q: (q.degree, q.exps))


def orbit_count(n, m, k, all_generators=False):
    """Number of C_{2^n}-orbits on P_{n,m}(C_{2^k})."""
    return len(orbits(stratum(n, m, k, all_generators=all_generators)))


def orbit_count_burnside(n, m, k, all_generators=False):
    """The same count via Burnside's lemma, as an independent check."""
    st = stratum(n, m, k, all_generators=all_generators)
    group_order = 2 ** n
    total = 0
    for t in range(group_order):
        total += sum(1 for p in st if p.translate(t) == p)
    if total % group_order:
        raise ArithmeticError("Burnside sum is not divisible by the group order")
    return total // group_order


def b_number(n, k, all_generators=False):
    """b_k = |P_{n,3}/G| - |P_{n,2}/G| - 1."""
    return (
        orbit_count(n, 3, k, all_generators=all_generators)
        - orbit_count(n, 2, k, all_generators=all_generators)
        - 1
    )
