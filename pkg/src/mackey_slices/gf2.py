"""Bitset linear algebra over GF(2).

Vectors are Python ints (bit i = coordinate i); matrices are lists of
column bitmasks.  Everything the slice differential machinery needs:
echelon forms with canonical coset representatives, kernels, solving,
and Jordan chains of a nilpotent operator.
"""

from __future__ import annotations


def apply_cols(cols, vec):
    """Matrix times vector: XOR the columns at the set bits of vec."""
    out = 0
    while vec:
        low = vec & -vec
        out ^= cols[low.bit_length() - 1]
        vec ^= low
    return out


def compose(cols_outer, cols_inner):
    """Columns of outer o inner."""
    return [apply_cols(cols_outer, c) for c in cols_inner]


class Echelon:
    """A fully reduced row echelon basis of a subspace."""

    __slots__ = ("rows",)

    def __init__(self, vectors=()):
        self.rows = {}
        for v in vectors:
            self.insert(v)

    def reduce(self, v):
        """Canonical representative of v modulo the subspace."""
        for p in sorted(self.rows, reverse=True):
            if (v >> p) & 1:
                v ^= self.rows[p]
        return v

    def insert(self, v):
        """Add v to the span; returns the reduced vector (0 if dependent)."""
        v = self.reduce(v)
        if v:
            p = v.bit_length() - 1
            # keep full reduction: clear the new pivot from existing rows
            for q, row in self.rows.items():
                if (row >> p) & 1:
                    self.rows[q] = row ^ v
            self.rows[p] = v
        return v

    def __contains__(self, v):
        return self.reduce(v) == 0

    @property
    def dim(self):
        return len(self.rows)

    def pivots(self):
        return sorted(self.rows)


def rank(cols):
    e = Echelon()
    for c in cols:
        e.insert(c)
    return e.dim


def kernel(cols):
    """Combinations (bitmasks over column indices) spanning the kernel."""
    ech = {}
    out = []
    for j, c in enumerate(cols):
        v, combo = c, 1 << j
        while v:
            p = v.bit_length() - 1
            if p in ech:
                v ^= ech[p][0]
                combo ^= ech[p][1]
            else:
                break
        if v:
            ech[v.bit_length() - 1] = (v, combo)
        else:
            out.append(combo)
    return out


def solve(cols, target):
    """A combination of columns equal to target, or None."""
    ech = {}
    for j, c in enumerate(cols):
        v, combo = c, 1 << j
        while v:
            p = v.bit_length() - 1
            if p in ech:
                v ^= ech[p][0]
                combo ^= ech[p][1]
            else:
                break
        if v:
            ech[v.bit_length() - 1] = (v, combo)
    v, combo = target, 0
    while v:
        p = v.bit_length() - 1
        if p not in ech:
            return None
        v ^= ech[p][0]
        combo ^= ech[p][1]
    return combo


class Quotient:
    """F_2^dim / subspace, with canonical coordinates on free positions."""

    __slots__ = ("dim", "ech", "positions", "pos_index")

    def __init__(self, dim, subspace_vectors):
        self.dim = dim
        self.ech = Echelon(subspace_vectors)
        pivots = set(self.ech.pivots())
        self.positions = [i for i in range(dim) if i not in pivots]
        self.pos_index = {p: t for t, p in enumerate(self.positions)}

    @property
    def rank(self):
        return len(self.positions)

    def project(self, v):
        """Coordinates of [v] as a bitmask over the quotient basis."""
        v = self.ech.reduce(v)
        out = 0
        while v:
            low = v & -v
            out |= 1 << self.pos_index[low.bit_length() - 1]
            v ^= low
        return out

    def lift(self, coords):
        """The canonical representative of a coordinate bitmask."""
        out = 0
        while coords:
            low = coords & -coords
            out |= 1 << self.positions[low.bit_length() - 1]
            coords ^= low
        return out


def jordan_chain_tops(n_cols, dim):
    """Chain tops of a nilpotent operator N on F_2^dim.

    Returns a list of (top_vector, length), longest first; the chain
    vectors N^t(top) for t < length over all chains form a basis.  Tops
    of length s span a complement of ker N^{s-1} + N(ker N^{s+1}) in
    ker N^s.
    """
    if dim == 0:
        return []
    powers = [[1 << i for i in range(dim)]]  # N^0 = identity
    while any(powers[-1]):
        powers.append(compose(n_cols, powers[-1]))
    smax = len(powers) - 1  # N^smax == 0
    # kernel() on N^i (columns indexed by the standard basis) returns the
    # kernel vectors themselves
    kers = [Echelon()]
    for i in range(1, smax + 1):
        kers.append(Echelon(kernel(powers[i])))
    tops = []
    for s in range(smax, 0, -1):
        barrier = Echelon()
        for v in kers[s - 1].rows.values():
            barrier.insert(v)
        for v in kers[min(s + 1, smax)].rows.values():
            barrier.insert(apply_cols(n_cols, v))
        for v in list(kers[s].rows.values()):
            if barrier.reduce(v):
                tops.append((v, s))
                w = v
                for _ in range(s):
                    barrier.insert(w)
                    w = apply_cols(n_cols, w)
    total = sum(length for _, length in tops)
    if total != dim:
        raise ValueError(f"jordan decomposition incomplete: {total} of {dim}")
    return sorted(tops, key=lambda t: -t[1])