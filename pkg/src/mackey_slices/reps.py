"""The real representation ring of the cyclic group C_{2^n}.

Irreducibles are the trivial representation, the sign representation
``sigma`` of C_{2^n}, and the two-dimensional rotations ``lambda(m)``
where the chosen generator acts by rotation through 2*pi*m / 2^n
(so 1 <= m < 2^{n-1}; m = 2^{n-2} is the rotation by pi/2, written
lambda').  Two representations are identified when their one-point
compactifications are stably equivalent, which for lambda(m) means
replacing m by 2^v2(m); sums are kept in that normal form internally.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass


def v2(m):
    """2-adic valuation of a positive integer."""
    if m <= 0:
        raise ValueError("positive integers only")
    v = 0
    while m % 2 == 0:
        m //= 2
        v += 1
    return v


@dataclass(frozen=True, order=True)
class Irrep:
    """An irreducible real representation of C_{2^level}.

    kind 0 = trivial, 1 = sign, 2 = rotation with index ``m``.
    """

    level: int
    kind: int
    m: int = 0

    TRIVIAL, SIGN, ROTATION = 0, 1, 2

    def __post_init__(self):
        if self.kind == Irrep.TRIVIAL:
            if self.m:
                raise ValueError("trivial representation takes no rotation index")
        elif self.kind == Irrep.SIGN:
            if self.level < 1:
                raise ValueError("sign representation needs level >= 1")
        elif self.kind == Irrep.ROTATION:
            if self.level < 2:
                raise ValueError("rotations need level >= 2")
            if not 1 <= self.m < 2 ** (self.level - 1):
                raise ValueError(f"rotation index {self.m} out of range at level {self.level}")
        else:
            raise ValueError("unknown irrep kind")

    @property
    def dim(self):
        return 2 if self.kind == Irrep.ROTATION else 1

    def isotropy(self):
        """Largest k such that C_{2^k} acts trivially (fixes every vector)."""
        if self.kind == Irrep.TRIVIAL:
            return self.level
        if self.kind == Irrep.SIGN:
            return self.level - 1
        return v2(self.m)

    def jo_normal(self):
        if self.kind == Irrep.ROTATION:
            return Irrep(self.level, Irrep.ROTATION, 2 ** v2(self.m))
        return self

    def __str__(self):
        if self.kind == Irrep.TRIVIAL:
            return "1"
        if self.kind == Irrep.SIGN:
            return "s"
        return f"l{self.m}"


def trivial(level):
    return Irrep(level, Irrep.TRIVIAL)


def sign(level):
    return Irrep(level, Irrep.SIGN)


def rotation(level, m):
    """Rotation irrep, accepting raw indices (folded into 1 <= m < 2^{level-1})."""
    m %= 2 ** level
    if m > 2 ** (level - 1):
        m = 2 ** level - m
    if m == 0 or m == 2 ** (level - 1):
        raise ValueError("index gives a reducible representation, not a rotation")
    return Irrep(level, Irrep.ROTATION, m)


def lambda_prime(level):
    """The rotation by pi/2: lambda(2^{level-2})."""
    return rotation(level, 2 ** (level - 2))


class RepSum:
    """A nonnegative integer combination of irreducibles of C_{2^n}.

    Stored in JO-normal form; raw rotation indices are normalized on the
    way in.
    """

    __slots__ = ("level", "mult")

    def __init__(self, level, mult=None):
        self.level = level
        norm = Counter()
        if mult:
            for irr, k in (mult.items() if isinstance(mult, (dict, Counter)) else mult):
                if k < 0:
                    raise ValueError("multiplicities must be nonnegative")
                if irr.level != level:
                    raise ValueError("summand level does not match ambient level")
                if k:
                    norm[irr.jo_normal()] += k
        self.mult = norm

    @classmethod
    def of(cls, level, *irreps):
        return cls(level, Counter(i for i in irreps))

    def summands(self):
        """Irreducible summands with multiplicity, sorted deterministically."""
        return sorted(self.mult.items())

    def expand(self):
        """Flat list of irreducible summands."""
        out = []
        for irr, k in self.summands():
            out.extend([irr] * k)
        return out

    @property
    def dim(self):
        return sum(irr.dim * k for irr, k in self.mult.items())

    def __add__(self, other):
        if other.level != self.level:
            raise ValueError("levels differ")
        m = Counter(self.mult)
        m.update(other.mult)
        return RepSum(self.level, m)

    def __rmul__(self, k):
        return RepSum(self.level, Counter({i: k * c for i, c in self.mult.items()}))

    def __eq__(self, other):
        if not isinstance(other, RepSum):
            return NotImplemented
        return self.level == other.level and self.mult == other.mult

    def __hash__(self):
        return hash((self.level, tuple(self.summands())))

    def __bool__(self):
        return bool(self.mult)

    def __str__(self):
        if not self.mult:
            return "0"
        parts = []
        for irr, k in self.summands():
            parts.append(f"{k}{irr}" if k > 1 else str(irr))
        return " + ".join(parts)

    def __repr__(self):
        return f"RepSum(level={self.level}, {self!s})"

    def sign_count(self):
        return sum(k for irr, k in self.mult.items() if irr.kind == Irrep.SIGN)

    def trivial_count(self):
        return sum(k for irr, k in self.mult.items() if irr.kind == Irrep.TRIVIAL)

    def without_trivial(self):
        return RepSum(
            self.level,
            Counter({i: k for i, k in self.mult.items() if i.kind != Irrep.TRIVIAL}),
        )

    def remove(self, irr, count=1):
        if self.mult[irr] < count:
            raise ValueError("summand not present")
        m = Counter(self.mult)
        m[irr] -= count
        return RepSum(self.level, m)

    def to_json(self):
        return {
            "level": self.level,
            "summands": [
                {"kind": ["trivial", "sign", "rotation"][i.kind], "m": i.m, "mult": k}
                for i, k in self.summands()
            ],
        }


def regular(level):
    """The regular representation rho of C_{2^level}."""
    m = Counter({trivial(level): 1})
    if level >= 1:
        m[sign(level)] += 1
    for j in range(1, 2 ** (level - 1)) if level >= 2 else ():
        m[rotation(level, j).jo_normal()] += 1
    return RepSum(level, m)


def reduced_regular(level):
    """rho-bar: the regular representation minus one trivial summand."""
    return regular(level).remove(trivial(level))


def restrict_irrep(irr, k):
    """Restriction of one irreducible down one or more levels, as a RepSum."""
    level = irr.level
    if k > level:
        raise ValueError("cannot restrict upward")
    out = RepSum.of(k)
    current = RepSum.of(level, irr)
    for lvl in range(level, k, -1):
        nxt = Counter()
        for summand, count in current.mult.items():
            for piece, c2 in _restrict_one(summand).mult.items():
                nxt[piece] += count * c2
        current = RepSum(lvl - 1, nxt)
    return current


def _restrict_one(irr):
    """Restrict a single irreducible one level down."""
    lvl = irr.level
    if irr.kind == Irrep.TRIVIAL:
        return RepSum.of(lvl - 1, trivial(lvl - 1))
    if irr.kind == Irrep.SIGN:
        # The subgroup lies in the kernel of the sign.
        return RepSum.of(lvl - 1, trivial(lvl - 1))
    m = irr.m  # generator of the subgroup rotates by 2*pi*m / 2^{lvl-1}
    half = 2 ** (lvl - 2)
    if m == half:
        return RepSum(lvl - 1, Counter({sign(lvl - 1): 2}))
    if m < half:
        return RepSum.of(lvl - 1, rotation(lvl - 1, m))
    return RepSum.of(lvl - 1, rotation(lvl - 1, 2 ** (lvl - 1) - m))


def restrict(rep: RepSum, k):
    """Character-correct restriction of a sum to level k <= ambient."""
    if k > rep.level:
        raise ValueError("cannot restrict upward")
    out = Counter()
    for irr, count in rep.mult.items():
        for piece, c2 in restrict_irrep(irr, k).mult.items():
            out[piece] += count * c2
    return RepSum(k, out)


def fixed_dim(rep: RepSum, k):
    """Real dimension of the C_{2^k}-fixed subspace."""
    if k > rep.level:
        raise ValueError("subgroup level exceeds ambient level")
    total = 0
    for irr, count in rep.mult.items():
        if irr.isotropy() >= k:
            total += irr.dim * count
    return total


def jo_normal_form(rep: RepSum):
    """Idempotent: RepSum already normalizes, so this is a re-wrap."""
    return RepSum(rep.level, Counter(rep.mult))


def is_orientable(rep: RepSum):
    """Orientability is the parity of the number of sign summands."""
    return rep.sign_count() % 2 == 0


def max_isotropy(rep: RepSum):
    """max { m : rep^{C_{2^m}} != 0 }, or the ambient level for rep = 0.

    This is the paper-facing m(V') invariant; the value for the zero
    representation follows the convention that makes the top homology of
    an orientable sphere the constant Mackey functor.
    """
    if not rep:
        return rep.level
    return max(irr.isotropy() for irr in rep.mult)


@dataclass(frozen=True)
class Decomposition:
    """One orthogonal split W = V' + V'' with V'' orientable.

    The defining condition: any subgroup fixing a nonzero vector of V''
    must fix V' pointwise.
    """

    v_prime: RepSum
    v_double_prime: RepSum
    m_of_v_prime: int


def _splits_condition(v_prime: RepSum, v_double_prime: RepSum):
    if not is_orientable(v_double_prime):
        return False
    if not v_double_prime:
        return True
    s_max = max(irr.isotropy() for irr in v_double_prime.mult)
    if not v_prime:
        return True
    # C_{2^j} fixes a vector of V'' for every j <= s_max; each must act
    # trivially on all of V'.
    s_min = min(irr.isotropy() for irr in v_prime.mult)
    return s_max <= s_min


def decompositions(rep: RepSum):
    """All decompositions in the family V_W, sorted by dim V'' descending.

    Requires a fixed-point-free representation in JO-normal form.  For
    orientable W there is exactly one split per even dimension of V''.
    """
    n = rep.level
    if fixed_dim(rep, n) != 0:
        raise ValueError("representation has nonzero fixed subspace")
    found = {}
    for v2_mult in _sub_multisets(rep):
        vpp = RepSum(n, v2_mult)
        vp = RepSum(n, Counter(rep.mult) - v2_mult)
        if _splits_condition(vp, vpp):
            found.setdefault(vpp.dim, []).append(
                Decomposition(vp, vpp, max_isotropy(vp))
            )
    out = []
    for d in sorted(found, reverse=True):
        out.extend(found[d])
    return out


def _sub_multisets(rep: RepSum):
    items = rep.summands()
    def rec(i):
        if i == len(items):
            yield Counter()
            return
        irr, k = items[i]
        for rest in rec(i + 1):
            for take in range(k + 1):
                c = Counter(rest)
                if take:
                    c[irr] = take
                yield c
    yield from rec(0)


# -- text grammar -------------------------------------------------------

def parse_rep(text, n):
    """Parse the CLI grammar for representations of C_{2^n}.

    ``3s + l2 + l1`` means 3*sigma + lambda(2) + lambda(1); the keywords
    ``rho``, ``rhobar``, ``lambda'`` (or ``l'``) and ``1``/``t`` for the
    trivial summand are accepted, each with an optional leading
    multiplicity.

    >>> print(parse_rep("3s + l2 + l1", 3))
    3s + l1 + l2
    """
    total = RepSum.of(n)
    for raw in text.replace("+", " ").split():
        term = raw.strip()
        if not term:
            continue
        mult = 0
        i = 0
        while i < len(term) and term[i].isdigit():
            mult = 10 * mult + int(term[i])
            i += 1
        sym = term[i:]
        if sym == "" and mult:
            # a bare number means that many trivial summands
            sym, count = "1", mult
        else:
            count = mult if i else 1
        if sym in ("1", "t", "triv"):
            piece = RepSum.of(n, trivial(n))
        elif sym == "s":
            piece = RepSum.of(n, sign(n))
        elif sym in ("l'", "lambda'"):
            piece = RepSum.of(n, lambda_prime(n))
        elif sym == "rho":
            piece = regular(n)
        elif sym == "rhobar":
            piece = reduced_regular(n)
        elif sym.startswith("l") and sym[1:].isdigit():
            piece = RepSum.of(n, rotation(n, int(sym[1:])))
        else:
            raise ValueError(f"cannot parse representation term {raw!r}")
        total = total + count * piece
    return total
