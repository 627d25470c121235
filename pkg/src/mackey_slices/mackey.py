"""Lewis-diagram Mackey functors for cyclic 2-groups.

A Mackey functor for C_{2^n} is stored as one abelian group per level
k = 0..n (level k is the value at the orbit C_{2^n}/C_{2^k}) together
with restriction maps going down, transfer maps going up, and the action
of the chosen group generator at each level.  All functors here are
modules over the constant functor Z, i.e. transfer o restriction is
multiplication by the index.
"""

from __future__ import annotations

import random

from .abelian import (
    FGAbGroup,
    GroupHom,
    Subquotient,
    ZERO_GROUP,
    cyclic,
    cokernel as ab_cokernel,
    image as ab_image,
    is_exact as ab_is_exact,
    kernel as ab_kernel,
    kernel_basis,
    mat_vec,
    zeros,
)


class MackeyFunctor:
    """Levels 0..n with res (down), tr (up) and the generator action."""

    __slots__ = ("n", "levels", "res", "tr", "weyl")

    def __init__(self, n, levels, res, tr, weyl):
        if len(levels) != n + 1 or len(res) != n or len(tr) != n or len(weyl) != n + 1:
            raise ValueError("level/map counts do not match n")
        for k in range(n):
            if res[k].source != levels[k + 1] or res[k].target != levels[k]:
                raise ValueError(f"res[{k}] has wrong source/target")
            if tr[k].source != levels[k] or tr[k].target != levels[k + 1]:
                raise ValueError(f"tr[{k}] has wrong source/target")
        for k in range(n + 1):
            if weyl[k].source != levels[k] or weyl[k].target != levels[k]:
                raise ValueError(f"weyl[{k}] has wrong source/target")
        self.n = n
        self.levels = tuple(levels)
        self.res = tuple(res)
        self.tr = tuple(tr)
        self.weyl = tuple(weyl)

    def __eq__(self, other):
        if not isinstance(other, MackeyFunctor):
            return NotImplemented
        return (
            self.n == other.n
            and self.levels == other.levels
            and self.res == other.res
            and self.tr == other.tr
            and self.weyl == other.weyl
        )

    def __hash__(self):
        return hash((self.n, self.levels, self.res, self.tr, self.weyl))

    def level_orders(self):
        """Order of each level group (0 meaning infinite)."""
        return [g.size() for g in self.levels]

    def is_zero(self):
        return all(g.is_trivial() for g in self.levels)

    def __repr__(self):
        return f"MackeyFunctor(n={self.n}, levels={[str(g) for g in self.levels]})"

    def to_json(self):
        return {
            "n": self.n,
            "levels": [g.to_json() for g in self.levels],
            "res": [h.matrix for h in self.res],
            "tr": [h.matrix for h in self.tr],
            "weyl": [h.matrix for h in self.weyl],
        }


def _pow_hom(h: GroupHom, e: int) -> GroupHom:
    out = GroupHom.identity(h.source)
    base = h
    while e:
        if e & 1:
            out = base.compose(out)
        base = base.compose(base)
        e >>= 1
    return out


def validate(m: MackeyFunctor, cohomological=True):
    """All axiom violations, as human-readable strings (empty list = valid)."""
    bad = []
    n = m.n
    if not m.weyl[n] == GroupHom.identity(m.levels[n]):
        bad.append("weyl action at the top level is not the identity")
    for k in range(n + 1):
        if not _pow_hom(m.weyl[k], 2 ** (n - k)) == GroupHom.identity(m.levels[k]):
            bad.append(f"weyl[{k}] does not have order dividing 2^{n - k}")
    for k in range(n):
        if not m.res[k].compose(m.weyl[k + 1]) == m.weyl[k].compose(m.res[k]):
            bad.append(f"res[{k}] does not commute with the weyl action")
        if not m.tr[k].compose(m.weyl[k]) == m.weyl[k + 1].compose(m.tr[k]):
            bad.append(f"tr[{k}] does not commute with the weyl action")
        lhs = m.res[k].compose(m.tr[k])
        rhs = GroupHom.identity(m.levels[k]) + _pow_hom(m.weyl[k], 2 ** (n - k - 1))
        if not lhs == rhs:
            bad.append(f"double coset formula fails at level {k}")
        if cohomological:
            if not m.tr[k].compose(m.res[k]) == GroupHom.scalar(m.levels[k + 1], 2):
                bad.append(f"transfer o restriction is not multiplication by 2 at level {k + 1}")
    return bad


# -- named functors -----------------------------------------------------

def zero_functor(n):
    g = ZERO_GROUP
    z = GroupHom.zero(g, g)
    return MackeyFunctor(n, [g] * (n + 1), [z] * n, [z] * n, [z] * (n + 1))


def constant_z(n):
    """The constant Mackey functor Z: all restrictions 1, transfers 2."""
    from .abelian import Z
    one = GroupHom(Z, Z, [[1]])
    two = GroupHom(Z, Z, [[2]])
    return MackeyFunctor(n, [Z] * (n + 1), [one] * n, [two] * n, [one] * (n + 1))


def z_star(n):
    """The dual constant functor: restrictions 2, transfers 1."""
    from .abelian import Z
    one = GroupHom(Z, Z, [[1]])
    two = GroupHom(Z, Z, [[2]])
    return MackeyFunctor(n, [Z] * (n + 1), [two] * n, [one] * n, [one] * (n + 1))


def b_functor(j, k, n):
    """B_{j,k}: zero through level k, then Z/2^{min(i-k, j)} at level i.

    Restrictions are the canonical reductions and transfers are
    multiplication by 2, as in the quotient of Z by the subfunctor
    generated by everything below level k and by 2^j.
    """
    if not (0 <= k <= n - 1):
        raise ValueError("need 0 <= k <= n-1")
    if j < 1:
        raise ValueError("need j >= 1")
    levels = []
    for i in range(n + 1):
        levels.append(cyclic(2 ** min(max(i - k, 0), j)) if i > k else ZERO_GROUP)
    res, tr = [], []
    for i in range(n):
        lo, hi = levels[i], levels[i + 1]
        res.append(GroupHom(hi, lo, [[1]] if (lo.ngens and hi.ngens) else zeros(lo.ngens, hi.ngens)))
        tr.append(GroupHom(lo, hi, [[2]] if (lo.ngens and hi.ngens) else zeros(hi.ngens, lo.ngens)))
    weyl = [GroupHom.identity(g) for g in levels]
    return MackeyFunctor(n, levels, res, tr, weyl)


def b_star_functor(k, n):
    """B*_{1,k}: same groups as B_{1,k} with restriction and transfer swapped."""
    base = b_functor(1, k, n)
    res, tr = [], []
    for i in range(n):
        lo, hi = base.levels[i], base.levels[i + 1]
        res.append(GroupHom(hi, lo, [[2]] if (lo.ngens and hi.ngens) else zeros(lo.ngens, hi.ngens)))
        tr.append(GroupHom(lo, hi, [[1]] if (lo.ngens and hi.ngens) else zeros(hi.ngens, lo.ngens)))
    return MackeyFunctor(n, base.levels, res, tr, base.weyl)


def make_named(name, n):
    """Dispatcher for the named functors: Z, Zstar, B(j,k), Bstar(1,k)."""
    text = name.replace(" ", "")
    if text == "Z":
        return constant_z(n)
    if text == "Zstar":
        return z_star(n)
    if text.startswith("Bstar(") and text.endswith(")"):
        j, k = (int(x) for x in text[6:-1].split(","))
        if j != 1:
            raise ValueError("only Bstar(1,k) is defined")
        return b_star_functor(k, n)
    if text.startswith("B(") and text.endswith(")"):
        j, k = (int(x) for x in text[2:-1].split(","))
        return b_functor(j, k, n)
    raise ValueError(f"unknown functor name {name!r}")


# -- induction, inflation, signed induction ------------------------------

def _block_hom(source, target, blocks, src_sizes, tgt_sizes):
    """Assemble a GroupHom from (tgt_block, src_block, GroupHom) entries."""
    mat = zeros(target.ngens, source.ngens)
    src_off = [0]
    for s in src_sizes:
        src_off.append(src_off[-1] + s)
    tgt_off = [0]
    for s in tgt_sizes:
        tgt_off.append(tgt_off[-1] + s)
    for ti, si, h in blocks:
        for r in range(len(h.matrix)):
            for c in range(len(h.matrix[0]) if h.matrix else 0):
                mat[tgt_off[ti] + r][src_off[si] + c] += h.matrix[r][c]
    return GroupHom(source, target, mat)


def induce(m: MackeyFunctor, n):
    """Induction from C_{2^k} (k = m.n) up to C_{2^n}.

    Level j of the result is 2^{n-max(j,k)} copies of m at level
    min(j, k); the generator permutes copies cyclically, picking up the
    weyl action of m on wraparound below level k.
    """
    k = m.n
    if k > n:
        raise ValueError("cannot induce downward")
    if k == n:
        return m
    copies = [2 ** (n - max(j, k)) for j in range(n + 1)]
    base = [m.levels[min(j, k)] for j in range(n + 1)]
    levels = []
    for j in range(n + 1):
        g = ZERO_GROUP
        for _ in range(copies[j]):
            g = g.direct_sum(base[j])
        levels.append(g)
    res, tr, weyl = [], [], []
    for j in range(n + 1):
        blocks = []
        cnt = copies[j]
        wrap = m.weyl[min(j, k)] if j < k else GroupHom.identity(base[j])
        for c in range(cnt):
            tgt = (c + 1) % cnt
            h = wrap if c + 1 == cnt else GroupHom.identity(base[j])
            blocks.append((tgt, c, h))
        sizes = [base[j].ngens] * cnt
        weyl.append(_block_hom(levels[j], levels[j], blocks, sizes, sizes))
    for j in range(n):
        lo_cnt, hi_cnt = copies[j], copies[j + 1]
        lo_sz = [base[j].ngens] * lo_cnt
        hi_sz = [base[j + 1].ngens] * hi_cnt
        if j + 1 <= k:
            # same copy count; apply m's own maps blockwise
            rblocks = [(c, c, m.res[j]) for c in range(lo_cnt)]
            tblocks = [(c, c, m.tr[j]) for c in range(lo_cnt)]
        else:
            ident = GroupHom.identity(base[j])
            rblocks = []
            tblocks = []
            for c in range(lo_cnt):
                rblocks.append((c, c % hi_cnt, ident))
                tblocks.append((c % hi_cnt, c, ident))
        res.append(_block_hom(levels[j + 1], levels[j], rblocks, hi_sz, lo_sz))
        tr.append(_block_hom(levels[j], levels[j + 1], tblocks, lo_sz, hi_sz))
    return MackeyFunctor(n, levels, res, tr, weyl)


def inflate(m: MackeyFunctor, cutoff, n):
    """Pull back along C_{2^n} -> C_{2^{n-cutoff}}: zero below the cutoff."""
    if m.n != n - cutoff:
        raise ValueError("functor level does not match cutoff")
    if cutoff == 0:
        return m
    levels = [ZERO_GROUP] * cutoff + list(m.levels)
    res, tr, weyl = [], [], []
    for j in range(n):
        if j < cutoff - 1:
            res.append(GroupHom.zero(ZERO_GROUP, ZERO_GROUP))
            tr.append(GroupHom.zero(ZERO_GROUP, ZERO_GROUP))
        elif j == cutoff - 1:
            res.append(GroupHom.zero(m.levels[0], ZERO_GROUP))
            tr.append(GroupHom.zero(ZERO_GROUP, m.levels[0]))
        else:
            res.append(m.res[j - cutoff])
            tr.append(m.tr[j - cutoff])
    for j in range(n + 1):
        weyl.append(
            GroupHom.zero(ZERO_GROUP, ZERO_GROUP) if j < cutoff else m.weyl[j - cutoff]
        )
    return MackeyFunctor(n, levels, res, tr, weyl)


def one_minus_gamma(m: MackeyFunctor):
    """The endomorphism 1 - gamma of Ind_{n-1}^n m, for m with trivial weyl.

    This is the map adjoint to the anti-diagonal; its top-level component
    is forced to zero by the Mackey structure.
    """
    ind = induce(m, m.n + 1)
    comps = []
    for j in range(ind.n + 1):
        g = ind.levels[j]
        if j == ind.n:
            comps.append(GroupHom.zero(g, g))
        else:
            comps.append(GroupHom.identity(g) - ind.weyl[j])
    return MackeyHom(ind, ind, comps)


def signed_induce(m: MackeyFunctor):
    """Signed induction: the image of 1 - gamma on Ind_{n-1}^n m.

    Input must have trivial weyl action; the result keeps m's groups at
    levels below the top, is zero at the top, and the generator acts by -1.
    """
    for k in range(m.n + 1):
        if not m.weyl[k] == GroupHom.identity(m.levels[k]):
            raise ValueError("signed induction needs a trivial weyl action")
    n = m.n + 1
    levels = list(m.levels) + [ZERO_GROUP]
    res = list(m.res) + [GroupHom.zero(ZERO_GROUP, m.levels[m.n])]
    tr = list(m.tr) + [GroupHom.zero(m.levels[m.n], ZERO_GROUP)]
    weyl = [GroupHom.scalar(g, -1) for g in m.levels] + [GroupHom.zero(ZERO_GROUP, ZERO_GROUP)]
    weyl[-1] = GroupHom.identity(ZERO_GROUP)
    return MackeyFunctor(n, levels, res, tr, weyl)


def restrict_mackey(m: MackeyFunctor, k):
    """Restriction to the subgroup C_{2^k}: keep levels <= k, rescale weyl."""
    if k > m.n:
        raise ValueError("cannot restrict upward")
    step = 2 ** (m.n - k)
    levels = list(m.levels[: k + 1])
    res = list(m.res[:k])
    tr = list(m.tr[:k])
    weyl = [_pow_hom(m.weyl[j], step) for j in range(k + 1)]
    return MackeyFunctor(k, levels, res, tr, weyl)


def fixed_point_functor_perm(perm, n, dim=None):
    """Fixed point Mackey functor of the permutation module Z[basis].

    ``perm`` gives the action of the generator as an index map.  Level k
    has the orbit sums under gamma^{2^{n-k}} as its basis.  Returns
    (functor, orbit_reps) where orbit_reps[k] lists each level-k orbit as
    a sorted tuple of basis indices.
    """
    d = dim if dim is not None else len(perm)
    orbit_reps = []
    orbit_of = []
    for k in range(n + 1):
        step = 2 ** (n - k)
        g = list(range(d))
        cur = list(range(d))
        # apply perm step times to get the generator of the acting subgroup
        sub = _perm_power(perm, step, d)
        seen = [False] * d
        orbits = []
        whose = [0] * d
        for i in range(d):
            if seen[i]:
                continue
            orb = []
            x = i
            while not seen[x]:
                seen[x] = True
                orb.append(x)
                x = sub[x]
            idx = len(orbits)
            for x in orb:
                whose[x] = idx
            orbits.append(tuple(sorted(orb)))
        orbit_reps.append(orbits)
        orbit_of.append(whose)
    levels = [FGAbGroup(len(orbit_reps[k])) for k in range(n + 1)]
    res, tr, weyl = [], [], []
    for k in range(n):
        small, big = orbit_reps[k], orbit_reps[k + 1]
        rmat = zeros(len(small), len(big))
        for bjdx, borb in enumerate(big):
            seen_small = set()
            for x in borb:
                seen_small.add(orbit_of[k][x])
            for s in seen_small:
                rmat[s][bjdx] = 1
        tmat = zeros(len(big), len(small))
        for sidx, sorb in enumerate(small):
            b = orbit_of[k + 1][sorb[0]]
            # orbit sum transfers to the big orbit sum, doubled if already big
            tmat[b][sidx] += 1 if len(big[b]) > len(sorb) else 2
        res.append(GroupHom(levels[k + 1], levels[k], rmat))
        tr.append(GroupHom(levels[k], levels[k + 1], tmat))
    for k in range(n + 1):
        wmat = zeros(len(orbit_reps[k]), len(orbit_reps[k]))
        for idx, orb in enumerate(orbit_reps[k]):
            wmat[orbit_of[k][perm[orb[0]]]][idx] = 1
        weyl.append(GroupHom(levels[k], levels[k], wmat))
    return MackeyFunctor(n, levels, res, tr, weyl), orbit_reps


def _perm_power(perm, e, d):
    out = list(range(d))
    base = list(perm)
    while e:
        if e & 1:
            out = [base[x] for x in out]
        base = [base[x] for x in base]
        e >>= 1
    return out


# -- morphisms ----------------------------------------------------------

class MackeyHom:
    """A map of Mackey functors: one component per level, all squares commuting."""

    __slots__ = ("source", "target", "components")

    def __init__(self, source, target, components, check=True):
        if source.n != target.n or len(components) != source.n + 1:
            raise ValueError("component count mismatch")
        for k, h in enumerate(components):
            if h.source != source.levels[k] or h.target != target.levels[k]:
                raise ValueError(f"component {k} has wrong source/target")
        self.source = source
        self.target = target
        self.components = tuple(components)
        if check:
            bad = self.violations()
            if bad:
                raise ValueError("not a map of Mackey functors: " + "; ".join(bad))

    def violations(self):
        bad = []
        s, t = self.source, self.target
        f = self.components
        for k in range(s.n):
            if not f[k].compose(s.res[k]) == t.res[k].compose(f[k + 1]):
                bad.append(f"restriction square fails at level {k}")
            if not f[k + 1].compose(s.tr[k]) == t.tr[k].compose(f[k]):
                bad.append(f"transfer square fails at level {k}")
        for k in range(s.n + 1):
            if not f[k].compose(s.weyl[k]) == t.weyl[k].compose(f[k]):
                bad.append(f"weyl square fails at level {k}")
        return bad

    @classmethod
    def zero(cls, source, target):
        comps = [
            GroupHom.zero(source.levels[k], target.levels[k])
            for k in range(source.n + 1)
        ]
        return cls(source, target, comps, check=False)

    @classmethod
    def identity(cls, m):
        return cls(m, m, [GroupHom.identity(g) for g in m.levels], check=False)

    def compose(self, other):
        comps = [a.compose(b) for a, b in zip(self.components, other.components)]
        return MackeyHom(other.source, self.target, comps, check=False)

    def __add__(self, other):
        comps = [a + b for a, b in zip(self.components, other.components)]
        return MackeyHom(self.source, self.target, comps, check=False)

    def __sub__(self, other):
        comps = [a - b for a, b in zip(self.components, other.components)]
        return MackeyHom(self.source, self.target, comps, check=False)

    def scale(self, c):
        comps = [
            GroupHom(h.source, h.target, [[c * x for x in row] for row in h.matrix])
            for h in self.components
        ]
        return MackeyHom(self.source, self.target, comps, check=False)

    def is_zero(self):
        return all(h.is_zero() for h in self.components)

    def __eq__(self, other):
        if not isinstance(other, MackeyHom):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.components == other.components
        )

    def is_iso(self):
        for k, h in enumerate(self.components):
            if ab_kernel(h)[0].ngens:
                return False
            if ab_cokernel(h)[0].ngens:
                return False
        return True


def direct_sum(*functors):
    """Direct sum, with injection and projection MackeyHoms."""
    if not functors:
        raise ValueError("need at least one summand")
    n = functors[0].n
    if any(m.n != n for m in functors):
        raise ValueError("summands live over different groups")
    levels = []
    for k in range(n + 1):
        g = ZERO_GROUP
        for m in functors:
            g = g.direct_sum(m.levels[k])
        levels.append(g)

    def stack(maps, src_levels, tgt_levels, srcs, tgts):
        sizes_s = [m.ngens for m in srcs]
        sizes_t = [m.ngens for m in tgts]
        blocks = [(i, i, h) for i, h in enumerate(maps)]
        return _block_hom(src_levels, tgt_levels, blocks, sizes_s, sizes_t)

    res, tr, weyl = [], [], []
    for k in range(n):
        res.append(stack([m.res[k] for m in functors], levels[k + 1], levels[k],
                         [m.levels[k + 1] for m in functors], [m.levels[k] for m in functors]))
        tr.append(stack([m.tr[k] for m in functors], levels[k], levels[k + 1],
                        [m.levels[k] for m in functors], [m.levels[k + 1] for m in functors]))
    for k in range(n + 1):
        weyl.append(stack([m.weyl[k] for m in functors], levels[k], levels[k],
                          [m.levels[k] for m in functors], [m.levels[k] for m in functors]))
    total = MackeyFunctor(n, levels, res, tr, weyl)
    injections = []
    projections = []
    for idx, m in enumerate(functors):
        inj, proj = [], []
        for k in range(n + 1):
            off = sum(f.levels[k].ngens for f in functors[:idx])
            sz = m.levels[k].ngens
            tot = levels[k].ngens
            imat = zeros(tot, sz)
            pmat = zeros(sz, tot)
            for i in range(sz):
                imat[off + i][i] = 1
                pmat[i][off + i] = 1
            inj.append(GroupHom(m.levels[k], levels[k], imat))
            proj.append(GroupHom(levels[k], m.levels[k], pmat))
        injections.append(MackeyHom(m, total, inj, check=False))
        projections.append(MackeyHom(total, m, proj, check=False))
    return total, injections, projections


def _functor_from_subquotients(carrier, sqs):
    """Mackey functor whose level k is sqs[k].group inside carrier's levels."""
    n = carrier.n
    levels = [sq.group for sq in sqs]

    def induced(hom, k_src, k_tgt):
        src_sq, tgt_sq = sqs[k_src], sqs[k_tgt]
        cols = []
        for vec in src_sq.gen_vectors:
            img = mat_vec(hom.matrix, vec)
            cols.append(tgt_sq.reduce(img))
        mat = [[cols[j][i] for j in range(len(cols))] for i in range(levels[k_tgt].ngens)]
        return GroupHom(levels[k_src], levels[k_tgt], mat)

    res = [induced(carrier.res[k], k + 1, k) for k in range(n)]
    tr = [induced(carrier.tr[k], k, k + 1) for k in range(n)]
    weyl = [induced(carrier.weyl[k], k, k) for k in range(n + 1)]
    return MackeyFunctor(n, levels, res, tr, weyl)


def image_functor(f: MackeyHom):
    """Image subfunctor of the target, with its inclusion."""
    sqs = []
    for k in range(f.source.n + 1):
        _, _, sq = ab_image(f.components[k])
        sqs.append(sq)
    sub = _functor_from_subquotients(f.target, sqs)
    incs = []
    for k, sq in enumerate(sqs):
        mat = [[sq.gen_vectors[j][i] for j in range(sub.levels[k].ngens)]
               for i in range(f.target.levels[k].ngens)]
        incs.append(GroupHom(sub.levels[k], f.target.levels[k], mat))
    return sub, MackeyHom(sub, f.target, incs, check=False)


def kernel_functor(f: MackeyHom):
    """Kernel subfunctor of the source, with its inclusion."""
    sqs = []
    for k in range(f.source.n + 1):
        _, _, sq = ab_kernel(f.components[k])
        sqs.append(sq)
    sub = _functor_from_subquotients(f.source, sqs)
    incs = []
    for k, sq in enumerate(sqs):
        mat = [[sq.gen_vectors[j][i] for j in range(sub.levels[k].ngens)]
               for i in range(f.source.levels[k].ngens)]
        incs.append(GroupHom(sub.levels[k], f.source.levels[k], mat))
    return sub, MackeyHom(sub, f.source, incs, check=False)


def quotient_functor(m: MackeyFunctor, sub: MackeyHom):
    """Quotient of m by the image of sub, with the projection."""
    if sub.target != m:
        raise ValueError("sub must map into m")
    sqs = []
    for k in range(m.n + 1):
        _, _, sq = ab_cokernel(sub.components[k])
        sqs.append(sq)
    quo = _functor_from_subquotients(m, sqs)
    projs = []
    for k, sq in enumerate(sqs):
        ng = m.levels[k].ngens
        cols = [sq.reduce([1 if i == j else 0 for i in range(ng)]) for j in range(ng)]
        mat = [[cols[j][i] for j in range(ng)] for i in range(quo.levels[k].ngens)]
        projs.append(GroupHom(m.levels[k], quo.levels[k], mat))
    return quo, MackeyHom(m, quo, projs, check=False)


def is_ses(f: MackeyHom, g: MackeyHom):
    """True iff 0 -> A -f-> B -g-> C -> 0 is exact at every level."""
    if f.target != g.source:
        raise ValueError("maps are not composable")
    for k in range(f.source.n + 1):
        if ab_kernel(f.components[k])[0].ngens:
            return False
        if ab_cokernel(g.components[k])[0].ngens:
            return False
        if not ab_is_exact(f.components[k], g.components[k]):
            return False
    return True


# -- hom groups and isomorphism search ------------------------------------

def hom_mackey(m: MackeyFunctor, nn: MackeyFunctor):
    """The group of Mackey natural transformations m -> nn, with a basis.

    Solved as the kernel of the commuting-square linear system over all
    levels, in exact integer arithmetic.
    """
    if m.n != nn.n:
        raise ValueError("functors live over different groups")
    n = m.n
    # Unknowns: per level, the entries of a matrix M(k) -> N(k), but only
    # multiples of the minimal scale allowed by torsion are free.
    slots = []  # (level, row, col, scale, order of the coset group)
    from math import gcd
    for k in range(n + 1):
        a, b = m.levels[k], nn.levels[k]
        for j, d in enumerate(a.orders):
            for i, e in enumerate(b.orders):
                if d == 0 and e == 0:
                    slots.append((k, i, j, 1, 0))
                elif d == 0:
                    slots.append((k, i, j, 1, e))
                elif e == 0:
                    continue  # entry forced to zero
                else:
                    g = gcd(d, e)
                    if g > 1:
                        slots.append((k, i, j, e // g, e // (e // g)))
    nslots = len(slots)
    if nslots == 0:
        return FGAbGroup(), []

    def hom_of(vec):
        comps = []
        mats = {
            k: zeros(nn.levels[k].ngens, m.levels[k].ngens) for k in range(n + 1)
        }
        for x, (k, i, j, s, _) in zip(vec, slots):
            if x:
                mats[k][i][j] += x * s
        for k in range(n + 1):
            comps.append(GroupHom(m.levels[k], nn.levels[k], mats[k]))
        return MackeyHom(m, nn, comps, check=False)

    # Constraint rows: entries of each commuting-square difference for each
    # basis slot, each taken modulo the order of the relevant target
    # coordinate.
    def square_diff(h: MackeyHom, kind, k):
        s, t = h.source, h.target
        f = h.components
        if kind == "res":
            return f[k].compose(s.res[k]) - t.res[k].compose(f[k + 1])
        if kind == "tr":
            return f[k + 1].compose(s.tr[k]) - t.tr[k].compose(f[k])
        return f[k].compose(s.weyl[k]) - t.weyl[k].compose(f[k])

    basis_homs = []
    for t in range(nslots):
        vec = [0] * nslots
        vec[t] = 1
        basis_homs.append(hom_of(vec))

    kinds = [("res", k) for k in range(n)] + [("tr", k) for k in range(n)] + [
        ("weyl", k) for k in range(n + 1)
    ]
    mat = []
    mod_col = []
    for kind, k in kinds:
        diffs = [square_diff(h, kind, k) for h in basis_homs]
        sample = square_diff(MackeyHom.zero(m, nn), kind, k)
        tgt = sample.target
        src = sample.source
        for jj in range(src.ngens):
            for ii, e in enumerate(tgt.orders):
                row = [d.matrix[ii][jj] for d in diffs]
                if any(row) or e == 1:
                    mat.append(row)
                    mod_col.append(e)
    # Solve: x free on slots, constraint rows == 0 modulo mod_col.
    aug_cols = []
    for r, e in enumerate(mod_col):
        if e:
            col = [0] * len(mat)
            col[r] = e
            aug_cols.append(col)
    full = [row.copy() for row in mat]
    for j, col in enumerate(aug_cols):
        for i in range(len(full)):
            full[i].append(col[i])
    if not full:
        sol_cols = [[1 if i == t else 0 for i in range(nslots)] for t in range(nslots)]
    else:
        sol_cols = [v[:nslots] for v in kernel_basis(full)]
    rel_cols = []
    for t, (_, _, _, _, o) in enumerate(slots):
        if o:
            col = [0] * nslots
            col[t] = o
            rel_cols.append(col)
    sq = Subquotient(nslots, sol_cols + rel_cols, rel_cols)
    basis = [hom_of(vec) for vec in sq.gen_vectors]
    return sq.group, basis


def find_isomorphism(m: MackeyFunctor, nn: MackeyFunctor, tries=400, seed=7):
    """An explicit isomorphism m -> nn, or None.

    Levelwise group equality is checked first; then the hom group is
    searched (deterministic candidates, then seeded random combinations)
    for an invertible element.
    """
    if m.n != nn.n:
        return None
    for a, b in zip(m.levels, nn.levels):
        if a != b:
            return None
    group, basis = hom_mackey(m, nn)
    if not basis:
        return MackeyHom.zero(m, nn) if m.is_zero() else None
    for h in basis:
        if h.is_iso():
            return h
    total = basis[0]
    for h in basis[1:]:
        total = total + h
    if total.is_iso():
        return total
    rng = random.Random(seed)
    orders = group.orders
    for _ in range(tries):
        cand = MackeyHom.zero(m, nn)
        for h, o in zip(basis, orders):
            c = rng.randrange(o) if o else rng.randrange(-3, 4)
            if c:
                cand = cand + h.scale(c)
        if cand.is_iso():
            return cand
    return None


# -- display -------------------------------------------------------------

def lewis_diagram(m: MackeyFunctor):
    """ASCII Lewis diagram, levels top (full group) to bottom (trivial)."""
    lines = []
    width = max(len(str(g)) for g in m.levels)
    for k in range(m.n, -1, -1):
        label = f"C_{2 ** k}".ljust(8)
        lines.append(f"{label}{str(m.levels[k]).center(width + 2)}")
        if k:
            rmat = m.res[k - 1].matrix
            tmat = m.tr[k - 1].matrix
            rtxt = _matrix_text(rmat)
            ttxt = _matrix_text(tmat)
            lines.append(f"{'':8}  res={rtxt}  tr={ttxt}")
    return "\n".join(lines)


def _matrix_text(mat):
    if not mat or not mat[0]:
        return "[]"
    if len(mat) == 1 and len(mat[0]) == 1:
        return str(mat[0][0])
    return "[" + "; ".join(" ".join(str(x) for x in row) for row in mat) + "]"
