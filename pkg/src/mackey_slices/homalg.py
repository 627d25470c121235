"""Ext groups of Z-module Mackey functors and the extension resolver.

The two projective resolutions here are the explicit ones over C_{2^k}:

    0 -> Z -> Ind_{k-1}Z --(1-gamma)--> Ind_{k-1}Z -> Z -> B_{1,k-1} -> 0

and the two-stage

    Ind_{k-2}Z (+) Ind_{k-1}Z --[counit, 1+gamma]--> Ind_{k-1}Z -> B*_{1,k-2}.

Every stage is a fixed-point functor of a permutation module, hence
projective among Z-modules, and exactness is verified level by level on
construction.  Ext is the cohomology of Hom(resolution, N); degree-one
answers from the short resolution are only reported when the relevant
cochain group already vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .abelian import FGAbGroup, GroupHom, Subquotient, ZERO_GROUP, zeros
from .labels import Summand
from .mackey import (
    MackeyFunctor,
    MackeyHom,
    b_functor,
    b_star_functor,
    constant_z,
    direct_sum,
    hom_mackey,
    induce,
    is_ses,
    restrict_mackey,
    validate,
)


class ResolutionError(Exception):
    pass


class UnresolvedExtension(Exception):
    pass


@dataclass
class Resolution:
    """P_* -> target, with maps[i]: modules[i+1] -> modules[i]."""

    modules: list
    maps: list
    augmentation: MackeyHom
    target: MackeyFunctor
    exact_range: int  # Ext^i trustworthy for i <= exact_range


def _counit_hom(sub, ind_src, ind_tgt, kk):
    """The canonical map Ind_{sub} Z -> Ind_{sub+1} Z over C_{2^kk}.

    Copy c sums into copy (c mod copies); components double above the
    source's own level.
    """
    comps = []
    for j in range(kk + 1):
        src_g, tgt_g = ind_src.levels[j], ind_tgt.levels[j]
        ns, nt = src_g.ngens, tgt_g.ngens
        mat = zeros(nt, ns)
        coef = 1 if j <= sub else 2
        for c in range(ns):
            mat[c % nt][c] += coef
        comps.append(GroupHom(src_g, tgt_g, mat))
    return comps


def resolution_b(k, n):
    """The length-three resolution of B_{1,k-1} over C_{2^k} (1 <= k <= n)."""
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    kk = k
    z = constant_z(kk)
    ind = induce(constant_z(kk - 1), kk)
    b = b_functor(1, k - 1, kk)
    # d1: Ind_{k-1}Z -> Z, the counit (sum over copies, doubled at the top).
    d1 = MackeyHom(ind, z, _counit_hom(kk - 1, ind, z, kk))
    # d2 = 1 - gamma on Ind_{k-1}Z; zero at the top level.
    comps = []
    for j in range(kk + 1):
        g = ind.levels[j]
        if j == kk:
            comps.append(GroupHom.zero(g, g))
        else:
            comps.append(GroupHom.identity(g) - ind.weyl[j])
    d2 = MackeyHom(ind, ind, comps)
    # d3: Z -> Ind_{k-1}Z, the diagonal below the top.
    comps = []
    for j in range(kk + 1):
        src, tgt = z.levels[j], ind.levels[j]
        mat = [[1] for _ in range(tgt.ngens)]
        comps.append(GroupHom(src, tgt, mat))
    d3 = MackeyHom(z, ind, comps)
    # augmentation: reduce the top level mod 2.
    comps = []
    for j in range(kk + 1):
        src, tgt = z.levels[j], b.levels[j]
        mat = [[1]] if tgt.ngens else zeros(0, 1)
        comps.append(GroupHom(src, tgt, mat))
    aug = MackeyHom(z, b, comps)
    res = Resolution([z, ind, ind, z], [d1, d2, d3], aug, b, exact_range=3)
    _check_resolution(res)
    return res


def resolution_bstar(k, n):
    """The two-stage resolution of B*_{1,k-2} over C_{2^k} (2 <= k <= n)."""
    if not 2 <= k <= n:
        raise ValueError("need 2 <= k <= n")
    kk = k
    p0 = induce(constant_z(kk - 1), kk)
    ind_small = induce(constant_z(kk - 2), kk)
    p1, injections, _ = direct_sum(ind_small, p0)
    bstar = b_star_functor(k - 2, kk)
    # component 1: the counit Ind_{k-2}Z -> Ind_{k-1}Z
    u_comps = _counit_hom(kk - 2, ind_small, p0, kk)
    u = MackeyHom(ind_small, p0, u_comps)
    # component 2: 1 + gamma on Ind_{k-1}Z
    plus_comps = [
        GroupHom.identity(p0.levels[j]) + p0.weyl[j] for j in range(kk + 1)
    ]
    plus = MackeyHom(p0, p0, plus_comps)
    # assemble [u, 1+gamma] on the direct sum
    comps = []
    for j in range(kk + 1):
        ns = ind_small.levels[j].ngens
        np0 = p0.levels[j].ngens
        mat = zeros(np0, ns + np0)
        for r in range(np0):
            for c in range(ns):
                mat[r][c] = u.components[j].matrix[r][c]
            for c in range(np0):
                mat[r][ns + c] = plus.components[j].matrix[r][c]
        comps.append(GroupHom(p1.levels[j], p0.levels[j], mat))
    d1 = MackeyHom(p1, p0, comps)
    # augmentation: total sum mod 2 on the two levels where B* lives.
    comps = []
    for j in range(kk + 1):
        src, tgt = p0.levels[j], bstar.levels[j]
        mat = [[1] * src.ngens] if tgt.ngens else zeros(0, src.ngens)
        comps.append(GroupHom(src, tgt, mat))
    aug = MackeyHom(p0, bstar, comps)
    res = Resolution([p0, p1], [d1], aug, bstar, exact_range=0)
    _check_resolution(res)
    return res


def _check_resolution(res: Resolution):
    from .abelian import is_exact as ab_is_exact, cokernel as ab_cokernel

    n = res.target.n
    # augmentation surjective with the first map hitting its kernel
    first = res.maps[0]
    for j in range(n + 1):
        if ab_cokernel(res.augmentation.components[j])[0].ngens:
            raise ResolutionError(f"augmentation not surjective at level {j}")
        if not ab_is_exact(first.components[j], res.augmentation.components[j]):
            raise ResolutionError(f"resolution not exact at stage 0, level {j}")
    for i in range(1, len(res.maps)):
        for j in range(n + 1):
            if not ab_is_exact(res.maps[i].components[j], res.maps[i - 1].components[j]):
                raise ResolutionError(f"resolution not exact at stage {i}, level {j}")


# -- Ext -----------------------------------------------------------------

class HomSpace:
    """Hom group of Mackey functors with coordinates for its elements."""

    def __init__(self, m, nn):
        self.group, self.basis = hom_mackey(m, nn)
        self.source, self.target = m, nn

    def coords(self, h: MackeyHom):
        """Coordinates of h in the canonical hom group (exact)."""
        # Solve sum x_t basis_t == h inside the (finite-or-free) hom group by
        # slot arithmetic: match every matrix entry modulo its target order.
        rows = []
        rhs = []
        mods = []
        for lvl in range(self.source.n + 1):
            tgt_orders = self.target.levels[lvl].orders
            src_n = self.source.levels[lvl].ngens
            for i, e in enumerate(tgt_orders):
                for j in range(src_n):
                    rows.append(
                        [b.components[lvl].matrix[i][j] for b in self.basis]
                    )
                    rhs.append(h.components[lvl].matrix[i][j])
                    mods.append(e)
        # augment with moduli columns and solve over Z
        from .abelian import LatticeSolver

        aug = []
        for r, (row, e) in enumerate(zip(rows, mods)):
            aug.append(row + [e if rr == r else 0 for rr in range(len(rows))])
        if not aug:
            return [0] * self.group.ngens
        solver = LatticeSolver(aug)
        sol = solver.solve(rhs)
        if sol is None:
            raise ValueError("hom is not in the span of the basis")
        return self.group.reduce(sol[: self.group.ngens])


def ext_from_resolution(res: Resolution, nn: MackeyFunctor, max_degree):
    """Ext^i(target, nn) for i <= max_degree via the given resolution."""
    if max_degree > res.exact_range:
        # allowed when the relevant cochain groups vanish
        pass
    spaces = [HomSpace(p, nn) for p in res.modules]
    groups = [sp.group for sp in spaces]
    # differentials delta^i: C^i -> C^{i+1}, f -> f o d_{i+1}
    deltas = []
    for i, d in enumerate(res.maps):
        src_sp, tgt_sp = spaces[i], spaces[i + 1]
        cols = [tgt_sp.coords(h.compose(d)) for h in src_sp.basis]
        mat = [
            [cols[j][r] for j in range(src_sp.group.ngens)]
            for r in range(tgt_sp.group.ngens)
        ]
        deltas.append(GroupHom(src_sp.group, tgt_sp.group, mat))
    out = []
    for i in range(max_degree + 1):
        if i < len(groups):
            out.append(_cohomology_at(groups, deltas, i))
        else:
            # beyond the resolution: zero once the resolution has terminated
            out.append(FGAbGroup())
    # certification: degrees beyond exact_range must have vanishing cochains
    for i in range(min(max_degree, len(groups) - 1) + 1):
        if i > res.exact_range and groups[i].ngens:
            raise ResolutionError(
                f"Ext^{i} not certified: resolution too short and C^{i} != 0"
            )
    return out


def _cohomology_at(groups, deltas, i):
    from .abelian import kernel as ab_kernel

    ambient = groups[i]
    if ambient.ngens == 0:
        return FGAbGroup()
    if i < len(deltas):
        ker_group, ker_inc, _ = ab_kernel(deltas[i])
        k_cols = [
            [ker_inc.matrix[r][t] for r in range(ambient.ngens)]
            for t in range(ker_group.ngens)
        ]
    else:
        k_cols = [
            [1 if r == t else 0 for r in range(ambient.ngens)]
            for t in range(ambient.ngens)
        ]
    rels = []
    for t, d in enumerate(ambient.orders):
        if d:
            col = [0] * ambient.ngens
            col[t] = d
            rels.append(col)
    i_cols = list(rels)
    if i > 0:
        dd = deltas[i - 1]
        for t in range(groups[i - 1].ngens):
            i_cols.append([dd.matrix[r][t] for r in range(ambient.ngens)])
    sq = Subquotient(ambient.ngens, k_cols + rels, i_cols)
    return sq.group


_RES_CACHE = {}


def registered_resolution(base, k, group_level):
    """Resolution of B(1,k-1) or Bstar(1,k-2) over C_{2^group_level}."""
    key = (base, k, group_level)
    if key not in _RES_CACHE:
        if base == "B":
            _RES_CACHE[key] = resolution_b(k, group_level)
        elif base == "Bstar":
            _RES_CACHE[key] = resolution_bstar(k, group_level)
        else:
            raise ResolutionError(f"no registered resolution for {base}")
    return _RES_CACHE[key]


def ext(source, nn: MackeyFunctor, max_degree=1):
    """Ext^*(source, nn) in the category of Z-module Mackey functors.

    ``source`` is a Summand whose base is B(1,k-1) or Bstar(1,k-2); an
    induced source is reduced to its base by the induction adjunction,
    restricting nn to the inducing subgroup.
    """
    if isinstance(source, Summand):
        if source.signed:
            raise ResolutionError("signed sources are not registered")
        a = source.induced_from
        base = source.base
        target = restrict_mackey(nn, a) if a < nn.n else nn
        if base == "B":
            if source.j != 1 or source.k != a - 1:
                raise ResolutionError("only B(1,a-1) sources are registered")
            res = registered_resolution("B", a, a)
        elif base == "Bstar":
            if source.k != a - 2:
                raise ResolutionError("only Bstar(1,a-2) sources are registered")
            res = registered_resolution("Bstar", a, a)
        else:
            raise ResolutionError(f"{base} has no registered resolution")
        return ext_from_resolution(res, target, max_degree)
    raise TypeError("source must be a Summand")


# -- column resolution ----------------------------------------------------

@dataclass(frozen=True)
class ForcedExtension:
    """A topologically forced nonsplit extension between two filtrations."""

    source_filtration: int   # the lower filtration (the quotient summand)
    target_filtration: int   # the higher filtration (the sub summand)
    sub: Summand              # B*-shaped summand sitting deeper
    quotient: Summand         # B-shaped summand arriving later
    result: Summand           # the middle term replacing the pair


def verify_forced_extension(rule: ForcedExtension):
    """Check that result really is a nonsplit extension of quotient by sub.

    Verified over the inducing subgroup, where the three functors are the
    Table 1 diagrams; induction preserves exactness.
    """
    k = rule.result.induced_from
    if not (
        rule.sub.induced_from == k
        and rule.quotient.induced_from == k
        and rule.sub.base == "Bstar"
        and rule.quotient.base == "B"
        and rule.result.base == "B"
        and rule.result.j == 2
    ):
        raise UnresolvedExtension(f"malformed forced extension {rule}")
    bs = b_star_functor(k - 2, k)
    b2 = b_functor(2, k - 2, k)
    b1 = b_functor(1, k - 1, k)
    inc, proj = [], []
    for j in range(k + 1):
        s, m, t = bs.levels[j], b2.levels[j], b1.levels[j]
        if s.ngens and m.ngens:
            inc.append(GroupHom(s, m, [[2]] if m.torsion[0] == 4 else [[1]]))
        else:
            inc.append(GroupHom.zero(s, m))
        if m.ngens and t.ngens:
            proj.append(GroupHom(m, t, [[1]]))
        else:
            proj.append(GroupHom.zero(m, t))
    f = MackeyHom(bs, b2, inc)
    g = MackeyHom(b2, b1, proj)
    if not is_ses(f, g):
        raise UnresolvedExtension("forced extension is not a short exact sequence")
    if section_exists(g):
        raise UnresolvedExtension("forced extension splits; middle term is wrong")
    return True


def section_exists(g: MackeyHom):
    """Whether the surjection g admits a section (finite search)."""
    c = g.target
    hom_group, basis = hom_mackey(c, g.source)
    orders = hom_group.orders
    if any(o == 0 for o in orders):
        raise ValueError("section search needs a finite hom group")
    total = 1
    for o in orders:
        total *= o
    if total > 100000:
        raise ValueError("hom group too large to enumerate")
    idc = MackeyHom.identity(c)
    coords = [0] * len(orders)
    while True:
        cand = MackeyHom.zero(c, g.source)
        for t, x in enumerate(coords):
            if x:
                cand = cand + basis[t].scale(x)
        composite = g.compose(cand)
        if all(
            (composite.components[j] - idc.components[j]).is_zero()
            for j in range(c.n + 1)
        ):
            return True
        for t in range(len(coords)):
            coords[t] += 1
            if coords[t] < orders[t]:
                break
            coords[t] = 0
        else:
            return False


class ExtCheckLog:
    """Record of how each splitting was justified."""

    def __init__(self):
        self.entries = []

    def add(self, x, y, reason):
        self.entries.append((str(x), str(y), reason))


def _ext1_vanishes(x: Summand, y: Summand, cache, log: ExtCheckLog):
    key = (x, y)
    if key in cache:
        return cache[key]
    a = x.induced_from
    y_real = y.realize()
    restricted = restrict_mackey(y_real, a) if a < y.n else y_real
    if restricted.is_zero():
        log.add(x, y, f"Res_{a} of the target vanishes")
        cache[key] = True
        return True
    b = y.induced_from
    if b < x.n:
        x_restr = restrict_mackey(x.realize(), b)
        if x_restr.is_zero():
            log.add(x, y, f"Res_{b} of the source vanishes")
            cache[key] = True
            return True
    groups = ext(x, y_real, max_degree=1)
    ok = groups[1].ngens == 0
    log.add(x, y, f"Ext^1 computed: {groups[1]}")
    cache[key] = ok
    return ok


def resolve_column(entries, forced, log=None):
    """Assemble the total Mackey functor of a filtered column.

    ``entries`` is a list of (filtration, Summand); ``forced`` lists the
    extension rules.  Entries are absorbed from the deepest filtration
    outward; each new summand must either split off (vanishing Ext^1
    against everything already present, each vanishing checked) or pair
    with a recorded B*-summand through a forced rule.

    Returns (summands, log): the list of summands of the total functor.
    """
    if log is None:
        log = ExtCheckLog()
    by_filtration = {}
    for s, summand in entries:
        by_filtration.setdefault(s, []).append(summand)
    rules_by_low = {}
    for rule in forced:
        rules_by_low.setdefault(rule.source_filtration, []).append(rule)
    current = []  # (Summand, origin filtration)
    cache = {}
    for s in sorted(by_filtration, reverse=True):
        batch = by_filtration[s]
        absorbed = []
        for x in batch:
            rule = None
            for r in rules_by_low.get(s, []):
                if r.quotient == x and any(
                    ss == r.sub and orig == r.target_filtration
                    for ss, orig in current
                ):
                    rule = r
                    break
            if rule is not None:
                verify_forced_extension(rule)
                idx = next(
                    i
                    for i, (ss, orig) in enumerate(current)
                    if ss == rule.sub and orig == rule.target_filtration
                )
                current[idx] = (rule.result, rule.target_filtration)
                log.add(rule.quotient, rule.sub, f"forced extension -> {rule.result}")
                continue
            for y, _orig in current:
                if not _ext1_vanishes(x, y, cache, log):
                    raise UnresolvedExtension(
                        f"Ext^1({x}, {y}) does not vanish and no forced rule applies"
                    )
            absorbed.append((x, s))
        current.extend(absorbed)
    summands = [ss for ss, _ in current]
    return summands, log


def realize_column(summands):
    """Direct sum of the given summands as one Mackey functor."""
    functors = [s.realize() for s in summands]
    if not functors:
        raise ValueError("empty column")
    if len(functors) == 1:
        return functors[0]
    return direct_sum(*functors)[0]
