"""Names for spectral-sequence classes and Mackey functor summands.

A generator label is a formal word a_V * u_W * (u^-)^e * p where V, W are
representations of the subgroup the class lives over and p is a monomial
in the translated norm classes.  Sums of representations multiply out,
a_{V+W} = a_V a_W and u_{V+W} = u_V u_W, so labels are stored with V and W
as plain representation sums in normal form.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache

from . import mackey
from .reps import Irrep, RepSum, lambda_prime, reduced_regular, sign


@dataclass(frozen=True)
class GeneratorLabel:
    level: int
    a: RepSum
    u: RepSum
    u_minus: int = 0
    monomial: object = None  # a Monomial, or None for bare Bredon classes

    def times_a(self, rep):
        return replace(self, a=self.a + rep)

    def times_u(self, rep):
        return replace(self, u=self.u + rep)

    def __str__(self):
        parts = []
        if self.u_minus:
            parts.append("u-" * self.u_minus)
        if self.a:
            parts.append(_exp_str("a", self.a))
        if self.u:
            parts.append(_exp_str("u", self.u))
        if self.monomial is not None:
            parts.append(str(self.monomial))
        return " ".join(parts) if parts else "1"


def apply_gold_relation(label: GeneratorLabel):
    """Rewrite a_{2s} u_{l'} as 2 a_{l'} u_{2s} when both factors appear.

    Returns (coefficient, label); the coefficient is 1 when the relation
    does not apply.
    """
    lvl = label.level
    if lvl < 2:
        return 1, label
    two_sigma = RepSum(lvl, {sign(lvl): 2})
    lam = RepSum.of(lvl, lambda_prime(lvl))
    a, u = label.a, label.u
    if a.mult.get(sign(lvl), 0) >= 2 and u.mult.get(lambda_prime(lvl), 0) >= 1:
        new_a = RepSum(lvl, dict(a.mult))
        new_a = new_a.remove(sign(lvl), 2) + lam
        new_u = u.remove(lambda_prime(lvl), 1) + two_sigma
        return 2, replace(label, a=new_a, u=new_u)
    return 1, label


def _exp_str(sym, rep: RepSum):
    # factor out reduced regular representations for readability
    lvl = rep.level
    rbar = reduced_regular(lvl)
    count = 0
    rest = rep
    if rbar.dim:
        while all(rest.mult.get(i, 0) >= c for i, c in rbar.mult.items()):
            nxt = dict(rest.mult)
            ok = True
            for i, c in rbar.mult.items():
                nxt[i] -= c
            rest = RepSum(lvl, nxt)
            count += 1
            if not rbar.mult:
                break
    parts = []
    if count:
        parts.append(f"{sym}_rhobar{'^' + str(count) if count > 1 else ''}")
    for irr, c in rest.summands():
        parts.append(f"{sym}_{irr}{'^' + str(c) if c > 1 else ''}")
    return " ".join(parts) if parts else "1"


# -- named summands ------------------------------------------------------

@dataclass(frozen=True)
class Summand:
    """A named Mackey functor, possibly sign-twisted and induced.

    ``base`` names a Table 1 functor living over C_{2^base_level}; if
    ``signed`` it is first promoted one level with the sign action, then
    induced up to C_{2^n} from level ``induced_from``.
    """

    n: int
    induced_from: int
    base: str  # "Z" | "Zstar" | "B" | "Bstar"
    j: int = 0
    k: int = 0
    signed: bool = False

    @property
    def base_level(self):
        return self.induced_from - 1 if self.signed else self.induced_from

    def base_name(self):
        if self.base == "Z":
            return "Z"
        if self.base == "Zstar":
            return "Zstar"
        if self.base == "B":
            return f"B({self.j},{self.k})"
        if self.base == "Bstar":
            return f"Bstar(1,{self.k})"
        raise ValueError(self.base)

    def realize(self) -> "mackey.MackeyFunctor":
        return _realize_cached(
            self.n, self.induced_from, self.base, self.j, self.k, self.signed
        )

    def base_level_order(self, i):
        """Order of the (possibly signed) base functor at level i."""
        if i > self.induced_from or i < 0:
            raise ValueError("level out of range for the base")
        if self.signed and i == self.induced_from:
            return 1
        if self.base in ("Z", "Zstar"):
            return 0
        if self.base == "B":
            return 2 ** min(max(i - self.k, 0), self.j)
        if self.base == "Bstar":
            return 2 ** min(max(i - self.k, 0), 1)
        raise ValueError(self.base)

    def level_order(self, lvl):
        """Order of the realized functor at level lvl (0 = infinite)."""
        kk = self.induced_from
        copies = 2 ** (self.n - max(lvl, kk))
        base = self.base_level_order(min(lvl, kk))
        return 0 if (base == 0 and copies > 0) else base ** copies

    def __str__(self):
        name = self.base_name() + ("^-" if self.signed else "")
        if self.induced_from == self.n:
            return name
        return f"Ind_{self.induced_from} {name}"


@lru_cache(maxsize=None)
def _realize_cached(n, induced_from, base, j, k, signed):
    lvl = induced_from - 1 if signed else induced_from
    name = {"Z": "Z", "Zstar": "Zstar"}.get(base)
    if name is None:
        name = f"B({j},{k})" if base == "B" else f"Bstar(1,{k})"
    m = mackey.make_named(name, lvl)
    if signed:
        m = mackey.signed_induce(m)
    return mackey.induce(m, n)


def z_summand(n, induced_from=None, signed=False):
    kk = n if induced_from is None else induced_from
    return Summand(n, kk, "Z", signed=signed)


def b_summand(n, j, k, induced_from=None, signed=False):
    kk = n if induced_from is None else induced_from
    return Summand(n, kk, "B", j=j, k=k, signed=signed)


def b_star_summand(n, k, induced_from=None, signed=False):
    kk = n if induced_from is None else induced_from
    return Summand(n, kk, "Bstar", j=1, k=k, signed=signed)
