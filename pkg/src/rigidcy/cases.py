"""Registry of the fourteen rigid hypergeometric data sets.

Each case is a pair (r1, r2) drawn from {1/2, 1/3, 1/4, 1/6} or one of the
four sporadic pairs; the working multiset is alpha = {r1, 1-r1, r2, 1-r2},
which splits into blocks Sigma_d = {l/d : gcd(l,d) = 1} recorded in
`partition`.  Alongside: the constant M = prod M_{d_i}, the level and (when
known) the LMFDB label of the attached weight-4 eigenform, the discriminant
of the quadratic character chi_alpha, and the eta-quotient formula for the
seven cases that have one.

Per-prime data: order_alpha labels alpha so the dashed multiset is
non-decreasing with the complementarity pairing intact, yielding the digit
thresholds a_j = p r_j' - r_j that drive every valuation argument.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import prod

from sympy import divisors, mobius, totient, jacobi_symbol

from rigidcy.padic import dwork_dash, first_digit
from rigidcy.gamma import gamma_at

__all__ = [
    "CYCLOTOMIC",
    "EtaQuotientSpec",
    "HGCase",
    "OrderedAlpha",
    "RamifiedPrimeError",
    "case_by_id",
    "chi_alpha",
    "chi_alpha_gamma_product",
    "cyclotomic_identity_check",
    "fourteen_cases",
    "m_d",
    "order_alpha",
    "registry_json",
    "sigma",
]


class RamifiedPrimeError(ValueError):
    """The prime divides a cyclotomic denominator of the case."""


def sigma(d):
    """The block Sigma_d: fractions l/d in lowest terms, 0 < l < or = d."""
    if d == 1:
        return [Fraction(1)]
    return [Fraction(l, d) for l in range(1, d + 1) if Fraction(l, d).denominator == d]


def m_d(d):
    """The constant M_d = prod over n | d of (n^n)^mobius(d/n)."""
    num = den = 1
    for n in divisors(d):
        mu = mobius(d // n)
        if mu == 1:
            num *= n**n
        elif mu == -1:
            den *= n**n
    q, r = divmod(num, den)
    if r:
        raise ArithmeticError(f"M_{d} is not integral")
    return q

# factorial quotient data: prod (l/d)_k / k! over primitive l equals
# prod (p_i k)! / prod (q_j k)! times M_d^-k
CYCLOTOMIC = {
    2: ((2,), (1, 1)),
    3: ((3,), (1, 1, 1)),
    4: ((4,), (1, 1, 2)),
    5: ((5,), (1, 1, 1, 1, 1)),
    6: ((6,), (1, 2, 3)),
    8: ((8,), (1, 1, 1, 1, 4)),
    10: ((10,), (1, 1, 1, 2, 5)),
    12: ((2, 12), (1, 1, 1, 1, 4, 6)),
}


@dataclass(frozen=True)
class EtaQuotientSpec:
    """Sum of scaled eta monomials: terms are (coefficient, ((m, e), ...))."""

    terms: tuple


@dataclass(frozen=True)
class HGCase:
    index: int
    r1: Fraction
    r2: Fraction
    partition: tuple
    level: int
    lmfdb_label: str | None
    chi_disc: int
    eta_formula: EtaQuotientSpec | None = None
    alpha: tuple = field(init=False)
    M: int = field(init=False)

    def __post_init__(self):
        alpha = tuple(sorted((self.r1, 1 - self.r1, self.r2, 1 - self.r2)))
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "M", prod(m_d(d) for d in self.partition))
        assert sum(totient(d) for d in self.partition) == 4
        blocks = sorted(f for d in self.partition for f in sigma(d))
        assert blocks == list(alpha), (self.partition, alpha)

    @property
    def case_id(self):
        return f"{self.r1},{self.r2}"

    def is_ramified(self, p):
        return p in (2, 3, 5) or any(d % p == 0 for d in self.partition)

    def __repr__(self):
        return f"HGCase({self.case_id})"


def _eta(*term_specs):
    return EtaQuotientSpec(tuple((c, tuple(ms)) for c, ms in term_specs))


_CASES = (
    ((1, 2), (1, 2), (2, 2, 2, 2), 8, "8.4.1.a", 1,
     _eta((1, [(2, 4), (4, 4)]))),
    ((1, 2), (1, 3), (2, 2, 3), 36, "36.4.1.a", 3,
     _eta((1, [(6, 14), (2, -3), (18, -3)]), (-3, [(2, 3), (6, 2), (18, 3)]))),
    ((1, 2), (1, 4), (2, 2, 4), 16, "16.4.1.a", 2,
     _eta((1, [(4, 16), (2, -4), (8, -4)]))),
    ((1, 2), (1, 6), (2, 2, 6), 72, "72.4.1.b", 1, None),
    ((1, 3), (1, 3), (3, 3), 27, "27.4.1.a", 1,
     _eta((1, [(1, 3), (3, 4), (9, 1)]), (-27, [(3, 1), (9, 4), (27, 3)]))),
    ((1, 3), (1, 4), (3, 4), 9, "9.4.1.a", 6,
     _eta((1, [(3, 8)]))),
    ((1, 3), (1, 6), (3, 6), 108, "108.4.1.a", 3, None),
    ((1, 4), (1, 4), (4, 4), 32, "32.4.1.a", 1,
     _eta((1, [(4, 10), (8, -2)]), (-8, [(8, 10), (4, -2)]))),
    ((1, 4), (1, 6), (4, 6), 144, None, 2, None),
    ((1, 6), (1, 6), (6, 6), 216, None, 1, None),
    ((1, 5), (2, 5), (5,), 25, "25.4.1.b", 5,
     _eta((1, [(5, 10), (1, -1), (25, -1)]), (5, [(1, 2), (5, 4), (25, 2)]))),
    ((1, 8), (3, 8), (8,), 128, None, 2, None),
    ((1, 10), (3, 10), (10,), 200, None, 1, None),
    ((1, 12), (5, 12), (12,), 864, None, 1, None),
)


@lru_cache(maxsize=1)
def fourteen_cases():
    """The fourteen cases in registry order, index 1 through 14."""
    return tuple(
        HGCase(i, Fraction(*r1), Fraction(*r2), part, level, label, disc, eta)
        for i, (r1, r2, part, level, label, disc, eta) in enumerate(_CASES, start=1)
    )


def case_by_id(key):
    """Look up a case by index (1-14) or by its "r1,r2" string."""
    for case in fourteen_cases():
        if key in (case.index, str(case.index), case.case_id):
            return case
    raise KeyError(f"no case {key!r}")


@dataclass(frozen=True)
class OrderedAlpha:
    """Per-prime labeling of alpha with the dashed multiset sorted.

    r and rdash are paired complementarily (positions 1&4 and 2&3 sum to
    one) and a_j = p r_j' - r_j; sentinels a0 = -1 and a5 = p-1 pad the
    threshold list for valuation bookkeeping.
    """

    p: int
    r: tuple
    rdash: tuple
    a: tuple

    @property
    def thresholds(self):
        return (-1,) + self.a + (self.p - 1,)


def order_alpha(case, p):
    """Label alpha for the prime p.  Raises RamifiedPrimeError when p is bad."""
    if case.is_ramified(p):
        raise RamifiedPrimeError(f"p={p} is ramified for case {case.case_id}")
    dash = {r: dwork_dash(r, p) for r in set(case.alpha)}
    assert sorted(dash[r] for r in case.alpha) == sorted(case.alpha), "not dash-closed"
    for perm in permutations(sorted(case.alpha)):
        rd = tuple(dash[r] for r in perm)
        if list(rd) != sorted(rd):
            continue
        if perm[0] + perm[3] == 1 and perm[1] + perm[2] == 1 \
                and rd[0] + rd[3] == 1 and rd[1] + rd[2] == 1:
            a = tuple(int(p * rd[j] - perm[j]) for j in range(4))
            assert all(x == first_digit(-perm[j], p) for j, x in enumerate(a))
            assert a[0] <= a[1] <= a[2] <= a[3]
            assert a[0] + a[3] == a[1] + a[2] == p - 1
            return OrderedAlpha(p, perm, rd, a)
    raise AssertionError(f"no admissible labeling for {case.case_id} at p={p}")


def chi_alpha(case, p, route="gamma"):
    """The quadratic character value chi_alpha(p), by either route.

    "gamma" evaluates prod Gamma_p(r_j) = (-1)^(a1+a2); "legendre" reads
    the discriminant off the registry and takes a Legendre symbol.
    """
    if case.is_ramified(p):
        raise RamifiedPrimeError(f"p={p} is ramified for case {case.case_id}")
    if route == "gamma":
        ordered = order_alpha(case, p)
        return -1 if (ordered.a[0] + ordered.a[1]) % 2 else 1
    if route == "legendre":
        return int(jacobi_symbol(case.chi_disc, p))
    raise ValueError(f"unknown route {route!r}")


def chi_alpha_gamma_product(case, p, ctx):
    """prod_j Gamma_p(r_j) as a residue; equals chi_alpha(p) mod p^N."""
    out = gamma_at(case.alpha[0], ctx)
    for r in case.alpha[1:]:
        out = out * gamma_at(r, ctx)
    return out


def cyclotomic_identity_check(d, k):
    """Exact check of the factorial form of prod (l/d)_k / k! over primitive l."""
    if d not in CYCLOTOMIC:
        raise ValueError(f"no cyclotomic data for d={d}")
    if k < 0:
        raise ValueError("k must be non-negative")
    lhs = Fraction(1)
    for r in sigma(d):
        for i in range(k):
            lhs *= r + i
    fact = Fraction(1)
    for i in range(1, k + 1):
        fact *= i
    lhs /= fact ** totient(d)
    ps, qs = CYCLOTOMIC[d]
    rhs = Fraction(1)
    for pi in ps:
        for i in range(1, pi * k + 1):
            rhs *= i
    for qj in qs:
        for i in range(1, qj * k + 1):
            rhs /= i
    rhs /= Fraction(m_d(d)) ** k
    return lhs == rhs


def registry_json():
    """The registry as a JSON document (fixture export)."""
    rows = []
    for c in fourteen_cases():
        rows.append({
            "index": c.index,
            "case_id": c.case_id,
            "r1": str(c.r1),
            "r2": str(c.r2),
            "alpha": [str(r) for r in c.alpha],
            "partition": list(c.partition),
            "M": c.M,
            "level": c.level,
            "lmfdb_label": c.lmfdb_label,
            "chi_disc": c.chi_disc,
            "eta_formula": None if c.eta_formula is None else [
                {"coefficient": coeff, "factors": [list(f) for f in factors]}
                for coeff, factors in c.eta_formula.terms
            ],
        })
    return json.dumps(rows, indent=1)
