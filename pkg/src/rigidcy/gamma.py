"""The p-adic Gamma function at truncated precision.

Gamma_p(0) = 1, and Gamma_p(n+1)/Gamma_p(n) equals -n when p does not
divide n and -1 when it does.  Continuity pins Gamma_p down on all of Z_p:
arguments congruent mod p**N have values congruent mod p**N, so evaluation
at a rational in Z_p is a lookup at its integer representative.

Two evaluation strategies sit behind one interface: a dense table of all
p**N residues (O(1) lookups, bounded by an entry budget) and a lazy walker
that extends forward from the nearest previously computed argument.  Both
are safe to share between threads; tables are immutable after build and
the walker serializes its memo updates.

On top of evaluation: the reflection sign (-1)^[r]_0, the local expansion
coefficients G1 (mod p^2) and G2 (mod p) of Gamma_p around t, the exact
integer bridge to the classical Gamma, and the multiplication-formula
residual whose vanishing the test suite asserts.
"""

from __future__ import annotations

import bisect
import threading
from array import array
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from rigidcy.padic import PadicCtx, PadicNum, embed, first_digit, teichmuller

__all__ = [
    "G12",
    "GammaTable",
    "LazyGamma",
    "TABLE_ENTRY_BUDGET",
    "build_table",
    "classical_gamma_bridge",
    "g1_g2",
    "gamma_at",
    "gamma_provider",
    "multiplication_residual",
    "reflection_sign",
]

TABLE_ENTRY_BUDGET = 20_000_000


class GammaTable:
    """Dense residues Gamma_p(n) mod p**N for every 0 <= n < p**N."""

    __slots__ = ("ctx", "values")

    def __init__(self, ctx):
        M = ctx.modulus
        if M > TABLE_ENTRY_BUDGET:
            raise ValueError(
                f"table of {M} entries exceeds budget {TABLE_ENTRY_BUDGET}; "
                "use lazy evaluation mode"
            )
        p = ctx.p
        values = array("q", bytes(8 * M))
        values[0] = 1
        g = 1
        for n in range(M - 1):
            g = g * (M - n) % M if n % p else M - g
            values[n + 1] = g
        self.ctx = ctx
        self.values = values

    def at_int(self, n):
        return self.values[n]


class LazyGamma:
    """Gamma_p(n) mod p**N computed by walking from memoized anchors."""

    __slots__ = ("ctx", "_args", "_memo", "_lock")

    def __init__(self, ctx):
        self.ctx = ctx
        self._args = [0]
        self._memo = {0: 1}
        self._lock = threading.Lock()

    def at_int(self, n):
        ctx = self.ctx
        if not 0 <= n < ctx.modulus:
            raise ValueError(f"argument {n} outside [0, p^N)")
        with self._lock:
            memo = self._memo
            if n in memo:
                return memo[n]
            start = self._args[bisect.bisect_right(self._args, n) - 1]
            p, M = ctx.p, ctx.modulus
            g = memo[start]
            prod = 1
            for j in range(start, n):
                if j % p:
                    prod = prod * j % M
            if (n - start) % 2:
                prod = M - prod
            g = g * prod % M
            memo[n] = g
            bisect.insort(self._args, n)
            return g


@lru_cache(maxsize=3)
def _provider(p, N, mode):
    ctx = PadicCtx(p, N)
    if mode == "table" or (mode == "auto" and ctx.modulus <= TABLE_ENTRY_BUDGET):
        return GammaTable(ctx)
    return LazyGamma(ctx)


def gamma_provider(ctx, mode="auto"):
    """Shared evaluator for Gamma_p mod p**N; table when budget allows."""
    if mode not in ("auto", "table", "lazy"):
        raise ValueError(f"unknown mode {mode!r}")
    return _provider(ctx.p, ctx.N, mode)


def build_table(ctx):
    """Force the dense-table strategy (errors above the entry budget)."""
    return gamma_provider(ctx, mode="table")


def gamma_at(x, ctx, mode="auto"):
    """Gamma_p(x) mod p**N for a rational x in Z_p."""
    rep = embed(x, ctx).assert_integral().residue(ctx.N)
    value = gamma_provider(ctx, mode).at_int(rep)
    return PadicNum(ctx, 0, value, ctx.N)


def reflection_sign(r, p):
    """(-1) to the first digit of r: the value of Gamma_p(r)Gamma_p(1-r)."""
    return -1 if first_digit(r, p) % 2 else 1


@dataclass(frozen=True)
class G12:
    """Local expansion coefficients at one point: g1 mod p^2, g2 mod p."""

    g1: int
    g2: int


def g1_g2(t, ctx, mode="auto"):
    """Coefficients of Gamma_p(t+sp)/Gamma_p(t) = 1 + sp*G1 + (sp)^2*G2/2.

    Solved from the s = 1, 2 instances mod p^3: with u_s the ratio minus
    one, G1 = (4u_1 - u_2)/(2p) mod p^2 and G2 = (u_2 - 2u_1)/p^2 mod p.
    """
    if ctx.N < 3:
        raise ValueError("g1_g2 needs at least three digits")
    p = ctx.p
    work = ctx if ctx.N == 3 else PadicCtx(p, 3)
    M = work.modulus
    prov = gamma_provider(work, mode)
    rep = embed(t, work).assert_integral().residue(3)
    g0_inv = pow(prov.at_int(rep), -1, M)
    u1 = (prov.at_int((rep + p) % M) * g0_inv - 1) % M
    u2 = (prov.at_int((rep + 2 * p) % M) * g0_inv - 1) % M
    d1 = (4 * u1 - u2) % M
    d2 = (u2 - 2 * u1) % M
    if d1 % p or d2 % p**2:
        raise ArithmeticError(f"expansion of Gamma_p at {t} lost a p-power")
    g1 = (d1 // p) * pow(2, -1, p**2) % p**2
    g2 = d2 // p**2 % p
    return G12(g1, g2)


def classical_gamma_bridge(n, ctx):
    """Exact factorization (n-1)! = sign * Gamma_p(n) * f! * p**f.

    Returns the four factors (sign, Gamma_p(n) as an exact integer,
    f! and p**f with f = floor((n-1)/p)).
    """
    if n < 1:
        raise ValueError("n must be positive")
    p = ctx.p
    sign = -1 if n % 2 else 1
    prod = 1
    for j in range(1, n):
        if j % p:
            prod *= j
    f = (n - 1) // p
    return sign, sign * prod, factorial(f), p**f


def multiplication_residual(x, n, ctx, mode="auto"):
    """LHS/RHS - 1 of the Gamma_p multiplication formula at x = m/(p-1).

    The formula: prod over l < n of Gamma_p((x+l)/n) equals
    omega(n)**m * Gamma_p(x) * prod over 0 < l < n of Gamma_p(l/n), where
    the Teichmuller exponent m comes from (1-x)(1-p) = m + 1 - p.
    """
    p = ctx.p
    if n % p == 0:
        raise ValueError(f"n={n} not coprime to p={p}")
    x = Fraction(x)
    if not (0 <= x < 1 and (p - 1) % x.denominator == 0):
        raise ValueError(f"{x} is not of the form m/(p-1)")
    m = int(x * (p - 1))
    lhs = PadicNum.one(ctx)
    for l in range(n):
        lhs = lhs * gamma_at(Fraction(x + l, n), ctx, mode)
    rhs = teichmuller(n, ctx) ** m * gamma_at(x, ctx, mode)
    for l in range(1, n):
        rhs = rhs * gamma_at(Fraction(l, n), ctx, mode)
    return lhs / rhs - 1
