"""Truncated-precision p-adic integer arithmetic.

A context fixes an odd prime p and the number N of base-p digits carried.
A nonzero number is a pair (val, unit): the value is unit * p**val, with the
unit residue certified modulo p**prec for some 1 <= prec <= N, so the value
itself is pinned down modulo p**(val + prec).  Exact zero is a valuation
sentinel, which keeps multiplication total; a zero produced by cancellation
remembers how many digits of vanishing are certain.

The one bookkeeping rule: every stored digit is guaranteed.  Addition at
mismatched valuations, or cancellation, shrinks prec; nothing ever widens it.
Division may transiently leave the integers (negative val); callers that
need integrality say so through assert_integral().

Also here: the first p-adic digit [r]_0 of a rational, Dwork's dash map
r -> (r + [-r]_0)/p, the step function nu, and Teichmuller lifts.
"""

from __future__ import annotations

from fractions import Fraction
from math import inf

from sympy import isprime

__all__ = [
    "PadicCtx",
    "PadicNum",
    "PrecisionError",
    "dwork_dash",
    "embed",
    "first_digit",
    "nu",
    "teichmuller",
    "vp_int",
]


class PrecisionError(ArithmeticError):
    """A residue was requested beyond the digits actually certified."""


def vp_int(n, p):
    """Exponent of p in the nonzero integer n."""
    if n == 0:
        raise ValueError("valuation of zero is undefined")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


class PadicCtx:
    """Shared prime and digit count; p**N is cached as .modulus."""

    __slots__ = ("p", "N", "modulus")

    def __init__(self, p, N=3):
        if p == 2 or not isprime(p):
            raise ValueError(f"p must be an odd prime, got {p}")
        if N < 1:
            raise ValueError(f"precision must be positive, got {N}")
        self.p = p
        self.N = N
        self.modulus = p**N

    def __eq__(self, other):
        if not isinstance(other, PadicCtx):
            return NotImplemented
        return self.p == other.p and self.N == other.N

    def __hash__(self):
        return hash((self.p, self.N))

    def __repr__(self):
        return f"PadicCtx(p={self.p}, N={self.N})"


class PadicNum:
    """One p-adic number at truncated precision.  Immutable.

    PadicNum(ctx, val, raw, prec) normalizes the value raw * p**val, where
    the integer raw is known modulo p**prec (prec=None meaning raw is
    exact).  p-powers inside raw migrate into val; the certified digit
    count of the remaining unit is capped at ctx.N.  val=inf constructs
    zero, with prec the certified order of vanishing (None meaning exact).
    """

    __slots__ = ("ctx", "val", "unit", "prec")

    def __init__(self, ctx, val, raw=0, prec=None):
        self.ctx = ctx
        p = ctx.p
        if val == inf:
            self.val = inf
            self.unit = 0
            self.prec = inf if prec is None else prec
            return
        if prec is None:
            prec = inf
        if prec != inf:
            if prec < 1:
                raise PrecisionError("no certified digits in construction")
            raw %= p**prec
        if raw == 0:
            if prec == inf:
                self.val, self.unit, self.prec = inf, 0, inf
            else:
                # all we learned is p**(val+prec) divides the value
                self.val, self.unit, self.prec = inf, 0, val + prec
            return
        v = vp_int(raw, p)
        uprec = min(prec - v, ctx.N)
        self.val = val + v
        self.unit = (raw // p**v) % p**uprec
        self.prec = uprec

    # -- constructors ------------------------------------------------

    @classmethod
    def from_residue(cls, ctx, residue, known=None):
        """The number congruent to `residue` modulo p**known (default N)."""
        return cls(ctx, 0, residue, ctx.N if known is None else known)

    @classmethod
    def zero(cls, ctx):
        return cls(ctx, inf)

    @classmethod
    def one(cls, ctx):
        return cls(ctx, 0, 1)

    # -- inspection --------------------------------------------------

    @property
    def is_zero(self):
        return self.val == inf

    @property
    def known_exp(self):
        """Exponent k with the value certified modulo p**k."""
        return self.prec if self.val == inf else self.val + self.prec

    def residue(self, k):
        """The value modulo p**k, as an integer in [0, p**k)."""
        if k < 0:
            raise ValueError("negative modulus exponent")
        if self.known_exp < k:
            raise PrecisionError(
                f"residue mod p^{k} requested, only p^{self.known_exp} certified"
            )
        if self.val == inf or self.val >= k:
            return 0
        if self.val < 0:
            raise ValueError("no integer residue at negative valuation")
        p = self.ctx.p
        return (self.unit % p ** (k - self.val)) * p**self.val

    def assert_integral(self):
        if self.val != inf and self.val < 0:
            raise ValueError(f"value has negative valuation {self.val}")
        return self

    def congruent(self, other, k):
        """True when self - other is certified divisible by p**k."""
        return (self - self._coerce(other)).residue(k) == 0

    def __repr__(self):
        p, N = self.ctx.p, self.ctx.N
        if self.val == inf:
            return f"PadicNum(p={p}, 0 mod p^{self.prec})"
        tail = "" if self.prec == N else f", prec={self.prec}"
        return f"PadicNum(p={p}, N={N}, val={self.val}, unit={self.unit}{tail})"

    # -- arithmetic --------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, PadicNum):
            if other.ctx != self.ctx:
                raise ValueError(f"context mismatch: {self.ctx} vs {other.ctx}")
            return other
        if isinstance(other, (int, Fraction)):
            return embed(other, self.ctx)
        raise TypeError(f"cannot mix PadicNum with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        ctx = self.ctx
        p = ctx.p
        K = min(self.known_exp, other.known_exp)
        if K == inf:
            return PadicNum(ctx, inf)
        vals = [x.val for x in (self, other) if x.val != inf]
        if not vals:
            return PadicNum(ctx, inf, 0, K)
        vmin = min(vals)
        if K - vmin <= 0:
            # one operand's certified vanishing is too shallow to see the other
            return PadicNum(ctx, inf, 0, K)
        M = p ** (K - vmin)
        s = 0
        for x in (self, other):
            if x.val != inf:
                s += x.unit * p ** (x.val - vmin)
        return PadicNum(ctx, vmin, s % M, K - vmin)

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        if self.val == inf:
            return self
        return PadicNum(self.ctx, self.val, -self.unit, self.prec)

    def __sub__(self, other):
        return self.__add__(-self._coerce(other))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        other = self._coerce(other)
        ctx = self.ctx
        if self.val == inf or other.val == inf:
            cert = inf
            if self.val == inf and other.val == inf:
                cert = self.prec + other.prec
            elif self.val == inf:
                cert = self.prec + other.val
            else:
                cert = other.prec + self.val
            return PadicNum(ctx, inf, 0, max(cert, 0))
        prec = min(self.prec, other.prec)
        unit = self.unit * other.unit % ctx.p**prec
        return PadicNum(ctx, self.val + other.val, unit, prec)

    def __rmul__(self, other):
        return self.__mul__(other)

    def inverse(self):
        if self.val == inf:
            raise ZeroDivisionError("inverting p-adic zero")
        M = self.ctx.p**self.prec
        return PadicNum(self.ctx, -self.val, pow(self.unit, -1, M), self.prec)

    def __truediv__(self, other):
        return self.__mul__(self._coerce(other).inverse())

    def __rtruediv__(self, other):
        return self.inverse().__mul__(other)

    def __pow__(self, n):
        ctx = self.ctx
        if n == 0:
            return PadicNum.one(ctx)
        if self.val == inf:
            if n < 0:
                raise ZeroDivisionError("inverting p-adic zero")
            return PadicNum(ctx, inf, 0, self.prec * n)
        M = ctx.p**self.prec
        return PadicNum(ctx, self.val * n, pow(self.unit, n, M), self.prec)

    def shift(self, k):
        """Multiply by p**k."""
        if self.val == inf:
            return PadicNum(self.ctx, inf, 0, self.prec + k)
        return PadicNum(self.ctx, self.val + k, self.unit, self.prec)


def embed(r, ctx):
    """Embed a rational with p-coprime denominator as a PadicNum."""
    f = Fraction(r)
    if f == 0:
        return PadicNum(ctx, inf)
    if f.denominator % ctx.p == 0:
        raise ValueError(f"{f} has denominator divisible by p={ctx.p}")
    v = vp_int(f.numerator, ctx.p)
    M = ctx.modulus
    unit = (f.numerator // ctx.p**v) * pow(f.denominator, -1, M) % M
    return PadicNum(ctx, v, unit, ctx.N)


def first_digit(r, p):
    """First p-adic digit [r]_0 of a rational r with p-coprime denominator."""
    f = Fraction(r)
    if f.denominator % p == 0:
        raise ValueError(f"{f} has denominator divisible by p={p}")
    return f.numerator * pow(f.denominator, -1, p) % p


def dwork_dash(r, p):
    """Dash operation r' = (r + [-r]_0) / p on rationals in Z_p."""
    f = Fraction(r)
    return (f + first_digit(-f, p)) / p


def nu(a, x, p):
    """Valuation step function: 0 when a <= x, 1 when x < a < p.

    Agrees with -floor((x - a)/(p - 1)) everywhere on its domain except
    the corner (a, x) = (0, p-1), where the branch value 0 is the one
    that keeps the rising-factorial reduction exact (the corner is hit
    by r congruent to 1 mod p, whose Pochhammer factors are all units).
    """
    if not 0 <= a < p:
        raise ValueError(f"nu requires 0 <= a < p, got a={a}")
    x = Fraction(x)
    if not 0 <= x <= p - 1:
        raise ValueError(f"nu requires 0 <= x <= p-1, got x={x}")
    return 0 if a <= x else 1


def teichmuller(u, ctx):
    """Teichmuller lift: the (p-1)-st root of unity congruent to u mod p.

    Iterated p-th powering gains at least one digit per step, so the
    fixed point mod p**N is reached in at most N iterations.
    """
    p, M = ctx.p, ctx.modulus
    t = u % M
    if t % p == 0:
        raise ValueError(f"{u} is divisible by p={p}")
    while True:
        s = pow(t, p, M)
        if s == t:
            return PadicNum(ctx, 0, t, ctx.N)
        t = s
