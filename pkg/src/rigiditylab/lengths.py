"""Exact and heuristic rational linear algebra over edge lengths.

Exact mode works with lengths of the form r*sqrt(d), r a positive rational
and d a squarefree positive integer.  Square roots of distinct squarefree
integers are linearly independent over the rationals, so grouping lengths by
radicand yields a basis of their rational span and decides independence
exactly.  For lengths known only numerically, a lattice-reduction search
looks for small integer relations; absence of a relation up to a coefficient
height bound is reported as such, never as a proof of independence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

MAX_FACTOR_INPUT = 2**63


class FactorizationTooLargeError(Exception):
    """Input exceeds the desk-scale factorization budget."""


def _small_primes(limit: int = 10**6) -> list[int]:
    sieve = bytearray([1]) * (limit + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, int(limit**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [i for i, f in enumerate(sieve) if f]


_PRIME_CACHE: list[int] | None = None


def _primes() -> list[int]:
    global _PRIME_CACHE
    if _PRIME_CACHE is None:
        _PRIME_CACHE = _small_primes()
    return _PRIME_CACHE


def _is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid far beyond 2**64."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _square_split(n: int) -> tuple[int, int]:
    """Write n = s**2 * d with d squarefree; returns (s, d)."""
    if n <= 0:
        raise ValueError("expected a positive integer")
    if n >= MAX_FACTOR_INPUT:
        raise FactorizationTooLargeError(f"{n} exceeds the factorization budget")
    s, d, c = 1, 1, n
    trial_limit = 10**6
    for p in _primes():
        if p * p > c:
            break
        if c % p:
            continue
        e = 0
        while c % p == 0:
            c //= p
            e += 1
        s *= p ** (e // 2)
        if e % 2:
            d *= p
    if c > 1:
        if c < trial_limit**2 and not _is_prime(c):
            # Trial division already removed every factor below sqrt(c).
            raise AssertionError(f"unexpected composite cofactor {c}")
        if _is_prime(c):
            d *= c
        else:
            r = math.isqrt(c)
            if r * r == c:
                s *= r
            elif c < trial_limit**3:
                # All prime factors exceed 1e6, so a non-square below 1e18
                # is a product of two distinct primes, hence squarefree.
                d *= c
            else:
                raise FactorizationTooLargeError(
                    f"cannot certify the squarefree part of {c}"
                )
    return s, d


@dataclass(frozen=True)
class ExactLength:
    """A length r*sqrt(d) with r rational and d a squarefree positive integer."""

    r: Fraction
    d: int

    def __post_init__(self):
        if self.d <= 0:
            raise ValueError("radicand must be positive")

    def value(self) -> float:
        return float(self.r) * math.sqrt(self.d)

    def value_mp(self) -> mp.mpf:
        return mp.mpf(self.r.numerator) / self.r.denominator * mp.sqrt(self.d)

    def squared(self) -> Fraction:
        return self.r * self.r * self.d

    def __str__(self):
        if self.d == 1:
            return str(self.r)
        r = "" if self.r == 1 else f"{self.r}*"
        return f"{r}sqrt({self.d})"


def normalize_sqrt(q) -> ExactLength:
    """Canonical form r*sqrt(d) of sqrt(q) for a positive rational q.

    sqrt(num/den) = sqrt(num*den)/den, and the integer radicand splits into
    a square part and a squarefree part by trial division up to 1e6 plus a
    deterministic primality test on the cofactor.
    """
    q = Fraction(q)
    if q <= 0:
        raise ValueError(f"expected a positive rational, got {q}")
    num, den = q.numerator, q.denominator
    s, d = _square_split(num * den)
    return ExactLength(Fraction(s, den), d)


def exact_length_from_squared(squared) -> ExactLength:
    """ExactLength whose square equals the given positive rational."""
    return normalize_sqrt(squared)


@dataclass
class SpanBasis:
    """Basis of the rational span of a length set, with coefficients.

    ``basis[j]`` is sqrt(d_j) for the distinct radicands d_j in increasing
    order; ``coefficients[i][j]`` is the rational coefficient of length i on
    basis element j.  Every row reconstructs its length exactly.
    """

    basis: list[ExactLength]
    coefficients: list[list[Fraction]]


def q_basis(lengths: list[ExactLength]) -> SpanBasis:
    """Basis {sqrt(d)} over the distinct radicands, plus the coefficient matrix."""
    if not lengths:
        raise ValueError("empty length list")
    radicands = sorted({ell.d for ell in lengths})
    col = {d: j for j, d in enumerate(radicands)}
    basis = [ExactLength(Fraction(1), d) for d in radicands]
    coefficients = []
    for ell in lengths:
        row = [Fraction(0)] * len(radicands)
        row[col[ell.d]] = ell.r
        coefficients.append(row)
    return SpanBasis(basis, coefficients)


INDEPENDENT_EXACT = "independent_exact"
INDEPENDENT_UP_TO_HEIGHT = "independent_up_to_height"
DEPENDENT = "dependent"


@dataclass
class IndependenceVerdict:
    """Outcome of a rational-independence test.

    ``kind`` is one of the module constants; a dependent verdict carries an
    explicit nonzero integer relation, a heuristic one carries the height
    bound it was checked up to.
    """

    kind: str
    relation: tuple[int, ...] | None = None
    height: int | None = None

    def __post_init__(self):
        if self.kind == DEPENDENT:
            assert self.relation is not None and any(self.relation)
        if self.kind == INDEPENDENT_UP_TO_HEIGHT:
            assert self.height is not None


def _clear_to_integers(values: list[Fraction]) -> tuple[int, ...]:
    lcm = 1
    for v in values:
        lcm = lcm * v.denominator // math.gcd(lcm, v.denominator)
    return tuple(int(v * lcm) for v in values)


def is_q_independent(lengths: list[ExactLength]) -> IndependenceVerdict:
    """Exact independence test: independent iff all radicands are distinct.

    Two lengths sharing a radicand d, r1*sqrt(d) and r2*sqrt(d), satisfy the
    integer relation (r2, -r1) after clearing denominators; the first such
    pair is returned as the witness.
    """
    seen: dict[int, int] = {}
    for i, ell in enumerate(lengths):
        if ell.d in seen:
            j = i
            i0 = seen[ell.d]
            coeffs = [Fraction(0)] * len(lengths)
            coeffs[i0] = lengths[j].r
            coeffs[j] = -lengths[i0].r
            relation = _clear_to_integers(coeffs)
            g = math.gcd(*(abs(c) for c in relation if c)) if any(relation) else 1
            relation = tuple(c // g for c in relation)
            return IndependenceVerdict(DEPENDENT, relation=relation)
        seen[ell.d] = i
    return IndependenceVerdict(INDEPENDENT_EXACT)


def relation_residual_exact(lengths: list[ExactLength], relation) -> bool:
    """True iff the relation annihilates the lengths exactly.

    The combination sum(c_i * r_i * sqrt(d_i)) vanishes iff the rational
    coefficient of every radicand group vanishes.
    """
    groups: dict[int, Fraction] = {}
    for c, ell in zip(relation, lengths):
        groups[ell.d] = groups.get(ell.d, Fraction(0)) + c * ell.r
    return all(v == 0 for v in groups.values())


def _lll_reduce(basis: list[list[int]], delta: Fraction = Fraction(3, 4)) -> list[list[int]]:
    """Lattice basis reduction with exact rational Gram-Schmidt.

    Classic formulation with incremental mu/B bookkeeping; rows must be
    linearly independent (always true for the identity-plus-column lattices
    built by :func:`find_integer_relation`).
    """
    b = [[Fraction(x) for x in row] for row in basis]
    n = len(b)
    if n == 1:
        return [[int(x) for x in row] for row in b]

    def dot(u, v):
        return sum(x * y for x, y in zip(u, v))

    mu = [[Fraction(0)] * n for _ in range(n)]
    B = [Fraction(0)] * n
    bstar: list[list[Fraction]] = [[] for _ in range(n)]
    bstar[0] = b[0][:]
    B[0] = dot(bstar[0], bstar[0])

    def size_reduce(k, l):
        if abs(mu[k][l]) > Fraction(1, 2):
            q = round(mu[k][l])
            b[k] = [x - q * y for x, y in zip(b[k], b[l])]
            mu[k][l] -= q
            for i in range(l):
                mu[k][i] -= q * mu[l][i]

    def swap(k, kmax):
        b[k], b[k - 1] = b[k - 1], b[k]
        for j in range(k - 1):
            mu[k][j], mu[k - 1][j] = mu[k - 1][j], mu[k][j]
        m = mu[k][k - 1]
        Bk = B[k] + m * m * B[k - 1]
        mu[k][k - 1] = m * B[k - 1] / Bk
        bs = bstar[k - 1][:]
        bstar[k - 1] = [x + m * y for x, y in zip(bstar[k], bs)]
        bstar[k] = [
            -mu[k][k - 1] * x + (B[k] / Bk) * y for x, y in zip(bstar[k], bs)
        ]
        B[k] = B[k - 1] * B[k] / Bk
        B[k - 1] = Bk
        for i in range(k + 1, kmax + 1):
            t = mu[i][k]
            mu[i][k] = mu[i][k - 1] - m * t
            mu[i][k - 1] = t + mu[k][k - 1] * mu[i][k]

    k = 1
    kmax = 0
    while k < n:
        if k > kmax:
            kmax = k
            bstar[k] = b[k][:]
            for j in range(k):
                mu[k][j] = dot(b[k], bstar[j]) / B[j]
                bstar[k] = [x - mu[k][j] * y for x, y in zip(bstar[k], bstar[j])]
            B[k] = dot(bstar[k], bstar[k])
        size_reduce(k, k - 1)
        while B[k] < (delta - mu[k][k - 1] ** 2) * B[k - 1]:
            swap(k, kmax)
            k = max(k - 1, 1)
            size_reduce(k, k - 1)
        for l in range(k - 2, -1, -1):
            size_reduce(k, l)
        k += 1
    return [[int(x) for x in row] for row in b]


def find_integer_relation(
    values,
    height: int = 10**6,
    scale: int = 10**12,
    precision: int = 50,
) -> tuple[int, ...] | None:
    """Search for a small integer relation among numerically given reals.

    Builds the integer lattice whose rows are the identity extended by a
    column of the values scaled by ``scale`` and rounded, reduces it, and
    accepts a short vector c when |sum(c_i * v_i)| <= n*height/scale with
    every |c_i| <= height.  Candidates are then re-verified at ``precision``
    decimal digits against a much tighter residual bound, which guards
    against near-relations that only look small at the lattice scale.

    Values may be floats, ints, Fractions, strings or mpmath numbers; pass
    strings (or mpf) to retain more than double precision.  Returns the
    relation with the first nonzero entry positive, or None when no relation
    of height at most ``height`` was found (this is not an independence
    proof).
    """
    n = len(values)
    if n == 0:
        raise ValueError("empty value list")
    if n > 64:
        raise ValueError("at most 64 values are supported")
    with mp.workdps(max(precision, 30)):
        vals = [_to_mpf(v) for v in values]
        if not all(mp.isfinite(v) for v in vals):
            raise ValueError("values must be finite")
        rows = [
            [1 if j == i else 0 for j in range(n)] + [int(mp.nint(vals[i] * scale))]
            for i in range(n)
        ]
        reduced = _lll_reduce(rows)
        max_abs = max(abs(v) for v in vals) or mp.mpf(1)
        loose = mp.mpf(n) * height / scale
        candidates = sorted(reduced, key=lambda row: sum(x * x for x in row))
        for row in candidates:
            c = row[:n]
            if not any(c) or max(abs(x) for x in c) > height:
                continue
            residual = abs(mp.fsum(ci * vi for ci, vi in zip(c, vals)))
            if residual > loose:
                continue
            one_norm = sum(abs(x) for x in c)
            tight = mp.mpf(10) ** (-(precision // 2)) * max(1, one_norm * max_abs)
            if residual <= tight:
                g = math.gcd(*(abs(x) for x in c if x))
                c = [x // g for x in c]
                lead = next(x for x in c if x)
                if lead < 0:
                    c = [-x for x in c]
                return tuple(c)
    return None


def _to_mpf(v) -> mp.mpf:
    if isinstance(v, Fraction):
        return mp.mpf(v.numerator) / v.denominator
    if isinstance(v, ExactLength):
        return v.value_mp()
    return mp.mpf(v)
