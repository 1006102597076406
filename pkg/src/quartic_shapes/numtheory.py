"""Arithmetic helpers: factorisation, multiplicative functions, the
sum-of-two-squares counts, the functions f_{Sigma,U} and their summatory
F_{Sigma,U}, carefree local densities and the Euler-product constants.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import mpmath
import numpy as np

# -- sieve ------------------------------------------------------------------

_SIEVE_LOCK = threading.Lock()
_SPF = np.zeros(2, dtype=np.int32)  # smallest prime factor table
_PRIMES = np.zeros(0, dtype=np.int64)


def _build_spf(limit: int) -> np.ndarray:
    spf = np.zeros(limit + 1, dtype=np.int32)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    idx = np.nonzero(spf == 0)[0]
    spf[idx] = idx
    spf[:2] = 0
    return spf


def ensure_sieve(limit: int) -> None:
    """Make the smallest-prime-factor table cover [0, limit]."""
    global _SPF, _PRIMES
    if limit < len(_SPF):
        return
    with _SIEVE_LOCK:
        if limit < len(_SPF):
            return
        size = max(limit, 2 * len(_SPF), 1 << 16)
        spf = _build_spf(size)
        primes = np.nonzero(spf == np.arange(size + 1))[0]
        _SPF, _PRIMES = spf, primes[primes >= 2]


def primes_up_to(n: int) -> np.ndarray:
    ensure_sieve(n)
    return _PRIMES[: np.searchsorted(_PRIMES, n, side="right")]


@dataclass(frozen=True)
class FactoredInt:
    value: int
    factors: tuple  # ((p, e), ...) with p increasing

    @property
    def sign(self) -> int:
        return 1 if self.value > 0 else -1

    def omega(self) -> int:
        return len(self.factors)

    def is_squarefree(self) -> bool:
        return all(e == 1 for _, e in self.factors)

    def mobius(self) -> int:
        if not self.is_squarefree():
            return 0
        return -1 if len(self.factors) % 2 else 1

    def primes(self) -> tuple:
        return tuple(p for p, _ in self.factors)


def factorize(n: int) -> FactoredInt:
    if n == 0:
        raise ValueError("cannot factor 0")
    m = abs(n)
    factors = []
    if m < 1 << 22:
        ensure_sieve(m)
        while m > 1:
            p = int(_SPF[m])
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            factors.append((p, e))
    else:
        for p in primes_up_to(math.isqrt(m)):
            p = int(p)
            if p * p > m:
                break
            if m % p == 0:
                e = 0
                while m % p == 0:
                    m //= p
                    e += 1
                factors.append((p, e))
        if m > 1:
            factors.append((m, 1))
    return FactoredInt(n, tuple(factors))


def is_squarefree(n: int) -> bool:
    return n != 0 and factorize(n).is_squarefree()


def mobius(n: int) -> int:
    return factorize(n).mobius()


def omega(n: int) -> int:
    return factorize(n).omega()


def squarefree_mask(n: int) -> np.ndarray:
    """Boolean array s with s[k] true iff k is squarefree, for 0 <= k <= n."""
    mask = np.ones(n + 1, dtype=bool)
    mask[0] = False
    for p in primes_up_to(math.isqrt(n)):
        mask[int(p) * int(p) :: int(p) * int(p)] = False
    return mask


def gcd_star(a: int, b: int) -> int:
    """gcd that reports -gcd when both arguments are negative."""
    if a == 0 or b == 0:
        raise ValueError("gcd_star needs nonzero arguments")
    g = math.gcd(a, b)
    return -g if a < 0 and b < 0 else g


def star_coprime(a: int, b: int) -> bool:
    return gcd_star(a, b) == 1


# -- characters -------------------------------------------------------------


def chi4(n: int) -> int:
    """Nontrivial character mod 4 (kernel {1, 5} mod 8)."""
    if n % 2 == 0:
        return 0
    return 1 if n % 4 == 1 else -1


def chi5(n: int) -> int:
    """Character mod 8 with kernel {1, 5}; it agrees with chi4."""
    return chi4(n)


def chi3(n: int) -> int:
    """Character mod 8 with kernel {1, 3}."""
    if n % 2 == 0:
        return 0
    return 1 if n % 8 in (1, 3) else -1


def chi7(n: int) -> int:
    """Character mod 8 with kernel {1, 7}."""
    if n % 2 == 0:
        return 0
    return 1 if n % 8 in (1, 7) else -1


# -- sums of two squares ----------------------------------------------------


def two_square_reps(d: int) -> list:
    """Ordered pairs (B, C) with B, C > 0 and B^2 + C^2 = d."""
    out = []
    for b in range(1, math.isqrt(d) + 1):
        c2 = d - b * b
        c = math.isqrt(c2)
        if c > 0 and c * c == c2:
            out.append((b, c))
    return out


def q_count(d: int) -> int:
    """Representations d = B^2 + C^2 up to order and signs."""
    out = 0
    for b in range(0, math.isqrt(d) + 1):
        c2 = d - b * b
        c = math.isqrt(c2)
        if c * c == c2 and b <= c:
            out += 1
    return out


def q_count_formula(d: int) -> Fraction:
    """2^(omega-1) for odd d, 2^(omega-2) for even d; valid for d > 2."""
    w = omega(d)
    return Fraction(2) ** (w - 1 if d % 2 else w - 2)


# -- f_{Sigma,U} and F_{Sigma,U} --------------------------------------------

ALL_U = frozenset({1, 5})


@dataclass(frozen=True)
class SigmaSet:
    """Sigma_0 (primes 2 and 3 mod 4) together with finitely many extra primes."""

    extra_primes: frozenset = field(default_factory=frozenset)

    @classmethod
    def for_a(cls, a: int) -> "SigmaSet":
        return cls(frozenset(factorize(a).primes()) if abs(a) > 1 else frozenset())

    def __contains__(self, p: int) -> bool:
        return p % 4 != 1 or p in self.extra_primes


SIGMA0 = SigmaSet()


def f_sigma(n: int, sigma: SigmaSet = SIGMA0, u: Iterable = ALL_U) -> int:
    if n < 1:
        raise ValueError("n must be positive")
    if n % 8 not in frozenset(u):
        return 0
    fac = factorize(n)
    if not fac.is_squarefree() or any(p in sigma for p in fac.primes()):
        return 0
    return 2 ** fac.omega()


def f_table(y: int, sigma: SigmaSet = SIGMA0, u: Iterable = ALL_U) -> np.ndarray:
    """Array t with t[n] = f_{Sigma,U}(n) for 0 <= n <= y (t[0] = 0)."""
    y = int(y)
    if y < 1:
        return np.zeros(max(y + 1, 1), dtype=np.int64)
    good = squarefree_mask(y)
    w = np.zeros(y + 1, dtype=np.int64)
    for p in primes_up_to(y):
        p = int(p)
        if p in sigma:
            good[p::p] = False
        else:
            w[p::p] += 1
    n = np.arange(y + 1)
    good &= np.isin(n % 8, sorted(frozenset(u)))
    return np.where(good, np.left_shift(1, w), 0)


def big_f(y: int, sigma: SigmaSet = SIGMA0, u: Iterable = ALL_U) -> int:
    return int(f_table(y, sigma, u).sum())


def h_sigma0(p: int, k: int) -> int:
    """Local coefficients of h with f_{Sigma_0} = 1 * chi5 * h at p^k.

    At p = 2 the local factor is 1 - x, so h(2) = -1 and h(2^k) = 0 for k > 1.
    """
    if k == 0:
        return 1
    if p == 2:
        return -1 if k == 1 else 0
    if p % 4 == 1:
        return {2: -3, 3: 2}.get(k, 0)
    return -1 if k == 2 else 0


# -- carefree densities -----------------------------------------------------


def carefree_local_count(p: int) -> int:
    """Triples mod p^2 that fail to be carefree at p."""
    return 6 * p**4 - 8 * p**3 + 3 * p**2


def carefree_density(p: int) -> Fraction:
    return 1 - Fraction(carefree_local_count(p), p**6)


# -- Euler-product constants ------------------------------------------------


@dataclass(frozen=True)
class EulerConstant:
    kind: str
    prefactor: Fraction  # exact rational part
    product: float  # accelerated infinite product (includes pi/Catalan factors)
    bound: float  # rigorous bound on |value - true value| from the tail
    truncation: int

    @property
    def value(self) -> float:
        return float(self.prefactor) * self.product


# |log of the accelerated local factor| <= K / p^3 once p > 100
_TAIL_K = {"carefree": 10.0, "sigma": 4.0}
_MIN_TRUNCATION = 101


def _carefree_ratio(p: int) -> float:
    u = 1.0 / p
    return math.log1p(-6 * u * u + 8 * u**3 - 3 * u**4) - 6 * math.log1p(-u * u)


def sigma_local_factor(p: int, sigma: SigmaSet) -> Fraction:
    """H_p(1) = (1 + f(p)/p)(1 - 1/p)(1 - chi5(p)/p)."""
    f = 0 if p in sigma else 2
    return (1 + Fraction(f, p)) * (1 - Fraction(1, p)) * (1 - Fraction(chi5(p), p))


def _sigma_ratio(p: int, sigma: SigmaSet) -> float:
    u = 1.0 / p
    f = 0 if p in sigma else 2
    log_h = math.log1p(f * u) + math.log1p(-u) + math.log1p(-chi5(p) * u)
    return log_h - 2 * math.log1p(-u * u) - math.log1p(-chi4(p) * u * u)


def _pick_truncation(k: float, tol: float, floor: int) -> int:
    # tail of sum_{p > P} K/p^3 is below K/(2 P^2); the value bound adds a
    # factor exp(t) - 1 <= 2t for t < 1
    p = max(floor, _MIN_TRUNCATION)
    while k / p**2 > tol / 4:
        p *= 2
    return p


def _tail_bound(k: float, p: int) -> float:
    t = k / (2 * p * p)
    return math.expm1(t)


def euler_constant(kind: str, a: int | None = None, tol: float = 1e-8, truncation: int | None = None) -> EulerConstant:
    """C_wild, C_tame or C_{Sigma_A} with a rigorous truncation bound.

    The carefree product over odd p is compared against (1 - p^-2)^6, whose
    product over odd primes is (8/pi^2)^6.  C_{Sigma} is computed as
    (pi/4) prod_p H_p(1), compared against (1 - p^-2)^2 (1 - chi4(p) p^-2),
    using prod over odd p of (1 - chi4(p) p^-2) = 1/G with G Catalan's
    constant.
    """
    if kind in ("wild", "tame"):
        k = _TAIL_K["carefree"]
        p_max = truncation or _pick_truncation(k, tol, _MIN_TRUNCATION)
        logs = [_carefree_ratio(int(p)) for p in primes_up_to(p_max)[1:]]
        prod = (8 / math.pi**2) ** 6 * math.exp(math.fsum(logs))
        pref = Fraction(5, 48) if kind == "wild" else Fraction(1, 6)
        bound = float(pref) * prod * _tail_bound(k, p_max)
        return EulerConstant(kind, pref, prod, bound, p_max)
    if kind == "sigma":
        if a is None or a % 2 == 0:
            raise ValueError("sigma constant needs an odd A")
        sigma = SigmaSet.for_a(a)
        k = _TAIL_K["sigma"]
        floor = max([_MIN_TRUNCATION, *sigma.extra_primes])
        p_max = truncation or _pick_truncation(k, tol, floor)
        if p_max < floor:
            raise ValueError("truncation must cover every prime dividing A")
        logs = [_sigma_ratio(int(p), sigma) for p in primes_up_to(p_max)[1:]]
        catalan = float(mpmath.catalan)
        prod = (math.pi / 4) * 0.5 * (8 / math.pi**2) ** 2 / catalan * math.exp(math.fsum(logs))
        bound = prod * _tail_bound(k, p_max)
        return EulerConstant(f"sigma({a})", Fraction(1), prod, bound, p_max)
    raise ValueError(f"unknown constant {kind!r}")
