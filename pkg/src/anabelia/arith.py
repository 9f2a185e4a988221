"""Integer helpers: primality, factoring, Moebius function."""

from __future__ import annotations

import math
import random
from functools import lru_cache

TRIAL_LIMIT = 10**6

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24, probabilistic above."""
    if n < 2:
        return False
    for sp in _SMALL_PRIMES:
        if n % sp == 0:
            return n == sp
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
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


def _pollard_rho(n: int, rng: random.Random) -> int:
    if n % 2 == 0:
        return 2
    while True:
        c = rng.randrange(1, n)
        y = rng.randrange(0, n)
        m, g, r, q = 128, 1, 1, 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


@lru_cache(maxsize=4096)
def _factor_tuple(n: int) -> tuple:
    out: dict[int, int] = {}
    m = n
    d = 2
    while d * d <= m and d <= TRIAL_LIMIT:
        while m % d == 0:
            out[d] = out.get(d, 0) + 1
            m //= d
        d += 1 if d == 2 else 2
    if m > 1:
        stack = [m]
        rng = random.Random(m)
        while stack:
            k = stack.pop()
            if k == 1:
                continue
            if is_prime(k):
                out[k] = out.get(k, 0) + 1
                continue
            f = _pollard_rho(k, rng)
            stack.extend((f, k // f))
    return tuple(sorted(out.items()))


def factorint(n: int) -> dict[int, int]:
    """Prime factorization of n >= 1 as {prime: exponent}."""
    if n < 1:
        raise ValueError("factorint needs n >= 1")
    return dict(_factor_tuple(n))


def prime_factors(n: int) -> list[int]:
    return sorted(factorint(n))


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorint(n).items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def mobius(n: int) -> int:
    f = factorint(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def valuation(n: int, r: int) -> int:
    """Exponent of the prime r in the nonzero integer n."""
    if n == 0:
        raise ValueError("valuation of 0")
    k = 0
    while n % r == 0:
        n //= r
        k += 1
    return k


def prime_power_log(n: int, p: int):
    """Return s with p**s == n, or None."""
    s = 0
    while n > 1 and n % p == 0:
        n //= p
        s += 1
    return s if n == 1 else None


