"""Black-box multiplicative embeddings of unit groups, and fixtures producing them.

An oracle bundles iota on units, the place bijection phi, the multipliers
e_x and the residue maps iota_x.  Everything is defined at every level of a
shared constant tower, so callers may pass functions and places over any
level field.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field as dc_field
from typing import Callable

from ..errors import MalformedTau
from ..field import FiniteField, gf
from ..function_field import (ConstantTower, ExceptionalSet, Mobius, Place,
                              RationalFunction, Residue, evaluate,
                              places_of_degree, principal_divisor)
from ..poly import Polynomial


@dataclass
class EmbeddingOracle:
    tower: ConstantTower
    E_X: ExceptionalSet
    E_Y: ExceptionalSet
    iota: Callable
    phi: Callable
    e: Callable
    iota_x: Callable
    kind: str = "custom"
    params: dict = dc_field(default_factory=dict)

    @property
    def field(self) -> FiniteField:
        return self.tower.base


def _zero_place(f: RationalFunction) -> Place:
    (P,) = principal_divisor(f).zeros().support
    return P


class Tau:
    """f -> f^sigma(M(t)) with sigma = p^a-Frobenius on constants, at every tower level."""

    def __init__(self, tower: ConstantTower, a: int, M: Mobius):
        F = tower.base
        if M.field is not F:
            raise MalformedTau("Moebius map must be defined over the base field")
        if not 0 <= a < F.d:
            raise MalformedTau(f"Frobenius exponent {a} outside [0, {F.d})")
        self.tower, self.a, self.M = tower, a, M
        self._lifted = {}

    def _M_at(self, K):
        M = self._lifted.get(K.q)
        if M is None:
            i = self.tower.index(K)
            M = self.M.lift(K, self.tower.embed(0, i)) if i else self.M
            self._lifted[K.q] = M
        return M

    def constants(self, K: FiniteField, code: int) -> int:
        return K.frob(code, self.a)

    def __call__(self, f: RationalFunction) -> RationalFunction:
        K = f.field
        if self.a:
            f = f.map_coeffs(lambda c: K.frob(c, self.a), K)
        return self._M_at(K).apply(f)

    def place(self, x: Place) -> Place:
        return _zero_place(self(x.uniformizer()))

    def residue(self, x: Place, v: Residue) -> Residue:
        h = RationalFunction(v.poly)
        return evaluate(self(h), self.place(x))


def oracle_from_embedding(tower: ConstantTower, a: int, M: Mobius, s: int,
                          E_X: ExceptionalSet) -> EmbeddingOracle:
    """Oracle for iota(h) = tau(h)^(p^s), tau(h) = h^sigma(M(t))."""
    if s < 0:
        raise MalformedTau("s must be >= 0")
    tau = Tau(tower, a, M)
    F = tower.base
    pk = F.p**s
    E_Y = ExceptionalSet([tau.place(x) for x in E_X], field=F)

    def iota(f):
        if f.is_zero():
            raise ValueError("iota is defined on units only")
        return tau(f).frobenius_power(s)

    def iota_x(x, v):
        return tau.residue(x, v) ** pk

    params = {"kind": "tau", "p": F.p, "d": F.d, "ell": tower.ell, "a": a,
              "mobius": [M.a, M.b, M.c, M.d], "s": s, "E_X": [_place_codes(P) for P in E_X]}
    return EmbeddingOracle(tower, E_X, E_Y, iota, tau.place, lambda x: pk, iota_x,
                           kind="tau", params=params)


# --- adversarial fixtures ------------------------------------------------------------

def _bad_exponents(N: int, p: int) -> list:
    """k in [2, N) coprime to N with k not congruent to any power of p mod N."""
    if N <= 2:
        return []
    ppow = set()
    x = 1 % N
    while x not in ppow:
        ppow.add(x)
        x = x * p % N
    return [k for k in range(2, N) if math.gcd(k, N) == 1 and k % N not in ppow]


def _place_seed(seed, P: Place):
    return f"{seed}|{P.field.q}|{_place_codes(P)}"


def adversarial_oracle(kind: str, tower: ConstantTower, a: int, M: Mobius, s: int,
                       E_X: ExceptionalSet, seed: int = 0, k: int | None = None) -> EmbeddingOracle:
    """Oracle breaking exactly one hypothesis on top of a genuine one."""
    base = oracle_from_embedding(tower, a, M, s, E_X)
    F = tower.base
    p = F.p
    params = dict(base.params, kind=kind, seed=seed)
    if kind == "value-twist":
        if not _bad_exponents(F.q - 1, p):
            raise ValueError(f"no nontrivial value twist exists over {F}")

        def iota_x(x, v):
            w = base.iota_x(x, v)
            N = w.size - 1
            choices = _bad_exponents(N, p)
            if not choices:
                return w
            kx = random.Random(_place_seed(seed, x)).choice(choices)
            return w**kx

        return EmbeddingOracle(tower, E_X, base.E_Y, base.iota, base.phi, base.e, iota_x,
                               kind=kind, params=params)
    if kind == "order-scramble":
        rng = random.Random(seed)
        cands = [P for d in (1, 2) for P in places_of_degree(F, d) if P not in E_X]
        target = rng.choice(cands)
        pk = p**s
        params["target"] = _place_codes(target)

        def e(x):
            return pk + 1 if x == target else pk

        return EmbeddingOracle(tower, E_X, base.E_Y, base.iota, base.phi, e, base.iota_x,
                               kind=kind, params=params)
    if kind == "nonadditive-constants":
        valid = _bad_exponents(F.q - 1, p)
        if k is None:
            if not valid:
                raise ValueError(f"no non-Frobenius automorphism of the units of {F}")
            k = valid[0]
        elif k not in valid and k % (F.q - 1) not in valid:
            raise ValueError(f"k = {k} must be coprime to {F.q - 1} and not a power of {p}")
        params["k"] = k

        def iota(f):
            if f.is_zero():
                raise ValueError("iota is defined on units only")
            K = f.field
            c = f.num.c[-1]
            f0 = f * RationalFunction.const(K, K.inv(c))
            return base.iota(f0) * RationalFunction.const(K, K.pow(c, k))

        return EmbeddingOracle(tower, E_X, base.E_Y, iota, base.phi, base.e, base.iota_x,
                               kind=kind, params=params)
    raise ValueError(f"unknown adversarial kind {kind!r}")


ADVERSARIAL_KINDS = ("value-twist", "order-scramble", "nonadditive-constants")


# --- random fixtures and replay ----------------------------------------------------------

def random_mobius(F: FiniteField, rng: random.Random) -> Mobius:
    q = F.q
    while True:
        a, b, c, d = (rng.randrange(q) for _ in range(4))
        if F.sub(F.mul(a, d), F.mul(b, c)) != 0:
            return Mobius(F, a, b, c, d)


def random_exceptional_set(F: FiniteField, rng: random.Random, max_size: int = 3,
                           max_degree: int = 2) -> ExceptionalSet:
    pool = [P for d in range(1, max_degree + 1) for P in places_of_degree(F, d)]
    n = rng.randint(0, max_size)
    return ExceptionalSet(rng.sample(pool, n), field=F)


def random_oracle(q: int, s: int, seed: int, ell: int = 2, max_E: int = 3):
    """A seeded genuine oracle over F_q together with its generating data."""
    p, d = _prime_power(q)
    F = gf(p, d)
    rng = random.Random(seed)
    tower = ConstantTower(F, ell if ell != p else 3)
    M = random_mobius(F, rng)
    a = rng.randrange(d)
    E_X = random_exceptional_set(F, rng, max_E)
    return oracle_from_embedding(tower, a, M, s, E_X)


def _prime_power(q: int):
    from ..arith import factorint

    f = factorint(q)
    if len(f) != 1:
        raise ValueError(f"{q} is not a prime power")
    (p, d), = f.items()
    return p, d


def _place_codes(P: Place):
    return "inf" if P.poly is None else list(P.poly.c)


def _place_from_codes(F: FiniteField, codes) -> Place:
    if codes == "inf":
        return Place.infinite(F)
    return Place(F, Polynomial(F, [int(c) for c in codes]))


def oracle_from_params(params: dict) -> EmbeddingOracle:
    """Rebuild an oracle from its JSON parameters (bit-exact replay)."""
    F = gf(int(params["p"]), int(params["d"]))
    tower = ConstantTower(F, int(params.get("ell", 2)))
    M = Mobius(F, *[int(c) for c in params["mobius"]])
    E_X = ExceptionalSet([_place_from_codes(F, c) for c in params["E_X"]], field=F)
    kind = params["kind"]
    a, s = int(params["a"]), int(params["s"])
    if kind == "tau":
        return oracle_from_embedding(tower, a, M, s, E_X)
    return adversarial_oracle(kind, tower, a, M, s, E_X, seed=int(params.get("seed", 0)),
                              k=None if params.get("k") is None else int(params["k"]))
