"""Reconstruct a field embedding K_X -> K_Y from a multiplicative oracle.

Pipeline: spot checks, coordinate normalization (infinity out of E_X),
constant additivity through the one-pole argument, the ring map on O_E via
unit-sum decompositions, and assembly of the field embedding.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field as dc_field

from ..errors import (AdditivityViolation, DecompositionMismatch, OracleInconsistent,
                      TowerExhausted, ZeroSearchFailed)
from ..field import FieldElement, FiniteField
from ..function_field import (POLE, Divisor, ExceptionalSet, Mobius, Place,
                              RationalFunction, Residue, default_alpha, evaluate,
                              function_with_divisor, mobius_change, ord_at,
                              places_of_degree, principal_divisor, random_unit,
                              single_pole_function, unit_sum_decompose, zeros_of)
from ..serial import jsonable
from .oracle import EmbeddingOracle

DEFAULT_LEVEL_CAP = 4
SPOT_PAIRS = 8
AGREEMENT_SAMPLES = 12


@dataclass(frozen=True)
class FieldEmbedding:
    """f -> f^kappa(T): constants c -> c^(p^kappa), t -> T; e = p^s."""

    field: FiniteField
    kappa: int
    T: RationalFunction
    e: int

    def constant(self, code: int) -> int:
        return self.field.frob(code, self.kappa)

    def apply(self, f: RationalFunction) -> RationalFunction:
        F = self.field
        if self.kappa:
            f = f.map_coeffs(lambda c: F.frob(c, self.kappa), F)
        return f.compose(self.T)

    __call__ = apply

    def to_dict(self):
        return {"field": repr(self.field), "kappa": self.kappa, "T": self.T, "e": self.e}


@dataclass
class RecoveryTranscript:
    normalization: list = dc_field(default_factory=list)
    x0: object = None
    f: object = None
    levels: list = dc_field(default_factory=list)
    buckets: dict = dc_field(default_factory=dict)
    alphas_tried: list = dc_field(default_factory=list)
    bucket_bound: int = 0
    collision: tuple = ()
    certified_level: int = 0
    c: object = None
    g: object = None
    certificate: list = dc_field(default_factory=list)
    decompositions: list = dc_field(default_factory=list)
    checks: list = dc_field(default_factory=list)

    def to_dict(self):
        return jsonable(self.__dict__)


def _witness(**kw):
    return {k: jsonable(v) for k, v in kw.items()}


# --- helpers -----------------------------------------------------------------------

def _anchor(F, E, avoid=()):
    for P in places_of_degree(F, 1):
        if P not in E and P not in avoid:
            return P
    raise ZeroSearchFailed("no rational place outside E")


def order_probe(F, E, x):
    """A unit u of O_E^x with div(u) = x - deg(x) * anchor."""
    a = _anchor(F, E, avoid=(x,))
    return function_with_divisor(Divisor({x: 1, a: -x.degree}), F), a


def _iota0(oracle, c: FieldElement) -> FieldElement:
    """iota on constants, extended by 0 -> 0."""
    if c.code == 0:
        return c
    r = oracle.iota(RationalFunction.const(c.field, c))
    if not r.is_constant():
        raise OracleInconsistent("iota of a constant is not constant", _witness(c=c, image=r))
    return r.constant_value()


def _first_zero_off(f: RationalFunction, E: ExceptionalSet, skip=()):
    for P in zeros_of(f):
        if P not in E and P not in skip:
            return P
    return None


def _permuted_codes(Q: int, seed, level: int):
    if seed is None:
        return range(Q)
    rng = random.Random(f"{seed}:{level}")
    a = rng.randrange(1, Q)
    while math.gcd(a, Q) != 1:
        a = rng.randrange(1, Q)
    b = rng.randrange(Q)
    return [(a * c + b) % Q for c in range(Q)]


def effective_divisor_count(degrees, total: int) -> int:
    """Number of effective divisors of degree exactly `total` on places of the given degrees."""
    ways = [1] + [0] * total
    for dd in degrees:
        for v in range(dd, total + 1):
            ways[v] += ways[v - dd]
    return ways[total]


def bucket_bound(E_Y: ExceptionalSet, y0_degree: int, ne: int) -> int:
    degs = [P.degree for P in E_Y]
    return sum(effective_divisor_count(degs, m * y0_degree) for m in range(ne + 1))


# --- spot checks -------------------------------------------------------------------------

def spot_check(oracle: EmbeddingOracle, seed: int = 0, transcript: RecoveryTranscript | None = None):
    """Multiplicativity, order preservation, constant additivity, value preservation."""
    F = oracle.field
    E = oracle.E_X
    rng = random.Random(f"spot:{seed}")
    iota = oracle.iota
    for _ in range(SPOT_PAIRS):
        f, g = random_unit(F, E, rng), random_unit(F, E, rng)
        if iota(f * g) != iota(f) * iota(g):
            raise OracleInconsistent("iota is not multiplicative", _witness(f=f, g=g))
    for d in (1, 2):
        for x in places_of_degree(F, d):
            if x in E:
                continue
            u, a = order_probe(F, E, x)
            iu = iota(u)
            y = oracle.phi(x)
            got = ord_at(iu, y)
            if got != oracle.e(x):
                raise OracleInconsistent("order not preserved",
                                         _witness(f=u, x=x, phi_x=y, ord=got, e_x=oracle.e(x)))
    audit_constant_additivity(oracle)
    prim = F.primitive_element()
    for x in places_of_degree(F, 1):
        if x in E:
            continue
        y = oracle.phi(x)
        want = oracle.iota_x(x, Residue(x, prim))
        got = evaluate(iota(RationalFunction.const(F, prim)), y)
        if got != want:
            raise OracleInconsistent("value not preserved",
                                     _witness(f=prim, x=x, iota_x=want, value=got))
    if transcript is not None:
        transcript.checks.append("spot checks passed")


def audit_constant_additivity(oracle: EmbeddingOracle, field: FiniteField | None = None) -> list:
    """Literal table iota(eta + 1) = iota(eta) + 1 over the given level."""
    K = field or oracle.field
    rows = []
    for code in range(K.q):
        eta = FieldElement(K, code)
        lhs = _iota0(oracle, eta + 1)
        rhs = _iota0(oracle, eta) + 1
        if lhs != rhs:
            raise AdditivityViolation("iota(eta + 1) != iota(eta) + 1",
                                      _witness(eta=eta, iota_eta_plus_1=lhs, iota_eta_plus_iota_1=rhs))
        rows.append((code, lhs.code))
    return rows


# --- the one-pole argument -----------------------------------------------------------------

@dataclass
class Collision:
    alpha: FieldElement
    beta: FieldElement
    divisor: Divisor
    level: int
    bucket: list
    admissible: list


def _admissible_alphas(oracle, fK, E_Xi, K, seed, level):
    bad = set()
    for x in E_Xi:
        v = evaluate(fK, x)
        if v is not POLE and len(v.c) <= 1:
            bad.add(K.neg(v.c[0]) if v.c else 0)
    return [c for c in _permuted_codes(K.q, seed, level) if c != 0 and c not in bad]


def _difference_divisor(oracle, fK, iota_f, alpha, E_Yi, y0, ne):
    diff = oracle.iota(fK + alpha) - iota_f
    if diff.is_zero():
        raise OracleInconsistent("iota(f + alpha) = iota(f) contradicts injectivity",
                                 _witness(f=fK, alpha=alpha))
    D = principal_divisor(diff)
    for P, n in D.items():
        if P == y0:
            if n < -ne:
                raise OracleInconsistent("pole order above n * e_x0",
                                         _witness(f=fK, alpha=alpha, divisor=D, bound=ne))
        elif P not in E_Yi or n < 0:
            raise OracleInconsistent("divisor support outside E_Y and phi(x0)",
                                     _witness(f=fK, alpha=alpha, divisor=D, place=P))
    return D


def find_collision_pair(oracle: EmbeddingOracle, f: RationalFunction, x0: Place,
                        level_cap: int = DEFAULT_LEVEL_CAP, seed=None, start_level: int = 0,
                        transcript: RecoveryTranscript | None = None) -> Collision:
    """Two admissible alpha != beta with equal div(iota(f + .) - iota(f))."""
    T = oracle.tower
    n = -ord_at(f, x0)
    for i in range(start_level, level_cap + 1):
        K = T.level(i)
        fK = T.lift_function(f, i)
        E_Xi = T.lift_exceptional(oracle.E_X, i)
        E_Yi = T.lift_exceptional(oracle.E_Y, i)
        x0i = T.lift_place(x0, i)[0]
        y0 = oracle.phi(x0i)
        ne = n * oracle.e(x0i)
        bound = bucket_bound(E_Yi, y0.degree, ne)
        iota_f = oracle.iota(fK)
        adm = _admissible_alphas(oracle, fK, E_Xi, K, seed, i)
        buckets: dict = {}
        if transcript is not None:
            transcript.levels.append(i)
            transcript.bucket_bound = bound
        for code in adm:
            alpha = FieldElement(K, code)
            D = _difference_divisor(oracle, fK, iota_f, alpha, E_Yi, y0, ne)
            if transcript is not None:
                transcript.alphas_tried.append((i, code))
            if D in buckets:
                first = buckets[D][0]
                buckets[D].append(alpha)
                if transcript is not None:
                    transcript.buckets = {repr(k): [a.code for a in v] for k, v in buckets.items()}
                    transcript.collision = (first.code, alpha.code)
                return Collision(first, alpha, D, i, buckets[D], adm)
            buckets[D] = [alpha]
        if len(adm) > bound:
            raise OracleInconsistent("pigeonhole contradiction: more admissible alpha than buckets "
                                     "yet no collision", _witness(level=i, admissible=len(adm), bound=bound))
    raise TowerExhausted(f"no collision up to tower level {level_cap}")


def _g(alpha, beta, fK):
    return (fK + alpha) * beta / (fK * (alpha - beta))


def recover_constant_additivity(oracle: EmbeddingOracle, f: RationalFunction, x0: Place,
                                col: Collision, transcript: RecoveryTranscript | None = None) -> list:
    """Certificate rows (eta, iota(eta), iota(eta+1), alpha used, x3) over the collision level."""
    T = oracle.tower
    i = col.level
    K = T.level(i)
    fK = T.lift_function(f, i)
    E_Xi = T.lift_exceptional(oracle.E_X, i)
    iota = oracle.iota
    alpha, beta = col.alpha, col.beta
    iota_f = iota(fK)

    # c from the value at phi(x1), x1 a zero of f
    x1 = _first_zero_off(fK, E_Xi)
    if x1 is None:
        raise ZeroSearchFailed("f has no zero outside E_X")
    ratio = (iota(fK + beta) - iota_f) / (iota(fK + alpha) - iota_f)
    if not ratio.is_constant():
        raise OracleInconsistent("equal divisors but non-constant ratio",
                                 _witness(alpha=alpha, beta=beta, ratio=ratio))
    y1 = oracle.phi(x1)
    c = evaluate(ratio, y1)
    cross = oracle.iota_x(x1, Residue(x1, beta)) / oracle.iota_x(x1, Residue(x1, alpha))
    if c != cross:
        raise OracleInconsistent("c disagrees with iota_x1(beta)/iota_x1(alpha)",
                                 _witness(alpha=alpha, beta=beta, x1=x1, c=c, iota_x=cross))
    x1b = _first_zero_off(fK, E_Xi, skip=(x1,))
    if x1b is not None and evaluate(ratio, oracle.phi(x1b)) != c:
        raise OracleInconsistent("c differs at a second zero of f", _witness(x1=x1, x1b=x1b))

    good_identity = {}

    def identity_holds(a):
        if a.code not in good_identity:
            g = _g(a, beta, fK)
            d = iota(g + 1) - iota(g)
            x2 = _first_zero_off(g, E_Xi)
            if x2 is None:
                raise ZeroSearchFailed("g has no zero outside E_X")
            val = evaluate(d, oracle.phi(x2))
            if val != 1 or d != 1:
                raise AdditivityViolation("iota(g + 1) != iota(g) + 1",
                                          _witness(alpha=a, beta=beta, g=g, x2=x2, value=val))
            good_identity[a.code] = g
        return good_identity[a.code]

    g = identity_holds(alpha)
    if transcript is not None:
        transcript.c = c
        transcript.g = g
        transcript.certified_level = i

    # alternatives for alpha: the rest of the collision bucket first, then the level
    bucket_codes = [a.code for a in col.bucket if a != beta]
    others = bucket_codes + [a for a in col.admissible if a not in bucket_codes and a != beta.code]
    E_Yi = T.lift_exceptional(oracle.E_Y, i)
    x0i = T.lift_place(x0, i)[0]
    y0 = oracle.phi(x0i)
    ne = -ord_at(f, x0) * oracle.e(x0i)
    same_div = {a.code: True for a in col.bucket}

    def in_bucket(code):
        if code not in same_div:
            D = _difference_divisor(oracle, fK, iota_f, FieldElement(K, code), E_Yi, y0, ne)
            same_div[code] = D == col.divisor
        return same_div[code]

    rows = []
    one = K.one
    for code in range(K.q):
        eta = FieldElement(K, code)
        if code == 0:
            if _iota0(oracle, one) != one:
                raise AdditivityViolation("iota(1) != 1", _witness(eta=eta))
            rows.append((0, 0, 1, None, None))
            continue
        for acode in others:
            if not in_bucket(acode):
                continue
            ga = identity_holds(FieldElement(K, acode))
            x3 = _first_zero_off(ga - eta, E_Xi)
            if x3 is not None:
                break
        else:
            raise ZeroSearchFailed(f"no alpha gives a zero of g - eta off E_X for eta = {eta}")
        y3 = oracle.phi(x3)
        ie, ie1 = _iota0(oracle, eta), _iota0(oracle, eta + 1)
        v_g, v_g1 = evaluate(iota(ga), y3), evaluate(iota(ga + 1), y3)
        if v_g != ie or v_g1 != ie1 or ie1 != ie + 1:
            raise AdditivityViolation("iota(eta + 1) != iota(eta) + 1",
                                      _witness(eta=eta, alpha=acode, x3=x3, iota_eta=ie,
                                               iota_eta_plus_1=ie1, g_value=v_g, g1_value=v_g1))
        rows.append((code, ie.code, ie1.code, acode, x3))
    if transcript is not None:
        transcript.certificate = rows
    return rows


# --- ring homomorphism -------------------------------------------------------------------

class RingHom:
    """iota_R(f) = iota(g) + iota(h) for the canonical decomposition f = g + h."""

    def __init__(self, oracle: EmbeddingOracle, transcript: RecoveryTranscript | None = None):
        if oracle.E_X.has_infinity():
            raise ValueError("normalize so that infinity is outside E_X first")
        self.oracle = oracle
        self.E = oracle.E_X
        self.alpha = default_alpha(oracle.field)
        self.transcript = transcript

    def decompositions(self, f):
        F = self.oracle.field
        g, h = unit_sum_decompose(f, self.E, self.alpha)
        t = RationalFunction.t(F)
        bump = RationalFunction(self.E.modulus(F))
        for k in (1, 2, 3):
            g2, h2 = g + t**k * bump, h - t**k * bump
            if g2 and h2:
                return (g, h), (g2, h2)
        raise AssertionError("no second decomposition")

    def __call__(self, f: RationalFunction, check: bool = True) -> RationalFunction:
        if f.is_zero():
            return f
        (g, h), (g2, h2) = self.decompositions(f)
        iota = self.oracle.iota
        out = iota(g) + iota(h)
        if check:
            alt = iota(g2) + iota(h2)
            if alt != out:
                raise DecompositionMismatch("two decompositions give different images",
                                            _witness(f=f, g=g, h=h, g2=g2, h2=h2, first=out, second=alt))
            if self.transcript is not None:
                eps = {repr(x): evaluate(g, x) for x in self.E}
                delta = {repr(x): evaluate(h, x) for x in self.E}
                self.transcript.decompositions.append(
                    {"f": f, "g": g, "h": h, "epsilon": eps, "delta": delta, "g2": g2, "h2": h2})
        return out


def recover_ring_hom(oracle: EmbeddingOracle, samples: int = AGREEMENT_SAMPLES, seed: int = 0,
                     transcript: RecoveryTranscript | None = None) -> RingHom:
    """Build iota_R and check it on samples: agreement with iota on units,
    independence of the decomposition, injectivity."""
    R = RingHom(oracle, transcript)
    F = oracle.field
    rng = random.Random(f"ring:{seed}")
    for _ in range(samples):
        u = random_unit(F, oracle.E_X, rng)
        if R(u) != oracle.iota(u):
            raise OracleInconsistent("iota_R differs from iota on a unit", _witness(f=u))
        v = RationalFunction(_random_poly(F, rng, 3))
        if v and R(v).is_zero():
            raise OracleInconsistent("iota_R kills a nonzero function", _witness(f=v))
    return R


def _random_poly(F, rng, deg):
    from ..poly import Polynomial

    return Polynomial(F, [rng.randrange(F.q) for _ in range(deg + 1)])


# --- normalization ------------------------------------------------------------------------

def conjugate_oracle(oracle: EmbeddingOracle, s: Mobius, s_inv: Mobius) -> EmbeddingOracle:
    """Oracle in the coordinate t' with t = s(t'): iota'(f') = iota(f' o s^-1)."""
    T = oracle.tower

    def lift(m, K):
        i = T.index(K)
        return m.lift(K, T.embed(0, i)) if i else m

    def back(x):
        return lift(s_inv, x.field).pullback_place(x)

    E_X = ExceptionalSet([s.pullback_place(x) for x in oracle.E_X], field=oracle.field)

    def iota(f):
        return oracle.iota(lift(s_inv, f.field).apply(f))

    def iota_x(x, v):
        return oracle.iota_x(back(x), lift(s_inv, x.field).pullback_residue(x, v))

    return EmbeddingOracle(T, E_X, oracle.E_Y, iota, lambda x: oracle.phi(back(x)),
                           lambda x: oracle.e(back(x)), iota_x, kind=oracle.kind,
                           params=dict(oracle.params))


# --- top level -------------------------------------------------------------------------------

def _kappa(oracle: EmbeddingOracle) -> int:
    F = oracle.field
    table = {c: _iota0(oracle, FieldElement(F, c)).code for c in range(F.q)}
    for j in range(F.d):
        if all(F.frob(c, j) == v for c, v in table.items()):
            return j
    raise OracleInconsistent("constant map is not a field automorphism",
                             _witness(table=sorted(table.items())))


def recover_field_embedding(oracle: EmbeddingOracle, level_cap: int = DEFAULT_LEVEL_CAP,
                            seed=None, samples: int = AGREEMENT_SAMPLES):
    """(FieldEmbedding, RecoveryTranscript) for a valid oracle; raises on rejection."""
    tr = RecoveryTranscript()
    F = oracle.field
    spot_check(oracle, 0 if seed is None else seed, tr)
    s, s_inv = mobius_change(oracle.E_X)
    work = oracle
    if not s.is_identity():
        work = conjugate_oracle(oracle, s, s_inv)
        tr.normalization = [s.a, s.b, s.c, s.d]
    E = work.E_X
    x0 = _anchor(F, E)
    f = single_pole_function(x0, 1)
    tr.x0, tr.f = x0, f
    start = 0
    while True:
        col = find_collision_pair(work, f, x0, level_cap, seed, start, tr)
        try:
            recover_constant_additivity(work, f, x0, col, tr)
            break
        except ZeroSearchFailed:
            start = col.level + 1
            if start > level_cap:
                raise TowerExhausted(f"zero search failed up to level {level_cap}")
    R = recover_ring_hom(work, samples, 0 if seed is None else seed, tr)
    Tp = R(RationalFunction.t(F))
    kappa = _kappa(work)
    e = work.e(x0)
    if s.is_identity():
        T = Tp
    else:
        sk = s.map_coeffs(lambda c: F.frob(c, kappa))
        T = sk.as_function().compose(Tp)
    emb = FieldEmbedding(F, kappa, T, e)
    rng = random.Random(f"agree:{seed}")
    for _ in range(samples):
        u = random_unit(F, oracle.E_X, rng)
        if emb(u) != oracle.iota(u):
            raise OracleInconsistent("recovered embedding disagrees with iota", _witness(f=u))
    tr.checks.append("agreement on samples")
    return emb, tr


# --- audit -------------------------------------------------------------------------------------

@dataclass
class VerifyReport:
    passed: bool
    trials: int
    checked: int
    failures: list

    def to_dict(self):
        return jsonable(self.__dict__)


def verify_embedding(emb: FieldEmbedding, oracle: EmbeddingOracle, trials: int = 200,
                     seed: int = 0, max_failures: int = 5) -> VerifyReport:
    """Agreement of emb with iota on random units plus order and value sweeps."""
    F = oracle.field
    E = oracle.E_X
    fails = []
    checked = 0

    def fail(kind, **kw):
        if len(fails) < max_failures:
            fails.append(dict(_witness(**kw), check=kind))

    for c in range(1, F.q):
        checked += 1
        cf = RationalFunction.const(F, c)
        if emb(cf) != oracle.iota(cf):
            fail("constant", c=c)
    places1 = [x for x in places_of_degree(F, 1) if x not in E]
    places2 = [x for x in places_of_degree(F, 2) if x not in E]
    for x in places1 + places2:
        checked += 1
        u, _ = order_probe(F, E, x)
        got = ord_at(emb(u), oracle.phi(x))
        if got != oracle.e(x):
            fail("order", x=x, f=u, ord=got, e_x=oracle.e(x))
    prim = F.primitive_element()
    for x in places1:
        checked += 1
        got = evaluate(emb(RationalFunction.const(F, prim)), oracle.phi(x))
        if got != oracle.iota_x(x, Residue(x, prim)):
            fail("value", x=x, c=prim)
    rng = random.Random(f"verify:{seed}")
    pool = places1 + places2
    for _ in range(trials):
        checked += 1
        u = random_unit(F, E, rng)
        img = emb(u)
        if img != oracle.iota(u):
            fail("agreement", f=u)
            continue
        x = rng.choice(pool)
        if ord_at(u, x) == 0:
            v = evaluate(img, oracle.phi(x))
            if v != oracle.iota_x(x, evaluate(u, x)):
                fail("value", f=u, x=x)
    return VerifyReport(not fails, trials, checked, fails)
