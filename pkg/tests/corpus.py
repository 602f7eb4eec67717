"""Deterministic curve corpora shared by the test modules."""

import random
from functools import lru_cache

from sympy import factorint

from paramodular_level.local import ReductionType, reduction_type
from paramodular_level.weierstrass import Curve, SingularCurve, invariants, is_minimal_at

# Hand-checked data for the named fixtures.  Valuations were worked out by
# hand from the a-invariants; (i, k) are the per-prime exponents of N and M
# read off the level table row named in ``row``.
FIXTURES = {
    "11a1": dict(
        ainvs=(0, -1, 1, -10, -20),
        disc=-161051,  # -11^5
        c4=496,
        c6=20008,
        primes={11: dict(v_disc=5, v_c4=0, row="multiplicative", i=1, k=3, eta="-1")},
        N=11,
        M=1331,
    ),
    "37a1": dict(
        ainvs=(0, 0, 1, -1, 0),
        disc=37,
        c4=48,
        c6=-216,
        primes={37: dict(v_disc=1, v_c4=0, row="multiplicative", i=1, k=3, eta="+1")},
        N=37,
        M=50653,
    ),
    "243b": dict(
        ainvs=(0, 0, 1, 0, 2),
        disc=-2187,  # -3^7
        c4=0,
        c6=-1944,  # -2^3 3^5
        primes={3: dict(v_disc=7, v_c4=None, row="S6''", i=5, k=7, eta="-w(E/Q_3)")},
        N=243,
        M=2187,
    ),
}


def nonsingular(ainvs):
    try:
        invariants(Curve(*ainvs))
    except SingularCurve:
        return False
    return True


def random_curves(n, bound, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        a = tuple(rng.randint(-bound, bound) for _ in range(5))
        if nonsingular(a):
            out.append(Curve(*a))
    return out


def globally_minimal(curve):
    inv = invariants(curve)
    return all(e < 12 or is_minimal_at(curve, p) for p, e in factorint(abs(inv.disc)).items())


@lru_cache(maxsize=None)
def global_corpus():
    """Minimal curves: random small models plus families rich in additive
    reduction at 3 and at primes >= 5."""
    curves = [Curve(*f["ainvs"]) for f in FIXTURES.values()]
    curves.append(Curve(1, 1, 1, -10, -10))  # conductor 15, v(disc) = 4 at both primes
    curves += random_curves(300, 12, seed=20240607)
    for a4 in range(-30, 31, 5):
        for a6 in range(-40, 41, 7):
            curves.append(Curve(0, 0, 0, a4 * 3, a6 * 9))
            curves.append(Curve(0, 0, 0, a4 * 25, a6 * 125))
            curves.append(Curve(0, 0, 1, a4 * 9, a6 * 3))
            curves.append(Curve(0, 0, 0, a4 * 49, a6 * 7))
    seen, out = set(), []
    for c in curves:
        if c.ainvs in seen or not nonsingular(c.ainvs) or not globally_minimal(c):
            continue
        seen.add(c.ainvs)
        out.append(c)
    return tuple(out)


def additive_pot_good_at_3(curve):
    inv = invariants(curve)
    return (
        reduction_type(inv, 3) is ReductionType.ADDITIVE_POTENTIALLY_GOOD
        and is_minimal_at(curve, 3)
    )


@lru_cache(maxsize=None)
def q3_corpus(size=1200):
    """Globally minimal curves with additive, potentially good reduction at 3.

    Translates and twists of y^2 + y = x^3 + B and y^2 = x^3 + A x + B, walked
    in a fixed order so the corpus is reproducible."""
    out = []
    seen = set()
    for scale in (1, 3, 9, 27):
        for a in range(-20, 21):
            for b in range(-20, 21):
                for ainvs in (
                    (0, 0, 0, 9 * a, 9 * b),
                    (0, 0, 1, 9 * a, b),
                    (0, 0, 0, a * scale, b),
                    (0, 0, 1, a * scale, b),
                    (0, 0, 0, a, b * scale),
                    (0, a % 3 - 1, 0, a * scale, b * 3),
                ):
                    if ainvs in seen or not nonsingular(ainvs):
                        continue
                    seen.add(ainvs)
                    c = Curve(*ainvs)
                    if additive_pot_good_at_3(c) and globally_minimal(c):
                        out.append(c)
                        if len(out) >= size:
                            return tuple(out)
    return tuple(out)
