"""Golden verdicts for the power-weight conditions on a 50-point lattice.

Each inequality is evaluated on exact rationals, straight from its printed
form, so the Rust checkers are compared against something that shares no
code or rounding with them.

    python3 scripts/golden_power_weights.py > crates/verify/tests/data/power_weight_golden.json
"""

import json
import random
from fractions import Fraction as F


def conj(p):
    return p / (p - 1)


def sufficient_rho(n, p, q, a, r):
    pp = conj(p)
    return (
        1 < p <= q
        and 0 < a
        and 0 < r
        and a * pp < 2 * (n + 1)
        and q * r < 4 * n + 1
        and -a / (2 * (n + 1)) + 1 / pp + r / (4 * n + 1) - 1 / q == 0
    )


def sufficient_sigma(n, p, q, a, r, s):
    pp = conj(p)
    return (
        1 < p <= q
        and 0 < a
        and 0 < s
        and 0 < r
        and r * (2 * n + 1) < 2 * n * s
        and a * pp < 2 * (n + 1)
        and q * r < 2 * n
        and -a / (2 * (n + 1)) + 1 / pp + r / (2 * n) - 1 / q == 0
    )


def necessary_rho(n, p, q, a, r):
    pp = conj(p)
    mid = -(n + 1) / q - a / 2 + (n + 1) / pp
    return 1 < p and 1 < q and 0 < a and 0 < r and a * pp < 2 * (1 + n) and -r < mid < r / 2


def necessary_sigma(n, p, q, a, r, s):
    pp = conj(p)
    if not (1 < p and 1 < q and 0 < a and 0 < s and 0 < r and a * pp < 2 * (1 + n) and q * r < 2 * n):
        return False
    base = -a / 2 + (n + 1) / pp + (2 * n - q * r) / (2 * q)
    if q * s < 2 * n + 1:
        return base + (-2 * n + q * s - 1) / q >= 0
    if q * s == 2 * n + 1:
        return base > 0
    return base >= 0


def point(n, p, q, a, r, s=None):
    if s is None:
        suf, nec = sufficient_rho(n, p, q, a, r), necessary_rho(n, p, q, a, r)
    else:
        suf, nec = sufficient_sigma(n, p, q, a, r, s), necessary_sigma(n, p, q, a, r, s)
    rec = {"n": n}
    for k, v in (("p", p), ("q", q), ("alpha", a), ("rho", r), ("sigma", s)):
        rec[k] = None if v is None else float(v)
        rec[k + "_exact"] = None if v is None else str(v)
    rec["sufficient"] = suf
    rec["necessary"] = nec
    return rec


def main():
    rng = random.Random(20240611)
    ps = [F(5, 4), F(3, 2), F(2), F(3)]
    qs = [F(3, 2), F(2), F(3), F(4)]
    alphas = [F(1, 4), F(1, 2), F(1), F(3, 2), F(5, 2)]
    pts = [point(1, F(2), F(2), F(1), F(5, 4))]
    # ρ solving the balance, so the strict inequalities decide
    while len(pts) < 20:
        n, p, q, a = rng.randint(1, 3), rng.choice(ps), rng.choice(qs), rng.choice(alphas)
        r = (4 * n + 1) * (a / (2 * (n + 1)) - 1 / conj(p) + 1 / q)
        if r == 0:
            continue
        pts.append(point(n, p, q, a, r))
    # off-balance and out-of-range points
    while len(pts) < 30:
        n, p, q, a = rng.randint(1, 3), rng.choice(ps), rng.choice(qs), rng.choice(alphas + [F(0), F(-1, 2)])
        r = rng.choice([F(1, 4), F(1, 2), F(1), F(5, 4), F(2), F(-1)])
        pts.append(point(n, p, q, a, r))
    # the σ pair: balanced ρ, σ below, at and above the (2n+1)/q edge
    while len(pts) < 42:
        n, p, q, a = rng.randint(1, 3), rng.choice(ps), rng.choice(qs), rng.choice(alphas)
        r = 2 * n * (a / (2 * (n + 1)) - 1 / conj(p) + 1 / q)
        if r == 0:
            continue
        edge = F(2 * n + 1) / q
        s = rng.choice([edge / 2, edge, 2 * edge, edge + F(1, 3)])
        pts.append(point(n, p, q, a, r, s))
    while len(pts) < 50:
        n, p, q, a = rng.randint(1, 3), rng.choice(ps), rng.choice(qs), rng.choice(alphas)
        r = rng.choice([F(1, 4), F(1, 2), F(1)])
        s = rng.choice([F(1, 2), F(1), F(5, 3), F(3)])
        pts.append(point(n, p, q, a, r, s))
    json.dump({"points": pts}, __import__("sys").stdout, indent=1)
    print()


if __name__ == "__main__":
    main()
