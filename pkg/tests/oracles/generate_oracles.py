"""Reference values computed with mpmath at 30 digits, independently of the package.

Run ``python3 tests/oracles/generate_oracles.py`` to regenerate; the numbers
printed here are frozen into the test modules.  Lengths are in units of
c/omega_p and frequencies in units of omega_p.
"""

from __future__ import annotations

import mpmath as mp

mp.mp.dps = 30


def plasmon(q):
    q = mp.mpf(q)
    return mp.sqrt(mp.mpf(1) / 2 + q**2 - mp.sqrt(mp.mpf(1) / 4 + q**4))


def _roots_unimodular(f, lo, hi, n=4000, log_head=False):
    """Zeros of a real function on (lo, hi) from sign changes, skipping poles.

    ``log_head`` adds log-spaced points next to ``lo`` for roots crowding it.
    """
    xs = [lo + (hi - lo) * mp.mpf(i) / n for i in range(1, n)]
    if log_head:
        head = [lo * (xs[0] / lo) ** (mp.mpf(i) / 400) for i in range(400)]
        xs = head + xs
    roots = []
    prev_x, prev = xs[0], f(xs[0])
    for x in xs[1:]:
        v = f(x)
        if prev * v < 0:
            try:
                r = mp.findroot(f, (prev_x, x), solver="illinois", verify=False)
            except (ValueError, ZeroDivisionError):
                r = None
            # sign changes across poles of r are not roots
            if r is not None and prev_x <= r <= x and abs(f(r)) < mp.mpf("1e-20"):
                roots.append(r)
        prev_x, prev = x, v
    return roots


def slab_surface_roots(L, q):
    """Metal slab (plasma model) in vacuum, TM: roots with both layers evanescent.

    r e^{-2 a kappa2} = +-1 with r = (eps2 kappa1 - kappa2)/(eps2 kappa1 + kappa2).
    """
    a, q = mp.mpf(L) / 2, mp.mpf(q)

    def g(W, sign):
        e2 = 1 - 1 / W**2
        k1 = mp.sqrt(q**2 - W**2)
        k2 = mp.sqrt(q**2 - e2 * W**2)
        r = (e2 * k1 - k2) / (e2 * k1 + k2)
        return r * mp.exp(-2 * a * k2) - sign

    out = []
    for sign in (1, -1):
        out += _roots_unimodular(lambda W: g(W, sign), mp.mpf("1e-6"), q * (1 - mp.mpf("1e-12")))
    return sorted(out)


def gap_roots(L, q, pol):
    """Vacuum gap in plasma: all discrete roots below the plasma continuum edge."""
    a, q = mp.mpf(L) / 2, mp.mpf(q)
    edge = mp.sqrt(1 + q**2)

    def parts(W):
        e1 = 1 - 1 / W**2
        kap1 = mp.sqrt(q**2 + 1 - W**2)
        w1 = e1 if pol == "TM" else 1
        return kap1, w1

    def below(W, sign):
        kap1, w1 = parts(W)
        kap2 = mp.sqrt(q**2 - W**2)
        r = (kap1 - w1 * kap2) / (kap1 + w1 * kap2)
        return r * mp.exp(-2 * a * kap2) - sign

    def above(t):
        W = edge - t**2
        kap1, w1 = parts(W)
        k2 = mp.sqrt(W**2 - q**2)
        r = (1j * kap1 - w1 * k2) / (1j * kap1 + w1 * k2)
        return mp.im(r * mp.exp(2j * a * k2))

    roots = []
    for sign in (1, -1):
        roots += _roots_unimodular(lambda W: below(W, sign), mp.mpf("1e-6"), q * (1 - mp.mpf("1e-15")))
    t_hi = mp.sqrt(edge - q) * (1 - mp.mpf("1e-15"))
    roots += [edge - t**2 for t in _roots_unimodular(above, mp.mpf("1e-12"), t_hi, n=20000, log_head=True)]
    return sorted(roots)


def per_k_lifshitz_plasma_gap(L, q):
    """-(1/pi) int_0^inf kappa2 X/(1-X) dzeta, TM, in units hbar omega_p^2/c."""
    a, q = mp.mpf(L) / 2, mp.mpf(q)

    def f(z):
        e1 = 1 + 1 / z**2
        kap1 = mp.sqrt(q**2 + e1 * z**2)
        kap2 = mp.sqrt(q**2 + z**2)
        r = (e1 * kap2 - kap1) / (e1 * kap2 + kap1)
        X = r**2 * mp.exp(-4 * a * kap2)
        return kap2 * X / (1 - X)

    return -mp.quad(f, [0, 1, 10, mp.inf]) / mp.pi


def gold_force(d_m, omega_p=1.38e16):
    """Casimir pressure (Pa) between plasma-model half-spaces, by nested mpmath quadrature."""
    mp.mp.dps = 20
    c = mp.mpf(299792458)
    hbar = mp.mpf("6.62607015e-34") / (2 * mp.pi)
    wp = mp.mpf(omega_p)
    a = mp.mpf(d_m) / 2

    def inner(z):
        e1 = 1 + wp**2 / z**2

        def g(k):
            kap1 = mp.sqrt(k**2 + e1 * z**2 / c**2)
            kap2 = mp.sqrt(k**2 + z**2 / c**2)
            tot = 0
            for w in (e1, 1):
                r = (w * kap2 - kap1) / (w * kap2 + kap1)
                X = r**2 * mp.exp(-4 * a * kap2)
                tot += k * kap2 * X / (1 - X)
            return tot

        return mp.quad(g, [0, 1 / (4 * a), 4 / a, mp.inf])

    zs = c / (2 * a)
    val = mp.quad(inner, [0, zs / 4, zs, 4 * zs, mp.inf])
    mp.mp.dps = 30
    return -hbar / (2 * mp.pi**2) * val


if __name__ == "__main__":
    import sys

    if sys.argv[1:] == ["gold"]:
        print("gold force 100nm", mp.nstr(gold_force(100e-9), 15))
        raise SystemExit
    for q in ("0.1", "0.5", "1", "2", "10"):
        print("plasmon", q, mp.nstr(plasmon(q), 20))
    print("slab L=0.63 q=1", [mp.nstr(x, 20) for x in slab_surface_roots("0.63", 1)])
    print("slab L=0.63 q=0.3", [mp.nstr(x, 20) for x in slab_surface_roots("0.63", "0.3")])
    for pol in ("TM", "TE"):
        print("gap L=6.3 q=0.05", pol, [mp.nstr(x, 20) for x in gap_roots("6.3", "0.05", pol)])
        print("gap L=0.63 q=0.5", pol, [mp.nstr(x, 20) for x in gap_roots("0.63", "0.5", pol)])
    print("per-k TM L=6.3 q=0.5", mp.nstr(per_k_lifshitz_plasma_gap("6.3", "0.5"), 20))
    print("gold force 100nm", mp.nstr(gold_force(100e-9), 15))
