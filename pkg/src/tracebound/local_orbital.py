"""Non-archimedean orbital integrals: root counts, local bounds and zeta factors.

Throughout, ``q`` is the residue-field size of the place, ``e`` the order of the
level ideal at the place and ``f = v(m^2 - 4u)`` the order of the discriminant of
``t^2 - m t + u``.
"""

from __future__ import annotations

import math

import numpy as np

BRUTE_FORCE_LIMIT = 10**7
LIFT_CAP = 10**6


def discriminant_valuation(p: int, m: int, u: int) -> float:
    """v_p(m^2 - 4u), or infinity when the discriminant vanishes."""
    D = m * m - 4 * u
    if D == 0:
        return math.inf
    k = 0
    while D % p == 0:
        D //= p
        k += 1
    return k


def _roots_mod_p(p: int, m: int, u: int) -> np.ndarray:
    t = np.arange(p, dtype=np.int64)
    return t[(t * t - (m % p) * t + (u % p)) % p == 0]


def _count_exhaustive(p: int, alpha: int, m: int, u: int) -> int:
    mod = p**alpha
    mm, uu = m % mod, u % mod
    base = np.arange(p ** (alpha - 1), dtype=np.int64) * p
    count = 0
    # every root mod p^alpha reduces to a root mod p
    for t0 in _roots_mod_p(p, m, u):
        t = base + t0
        val = (t * t % mod - mm * t % mod + uu) % mod
        count += int(np.count_nonzero(val == 0))
    return count


def _count_lifted(p: int, alpha: int, m: int, u: int) -> int:
    roots = [int(t) for t in _roots_mod_p(p, m, u)]
    mod = p
    for _ in range(1, alpha):
        nxt = mod * p
        new = []
        for t in roots:
            for j in range(p):
                s = t + j * mod
                if (s * s - m * s + u) % nxt == 0:
                    new.append(s)
        if len(new) > LIFT_CAP:
            raise OverflowError(f"more than {LIFT_CAP} roots while lifting to {p}^{alpha}")
        roots, mod = new, nxt
    return len(roots)


def count_congruence_roots(p: int, alpha: int, m: int, u: int) -> int:
    """#{t mod p^alpha : t^2 - m t + u = 0 mod p^alpha} for prime p.

    Exhaustive over lifts of residues for p^alpha <= 10^7; above that, a root
    count that has stabilized (unit discriminant) is reused, otherwise roots
    are lifted one power of p at a time.
    """
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    if alpha == 0:
        return 1
    m, u = int(m), int(u)
    if p**alpha <= BRUTE_FORCE_LIMIT:
        return _count_exhaustive(p, alpha, m, u)
    if discriminant_valuation(p, m, u) == 0:
        return int(_roots_mod_p(p, m, u).size)
    return _count_lifted(p, alpha, m, u)


def root_count_bound(q: int, f: float) -> float:
    """Universal bound #S_alpha <= 4 q^(f/2)."""
    return 4.0 * q ** (f / 2)


def elliptic_local_bound(q: int, e: int, f: float, N: int) -> float:
    """(q - 1 + N) / q when e = f = 0, else 4 q^(-e + f/2)."""
    if math.isinf(f):
        raise ValueError("zero discriminant: the class is not elliptic")
    if e == 0 and f == 0:
        return (q - 1 + N) / q
    return 4.0 * q ** (-e + f / 2)


def elliptic_local_series(p: int, e: int, m: int, u: int) -> float:
    """sum_{alpha >= max(e,1)} #S_alpha p^(-alpha-1)(p-1), plus (p-1)/p when e = 0.

    The counts are constant for alpha > f, so the tail is summed in closed form.
    """
    f = discriminant_valuation(p, m, u)
    if math.isinf(f):
        raise ValueError("zero discriminant: the class is not elliptic")
    q = p
    start = max(e, 1)
    last = max(start, int(f) + 1)
    total = (q - 1) / q if e == 0 else 0.0
    count = 0
    for alpha in range(start, last + 1):
        count = count_congruence_roots(p, alpha, m, u)
        total += count * q ** (-alpha - 1) * (q - 1)
    return total + count * q ** (-last - 1)


def elliptic_local(q: int, e: int, m: int, u: int, mode: str = "bound",
                   f: float | None = None, N: int | None = None) -> float:
    """Local elliptic orbital factor at a place of residue size q.

    ``mode="exact_series"`` needs a degree-one place (q prime) with integral
    ``m, u``.  For other places supply ``f`` and ``N`` and use the bound.
    """
    if mode == "exact_series":
        if int(u) % q == 0:
            raise ValueError("u must be a unit at the place")
        return elliptic_local_series(q, e, m, u)
    if mode != "bound":
        raise ValueError(f"unknown mode {mode!r}")
    if f is None:
        if int(u) % q == 0:
            raise ValueError("u must be a unit at the place")
        f = discriminant_valuation(q, m, u)
    if N is None:
        N = int(_roots_mod_p(q, m, u).size)
    return elliptic_local_bound(q, e, f, N)


def elliptic_unit_volume_bound(q: int, f: float, N: int) -> float:
    """Bound for the volume of the local unit group of the quadratic extension.

    q^(3 + 2 floor((f+1)/2)) / ((q-1)^2 (q+1)) for f > 0, q (q + 1 - N)/(q^2 - 1) for f = 0.
    """
    if math.isinf(f):
        raise ValueError("zero discriminant: the class is not elliptic")
    if f > 0:
        k = int(f + 1) // 2
        return q ** (3 + 2 * k) / ((q - 1) ** 2 * (q + 1))
    return q * (q + 1 - N) / (q * q - 1)


def hyperbolic_local_bound(q: int, e: int, g: int, weighted: bool = False,
                           stated_symbol: bool = False, f: int | None = None) -> float:
    """Bound q^(g - e/2), or 2 g log q q^(g - e/2) for the weighted integral.

    With ``stated_symbol=True`` the weighted factor uses the supplied ``f``
    in place of ``g``.
    """
    if g < 0 or e < 0:
        raise ValueError("orders must be nonnegative")
    base = q ** (g - e / 2)
    if not weighted:
        return base
    k = g
    if stated_symbol:
        if f is None:
            raise ValueError("stated_symbol needs f")
        k = f
    return 2 * k * math.log(q) * base


def hyperbolic_local_sharp(q: int, e: int, g: int) -> float:
    """q^g (q^(1 - e + floor(e/2)) + q^(-floor(e/2))) / (q + 1), never above q^(g - e/2)."""
    k = e // 2
    return q**g * (q ** (1 - e + k) + q ** (-k)) / (q + 1)


def parabolic_g(q: int, e: int, s):
    """Local factor g_v(s) of the parabolic zeta integral at level order e.

    (q^(1-es) + (q-1) q^((2-e)s-1) (q^((2s-1)k) - 1)/(q^(2s-1) - 1) + q^-k) / (q+1), k = floor(e/2);
    the quotient is summed as a geometric series, which covers 2s = 1.
    """
    s = np.asarray(s, dtype=complex if np.iscomplexobj(s) else float)
    k = e // 2
    geo = sum(q ** ((2 * s - 1) * j) for j in range(k)) if k else 0.0 * s
    val = (q ** (1 - e * s) + (q - 1) * q ** ((2 - e) * s - 1) * geo + q ** (-k)) / (q + 1)
    return val[()] if np.ndim(val) == 0 else val


def parabolic_g_prime(q: int, e: int, s):
    """d/ds g_v(s), differentiated term by term."""
    s = np.asarray(s, dtype=complex if np.iscomplexobj(s) else float)
    lq = math.log(q)
    k = e // 2
    out = -e * lq * q ** (1 - e * s)
    for j in range(k):
        out = out + (q - 1) * lq * ((2 - e) + 2 * j) * q ** ((2 - e) * s - 1 + (2 * s - 1) * j)
    out = out / (q + 1)
    return out[()] if np.ndim(out) == 0 else out


def finite_intertwining(q: int, s):
    """(1 - q^(-2s-1)) / (1 - q^(-2s)), the unramified intertwining factor."""
    s = np.asarray(s)
    den = 1 - q ** (-2.0 * s)
    if np.any(den == 0):
        raise ZeroDivisionError("intertwining factor has a pole at q^(-2s) = 1")
    val = (1 - q ** (-2.0 * s - 1)) / den
    return val[()] if np.ndim(val) == 0 else val
