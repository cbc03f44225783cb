"""Number-field data for Q and quadratic fields.

Elements of the ring of integers are integer pairs ``(a, b)`` meaning
``a + b*omega`` with ``omega = (1 + sqrt d) / 2`` when ``d = 1 mod 4`` and
``omega = sqrt d`` otherwise.  Over Q every element has ``b = 0``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Sequence

import numpy as np
from scipy import special
from sympy import factorint, isprime
from sympy.functions.combinatorial.numbers import kronecker_symbol

REAL = "real"
COMPLEX = "complex"


class UnsupportedFieldError(ValueError):
    """The requested field or operation is outside what this module handles."""


class WindowOverflowError(RuntimeError):
    """An enumeration would exceed its configured cap."""


def _squarefree(d: int) -> bool:
    return all(e == 1 for e in factorint(abs(d)).values())


@dataclass(frozen=True)
class NumberField:
    """Q (``d == 1``) or the quadratic field Q(sqrt d) for squarefree ``d != 1``."""

    d: int

    def __post_init__(self):
        if self.d == 0 or (self.d != 1 and not _squarefree(self.d)):
            raise UnsupportedFieldError(f"d = {self.d} is not a squarefree integer != 0")

    @property
    def is_rational(self) -> bool:
        return self.d == 1

    @property
    def degree(self) -> int:
        return 1 if self.is_rational else 2

    @property
    def r1(self) -> int:
        if self.is_rational:
            return 1
        return 2 if self.d > 0 else 0

    @property
    def r2(self) -> int:
        return 1 if self.d < 0 else 0

    @property
    def discriminant(self) -> int:
        if self.is_rational:
            return 1
        return self.d if self.d % 4 == 1 else 4 * self.d

    @property
    def roots_of_unity(self) -> int:
        if self.d == -1:
            return 4
        if self.d == -3:
            return 6
        return 2

    @property
    def omega_trace(self) -> int:
        """Tr(omega): 1 when d = 1 mod 4 else 0 (0 for Q)."""
        return 1 if (not self.is_rational and self.d % 4 == 1) else 0

    @property
    def omega_norm(self) -> int:
        """N(omega)."""
        if self.is_rational:
            return 0
        return (1 - self.d) // 4 if self.d % 4 == 1 else -self.d

    @property
    def name(self) -> str:
        return "Q" if self.is_rational else f"quad:{self.d}"

    @cached_property
    def infinite_places(self) -> tuple[str, ...]:
        return (REAL,) * self.r1 + (COMPLEX,) * self.r2

    def omega_embeddings(self) -> tuple[complex, ...]:
        """omega under each infinite place, in the order of ``infinite_places``."""
        if self.is_rational:
            return (0.0,)
        root = math.sqrt(abs(self.d))
        if self.d % 4 == 1:
            if self.d > 0:
                return ((1 + root) / 2, (1 - root) / 2)
            return (complex(0.5, root / 2),)
        if self.d > 0:
            return (root, -root)
        return (complex(0.0, root),)

    # element arithmetic ---------------------------------------------------

    def mul(self, x, y):
        a, b = x
        c, e = y
        # omega^2 = Tr(omega) omega - N(omega)
        bb = b * e
        return (a * c - bb * self.omega_norm, a * e + b * c + bb * self.omega_trace)

    def add(self, x, y):
        return (x[0] + y[0], x[1] + y[1])

    def sub(self, x, y):
        return (x[0] - y[0], x[1] - y[1])

    def scale(self, k: int, x):
        return (k * x[0], k * x[1])

    def norm(self, x) -> int:
        a, b = x
        return a * a + a * b * self.omega_trace + b * b * self.omega_norm

    def trace(self, x) -> int:
        a, b = x
        return (2 * a + b * self.omega_trace) if not self.is_rational else a

    def embed(self, x, index: int):
        a, b = x
        w = self.omega_embeddings()[index]
        value = a + b * w
        if self.infinite_places[index] == REAL:
            return float(np.real(value))
        return complex(value)

    def embeddings(self, x) -> tuple:
        return tuple(self.embed(x, i) for i in range(len(self.infinite_places)))

    def is_square(self, x) -> bool:
        """Whether x in O_F is a square in F (equivalently in O_F)."""
        if x == (0, 0):
            return True
        if self.is_rational:
            a = x[0]
            return a >= 0 and math.isqrt(a) ** 2 == a
        roots = []
        for i, kind in enumerate(self.infinite_places):
            v = self.embed(x, i)
            if kind == REAL:
                if v < 0:
                    return False
                roots.append((math.sqrt(v), -math.sqrt(v)))
            else:
                s = cmath.sqrt(v)
                roots.append((s, -s))
        ws = self.omega_embeddings()
        if self.r2 == 1:
            w = ws[0]
            for s in roots[0]:
                b = round(s.imag / w.imag)
                a = round(s.real - b * w.real)
                if self.mul((a, b), (a, b)) == tuple(x):
                    return True
            return False
        for s1 in roots[0]:
            for s2 in roots[1]:
                b = round((s1 - s2) / (ws[0] - ws[1]))
                a = round(s1 - b * ws[0])
                if self.mul((a, b), (a, b)) == tuple(x):
                    return True
        return False


def make_field(spec) -> NumberField:
    """Parse ``"Q"``, ``"quad:<d>"`` or an integer d."""
    if isinstance(spec, NumberField):
        return spec
    if isinstance(spec, int):
        return NumberField(spec)
    text = str(spec).strip()
    if text.upper() in ("Q", "RATIONAL"):
        return NumberField(1)
    if text.lower().startswith("quad:"):
        try:
            d = int(text.split(":", 1)[1])
        except ValueError as exc:
            raise UnsupportedFieldError(f"cannot parse field {spec!r}") from exc
        if d == 1:
            raise UnsupportedFieldError("quad:1 is Q; use 'Q'")
        return NumberField(d)
    raise UnsupportedFieldError(f"cannot parse field {spec!r}")


# finite places ------------------------------------------------------------

SPLIT = "split"
INERT = "inert"
RAMIFIED = "ramified"
RATIONAL = "rational"


@dataclass(frozen=True)
class FinitePlace:
    """A prime of O_F above the rational prime p.

    ``root`` is the residue of omega modulo the prime (unused for inert primes).
    """

    p: int
    q: int
    splitting: str
    root: int = 0

    @property
    def log_q(self) -> float:
        return math.log(self.q)


def _omega_roots_mod_p(F: NumberField, p: int) -> list[int]:
    """Roots of the minimal polynomial of omega modulo p."""
    t, n = F.omega_trace, F.omega_norm
    x = np.arange(p, dtype=np.int64)
    vals = (x * x - t * x + n) % p
    return [int(r) for r in x[vals == 0]]


def kronecker(F: NumberField, p: int) -> int:
    return int(kronecker_symbol(F.discriminant, p))


def places_above(F: NumberField, p: int) -> list[FinitePlace]:
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    if F.is_rational:
        return [FinitePlace(p, p, RATIONAL)]
    chi = kronecker(F, p)
    if chi == 1:
        return [FinitePlace(p, p, SPLIT, r) for r in _omega_roots_mod_p(F, p)]
    if chi == -1:
        return [FinitePlace(p, p * p, INERT)]
    (r,) = _omega_roots_mod_p(F, p)
    return [FinitePlace(p, p, RAMIFIED, r)]


def _vp(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0")
    n = abs(n)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def _lift_root(F: NumberField, place: FinitePlace, K: int) -> int:
    """Hensel lift of omega's residue at a split prime to Z/p^K."""
    p = place.p
    t, n = F.omega_trace, F.omega_norm
    r = place.root
    mod = p
    while mod < p**K:
        mod = min(mod * mod, p**K)
        f = r * r - t * r + n
        df = 2 * r - t
        r = (r - f * pow(df, -1, mod)) % mod
    return r


def valuation(F: NumberField, place: FinitePlace, x) -> int:
    """Order of x at the place (x != 0)."""
    x = tuple(int(c) for c in x)
    if x == (0, 0):
        raise ValueError("valuation of 0")
    p = place.p
    if place.splitting == RATIONAL:
        return _vp(x[0], p)
    if place.splitting == INERT:
        vals = [_vp(c, p) for c in x if c != 0]
        return min(vals)
    npow = _vp(F.norm(x), p)
    if place.splitting == RAMIFIED:
        return npow
    K = npow + 1
    r = _lift_root(F, place, K)
    value = (x[0] + x[1] * r) % p**K
    if value == 0:
        return K
    return _vp(value, p)


def residue_root_count(F: NumberField, place: FinitePlace, m, u) -> int:
    """Number of roots of t^2 - m t + u in the residue field of the place."""
    p = place.p
    if place.splitting in (RATIONAL, SPLIT, RAMIFIED):
        r = place.root
        mm = (m[0] + m[1] * r) % p
        uu = (u[0] + u[1] * r) % p
        x = np.arange(p, dtype=np.int64)
        return int(np.count_nonzero((x * x - mm * x + uu) % p == 0))
    # inert: residue field F_{p^2} = F_p[omega]
    disc = F.sub(F.mul(m, m), F.scale(4, u))
    disc = (disc[0] % p, disc[1] % p)
    if p == 2:
        count = 0
        for a in range(2):
            for b in range(2):
                t = (a, b)
                val = F.add(F.sub(F.mul(t, t), F.mul(m, t)), u)
                if val[0] % 2 == 0 and val[1] % 2 == 0:
                    count += 1
        return count
    if disc == (0, 0):
        return 1
    # quadratic character of F_{p^2} via Euler's criterion
    e = (p * p - 1) // 2
    result, base = (1, 0), disc
    while e:
        if e & 1:
            result = F.mul(result, base)
            result = (result[0] % p, result[1] % p)
        base = F.mul(base, base)
        base = (base[0] % p, base[1] % p)
        e >>= 1
    return 2 if result == (1, 0) else 0


@dataclass(frozen=True)
class IdealFactorization:
    """The ideal generated by a positive rational integer, as places with exponents."""

    field: NumberField
    generator: int
    places: tuple[tuple[FinitePlace, int], ...]

    @property
    def norm(self) -> int:
        out = 1
        for v, e in self.places:
            out *= v.q**e
        return out

    @property
    def index(self) -> int:
        """[K_max : K(J)] = prod q^(e-1) (q + 1)."""
        out = 1
        for v, e in self.places:
            out *= v.q ** (e - 1) * (v.q + 1)
        return out

    @property
    def A_J(self) -> float:
        return 1.0 / self.index

    def exponent(self, place: FinitePlace) -> int:
        for v, e in self.places:
            if v == place:
                return e
        return 0


def factor_ideal(F: NumberField, n: int) -> IdealFactorization:
    """Factor the ideal (n) of O_F for a positive rational integer n."""
    n = int(n)
    if n < 1:
        raise ValueError("the ideal generator must be a positive integer")
    places = []
    for p, k in sorted(factorint(n).items()):
        for v in places_above(F, p):
            e = 2 * k if v.splitting == RAMIFIED else k
            places.append((v, e))
    return IdealFactorization(F, n, tuple(places))


def fixed_vector_dim_bound(ideal: IdealFactorization) -> dict:
    """Upper bounds for the dimension of K(J)-fixed vectors in a principal series.

    ``exact_product`` = 2^r1 prod_{v finite} (1 + e_v) and
    ``divisor_bound`` = 2^r1 d(A)^n with d the divisor function.
    """
    F = ideal.field
    exact = 2**F.r1
    for _, e in ideal.places:
        exact *= 1 + e
    ndiv = 1
    for e in factorint(ideal.norm).values():
        ndiv *= e + 1
    return {"exact_product": exact, "divisor_bound": 2**F.r1 * ndiv**F.degree}


# units ---------------------------------------------------------------------

def _cf_convergents(P: int, Q: int, D: int):
    """Convergents of (P + sqrt D) / Q with Q | D - P^2."""
    root = math.isqrt(D)
    p0, p1 = 1, 0
    q0, q1 = 0, 1
    while True:
        # exact floor of (P + sqrt D) / Q for non-square D
        a = (P + root) // Q if Q > 0 else -((P + root) // -Q) - 1
        p0, p1 = a * p0 + p1, p0
        q0, q1 = a * q0 + q1, q0
        yield p0, q0
        P = a * Q - P
        Q = (D - P * P) // Q


@lru_cache(maxsize=None)
def fundamental_unit(F: NumberField) -> tuple[int, int]:
    """The fundamental unit > 1 of a real quadratic field."""
    if F.is_rational or F.d < 0:
        raise UnsupportedFieldError("fundamental units exist only for real quadratic fields")
    if F.d % 4 == 1:
        gen = _cf_convergents(1, 2, F.d)
    else:
        gen = _cf_convergents(0, 1, F.d)
    for _ in range(100000):
        p, q = next(gen)
        # p/q approximates omega, so p - q*conj(omega) is the large conjugate
        x = (p - q * F.omega_trace, q)
        if abs(F.norm(x)) == 1 and F.embed(x, 0) > 1:
            return x
    raise UnsupportedFieldError("fundamental unit search did not terminate")


def regulator(F: NumberField) -> float:
    if F.r1 + F.r2 == 1:
        return 1.0
    return math.log(F.embed(fundamental_unit(F), 0))


def units(F: NumberField) -> list[tuple[int, int]]:
    """Roots of unity of O_F as elements."""
    if F.d == -1:
        return [(1, 0), (-1, 0), (0, 1), (0, -1)]
    if F.d == -3:
        return [(1, 0), (-1, 0), (0, 1), (0, -1), (-1, 1), (1, -1)]
    return [(1, 0), (-1, 0)]


def unit_square_classes(F: NumberField) -> list[tuple[int, int]]:
    """Representatives of O_F^x / (O_F^x)^2."""
    if F.is_rational:
        return [(1, 0), (-1, 0)]
    if F.d == -1:
        return [(1, 0), (0, 1)]
    if F.d < 0:
        return [(1, 0), (-1, 0)]
    eps = fundamental_unit(F)
    return [(1, 0), (-1, 0), eps, (-eps[0], -eps[1])]


def enumerate_hyperbolic_units(F: NumberField, a: Sequence[float], cap: int = 10000):
    """Units alpha != 1 with exp(-4pi/(a_v(1+eps_v))) < |sigma_v(alpha)| < exp(4pi/(a_v(1+eps_v)))."""
    a = list(a)
    if len(a) != len(F.infinite_places):
        raise ValueError("one dilation per infinite place is required")
    limits = [4 * math.pi / (av * (1 + (kind == COMPLEX))) for av, kind in zip(a, F.infinite_places)]
    if F.r1 + F.r2 == 1:
        return [x for x in units(F) if x != (1, 0)]
    eps = fundamental_unit(F)
    log_eps = math.log(F.embed(eps, 0))
    kmax = math.ceil(min(limits) / log_eps)
    if kmax > cap:
        raise WindowOverflowError(f"fundamental-unit power range {kmax} exceeds cap {cap}")
    out = []
    power = (1, 0)
    powers = {0: (1, 0)}
    for k in range(1, kmax + 1):
        power = F.mul(power, eps)
        powers[k] = power
    for k in range(-kmax, kmax + 1):
        if k >= 0:
            x = powers[k]
        else:
            y = powers[-k]
            # inverse of a unit is +- its conjugate
            conj = (y[0] + y[1] * F.omega_trace, -y[1])
            x = conj if F.norm(y) == 1 else (-conj[0], -conj[1])
        for sign in (1, -1):
            alpha = (sign * x[0], sign * x[1])
            if alpha == (1, 0):
                continue
            ok = all(abs(math.log(abs(F.embed(alpha, i)))) < lim for i, lim in enumerate(limits))
            if ok:
                out.append(alpha)
    return out


# lattice enumeration ---------------------------------------------------------

def bounded_count_bound(F: NumberField, bounds: Sequence[float]) -> float:
    """n (2 prod (M_v + 1)^(1 + eps_v))^n."""
    prod = 1.0
    for M, kind in zip(bounds, F.infinite_places):
        prod *= (M + 1) ** (2 if kind == COMPLEX else 1)
    return F.degree * (2 * prod) ** F.degree


def enumerate_bounded_elements(F: NumberField, bounds: Sequence[float], cap: int = 5_000_000) -> np.ndarray:
    """All x in O_F with |sigma_v(x)| <= M_v at every infinite place, as rows (a, b)."""
    bounds = [float(M) for M in bounds]
    if len(bounds) != len(F.infinite_places):
        raise ValueError("one bound per infinite place is required")
    if any(M < 0 for M in bounds):
        raise ValueError("bounds must be nonnegative")
    slack = 1e-9
    if F.is_rational:
        M = math.floor(bounds[0] + slack)
        if 2 * M + 1 > cap:
            raise WindowOverflowError(f"{2 * M + 1} elements exceed cap {cap}")
        a = np.arange(-M, M + 1, dtype=np.int64)
        return np.stack([a, np.zeros_like(a)], axis=1)
    ws = F.omega_embeddings()
    rows = []
    total = 0
    if F.r2 == 1:
        (M,) = bounds
        w = ws[0]
        bmax = math.floor(M / w.imag + slack)
        for b in range(-bmax, bmax + 1):
            rad2 = M * M - (b * w.imag) ** 2
            if rad2 < -slack:
                continue
            rad = math.sqrt(max(rad2, 0.0))
            lo = math.ceil(-b * w.real - rad - slack)
            hi = math.floor(-b * w.real + rad + slack)
            if hi >= lo:
                total += hi - lo + 1
                if total > cap:
                    raise WindowOverflowError(f"more than {cap} elements in window")
                a = np.arange(lo, hi + 1, dtype=np.int64)
                rows.append(np.stack([a, np.full_like(a, b)], axis=1))
        keep = np.concatenate(rows)
        mod = np.abs(keep[:, 0] + keep[:, 1] * w)
        return keep[mod <= M * (1 + 1e-12) + 1e-12]
    M1, M2 = bounds
    w1, w2 = ws
    bmax = math.floor((M1 + M2) / (w1 - w2) + slack)
    for b in range(-bmax, bmax + 1):
        lo = math.ceil(max(-M1 - b * w1, -M2 - b * w2) - slack)
        hi = math.floor(min(M1 - b * w1, M2 - b * w2) + slack)
        if hi >= lo:
            total += hi - lo + 1
            if total > cap:
                raise WindowOverflowError(f"more than {cap} elements in window")
            a = np.arange(lo, hi + 1, dtype=np.int64)
            rows.append(np.stack([a, np.full_like(a, b)], axis=1))
    if not rows:
        return np.zeros((0, 2), dtype=np.int64)
    keep = np.concatenate(rows)
    ok = (np.abs(keep[:, 0] + keep[:, 1] * w1) <= M1 * (1 + 1e-12) + 1e-12) & (
        np.abs(keep[:, 0] + keep[:, 1] * w2) <= M2 * (1 + 1e-12) + 1e-12
    )
    return keep[ok]


# class numbers -----------------------------------------------------------------

def _is_fundamental(D: int) -> bool:
    if D % 4 == 1:
        return _squarefree(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and _squarefree(m)
    return False


def class_number(F: NumberField) -> int:
    """Class number of O_F by counting reduced binary quadratic forms."""
    if F.is_rational:
        return 1
    D = F.discriminant
    if D < 0:
        return _class_number_imaginary(D)
    narrow = _narrow_class_number_real(D)
    eps = fundamental_unit(F)
    return narrow if F.norm(eps) == -1 else narrow // 2


def _class_number_imaginary(D: int) -> int:
    count = 0
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if c == a and b < 0:
                continue
            if math.gcd(math.gcd(a, abs(b)), c) != 1:
                continue
            count += 1
        a += 1
    return count


def _narrow_class_number_real(D: int) -> int:
    """Number of cycles of reduced indefinite forms of discriminant D."""
    root = math.sqrt(D)
    reduced = set()
    for b in range(1, math.isqrt(D) + 1):
        if (b - D) % 2:
            continue
        num = (b * b - D) // 4
        if num == 0:
            continue
        for a in range(1, abs(num) + 1):
            if num % a:
                continue
            if not (abs(root - 2 * a) < b < root):
                continue
            for sa in (a, -a):
                c = num // sa
                if math.gcd(math.gcd(a, b), abs(c)) == 1:
                    reduced.add((sa, b, c))

    def rho(form):
        a, b, c = form
        ac = abs(c)
        # b' = -b mod 2|c| with sqrt(D) - 2|c| < b' < sqrt(D)
        lo = root - 2 * ac
        bp = -b + 2 * ac * math.ceil((lo - (-b)) / (2 * ac))
        if bp <= lo:
            bp += 2 * ac
        return (c, bp, (bp * bp - D) // (4 * c))

    cycles = 0
    seen = set()
    for form in sorted(reduced):
        if form in seen:
            continue
        cycles += 1
        g = form
        while g not in seen:
            seen.add(g)
            g = rho(g)
    return cycles


# zeta functions -------------------------------------------------------------------

_BERN = [float(special.bernoulli(2 * j)[-1]) for j in range(1, 16)]
_FACT = [math.factorial(2 * j) for j in range(1, 16)]
_EULER_GAMMA = float(np.euler_gamma)


def hurwitz_zeta(s, a: float, deriv: bool = False):
    """zeta(s, a) and optionally its s-derivative by Euler-Maclaurin summation.

    Accepts complex arrays ``s`` (s != 1).  Returns ``value`` or ``(value, derivative)``.
    """
    s = np.asarray(s, dtype=complex)
    N = int(max(20, np.max(np.abs(s)) + 20)) if s.size else 20
    k = np.arange(N, dtype=float) + a
    logk = np.log(k)
    terms = np.exp(-np.multiply.outer(s, logk))
    value = terms.sum(axis=-1)
    x = N + a
    lx = math.log(x)
    xs = np.exp(-s * lx)
    value = value + x * xs / (s - 1) + 0.5 * xs
    dvalue = None
    if deriv:
        dvalue = -(terms * logk).sum(axis=-1)
        dvalue = dvalue - x * xs * (lx / (s - 1) + 1 / (s - 1) ** 2) - 0.5 * lx * xs
    poch = s.copy()
    dpoch_ratio = 1 / s
    power = xs / x
    for j in range(15):
        coef = _BERN[j] / _FACT[j]
        value = value + coef * poch * power
        if deriv:
            dvalue = dvalue + coef * poch * power * (dpoch_ratio - lx)
        m = 2 * j + 1
        poch_next = poch * (s + m) * (s + m + 1)
        if deriv:
            dpoch_ratio = dpoch_ratio + 1 / (s + m) + 1 / (s + m + 1)
        poch = poch_next
        power = power / (x * x)
    if deriv:
        return value, dvalue
    return value


@dataclass(frozen=True)
class ZetaData:
    """Dedekind zeta function of F and the completed function Lambda_F."""

    field: NumberField

    @cached_property
    def _characters(self):
        D = abs(self.field.discriminant)
        return [(a, int(kronecker_symbol(self.field.discriminant, a))) for a in range(1, D)]

    def _l_series(self, s, deriv=False):
        D = abs(self.field.discriminant)
        s = np.asarray(s, dtype=complex)
        val = np.zeros(s.shape, dtype=complex)
        dval = np.zeros(s.shape, dtype=complex)
        for a, chi in self._characters:
            if chi == 0:
                continue
            if deriv:
                v, dv = hurwitz_zeta(s, a / D, True)
                dval = dval + chi * dv
            else:
                v = hurwitz_zeta(s, a / D)
            val = val + chi * v
        scale = np.exp(-s * math.log(D))
        if deriv:
            return scale * val, scale * (dval - math.log(D) * val)
        return scale * val

    def zeta(self, s):
        """zeta_F(s) = zeta(s) L(s, chi_Delta) (zeta(s) over Q)."""
        z = hurwitz_zeta(s, 1.0)
        if self.field.is_rational:
            return z
        return z * self._l_series(s)

    def zeta_log_derivative(self, s):
        z, dz = hurwitz_zeta(s, 1.0, True)
        out = dz / z
        if not self.field.is_rational:
            l, dl = self._l_series(s, True)
            out = out + dl / l
        return out

    def gamma_factor_log_derivative(self, s):
        F = self.field
        s = np.asarray(s, dtype=complex)
        out = 0.5 * math.log(abs(F.discriminant)) + np.zeros_like(s)
        if F.r1:
            out = out + F.r1 * (-0.5 * math.log(math.pi) + 0.5 * special.digamma(s / 2))
        if F.r2:
            out = out + F.r2 * (-math.log(2 * math.pi) + special.digamma(s))
        return out

    def completed(self, s):
        """Lambda_F(s) = |Delta|^(s/2) (pi^(-s/2) Gamma(s/2))^r1 (2 (2pi)^(-s) Gamma(s))^r2 zeta_F(s)."""
        F = self.field
        s = np.asarray(s, dtype=complex)
        out = np.exp(0.5 * s * math.log(abs(F.discriminant))) * self.zeta(s)
        if F.r1:
            out = out * (np.exp(-0.5 * s * math.log(math.pi)) * special.gamma(s / 2)) ** F.r1
        if F.r2:
            out = out * (2 * np.exp(-s * math.log(2 * math.pi)) * special.gamma(s)) ** F.r2
        return out

    def log_derivative(self, s):
        """Lambda'/Lambda(s), using Lambda(s) = Lambda(1 - s) to the left of Re s = 1/2."""
        s = np.asarray(s, dtype=complex)
        left = s.real < 0.5
        out = np.empty(s.shape, dtype=complex)
        if np.any(~left):
            sr = s[~left]
            out[~left] = self.gamma_factor_log_derivative(sr) + self.zeta_log_derivative(sr)
        if np.any(left):
            sl = 1 - s[left]
            out[left] = -(self.gamma_factor_log_derivative(sl) + self.zeta_log_derivative(sl))
        return out

    def eisenstein_kernel(self, t):
        """Lambda'/Lambda(2it) - Lambda'/Lambda(1 + 2it) = -2 Re Lambda'/Lambda(1 + 2it), real t != 0."""
        t = np.asarray(t, dtype=float)
        return -2.0 * np.real(self.log_derivative(1 + 2j * t))

    @cached_property
    def residue(self) -> float:
        """lambda_{-1} from the class number formula."""
        F = self.field
        h = class_number(F)
        R = regulator(F)
        return 2**F.r1 * (2 * math.pi) ** F.r2 * h * R / (F.roots_of_unity * math.sqrt(abs(F.discriminant)))

    def numerical_residue(self, step: float = 1e-3) -> float:
        """lim (s - 1) zeta_F(s), Richardson-extrapolated from s = 1 +- step."""
        def g(hh):
            vals = self.zeta(np.array([1 + hh, 1 - hh]))
            return float(np.real(hh * (vals[0] - vals[1]) / 2))
        return (4 * g(step / 2) - g(step)) / 3

    @cached_property
    def constant_term(self) -> float:
        """lambda_0 = lim (zeta_F(s) - lambda_{-1} / (s - 1)), Richardson-extrapolated."""
        lam = self.residue

        def g(hh):
            vals = self.zeta(np.array([1 + hh, 1 - hh]))
            return float(np.real((vals[0] - lam / hh + vals[1] + lam / hh) / 2))

        step = 1e-2
        g1, g2, g3 = g(step), g(step / 2), g(step / 4)
        r1 = (4 * g2 - g1) / 3
        r2 = (4 * g3 - g2) / 3
        return (16 * r2 - r1) / 15

    @cached_property
    def ratio_limit(self) -> float:
        """lim_{s -> 0} Lambda(2s) / Lambda(2s + 1), evaluated through Lambda(2s) = Lambda(1 - 2s)."""
        def ratio(s):
            vals = self.completed(np.array([1 - 2 * s, 1 + 2 * s]))
            return float(np.real(vals[0] / vals[1]))

        # Richardson table on s = 1e-3 / 2^k; the ratio is analytic near 0
        table = [ratio(1e-3 / 2**k) for k in range(4)]
        for order in range(1, 4):
            table = [(2**order * table[k + 1] - table[k]) / (2**order - 1) for k in range(len(table) - 1)]
        return table[0]


def zeta_tools(F: NumberField) -> ZetaData:
    return ZetaData(F)
