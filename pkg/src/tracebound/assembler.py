"""Assembly of the geometric and spectral terms into one bound report.

For a field F, a level ideal J = (n) and dilations a_v (one per infinite
place), the report lists

    S_id, S_ell, S_hyp, S_par, S_Eis, S_Res, S_one,

the normalized total 2^r1 / (A_J prod h_{v,a}(0)) * sum |S_*| and the ratio
total * (log A)^(2 r1 + 3 r2) / [K : K(J)].
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np
from sympy import factorint

from . import local_orbital as lo
from .arch_orbital import (
    arch_elliptic,
    arch_hyperbolic,
    arch_parabolic,
    eisenstein_term,
    identity_contribution,
    one_dim_term,
    parabolic_derivative_majorant,
    residual_term,
)
from .numfield import (
    COMPLEX,
    INERT,
    RAMIFIED,
    REAL,
    FinitePlace,
    IdealFactorization,
    NumberField,
    WindowOverflowError,
    enumerate_bounded_elements,
    enumerate_hyperbolic_units,
    factor_ideal,
    fixed_vector_dim_bound,
    make_field,
    places_above,
    residue_root_count,
    unit_square_classes,
    valuation,
    zeta_tools,
)
from .testfn import TestFunctionPair, make_test_pair, scale_pair

TERMS = ("S_id", "S_ell", "S_hyp", "S_par", "S_Eis", "S_Res", "S_one")
RIGOROUS = "rigorous"
NUMERIC = "numeric"


@dataclass(frozen=True)
class Config:
    """Run configuration.  Constants carry a provenance string in the report."""

    mode: str = RIGOROUS
    a: str | tuple[float, ...] = "auto"
    a_cap: float = 1.0
    paper_losses: bool = False
    window: str = "support"
    class_cap: int = 5_000_000
    bump_support: float = 1.0
    covolume: float | None = None
    idele_volume: float = 1.0
    haar_C: float = 2.0

    def __post_init__(self):
        if self.mode not in (RIGOROUS, NUMERIC):
            raise ValueError(f"mode must be {RIGOROUS!r} or {NUMERIC!r}")
        if self.window not in ("support", "exponential"):
            raise ValueError("window must be 'support' or 'exponential'")
        if not 0 < self.a_cap <= 1:
            raise ValueError("a_cap must lie in (0, 1]")


def default_covolume(F: NumberField) -> tuple[float, str]:
    """|Delta|^(3/2) zeta_F(2) (2/pi)^r1 (4 pi^2)^(-r2)."""
    z2 = float(np.real(zeta_tools(F).zeta(2.0)))
    value = abs(F.discriminant) ** 1.5 * z2 * (2 / math.pi) ** F.r1 * (4 * math.pi**2) ** (-F.r2)
    if F.is_rational:
        return value, "area pi/3 of the modular surface"
    if F.r2:
        return value, "Humbert volume |Delta|^(3/2) zeta_F(2) / (4 pi^2)"
    return value, "|Delta|^(3/2) zeta_F(2) (2/pi)^2, the rational normalization per real place"


def auto_dilation(F: NumberField, norm: int) -> float:
    """a = 8 pi n (n + 13) / log A."""
    if norm <= 1:
        return math.inf
    n = F.degree
    return 8 * math.pi * n * (n + 13) / math.log(norm)


def resolve_dilations(F: NumberField, norm: int, config: Config) -> tuple[tuple[float, ...], list[str]]:
    flags = []
    k = len(F.infinite_places)
    if config.a == "auto":
        a = auto_dilation(F, norm)
        if not a <= 1:
            flags.append(f"auto_a_infeasible: theorem choice a = {a:.4g} > 1 is an extrapolation; evaluated at a = {config.a_cap}")
            a = config.a_cap
        return (a,) * k, flags
    values = tuple(float(x) for x in config.a)
    if len(values) == 1:
        values = values * k
    if len(values) != k:
        raise ValueError(f"need {k} dilations, got {len(values)}")
    if any(not 0 < x <= 1 for x in values):
        raise ValueError("dilations must lie in (0, 1]")
    return values, flags


# factorization with a small sieve -------------------------------------------

_SIEVE_LIMIT = 10**7


@lru_cache(maxsize=4)
def _spf(limit: int) -> np.ndarray:
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    idx = np.nonzero(spf == 0)[0]
    spf[idx] = idx
    return spf


def _factor(n: int, spf: np.ndarray | None) -> dict[int, int]:
    n = abs(int(n))
    if spf is None or n >= spf.size:
        return {int(p): int(k) for p, k in factorint(n).items()}
    out: dict[int, int] = {}
    while n > 1:
        p = int(spf[n])
        out[p] = out.get(p, 0) + 1
        n //= p
    return out


def _merge(a: dict, b: dict) -> dict:
    out = dict(a)
    for p, k in b.items():
        out[p] = out.get(p, 0) + k
    return out


# elliptic classes ------------------------------------------------------------------

@dataclass(frozen=True)
class EllipticClass:
    """The class of t^2 - m t + u with non-square discriminant m^2 - 4u."""

    m: tuple[int, int]
    u: tuple[int, int]
    disc: tuple[int, int]
    B: int


def elliptic_windows(F: NumberField, a: Sequence[float], u, window: str = "exponential",
                     support_radius: float = 1.0) -> list[float] | None:
    """Bounds on |sigma_v(m)| for the class enumeration at the unit u.

    ``exponential``: |sigma_v(m)| < 2 exp(2 pi / (a_v (1 + eps_v))) sqrt|sigma_v(u)|.
    ``support``: only classes whose archimedean integrals can be nonzero,
    |sigma_v(m)| <= 2 cosh(pi R / (a_v (1+eps_v))) sqrt|sigma_v(u)|, and no
    class at all when u is negative at a real place.
    Returns None when the support window is empty.
    """
    out = []
    for i, (av, kind) in enumerate(zip(a, F.infinite_places)):
        eps = 1 if kind == COMPLEX else 0
        su = F.embed(u, i)
        if window == "exponential":
            out.append(2 * math.exp(2 * math.pi / (av * (1 + eps))) * math.sqrt(abs(su)))
        else:
            if kind == REAL and su < 0:
                return None
            kappa = 2 * math.pi * support_radius / (av * (1 + eps))
            out.append(2 * math.cosh(kappa / 2) * math.sqrt(abs(su)))
    return out


def enumerate_elliptic_classes(F: NumberField, a: Sequence[float], window: str = "exponential",
                               support_radius: float = 1.0, cap: int = 5_000_000) -> list[EllipticClass]:
    """All (m, u), u in O^x / (O^x)^2, m in the window, with m^2 - 4u not a square in F."""
    classes = []
    for u in unit_square_classes(F):
        bounds = elliptic_windows(F, a, u, window, support_radius)
        if bounds is None:
            continue
        ms = enumerate_bounded_elements(F, bounds, cap=cap)
        if window == "exponential":
            # the window is open
            keep = np.ones(len(ms), dtype=bool)
            for i, M in enumerate(bounds):
                w = F.omega_embeddings()[i]
                keep &= np.abs(ms[:, 0] + ms[:, 1] * w) < M
            ms = ms[keep]
        four_u = F.scale(4, u)
        for row in ms:
            m = (int(row[0]), int(row[1]))
            disc = F.sub(F.mul(m, m), four_u)
            if F.is_square(disc):
                continue
            classes.append(EllipticClass(m, u, disc, abs(F.norm(disc))))
    return classes


def louboutin_constant(F: NumberField, cls: EllipticClass) -> float:
    """(2/pi)^r2(E) (e log Delta_E / (4(2n-1)))^(2n-1) sqrt(Delta_E), Delta_E = Delta_F^2 B."""
    n = F.degree
    disc_E = F.discriminant**2 * cls.B
    r2E = 2 * F.r2 + sum(1 for i, kind in enumerate(F.infinite_places)
                         if kind == REAL and F.embed(cls.disc, i) < 0)
    k = 2 * n - 1
    return (2 / math.pi) ** r2E * (math.e * math.log(disc_E) / (4 * k)) ** k * math.sqrt(disc_E)


def _haar_exponent(F: NumberField, cls: EllipticClass) -> int:
    """Number of real places of F at which m^2 - 4u is negative (the power of C/2)."""
    return sum(1 for i, kind in enumerate(F.infinite_places)
               if kind == REAL and F.embed(cls.disc, i) < 0)


def _local_pair(F: NumberField, v: FinitePlace, cls: EllipticClass, e: int, f: int, N: int,
                numeric: bool) -> tuple[float, bool]:
    """(unit volume bound) * (local orbital factor) at one place; second entry flags a fallback."""
    vol = lo.elliptic_unit_volume_bound(v.q, f, N)
    if not numeric:
        return vol * lo.elliptic_local_bound(v.q, e, f, N), False
    if f == 0:
        if e == 0:
            return vol * (v.q - 1 + N) / v.q, False
        return vol * N * float(v.q) ** (-e), False
    if v.splitting in (INERT, RAMIFIED):
        return vol * lo.elliptic_local_bound(v.q, e, f, N), True
    m_int, u_int = _as_local_integers(F, v, cls, f + e + 2)
    return vol * lo.elliptic_local_series(v.p, e, m_int, u_int), False


def _as_local_integers(F: NumberField, v: FinitePlace, cls: EllipticClass, K: int) -> tuple[int, int]:
    if F.is_rational:
        return cls.m[0], cls.u[0]
    from .numfield import _lift_root

    r = _lift_root(F, v, K)
    mod = v.p**K
    return (cls.m[0] + cls.m[1] * r) % mod, (cls.u[0] + cls.u[1] * r) % mod


@dataclass
class _EllipticBase:
    classes: list
    base: np.ndarray           # coefficient without the level, times arch factor
    bad_places: list           # per class: {place: (f, N, local value at e = 0)}
    residues: dict = field(default_factory=dict)
    fallback: bool = False


@lru_cache(maxsize=8)
def _elliptic_base(F: NumberField, pairs: tuple[TestFunctionPair, ...], config: Config) -> _EllipticBase:
    a = tuple(p.dilation for p in pairs)
    R = pairs[0].base_support
    classes = enumerate_elliptic_classes(F, a, config.window, R, config.class_cap)
    numeric = config.mode == NUMERIC
    arch_mode = "exact" if numeric else "bound"
    base = np.zeros(len(classes))
    bad_places = []
    fallback = False
    ms = [c.m for c in classes]
    spf = None
    if F.is_rational and classes:
        top = max(abs(m[0]) for m in ms) + 4
        if top <= _SIEVE_LIMIT:
            spf = _spf(max(top, 16))
    for i, cls in enumerate(classes):
        arch = 1.0
        for j, (pair, kind) in enumerate(zip(pairs, F.infinite_places)):
            arch *= arch_elliptic(pair, kind, F.embed(cls.m, j), F.embed(cls.u, j), arch_mode)
            if arch == 0.0:
                break
        bad_places.append({})
        if arch == 0.0:
            continue
        if F.is_rational and cls.u == (1, 0) and spf is not None:
            fac = _merge(_factor(cls.m[0] - 2, spf), _factor(cls.m[0] + 2, spf))
        else:
            fac = _factor(cls.B, None)
        local = 1.0
        places = {}
        for p in fac:
            for v in places_above(F, p):
                f = valuation(F, v, cls.disc)
                if f == 0:
                    continue
                N = residue_root_count(F, v, cls.m, cls.u)
                val, fb = _local_pair(F, v, cls, 0, f, N, numeric)
                fallback |= fb
                places[v] = (f, N, val)
                local *= val
        bad_places[i] = places
        coef = (config.haar_C / 2) ** _haar_exponent(F, cls) * louboutin_constant(F, cls)
        base[i] = coef * local * arch / config.idele_volume
    return _EllipticBase(classes, base, bad_places, {}, fallback)


def _residue_counts(F: NumberField, v: FinitePlace, eb: _EllipticBase) -> np.ndarray:
    """Number of residue roots of each class at v (used where v does not divide the discriminant)."""
    if v in eb.residues:
        return eb.residues[v]
    classes = eb.classes
    p = v.p
    if v.splitting == INERT or not classes:
        out = np.array([residue_root_count(F, v, c.m, c.u) for c in classes], dtype=np.int64)
    else:
        r = v.root
        m = np.array([(c.m[0] + c.m[1] * r) % p for c in classes], dtype=np.int64)
        u = np.array([(c.u[0] + c.u[1] * r) % p for c in classes], dtype=np.int64)
        if p == 2:
            out = ((u == 0).astype(np.int64) + ((1 - m + u) % 2 == 0)).astype(np.int64)
        else:
            # quadratic character of m^2 - 4u through a table of squares
            square = np.zeros(p, dtype=bool)
            square[(np.arange(p, dtype=np.int64) ** 2) % p] = True
            disc = (m * m - 4 * u) % p
            out = np.where(disc == 0, 1, np.where(square[disc], 2, 0)).astype(np.int64)
    eb.residues[v] = out
    return out


def elliptic_term(F: NumberField, pairs: tuple[TestFunctionPair, ...], ideal: IdealFactorization,
                  config: Config) -> tuple[float, list[str], int]:
    """S_ell summed over the enumerated classes; returns (value, flags, number of classes)."""
    flags = []
    eb = _elliptic_base(F, pairs, config)
    values = eb.base.copy()
    numeric = config.mode == NUMERIC
    if config.paper_losses:
        return _elliptic_crude_chain(F, pairs, ideal, config, eb), flags, len(eb.classes)
    for v, e in ideal.places:
        N_all = _residue_counts(F, v, eb)
        q = v.q
        # classes with f_v = 0: the factor at v changes from 1 to vol * orbital(e)
        N = N_all.astype(float)
        vol = q * (q + 1 - N) / (q * q - 1)
        if numeric:
            factor = vol * N * float(q) ** (-e)
        else:
            factor = vol * 4.0 * float(q) ** (-e)
        for i, places in enumerate(eb.bad_places):
            if values[i] == 0.0:
                continue
            if v in places:
                f, Nv, old = places[v]
                new, fb = _local_pair(F, v, eb.classes[i], e, f, Nv, numeric)
                if fb:
                    flags.append("exact_series_fallback")
                values[i] *= new / old
            else:
                values[i] *= factor[i]
    if eb.fallback:
        flags.append("exact_series_fallback")
    return float(np.sum(np.abs(values))), sorted(set(flags)), len(eb.classes)


def _elliptic_crude_chain(F, pairs, ideal, config, eb) -> float:
    """Class sum with the cruder chain  B^5 2^(n w(A)) 4^(n w(AB)) A^-1 B^(1/2)."""
    n = F.degree
    A = ideal.norm
    primes_A = set(factorint(A)) if A > 1 else set()
    total = 0.0
    arch_mode = "exact" if config.mode == NUMERIC else "bound"
    for cls in eb.classes:
        arch = 1.0
        for j, (pair, kind) in enumerate(zip(pairs, F.infinite_places)):
            arch *= arch_elliptic(pair, kind, F.embed(cls.m, j), F.embed(cls.u, j), arch_mode)
        if arch == 0.0:
            continue
        primes_AB = primes_A | set(factorint(cls.B))
        coef = (config.haar_C / 2) ** _haar_exponent(F, cls) * louboutin_constant(F, cls)
        chain = (float(cls.B) ** 5 * 2.0 ** (n * len(primes_A)) * 4.0 ** (n * len(primes_AB))
                 / A * math.sqrt(cls.B))
        total += abs(coef * chain * arch / config.idele_volume)
    return total


# hyperbolic ---------------------------------------------------------------------

def hyperbolic_term(F: NumberField, pairs: tuple[TestFunctionPair, ...], ideal: IdealFactorization,
                    config: Config) -> float:
    """(idele volume / 2) sum over units alpha != 1 in the window of |J_alpha|."""
    a = [p.dilation for p in pairs]
    arch_mode = "exact" if config.mode == NUMERIC else "bound"
    total = 0.0
    for alpha in enumerate_hyperbolic_units(F, a):
        gap = F.sub(alpha, (1, 0))
        g_orders = {}
        for p in factorint(abs(F.norm(gap))):
            for v in places_above(F, p):
                g = valuation(F, v, gap)
                if g:
                    g_orders[v] = g
        places = set(g_orders) | {v for v, _ in ideal.places}
        unw = {v: lo.hyperbolic_local_bound(v.q, ideal.exponent(v), g_orders.get(v, 0)) for v in places}
        fin_unw = math.prod(unw.values())
        arch_unw = []
        arch_w = []
        for j, (pair, kind) in enumerate(zip(pairs, F.infinite_places)):
            s = F.embed(alpha, j)
            arch_unw.append(abs(arch_hyperbolic(pair, kind, s, False, arch_mode)))
            arch_w.append(abs(arch_hyperbolic(pair, kind, s, True, arch_mode)))
        arch_prod = math.prod(arch_unw)
        value = 0.0
        for v, g in g_orders.items():
            weighted = lo.hyperbolic_local_bound(v.q, ideal.exponent(v), g, weighted=True)
            value += weighted * fin_unw / unw[v] * arch_prod
        for j in range(len(pairs)):
            others = math.prod(x for k, x in enumerate(arch_unw) if k != j)
            value += fin_unw * arch_w[j] * others
        total += value
    return config.idele_volume / 2 * total


# parabolic ----------------------------------------------------------------------

def parabolic_term(F: NumberField, pairs: tuple[TestFunctionPair, ...], ideal: IdealFactorization,
                   config: Config) -> float:
    """lambda_0 g(1) Z(1) + lambda_-1 (g(1) Z'(1) + g'(1) Z(1)); absolute values in rigorous mode."""
    Z = zeta_tools(F)
    lam0, lam1 = Z.constant_term, Z.residue
    g_vals = [(float(lo.parabolic_g(v.q, e, 1.0)), float(lo.parabolic_g_prime(v.q, e, 1.0)))
              for v, e in ideal.places]
    g1 = math.prod(x for x, _ in g_vals)
    dg1 = sum(d * math.prod(x for k, (x, _) in enumerate(g_vals) if k != i)
              for i, (_, d) in enumerate(g_vals))
    kinds = F.infinite_places
    z_vals = [arch_parabolic(p, k) for p, k in zip(pairs, kinds)]
    z_inf = math.prod(z_vals)
    if config.mode == NUMERIC:
        dz = [arch_parabolic(p, k, derivative=True) for p, k in zip(pairs, kinds)]
        dz_inf = sum(d * math.prod(z for k, z in enumerate(z_vals) if k != i) for i, d in enumerate(dz))
        return lam0 * g1 * z_inf + lam1 * (g1 * dz_inf + dg1 * z_inf)
    dz = [parabolic_derivative_majorant(p, k) for p, k in zip(pairs, kinds)]
    dz_inf = sum(d * math.prod(z for k, z in enumerate(z_vals) if k != i) for i, d in enumerate(dz))
    return abs(lam0 * g1) * z_inf + lam1 * (abs(g1) * dz_inf + abs(dg1) * z_inf)


def parabolic_rigorous_envelope(F: NumberField, pairs, ideal: IdealFactorization) -> float:
    """A^(-1/2) (|lambda_0| Z(1) + lambda_-1 (|Z'(1)| + 6 Z(1) log A))."""
    Z = zeta_tools(F)
    kinds = F.infinite_places
    z_vals = [arch_parabolic(p, k) for p, k in zip(pairs, kinds)]
    dz = [parabolic_derivative_majorant(p, k) for p, k in zip(pairs, kinds)]
    z_inf = math.prod(z_vals)
    dz_inf = sum(d * math.prod(z for k, z in enumerate(z_vals) if k != i) for i, d in enumerate(dz))
    A = ideal.norm
    return A**-0.5 * (abs(Z.constant_term) * z_inf + Z.residue * (dz_inf + 6 * z_inf * math.log(A)))


# report ---------------------------------------------------------------------------

@dataclass
class Report:
    field: str
    ideal: int
    A: int
    index: int
    a: tuple[float, ...]
    mode: str
    terms: dict
    total: float
    ratio: float
    flags: list = field(default_factory=list)
    failed: list = field(default_factory=list)
    n_elliptic: int = 0
    a_theorem: float = math.inf
    provenance: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    @property
    def ok(self) -> bool:
        return not self.failed


def build_pairs(F: NumberField, a: Sequence[float], bump_support: float = 1.0) -> tuple[TestFunctionPair, ...]:
    base = make_test_pair(bump_support)
    return tuple(scale_pair(base, av) for av in a)


def assemble(field_spec, n: int, config: Config = Config()) -> Report:
    """Evaluate every term of the trace formula for the level (n) and combine them."""
    F = make_field(field_spec)
    ideal = factor_ideal(F, n)
    A = ideal.norm
    a, flags = resolve_dilations(F, A, config)
    a_theorem = auto_dilation(F, A)
    pairs = build_pairs(F, a, config.bump_support)
    Z = zeta_tools(F)
    kinds = F.infinite_places
    dims = fixed_vector_dim_bound(ideal)
    covol, covol_src = (config.covolume, "configured") if config.covolume is not None else default_covolume(F)
    numeric = config.mode == NUMERIC

    terms = {}
    failed = []
    terms["S_id"] = covol * math.prod(identity_contribution(p, k) for p, k in zip(pairs, kinds))
    n_ell = 0
    try:
        terms["S_ell"], ell_flags, n_ell = elliptic_term(F, pairs, ideal, config)
        flags.extend(ell_flags)
    except WindowOverflowError as exc:
        terms["S_ell"] = math.nan
        failed.append("S_ell")
        flags.append(f"S_ell: {exc}")
    try:
        terms["S_hyp"] = hyperbolic_term(F, pairs, ideal, config)
    except WindowOverflowError as exc:
        terms["S_hyp"] = math.nan
        failed.append("S_hyp")
        flags.append(f"S_hyp: {exc}")
    terms["S_par"] = parabolic_term(F, pairs, ideal, config)
    terms["S_Eis"] = eisenstein_term(Z, pairs, ideal, dims["exact_product"],
                                     mode="numeric" if numeric else "bound")
    terms["S_Res"] = residual_term(Z, pairs, ideal, dims["exact_product"])
    terms["S_one"] = one_dim_term(pairs, ideal, mode="exact" if numeric else "bound")
    if not numeric:
        terms = {k: abs(v) for k, v in terms.items()}

    h0 = math.prod(p.h_zero() for p in pairs)
    norm_factor = 2**F.r1 / (ideal.A_J * h0)
    total = norm_factor * sum(abs(terms[k]) for k in TERMS)
    log_power = 2 * F.r1 + 3 * F.r2
    ratio = total * math.log(A) ** log_power / ideal.index if A > 1 else 0.0

    provenance = {
        "covolume": f"{covol!r} ({covol_src})",
        "idele_volume": f"{config.idele_volume!r} (unit normalization)",
        "haar_C": f"{config.haar_C!r} ((C/2)^k = 1 for the default)",
        "lambda_-1": "class number formula",
        "lambda_0": "Richardson limit of zeta_F(s) - lambda_-1/(s-1)",
        "window": config.window,
    }
    return Report(F.name, int(n), A, ideal.index, tuple(a), config.mode,
                  {k: float(terms[k]) for k in TERMS}, float(total), float(ratio),
                  flags, failed, n_ell, a_theorem, provenance)
