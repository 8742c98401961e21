"""Exact-rational existence certificates for classical and quantum codes.

All decisions are made with ``int``/``Fraction`` arithmetic.  The only
floating values are the tail-rate diagnostics in :class:`ConstantsReport`,
which feed the choice of truncation depth ``t`` but never a verdict.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from decimal import Context, Decimal
from fractions import Fraction

import mpmath

from .combinatorics import hamming_volume, symplectic_volume
from .errors import DomainError, UsageError

FORMAT_VERSION = "gvkit-certificate/1"
WARMUP_CONSTANT = Fraction(17, 10)
EPSILON_RESOLUTION = Fraction(1, 1 << 40)

CLASSICAL_MODES = ("union", "warmup17", "sqrt_n", "bonferroni_t")
REPORT_MODES = ("union", "bonferroni3", "bonferroni_t", "quantum_union", "quantum_bonferroni_t")


@dataclass(frozen=True)
class CodeParams:
    q: int
    n: int
    k: int
    d: int

    def __post_init__(self):
        if self.q < 2:
            raise UsageError("q must be at least 2")
        if not 1 <= self.k <= self.n:
            raise UsageError(f"need 1 <= k <= n, got k={self.k}, n={self.n}")
        if not 1 <= self.d <= self.n:
            raise UsageError(f"need 1 <= d <= n, got d={self.d}, n={self.n}")

    @property
    def delta(self) -> Fraction:
        return Fraction(self.d, self.n)

    @property
    def classical_domain(self) -> bool:
        return self.delta < 1 - Fraction(1, self.q)

    @property
    def quantum_domain(self) -> bool:
        return self.delta < 1 - Fraction(1, self.q**2)


# -- formatting ----------------------------------------------------------

_DEC = Context(prec=12)


def format_rational(x: Fraction) -> str:
    """``num/den ~ decimal`` with a 12-significant-digit decimal."""
    x = Fraction(x)
    dec = _DEC.divide(Decimal(x.numerator), Decimal(x.denominator))
    return f"{x.numerator}/{x.denominator} ~ {dec}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text.split("~")[0].strip())


@dataclass(frozen=True)
class CertificateReport:
    mode: str
    q: int
    n: int
    k: int
    d: int
    a: Fraction
    W_size: int
    b: Fraction
    t: int
    partial_sums: tuple  # S_i = C(|W|, i) a^i for i = 1..t
    bound_on_failure: Fraction
    verdict: str
    correction_terms: Fraction | None = None
    criterion: str | None = None
    criterion_met: bool | None = None
    extras: dict = dc_field(default_factory=dict)
    notes: tuple = ()

    @property
    def certified(self) -> bool:
        return self.verdict == "certified"

    def to_text(self) -> str:
        lines = [
            FORMAT_VERSION,
            f"mode: {self.mode}",
            f"q: {self.q}",
            f"n: {self.n}",
            f"k: {self.k}",
            f"d: {self.d}",
            f"a: {format_rational(self.a)}",
            f"W_size: {self.W_size}",
            f"b: {format_rational(self.b)}",
            f"t: {self.t}",
        ]
        for i, s in enumerate(self.partial_sums, 1):
            lines.append(f"S_{i}: {format_rational(s)}")
        lines.append(f"bound_on_failure: {format_rational(self.bound_on_failure)}")
        if self.correction_terms is not None:
            lines.append(f"correction_terms: {format_rational(self.correction_terms)}")
        if self.criterion is not None:
            lines.append(f"criterion: {self.criterion}")
            lines.append(f"criterion_met: {str(self.criterion_met).lower()}")
        for key in sorted(self.extras):
            val = self.extras[key]
            val = format_rational(val) if isinstance(val, Fraction) else val
            lines.append(f"extra.{key}: {val}")
        for note in self.notes:
            lines.append(f"note: {note}")
        lines.append(f"verdict: {self.verdict}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "CertificateReport":
        lines = text.strip().splitlines()
        if not lines or lines[0].strip() != FORMAT_VERSION:
            raise UsageError(f"not a {FORMAT_VERSION} document")
        kv: dict = {}
        sums, extras, notes = [], {}, []
        for line in lines[1:]:
            key, _, val = line.partition(": ")
            if key.startswith("S_"):
                sums.append(parse_rational(val))
            elif key.startswith("extra."):
                extras[key[6:]] = parse_rational(val) if "/" in val and "~" in val else val
            elif key == "note":
                notes.append(val)
            else:
                kv[key] = val
        met = kv.get("criterion_met")
        return cls(
            mode=kv["mode"],
            q=int(kv["q"]),
            n=int(kv["n"]),
            k=int(kv["k"]),
            d=int(kv["d"]),
            a=parse_rational(kv["a"]),
            W_size=int(kv["W_size"]),
            b=parse_rational(kv["b"]),
            t=int(kv["t"]),
            partial_sums=tuple(sums),
            bound_on_failure=parse_rational(kv["bound_on_failure"]),
            verdict=kv["verdict"],
            correction_terms=parse_rational(kv["correction_terms"]) if "correction_terms" in kv else None,
            criterion=kv.get("criterion"),
            criterion_met=None if met is None else met == "true",
            extras=extras,
            notes=tuple(notes),
        )


# -- classical conditions -----------------------------------------------


def gilbert_bound(q: int, n: int, d: int) -> tuple[Fraction, int]:
    """``q^n / Vol_q(n, d-1)`` and its ceiling."""
    if not 1 <= d <= n:
        raise UsageError(f"need 1 <= d <= n, got d={d}, n={n}")
    ratio = Fraction(q**n, hamming_volume(q, n, d - 1))
    return ratio, math.ceil(ratio)


def varshamov_condition(params: CodeParams) -> bool:
    """True iff ``q^k < q^n / Vol_q(n, d-1)``."""
    q, n, k, d = params.q, params.n, params.k, params.d
    return q**k * hamming_volume(q, n, d - 1) < q**n


def projective_count(q: int, k: int) -> int:
    return (q**k - 1) // (q - 1)


def bonferroni_terms(W: int, a: Fraction, t: int) -> list[Fraction]:
    """``C(W, i) a^i`` for i = 1..t."""
    return [math.comb(W, i) * a**i for i in range(1, t + 1)]


def alternating_sum(terms) -> Fraction:
    return sum(((-1) ** i * s for i, s in enumerate(terms)), Fraction(0))


def largest_odd_at_most(x) -> int:
    """Largest odd integer <= x, and at least 1."""
    f = int(math.floor(x)) if not isinstance(x, int) else x
    if f % 2 == 0:
        f -= 1
    return max(1, f)


def _bonferroni_report(mode, q, n, k, d, W, a, t, gamma=None, allow_even=False, **extra) -> CertificateReport:
    if t < 1:
        raise UsageError("t must be at least 1")
    if t % 2 == 0 and not allow_even:
        raise UsageError(f"t = {t} is even; odd truncations are upper bounds")
    if t > W:
        raise UsageError(f"t = {t} exceeds |W| = {W}")
    terms = bonferroni_terms(W, a, t)
    bound = alternating_sum(terms)
    correction = None
    notes = list(extra.pop("notes", ()))
    if gamma is not None:
        correction = Fraction(gamma) * sum(terms, Fraction(0))
        if bound < 1 <= bound + correction:
            notes.append("correction term exceeds the idealized margin; verdict downgraded")
        bound = bound + correction
    return CertificateReport(
        mode=mode,
        q=q,
        n=n,
        k=k,
        d=d,
        a=a,
        W_size=W,
        b=W * a,
        t=t,
        partial_sums=tuple(terms),
        bound_on_failure=bound,
        verdict="certified" if bound < 1 else "not_certified",
        correction_terms=correction,
        notes=tuple(notes),
        **extra,
    )


def bonferroni_failure_bound(
    params: CodeParams, t: int, model: str = "idealized", gamma=None, allow_even: bool = False
) -> CertificateReport:
    """Truncated inclusion-exclusion bound on Pr[some projective codeword is light].

    ``model='idealized'`` evaluates ``sum_{i<=t} (-1)^(i-1) C(|W|,i) a^i`` with
    ``a = Vol_q(n, d-1)/q^n``.  ``model='corrected'`` adds
    ``gamma * sum_i C(|W|,i) a^i``; when ``gamma`` is omitted it is derived
    from :func:`derive_constants`.  ``allow_even`` exposes the lower-bound
    truncations for testing.
    """
    q, n, k, d = params.q, params.n, params.k, params.d
    W = projective_count(q, k)
    a = Fraction(hamming_volume(q, n, d - 1), q**n)
    notes = ()
    if model == "corrected":
        if gamma is None:
            info = correction_gamma(q, n, k, d, "hamming")
            gamma, notes = info.gamma, info.notes
    elif model == "idealized":
        gamma = None
    else:
        raise UsageError(f"unknown model {model!r}")
    mode = "union" if t == 1 else "bonferroni_t"
    return _bonferroni_report(mode, q, n, k, d, W, a, t, gamma, allow_even, notes=notes)


def _mpf(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def default_t(q: int, n: int, h) -> int:
    """Largest odd integer <= sqrt(h * log_q 2 * n / 2), at least 1."""
    with mpmath.workprec(128):
        x = mpmath.sqrt(_mpf(h) * mpmath.log(2) / mpmath.log(q) * n / 2)
        return largest_odd_at_most(int(mpmath.floor(x)))


def _require_classical(q, n, d):
    if not 1 <= d <= n:
        raise UsageError(f"need 1 <= d <= n, got d={d}, n={n}")
    if Fraction(d, n) >= 1 - Fraction(1, q):
        raise DomainError(f"d/n = {Fraction(d, n)} is not below 1 - 1/q")


def _max_k(n, ok) -> int:
    best = 0
    for k in range(1, n + 1):
        if ok(k):
            best = k
    return best


def _classical_t(q, n, d, t, h) -> tuple[int, list[str]]:
    notes = []
    if t is None:
        if d == 1:
            return 1, notes
        if h is None:
            h = derive_constants(q, Fraction(d - 1, n), "hamming", n).h
            notes.append(f"t from finite-n h = {float(h):.6g}")
        else:
            notes.append(f"t from user h = {h}")
        t = default_t(q, n, h)
    return t, notes


def max_k_bonferroni(q: int, n: int, d: int, t: int) -> int:
    """Largest k whose idealized t-term sum is below 1 (t clamped to |W|)."""
    vol, qn = hamming_volume(q, n, d - 1), q**n
    a = Fraction(vol, qn)

    def ok(k):
        W = projective_count(q, k)
        tk = min(t, largest_odd_at_most(W))
        return alternating_sum(bonferroni_terms(W, a, tk)) < 1

    return _max_k(n, ok)


def certify_classical(q: int, n: int, d: int, mode: str = "union", c=None, t=None, h=None):
    """Largest certified dimension k and the certificate at that k.

    Modes:
      union         |W| a < 1
      warmup17      |W| < 1.7 q^n / Vol, reported with the 3-term sum
      sqrt_n        |W| < c sqrt(n) q^n / Vol, reported with the t-term sum;
                    ``extras['bonferroni_max_k']`` holds the t-term optimum
      bonferroni_t  idealized t-term sum < 1

    If no k qualifies, k = 0 is returned with the report evaluated at k = 1.
    """
    _require_classical(q, n, d)
    if mode not in CLASSICAL_MODES:
        raise UsageError(f"unknown mode {mode!r}; expected one of {CLASSICAL_MODES}")
    vol, qn = hamming_volume(q, n, d - 1), q**n
    a = Fraction(vol, qn)

    if mode == "union":
        k = _max_k(n, lambda k: projective_count(q, k) * vol < qn)
        rep = _bonferroni_report("union", q, n, max(k, 1), d, projective_count(q, max(k, 1)), a, 1)
        return k, rep

    if mode == "warmup17":
        k = _max_k(n, lambda k: projective_count(q, k) * vol < WARMUP_CONSTANT * qn)
        kk = max(k, 1)
        W = projective_count(q, kk)
        rep = _bonferroni_report(
            "bonferroni3", q, n, kk, d, W, a, min(3, largest_odd_at_most(W)),
            criterion="|W| < 1.7 q^n / Vol_q(n, d-1)",
            criterion_met=W * vol < WARMUP_CONSTANT * qn,
        )
        return k, rep

    t, notes = _classical_t(q, n, d, t, h)
    if t % 2 == 0:
        raise UsageError(f"t = {t} is even")

    if mode == "bonferroni_t":
        k = max_k_bonferroni(q, n, d, t)
        kk = max(k, 1)
        W = projective_count(q, kk)
        rep = _bonferroni_report(
            "bonferroni_t", q, n, kk, d, W, a, min(t, largest_odd_at_most(W)),
            extras={"requested_t": t}, notes=notes,
        )
        return k, rep

    c = Fraction(1) if c is None else Fraction(c)
    if c <= 0:
        raise UsageError("c must be positive")
    # |W| Vol < c sqrt(n) q^n  <=>  (|W| Vol)^2 < c^2 n q^(2n)
    k = _max_k(n, lambda k: (projective_count(q, k) * vol) ** 2 < c * c * n * qn * qn)
    kk = max(k, 1)
    W = projective_count(q, kk)
    rep = _bonferroni_report(
        "bonferroni_t", q, n, kk, d, W, a, min(t, largest_odd_at_most(W)),
        criterion=f"|W| < {c} sqrt(n) q^n / Vol_q(n, d-1)",
        criterion_met=(W * vol) ** 2 < c * c * n * qn * qn,
        extras={"bonferroni_max_k": max_k_bonferroni(q, n, d, t), "requested_t": t},
        notes=notes,
    )
    return k, rep


# -- quantum conditions -------------------------------------------------


def _require_quantum(params: CodeParams):
    if not params.quantum_domain:
        raise DomainError(f"d/n = {params.delta} is not below 1 - 1/q^2")


def quantum_union_certify(params: CodeParams) -> CertificateReport:
    """Certified iff ``(q^(2n-k) - 1) Vol^S(2n, d-1) < q^(2n)``."""
    _require_quantum(params)
    q, n, k, d = params.q, params.n, params.k, params.d
    W = q ** (2 * n - k) - 1
    a = Fraction(symplectic_volume(q, n, d - 1), q ** (2 * n))
    return _bonferroni_report("quantum_union", q, n, k, d, W, a, 1)


def quantum_rhs_ratio_squared(q: int, n: int, k: int, c=1) -> Fraction:
    """Square of (c sqrt(n) (q-1)) / (1 - q^-(2n-k)), exact."""
    c = Fraction(c)
    return c * c * n * (q - 1) ** 2 / (1 - Fraction(1, q ** (2 * n - k))) ** 2


def quantum_improved_certify(params: CodeParams, c=1, t=None, h_prime=None, a_delta=None) -> CertificateReport:
    """c sqrt(n) condition plus the t-term sum over projective stabilizer messages.

    ``criterion_met`` records ``(q^(2n-k)-1)/(q-1) < c sqrt(n) q^(2n) / Vol``;
    the verdict comes from the idealized Bonferroni sum with
    ``a = Vol^S(2n, d-1)/q^(2n)`` and ``|W| = (q^(2n-k)-1)/(q-1)``.
    """
    _require_quantum(params)
    q, n, k, d = params.q, params.n, params.k, params.d
    c = Fraction(c)
    if c < 0:
        raise UsageError("c must be non-negative")
    vol, q2n = symplectic_volume(q, n, d - 1), q ** (2 * n)
    W = projective_count(q, 2 * n - k)
    a = Fraction(vol, q2n)
    notes = []
    if t is None:
        if d == 1:
            t = 1
        else:
            if h_prime is None or a_delta is None:
                rep = derive_constants(q, Fraction(d - 1, n), "symplectic", n)
                h_prime = rep.h_prime if h_prime is None else h_prime
                a_delta = rep.escape_rate_q if a_delta is None else a_delta
            with mpmath.workprec(128):
                bound1 = mpmath.sqrt(_mpf(a_delta) * n) / 2
                bound2 = mpmath.sqrt(_mpf(h_prime) * mpmath.log(2) / mpmath.log(q) * n / 2)
                t = largest_odd_at_most(int(mpmath.floor(min(bound1, bound2))))
            notes.append(f"t from a_delta = {float(a_delta):.6g}, h' = {float(h_prime):.6g}")
    if t % 2 == 0:
        raise UsageError(f"t = {t} is even")
    t = min(t, largest_odd_at_most(W))
    return _bonferroni_report(
        "quantum_bonferroni_t", q, n, k, d, W, a, t,
        criterion=f"(q^(2n-k)-1)/(q-1) < {c} sqrt(n) q^(2n) / Vol^S(2n, d-1)",
        criterion_met=(W * vol) ** 2 < c * c * n * q2n * q2n,
        notes=notes,
    )


def feng_ma_condition(q: int, n: int, k: int, d: int) -> bool:
    """Pure [[n, n-k, d]]_q existence test: ``Vol^S(2n, d-1) < q^(k+2)``."""
    if not n > k >= 2:
        raise UsageError(f"need n > k >= 2, got n={n}, k={k}")
    if k % 2:
        raise UsageError(f"k = {k} must be even")
    if d < 2:
        raise UsageError("d must be at least 2")
    if d - 1 > n:
        raise UsageError(f"d = {d} exceeds n + 1")
    return symplectic_volume(q, n, d - 1) < q ** (k + 2)


def quantum_hamming_check(q: int, n: int, k: int, d: int) -> bool:
    """``q^(n-k) >= Vol^S(2n, floor((d-1)/2))`` for an [[n, k, d]] code."""
    if not 0 <= k <= n or d < 1:
        raise UsageError(f"invalid parameters [[{n},{k},{d}]]")
    r = (d - 1) // 2
    if r > n:
        return False
    return q ** (n - k) >= symplectic_volume(q, n, r)


def quantum_singleton_check(q: int, n: int, k: int, d: int) -> bool:
    return n >= k + 2 * d - 2


# -- derived constants ---------------------------------------------------


@dataclass(frozen=True)
class ConstantsReport:
    """Slack and finite-n tail rates for radius fraction ``delta``.

    Rates are per coordinate: a tail bounded by ``2^(-r n)`` has rate r.
    Float fields are diagnostics that only steer the truncation depth.
    """

    q: int
    delta: Fraction
    domain: str
    epsilon: Fraction
    n: int | None = None
    escape_ratio: Fraction | None = None
    escape_exponent_q: float | None = None
    escape_rate_q: float | None = None
    escape_rate_bits: float | None = None
    chernoff_rate_bits: float | None = None
    h: float | None = None
    h_prime: float | None = None
    notes: tuple = ()

    def to_text(self) -> str:
        lines = ["gvkit-constants/1", f"q: {self.q}", f"domain: {self.domain}",
                 f"delta: {format_rational(self.delta)}", f"epsilon: {format_rational(self.epsilon)}"]
        if self.n is not None:
            lines += [
                f"n: {self.n}",
                f"escape_ratio: {format_rational(self.escape_ratio)}",
                f"escape_exponent_q: {self.escape_exponent_q:.12g}",
                f"escape_rate_q: {self.escape_rate_q:.12g}",
                f"escape_rate_bits: {self.escape_rate_bits:.12g}",
                f"chernoff_rate_bits: {self.chernoff_rate_bits:.12g}",
                f"h: {self.h:.12g}",
                f"h_prime: {self.h_prime:.12g}",
            ]
        lines += [f"note: {x}" for x in self.notes]
        return "\n".join(lines) + "\n"


def slack_holds(delta: Fraction, eps: Fraction, Q: int) -> bool:
    """``2(delta-eps) - Q/(Q-1) (delta-eps)^2 >= delta + eps``, exactly."""
    y = delta - eps
    return 2 * y - Fraction(Q, Q - 1) * y * y >= delta + eps


def _domain_alphabet(q: int, domain: str) -> int:
    if domain == "hamming":
        return q
    if domain == "symplectic":
        return q * q
    raise UsageError(f"unknown domain {domain!r}")


def derive_constants(q: int, delta, domain: str = "hamming", n: int | None = None) -> ConstantsReport:
    """Largest slack eps (bisection to 2^-40) and, given n, exact tail rates.

    The escape ratio ``Vol(n, floor((delta-eps)n)) / Vol(n, floor(delta n))``
    bounds the chance that a uniform ball vector is light; the Chernoff rate
    ``eps^2 / (2 (delta+eps) ln 2)`` bounds a sum falling back into the ball.
    ``h`` is the smaller of the two and ``h_prime = 3h/4`` is the rate that
    survives conditioning on mutual orthogonality.
    """
    Q = _domain_alphabet(q, domain)
    delta = Fraction(delta) if not isinstance(delta, float) else Fraction(repr(delta))
    if not 0 < delta < 1 - Fraction(1, Q):
        raise DomainError(f"delta = {delta} outside (0, 1 - 1/{Q})")
    lo, hi = Fraction(0), delta
    while hi - lo > EPSILON_RESOLUTION:
        mid = (lo + hi) / 2
        if slack_holds(delta, mid, Q):
            lo = mid
        else:
            hi = mid
    eps = lo
    notes = []
    if eps == 0:
        notes.append("no positive slack found at 2^-40 resolution")
    if n is None:
        return ConstantsReport(q, delta, domain, eps, notes=tuple(notes))

    vol = symplectic_volume if domain == "symplectic" else hamming_volume
    r_lo = math.floor((delta - eps) * n)
    r_hi = math.floor(delta * n)
    ratio = Fraction(vol(q, n, r_lo), vol(q, n, r_hi))
    with mpmath.workprec(128):
        expo_q = -mpmath.log(mpmath.mpf(ratio.numerator) / ratio.denominator, q)
        rate_q = expo_q / n
        rate_bits = rate_q * mpmath.log(q, 2)
        e = mpmath.mpf(eps.numerator) / eps.denominator
        dl = mpmath.mpf(delta.numerator) / delta.denominator
        chern = e * e / (2 * (dl + e) * mpmath.log(2))
        h = min(rate_bits, chern)
    if r_lo == r_hi:
        notes.append("floor((delta-eps)n) == floor(delta n): escape rate is 0 at this n")
    return ConstantsReport(
        q, delta, domain, eps, n, ratio,
        float(expo_q), float(rate_q), float(rate_bits), float(chern), float(h), float(h) * 3 / 4,
        tuple(notes),
    )


@dataclass(frozen=True)
class CorrectionInfo:
    exponent: float
    gamma: Fraction
    notes: tuple


def correction_gamma(q: int, n: int, k: int, d: int, domain: str = "hamming", h=None) -> CorrectionInfo:
    """Rational upper bound on ``2^(-e n + 1)`` for the correction exponent e.

    Classical: ``e = max(h/2, k/(2n))``.  Symplectic: ``e = max(h'/2, (2n-k)/(2n))``
    with ``h' = 3h/4``.  Both maxima are taken literally.
    """
    notes = []
    if h is None:
        h = derive_constants(q, Fraction(d - 1, n), domain, n).h if d > 1 else 0.0
    if domain == "hamming":
        rate, other = h / 2, Fraction(k, 2 * n)
    else:
        rate, other = (3 * h / 4) / 2, Fraction(2 * n - k, 2 * n)
    if other >= rate:
        notes.append("literal max is attained by the dimension term, not the tail rate")
        expo_total = other * n - 1
    else:
        expo_total = rate * n - 1
    fl = math.floor(expo_total)
    gamma = Fraction(1, 2**fl) if fl >= 0 else Fraction(2 ** (-fl))
    if gamma >= 1:
        notes.append("correction term does not decay at this n")
    return CorrectionInfo(float(max(other, rate)), gamma, tuple(notes))
