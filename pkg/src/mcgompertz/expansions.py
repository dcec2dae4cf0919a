"""Series expansions: mixture weights, truncated cdf/pdf, series moments/MGF.

Everything here is a truncated series with an explicit convergence verdict.
The exact routines in mcg_core and the quadrature engines in shape are the
authorities; these expansions exist to make the mixture structure usable
(order-statistic series, component moments) and are never allowed to feed
downstream results silently when their flags are off.

The mixture weights use an iterative product for the generalized binomial
coefficient instead of a gamma-function ratio: the ratio form has poles at
integer b, exactly where the interesting sub-models live, while the product
continues through them and terminates the series in finitely many terms.
"""

import math
from dataclasses import dataclass

from scipy import integrate

from .core import McGParams, base_cdf, base_pdf
from .shape import mgf_numeric
from .specfun import Tolerance, expint_e1, log_beta

_OUTER_CAUCHY_TOL = 1e-6
_NORMALIZATION_TOL = 1e-10
_FIDELITY_REL_TOL = 1e-3


@dataclass(frozen=True)
class TruncationPolicy:
    """Budget for truncated series: hard term cap and a stop-size tolerance."""

    max_terms: int = 200
    term_tol: float = 1e-12

    def __post_init__(self):
        if self.max_terms < 1:
            raise ValueError("max_terms must be at least 1")
        if not self.term_tol > 0.0:
            raise ValueError("term_tol must be positive")


@dataclass(frozen=True)
class SeriesState:
    """A truncated series: coefficients, where it stopped, and a verdict.

    coeffs holds terms 0..truncation, so it always has truncation+1 entries;
    a converged verdict implies the last stored term met the tolerance.
    """

    coeffs: tuple
    truncation: int
    last_term: float
    converged: bool
    tol: Tolerance

    def __post_init__(self):
        if len(self.coeffs) != self.truncation + 1:
            raise ValueError("coeffs must have truncation+1 entries")
        if self.converged and abs(self.last_term) > self.tol.abs_tol:
            raise ValueError("converged state requires |last_term| <= abs_tol")


def _binom_terms(beta_minus_one, limit):
    """Signed generalized binomial terms s_i = (-1)^i C(beta-1, i).

    Built by the product s_i = s_{i-1} (i - beta) / i, which stays finite
    when beta is a positive integer (the sequence simply terminates at zero).
    Yields s_0 .. s_{limit}.
    """
    s = 1.0
    yield s
    for i in range(1, limit + 1):
        s *= (i - (beta_minus_one + 1.0)) / i
        yield s


def mixture_weights_p(p, policy=None):
    """Weights p_j of the cdf mixture F(y) = sum_j p_j G(y)^{a+jc}.

    p_j = (-1)^j C(b-1, j) / (B(a/c, b) (a/c + j)).  The state is converged
    when the last term met term_tol and the partial sum sits within 1e-10 of
    the known limit 1.
    """
    policy = policy or TruncationPolicy()
    alpha = p.a / p.c
    inv_beta = math.exp(-log_beta(alpha, p.b))
    coeffs = []
    total = 0.0
    last = math.inf
    for j, s in enumerate(_binom_terms(p.b - 1.0, policy.max_terms)):
        last = s * inv_beta / (alpha + j)
        coeffs.append(last)
        total += last
        if j > 0 and abs(last) <= policy.term_tol:
            break
    converged = abs(last) <= policy.term_tol and abs(1.0 - total) <= _NORMALIZATION_TOL
    return SeriesState(
        coeffs=tuple(coeffs),
        truncation=len(coeffs) - 1,
        last_term=last,
        converged=converged,
        tol=Tolerance(abs_tol=policy.term_tol),
    )


def mixture_cdf(p, y, policy=None):
    """Truncated mixture cdf sum_j p_j G(y)^{a+jc}.

    Returns (value, converged); converged is the weight-series verdict.
    """
    state = mixture_weights_p(p, policy)
    G = base_cdf(p.base, y)
    total = 0.0
    for j, w in enumerate(state.coeffs):
        total += w * G ** (p.a + j * p.c)
    return min(max(total, 0.0), 1.0), state.converged


def mixture_pdf(p, y, policy=None):
    """Truncated mixture pdf sum_j p_j (a+jc) g(y) G(y)^{a+jc-1}.

    Returns (value, converged); each component is a GG density with shape
    exponent a+jc.
    """
    state = mixture_weights_p(p, policy)
    G = base_cdf(p.base, y)
    g = base_pdf(p.base, y)
    total = 0.0
    for j, w in enumerate(state.coeffs):
        e = p.a + j * p.c
        total += w * e * g * G ** (e - 1.0)
    return max(total, 0.0), state.converged


def power_series_power(b_seq, m, r_max):
    """Coefficients of (sum_k b_k u^k)^m up to order r_max.

    Uses the classical recurrence c_0 = b_0^m,
    c_r = (r b_0)^{-1} sum_{k=1}^{r} [k(m+1) - r] b_k c_{r-k},
    whose bracket is fixed by matching brute-force polynomial convolution
    (the variant bracket [k(m+1) - r + k] already fails on (1+u)^2).
    """
    b_seq = list(b_seq)
    if not b_seq or b_seq[0] == 0.0:
        raise ValueError("power series must have a nonzero constant term")
    if m < 1 or int(m) != m:
        raise ValueError("m must be a positive integer")
    if r_max < 0:
        raise ValueError("r_max must be nonnegative")
    c = [float(b_seq[0]) ** m]
    for r in range(1, r_max + 1):
        acc = 0.0
        for k in range(1, min(r, len(b_seq) - 1) + 1):
            acc += (k * (m + 1) - r) * b_seq[k] * c[r - k]
        c.append(acc / (r * b_seq[0]))
    return tuple(c)


def cdf_power_coeffs(p, m, policy=None):
    """Coefficients q_r with F(y)^m = G(y)^{am} sum_r q_r G(y)^{rc}.

    Writes F = G^a sum_j p_j (G^c)^j and raises the inner power series to the
    m-th power through the recurrence above.  The verdict is inherited from
    the weight series.
    """
    state = mixture_weights_p(p, policy)
    r_max = m * state.truncation
    coeffs = power_series_power(state.coeffs, m, r_max)
    # the recurrence leaves rounding residue of relative size where exact
    # zeros belong, so the termination test scales with the coefficients
    scale = max(1.0, max(abs(q) for q in coeffs))
    tol = Tolerance(abs_tol=state.tol.abs_tol * scale)
    return SeriesState(
        coeffs=coeffs,
        truncation=r_max,
        last_term=coeffs[-1],
        converged=state.converged and abs(coeffs[-1]) <= tol.abs_tol,
        tol=tol,
    )


_mu_cache = {}


def _log_weight_moment(k, m):
    """mu_k(m) = integral over u in [1, inf) of (ln u)^k e^{-mu} du.

    k = 1 reduces to E1(m)/m; higher k fall back to adaptive quadrature.
    Cached: the moment series reuses the same (k, m) pairs across mixture
    components.
    """
    key = (k, m)
    if key not in _mu_cache:
        if k == 1:
            val = expint_e1(m) / m
        else:
            val, _ = integrate.quad(
                lambda u: math.log(u) ** k * math.exp(-m * u), 1.0, math.inf, limit=200
            )
        _mu_cache[key] = val
    return _mu_cache[key]


def component_moment(beta, k, theta, gamma, policy):
    """E[Y^k] for one GG component with shape exponent beta.

    Expands G^{beta-1} binomially: the i-th term carries the exponential
    factor e^{(i+1)theta/gamma} and the kernel mu_k((i+1)theta/gamma).
    Keeping the two factors separate mirrors the series as written, and makes
    the overflow of the exponential factor an explicit divergence instead of
    a silently rescued value.  Returns (value, converged).
    """
    rate = theta / gamma
    total = 0.0
    converged = False
    for i, s in enumerate(_binom_terms(beta - 1.0, policy.max_terms)):
        m_i = (i + 1.0) * rate
        if m_i > 700.0:
            return math.nan, False
        term = s * math.exp(m_i) * _log_weight_moment(k, m_i)
        if not math.isfinite(term):
            return math.nan, False
        total += term
        if i > 0 and abs(term) <= policy.term_tol * max(1.0, abs(total)):
            converged = True
            break
    scale = beta * rate / gamma**k
    return scale * total, converged


def moment_series(p, k, policy=None):
    """Series k-th moment: sum_j p_j E[Y_j^k] over the GG mixture components.

    Returns (value, converged).  Convergence requires the weight series, each
    component's binomial series, and the outer partial sums (Cauchy within
    1e-6 relative) to all settle; when an exponential factor overflows the
    value is withheld as nan with the flag off.  Where the flag is on the
    value agrees with the quadrature engine, which remains the authority.
    """
    if k < 1 or int(k) != k:
        raise ValueError("k must be a positive integer")
    policy = policy or TruncationPolicy()
    state = mixture_weights_p(p, policy)
    total = 0.0
    increment = math.inf
    all_inner = True
    for j, w in enumerate(state.coeffs):
        beta = p.a + j * p.c
        value, ok = component_moment(beta, k, p.theta, p.gamma, policy)
        if math.isnan(value):
            return math.nan, False
        all_inner = all_inner and ok
        increment = w * value
        total += increment
    outer_ok = abs(increment) <= _OUTER_CAUCHY_TOL * max(1.0, abs(total))
    return total, state.converged and all_inner and outer_ok


def _binom_general(x, k):
    """Generalized binomial coefficient C(x, k) by the falling-factorial product."""
    out = 1.0
    for i in range(k):
        out *= (x - i) / (i + 1.0)
    return out


def mgf_series(p, t, policy=None):
    """Series MGF built from generalized binomial coefficients in t/gamma.

    The double series factorizes: for each mixture component with shape
    exponent beta_j the summand carries no trace of the binomial index i, so
    the i-series is the bare alternating sum of C(beta_j - 1, i) terms and
    the k-series is sum_k C(t/gamma, k) k! / (beta_j theta/gamma)^{k+1}.
    The k-series terminates only when t/gamma is a nonnegative integer;
    otherwise the factorial growth wins and the series diverges.

    Returns (value, summed, faithful): summed says every component series
    reached its stopping tolerance, faithful additionally requires agreement
    with the quadrature MGF within 1e-3 relative.  The quadrature engine is
    the authority; a summed-but-unfaithful outcome is a recorded discrepancy
    of this series form, not a usable value.
    """
    policy = policy or TruncationPolicy()
    state = mixture_weights_p(p, policy)
    rate = p.theta / p.gamma
    ratio = t / p.gamma
    total = 0.0
    summed = state.converged
    for j, w in enumerate(state.coeffs):
        beta = p.a + j * p.c

        i_sum = 0.0
        i_ok = False
        for i, s in enumerate(_binom_terms(beta - 1.0, policy.max_terms)):
            i_sum += s
            if i > 0 and abs(s) <= policy.term_tol * max(1.0, abs(i_sum)):
                i_ok = True
                break

        denom = beta * rate
        k_sum = 0.0
        k_ok = False
        prev = math.inf
        kfac = 1.0
        for kk in range(policy.max_terms + 1):
            if kk > 0:
                kfac *= kk
            term = _binom_general(ratio, kk) * kfac / denom ** (kk + 1)
            if not math.isfinite(term):
                k_ok = False
                break
            k_sum += term
            if abs(term) <= policy.term_tol * max(1.0, abs(k_sum)):
                k_ok = True
                break
            if kk > 2 and abs(term) > abs(prev):
                k_ok = False
                break
            prev = term

        summed = summed and i_ok and k_ok
        total += w * denom * i_sum * k_sum

    if not summed:
        return math.nan, False, False
    reference = mgf_numeric(p, t)
    faithful = abs(total - reference) <= _FIDELITY_REL_TOL * max(1.0, abs(reference))
    return total, True, faithful
