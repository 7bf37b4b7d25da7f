"""Lacunary frequency sequences on the witness power curve.

Given a smoothness set with a parity-splitting witness (alpha, beta, c),
frequencies are taken on the curve n(j) = round(t^{c_j}).  The pairings
<alpha, c> = <beta, c> = 1 make |sigma_alpha(n)| and |sigma_beta(n)|
grow like t, while <gamma, c> <= 1 caps every other symbol, so the
normalized symbol sizes rho_hat stay bounded away from zero along the
whole sequence.

The builder walks t_k = t0 * q^{k-1} and doubles t_k greedily until
  * the ball radius D_k = sum of all coordinates of n_1..n_{k-1} is
    strictly below min_j n_k(j)   (condition (i)),
  * the first coordinates grow by a factor >= 3 (Hadamard lacunarity),
  * min_j n_k(j) strictly increases.
All lattice arithmetic is exact (Python integers / Fractions); floats
appear only in reported sums.

The module also carries the finite-truncation checks of the four
sequence conditions, and the stability quantities q1, q2, q3 of the
fundamental-polynomial ratio together with an empirical search for the
threshold rho(D, eps).
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    ConstructionError,
    EnumerationLimitError,
    SingularFrequencyError,
)
from .multiindex import Smoothness, order, q_s_eval, symbol_abs_int, symbol_eval
from .property_o import PropertyOWitness, verify_witness

_PHASES = (1 + 0j, 1j, -1 + 0j, -1j)


def compute_tau(alpha, beta):
    """i^{|alpha| - |beta|}; requires opposite parity, so the value is
    i or -i."""
    e = order(alpha) - order(beta)
    if e % 2 == 0:
        raise ValueError("alpha and beta have equal total-order parity")
    return _PHASES[e % 4]


def integer_nth_root(x, n):
    """floor(x^{1/n}) for non-negative integer x, exact."""
    if x < 0 or n < 1:
        raise ValueError("bad root arguments")
    if x == 0:
        return 0
    r = 1 << ((x.bit_length() + n - 1) // n)
    while True:
        r2 = ((n - 1) * r + x // r ** (n - 1)) // n
        if r2 >= r:
            break
        r = r2
    while (r + 1) ** n <= x:
        r += 1
    while r**n > x:
        r -= 1
    return r


def round_rational_power(t, c):
    """round(t^c) for positive rational t and non-negative rational c,
    computed exactly (ties round up)."""
    t = Fraction(t)
    c = Fraction(c)
    if t <= 0 or c < 0:
        raise ValueError("need t > 0 and c >= 0")
    p, q = c.numerator, c.denominator
    num = t.numerator**p
    den = t.denominator**p
    k = integer_nth_root(num // den, q)
    # round up when t^c >= k + 1/2, i.e. 2^q * num >= (2k+1)^q * den
    if (2**q) * num >= (2 * k + 1) ** q * den:
        k += 1
    return k


# ----------------------------------------------------------------------
# plan construction


@dataclass
class EllEstimate:
    """|sigma_alpha(n_K)| / |sigma_beta(n_K)| with last-step drift."""

    exact: Fraction
    value: float
    drift: float


@dataclass
class ConditionReport:
    """Finite-truncation verdicts for the four sequence conditions.

    sum_iii and sum_iv are the raw truncated sums compared against 1/2
    and 1.  Balls whose lattice enumeration would exceed ``cap`` points
    are skipped and listed in iv_skipped, so bound_iv_met refers to the
    evaluated truncation only.
    """

    cond_i: bool
    ell_hat: float
    ell_drift: float
    sum_iii: float
    sum_iv: float
    bound_iii_met: bool
    bound_iv_met: bool
    iv_evaluated: list
    iv_skipped: list
    cap: int


@dataclass
class LacunaryPlan:
    """Everything the construction produces for one smoothness set."""

    smoothness: Smoothness
    witness: PropertyOWitness
    K: int
    t0: Fraction
    q: Fraction
    ts: list
    sequence: list
    radii: list
    tau: complex
    ell_exact: Fraction
    ell_hat: float
    ell_drift: float
    rho_hat: float
    report: ConditionReport = field(default=None)


def estimate_ell(alpha, beta, sequence):
    """Symbol-size ratio at the last index, with relative drift from the
    previous index (zero drift for a single-term sequence)."""
    if not sequence:
        raise ValueError("empty sequence")
    for n in sequence:
        if any(c == 0 for c in n):
            raise ValueError("sequence point with zero coordinate")

    def ratio(n):
        return Fraction(symbol_abs_int(alpha, n), symbol_abs_int(beta, n))

    ell = ratio(sequence[-1])
    drift = 0.0
    if len(sequence) > 1:
        prev = ratio(sequence[-2])
        drift = abs(float((ell - prev) / ell))
    return EllEstimate(exact=ell, value=float(ell), drift=drift)


def bk_radius(sequence, k):
    """D_k = sum of all coordinates of n_1 .. n_{k-1}; D_1 = 0."""
    if not 1 <= k <= len(sequence):
        raise ValueError("index k=%d out of range" % k)
    return sum(sum(n) for n in sequence[: k - 1])


def ball_count(d, radius):
    """Number of lattice points in the closed l1 ball of the given
    radius in Z^d: sum_i 2^i C(d,i) C(radius,i)."""
    total = 0
    for i in range(0, min(d, radius) + 1):
        total += 2**i * math.comb(d, i) * math.comb(radius, i)
    return total


def _offsets(d, budget):
    # offsets with l1 norm <= budget, lexicographic
    if d == 1:
        for e in range(-budget, budget + 1):
            yield (e,)
        return
    for e in range(-budget, budget + 1):
        for rest in _offsets(d - 1, budget - abs(e)):
            yield (e,) + rest


def bk_enumerate(sequence, k, cap=10**7):
    """All lattice points of B_k (l1 ball of radius D_k around n_k), in
    lexicographic order.  Refuses enumerations larger than cap."""
    center = sequence[k - 1]
    radius = bk_radius(sequence, k)
    d = len(center)
    count = ball_count(d, radius)
    if count > cap:
        raise EnumerationLimitError(
            "B_%d has %d lattice points, cap is %d" % (k, count, cap),
            count,
        )
    for off in _offsets(d, radius):
        yield tuple(c + e for c, e in zip(center, off))


def build_sequence(S, witness, K, t0, q, cap=10**7, max_doublings=10000):
    """Construct a K-term plan on the witness power curve.

    t0 and q (both > 1) set the nominal schedule t_k = t0 * q^{k-1};
    each t_k is then doubled until the plan invariants hold at index k.
    The attached ConditionReport uses the given enumeration cap with
    skip semantics (see check_conditions).
    """
    if not isinstance(S, Smoothness):
        S = Smoothness.from_indices(S)
    if isinstance(witness, (tuple, list)):
        witness = PropertyOWitness(
            alpha=tuple(witness[0]),
            beta=tuple(witness[1]),
            c=tuple(Fraction(v) for v in witness[2]),
            t_star=min(Fraction(v) for v in witness[2]),
        )
    if not verify_witness(S, witness.alpha, witness.beta, witness.c):
        raise ConstructionError("witness fails exact verification")
    if K < 1:
        raise ConstructionError("cannot build an empty plan (K >= 1)")
    t0 = Fraction(t0)
    q = Fraction(q)
    if t0 <= 1 or q <= 1:
        raise ConstructionError("need t0 > 1 and q > 1")

    c = witness.c
    ts = []
    points = []
    radii = []
    d_running = 0
    for k in range(1, K + 1):
        t = t0 * q ** (k - 1)
        doubles = 0
        while True:
            n = tuple(max(1, round_rational_power(t, cj)) for cj in c)
            if _admissible(n, points, d_running):
                break
            t *= 2
            doubles += 1
            if doubles > max_doublings:
                raise ConstructionError(
                    "doubling did not reach an admissible n_%d" % k
                )
        ts.append(t)
        radii.append(d_running)
        points.append(n)
        d_running += sum(n)

    ell = estimate_ell(witness.alpha, witness.beta, points)
    rho = _rho_hat(S, witness, points)
    plan = LacunaryPlan(
        smoothness=S,
        witness=witness,
        K=K,
        t0=t0,
        q=q,
        ts=ts,
        sequence=points,
        radii=radii,
        tau=compute_tau(witness.alpha, witness.beta),
        ell_exact=ell.exact,
        ell_hat=ell.value,
        ell_drift=ell.drift,
        rho_hat=rho,
    )
    plan.report = check_conditions(S, plan, cap=cap)
    return plan


def _admissible(n, points, d_running):
    if not points:
        return True
    prev = points[-1]
    if min(n) <= d_running:  # condition (i): D_k < min_j n_k(j)
        return False
    if n[0] < 3 * prev[0]:  # first-coordinate Hadamard ratio
        return False
    if min(n) <= min(prev):  # strict growth of the minimum
        return False
    return True


def _rho_hat(S, witness, points):
    # min over k and gamma in {alpha, beta} of |sigma_gamma| / Q_S^{1/2}
    worst = None
    for n in points:
        qn = q_s_eval(S, n)
        for gamma in (witness.alpha, witness.beta):
            r = Fraction(symbol_abs_int(gamma, n) ** 2, qn)
            if worst is None or r < worst:
                worst = r
    return math.sqrt(float(worst))


def check_conditions(S, plan, cap=10**7, on_cap="skip"):
    """Evaluate conditions (i)-(iv) for the plan at its truncation.

    Condition (i) and the l1 balls are exact integer work; the sums of
    (iii) and (iv) are reported as floats against the thresholds 1/2
    and 1.  Balls larger than cap points are skipped and recorded
    (on_cap="skip", the default) or raise (on_cap="raise").
    """
    if on_cap not in ("skip", "raise"):
        raise ValueError("on_cap must be 'skip' or 'raise'")
    alpha, beta = plan.witness.alpha, plan.witness.beta
    seq = plan.sequence
    cond_i = all(
        plan.radii[k - 1] < min(seq[k - 1]) for k in range(2, plan.K + 1)
    )

    ell = plan.ell_exact
    sum_iii = 0.0
    for n in seq:
        num = abs(Fraction(symbol_abs_int(alpha, n)) - ell * symbol_abs_int(beta, n))
        sum_iii += float(num) / math.sqrt(float(q_s_eval(S, n)))

    tau_ell = plan.tau * float(ell)
    sum_iv = 0.0
    evaluated = []
    skipped = []
    for k in range(1, plan.K + 1):
        count = ball_count(len(seq[0]), plan.radii[k - 1])
        if count > cap:
            if on_cap == "raise":
                raise EnumerationLimitError(
                    "B_%d has %d lattice points, cap is %d" % (k, count, cap),
                    count,
                )
            skipped.append(k)
            continue
        for m in bk_enumerate(seq, k, cap=cap):
            # condition (i) guarantees every ball point stays in the
            # open positive orthant
            assert all(c > 0 for c in m), (k, m)
            neg = tuple(-c for c in m)
            num = abs(symbol_eval(alpha, neg) + tau_ell * symbol_eval(beta, neg))
            sum_iv += num / math.sqrt(float(q_s_eval(S, m)))
        evaluated.append(k)

    return ConditionReport(
        cond_i=cond_i,
        ell_hat=plan.ell_hat,
        ell_drift=plan.ell_drift,
        sum_iii=sum_iii,
        sum_iv=sum_iv,
        bound_iii_met=sum_iii < 0.5,
        bound_iv_met=sum_iv < 1.0,
        iv_evaluated=evaluated,
        iv_skipped=skipped,
        cap=cap,
    )


# ----------------------------------------------------------------------
# stability of the fundamental-polynomial ratio


def techprop_quantities(S, m, n):
    """The three closeness quantities between frequencies m and n.

    q1 = |1 - Q_S(n)/Q_S(m)|; q2 and q3 are the l2 sizes of the
    normalized symbol differences, unsigned and signed respectively.
    """
    if not isinstance(S, Smoothness):
        S = Smoothness.from_indices(S)
    m = tuple(int(c) for c in m)
    n = tuple(int(c) for c in n)
    qm = q_s_eval(S, m)
    qn = q_s_eval(S, n)
    if qm == 0 or qn == 0:
        raise SingularFrequencyError(
            "Q_S vanishes at a frequency with a zero coordinate"
        )
    q1 = abs(1.0 - float(Fraction(qn, qm)))
    sqm = math.sqrt(float(qm))
    sqn = math.sqrt(float(qn))
    q2sq = 0.0
    q3sq = 0.0
    for gamma in S:
        am = symbol_abs_int(gamma, m) / sqm
        an = symbol_abs_int(gamma, n) / sqn
        q2sq += (am - an) ** 2
        q3sq += abs(symbol_eval(gamma, m) / sqm - symbol_eval(gamma, n) / sqn) ** 2
    return q1, math.sqrt(q2sq), math.sqrt(q3sq)


@dataclass
class RhoSampler:
    """Sweep configuration for estimate_rho_de.

    band: candidate base points n run over [rho, rho+band]^d.
    pair_cap: above this many (n, m) pairs the n's are subsampled
    deterministically.  rho_limit: give up past this candidate.
    """

    band: int = 16
    pair_cap: int = 500000
    seed: int = 0
    rho_limit: int = 2**20


def estimate_rho_de(S, D, eps, sampler=None):
    """Least rho in {2, 4, 8, ...} such that every tested pair (n, m)
    with min_j n(j) >= rho and |n - m|_1 <= D has q1 < eps and
    q2^2, q3^2 < eps^2.

    The sweep is restricted to the positive orthant: every |sigma_gamma|
    is even in each coordinate, so the quantities only depend on the
    coordinate magnitudes.  The answer is empirical (a sweep over a
    finite band), not a proof.
    """
    if not isinstance(S, Smoothness):
        S = Smoothness.from_indices(S)
    if D < 0 or not 0 < eps < 1:
        raise ValueError("need D >= 0 and eps in (0, 1)")
    sampler = sampler or RhoSampler()
    d = S.dim
    eps2 = eps * eps
    rho = 2
    tested = 0
    per_n = ball_count(d, D)
    while rho <= sampler.rho_limit:
        ok = True
        for n in _band_points(d, rho, sampler, per_n):
            for off in _offsets(d, D):
                m = tuple(a + b for a, b in zip(n, off))
                if any(c <= 0 for c in m):
                    continue
                q1, q2, q3 = techprop_quantities(S, m, n)
                tested += 1
                if q1 >= eps or q2 * q2 >= eps2 or q3 * q3 >= eps2:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return {
                "rho": rho,
                "pairs_tested": tested,
                "band": sampler.band,
                "note": "empirical, not a proof",
            }
        rho *= 2
    raise ConstructionError(
        "no rho <= %d passed the (D=%d, eps=%g) sweep" % (sampler.rho_limit, D, eps)
    )


def _band_points(d, rho, sampler, per_n):
    import itertools

    import numpy as np

    axis = range(rho, rho + sampler.band + 1)
    total = (sampler.band + 1) ** d
    pts = itertools.product(*([axis] * d))
    if total * per_n <= sampler.pair_cap:
        yield from pts
        return
    keep = max(1, sampler.pair_cap // per_n)
    rng = np.random.default_rng(sampler.seed + rho)
    idx = set(rng.choice(total, size=min(keep, total), replace=False).tolist())
    for i, p in enumerate(pts):
        if i in idx:
            yield p
