"""The operator pipeline: M, convolution with the Riesz measure, and the
coordinate projection, composed into a closed-form Paley-type map.

On a plan with sequence (n_k), witness (alpha, beta), and constants tau,
ell_hat, the three stages act on a trigonometric polynomial f as

    M f      = d^alpha f + tau*ell_hat*d^beta f - corrections on -B_k,
    M_R f    = f * mu_R            (Fourier multiplier by Riesz coeffs),
    P        = restriction of the spectrum to Lambda = {n_k}.

Their composite collapses to   sum_k rho_k Q_S(n_k)^{1/2} f_hat(n_k) e_k
with rho_k = (sigma_alpha(n_k) + tau*ell_hat*sigma_beta(n_k)) /
(2 Q_S(n_k)^{1/2}); the module computes both sides independently so the
identity is testable.

The correction part of M is evaluated by membership tests against the
balls B_k (never by enumerating them), and its terms are built from the
same floating-point expressions as the derivative part, so the
cancellation at frequencies -n_k is exact, not approximate.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConstructionError
from .multiindex import derivative_multiplier, q_s_eval, symbol_eval
from .parallel import pmap
from .riesz import riesz_coeffs
from .trigpoly import TrigPoly, paley_l2_norm, random_trigpoly, sobolev_norm

log = logging.getLogger(__name__)


@dataclass
class OperatorPipeline:
    """A plan together with its Riesz measure and the constants rho_k."""

    plan: object
    riesz: object
    rho_k: list
    sqrt_q: list

    def in_sigma(self, m):
        """Membership in Sigma = {0} union of the balls B_k."""
        m = tuple(int(c) for c in m)
        if all(c == 0 for c in m):
            return True
        return ball_multiplicity(self.plan, m) > 0


def ball_multiplicity(plan, m):
    """Number of indices k with m in B_k (balls may overlap in
    principle; the correction in M counts each containment once)."""
    mult = 0
    for k in range(1, plan.K + 1):
        center = plan.sequence[k - 1]
        if sum(abs(a - b) for a, b in zip(m, center)) <= plan.radii[k - 1]:
            mult += 1
    return mult


def build_pipeline(plan):
    """Assemble the Riesz measure and the per-index constants rho_k."""
    riesz = riesz_coeffs(plan.sequence, plan.K)
    a, b = plan.witness.alpha, plan.witness.beta
    tau_ell = plan.tau * plan.ell_hat
    rho = []
    roots = []
    for n in plan.sequence:
        root = math.sqrt(float(q_s_eval(plan.smoothness, n)))
        val = (symbol_eval(a, n) + tau_ell * symbol_eval(b, n)) / (2.0 * root)
        rho.append(val)
        roots.append(root)
    return OperatorPipeline(plan=plan, riesz=riesz, rho_k=rho, sqrt_q=roots)


def paley_project(f, frequencies):
    """Restrict the coefficient map to the given frequencies."""
    keep = {tuple(int(c) for c in n) for n in frequencies}
    out = {n: v for n, v in f.coeffs.items() if n in keep}
    return TrigPoly(out, dim=f.dim)


def operator_m(f, pipeline):
    """Apply M in one pass over the spectrum of f.

    Each coefficient is multiplied by the derivative factor
    d^alpha + tau*ell_hat*d^beta, minus, when the negated frequency lies
    in some B_k, the matching symbol factor once per containment.  Both
    factors are computed through identical floating-point expressions,
    so at -n_k they cancel to exactly zero.
    """
    plan = pipeline.plan
    a, b = plan.witness.alpha, plan.witness.beta
    tau_ell = plan.tau * plan.ell_hat
    out = {}
    for nu, coeff in f.coeffs.items():
        factor = derivative_multiplier(a, nu) + tau_ell * derivative_multiplier(b, nu)
        mult = ball_multiplicity(plan, tuple(-c for c in nu))
        if mult:
            factor = factor - mult * (
                symbol_eval(a, nu) + tau_ell * symbol_eval(b, nu)
            )
        if factor != 0:
            out[nu] = factor * coeff
    return TrigPoly(out, dim=f.dim).chop()


def convolve_riesz(f, riesz):
    """Fourier multiplier by the Riesz coefficients."""
    out = {}
    for n, v in f.coeffs.items():
        w = riesz.multiplier(n)
        if w:
            out[n] = w * v
    return TrigPoly(out, dim=f.dim)


def coordinate_projection(f, pipeline):
    """Projection onto Lambda = (n_k).

    Inputs are expected to live on Sigma; frequencies outside it are
    legal (they arise in testing) and are reported at debug level, then
    projected away like any other non-Lambda frequency.
    """
    stray = [n for n in f.coeffs if not pipeline.in_sigma(n)]
    if stray:
        log.debug("projection input carries %d frequencies outside Sigma", len(stray))
    return paley_project(f, pipeline.plan.sequence)


def composite_apply(f, pipeline):
    """coordinate_projection(convolve_riesz(operator_m(f)))."""
    return coordinate_projection(
        convolve_riesz(operator_m(f, pipeline), pipeline.riesz), pipeline
    )


def composite_closed_form(f, pipeline):
    """The right-hand side sum_k rho_k Q_S(n_k)^{1/2} f_hat(n_k) e_{n_k},
    computed without running the operators."""
    out = {}
    for k, n in enumerate(pipeline.plan.sequence):
        if n in f.coeffs:
            out[n] = pipeline.rho_k[k] * pipeline.sqrt_q[k] * f.coeffs[n]
    return TrigPoly(out, dim=f.dim)


def composite_relative_error(f, pipeline):
    """L2-coefficient distance between pipeline and closed form,
    relative to the closed form (or to f when the closed form is 0)."""
    got = composite_apply(f, pipeline)
    want = composite_closed_form(f, pipeline)
    num = _coeff_l2(got - want)
    den = _coeff_l2(want)
    if den == 0.0:
        den = _coeff_l2(f)
    return num / den if den else num


def _coeff_l2(f):
    total = 0.0
    for v in f.coeffs.values():
        if isinstance(v, np.ndarray):
            total += float(np.sum(np.abs(v) ** 2))
        else:
            total += abs(v) ** 2
    return math.sqrt(total)


# ----------------------------------------------------------------------
# empirical Paley constants


def paley_ratio(f, smoothness, frequencies, n_points=None):
    """paley_l2_norm over sobolev_norm (p = 1), the per-function Paley
    quotient; undefined for the zero polynomial."""
    if len(f) == 0:
        raise ValueError("Paley ratio undefined for the zero polynomial")
    num = paley_l2_norm(f, smoothness, frequencies)
    den = sobolev_norm(f, smoothness, 1, n_points)
    return num / den


@dataclass
class PaleySampler:
    """Sampling policy for estimate_paley_constant.

    support: candidate frequencies; each sample draws ``terms`` of them
    without replacement.  always: frequencies included in every sample
    (typically the grid-reachable part of Lambda).  mdim is one matrix
    dimension or a tuple of them; m = 1 still draws 1x1 matrices so
    every dimension goes through the same code path.  grid_n overrides
    the quadrature resolution, which is how plans whose exact Nyquist
    grid is out of reach stay testable.
    """

    count: int = 100
    support: tuple = ()
    always: tuple = ()
    terms: int = 8
    mdim: object = 1
    seed: int = 0
    grid_n: int = None

    def mdims(self):
        if isinstance(self.mdim, int):
            return (self.mdim,)
        return tuple(int(m) for m in self.mdim)


def estimate_paley_constant(smoothness, frequencies, sampler):
    """Empirical sup of the Paley quotient over seeded random samples.

    Deterministic given the sampler; returns the overall sup, where it
    was attained, and a per-matrix-dimension table.  Sample streams
    depend only on (seed, m, index), never on count, so enlarging the
    sample can only raise the sup.  An observed sup is a lower bound on
    the true constant, never a proof of boundedness.
    """
    if sampler.count < 1:
        raise ValueError("need at least one sample")
    support = [tuple(int(c) for c in n) for n in sampler.support]
    always = [tuple(int(c) for c in n) for n in sampler.always]
    lam = [tuple(int(c) for c in n) for n in frequencies]

    def one(job):
        m, i = job
        rng = np.random.default_rng([sampler.seed, m, i])
        freqs = list(always)
        if support:
            take = min(sampler.terms, len(support))
            idx = rng.choice(len(support), size=take, replace=False)
            freqs.extend(support[j] for j in idx)
        coeff_seed = int(rng.integers(0, 2**31))
        f = random_trigpoly(freqs, mdim=m, seed=coeff_seed)
        return paley_ratio(f, smoothness, lam, n_points=sampler.grid_n)

    mdims = sampler.mdims()
    jobs = [(m, i) for m in mdims for i in range(sampler.count)]
    ratios = pmap(one, jobs)
    per_dim = {}
    for pos, m in enumerate(mdims):
        block = ratios[pos * sampler.count:(pos + 1) * sampler.count]
        best = max(range(sampler.count), key=lambda i: block[i])
        per_dim[m] = {"sup_ratio": block[best], "argmax_index": best}
    top = max(mdims, key=lambda m: per_dim[m]["sup_ratio"])
    return {
        "sup_ratio": per_dim[top]["sup_ratio"],
        "argmax_index": per_dim[top]["argmax_index"],
        "argmax_mdim": top,
        "per_dim": per_dim,
        "count": sampler.count,
        "mdim": sampler.mdim,
        "seed": sampler.seed,
    }
