"""Sparse trigonometric polynomials on the d-torus, scalar or matrix valued.

A polynomial is a finite sum  f(x) = sum_n c_n e^{i<n,x>}  stored as a
dict from integer frequency tuples to coefficients.  Coefficients are
either complex scalars or square complex matrices of one common size;
matrix coefficients are how operator-valued (completely bounded) bounds
are probed.

Frequencies are plain Python integers, so lattice arithmetic stays exact
far beyond double range; floating point enters only through coefficient
values and grid evaluation.

Quadrature uses the uniform grid x_t = -pi + 2*pi*t/N per axis with
weight N^{-d}.  The rule integrates any polynomial with no nonzero
frequency divisible by N exactly, so N >= 2*maxfreq(f) + 1 makes every
product of two factors of f exact; the default N = 4*maxfreq + 1 leaves
headroom.  Grid values can be produced either by direct summation over
the nonzero coefficients or by an FFT after folding coefficients into
bins mod N; the two agree to rounding at any N, and the cheaper one is
picked by density.
"""

import functools
import math

import numpy as np

from .multiindex import derivative_multiplier, q_s_eval

CHOP = 1e-15

# density of nonzero coefficients below which direct summation beats the FFT
_DIRECT_DENSITY = 0.01


def grid_points(n):
    """The N quadrature nodes -pi + 2*pi*t/N on one axis."""
    return -np.pi + 2.0 * np.pi * np.arange(n) / n


def _coerce_value(v):
    if isinstance(v, np.ndarray):
        a = np.asarray(v, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("matrix coefficients must be square 2-d arrays")
        return a
    return complex(v)


class TrigPoly:
    """Finite trigonometric polynomial with sparse coefficients.

    Parameters
    ----------
    coeffs : dict
        Maps frequency tuples (ints) to complex scalars or to m x m
        complex matrices.  All values must share one shape.
    dim : int, optional
        Ambient dimension; required when ``coeffs`` is empty.
    """

    def __init__(self, coeffs, dim=None):
        clean = {}
        mdim = None
        seen_scalar = False
        for n, v in coeffs.items():
            key = tuple(int(c) for c in n)
            if dim is None:
                dim = len(key)
            elif len(key) != dim:
                raise ValueError("frequency %r has wrong dimension" % (key,))
            val = _coerce_value(v)
            if isinstance(val, np.ndarray):
                if seen_scalar or (mdim is not None and val.shape[0] != mdim):
                    raise ValueError("mixed coefficient shapes")
                mdim = val.shape[0]
                if np.any(val != 0):
                    clean[key] = val
            else:
                if mdim is not None:
                    raise ValueError("mixed coefficient shapes")
                seen_scalar = True
                if val != 0:
                    clean[key] = val
        if dim is None:
            raise ValueError("dimension unknown for empty polynomial")
        self.dim = dim
        self.mdim = mdim
        self.coeffs = clean

    # ------------------------------------------------------------------
    # basic queries

    def coeff(self, n):
        """Coefficient at frequency n (zero scalar/matrix if absent)."""
        key = tuple(int(c) for c in n)
        if key in self.coeffs:
            return self.coeffs[key]
        if self.mdim is None:
            return 0j
        return np.zeros((self.mdim, self.mdim), dtype=complex)

    def spectrum(self):
        """Frozenset of frequencies carrying a nonzero coefficient."""
        return frozenset(self.coeffs)

    def maxfreq(self):
        """max_j |n_j| over the spectrum, 0 for the zero polynomial."""
        if not self.coeffs:
            return 0
        return max(max(abs(c) for c in n) for n in self.coeffs)

    def is_matrix_valued(self):
        return self.mdim is not None

    def __len__(self):
        return len(self.coeffs)

    def __repr__(self):
        kind = "scalar" if self.mdim is None else "%dx%d" % (self.mdim, self.mdim)
        return "TrigPoly(dim=%d, %s, %d terms)" % (self.dim, kind, len(self.coeffs))

    # ------------------------------------------------------------------
    # algebra

    def chop(self, tol=CHOP):
        """Drop coefficients whose largest entry is at most tol."""
        out = {}
        for n, v in self.coeffs.items():
            mag = np.max(np.abs(v)) if isinstance(v, np.ndarray) else abs(v)
            if mag > tol:
                out[n] = v
        return TrigPoly(out, dim=self.dim)

    def _check_compatible(self, other):
        if self.dim != other.dim or self.mdim != other.mdim:
            raise ValueError("incompatible polynomials")

    def __add__(self, other):
        self._check_compatible(other)
        out = dict(self.coeffs)
        for n, v in other.coeffs.items():
            out[n] = out[n] + v if n in out else v
        return TrigPoly(out, dim=self.dim).chop()

    def __sub__(self, other):
        return self + (-1) * other

    def __neg__(self):
        return (-1) * self

    def __mul__(self, other):
        if isinstance(other, TrigPoly):
            return self.convolve(other)
        out = {n: other * v for n, v in self.coeffs.items()}
        return TrigPoly(out, dim=self.dim).chop()

    __rmul__ = __mul__

    def convolve(self, other):
        """Product of the two functions; coefficient maps convolve.

        Matrix times matrix multiplies the coefficients as matrices, so
        the result is the pointwise matrix product.
        """
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        if (self.mdim is None) != (other.mdim is None):
            raise ValueError("cannot multiply scalar by matrix polynomial")
        out = {}
        for n1, v1 in self.coeffs.items():
            for n2, v2 in other.coeffs.items():
                key = tuple(a + b for a, b in zip(n1, n2))
                prod = v1 @ v2 if self.mdim is not None else v1 * v2
                out[key] = out[key] + prod if key in out else prod
        return TrigPoly(out, dim=self.dim).chop()

    def conj(self):
        """Pointwise adjoint: coefficient at n becomes the conjugate
        (transpose) of the coefficient at -n."""
        out = {}
        for n, v in self.coeffs.items():
            key = tuple(-c for c in n)
            out[key] = v.conj().T if isinstance(v, np.ndarray) else v.conjugate()
        return TrigPoly(out, dim=self.dim)

    def derivative(self, gamma):
        """Partial derivative of multi-index gamma (0^0 = 1 convention)."""
        out = {}
        for n, v in self.coeffs.items():
            m = derivative_multiplier(gamma, n)
            if m != 0:
                out[n] = m * v
        return TrigPoly(out, dim=self.dim).chop()

    # ------------------------------------------------------------------
    # evaluation and quadrature

    def default_grid_n(self):
        """Default nodes per axis: 4*maxfreq + 1."""
        return 4 * int(self.maxfreq()) + 1

    def evaluate(self, n_points=None, method="auto"):
        """Values on the uniform grid, shape (N,)*dim (+(m, m)).

        method is "direct", "fft", or "auto" (density decides).  Both
        routes produce identical values up to rounding at any N.
        """
        n = int(n_points) if n_points is not None else self.default_grid_n()
        if n < 1:
            raise ValueError("need at least one grid point per axis")
        if method == "auto":
            density = len(self.coeffs) / float(n**self.dim)
            method = "direct" if density < _DIRECT_DENSITY else "fft"
        if method == "direct":
            return self._eval_direct(n)
        if method == "fft":
            return self._eval_fft(n)
        raise ValueError("unknown evaluation method %r" % (method,))

    def _eval_direct(self, n):
        pts = grid_points(n)
        shape = (n,) * self.dim
        if self.mdim is None:
            out = np.zeros(shape, dtype=complex)
        else:
            out = np.zeros(shape + (self.mdim, self.mdim), dtype=complex)
        for freq, c in self.coeffs.items():
            axes = [np.exp(1j * float(fj) * pts) for fj in freq]
            phase = functools.reduce(np.multiply.outer, axes)
            if self.mdim is None:
                out += c * phase
            else:
                out += phase[..., None, None] * c
        return out

    def _eval_fft(self, n):
        # e^{i k x_t} = (-1)^k * e^{2 pi i k t / N} on this grid, so fold
        # each coefficient, signed by frequency parity, into its bin mod N
        shape = (n,) * self.dim
        if self.mdim is None:
            acc = np.zeros(shape, dtype=complex)
        else:
            acc = np.zeros(shape + (self.mdim, self.mdim), dtype=complex)
        for freq, c in self.coeffs.items():
            sign = -1.0 if sum(freq) % 2 else 1.0
            idx = tuple(int(fj % n) for fj in freq)
            acc[idx] = acc[idx] + sign * c
        vals = np.fft.ifftn(acc, axes=tuple(range(self.dim)))
        return vals * float(n**self.dim)


# ----------------------------------------------------------------------
# norms


def lp_norm(f, p, n_points=None):
    """L^p norm of a scalar polynomial by grid quadrature (p in [1, inf])."""
    if f.is_matrix_valued():
        raise ValueError("lp_norm is for scalar polynomials; see s1_l1_norm")
    vals = np.abs(f.evaluate(n_points))
    if math.isinf(p):
        return float(vals.max()) if vals.size else 0.0
    if p < 1:
        raise ValueError("p must be at least 1")
    w = 1.0 / vals.size
    return float((vals**p).sum() * w) ** (1.0 / p)


def trace_norm(a):
    """Sum of singular values of one matrix."""
    a = np.asarray(a, dtype=complex)
    return float(np.linalg.svd(a, compute_uv=False).sum())


def s1_l1_norm(f, n_points=None):
    """Integral over the torus of the trace norm of f(x).

    Scalar polynomials are treated as 1 x 1 matrices, so this coincides
    with the plain L^1 norm there.
    """
    if not f.is_matrix_valued():
        return lp_norm(f, 1, n_points)
    vals = f.evaluate(n_points)
    flat = vals.reshape(-1, f.mdim, f.mdim)
    sv = np.linalg.svd(flat, compute_uv=False)
    return float(sv.sum() / flat.shape[0])


def sobolev_norm(f, smoothness, p=1, n_points=None):
    """(sum_{gamma in S} ||d^gamma f||_p^p)^{1/p}.

    For matrix-valued f only p = 1 is supported, with the pointwise trace
    norm playing the role of the absolute value.
    """
    if f.is_matrix_valued() and p != 1:
        raise ValueError("matrix-valued Sobolev norm implemented for p=1 only")
    total = 0.0
    for gamma in smoothness:
        g = f.derivative(gamma)
        if f.is_matrix_valued():
            total += s1_l1_norm(g, n_points)
        else:
            total += lp_norm(g, p, n_points) ** p
    return total ** (1.0 / p)


def paley_l2_norm(f, smoothness, frequencies):
    """Weighted coefficient norm (sum_{n} Q_S(n) |f_hat(n)|^2)^{1/2} over
    the given frequencies; matrix coefficients enter by Frobenius norm."""
    total = 0.0
    for n in frequencies:
        key = tuple(int(c) for c in n)
        if key not in f.coeffs:
            continue
        v = f.coeffs[key]
        mag2 = float(np.sum(np.abs(v) ** 2)) if isinstance(v, np.ndarray) else abs(v) ** 2
        total += float(q_s_eval(smoothness, key)) * mag2
    return math.sqrt(total)


def random_trigpoly(frequencies, mdim=None, seed=0):
    """Independent standard complex Gaussian coefficients on the given
    frequencies (matrix entries i.i.d. when mdim is set)."""
    rng = np.random.default_rng(seed)
    freqs = [tuple(int(c) for c in n) for n in frequencies]
    out = {}
    for n in freqs:
        if mdim is None:
            out[n] = complex(rng.standard_normal() + 1j * rng.standard_normal()) / math.sqrt(2)
        else:
            re = rng.standard_normal((mdim, mdim))
            im = rng.standard_normal((mdim, mdim))
            out[n] = (re + 1j * im) / math.sqrt(2)
    if not freqs:
        raise ValueError("need at least one frequency")
    return TrigPoly(out)


def spectrum(f):
    """Frozenset of frequencies with nonzero coefficients."""
    return f.spectrum()
