"""Multi-indices, smoothness sets, and the symbols attached to them.

A smoothness set is a finite collection of d-dimensional multi-indices
that contains the zero index and is closed under coordinatewise decrease.
Every spectral object in the package is driven by the symbols

    sigma_gamma(x) = i^{|gamma|} * x^gamma,

evaluated on integer frequencies x, together with the fundamental
polynomial Q_S(x) = sum_{gamma in S} |sigma_gamma(x)|^2.

Convention: sigma_gamma(x) is defined to be 0 whenever any coordinate of
x is zero, for every gamma including gamma = 0.  The differentiation
multiplier uses the opposite convention 0^0 = 1, so the two agree only on
frequencies with all coordinates nonzero.
"""

from dataclasses import dataclass
from itertools import product

from .errors import InvalidSmoothnessError

# Powers of the imaginary unit, indexed by |gamma| mod 4.
_PHASES = (1 + 0j, 1j, -1 + 0j, -1j)


def order(gamma):
    """Total order |gamma| = gamma_1 + ... + gamma_d."""
    return sum(gamma)


def multi_le(gamma, delta):
    """Coordinatewise comparison gamma <= delta."""
    return len(gamma) == len(delta) and all(g <= e for g, e in zip(gamma, delta))


def validate_indices(indices):
    """Check that ``indices`` is a nonempty collection of equal-length
    tuples of non-negative integers.  Returns (dimension, set of tuples).
    """
    idx = {tuple(g) for g in indices}
    if not idx:
        raise InvalidSmoothnessError("empty multi-index collection")
    dims = {len(g) for g in idx}
    if len(dims) != 1:
        raise InvalidSmoothnessError("mixed dimensions: %s" % sorted(dims))
    d = dims.pop()
    if d == 0:
        raise InvalidSmoothnessError("zero-dimensional multi-indices")
    for g in idx:
        if any((not isinstance(c, int)) or isinstance(c, bool) or c < 0 for c in g):
            raise InvalidSmoothnessError("bad multi-index %r" % (g,))
    return d, idx


def saturate(indices):
    """Downward closure: every delta <= gamma for some gamma in the input.

    The result always contains the zero index, so saturating any valid
    collection yields a smoothness set.
    """
    d, idx = validate_indices(indices)
    closed = set()
    for g in idx:
        for delta in product(*(range(c + 1) for c in g)):
            closed.add(delta)
    return closed


def is_smoothness(indices):
    """True when ``indices`` is a smoothness set: finite, downward closed,
    containing the zero index.  Raises InvalidSmoothnessError on malformed
    input (mixed dimensions, negative entries, empty collection).
    """
    d, idx = validate_indices(indices)
    if (0,) * d not in idx:
        return False
    return idx == saturate(idx)


@dataclass(frozen=True)
class Smoothness:
    """A validated smoothness set.

    Attributes
    ----------
    dim : int
        Ambient dimension d.
    indices : frozenset of tuple
        The member multi-indices.
    """

    dim: int
    indices: frozenset

    @classmethod
    def from_indices(cls, indices):
        d, idx = validate_indices(indices)
        if not is_smoothness(idx):
            raise InvalidSmoothnessError(
                "not downward closed or missing the zero index: %s" % sorted(idx)
            )
        return cls(dim=d, indices=frozenset(idx))

    def __iter__(self):
        return iter(sorted(self.indices, reverse=True))

    def __len__(self):
        return len(self.indices)

    def __contains__(self, gamma):
        return tuple(gamma) in self.indices

    def sorted_indices(self):
        """Members in descending lexicographic order (monomial display order)."""
        return sorted(self.indices, reverse=True)


def symbol_abs_int(gamma, x):
    """|x^gamma| as an exact integer, 0 if any coordinate of x is zero.

    Exactness matters: frequencies produced by the lacunary construction
    overflow double precision long before the ratios of interest do.
    """
    if any(c == 0 for c in x):
        return 0
    out = 1
    for g, c in zip(gamma, x):
        out *= abs(c) ** g
    return out


def symbol_phase(gamma, x):
    """The unimodular factor i^{|gamma|} * sign(x)^gamma in {1, i, -1, -i}.

    Only meaningful when all coordinates of x are nonzero.
    """
    s = 1
    for g, c in zip(gamma, x):
        if c < 0 and g % 2 == 1:
            s = -s
    p = _PHASES[order(gamma) % 4]
    return s * p


def symbol_eval(gamma, x):
    """sigma_gamma(x) = i^{|gamma|} x^gamma as a complex number.

    Returns 0 when any coordinate of x is zero (including gamma = 0).
    """
    a = symbol_abs_int(gamma, x)
    if a == 0:
        return 0j
    return symbol_phase(gamma, x) * float(a)


def q_s_eval(smoothness, x):
    """Fundamental polynomial Q_S(x) = sum_{gamma in S} |sigma_gamma(x)|^2.

    Exact integer.  Zero when any coordinate of x is zero, by the symbol
    convention; strictly positive otherwise since the zero index
    contributes 1.
    """
    if any(c == 0 for c in x):
        return 0
    total = 0
    for gamma in smoothness:
        total += symbol_abs_int(gamma, x) ** 2
    return total


def derivative_multiplier(gamma, n):
    """Multiplier of the exponential e_n under the partial derivative
    of multi-index gamma: prod_j (i n_j)^{gamma_j}, with 0^0 = 1.

    Unlike sigma_gamma this does not vanish on frequencies with zero
    coordinates unless a zero coordinate carries a positive exponent.
    """
    mag = 1
    for g, c in zip(gamma, n):
        if g > 0:
            mag *= abs(c) ** g
    if mag == 0:
        return 0j
    s = 1
    for g, c in zip(gamma, n):
        if c < 0 and g % 2 == 1:
            s = -s
    return s * _PHASES[order(gamma) % 4] * float(mag)
