"""Scalar q-series, eta quotients, and the scalar-to-vector lift at prime level.

The lift is evaluated through its closed Fourier-coefficient formula: away
from the zero class the coefficient at exponent m is the rescaled pm-th
coefficient of the transformed input, and the zero class adds the input's own
coefficient. Coset sums are never evaluated.
"""

from fractions import Fraction

from . import fqm
from .errors import ConsistencyError, PreconditionError
from .qseries import VectorValuedQSeries


class ScalarQSeries:
    """Truncated expansion sum a(l) q^l with exact rational coefficients.

    Exponents are rationals to keep track of fractional leading powers of eta
    quotients; ordinary level-p forms use integer exponents throughout.
    """

    def __init__(self, weight, level, truncation):
        self.weight = Fraction(weight)
        self.level = int(level)
        self.truncation = Fraction(truncation)
        self.coefficients = {}

    def set(self, l, value):
        l = Fraction(l)
        if l > self.truncation:
            raise PreconditionError("exponent exceeds the truncation bound")
        if value:
            self.coefficients[l] = Fraction(value)
        else:
            self.coefficients.pop(l, None)

    def get(self, l):
        return self.coefficients.get(Fraction(l), Fraction(0))

    def is_zero(self):
        return not self.coefficients

    def has_integral_support(self):
        return all(l.denominator == 1 for l in self.coefficients)

    def __mul__(self, c):
        out = ScalarQSeries(self.weight, self.level, self.truncation)
        for l, v in self.coefficients.items():
            w = v * c
            if w:
                out.coefficients[l] = w
        return out

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, ScalarQSeries):
            return NotImplemented
        return self.coefficients == other.coefficients

    def __repr__(self):
        return "ScalarQSeries(weight=%s, level=%d, nonzero=%d)" % (
            self.weight, self.level, len(self.coefficients))


def eta_qexp(truncation):
    """q-expansion of eta itself: q^{1/24} times the Euler product."""
    return eta_quotient({1: 1}, truncation)


def eta_quotient(exponents, truncation, weight=None, level=None):
    """Product of eta(d tau)^{r_d} as a ScalarQSeries up to the truncation.

    The fractional prefix sum(d*r_d)/24 is carried into the exponents exactly.
    Negative powers expand through geometric series.
    """
    truncation = Fraction(truncation)
    prefix = sum(Fraction(d * r, 24) for d, r in exponents.items())
    n_terms = int(truncation - prefix)
    if n_terms < 0:
        raise PreconditionError("truncation is below the leading exponent")
    poly = [0] * (n_terms + 1)
    poly[0] = 1
    for d, r in sorted(exponents.items()):
        if d < 1:
            raise PreconditionError("eta arguments must be positive integers")
        for m in range(1, n_terms // d + 1):
            s = d * m
            if r > 0:
                for _ in range(r):
                    for i in range(n_terms, s - 1, -1):
                        poly[i] -= poly[i - s]
            else:
                for _ in range(-r):
                    for i in range(s, n_terms + 1):
                        poly[i] += poly[i - s]
    if weight is None:
        weight = Fraction(sum(exponents.values()), 2)
    if level is None:
        level = max(exponents)
    out = ScalarQSeries(weight, level, truncation)
    for j, c in enumerate(poly):
        if c:
            out.coefficients[prefix + j] = Fraction(c)
    return out


def u_p(f, p):
    """The coefficient-extraction operator: output coefficient at l is a(p*l)."""
    if not f.has_integral_support():
        raise PreconditionError("U_p is implemented for integral exponents")
    out = ScalarQSeries(f.weight, f.level, f.truncation / p)
    for l, v in f.coefficients.items():
        if l % p == 0:
            out.coefficients[l / p] = v
    return out


class NewformData:
    """A level-p eigenform with its Fricke eigenvalue.

    Validates the coefficient recursion a(p*l) = (-eps) * p^{k/2-1} * a(l)
    on every stored index; eps is the eigenvalue of the level involution.
    """

    def __init__(self, series, eps, weight, p):
        if eps not in (1, -1):
            raise PreconditionError("eigenvalue must be +1 or -1")
        weight = Fraction(weight)
        if weight.denominator != 1 or int(weight) % 2:
            raise PreconditionError("weight must be a positive even integer")
        if series.is_zero():
            raise PreconditionError("the zero series is not a newform")
        if not series.has_integral_support():
            raise PreconditionError("newform expansions have integral exponents")
        if series.get(0) != 0:
            raise PreconditionError("newforms are cusp forms")
        if series.get(1) == 0:
            raise PreconditionError("newforms are normalized at the first coefficient")
        self.series = series
        self.eps = eps
        self.weight = int(weight)
        self.p = int(p)
        factor = -eps * Fraction(p) ** ((self.weight - 2) // 2)
        bound = int(series.truncation)
        for l in range(bound // self.p + 1):
            if series.get(self.p * l) != factor * series.get(l):
                raise PreconditionError(
                    "coefficient recursion fails at index %d" % l)


def lift_module(p, n):
    """Discriminant form of the p-rescaled even unimodular lattice of signature (n, 2)."""
    if n % 8 != 2:
        raise PreconditionError("the construction needs n = 2 mod 8")
    out = fqm.trivial_module()
    for _ in range((n + 2) // 2):
        out = fqm.direct_sum(out, fqm.hyperbolic_module(p))
    return out


def vector_lift_closed(a, a_tilde, module, k, p, n, truncation=None):
    """The lift of a level-p form by its closed coefficient formula.

    a is the input expansion, a_tilde the expansion of its image under the
    level involution. The output coefficient at (m, mu) is
    p^{-k/2-n/2} a_tilde(pm), plus a(m) on the zero class.
    """
    k = Fraction(k)
    if n % 8 != 2:
        raise PreconditionError("the construction needs n = 2 mod 8")
    if any(d != p for d in module.orders) or module.rank != n + 2:
        raise PreconditionError("module must be an elementary p-group of rank n + 2")
    if module.signature() % 8:
        raise PreconditionError("module signature must vanish mod 8")
    expo = (k + n) / 2
    if expo.denominator != 1:
        raise PreconditionError("k + n must be even for a rational rescaling")
    scale = Fraction(1, p ** int(expo))
    if truncation is None:
        truncation = min(a.truncation, a_tilde.truncation / p)
    truncation = Fraction(truncation)
    out = VectorValuedQSeries(module, k, truncation)
    # coefficients depend on mu only through Q(mu) and mu = 0
    by_residue = {}
    for mu in module.elements():
        r = mu.q()
        if r not in by_residue:
            coeffs = {}
            m = r
            while m <= truncation:
                v = scale * a_tilde.get(p * m)
                if v:
                    coeffs[m] = v
                m += 1
            by_residue[r] = coeffs
        if mu.is_zero():
            continue
        for m, v in by_residue[r].items():
            out.coefficients[mu.coords, m] = v
    zero = module.zero()
    m = Fraction(0)
    while m <= truncation:
        v = a.get(m) + scale * a_tilde.get(p * m)
        if v:
            out.coefficients[zero.coords, m] = v
        m += 1
    return out


def kernel_element(nf, n, kappa=None, truncation=Fraction(3)):
    """Build the lift of a newform satisfying the kernel condition, with a report.

    The condition compares the coefficient-extraction operator with the level
    involution: a(p*l) = -p^{w/2-1} * eps * a(l) for every stored l (w the
    weight). On success the vector-valued lift with transformed input
    eps * a is returned and certified nonzero.
    """
    if kappa is None:
        kappa = Fraction(1 + Fraction(n, 2))
    kappa = Fraction(kappa)
    if Fraction(nf.weight) != kappa:
        raise PreconditionError("newform weight does not match the lift weight")
    p = nf.p
    expo = Fraction(kappa, 2) - 1
    if expo.denominator != 1:
        raise PreconditionError("half-integral comparison exponents are unsupported")
    factor = -nf.eps * Fraction(p) ** int(expo)
    report = {"condition": True, "first_violation": None}
    bound = int(nf.series.truncation)
    for l in range(bound // p + 1):
        if nf.series.get(p * l) != factor * nf.series.get(l):
            report["condition"] = False
            report["first_violation"] = l
            break
    if not report["condition"]:
        return None, report
    module = lift_module(p, n)
    a_tilde = nf.series * nf.eps
    vec = vector_lift_closed(nf.series, a_tilde, module, kappa, p, n,
                             truncation=truncation)
    witness = None
    for (c, m), v in sorted(vec.coefficients.items()):
        witness = (c, m, v)
        break
    if witness is None:
        raise ConsistencyError("kernel lift vanished identically")
    report["nonzero_witness"] = witness
    return vec, report
