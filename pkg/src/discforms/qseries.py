"""Vector-valued q-expansions and the oldform/newform machinery.

A series is a raw coefficient container Sum c(m, mu) q^m e_mu: modularity is
never assumed. The transformation-derived properties the decompositions rely
on (support and coset-translation invariance) are runtime-checked
preconditions, so the combinatorics can be exercised on synthetic data.
"""

from fractions import Fraction

from . import fqm
from .cyclo import CyclotomicNumber
from .errors import ConsistencyError, PreconditionError


def _conj(v):
    return v.conjugate() if isinstance(v, CyclotomicNumber) else v


def _is_zero_value(v):
    if isinstance(v, CyclotomicNumber):
        return v.is_zero()
    return v == 0


class VectorValuedQSeries:
    """Truncated expansion Sum_{mu, m <= truncation} c(m, mu) q^m e_mu."""

    def __init__(self, module, weight, truncation):
        self.module = module
        self.weight = Fraction(weight)
        self.truncation = Fraction(truncation)
        self.coefficients = {}

    def copy(self):
        out = VectorValuedQSeries(self.module, self.weight, self.truncation)
        out.coefficients = dict(self.coefficients)
        return out

    def set(self, mu, m, value):
        m = Fraction(m)
        if m % 1 != mu.q():
            raise PreconditionError("exponent %s is not congruent to Q(%s) mod 1" % (m, mu))
        if m > self.truncation:
            raise PreconditionError("exponent exceeds the truncation bound")
        key = (mu.coords, m)
        if _is_zero_value(value):
            self.coefficients.pop(key, None)
        else:
            self.coefficients[key] = value

    def add_to(self, mu, m, value):
        key = (mu.coords, m)
        if key in self.coefficients:
            self.set(mu, m, self.coefficients[key] + value)
        else:
            self.set(mu, m, value)

    def get(self, mu, m):
        return self.coefficients.get((mu.coords, Fraction(m)), 0)

    def component(self, mu):
        """The coefficient map m -> c(m, mu) of one basis component."""
        return {m: v for (c, m), v in self.coefficients.items() if c == mu.coords}

    def support(self):
        """Elements whose component is not identically zero."""
        return sorted(set(c for (c, _m) in self.coefficients))

    def __add__(self, other):
        if self.module != other.module or self.weight != other.weight:
            raise PreconditionError("series are not compatible")
        out = VectorValuedQSeries(self.module, self.weight,
                                  min(self.truncation, other.truncation))
        for (c, m), v in self.coefficients.items():
            if m <= out.truncation:
                out.coefficients[c, m] = v
        for (c, m), v in other.coefficients.items():
            if m <= out.truncation:
                w = out.coefficients.get((c, m), 0) + v
                if _is_zero_value(w):
                    out.coefficients.pop((c, m), None)
                else:
                    out.coefficients[c, m] = w
        return out

    def __sub__(self, other):
        return self + (other * -1)

    def __mul__(self, scalar):
        out = VectorValuedQSeries(self.module, self.weight, self.truncation)
        for key, v in self.coefficients.items():
            w = v * scalar
            if not _is_zero_value(w):
                out.coefficients[key] = w
        return out

    __rmul__ = __mul__

    def is_zero(self):
        return all(_is_zero_value(v) for v in self.coefficients.values())

    def __eq__(self, other):
        if not isinstance(other, VectorValuedQSeries):
            return NotImplemented
        if self.module != other.module:
            return False
        keys = set(self.coefficients) | set(other.coefficients)
        for c, m in keys:
            a = self.coefficients.get((c, m), 0)
            b = other.coefficients.get((c, m), 0)
            if isinstance(a, CyclotomicNumber) or isinstance(b, CyclotomicNumber):
                if not (CyclotomicNumber.from_rational(a) if not isinstance(a, CyclotomicNumber) else a) \
                        == (b if isinstance(b, CyclotomicNumber) else CyclotomicNumber.from_rational(b)):
                    return False
            elif a != b:
                return False
        return True

    def __repr__(self):
        return "VectorValuedQSeries(module=%s, weight=%s, nonzero=%d)" % (
            self.module.orders, self.weight, len(self.coefficients))


# -- subquotient plumbing (cached per module and subgroup) -----------------------

_REDUCTIONS = {}


def reduction(module, h):
    """Cached (B, proj, sect, fibers): fibers maps B-coords to the proj fiber in H^perp."""
    key = (module._key, h._coords)
    hit = _REDUCTIONS.get(key)
    if hit is not None:
        return hit
    b, proj, sect = fqm.subquotient(module, h)
    perp = fqm.orthogonal_complement(module, h)
    fibers = {}
    for mu in perp.elements:
        nu = proj(mu)
        fibers.setdefault(nu.coords, []).append(mu)
    _REDUCTIONS[key] = (b, proj, sect, fibers)
    return _REDUCTIONS[key]


def up_arrow(g, module, h):
    """Spread a series over H^perp/H along the projection: (g up)_mu = g_{mu+H}."""
    b, proj, _sect, fibers = reduction(module, h)
    if g.module != b:
        raise PreconditionError("series does not live on the subquotient module")
    out = VectorValuedQSeries(module, g.weight, g.truncation)
    for (c, m), v in g.coefficients.items():
        for mu in fibers[c]:
            out.coefficients[mu.coords, m] = v
    return out


def down_arrow(f, h):
    """Sum a series over the projection fibers: (f down)_nu = sum over mu -> nu."""
    if not h.is_isotropic():
        raise PreconditionError("subgroup is not isotropic")
    b, proj, _sect, fibers = reduction(f.module, h)
    out = VectorValuedQSeries(b, f.weight, f.truncation)
    for nu_coords, mus in fibers.items():
        nu = b.element(nu_coords)
        for mu in mus:
            comp = f.component(mu)
            for m, v in comp.items():
                out.add_to(nu, m, v)
    return out


def pairing_at(f, g, m):
    """Hermitian coefficient pairing sum_mu f(m, mu) * conj(g(m, mu))."""
    if f.module != g.module:
        raise PreconditionError("series on different modules")
    m = Fraction(m)
    total = 0
    for (c, mm), v in f.coefficients.items():
        if mm == m:
            w = g.coefficients.get((c, mm), 0)
            if not _is_zero_value(w):
                total = total + v * _conj(w)
    return total


def is_supported_on(f, subgroup_or_elements):
    elems = getattr(subgroup_or_elements, "elements", subgroup_or_elements)
    allowed = set(x.coords for x in elems)
    return all(c in allowed for c in f.support())


def _translation_invariant_on(f, mus, h):
    """Check f_{mu+mu'} = f_mu for the given mus and all mu' in h."""
    for mu_coords in mus:
        mu = f.module.element(mu_coords)
        base = f.component(mu)
        for hp in h.elements:
            if hp.is_zero():
                continue
            if f.component(mu + hp) != base:
                return False
    return True


def reconstruct_from_descent(f, h):
    """Rebuild a series supported on H^perp from its descent, with a report.

    Returns (reconstruction or None, report). The reconstruction is
    (1/|H|) f down up and is asserted equal to f when both runtime
    preconditions (support and coset invariance) hold.
    """
    if not h.is_isotropic():
        raise PreconditionError("subgroup is not isotropic")
    perp = fqm.orthogonal_complement(f.module, h)
    report = {
        "supported_on_perp": is_supported_on(f, perp),
        "translation_invariant": _translation_invariant_on(f, f.support(), h),
    }
    if not (report["supported_on_perp"] and report["translation_invariant"]):
        report["reconstructed"] = False
        return None, report
    rec = up_arrow(down_arrow(f, h), f.module, h) * Fraction(1, h.order)
    report["reconstructed"] = rec == f
    if not report["reconstructed"]:
        raise ConsistencyError("reconstruction identity failed on checked input")
    return rec, report


def decompose_prime_union(f, subgroups):
    """Inclusion-exclusion decomposition over isotropic subgroups of distinct prime order.

    Returns a list of (indices, sign, term) with term = (1/|H_S|) f down up along
    H_S = sum of the selected subgroups; the signed terms sum back to f.
    """
    a = f.module
    orders = [h.order for h in subgroups]
    if len(set(orders)) != len(orders) or any(not _is_prime(p) for p in orders):
        raise PreconditionError("subgroup orders must be distinct primes")
    perps = [fqm.orthogonal_complement(a, h) for h in subgroups]
    union = set()
    for p in perps:
        union |= set(x.coords for x in p.elements)
    if not all(c in union for c in f.support()):
        raise PreconditionError("series is not supported on the union of complements")
    for i, h in enumerate(subgroups):
        only = [c for c in f.support()
                if perps[i].contains(a.element(c))
                and all(not perps[j].contains(a.element(c)) for j in range(len(subgroups)) if j != i)]
        if not _translation_invariant_on(f, only, h):
            raise PreconditionError("coset-translation invariance fails for subgroup %d" % i)
    terms = []
    m = len(subgroups)
    for mask in range(1, 1 << m):
        idx = tuple(i for i in range(m) if mask >> i & 1)
        hs = subgroups[idx[0]]
        for i in idx[1:]:
            hs = hs + subgroups[i]
        if not hs.is_isotropic():
            raise PreconditionError("subgroup sum is not isotropic")
        sign = -1 if len(idx) % 2 == 0 else 1
        term = up_arrow(down_arrow(f, hs), a, hs) * Fraction(1, hs.order)
        terms.append((idx, sign, term))
    return terms


def _is_prime(n):
    return n >= 2 and all(n % k for k in range(2, int(n ** 0.5) + 1))


def _omega(n):
    count = 0
    p = 2
    while n > 1:
        while n % p == 0:
            n //= p
            count += 1
        p += 1 if p == 2 else 2
    return count


def _divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def moebius_resum(f, e):
    """The alternating-sum reconstruction -sum_{1<d|N} mu(d)/d f down up along I_d."""
    a = f.module
    n = e.order()
    out = VectorValuedQSeries(a, f.weight, f.truncation)
    for d in _divisors(n):
        if d == 1 or not _squarefree(d):
            continue
        mob = (-1) ** _omega(d)
        i_d = fqm.cyclic_subgroup_id(a, e, d)
        term = up_arrow(down_arrow(f, i_d), a, i_d) * Fraction(-mob, d)
        out = out + term
    return out


def _squarefree(n):
    for p in range(2, int(n ** 0.5) + 1):
        if n % (p * p) == 0:
            return False
    return True


def is_oldform(f, e):
    """True when every stored nonzero component pairs non-trivially with <e>."""
    n = e.order()
    if n < 2 or e.q() != 0:
        raise PreconditionError("reference element must be isotropic of order >= 2")
    return all(fqm.content(f.module, e, f.module.element(c)) > 1 for c in f.support())


def oldform_decompose(f, e, t):
    """Peel a series supported on {Omega(content) >= t} into subquotient layers.

    Returns {d: series over A(d)} for the divisors d of N = ord(e) with
    Omega(d) >= t, such that the sum of the raised pieces reproduces the
    input. Each layer extracts the components the raised sum determines
    uniquely (exact content d) and pushes the remainder one layer down;
    the support and coset-invariance preconditions are checked stepwise.
    """
    a = f.module
    n = e.order()
    if e.q() != 0:
        raise PreconditionError("reference element must be isotropic")
    if t == 0:
        return {1: f.copy()}
    result = {}
    cur = f.copy()
    for level in range(t, _omega(n) + 1):
        for c in cur.support():
            if _omega(fqm.content(a, e, a.element(c))) < level:
                raise PreconditionError(
                    "support precondition fails at recursion depth %d" % level)
        for d in _divisors(n):
            if _omega(d) != level:
                continue
            i_d = fqm.cyclic_subgroup_id(a, e, d)
            b, proj, _sect, fibers = reduction(a, i_d)
            e_b = proj(e)
            h = VectorValuedQSeries(b, f.weight, f.truncation)
            for nu_coords, mus in fibers.items():
                nu = b.element(nu_coords)
                if fqm.content(b, e_b, nu) != 1:
                    continue
                comp = cur.component(mus[0])
                for other in mus[1:]:
                    if cur.component(other) != comp:
                        raise PreconditionError(
                            "coset-translation invariance fails at depth %d" % level)
                for m, v in comp.items():
                    h.set(nu, m, v)
            result[d] = h
            if not h.is_zero():
                cur = cur - up_arrow(h, a, i_d)
    if not cur.is_zero():
        raise ConsistencyError("decomposition did not terminate with a zero remainder")
    return result


def resum_decomposition(parts, module, e):
    """Sum the raised layers of an oldform decomposition back over the module."""
    out = None
    for d, g in sorted(parts.items()):
        if d == 1:
            piece = g.copy()
        else:
            i_d = fqm.cyclic_subgroup_id(module, e, d)
            piece = up_arrow(g, module, i_d)
        out = piece if out is None else out + piece
    return out


# -- file format -------------------------------------------------------------------


def write_series(f):
    """Serialize to the line-based text format."""
    lines = ["module: " + ",".join(str(d) for d in f.module.orders),
             "weight: %d/%d" % (f.weight.numerator, f.weight.denominator),
             "truncation: %d/%d" % (f.truncation.numerator, f.truncation.denominator)]
    for (c, m), v in sorted(f.coefficients.items()):
        if isinstance(v, CyclotomicNumber):
            text = repr(v)
        else:
            v = Fraction(v)
            text = "%d/%d" % (v.numerator, v.denominator)
        lines.append("mu=(%s) m=%d/%d coeff=%s" % (
            ",".join(str(x) for x in c), m.numerator, m.denominator, text))
    return "\n".join(lines) + "\n"


def read_series(text, module):
    """Parse the line-based format; the module must match the header divisors."""
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if len(lines) < 3:
        raise PreconditionError("series file is too short")
    divisors = lines[0].split(":", 1)[1].strip()
    expect = ",".join(str(d) for d in module.orders)
    if divisors != expect:
        raise PreconditionError("module divisors %s do not match file header %s"
                                % (expect, divisors))
    weight = Fraction(lines[1].split(":", 1)[1].strip())
    truncation = Fraction(lines[2].split(":", 1)[1].strip())
    out = VectorValuedQSeries(module, weight, truncation)
    for ln in lines[3:]:
        fields = dict(part.split("=", 1) for part in ln.split(" ", 2))
        coords = tuple(int(x) for x in fields["mu"].strip("()").split(",") if x != "")
        m = Fraction(fields["m"])
        out.set(module.element(coords), m, _parse_value(fields["coeff"]))
    return out


def _parse_value(text):
    text = text.strip()
    if "z" not in text:
        return Fraction(text)
    total = CyclotomicNumber.zero()
    for part in text.split("+"):
        part = part.strip()
        if "*" in part:
            coeff, power = part.split("*")
            modulus, exponent = power.strip().lstrip("z").split("^")
            total = total + CyclotomicNumber(int(modulus), {int(exponent): Fraction(coeff)})
        else:
            total = total + Fraction(part)
    return total
