"""Finite quadratic modules: finite abelian groups with a Q/Z-valued quadratic form.

A module is presented by generator orders, the form values Q(g_i), and the
bilinear pairings (g_i, g_j); every value is an exact Fraction reduced to
[0, 1). Elements are coordinate tuples. Subgroup-lattice operations use brute
force enumeration and are guarded by BRUTE_FORCE_BOUND.
"""

from fractions import Fraction
from functools import reduce
from itertools import product
from math import gcd

from . import cyclo
from ._intmat import (identity, image_basis, invert_rational, lcm, mat_mul,
                      mat_vec, smith_normal_form)
from .errors import ConsistencyError, PreconditionError

BRUTE_FORCE_BOUND = 10_000


def _mod1(x):
    return Fraction(x) % 1


class FqmElement:
    """Element of a finite quadratic module, in generator coordinates."""

    __slots__ = ("module", "coords")

    def __init__(self, module, coords):
        self.module = module
        self.coords = tuple(c % d for c, d in zip(coords, module.orders))

    def __add__(self, other):
        self._same(other)
        return FqmElement(self.module, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        self._same(other)
        return FqmElement(self.module, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return FqmElement(self.module, tuple(-c for c in self.coords))

    def __mul__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        return FqmElement(self.module, tuple(n * c for c in self.coords))

    __rmul__ = __mul__

    def _same(self, other):
        if self.module != other.module:
            raise PreconditionError("elements belong to different modules")

    def is_zero(self):
        return not any(self.coords)

    def order(self):
        out = 1
        for c, d in zip(self.coords, self.module.orders):
            out = lcm(out, d // gcd(d, c))
        return out

    def q(self):
        return self.module.q_value(self)

    def bil(self, other):
        return self.module.bilinear_value(self, other)

    def __eq__(self, other):
        return (isinstance(other, FqmElement) and self.coords == other.coords
                and self.module == other.module)

    def __hash__(self):
        return hash((self.module._key, self.coords))

    def __repr__(self):
        return "(" + ",".join(str(c) for c in self.coords) + ")"


class FiniteQuadraticModule:
    """Finite abelian group with a non-degenerate quadratic form into Q/Z."""

    def __init__(self, orders, q_values, bilinear, check=True):
        orders = tuple(int(d) for d in orders)
        if any(d < 1 for d in orders):
            raise PreconditionError("generator orders must be positive")
        q_values = tuple(_mod1(q) for q in q_values)
        bilinear = tuple(tuple(_mod1(b) for b in row) for row in bilinear)
        self.orders = orders
        self.q_values = q_values
        self.bilinear = bilinear
        self._key = (orders, q_values, bilinear)
        self._hash = hash(self._key)
        self._elements = None
        self._signature = None
        self._gauss1 = None
        if check:
            self._validate()

    # -- construction checks -------------------------------------------------

    def _validate(self):
        r = len(self.orders)
        if len(self.q_values) != r or len(self.bilinear) != r:
            raise PreconditionError("inconsistent presentation sizes")
        for i in range(r):
            if len(self.bilinear[i]) != r:
                raise PreconditionError("bilinear matrix is not square")
            if self.bilinear[i][i] != _mod1(2 * self.q_values[i]):
                raise PreconditionError("diagonal pairing must equal 2*Q on generators")
            if _mod1(self.orders[i] ** 2 * self.q_values[i]) != 0:
                raise PreconditionError("Q value incompatible with generator order")
            for j in range(r):
                if self.bilinear[i][j] != self.bilinear[j][i]:
                    raise PreconditionError("bilinear matrix must be symmetric")
                if _mod1(self.orders[i] * self.bilinear[i][j]) != 0:
                    raise PreconditionError("pairing incompatible with generator order")
        # |sum e(Q(x))|^2 equals the order exactly iff the form is non-degenerate
        g = self.gauss_sum_one()
        if (g * g.conjugate()).rational_value() != self.order():
            raise PreconditionError("quadratic form is degenerate")

    def gauss_sum_one(self):
        if self._gauss1 is None:
            self._gauss1 = cyclo.gauss_sum(self, 1)
        return self._gauss1

    # -- basic data -----------------------------------------------------------

    @property
    def rank(self):
        return len(self.orders)

    def order(self):
        return reduce(lambda a, b: a * b, self.orders, 1)

    def level(self):
        n = 1
        for q in self.q_values:
            n = lcm(n, q.denominator)
        for row in self.bilinear:
            for b in row:
                n = lcm(n, b.denominator)
        return n

    def elementary_divisors(self):
        """Invariant factors d_1 | d_2 | ... of the underlying group."""
        d, _u, _v = smith_normal_form([[self.orders[i] if i == j else 0
                                        for j in range(self.rank)] for i in range(self.rank)])
        return tuple(x for x in sorted(d) if x > 1)

    def signature(self):
        if self._signature is None:
            self._signature = milgram_signature(self)
        return self._signature

    # -- elements --------------------------------------------------------------

    def zero(self):
        return FqmElement(self, (0,) * self.rank)

    def element(self, coords):
        if len(coords) != self.rank:
            raise PreconditionError("coordinate length mismatch")
        return FqmElement(self, coords)

    def generators(self):
        return [self.element(tuple(int(i == j) for j in range(self.rank)))
                for i in range(self.rank)]

    def elements(self):
        """All elements, in lexicographic coordinate order (cached)."""
        if self._elements is None:
            self._elements = tuple(FqmElement(self, c)
                                   for c in product(*(range(d) for d in self.orders)))
        return self._elements

    def q_value(self, x):
        q = Fraction(0)
        c = x.coords
        for i, ci in enumerate(c):
            if ci:
                q += ci * ci * self.q_values[i]
                for j in range(i + 1, self.rank):
                    if c[j]:
                        q += ci * c[j] * self.bilinear[i][j]
        return q % 1

    def bilinear_value(self, x, y):
        b = Fraction(0)
        for i, ci in enumerate(x.coords):
            if ci:
                row = self.bilinear[i]
                for j, cj in enumerate(y.coords):
                    if cj:
                        b += ci * cj * row[j]
        return b % 1

    # -- misc --------------------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, FiniteQuadraticModule) and self._key == other._key

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return "FiniteQuadraticModule(orders=%s)" % (self.orders,)

    def describe(self):
        """Plain-text descriptor: divisors, generator Q values, pairing rows."""
        lines = ["divisors: " + ",".join(str(d) for d in self.orders)]
        for i, q in enumerate(self.q_values):
            lines.append("Q(g%d)=%d/%d" % (i + 1, q.numerator, q.denominator))
        for row in self.bilinear:
            lines.append(" ".join("%d/%d" % (b.numerator, b.denominator) for b in row))
        return "\n".join(lines)


class Subgroup:
    """Subgroup of a finite quadratic module, with its full element list."""

    def __init__(self, module, elements, generators=None):
        self.module = module
        elts = sorted(set(x.coords for x in elements))
        self.elements = tuple(module.element(c) for c in elts)
        self._coords = frozenset(elts)
        if generators is None:
            generators = _greedy_generators(module, self.elements)
            if len(_closure(module, generators)) != len(self.elements):
                raise PreconditionError("element set is not closed under addition")
        self.generators = tuple(generators)
        self.order = len(self.elements)

    @staticmethod
    def from_generators(module, generators):
        return Subgroup(module, _closure(module, generators), generators=tuple(generators))

    def contains(self, x):
        return x.coords in self._coords

    def is_isotropic(self):
        return all(x.q() == 0 for x in self.elements)

    def __add__(self, other):
        if self.module != other.module:
            raise PreconditionError("subgroups of different modules")
        return Subgroup.from_generators(self.module, self.generators + other.generators)

    def __eq__(self, other):
        return (isinstance(other, Subgroup) and self.module == other.module
                and self._coords == other._coords)

    def __hash__(self):
        return hash((self.module._key, self._coords))

    def __repr__(self):
        return "Subgroup(order=%d, gens=%s)" % (self.order, list(self.generators))


def _closure(module, generators):
    out = {module.zero().coords}
    for g in generators:
        base = list(out)
        n = g.order()
        for c in base:
            x = module.element(c)
            for k in range(1, n):
                out.add((x + k * g).coords)
    return [module.element(c) for c in out]


def _greedy_generators(module, elements):
    gens = []
    have = {module.zero().coords}
    for x in elements:
        if x.coords not in have:
            gens.append(x)
            have = set(y.coords for y in _closure(module, gens))
            if len(have) == len(elements):
                break
    return gens


class Automorphism:
    """Q-preserving group automorphism, as an integer matrix on coordinates."""

    def __init__(self, module, matrix):
        self.module = module
        self.matrix = tuple(tuple(int(x) for x in row) for row in matrix)
        r = module.rank
        for i in range(r):
            for j in range(r):
                if (self.matrix[i][j] * module.orders[j]) % module.orders[i]:
                    raise PreconditionError("matrix does not define an endomorphism")
        gens = module.generators()
        imgs = [self(g) for g in gens]
        for i in range(r):
            if imgs[i].q() != gens[i].q():
                raise PreconditionError("map does not preserve the quadratic form")
            for j in range(r):
                if imgs[i].bil(imgs[j]) != gens[i].bil(gens[j]):
                    raise PreconditionError("map does not preserve the pairing")
        if len(set(self(x).coords for x in module.elements())) != module.order():
            raise PreconditionError("map is not bijective")

    def __call__(self, x):
        return self.module.element(tuple(
            sum(self.matrix[i][j] * x.coords[j] for j in range(self.module.rank))
            for i in range(self.module.rank)))

    def compose(self, other):
        return Automorphism(self.module, mat_mul(self.matrix, other.matrix))

    def __eq__(self, other):
        if not isinstance(other, Automorphism) or self.module != other.module:
            return NotImplemented
        return all(self(x) == other(x) for x in self.module.generators())


def identity_automorphism(module):
    return Automorphism(module, identity(module.rank))


def negation_automorphism(module):
    return Automorphism(module, [[-int(i == j) for j in range(module.rank)]
                                 for i in range(module.rank)])


# -- constructors ----------------------------------------------------------------


def trivial_module():
    return FiniteQuadraticModule((), (), ())


def cyclic_module(n, q):
    """Z/n with Q(generator) = q; requires the induced pairing non-degenerate."""
    return FiniteQuadraticModule((n,), (q,), ((_mod1(2 * Fraction(q)),),))


def hyperbolic_module(n):
    """Discriminant form of the hyperbolic plane rescaled by n: (Z/n)^2 with Q(a,b)=ab/n."""
    if n == 1:
        return trivial_module()
    h = Fraction(1, n)
    return FiniteQuadraticModule((n, n), (0, 0), ((0, h), (h, 0)))


def matrix_model_module(p):
    """(Z/p)^4 from the 2x2 integer matrices with p*det as the quadratic form.

    Coordinates (c11, c12, c21, c22) stand for the class of (1/p)*[[c11,c12],[c21,c22]].
    """
    h = Fraction(1, p)
    z = Fraction(0)
    bil = ((z, z, z, h), (z, z, -h % 1, z), (z, -h % 1, z, z), (h, z, z, z))
    return FiniteQuadraticModule((p, p, p, p), (0, 0, 0, 0), bil)


def fqm_from_gram_with_maps(gram):
    """Discriminant form of an even Gram matrix, with the coordinate projection.

    Returns (module, to_coords, gen_vectors): to_coords sends a rational vector
    in the dual lattice to module coordinates; gen_vectors are dual-lattice
    representatives of the module generators.
    """
    n = len(gram)
    for i in range(n):
        if len(gram[i]) != n:
            raise PreconditionError("gram matrix must be square")
        if gram[i][i] % 2:
            raise PreconditionError("gram matrix must have even diagonal")
        for j in range(n):
            if gram[i][j] != gram[j][i]:
                raise PreconditionError("gram matrix must be symmetric")
    d, u, v = smith_normal_form(gram)
    if any(x == 0 for x in d):
        raise PreconditionError("gram matrix is singular")
    kept = [i for i in range(n) if d[i] > 1]
    gens = []
    for i in kept:
        gens.append([Fraction(v[r][i], d[i]) for r in range(n)])

    def q_of(vec):
        tot = Fraction(0)
        gv = [sum(gram[r][s] * vec[s] for s in range(n)) for r in range(n)]
        for r in range(n):
            tot += vec[r] * gv[r]
        return (tot / 2) % 1

    def b_of(v1, v2):
        tot = Fraction(0)
        for r in range(n):
            for s in range(n):
                tot += v1[r] * gram[r][s] * v2[s]
        return tot % 1

    orders = tuple(d[i] for i in kept)
    q_values = tuple(q_of(g) for g in gens)
    bil = tuple(tuple(b_of(gens[i], gens[j]) for j in range(len(kept))) for i in range(len(kept)))
    module = FiniteQuadraticModule(orders, q_values, bil)

    def to_coords(vec):
        gv = [sum(gram[r][s] * Fraction(vec[s]) for s in range(n)) for r in range(n)]
        if any(x.denominator != 1 for x in gv):
            raise PreconditionError("vector is not in the dual lattice")
        w = mat_vec(u, [int(x) for x in gv])
        return module.element(tuple(w[i] for i in kept))

    return module, to_coords, gens


def fqm_from_gram(gram):
    """Discriminant form L'/L of a non-degenerate even Gram matrix."""
    return fqm_from_gram_with_maps(gram)[0]


def direct_sum(a, b):
    """Orthogonal direct sum, generators of a followed by generators of b."""
    ra, rb = a.rank, b.rank
    zeros_a = tuple(Fraction(0) for _ in range(rb))
    zeros_b = tuple(Fraction(0) for _ in range(ra))
    bil = tuple(tuple(a.bilinear[i]) + zeros_a for i in range(ra)) + \
        tuple(zeros_b + tuple(b.bilinear[i]) for i in range(rb))
    return FiniteQuadraticModule(a.orders + b.orders, a.q_values + b.q_values, bil)


def negate(a):
    """Same group with the quadratic form -Q."""
    return FiniteQuadraticModule(
        a.orders,
        tuple(-q % 1 for q in a.q_values),
        tuple(tuple(-x % 1 for x in row) for row in a.bilinear))


# -- invariants -------------------------------------------------------------------


def milgram_signature(a):
    """Signature mod 8, extracted from the quadratic Gauss sum.

    The sum over the module of e(Q(x)) must have squared magnitude equal to the
    order; the phase, an exact eighth root of unity, is the signature.
    """
    g = a.gauss_sum_one() if isinstance(a, FiniteQuadraticModule) else cyclo.gauss_sum(a, 1)
    if (g * g.conjugate()).rational_value() != a.order():
        raise ConsistencyError("Gauss sum magnitude check failed: degenerate module?")
    for s in range(8):
        x = g * cyclo.e_frac(Fraction(-s, 8))
        if (x - x.conjugate()).is_zero():
            if x.to_complex().real > 0:
                return s
    raise ConsistencyError("no admissible signature phase found")


# -- subgroup-lattice operations ----------------------------------------------------


def _guard(a):
    if a.order() > BRUTE_FORCE_BOUND:
        raise PreconditionError(
            "brute-force subgroup operation limited to modules of order <= %d" % BRUTE_FORCE_BOUND)


def isotropic_subgroups(a, order):
    """All totally isotropic subgroups of the given order, in a fixed order.

    Enumeration is brute force with closure pruning; results are sorted
    lexicographically by their element lists.
    """
    _guard(a)
    if a.order() % order:
        raise PreconditionError("order must divide the module order")
    iso_elts = [x for x in a.elements() if x.q() == 0]
    seen = set()
    found = []
    frontier = [Subgroup(a, [a.zero()])]
    seen.add(frontier[0]._coords)
    while frontier:
        nxt = []
        for h in frontier:
            if h.order == order:
                found.append(h)
                continue
            if order % h.order:
                continue
            for x in iso_elts:
                if h.contains(x):
                    continue
                k = Subgroup.from_generators(a, h.generators + (x,))
                if k.order > order or order % k.order or k._coords in seen:
                    continue
                if all(y.q() == 0 for y in k.elements):
                    seen.add(k._coords)
                    nxt.append(k)
        frontier = nxt
    found.sort(key=lambda h: tuple(x.coords for x in h.elements))
    return found


def orthogonal_complement(a, g):
    """Subgroup of all x pairing integrally with every element of g."""
    _guard(a)
    gens = g.generators if g.generators else ()
    keep = [x for x in a.elements()
            if all(x.bil(h) == 0 for h in gens)]
    return Subgroup(a, keep)


def subquotient(a, h):
    """The subquotient H^perp/H with its projection and a section.

    Returns (b, proj, sect): proj maps elements of H^perp onto b, sect picks
    coset representatives, and proj(sect(x)) == x for all x in b. For the
    trivial subgroup the module itself is returned with identity maps.
    """
    if not h.is_isotropic():
        raise PreconditionError("subgroup is not isotropic")
    if h.order == 1:
        return a, (lambda x: x), (lambda x: x)
    _guard(a)
    r = a.rank
    perp = orthogonal_complement(a, h)
    diag = [[a.orders[i] if i == j else 0 for j in range(r)] for i in range(r)]
    cols1 = [list(g.coords) for g in perp.generators] + [list(row) for row in zip(*diag)]
    m1 = transpose_cols(image_basis([list(col) for col in zip(*cols1)]))
    cols2 = [list(g.coords) for g in h.generators] + [list(row) for row in zip(*diag)]
    m2 = transpose_cols(image_basis([list(col) for col in zip(*cols2)]))
    m1_inv = invert_rational(m1)
    t = mat_mul(m1_inv, m2)
    t_int = [[int(x) for x in row] for row in t]
    if any(t[i][j] != t_int[i][j] for i in range(r) for j in range(r)):
        raise ConsistencyError("subgroup lattice is not contained in complement lattice")
    d, u, _v = smith_normal_form(t_int)
    u_inv = [[int(x) for x in row] for row in invert_rational(u)]
    kept = [i for i in range(r) if d[i] > 1]
    sections = []
    for i in kept:
        vec = [sum(m1[rr][ss] * u_inv[ss][i] for ss in range(r)) for rr in range(r)]
        sections.append(a.element(tuple(vec)))
    orders = tuple(d[i] for i in kept)
    q_values = tuple(x.q() for x in sections)
    bil = tuple(tuple(sections[i].bil(sections[j]) for j in range(len(kept)))
                for i in range(len(kept)))
    b = FiniteQuadraticModule(orders, q_values, bil)
    if b.order() * h.order ** 2 != a.order():
        raise ConsistencyError("subquotient order bookkeeping failed")

    def proj(x):
        if not perp.contains(x):
            raise PreconditionError("element is not in the orthogonal complement")
        y = mat_vec(m1_inv, list(x.coords))
        if any(v.denominator != 1 for v in y):
            raise ConsistencyError("projection lift failed")
        w = mat_vec(u, [int(v) for v in y])
        return b.element(tuple(w[i] % d[i] for i in kept))

    def sect(x):
        out = a.zero()
        for c, s in zip(x.coords, sections):
            out = out + c * s
        return out

    for i, x in enumerate(b.generators()):
        if proj(sect(x)) != x:
            raise ConsistencyError("section is not a right inverse of the projection")
    return b, proj, sect


def transpose_cols(cols):
    """Column list -> matrix with those columns."""
    return [list(row) for row in zip(*cols)]


# -- the cyclic filtration ------------------------------------------------------------


def content(a, e, lam):
    """gcd(N*(e,lam), N) for an isotropic element e of exact order N."""
    n = e.order()
    if e.q() != 0:
        raise PreconditionError("reference element must be isotropic")
    b = e.bil(lam)
    c = n * b
    if c.denominator != 1:
        raise ConsistencyError("pairing with e must lie in (1/N)Z")
    return gcd(int(c) % n, n) or n


def cyclic_subgroup_id(a, e, d):
    """The isotropic subgroup generated by (N/d)*e, of order d."""
    n = e.order()
    if e.q() != 0:
        raise PreconditionError("reference element must be isotropic")
    if n % d:
        raise PreconditionError("d must divide the order of e")
    h = Subgroup.from_generators(a, ((n // d) * e,))
    if h.order != d:
        raise ConsistencyError("cyclic subgroup has unexpected order")
    return h


def phi_r(a, r, pair=None):
    """Automorphism (x, y) -> (r*x, r**(-1)*y) on a distinguished hyperbolic block.

    pair selects the two generator indices carrying the block; when omitted the
    first pair of generators with orders (n, n), vanishing Q, pairing 1/n, and
    orthogonal to everything else is used.
    """
    if pair is None:
        pair = _find_hyperbolic_pair(a)
    i, j = pair
    n = a.orders[i]
    if a.orders[j] != n:
        raise PreconditionError("selected generators have different orders")
    if gcd(r, n) != 1:
        raise PreconditionError("multiplier must be invertible modulo the block order")
    rstar = pow(r, -1, n)
    mat = [[int(s == t) for t in range(a.rank)] for s in range(a.rank)]
    mat[i][i] = r % n
    mat[j][j] = rstar
    return Automorphism(a, mat)


def _find_hyperbolic_pair(a):
    for i in range(a.rank):
        for j in range(i + 1, a.rank):
            n = a.orders[i]
            if a.orders[j] != n or a.q_values[i] != 0 or a.q_values[j] != 0:
                continue
            if a.bilinear[i][j] != Fraction(1, n):
                continue
            ok = all(a.bilinear[i][k] == 0 and a.bilinear[j][k] == 0
                     for k in range(a.rank) if k not in (i, j))
            if ok:
                return i, j
    raise PreconditionError("no distinguished hyperbolic block found")


# -- prime-level normal forms ----------------------------------------------------------


class MatrixModelSplit:
    """Prime-level module split as (definite block) + (2x2 matrix model).

    The matrix-model coordinates are the last four; they represent the class
    of (1/p) * [[c11, c12], [c21, c22]] with p*det as the quadratic form.
    """

    def __init__(self, p, definite_block=None):
        if p < 2 or any(p % k == 0 for k in range(2, p)):
            raise PreconditionError("level must be prime")
        self.p = p
        self.definite_block = definite_block if definite_block is not None else trivial_module()
        if self.definite_block.level() not in (1, p):
            raise PreconditionError("definite block must have level dividing the prime")
        self.module = direct_sum(self.definite_block, matrix_model_module(p))
        if self.module.level() != p:
            raise PreconditionError("split module does not have prime level")

    def normal_form(self, mu):
        """The normal-form representative sharing order and Q value with mu."""
        if mu.module != self.module:
            raise PreconditionError("element does not belong to the split module")
        rd = self.definite_block.rank
        if mu.is_zero():
            return self.module.zero()
        q = mu.q()
        c = q * self.p
        if c.denominator != 1:
            raise ConsistencyError("Q value is not p-torsion")
        coords = (0,) * rd + (1, 0, 0, int(c) % self.p)
        out = self.module.element(coords)
        if out.q() != q:
            raise ConsistencyError("normal form does not preserve Q")
        return out
