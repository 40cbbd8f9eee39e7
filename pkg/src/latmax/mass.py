"""Exact Minkowski-Siegel mass of the genus of a positive definite lattice.

The mass is computed as an analytic standard mass (exact zeta, gamma and
quadratic L-values, with pi and square-root factors tracked symbolically and
required to cancel) times local corrections at the primes dividing twice the
determinant.  Local factors come from the p-adic Jordan splitting: diagonal
group-density factors per constituent, half-integral cross-scale powers, and
at p = 2 type and compartment bookkeeping.

The mass is invariant under scaling the form, so the lattice's Q-gram is
rescaled to a primitive integer gram before the local analysis.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd, lcm

from . import matrix as mx
from .latticealg import jordan_decomposition
from .rational import factor, kronecker, legendre, rat
from .spaces import BilinearSpace, Ideal, Lattice, UNIT_IDEAL, standard_lattice


class MassError(ValueError):
    """Raised when some local structure is outside the supported range."""


# ---------------------------------------------------------------------------
# symbolic scalars c * pi^(k/2) * sqrt(r), exact

@dataclass(frozen=True)
class Sym:
    coef: Fraction
    pi_half: int = 0      # power of sqrt(pi)
    rad: int = 1          # positive squarefree radicand

    def __mul__(self, other: "Sym | Fraction | int") -> "Sym":
        if not isinstance(other, Sym):
            return Sym(self.coef * rat(other), self.pi_half, self.rad)
        g = gcd(self.rad, other.rad)
        rad = (self.rad // g) * (other.rad // g)
        return Sym(self.coef * other.coef * g, self.pi_half + other.pi_half, rad)

    __rmul__ = __mul__

    def __truediv__(self, other: "Sym | Fraction | int") -> "Sym":
        if not isinstance(other, Sym):
            return Sym(self.coef / rat(other), self.pi_half, self.rad)
        inv = Sym(1 / (other.coef * other.rad), -other.pi_half, other.rad)
        return self * inv

    def rational(self) -> Fraction:
        if self.pi_half != 0 or self.rad != 1:
            raise MassError(f"non-rational mass remnant: {self}")
        return self.coef


def _sqrt_sym(n: int) -> Sym:
    """sqrt(n) for a positive integer, with the square part extracted."""
    sq = 1
    rad = 1
    for p, e in factor(n).items():
        sq *= p ** (e // 2)
        if e % 2:
            rad *= p
    return Sym(Fraction(sq), 0, rad)


# ---------------------------------------------------------------------------
# exact special values

@lru_cache(maxsize=None)
def bernoulli_number(n: int) -> Fraction:
    if n == 0:
        return Fraction(1)
    if n == 1:
        return Fraction(-1, 2)
    if n % 2:
        return Fraction(0)
    total = Fraction(0)
    for k in range(n):
        total += comb(n + 1, k) * bernoulli_number(k)
    return -total / (n + 1)


def bernoulli_poly(n: int, x: Fraction) -> Fraction:
    return sum(comb(n, k) * bernoulli_number(k) * x ** (n - k) for k in range(n + 1))


def generalized_bernoulli(n: int, d: int) -> Fraction:
    """B_{n, chi} for the Kronecker character chi of discriminant d."""
    f = abs(d)
    return f ** (n - 1) * sum(kronecker(d, r) * bernoulli_poly(n, Fraction(r, f))
                              for r in range(1, f + 1))


def zeta_exact(k: int) -> Sym:
    """zeta(k) for even k >= 2, as rational * pi^k."""
    if k < 2 or k % 2:
        raise ValueError("even k >= 2 required")
    j = k // 2
    coef = Fraction((-1) ** (j + 1), 2) * bernoulli_number(k) * \
        Fraction(2 ** k, 1) / Fraction(_factorial(k))
    return Sym(coef, 2 * k, 1)


def _factorial(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def gamma_half(j: int) -> Sym:
    """Gamma(j/2) exactly; odd j carries a sqrt(pi)."""
    if j % 2 == 0:
        return Sym(Fraction(_factorial(j // 2 - 1)))
    dd = 1
    for i in range(j - 2, 0, -2):
        dd *= i
    return Sym(Fraction(dd, 2 ** ((j - 1) // 2)), 1, 1)


def fundamental_discriminant(d_num: int, d_den: int = 1) -> int:
    """Discriminant of Q(sqrt(d_num/d_den))."""
    d = d_num * d_den
    sq = 1
    for p, e in factor(d).items():
        sq *= p ** (2 * (e // 2))
    d0 = d // sq
    return d0 if d0 % 4 == 1 else 4 * d0


def quadratic_L_exact(s: int, d0: int) -> Sym:
    """L(s, chi_{d0}) for a fundamental discriminant d0 (or zeta(s) at d0=1),
    valid when chi(-1) = (-1)^s."""
    if d0 == 1:
        return zeta_exact(s)
    a = 0 if d0 > 0 else 1
    if (s - a) % 2:
        raise MassError("parity mismatch in quadratic L-value")
    f = abs(d0)
    b = generalized_bernoulli(s, d0)
    sign = (-1) ** (1 + (s - a) // 2)
    coef = sign * Fraction(2 ** s, f ** s) * b / (2 * _factorial(s))
    return Sym(coef, 2 * s, 1) * _sqrt_sym(f)


# ---------------------------------------------------------------------------
# local constituent data

@dataclass(frozen=True)
class Constituent:
    scale: int
    dim: int
    det_class: int          # unit det, mod p (odd p: Legendre +-1; p=2: mod 8)
    type_I: bool = False    # p = 2 only
    oddity: int = 0         # p = 2 only, mod 8


def _unit_mod8(x: Fraction, v: int) -> int:
    u = x / Fraction(2) ** v
    return u.numerator * pow(u.denominator, -1, 8) % 8


def two_adic_constituents(gram: mx.Mat) -> list[Constituent]:
    """2-adic Jordan data of an integer gram: per scale the dimension, unit
    determinant mod 8, type, and oddity.

    The oddity is the trace mod 8 of the odd diagonal cells alone: an even
    2x2 cell next to an odd cell rewrites with no net trace contribution
    (e.g. <1> + V = <3,3,3>), so U and V cells never add to the oddity."""
    space = BilinearSpace(gram)
    jd = jordan_decomposition(standard_lattice(space), 2)
    out = []
    for block in jd.blocks:
        g = block.gram
        k = block.dim
        i = 0
        det_unit = 1
        oddity = 0
        type_I = False
        while i < k:
            if i + 1 < k and g[i][i + 1] != 0:
                # even 2x2 cell: U has det -1, V has det 3 (times squares)
                cell_det = g[i][i] * g[i + 1][i + 1] - g[i][i + 1] ** 2
                u = _unit_mod8(cell_det, 2 * block.scale)
                det_unit = det_unit * u % 8
                i += 2
            else:
                u = _unit_mod8(g[i][i], block.scale)
                det_unit = det_unit * u % 8
                oddity += u
                type_I = True
                i += 1
        out.append(Constituent(block.scale, k, det_unit, type_I, oddity % 8))
    return out


def odd_adic_constituents(gram: mx.Mat, p: int) -> list[Constituent]:
    space = BilinearSpace(gram)
    jd = jordan_decomposition(standard_lattice(space), p)
    out = []
    for block in jd.blocks:
        d = mx.det(block.gram) / Fraction(p) ** (block.scale * block.dim)
        eps = legendre(d.numerator * pow(d.denominator, -1, p), p)
        out.append(Constituent(block.scale, block.dim, eps))
    return out


# ---------------------------------------------------------------------------
# diagonal group-density factors

def _m_species(s: int, p: int) -> Fraction:
    """Standard mass of a species: reciprocal group densities over F_p."""
    if s == 0:
        return Fraction(1, 2)
    t = abs(s) // 2
    if abs(s) % 2:
        out = Fraction(1, 2)
        for i in range(1, t + 1):
            out /= 1 - Fraction(p) ** (-2 * i)
        return out
    sign = 1 if s > 0 else -1
    out = Fraction(1, 2) / (1 - sign * Fraction(p) ** (-t))
    for i in range(1, t):
        out /= 1 - Fraction(p) ** (-2 * i)
    return out


def _odd_species(c: Constituent, p: int) -> int:
    if c.dim % 2:
        return c.dim
    plus = legendre((-1) ** (c.dim // 2), p) == c.det_class
    return c.dim if plus else -c.dim


def _two_adic_species(c: Constituent, bound: bool) -> int:
    """Species of a 2-adic constituent.

    A constituent is bound when a scale-adjacent constituent has the other
    type; bound constituents have species dim + 1.  A free type II one is
    +-dim with + exactly when its determinant class is (-1)^(dim/2).  A free
    type I one loses one dimension (two when the oddity is divisible by 4),
    with the sign read off from oddity/det mod 8."""
    if bound:
        return c.dim + 1
    if not c.type_I:
        plus = c.det_class == (7 if (c.dim // 2) % 2 else 1)
        return c.dim if plus else -c.dim
    n, o = c.dim, c.oddity % 8
    size = n - 2 if o % 4 == 0 else n - 1
    if size <= 0:
        return 0
    if size % 2:
        return size
    t = o * pow(c.det_class, -1, 8) % 8
    return size if t in (0, 1, 7) else -size


def _cross_sym(constituents: list[Constituent], p: int) -> Sym:
    total = 0   # exponent in half-units of log p
    for i, ci in enumerate(constituents):
        for cj in constituents[i + 1:]:
            total += (cj.scale - ci.scale) * ci.dim * cj.dim
    half, whole = total % 2, total // 2
    out = Sym(Fraction(p) ** whole)
    if half:
        out = out * _sqrt_sym(p)
    return out


def conway_p_mass(constituents: list[Constituent], p: int) -> Sym:
    if p == 2:
        return _two_adic_mass(constituents)
    diag = Fraction(1)
    for c in constituents:
        diag *= _m_species(_odd_species(c, p), p)
    return _cross_sym(constituents, p) * Sym(diag)


def _two_adic_mass(constituents: list[Constituent]) -> Sym:
    by_scale = {c.scale: c for c in constituents}
    diag = Fraction(1)
    for c in constituents:
        bound = any(v in by_scale and by_scale[v].type_I != c.type_I
                    for v in (c.scale - 1, c.scale + 1))
        diag *= _m_species(_two_adic_species(c, bound), 2)
    # zero constituents adjacent to a type I constituent count with M(0) = 1/2
    pad_scales = set()
    for c in constituents:
        if c.type_I:
            for v in (c.scale - 1, c.scale + 1):
                if v not in by_scale:
                    pad_scales.add(v)
    diag *= Fraction(1, 2) ** len(pad_scales)
    n_ii = sum(1 for c in constituents
               if c.type_I and c.scale + 1 in by_scale and by_scale[c.scale + 1].type_I)
    n_2 = sum(c.dim for c in constituents if not c.type_I)
    type_factor = Fraction(2) ** (n_ii - n_2)
    return _cross_sym(constituents, 2) * Sym(diag * type_factor)


def conway_std_p_mass(n: int, chi_p: int, p: int) -> Fraction:
    """Diagonal factor of a hypothetical p-unimodular form of dimension n."""
    out = Fraction(1, 2)
    if n % 2:
        for i in range(1, (n - 1) // 2 + 1):
            out /= 1 - Fraction(p) ** (-2 * i)
        return out
    s = n // 2
    out /= 1 - chi_p * Fraction(p) ** (-s)
    for i in range(1, s):
        out /= 1 - Fraction(p) ** (-2 * i)
    return out


def standard_mass(n: int, det_num: int, det_den: int) -> tuple[Sym, int]:
    """(analytic standard mass, fundamental discriminant used for even n)."""
    out = Sym(Fraction(2), -n * (n + 1) // 2, 1)   # 2 * pi^(-n(n+1)/4)
    for j in range(1, n + 1):
        out = out * gamma_half(j)
    s = (n + 1) // 2 if n % 2 else n // 2
    for j in range(1, s):
        out = out * zeta_exact(2 * j)
    d0 = 1
    if n % 2 == 0:
        d0 = fundamental_discriminant((-1) ** s * det_num, det_den)
        out = out * quadratic_L_exact(s, d0)
    return out, d0


def primitive_integer_gram(L: Lattice, a: Ideal) -> mx.Mat:
    """Q-gram divided by gen(a), scaled integral (masses are scale-invariant)."""
    g = mx.mat_scale(1 / a.gen, L.gram())
    d = mx.denominator_lcm(g)
    return mx.mat_scale(d, g)


def mass_of_gram(gram: mx.Mat) -> Fraction:
    """Mass of the genus of an integer-gram positive definite form, n >= 2."""
    n = len(gram)
    det = mx.det(gram)
    std, d0 = standard_mass(n, det.numerator, det.denominator)
    out = std
    bad = sorted(set(factor(2 * abs(det.numerator) * det.denominator)))
    for p in bad:
        if p == 2:
            cons = two_adic_constituents(gram)
        else:
            cons = odd_adic_constituents(gram, p)
        chi_p = kronecker(d0, p)
        mp = conway_p_mass(cons, p)
        out = out * mp / Sym(conway_std_p_mass(n, chi_p, p))
    mass = out.rational()
    if mass <= 0:
        raise MassError("mass came out nonpositive; local rules violated")
    return mass


def siegel_mass(L: Lattice, a: Ideal = UNIT_IDEAL) -> Fraction:
    """Exact mass of the genus of the a-valued quadratic lattice L."""
    from .genus import is_positive_definite, q_gram
    g = q_gram(L)
    if not is_positive_definite(g):
        raise MassError("positive definite lattice required")
    if L.dim == 1:
        return Fraction(1, 2)
    gram = primitive_integer_gram(L, a)
    return mass_of_gram(gram)
