"""Ambient bilinear/quadratic spaces, fractional ideals of Q, and lattices."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import matrix as mx
from .rational import rat, ord_p


@dataclass(frozen=True)
class Ideal:
    """A nonzero fractional ideal a*Z of Q, stored by its positive generator."""

    gen: Fraction

    def __post_init__(self):
        g = rat(self.gen)
        if g <= 0:
            raise ValueError("ideal generator must be positive")
        object.__setattr__(self, "gen", g)

    def contains(self, x) -> bool:
        return (rat(x) / self.gen).denominator == 1

    def contains_ideal(self, other: "Ideal") -> bool:
        return self.contains(other.gen)

    def ord(self, p: int) -> int:
        return ord_p(self.gen, p)

    def __mul__(self, other):
        other = other if isinstance(other, Ideal) else Ideal(rat(other))
        return Ideal(self.gen * other.gen)

    def inverse(self) -> "Ideal":
        return Ideal(1 / self.gen)

    def __repr__(self):
        return f"Ideal({self.gen})"


UNIT_IDEAL = Ideal(Fraction(1))


class _Space:
    """Shared behaviour of bilinear and quadratic ambient spaces."""

    kind: str

    def __init__(self, gram):
        g = mx.mat(gram)
        if not mx.is_symmetric(g):
            raise ValueError("gram matrix must be symmetric")
        if mx.det(g) == 0:
            raise ValueError("degenerate space")
        self.gram = g
        self.dim = len(g)

    def __eq__(self, other):
        return type(self) is type(other) and self.gram == other.gram

    def __hash__(self):
        return hash((self.kind, self.gram))

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim})"


class BilinearSpace(_Space):
    """(V, B) with B(x, y) = x * gram * y^t."""

    kind = "bilinear"


class QuadraticSpace(_Space):
    """(V, Q) with Q(x) = x * gram * x^t; the Hessian form is H = 2 * gram."""

    kind = "quadratic"


def eval_B(space: BilinearSpace, x, y) -> Fraction:
    x, y = mx.vec(x), mx.vec(y)
    if len(x) != space.dim or len(y) != space.dim:
        raise ValueError("dimension mismatch")
    return sum(a * b for a, b in zip(mx.vec_mat(x, space.gram), y))


def eval_Q(space: QuadraticSpace, x) -> Fraction:
    x = mx.vec(x)
    if len(x) != space.dim:
        raise ValueError("dimension mismatch")
    return sum(a * b for a, b in zip(mx.vec_mat(x, space.gram), x))


def eval_H(space: QuadraticSpace, x, y) -> Fraction:
    """Hessian values H(x, y) = Q(x+y) - Q(x) - Q(y) = 2 x gram y^t."""
    x, y = mx.vec(x), mx.vec(y)
    if len(x) != space.dim or len(y) != space.dim:
        raise ValueError("dimension mismatch")
    return 2 * sum(a * b for a, b in zip(mx.vec_mat(x, space.gram), y))


def hessian_space(q: QuadraticSpace) -> BilinearSpace:
    return BilinearSpace(mx.mat_scale(2, q.gram))


def assoc_quadratic(b: BilinearSpace) -> QuadraticSpace:
    """Quadratic space of x -> B(x, x); its gram equals b.gram."""
    return QuadraticSpace(b.gram)


class Lattice:
    """Full-rank lattice in an ambient space, given by basis rows.

    Equality and hashing go through the canonical basis: the rational row HNF
    of the basis (scale by the denominator lcm, reduce over Z, unscale), which
    is basis-independent.
    """

    __slots__ = ("space", "basis", "_canon", "_hash")

    def __init__(self, space, basis):
        b = mx.mat(basis)
        if len(b) != space.dim or any(len(r) != space.dim for r in b):
            raise ValueError("basis must be square of the ambient dimension")
        self.space = space
        self.basis = b
        self._canon = None
        self._hash = None

    @property
    def dim(self) -> int:
        return self.space.dim

    def canonical_basis(self) -> mx.Mat:
        if self._canon is None:
            try:
                self._canon = mx.hnf(self.basis)
            except ValueError:
                raise ValueError("degenerate basis") from None
        return self._canon

    def canonical(self) -> "Lattice":
        return Lattice(self.space, self.canonical_basis())

    def gram(self) -> mx.Mat:
        """Gram of the ambient form on this basis (Q-gram for quadratic spaces)."""
        return mx.mat_mul(mx.mat_mul(self.basis, self.space.gram),
                          mx.transpose(self.basis))

    def hessian_gram(self) -> mx.Mat:
        if isinstance(self.space, QuadraticSpace):
            return mx.mat_scale(2, self.gram())
        return self.gram()

    def scale(self, c) -> "Lattice":
        return Lattice(self.space, mx.mat_scale(c, self.basis))

    def contains(self, v) -> bool:
        x = mx.vec_mat(mx.vec(v), mx.inverse(self.basis))
        return all(c.denominator == 1 for c in x)

    def coords(self, v) -> mx.Vec:
        """Coordinates of an ambient vector in this basis."""
        return mx.vec_mat(mx.vec(v), mx.inverse(self.basis))

    def is_sublattice_of(self, other: "Lattice") -> bool:
        t = mx.mat_mul(self.basis, mx.inverse(other.basis))
        return all(x.denominator == 1 for row in t for x in row)

    def index_in(self, other: "Lattice") -> int:
        """[other : self] for self a finite-index sublattice of other."""
        t = mx.mat_mul(self.basis, mx.inverse(other.basis))
        d = mx.det(t)
        if d.denominator != 1 or d == 0:
            raise ValueError("not a finite-index sublattice")
        return abs(d.numerator)

    def __add__(self, other: "Lattice") -> "Lattice":
        if self.space != other.space:
            raise ValueError("lattice sum needs a common ambient space")
        stacked = list(self.basis) + list(other.basis)
        d = mx.denominator_lcm(mx.mat(stacked))
        rows = [[int(x * d) for x in row] for row in stacked]
        h = mx.hnf_int(rows)
        if len(h) != self.dim:
            raise ValueError("degenerate basis")
        return Lattice(self.space, [[Fraction(x, d) for x in row] for row in h])

    def __eq__(self, other):
        return (isinstance(other, Lattice) and self.space == other.space
                and self.canonical_basis() == other.canonical_basis())

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.space, self.canonical_basis()))
        return self._hash

    def __repr__(self):
        return f"Lattice(dim={self.dim}, kind={self.space.kind})"


def standard_lattice(space) -> Lattice:
    return Lattice(space, mx.identity(space.dim))
