"""Norm-model geometry of apartments: markings, Weyl elements, tropical
assignment, intersection cones as difference-constraint systems, the main
cone formulas, shearing translations, and the monotonicity checker.

Points and bounds live on the valuation (log) scale as exact rationals;
apartment intersections are difference-bound matrices canonicalized by
min-plus closure.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from . import linalg, snakes
from .flags import Flag, all_double_ratios, annihilator, canonical_covector
from .linalg import Matrix
from .valfield import INF, ValuedScalar, ext_add, rational_from_str, rational_to_str


class BuildingError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Weyl elements


@dataclass(frozen=True)
class WeylElement:
    """Affine Weyl element acting by w(x)_j = x_{perm(j)} + translation_j."""

    perm: tuple
    translation: tuple

    def __post_init__(self):
        d = len(self.perm)
        if sorted(self.perm) != list(range(1, d + 1)):
            raise BuildingError("perm must be a permutation of 1..d")
        if len(self.translation) != d or sum(self.translation, Fraction(0)) != 0:
            raise BuildingError("translation must lie in the sum-zero subspace")

    @classmethod
    def identity(cls, d: int) -> "WeylElement":
        return cls(tuple(range(1, d + 1)), tuple(Fraction(0) for _ in range(d)))

    @classmethod
    def translation_by(cls, vec) -> "WeylElement":
        vec = tuple(Fraction(v) for v in vec)
        return cls(tuple(range(1, len(vec) + 1)), vec)

    @property
    def d(self) -> int:
        return len(self.perm)

    def is_translation(self) -> bool:
        return self.perm == tuple(range(1, self.d + 1))

    def apply(self, x):
        return [Fraction(x[self.perm[j] - 1]) + self.translation[j] for j in range(self.d)]

    def compose(self, other: "WeylElement") -> "WeylElement":
        """self after other: (self * other)(x) = self(other(x))."""
        if self.d != other.d:
            raise BuildingError("Weyl elements of different ranks")
        perm = tuple(other.perm[self.perm[j] - 1] for j in range(self.d))
        trans = tuple(other.translation[self.perm[j] - 1] + self.translation[j]
                      for j in range(self.d))
        return WeylElement(perm, trans)

    def inverse(self) -> "WeylElement":
        inv = [0] * self.d
        for j in range(self.d):
            inv[self.perm[j] - 1] = j + 1
        perm = tuple(inv)
        trans = tuple(-self.translation[perm[j] - 1] for j in range(self.d))
        return WeylElement(perm, trans)

    def to_json(self):
        return {"perm": list(self.perm),
                "translation": [rational_to_str(v) for v in self.translation]}

    @classmethod
    def from_json(cls, data):
        return cls(tuple(data["perm"]),
                   tuple(Fraction(v) for v in data["translation"]))


# ---------------------------------------------------------------------------
# markings and apartments


def _covector_key(col) -> str:
    canon = canonical_covector(col)
    return json.dumps([x.to_json() for x in canon], sort_keys=True)


class Marking:
    """Basis of the dual space up to common scaling; columns are covectors."""

    __slots__ = ("basis", "label", "d")

    def __init__(self, basis: Matrix, label: str = "m"):
        if basis.rows != basis.cols:
            raise BuildingError("marking basis must be square")
        self.basis = basis
        self.label = label
        self.d = basis.rows

    def column(self, j: int):
        return self.basis.col(j - 1)

    def apartment(self) -> "Apartment":
        return Apartment(frozenset(_covector_key(self.basis.col(j))
                                   for j in range(self.d)))

    def to_json(self):
        return {"label": self.label, "basis": self.basis.to_json()}

    @classmethod
    def from_json(cls, data):
        return cls(Matrix.from_json(data["basis"]), data.get("label", "m"))


@dataclass(frozen=True)
class Apartment:
    """Line decomposition of the dual space; equality is unordered."""

    lines: frozenset

    @property
    def d(self) -> int:
        return len(self.lines)


def marking_point(m: Marking, x) -> dict:
    """Norm described by a marking at a point of the affine slice.

    Returns the canonical weight exponent per line (keyed by the line's
    canonical covector), recentered so the weights sum to one; two marking
    /point pairs describe the same building point iff the dicts are equal.
    """
    x = [Fraction(v) for v in x]
    if len(x) != m.d or sum(x) != 1:
        raise BuildingError("point must lie on the affine slice x_1+...+x_d = 1")
    weights = {}
    for j in range(m.d):
        col = m.basis.col(j)
        scale = next(v for v in col if not v.is_zero())
        weights[_covector_key(col)] = x[j] - scale.valuation()
    shift = (1 - sum(weights.values())) / m.d
    return {k: v + shift for k, v in weights.items()}


def compare_markings(m1: Marking, m2: Marking) -> WeylElement:
    """Weyl element w with f_{m1}(x) = f_{m2}(w(x)) for markings of one apartment."""
    if m1.d != m2.d:
        raise BuildingError("markings have different ranks")
    d = m1.d
    perm = []
    vals = []
    used = set()
    for j in range(d):
        col2 = m2.basis.col(j)
        match = None
        for i in range(d):
            if i in used:
                continue
            col1 = m1.basis.col(i)
            ratio = _parallel_ratio(col1, col2)
            if ratio is not None:
                match = (i, ratio)
                break
        if match is None:
            raise BuildingError("markings define different apartments")
        used.add(match[0])
        perm.append(match[0] + 1)
        vals.append(match[1].valuation())
    mean = sum(vals, Fraction(0)) / d
    return WeylElement(tuple(perm), tuple(v - mean for v in vals))


def _parallel_ratio(col1, col2):
    """Scalar c with col2 = c * col1, or None if the columns are not parallel."""
    pivot = next((r for r, v in enumerate(col1) if not v.is_zero()), None)
    if pivot is None or col2[pivot].is_zero():
        return None
    c = col2[pivot] / col1[pivot]
    for a, b in zip(col1, col2):
        if b != a * c:
            return None
    return c


def flag_apartment(Fi: Flag, Fj: Flag, label: str = None) -> Marking:
    """Marking of the apartment of a span-generic flag pair.

    Line k is the annihilator of Fi^(d-k) + Fj^(k-1), with each line's
    canonical covector as the basis vector.
    """
    d = Fi.d
    cols = []
    for k in range(1, d + 1):
        if k == 1:
            span = Fi.level(d - 1)
        elif k == d:
            span = Fj.level(d - 1)
        else:
            span = Fi.level(d - k).hstack(Fj.level(k - 1))
        ker = linalg.kernel_basis(span.transpose())
        if ker is None or ker.cols != 1:
            from .flags import MaxSpanError

            raise MaxSpanError((d - k, k - 1), "flag pair is not span-generic")
        cols.append(canonical_covector(ker.col(0)))
    return Marking(Matrix.from_cols(cols), label or "pair")


# ---------------------------------------------------------------------------
# tropical assignment


def tropical_assignment(V) -> tuple:
    """Minimizing permutation and value for sum_j V[sigma(j)-1][j-1].

    Exact Hungarian method on rational costs with +inf as forbidden; ties
    are broken toward the lexicographically smallest permutation.
    """
    n = len(V)
    if any(len(row) != n for row in V):
        raise BuildingError("valuation matrix must be square")
    best = _hungarian_value(V, list(range(n)), list(range(n)))
    if best is None:
        raise BuildingError("all permutations have infinite value")
    sigma = [0] * n
    used_rows = []
    rows_left = list(range(n))
    running = Fraction(0)
    for j in range(n):
        cols_left = list(range(j + 1, n))
        chosen = None
        for r in rows_left:
            if V[r][j] is INF:
                continue
            rest = [x for x in rows_left if x != r]
            tail = _hungarian_value(V, rest, cols_left) if cols_left else Fraction(0)
            if tail is None:
                continue
            if running + V[r][j] + tail == best:
                chosen = r
                break
        if chosen is None:
            raise BuildingError("assignment refinement failed")
        sigma[j] = chosen + 1
        running += V[chosen][j]
        rows_left.remove(chosen)
        used_rows.append(chosen)
    return tuple(sigma), best


def _hungarian_value(V, rows, cols):
    """Optimal assignment value on a square submatrix, or None if infeasible."""
    n = len(rows)
    if n != len(cols):
        raise BuildingError("hungarian needs a square cost matrix")
    if n == 0:
        return Fraction(0)
    u = [Fraction(0)] * (n + 1)
    v = [Fraction(0)] * (n + 1)
    p = [0] * (n + 1)
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = [INF] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            delta = INF
            j1 = -1
            for j in range(1, n + 1):
                if used[j]:
                    continue
                cost = V[rows[i0 - 1]][cols[j - 1]]
                cur = INF if cost is INF else cost - u[i0] - v[j]
                if cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            if delta is INF:
                return None
            for j in range(n + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                elif minv[j] is not INF:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
    total = Fraction(0)
    for j in range(1, n + 1):
        total += V[rows[p[j] - 1]][cols[j - 1]]
    return total


# ---------------------------------------------------------------------------
# difference cones (difference bound matrices)


class DifferenceCone:
    """Constraint system x_i - x_j <= bounds[i][j], canonicalized by closure.

    Emptiness is a negative cycle.  Equality compares closures (and treats
    all empty cones of one dimension as equal); the marking label is callers'
    bookkeeping and does not enter equality.
    """

    __slots__ = ("dim", "bounds", "marking", "closed", "_empty")

    def __init__(self, dim: int, bounds=None, marking: str = "m", closed=False,
                 empty=False):
        self.dim = dim
        self.marking = marking
        if bounds is None:
            bounds = [[Fraction(0) if i == j else INF for j in range(dim)]
                      for i in range(dim)]
        self.bounds = [list(row) for row in bounds]
        self.closed = closed
        self._empty = empty

    @classmethod
    def full(cls, dim: int, marking: str = "m") -> "DifferenceCone":
        return cls(dim, None, marking, closed=True)

    @classmethod
    def empty_cone(cls, dim: int, marking: str = "m") -> "DifferenceCone":
        return cls(dim, None, marking, closed=True, empty=True)

    def set_bound(self, i: int, j: int, value):
        """Tighten x_i - x_j <= value (1-indexed); invalidates closedness."""
        if value is not INF and value < self.bounds[i - 1][j - 1]:
            self.bounds[i - 1][j - 1] = Fraction(value)
            self.closed = False

    def close(self) -> "DifferenceCone":
        """Min-plus transitive closure; detects emptiness via negative cycles."""
        if self.closed:
            return self
        n = self.dim
        b = [row[:] for row in self.bounds]
        for k in range(n):
            for i in range(n):
                if b[i][k] is INF:
                    continue
                for j in range(n):
                    c = ext_add(b[i][k], b[k][j])
                    if c < b[i][j]:
                        b[i][j] = c
        if any(b[i][i] < 0 for i in range(n)):
            self._empty = True
        else:
            self.bounds = b
        self.closed = True
        return self

    @property
    def is_empty(self) -> bool:
        self.close()
        return self._empty

    def intersect(self, other: "DifferenceCone") -> "DifferenceCone":
        if self.dim != other.dim:
            raise BuildingError("cone dimensions differ")
        if self.is_empty or other.is_empty:
            return DifferenceCone.empty_cone(self.dim, self.marking)
        merged = [[min(a, b) for a, b in zip(r1, r2)]
                  for r1, r2 in zip(self.bounds, other.bounds)]
        return DifferenceCone(self.dim, merged, self.marking).close()

    def contains(self, x) -> bool:
        """Membership of a slice point, via the difference constraints."""
        if self.is_empty:
            return False
        x = [Fraction(v) for v in x]
        for i in range(self.dim):
            for j in range(self.dim):
                c = self.bounds[i][j]
                if c is not INF and x[i] - x[j] > c:
                    return False
        return True

    def contains_cone(self, other: "DifferenceCone") -> bool:
        """True iff other (as a set) is contained in self."""
        if other.is_empty:
            return True
        if self.is_empty:
            return False
        self.close()
        other.close()
        return all(o <= s for so, oo in zip(self.bounds, other.bounds)
                   for s, o in zip(so, oo))

    def weyl_image(self, w: WeylElement) -> "DifferenceCone":
        """Image cone under a Weyl element (new coords y = w(x))."""
        if self.is_empty:
            return DifferenceCone.empty_cone(self.dim, self.marking)
        self.close()
        n = self.dim
        out = [[None] * n for _ in range(n)]
        for a in range(n):
            for b in range(n):
                base = self.bounds[w.perm[a] - 1][w.perm[b] - 1]
                out[a][b] = ext_add(base, w.translation[a] - w.translation[b])
        return DifferenceCone(n, out, self.marking, closed=True)

    def is_single_point(self) -> bool:
        """True iff the cone pins all coordinate differences (one slice point)."""
        if self.is_empty:
            return False
        self.close()
        return all(self.bounds[i][j] is not INF
                   and self.bounds[i][j] + self.bounds[j][i] == 0
                   for i in range(self.dim) for j in range(self.dim) if i != j)

    def the_point(self):
        """The unique slice point of a single-point cone."""
        if not self.is_single_point():
            raise BuildingError("cone is not a single point")
        diffs = [self.bounds[i][i + 1] for i in range(self.dim - 1)]
        return point_from_differences(diffs)

    def __eq__(self, other):
        if not isinstance(other, DifferenceCone):
            return NotImplemented
        if self.dim != other.dim:
            return False
        if self.is_empty or other.is_empty:
            return self.is_empty and other.is_empty
        self.close()
        other.close()
        return self.bounds == other.bounds

    def __repr__(self):
        if self.is_empty:
            return f"DifferenceCone(dim={self.dim}, empty)"
        rows = "; ".join(",".join(rational_to_str(v) for v in row) for row in self.bounds)
        return f"DifferenceCone[{rows}]"

    def to_json(self):
        self.close()
        if self._empty:
            return {"dim": self.dim, "empty": True, "marking": self.marking}
        return {"dim": self.dim, "empty": False, "marking": self.marking,
                "bounds": [[rational_to_str(v) for v in row] for row in self.bounds]}

    @classmethod
    def from_json(cls, data):
        if data["empty"]:
            return cls.empty_cone(data["dim"], data.get("marking", "m"))
        bounds = [[rational_from_str(v) for v in row] for row in data["bounds"]]
        return cls(data["dim"], bounds, data.get("marking", "m"), closed=True)


def point_from_differences(diffs):
    """Slice point with prescribed consecutive differences x_i - x_{i+1}."""
    diffs = [Fraction(v) for v in diffs]
    d = len(diffs) + 1
    weighted = sum((j + 1) * diffs[j] for j in range(d - 1))
    xd = Fraction(1 - weighted, d)
    xs = [xd] * d
    for i in range(d - 2, -1, -1):
        xs[i] = xs[i + 1] + diffs[i]
    return xs


# ---------------------------------------------------------------------------
# apartment intersections


def change_of_basis(m1: Marking, m2: Marking) -> Matrix:
    """Matrix g with g * (m1 basis) = (m2 basis), written in the m1 basis."""
    return linalg.invert(m1.basis) * m2.basis


def valuation_matrix(g: Matrix):
    return [[g[i, j].valuation() for j in range(g.cols)] for i in range(g.rows)]


def step1_data(m1: Marking, m2: Marking):
    """Change-of-basis matrix, its valuations, the optimal assignment and
    v(det g); the assignment value never exceeds v(det g)."""
    g = change_of_basis(m1, m2)
    vg = valuation_matrix(g)
    vdet = linalg.determinant(g).valuation()
    sigma, value = tropical_assignment(vg)
    if not value <= vdet:
        raise BuildingError("tropical assignment exceeds v(det); broken valuation")
    return g, vg, sigma, value, vdet


def intersect_apartments(m1: Marking, m2: Marking) -> DifferenceCone:
    """Intersection of two apartments, in the coordinates of the first marking.

    If the valuation of det g is not achieved by the optimal assignment the
    apartments cannot meet and the canonical empty cone is returned;
    otherwise the difference constraints are built and closed.
    """
    _g, vg, sigma, value, vdet = step1_data(m1, m2)
    d = m1.d
    if value != vdet:
        return DifferenceCone.empty_cone(d, m1.label)
    sigma_inv = [0] * d
    for j in range(d):
        sigma_inv[sigma[j] - 1] = j
    cone = DifferenceCone(d, None, m1.label)
    for a in range(1, d + 1):
        col = sigma_inv[a - 1]
        base = vg[a - 1][col]
        for b in range(1, d + 1):
            if a == b or vg[b - 1][col] is INF:
                continue
            cone.set_bound(a, b, vg[b - 1][col] - base)
    return cone.close()


def step1_weyl(m1: Marking, m2: Marking) -> WeylElement:
    """Coordinate transport valid on the intersection of the two apartments."""
    _g, vg, sigma, value, vdet = step1_data(m1, m2)
    if value != vdet:
        raise BuildingError("apartments do not intersect; no transport")
    d = m1.d
    raw = [vg[sigma[j] - 1][j] for j in range(d)]
    mean = sum(raw, Fraction(0)) / d
    return WeylElement(tuple(sigma), tuple(v - mean for v in raw))


def is_point_in_apartment(m1: Marking, x, m2: Marking) -> bool:
    """Splitting-criterion membership test for the norm f_{m1}(x) in the
    apartment of m2: the columnwise minima must add up to v(det g)."""
    x = [Fraction(v) for v in x]
    if len(x) != m1.d or sum(x) != 1:
        raise BuildingError("point must lie on the affine slice")
    g = change_of_basis(m1, m2)
    vg = valuation_matrix(g)
    vdet = linalg.determinant(g).valuation()
    return _splitting_holds(vg, vdet, x)


def _splitting_holds(vg, vdet, x) -> bool:
    d = len(vg)
    total = Fraction(0)
    for j in range(d):
        w = min(ext_add(vg[i][j], x[i]) for i in range(d))
        if w is INF:
            return False
        total += w
    return total == vdet + sum(x)


def membership_oracle(m1: Marking, m2: Marking):
    """Closure testing many points against one marking pair efficiently."""
    g = change_of_basis(m1, m2)
    vg = valuation_matrix(g)
    vdet = linalg.determinant(g).valuation()

    def check(x):
        return _splitting_holds(vg, vdet, [Fraction(v) for v in x])

    return check


# ---------------------------------------------------------------------------
# constraint systems of a single matrix


def full_constraint_cone(M: Matrix, marking: str = "m") -> DifferenceCone:
    """All d(d-1) difference constraints of a change-of-basis matrix with
    finite diagonal valuations (identity assignment)."""
    d = M.rows
    vm = valuation_matrix(M)
    if any(vm[i][i] is INF for i in range(d)):
        raise BuildingError("matrix needs nonzero diagonal entries")
    cone = DifferenceCone(d, None, marking)
    for a in range(1, d + 1):
        for b in range(1, d + 1):
            if a != b and vm[b - 1][a - 1] is not INF:
                cone.set_bound(a, b, vm[b - 1][a - 1] - vm[a - 1][a - 1])
    return cone.close()


def consecutive_constraint_cone(M: Matrix, marking: str = "m") -> DifferenceCone:
    """Only the consecutive-index constraints of the same system."""
    d = M.rows
    vm = valuation_matrix(M)
    if any(vm[i][i] is INF for i in range(d)):
        raise BuildingError("matrix needs nonzero diagonal entries")
    cone = DifferenceCone(d, None, marking)
    for i in range(1, d):
        if vm[i][i - 1] is not INF:
            cone.set_bound(i, i + 1, vm[i][i - 1] - vm[i - 1][i - 1])
        if vm[i - 1][i] is not INF:
            cone.set_bound(i + 1, i, vm[i - 1][i] - vm[i][i])
    return cone.close()


def reduced_cone(M: Matrix, marking: str = "m") -> DifferenceCone:
    """Consecutive-constraint cone, guarded by the hypotheses under which it
    equals the full system: totally nonnegative and either upper triangular
    or with unit diagonal and valuation-zero determinant."""
    d = M.rows
    if M.rows != M.cols:
        raise BuildingError("reduced cone needs a square matrix")
    one = ValuedScalar.one()
    upper = all(M[i, j].is_zero() for i in range(d) for j in range(i))
    if not upper:
        if any(M[i, i] != one for i in range(d)):
            raise BuildingError("non-triangular input needs unit diagonal")
        if linalg.determinant(M).valuation() != 0:
            raise BuildingError("non-triangular input needs valuation-zero determinant")
    if not linalg.is_totally_nonnegative(M):
        raise BuildingError("matrix is not totally nonnegative")
    return consecutive_constraint_cone(M, marking)


# ---------------------------------------------------------------------------
# main cone formulas


def cone_C1(valuations: dict, d: int, marking: str = "f_EG") -> DifferenceCone:
    """Cone of the intersection with the apartment sharing the first flag,
    in the marking of the outer pair: running maxima of partial ratio-
    valuation sums bound the consecutive differences from below.

    Partial sums accumulate from the low middle index upward (the order the
    tail/diamond recursion produces); only the complete product is
    order-independent.
    """
    cone = DifferenceCone(d, None, marking)
    for j in range(1, d):
        lower = Fraction(0)
        acc = Fraction(0)
        for s in range(1, j):
            acc += _val(valuations, (d - j, s, j - s))
            if acc > lower:
                lower = acc
        cone.set_bound(j + 1, j, -lower)
    return cone.close()


def cone_C2(valuations: dict, d: int, marking: str = "f_EG") -> DifferenceCone:
    """Cone of the intersection with the apartment sharing the last flag:
    running minima of partial sums bound the differences from above."""
    cone = DifferenceCone(d, None, marking)
    for j in range(1, d):
        upper = Fraction(0)
        acc = Fraction(0)
        for s in range(1, d - j):
            acc += _val(valuations, (d - j - s, s, j))
            if acc < upper:
                upper = acc
        cone.set_bound(j, j + 1, upper)
    return cone.close()


def _val(valuations: dict, idx):
    try:
        return Fraction(valuations[idx])
    except KeyError:
        raise BuildingError(f"missing ratio valuation for index {idx}") from None


def triple_ratio_valuations(E: Flag, F: Flag, G: Flag) -> dict:
    from .flags import all_triple_ratios

    return {idx: val.valuation() for idx, val in all_triple_ratios(E, F, G).items()}


def snake_marking(E: Flag, F: Flag, G: Flag, snake=None, label: str = None) -> Marking:
    """Marking of a snake apartment via the snake basis (canonical u_1)."""
    snake = snakes.bottom_snake(E.d) if snake is None else snake
    basis = snakes.snake_basis(E, F, G, snake)
    return Marking(basis, label or "snake")


# ---------------------------------------------------------------------------
# shearing


def shearing_translation(E: Flag, F: Flag, G: Flag, H: Flag) -> WeylElement:
    """Pure translation relating the two preferred markings a positive
    quadruple puts on the apartment of its outer pair: the consecutive
    differences are minus the valuations of the reversed double ratios."""
    d = E.d
    zs = all_double_ratios(E, F, G, H)
    diffs = []
    for i in range(1, d):
        v = zs[d - i - 1].valuation()
        if v is INF:
            raise BuildingError("double ratio is zero; quadruple is degenerate")
        diffs.append(-v)
    z = point_from_differences(diffs)
    shift = sum(z, Fraction(0)) / d
    return WeylElement.translation_by([v - shift for v in z])


def shearing_translation_via_markings(E: Flag, F: Flag, G: Flag, H: Flag) -> WeylElement:
    """Same element computed through the marking comparison pipeline."""
    m1 = snake_marking(E, F, G, label="f_EG")
    m2 = snake_marking(E, H, G, label="f'_EG")
    return compare_markings(m2, m1)


# ---------------------------------------------------------------------------
# combinatorial separation and monotonicity


def is_combinatorially_separating(t: int, pair1, pair2, pair3) -> bool:
    """Cyclic nesting of three index pairs: some rotation of the labels puts
    the second pair's span between the first's and the third's."""
    pairs = [tuple(pair1), tuple(pair2), tuple(pair3)]
    for p in pairs:
        if len(p) != 2 or not all(1 <= v <= t for v in p) or p[0] == p[1]:
            raise BuildingError(f"invalid index pair {p}")
    for r in range(t):
        rot = [tuple(sorted(((v - 1 + r) % t) + 1 for v in p)) for p in pairs]
        (i1, j1), (i2, j2), (i3, j3) = rot
        if i1 <= i2 <= i3 < j3 <= j2 <= j1:
            return True
    return False


@dataclass
class MonotonicityReport:
    pairs: tuple
    cone_12: DifferenceCone
    cone_13: DifferenceCone
    cone_123: DifferenceCone
    holds: bool

    def to_json(self):
        return {"pairs": [list(p) for p in self.pairs],
                "cone_12": self.cone_12.to_json(),
                "cone_13": self.cone_13.to_json(),
                "cone_123": self.cone_123.to_json(),
                "holds": self.holds}


def check_monotonicity(tup, pairs) -> MonotonicityReport:
    """Verify that the middle apartment swallows the outer intersection.

    All three pairwise cones are computed in the marking of the first
    apartment; the triple intersection is their difference-bound meet there.
    The middle pair must combinatorially separate the outer two.
    """
    pairs = [tuple(p) for p in pairs]
    if len(pairs) != 3:
        raise BuildingError("monotonicity check needs three index pairs")
    if not is_combinatorially_separating(tup.t, *pairs):
        raise BuildingError("middle pair does not combinatorially separate the others")
    m1 = flag_apartment(tup[pairs[0][0]], tup[pairs[0][1]], label=f"A{pairs[0]}")
    m2 = flag_apartment(tup[pairs[1][0]], tup[pairs[1][1]], label=f"A{pairs[1]}")
    m3 = flag_apartment(tup[pairs[2][0]], tup[pairs[2][1]], label=f"A{pairs[2]}")
    cone_12 = intersect_apartments(m1, m2)
    cone_13 = intersect_apartments(m1, m3)
    cone_123 = cone_13.intersect(cone_12)
    return MonotonicityReport(tuple(pairs), cone_12, cone_13, cone_123,
                              holds=(cone_13 == cone_123))
