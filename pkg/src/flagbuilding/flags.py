"""Flags and flag tuples: span checks, projective ratio invariants,
polygon-triangulation coordinates, and reconstruction from coordinates.

A complete flag is stored as an invertible matrix whose first i columns
span the i-dimensional piece.  All invariants are evaluated as exact
determinants, so results are representative-independent by construction.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .linalg import LinAlgError, Matrix
from .valfield import GenPoly, ValuedScalar, as_scalar, random_positive_scalar


class MaxSpanError(ValueError):
    """A required span is degenerate; `levels` names the offending index tuple."""

    def __init__(self, levels, message=None):
        self.levels = tuple(levels)
        super().__init__(message or f"maximum span property fails at levels {self.levels}")


class Flag:
    """Complete flag in F^d; level i is the span of the first i basis columns."""

    __slots__ = ("basis", "d")

    def __init__(self, basis: Matrix):
        if basis.rows != basis.cols:
            raise LinAlgError("flag basis must be square")
        if determinant_is_zero(basis):
            raise LinAlgError("flag basis must be invertible")
        self.basis = basis
        self.d = basis.rows

    def level(self, i: int) -> Matrix:
        """Basis matrix of the i-dimensional piece (d x i)."""
        if not 0 <= i <= self.d:
            raise ValueError("flag level out of range")
        return self.basis.take_cols(i)

    def equals(self, other: "Flag") -> bool:
        """Equality as flags (levelwise span equality), not as matrices."""
        if self.d != other.d:
            return False
        for i in range(1, self.d):
            stacked = self.level(i).hstack(other.level(i))
            if linalg.rank(stacked) != i:
                return False
        return True

    def to_json(self):
        return self.basis.to_json()

    @classmethod
    def from_json(cls, data):
        return cls(Matrix.from_json(data))


def determinant_is_zero(M: Matrix) -> bool:
    det = linalg.determinant(M)
    return det.is_zero() if isinstance(det, ValuedScalar) else det == 0


def standard_flag(d: int) -> Flag:
    return Flag(Matrix.identity(d))


def reversed_standard_flag(d: int) -> Flag:
    one = ValuedScalar.one()
    zero = ValuedScalar.zero()
    return Flag(Matrix(d, d, [one if i + j == d - 1 else zero
                              for i in range(d) for j in range(d)]))


class FlagTuple:
    """Ordered tuple of at least two flags of a common dimension."""

    __slots__ = ("flags", "d", "t")

    def __init__(self, flags):
        flags = list(flags)
        if len(flags) < 2:
            raise ValueError("a flag tuple needs at least two flags")
        d = flags[0].d
        if any(f.d != d for f in flags):
            raise ValueError("flags must share one dimension")
        self.flags = flags
        self.d = d
        self.t = len(flags)

    def __getitem__(self, i: int) -> Flag:
        """1-indexed access, matching vertex labels of the polygon."""
        return self.flags[i - 1]

    def to_json(self):
        return {"d": self.d, "t": self.t, "flags": [f.to_json() for f in self.flags]}

    @classmethod
    def from_json(cls, data):
        return cls(Flag.from_json(f) for f in data["flags"])


def theta_interior(d: int):
    """Interior integer points (a,b,c), a+b+c=d, all positive, in sorted order."""
    return [(a, b, d - a - b) for a in range(1, d - 1) for b in range(1, d - a)]


# ---------------------------------------------------------------------------
# maximum span property


def max_span_violation(tup: FlagTuple):
    """First failing level tuple with sum d, or None.

    Checking only tuples summing to d suffices: larger sums contain a
    full-span subtuple, smaller sums extend to one, and both directions
    follow by dimension counting.
    """
    d, t = tup.d, tup.t
    for levels in _compositions(d, t):
        blocks = [tup.flags[i].level(a) for i, a in enumerate(levels) if a > 0]
        stacked = blocks[0]
        for b in blocks[1:]:
            stacked = stacked.hstack(b)
        if determinant_is_zero(stacked):
            return levels
    return None


def max_span_check(tup: FlagTuple) -> bool:
    return max_span_violation(tup) is None


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest


def canonical_flag_basis(B: Matrix) -> Matrix:
    """Deterministic small representative of the flag of B's column prefixes.

    Column j is the vector of level j that vanishes on the previous pivot
    rows and is normalized at the new pivot row, rescaled to have
    denominator-free entries (a column scaling, so the flag is unchanged).
    Keeping entries polynomial stops representatives from compounding when
    flags are built out of products of earlier flags.
    """
    d = B.rows
    one = GenPoly.one()
    out_cols = []
    prev: list = []
    for j in range(1, d + 1):
        sub = B.take_cols(j)
        pivots = linalg.pivot_columns(sub.transpose())
        if len(pivots) != j:
            raise LinAlgError("flag basis must be invertible")
        new = [p for p in pivots if p not in prev]
        if len(new) != 1:
            raise LinAlgError("flag basis must be invertible")
        rows_idx = prev + new
        system = sub.submatrix(rows_idx, range(j))
        rhs = [ValuedScalar.zero()] * (j - 1) + [ValuedScalar.one()]
        y = linalg.solve(system, rhs)
        col = [as_scalar(sum((sub[r, c] * y[c] for c in range(j)),
                             ValuedScalar.zero())) for r in range(d)]
        out_cols.append(_denominator_free(col, pivot=new[0]))
        prev = pivots
    return Matrix.from_cols(out_cols)


def _denominator_free(col, pivot: int):
    """Rescale a column to polynomial entries, monic at the pivot, with the
    column's minimal exponent shifted to zero."""
    one = GenPoly.one()
    distinct, seen = [], set()
    for x in col:
        if x.den != one and x.den.terms not in seen:
            seen.add(x.den.terms)
            distinct.append(x.den)
    polys = []
    for x in col:
        p = x.num
        for q in distinct:
            if q.terms != x.den.terms:
                p = p * q
        polys.append(p)
    lead = polys[pivot].lead_coeff()
    low = min(p.low() for p in polys if not p.is_zero())
    return [ValuedScalar(p.mul_term(-low, 1 / lead)) for p in polys]


def reduced_flag(flag: Flag) -> Flag:
    return Flag(canonical_flag_basis(flag.basis))


def dual_flag(flag: Flag) -> Flag:
    """Flag of annihilators: level i is the annihilator of the (d-i)-level.

    The columns of inverse(basis)^T, reversed, realize all levels at once.
    """
    inv_t = linalg.invert(flag.basis).transpose()
    cols = [inv_t.col(j) for j in range(flag.d - 1, -1, -1)]
    return Flag(canonical_flag_basis(Matrix.from_cols(cols)))


def annihilator(span_matrix: Matrix) -> Matrix:
    """Basis (as columns of coefficient vectors) of the annihilator of a span."""
    ker = linalg.kernel_basis(span_matrix.transpose())
    if ker is None:
        raise LinAlgError("annihilator of the full space is trivial")
    return ker


def canonical_covector(col) -> list:
    """Scale a covector so its first nonzero coefficient is one."""
    for x in col:
        if not x.is_zero():
            return [y / x for y in col]
    raise ValueError("zero covector has no canonical form")


# ---------------------------------------------------------------------------
# triple and double ratios


class TripleDets:
    """Memoized wedge determinants det[E_:i | F_:j | G_:k], i+j+k = d.

    One triple of flags is queried at many index triples; the six-determinant
    ratio formula reuses most of them.
    """

    def __init__(self, E: Flag, F: Flag, G: Flag):
        self.flags = (E, F, G)
        self.d = E.d
        self._cache = {}

    def det(self, i: int, j: int, k: int):
        key = (i, j, k)
        if key not in self._cache:
            blocks = [f.level(n) for f, n in zip(self.flags, key) if n > 0]
            stacked = blocks[0]
            for b in blocks[1:]:
                stacked = stacked.hstack(b)
            self._cache[key] = linalg.determinant(stacked)
        return self._cache[key]

    def nonzero_det(self, i: int, j: int, k: int):
        v = self.det(i, j, k)
        if v.is_zero():
            raise MaxSpanError((i, j, k))
        return v


def triple_ratio(E: Flag, F: Flag, G: Flag, idx, dets: TripleDets = None) -> ValuedScalar:
    """The (a,b,c) projective invariant of a span-generic flag triple."""
    a, b, c = idx
    d = E.d
    if min(a, b, c) < 1 or a + b + c != d:
        raise ValueError(f"index {idx} is not interior for dimension {d}")
    w = dets if dets is not None else TripleDets(E, F, G)
    num = (w.nonzero_det(a - 1, b, c + 1)
           * w.nonzero_det(a, b + 1, c - 1)
           * w.nonzero_det(a + 1, b - 1, c))
    den = (w.nonzero_det(a + 1, b, c - 1)
           * w.nonzero_det(a, b - 1, c + 1)
           * w.nonzero_det(a - 1, b + 1, c))
    return num / den


def all_triple_ratios(E: Flag, F: Flag, G: Flag) -> dict:
    dets = TripleDets(E, F, G)
    return {idx: triple_ratio(E, F, G, idx, dets) for idx in theta_interior(E.d)}


def double_ratio(E: Flag, F: Flag, G: Flag, H: Flag, i: int) -> ValuedScalar:
    """The i-th cross-ratio-type invariant of a span-generic flag quadruple.

    The flags E,G play symmetric outer roles; F,H contribute only their lines.
    """
    d = E.d
    if not 0 < i < d:
        raise ValueError(f"double ratio index {i} out of range for dimension {d}")

    def det4(ne, ng, use_f, levels):
        parts = [(E, ne), (G, ng), (F if use_f else H, 1)]
        blocks = [f.level(n) for f, n in parts if n > 0]
        stacked = blocks[0]
        for b in blocks[1:]:
            stacked = stacked.hstack(b)
        v = linalg.determinant(stacked)
        if v.is_zero():
            raise MaxSpanError(levels)
        return v

    n1 = det4(i, d - i - 1, True, (i, 1, d - i - 1, 0))
    d1 = det4(i, d - i - 1, False, (i, 0, d - i - 1, 1))
    n2 = det4(i - 1, d - i, False, (i - 1, 0, d - i, 1))
    d2 = det4(i - 1, d - i, True, (i - 1, 1, d - i, 0))
    return -(n1 / d1) * (n2 / d2)


def all_double_ratios(E: Flag, F: Flag, G: Flag, H: Flag) -> list:
    return [double_ratio(E, F, G, H, i) for i in range(1, E.d)]


# ---------------------------------------------------------------------------
# polygon triangulations and coordinates


@dataclass(frozen=True)
class Triangulation:
    """Triangulation of the convex polygon on vertices 1..t (clockwise)."""

    t: int
    internal_edges: tuple

    @classmethod
    def fan(cls, t: int) -> "Triangulation":
        return cls(t, tuple((1, k) for k in range(3, t)))

    @classmethod
    def from_edges(cls, t: int, edges) -> "Triangulation":
        norm = tuple(sorted(tuple(sorted(e)) for e in edges))
        tri = cls(t, norm)
        tri.validate()
        return tri

    def validate(self):
        t = self.t
        if t < 3:
            raise ValueError("triangulations need at least three vertices")
        seen = set()
        for i, k in self.internal_edges:
            if not (1 <= i < k <= t):
                raise ValueError(f"edge ({i},{k}) out of range")
            if (k - i) < 2 or (i == 1 and k == t):
                raise ValueError(f"edge ({i},{k}) is a boundary edge")
            if (i, k) in seen:
                raise ValueError(f"duplicate edge ({i},{k})")
            seen.add((i, k))
        if len(self.internal_edges) != t - 3:
            raise ValueError(f"a triangulation of a {t}-gon has {t - 3} internal edges")
        for (a, b), (c, e) in itertools.combinations(self.internal_edges, 2):
            if a < c < b < e or c < a < e < b:
                raise ValueError(f"edges ({a},{b}) and ({c},{e}) cross")

    def all_edges(self) -> set:
        t = self.t
        boundary = {(i, i + 1) for i in range(1, t)} | {(1, t)}
        return boundary | set(self.internal_edges)

    def triangles(self) -> list:
        """Faces as sorted vertex triples, in lexicographic order."""
        edges = self.all_edges()
        out = []
        for i, j, k in itertools.combinations(range(1, self.t + 1), 3):
            if (i, j) in edges and (j, k) in edges and (i, k) in edges:
                out.append((i, j, k))
        return out

    def edge_roles(self, edge) -> tuple:
        """Vertices (i, l, k, j) in the E,F,G,H roles of the edge invariant.

        The edge (i,k) is the diagonal of a quadrilateral with inner apex j
        (between i and k) and outer apex l; the convention puts the edge's
        flags in the outer roles and (l, j) in the line roles.
        """
        i, k = edge
        apexes = []
        for (a, b, c) in self.triangles():
            tri = (a, b, c)
            if i in tri and k in tri:
                apexes.append(next(v for v in tri if v not in (i, k)))
        if len(apexes) != 2:
            raise ValueError(f"edge {edge} is not an internal edge of the triangulation")
        inner = [v for v in apexes if i < v < k]
        outer = [v for v in apexes if not i < v < k]
        if len(inner) != 1 or len(outer) != 1:
            raise ValueError(f"edge {edge} has a degenerate quadrilateral")
        return i, outer[0], k, inner[0]


def coordinate_count(d: int, t: int) -> int:
    return (d - 2) * (d - 1) // 2 * (t - 2) + (d - 1) * (t - 3)


@dataclass
class FGCoordinates:
    """Triangulation coordinates: per-triangle ratio maps, per-edge ratio lists."""

    d: int
    t: int
    triangulation: Triangulation
    triangles: dict
    edges: dict

    def count(self) -> int:
        return (sum(len(v) for v in self.triangles.values())
                + sum(len(v) for v in self.edges.values()))

    def all_values(self):
        for tri in sorted(self.triangles):
            for idx in sorted(self.triangles[tri]):
                yield ("triangle", tri, idx), self.triangles[tri][idx]
        for edge in sorted(self.edges):
            for i, z in enumerate(self.edges[edge], start=1):
                yield ("edge", edge, i), z

    def is_positive(self) -> bool:
        return all(v.sign() > 0 for _, v in self.all_values())

    def __eq__(self, other):
        if not isinstance(other, FGCoordinates):
            return NotImplemented
        if (self.d, self.t, self.triangulation) != (other.d, other.t, other.triangulation):
            return False
        if set(self.triangles) != set(other.triangles) or set(self.edges) != set(other.edges):
            return False
        for tri, ratios in self.triangles.items():
            if set(ratios) != set(other.triangles[tri]):
                return False
            if any(ratios[idx] != other.triangles[tri][idx] for idx in ratios):
                return False
        for edge, zs in self.edges.items():
            if len(zs) != len(other.edges[edge]):
                return False
            if any(a != b for a, b in zip(zs, other.edges[edge])):
                return False
        return True

    def to_json(self):
        return {
            "d": self.d,
            "t": self.t,
            "internal_edges": [list(e) for e in self.triangulation.internal_edges],
            "triangles": {
                ",".join(map(str, tri)): {
                    ",".join(map(str, idx)): val.to_json()
                    for idx, val in sorted(ratios.items())
                }
                for tri, ratios in sorted(self.triangles.items())
            },
            "edges": {
                ",".join(map(str, edge)): [z.to_json() for z in zs]
                for edge, zs in sorted(self.edges.items())
            },
        }

    @classmethod
    def from_json(cls, data):
        tri = Triangulation.from_edges(data["t"], [tuple(e) for e in data["internal_edges"]]) \
            if data["t"] > 3 else Triangulation(data["t"], ())
        triangles = {
            tuple(map(int, key.split(","))): {
                tuple(map(int, idx.split(","))): ValuedScalar.from_json(val)
                for idx, val in ratios.items()
            }
            for key, ratios in data["triangles"].items()
        }
        edges = {
            tuple(map(int, key.split(","))): [ValuedScalar.from_json(z) for z in zs]
            for key, zs in data["edges"].items()
        }
        return cls(data["d"], data["t"], tri, triangles, edges)


def _as_triangulation(t: int, triangulation) -> Triangulation:
    if triangulation == "fan" or triangulation is None:
        return Triangulation.fan(t)
    if isinstance(triangulation, Triangulation):
        if triangulation.t != t:
            raise ValueError("triangulation vertex count does not match the tuple")
        triangulation.validate()
        return triangulation
    return Triangulation.from_edges(t, triangulation)


def tuple_coordinates(tup: FlagTuple, triangulation="fan") -> FGCoordinates:
    """All triangle ratios and edge ratios of a tuple for a triangulation."""
    tri = _as_triangulation(tup.t, triangulation)
    triangles = {}
    for (i, j, k) in tri.triangles():
        triangles[(i, j, k)] = all_triple_ratios(tup[i], tup[j], tup[k])
    edges = {}
    for edge in tri.internal_edges:
        i, l, k, j = tri.edge_roles(edge)
        edges[edge] = all_double_ratios(tup[i], tup[l], tup[k], tup[j])
    return FGCoordinates(tup.d, tup.t, tri, triangles, edges)


def is_positive_tuple(tup: FlagTuple) -> bool:
    """Span-generic with all fan-triangulation coordinates positive."""
    if max_span_violation(tup) is not None:
        return False
    if tup.t < 3:
        return True
    try:
        return tuple_coordinates(tup, "fan").is_positive()
    except MaxSpanError:
        return False


# ---------------------------------------------------------------------------
# reconstruction


def _flag_from_dual_suffix_basis(covector_cols: Matrix) -> Flag:
    """Flag whose level j annihilates the span of the last d-j covectors."""
    return Flag(canonical_flag_basis(linalg.invert(covector_cols.transpose())))


def reconstruct_triple(d: int, ratios: dict) -> FlagTuple:
    """Triple (E,F,G) with E standard, G reversed-standard and given ratios.

    The middle flag is rebuilt by pushing the explicit bottom-snake basis
    through the canonical move path, evaluated at the prescribed ratios, and
    reading levels off the resulting top-snake basis.  Exact round-trip with
    the ratio evaluation is the correctness contract.
    """
    from . import snakes

    expected = set(theta_interior(d))
    given = {tuple(k) for k in ratios}
    if given != expected:
        raise ValueError(f"need ratios exactly for {sorted(expected)}")
    values = {tuple(k): as_scalar(v) for k, v in ratios.items()}
    if any(v.is_zero() for v in values.values()):
        raise ValueError("ratios must be nonzero")

    E = standard_flag(d)
    G = reversed_standard_flag(d)
    one = ValuedScalar.one()
    zero = ValuedScalar.zero()
    # bottom-snake basis of the normalized frame: u_i = (-1)^(i-1) e_(d-i+1)
    bottom_cols = []
    for i in range(1, d + 1):
        col = [zero] * d
        col[d - i] = one if i % 2 == 1 else -one
        bottom_cols.append(col)
    bottom = Matrix.from_cols(bottom_cols)
    path = snakes.canonical_path(snakes.bottom_snake(d), snakes.top_snake(d))
    top = bottom * snakes.path_matrix_from_values(d, path, values)
    F = _flag_from_dual_suffix_basis(top)
    return FlagTuple([E, F, G])


def _swap_last_two_ratios(ratios: dict) -> dict:
    """Ratios of (E,G,F) from ratios of (E,F,G): X_{a,b,c} -> 1/X_{a,c,b}."""
    return {(a, b, c): ratios[(a, c, b)].inv() for (a, b, c) in ratios}


def reconstruct_tuple(coords: FGCoordinates, d: int = None, t: int = None) -> FlagTuple:
    """Rebuild a flag tuple from fan-triangulation coordinates, exactly."""
    from . import snakes

    d = coords.d if d is None else d
    t = coords.t if t is None else t
    if coords.triangulation != Triangulation.fan(t):
        raise ValueError("reconstruction expects fan-triangulation coordinates")
    if any(v.is_zero() for _, v in coords.all_values()):
        raise ValueError("coordinates must be nonzero")
    if t == 2:
        raise ValueError("nothing to reconstruct for a pair of flags")

    first = reconstruct_triple(d, coords.triangles[(1, 2, 3)])
    flags = [first[1], first[2], first[3]]
    path = snakes.canonical_path(snakes.bottom_snake(d), snakes.top_snake(d))
    for k in range(3, t):
        F1, Fprev, Fk = flags[0], flags[k - 2], flags[k - 1]
        old_basis = snakes.snake_basis(F1, Fprev, Fk, snakes.bottom_snake(d))
        zs = coords.edges[(1, k)]
        # The sign-rule bases of the two triples on the shared line
        # decomposition differ by partial products of -Z_s (the stated
        # shearing relation absorbs the alternation into its normalization).
        cols = []
        partial = ValuedScalar.one()
        scales = []
        for s in range(1, d):
            partial = partial * (-zs[s - 1])
            scales.append(partial)
        for i in range(1, d + 1):
            col = old_basis.col(i - 1)
            if i < d:
                inv_scale = scales[d - i - 1].inv()
                col = [x * inv_scale for x in col]
            cols.append(col)
        new_bottom = Matrix.from_cols(cols)
        ratios = _swap_last_two_ratios(coords.triangles[(1, k, k + 1)])
        top = new_bottom * snakes.path_matrix_from_values(d, path, ratios)
        flags.append(_flag_from_dual_suffix_basis(top))
    return FlagTuple(flags)


# ---------------------------------------------------------------------------
# sampling


def sample_positive_coordinates(d: int, t: int, rng: random.Random,
                                exponent_denominator: int = 6,
                                extra_terms: int = 0) -> FGCoordinates:
    """Random positive fan coordinates, deterministic for a seeded generator."""
    if d < 2 or t < 3:
        raise ValueError("need d >= 2 and t >= 3")
    tri = Triangulation.fan(t)
    triangles = {}
    for face in tri.triangles():
        triangles[face] = {
            idx: random_positive_scalar(rng, exponent_denominator, extra_terms)
            for idx in theta_interior(d)
        }
    edges = {}
    for edge in tri.internal_edges:
        edges[edge] = [random_positive_scalar(rng, exponent_denominator, extra_terms)
                       for _ in range(d - 1)]
    return FGCoordinates(d, t, tri, triangles, edges)


def generate_positive_tuple(d: int, t: int, seed: int,
                            exponent_denominator: int = 6,
                            extra_terms: int = 0) -> FlagTuple:
    """Sample a random positive flag tuple; deterministic for a fixed seed."""
    rng = random.Random(seed)
    coords = sample_positive_coordinates(d, t, rng, exponent_denominator, extra_terms)
    return reconstruct_tuple(coords)
