"""Snakes in the dual discrete triangle, their bases and move matrices.

A snake is a monotone path of d points selecting a line decomposition of
the dual space of F^d from a span-generic flag triple.  Tail and diamond
moves connect snakes; their change-of-basis matrices are unitriangular up
to a single ratio scaling, and replaying a move path multiplies them out.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .linalg import LinAlgError, Matrix
from .valfield import ValuedScalar, as_scalar
from .flags import (Flag, MaxSpanError, annihilator, canonical_covector,
                    triple_ratio, TripleDets)


class Snake:
    """Sequence of d points (alpha_k, beta_k, gamma_k) starting at (d-1,0,0)."""

    __slots__ = ("points", "d")

    def __init__(self, points):
        points = tuple(tuple(p) for p in points)
        self.points = points
        self.d = len(points)
        if not validate_points(points):
            raise ValueError(f"not a valid snake: {points}")

    def word(self) -> str:
        """Step letters: 'B' for a beta increment, 'C' for a gamma increment."""
        out = []
        for (a0, b0, c0), (a1, b1, c1) in zip(self.points, self.points[1:]):
            out.append("B" if b1 == b0 + 1 else "C")
        return "".join(out)

    @classmethod
    def from_word(cls, word: str) -> "Snake":
        d = len(word) + 1
        pts = [(d - 1, 0, 0)]
        for ch in word:
            a, b, c = pts[-1]
            pts.append((a - 1, b + 1, c) if ch == "B" else (a - 1, b, c + 1))
        return cls(pts)

    def __eq__(self, other):
        return isinstance(other, Snake) and self.points == other.points

    def __hash__(self):
        return hash(self.points)

    def __repr__(self):
        return f"Snake{list(self.points)}"

    def to_json(self):
        return [list(p) for p in self.points]

    @classmethod
    def from_json(cls, data):
        return cls(data)


def validate_points(points) -> bool:
    d = len(points)
    if d < 2 or tuple(points[0]) != (d - 1, 0, 0):
        return False
    for (a0, b0, c0), (a1, b1, c1) in zip(points, points[1:]):
        if a1 != a0 - 1:
            return False
        if not ((b1, c1) == (b0 + 1, c0) or (b1, c1) == (b0, c0 + 1)):
            return False
    return True


def validate(snake) -> bool:
    try:
        pts = snake.points if isinstance(snake, Snake) else tuple(snake)
    except TypeError:
        return False
    return validate_points(pts)


def top_snake(d: int) -> Snake:
    return Snake([(d - k, k - 1, 0) for k in range(1, d + 1)])


def bottom_snake(d: int) -> Snake:
    return Snake([(d - k, 0, k - 1) for k in range(1, d + 1)])


def all_snakes(d: int):
    """All 2^(d-1) snakes, ordered by word."""
    from itertools import product

    return [Snake.from_word("".join(w)) for w in product("BC", repeat=d - 1)]


# ---------------------------------------------------------------------------
# moves


@dataclass(frozen=True)
class TailMove:
    def to_json(self):
        return {"type": "tail"}


@dataclass(frozen=True)
class DiamondMove:
    at: int                 # index of the changed snake point, 2 <= at <= d-1
    ratio_index: tuple      # (a,b,c) slot of the ratio scaling the move

    def to_json(self):
        return {"type": "diamond", "at": self.at, "ratio_index": list(self.ratio_index)}


def move_from_json(data):
    if data["type"] == "tail":
        return TailMove()
    return DiamondMove(data["at"], tuple(data["ratio_index"]))


def diamond_ratio_index(snake: Snake, at: int) -> tuple:
    """Ratio slot of a diamond move at `at`, from the preceding snake point."""
    a, b, c = snake.points[at - 2]
    return (a - 1, b + 1, c + 1)


def apply_move(snake: Snake, move) -> Snake:
    """Moves are undirected toggles between the two snakes they connect."""
    word = list(snake.word())
    d = snake.d
    if isinstance(move, TailMove):
        word[d - 2] = "B" if word[d - 2] == "C" else "C"
    else:
        p = move.at
        if not 2 <= p <= d - 1:
            raise ValueError(f"diamond position {p} out of range")
        pattern = word[p - 2] + word[p - 1]
        if pattern == "CB":
            word[p - 2], word[p - 1] = "B", "C"
        elif pattern == "BC":
            word[p - 2], word[p - 1] = "C", "B"
        else:
            raise ValueError(f"diamond move at {p} does not apply to {snake}")
        if diamond_ratio_index(snake, p) != move.ratio_index:
            raise ValueError("diamond move ratio slot does not match the snake")
    return Snake.from_word("".join(word))


@dataclass(frozen=True)
class MovePath:
    source: Snake
    moves: tuple

    def target(self) -> Snake:
        s = self.source
        for m in self.moves:
            s = apply_move(s, m)
        return s

    def to_json(self):
        return [m.to_json() for m in self.moves]


def canonical_path(source: Snake, target: Snake) -> MovePath:
    """Deterministic move path from source to target.

    bottom->w creates each beta step with a tail move and walks it into
    place with diamond moves; general pairs route through the bottom snake.
    For (bottom, top) this is the alternating tail/descending-diamond sweep.
    """
    if source.d != target.d:
        raise ValueError("snakes live in different dimensions")
    if source == target:
        return MovePath(source, ())
    up_from_bottom_src = _raise_from_bottom(source)
    up_from_bottom_tgt = _raise_from_bottom(target)
    moves = tuple(reversed(up_from_bottom_src)) + tuple(up_from_bottom_tgt)
    path = MovePath(source, moves)
    assert path.target() == target
    return path


def _raise_from_bottom(target: Snake):
    """Moves taking the bottom snake to `target`."""
    d = target.d
    moves = []
    current = bottom_snake(d)
    for pos, letter in enumerate(target.word(), start=1):
        if letter != "B":
            continue
        moves.append(TailMove())
        current = apply_move(current, moves[-1])
        for p in range(d - 1, pos, -1):
            mv = DiamondMove(p, diamond_ratio_index(current, p))
            moves.append(mv)
            current = apply_move(current, mv)
    assert current == target
    return moves


# ---------------------------------------------------------------------------
# move matrices


def move_matrix(move, d: int, ratio=None, inverse: bool = False) -> Matrix:
    """Basis-change matrix of a move: columns express the new basis in the old.

    The forward direction is the one stated by the move relations (gamma
    branch to beta branch); `inverse=True` gives the reverse replay.
    """
    one = ValuedScalar.one()
    zero = ValuedScalar.zero()
    ent = [[one if i == j else zero for j in range(d)] for i in range(d)]
    if isinstance(move, TailMove):
        ent[d - 2][d - 1] = one if not inverse else -one
    else:
        p = move.at
        if ratio is None:
            raise ValueError("diamond move needs its ratio value")
        x = as_scalar(ratio)
        if x.is_zero():
            raise ValueError("diamond ratio must be nonzero")
        ent[p - 2][p - 1] = one if not inverse else -one
        for i in range(p, d):
            ent[i][i] = x if not inverse else x.inv()
    return Matrix.from_rows(ent)


def path_matrix_from_values(d: int, path: MovePath, values: dict) -> Matrix:
    """Replay a path, multiplying move matrices with supplied ratio values."""
    current = path.source
    out = Matrix.identity(d)
    for move in path.moves:
        word = current.word()
        if isinstance(move, TailMove):
            forward = word[d - 2] == "C"
            out = out * move_matrix(move, d, inverse=not forward)
        else:
            forward = word[move.at - 2] + word[move.at - 1] == "CB"
            x = values[tuple(move.ratio_index)]
            out = out * move_matrix(move, d, ratio=x, inverse=not forward)
        current = apply_move(current, move)
    return out


def path_matrix(E: Flag, F: Flag, G: Flag, path: MovePath) -> Matrix:
    """Snake basis-change matrix along a path, ratios evaluated on (E,F,G)."""
    dets = TripleDets(E, F, G)
    values = {}
    for move in path.moves:
        if isinstance(move, DiamondMove) and move.ratio_index not in values:
            values[move.ratio_index] = triple_ratio(E, F, G, move.ratio_index, dets)
    return path_matrix_from_values(E.d, path, values)


# ---------------------------------------------------------------------------
# snake bases


def snake_basis(E: Flag, F: Flag, G: Flag, snake: Snake, u1_scale=None) -> Matrix:
    """Matrix whose column k is the snake-basis covector u_k.

    u_1 spans the annihilator of the top proper level of E, normalized to
    have first nonzero coefficient 1 (then scaled by u1_scale); each later
    vector solves the three-term relation with the sign fixed by the branch.
    """
    d = E.d
    if snake.d != d:
        raise ValueError("snake length does not match flag dimension")

    u1 = canonical_covector(annihilator(E.level(d - 1)).col(0))
    if u1_scale is not None:
        s = as_scalar(u1_scale)
        if s.is_zero():
            raise ValueError("u1 scale must be nonzero")
        u1 = [x * s for x in u1]
    cols = [u1]
    for k in range(1, d):
        a, b, c = snake.points[k - 1]
        line_gamma = _line_covector(E, F, G, a - 1, b, c + 1)
        line_beta = _line_covector(E, F, G, a - 1, b + 1, c)
        system = Matrix.from_cols([line_gamma, line_beta])
        rhs = [-x for x in cols[-1]]
        try:
            coeffs = linalg.solve(system, rhs)
        except LinAlgError as exc:
            raise MaxSpanError((a - 1, b, c),
                               f"snake basis step {k + 1} is degenerate") from exc
        if coeffs[0].is_zero() or coeffs[1].is_zero():
            raise MaxSpanError((a - 1, b, c),
                               f"snake basis step {k + 1} is degenerate")
        if snake.points[k] == (a - 1, b, c + 1):
            cols.append([coeffs[0] * x for x in line_gamma])
        else:
            cols.append([-(coeffs[1] * x) for x in line_beta])
    return Matrix.from_cols(cols)


def _line_covector(E: Flag, F: Flag, G: Flag, i: int, j: int, k: int):
    """Canonical covector spanning the annihilator of E^(i)+F^(j)+G^(k)."""
    blocks = [f.level(n) for f, n in ((E, i), (F, j), (G, k)) if n > 0]
    span = blocks[0]
    for b in blocks[1:]:
        span = span.hstack(b)
    ker = linalg.kernel_basis(span.transpose())
    if ker is None or ker.cols != 1:
        raise MaxSpanError((i, j, k))
    return canonical_covector(ker.col(0))


def shearing_matrix(E: Flag, F: Flag, G: Flag, H: Flag) -> Matrix:
    """Diagonal matrix relating the two snake bases a quadruple puts on the
    line decomposition of the outer pair: diag(Z_1..Z_{d-1}, ..., Z_1, 1)."""
    from .flags import all_double_ratios

    d = E.d
    zs = all_double_ratios(E, F, G, H)
    one = ValuedScalar.one()
    zero = ValuedScalar.zero()
    diag = []
    for i in range(1, d + 1):
        acc = one
        for s in range(0, d - i):
            acc = acc * zs[s]
        diag.append(acc)
    return Matrix(d, d, [diag[i] if i == j else zero for i in range(d) for j in range(d)])
