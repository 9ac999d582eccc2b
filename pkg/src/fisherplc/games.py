"""Two-player games: sparsity/normalization validation, the well-supported
Nash check, and an exact support-enumeration oracle for tiny games."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

from .rational import RationalLike, to_fraction
from .verdict import Verdict

Matrix = Tuple[Tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class BimatrixGame:
    A: Matrix
    B: Matrix

    def __post_init__(self):
        A = tuple(tuple(to_fraction(v) for v in row) for row in self.A)
        B = tuple(tuple(to_fraction(v) for v in row) for row in self.B)
        n = len(A)
        if n == 0:
            raise ValueError("empty game")
        for M, name in ((A, "A"), (B, "B")):
            if len(M) != n or any(len(row) != n for row in M):
                raise ValueError(f"payoff matrix {name} must be {n}x{n}")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)

    @property
    def n(self) -> int:
        return len(self.A)

    def row_payoffs(self, y: Sequence[Fraction]) -> List[Fraction]:
        """``A_i y^T`` for every row i."""
        return [sum((a * b for a, b in zip(row, y)), Fraction(0)) for row in self.A]

    def column_payoffs(self, x: Sequence[Fraction]) -> List[Fraction]:
        """``x B_j`` for every column j."""
        n = self.n
        return [sum((x[i] * self.B[i][j] for i in range(n)), Fraction(0)) for j in range(n)]


@dataclass(frozen=True)
class MixedProfile:
    x: Tuple[Fraction, ...]
    y: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(to_fraction(v) for v in self.x))
        object.__setattr__(self, "y", tuple(to_fraction(v) for v in self.y))

    def validate(self, n: int) -> Optional[str]:
        for name, v in (("x", self.x), ("y", self.y)):
            if len(v) != n:
                return f"{name} has {len(v)} entries, expected {n}"
            if any(e < 0 for e in v):
                return f"{name} has a negative entry"
            if sum(v) != 1:
                return f"{name} sums to {sum(v)}, not 1"
        return None


def validate_sparse_normalized(g: BimatrixGame, max_nonzeros: int = 10) -> Verdict:
    for name, M in (("A", g.A), ("B", g.B)):
        for i, row in enumerate(M):
            for j, v in enumerate(row):
                if not -1 <= v <= 1:
                    return Verdict.no("not normalized", matrix=name, row=i, col=j, value=v)
        for i, row in enumerate(M):
            nnz = sum(1 for v in row if v != 0)
            if nnz > max_nonzeros:
                return Verdict.no("not sparse", matrix=name, row=i, nonzeros=nnz)
        for j in range(g.n):
            nnz = sum(1 for i in range(g.n) if M[i][j] != 0)
            if nnz > max_nonzeros:
                return Verdict.no("not sparse", matrix=name, col=j, nonzeros=nnz)
    return Verdict.yes()


def check_well_supported(g: BimatrixGame, prof: MixedProfile, eps: RationalLike) -> Verdict:
    """Every pure strategy trailing some other by more than ``eps`` must be unplayed."""
    eps = to_fraction(eps)
    problem = prof.validate(g.n)
    if problem is not None:
        raise ValueError(f"invalid profile: {problem}")
    for player, payoffs, probs in (
        ("row", g.row_payoffs(prof.y), prof.x),
        ("column", g.column_payoffs(prof.x), prof.y),
    ):
        for i, better in enumerate(payoffs):
            for j, worse in enumerate(payoffs):
                if better - worse > eps and probs[j] != 0:
                    return Verdict.no(
                        f"{player} strategy {j + 1} trails strategy {i + 1} by {better - worse} > eps "
                        f"but has probability {probs[j]}",
                        player=player, i=i, j=j, gap=better - worse, prob=probs[j],
                    )
    return Verdict.yes()


# exact linear algebra ------------------------------------------------------

def _solve_unique(rows: List[List[Fraction]], rhs: List[Fraction], ncols: int) -> Optional[List[Fraction]]:
    """Solve by Gauss-Jordan; ``None`` unless the system has exactly one solution."""
    M = [list(r) + [b] for r, b in zip(rows, rhs)]
    rank = 0
    pivots = []
    for c in range(ncols):
        piv = next((r for r in range(rank, len(M)) if M[r][c] != 0), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = 1 / M[rank][c]
        M[rank] = [v * inv for v in M[rank]]
        for r in range(len(M)):
            if r != rank and M[r][c] != 0:
                f = M[r][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[rank])]
        pivots.append(c)
        rank += 1
    if any(M[r][ncols] != 0 for r in range(rank, len(M))):
        return None
    if rank < ncols:
        return None
    sol = [Fraction(0)] * ncols
    for r, c in enumerate(pivots):
        sol[c] = M[r][ncols]
    return sol


def _rank(rows: List[List[Fraction]]) -> int:
    M = [list(r) for r in rows]
    rank = 0
    ncols = len(M[0]) if M else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(M)) if M[r][c] != 0), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        for r in range(rank + 1, len(M)):
            if M[r][c] != 0:
                f = M[r][c] / M[rank][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[rank])]
        rank += 1
    return rank


def _strategy_polytope_vertices(P: Matrix, own: Sequence[int], other: Sequence[int]) -> List[Tuple[Fraction, ...]]:
    """Vertices of {z in simplex, supp(z) within ``own``, every index of
    ``other`` a best response of the opponent, whose payoffs are ``P z``}.

    Unknowns are (z_0..z_{n-1}, v) with v the opponent's best payoff.
    """
    n = len(P)
    ncols = n + 1
    eq_rows, eq_rhs = [], []
    eq_rows.append([Fraction(1)] * n + [Fraction(0)])
    eq_rhs.append(Fraction(1))
    for k in other:
        eq_rows.append(list(P[k]) + [Fraction(-1)])
        eq_rhs.append(Fraction(0))
    own_set = set(own)
    for j in range(n):
        if j not in own_set:
            eq_rows.append([Fraction(int(c == j)) for c in range(n)] + [Fraction(0)])
            eq_rhs.append(Fraction(0))
    ineq_rows, ineq_rhs = [], []  # row . z <= rhs
    for j in own:
        ineq_rows.append([Fraction(-int(c == j)) for c in range(n)] + [Fraction(0)])
        ineq_rhs.append(Fraction(0))
    other_set = set(other)
    for k in range(n):
        if k not in other_set:
            ineq_rows.append(list(P[k]) + [Fraction(-1)])
            ineq_rhs.append(Fraction(0))

    need = ncols - _rank(eq_rows)
    vertices = []
    seen = set()
    for extra in combinations(range(len(ineq_rows)), need):
        rows = eq_rows + [ineq_rows[e] for e in extra]
        rhs = eq_rhs + [ineq_rhs[e] for e in extra]
        sol = _solve_unique(rows, rhs, ncols)
        if sol is None:
            continue
        if any(sum((a * b for a, b in zip(r, sol)), Fraction(0)) > b for r, b in zip(ineq_rows, ineq_rhs)):
            continue
        z = tuple(sol[:n])
        if z not in seen:
            seen.add(z)
            vertices.append(z)
    return vertices


def _centroid(points: List[Tuple[Fraction, ...]]) -> Tuple[Fraction, ...]:
    k = len(points)
    return tuple(sum(col, Fraction(0)) / k for col in zip(*points))


def support_enumeration_nash(g: BimatrixGame, max_n: int = 4) -> List[MixedProfile]:
    """One exact equilibrium per support pair that carries one.

    For a support pair (I, J) the set of matching equilibria is a product of
    two polytopes; the representative is the centroid of each polytope's
    vertices, which has the largest support the polytope allows. The pair is
    reported only when that support is exactly (I, J).
    """
    n = g.n
    if n > max_n:
        raise ValueError(f"support enumeration refused: n = {n} exceeds the bound {max_n}")
    # column player's payoff for column k against x is (B^T x)_k
    BT = tuple(tuple(g.B[i][k] for i in range(n)) for k in range(n))
    supports = [c for size in range(1, n + 1) for c in combinations(range(n), size)]
    out: List[MixedProfile] = []
    seen = set()
    for I in supports:
        for J in supports:
            ys = _strategy_polytope_vertices(g.A, J, I)
            if not ys:
                continue
            xs = _strategy_polytope_vertices(BT, I, J)
            if not xs:
                continue
            x, y = _centroid(xs), _centroid(ys)
            if tuple(i for i in range(n) if x[i] > 0) != I or tuple(j for j in range(n) if y[j] > 0) != J:
                continue
            if (x, y) not in seen:
                seen.add((x, y))
                out.append(MixedProfile(x, y))
    return out
