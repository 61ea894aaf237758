from typing import Optional, Sequence

import numpy as np

from fair_alloc.solvers.static_policy import SolverError, SolveStatus


class Tableau:
    """
        Dense primal simplex tableau for

            maximize c'x  s.t.  Ax <= b,  x >= 0,  with b >= 0,

        so the all-slack basis is a feasible start and no phase one is needed.
        Entering variables follow Dantzig's rule (largest reduced cost, lowest index on ties)
        and fall back to Bland's rule for good once too many pivots in a row fail to improve
        the objective.

        :param c: length-n objective
        :param A: m x n constraint matrix
        :param b: length-m nonnegative right hand side
        :param tol: feasibility/optimality tolerance
        :param basis: optional warm start, m column indices into [x, slack]
        :param bland_after: consecutive non-improving pivots before switching to Bland's rule
    """

    def __init__(self, c, A, b, tol=1e-9, basis: Optional[Sequence[int]] = None, bland_after=None):
        A = np.asarray(A, dtype=np.float64)
        b = np.asarray(b, dtype=np.float64)
        c = np.asarray(c, dtype=np.float64)
        self.m, self.n = A.shape
        if np.any(b < 0):
            raise SolverError("tableau right hand side must be nonnegative")
        self.tol = tol
        self.bland_after = bland_after if bland_after is not None else 50 * self.m
        self.using_bland = False
        self.pivots = 0

        self._full = np.hstack((A, np.eye(self.m)))
        self._cost = np.concatenate((c, np.zeros(self.m)))
        self._b = b

        self.warm_started = False
        if basis is not None and self._load_basis(np.asarray(basis, dtype=np.int64)):
            self.warm_started = True
        else:
            self._load_basis(np.arange(self.n, self.n + self.m))

    def _load_basis(self, basis: np.ndarray) -> bool:
        if basis.shape != (self.m,) or len(set(basis.tolist())) != self.m:
            return False
        try:
            inv = np.linalg.inv(self._full[:, basis])
        except np.linalg.LinAlgError:
            return False
        rhs = inv @ self._b
        if np.any(rhs < -self.tol) or not np.all(np.isfinite(rhs)):
            return False
        table = np.empty((self.m + 1, self.n + self.m + 1))
        table[1:, 0] = np.maximum(rhs, 0)
        table[1:, 1:] = inv @ self._full
        # row 0: minus the objective value, then reduced costs c_j - c_B B^-1 A_j
        cb = self._cost[basis]
        table[0, 0] = -(cb @ table[1:, 0])
        table[0, 1:] = self._cost - cb @ table[1:, 1:]
        self.table = table
        self.basis = basis.copy()
        return True

    @property
    def objective(self) -> float:
        return float(-self.table[0, 0])

    def _entering(self) -> int:
        reduced = self.table[0, 1:]
        if self.using_bland:
            candidates = np.flatnonzero(reduced > self.tol)
            return int(candidates[0]) if candidates.size else -1
        j = int(np.argmax(reduced))
        return j if reduced[j] > self.tol else -1

    def _leaving(self, col: int) -> int:
        column = self.table[1:, col + 1]
        rows = np.flatnonzero(column > self.tol)
        if rows.size == 0:
            return -1
        ratios = self.table[1:, 0][rows] / column[rows]
        best = ratios.min()
        ties = rows[ratios <= best + self.tol]
        if self.using_bland:
            return int(ties[np.argmin(self.basis[ties])])
        return int(ties[0])

    def pivot(self, row: int, col: int):
        t = self.table
        r, c = row + 1, col + 1
        t[r, :] /= t[r, c]
        factors = t[:, c].copy()
        factors[r] = 0
        t -= np.outer(factors, t[r, :])
        self.basis[row] = col
        self.pivots += 1

    def solve(self, max_pivots: int = 100_000) -> SolveStatus:
        stalled = 0
        while self.pivots < max_pivots:
            col = self._entering()
            if col < 0:
                return SolveStatus.OPTIMAL
            row = self._leaving(col)
            if row < 0:
                raise SolverError("linear program is unbounded")
            before = self.objective
            self.pivot(row, col)
            if self.objective <= before + self.tol:
                stalled += 1
                if stalled >= self.bland_after:
                    self.using_bland = True
            else:
                stalled = 0
        return SolveStatus.OPTIMAL if self._entering() < 0 else SolveStatus.MAX_ITERS

    def solution(self) -> np.ndarray:
        x = np.zeros(self.n + self.m)
        x[self.basis] = self.table[1:, 0]
        return x[:self.n]
