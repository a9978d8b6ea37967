"""Exact solver for the balanced transportation problem.

Minimizes sum(F[i, j] * cost[i, j]) over flows F >= 0 with fixed row sums
`supply` and column sums `demand`. Instances here are tiny (document
histograms of a few dozen terms at most), so a dense transportation simplex
with dual (MODI) pricing is both exact and fast: no scaling, no relaxation.

The implementation keeps the basis as a spanning tree over row and column
nodes. Pivots use the most-negative reduced cost with deterministic index
tie-breaking; if an unusually long degenerate run is detected, pricing
switches to Bland's smallest-index rule, which guarantees termination. The
final flows are re-derived from the optimal basis by leaf elimination against
the exact marginals, so returned row/column sums match the inputs to float
round-off.
"""

from __future__ import annotations

from typing import Sequence

from .errors import ValidationError

_OPT_TOL = 1e-11


def _northwest_corner(supply: Sequence[float], demand: Sequence[float]):
    m, n = len(supply), len(demand)
    ra, rb = list(supply), list(demand)
    flow: dict[tuple[int, int], float] = {}
    i = j = 0
    while True:
        x = ra[i] if ra[i] < rb[j] else rb[j]
        flow[(i, j)] = x
        ra[i] -= x
        rb[j] -= x
        if i == m - 1 and j == n - 1:
            break
        if ra[i] == 0.0 and i < m - 1:
            i += 1
        else:
            j += 1
    return flow


def solve_transport(
    supply: Sequence[float],
    demand: Sequence[float],
    cost: Sequence[Sequence[float]],
) -> tuple[float, dict[tuple[int, int], float]]:
    """Return (optimal objective, basic optimal flow as {(i, j): mass}).

    Supplies and demands must be non-negative and balanced to ~1e-9 of their
    total; the flow dict contains the basis cells (some may carry zero mass
    on degenerate instances).
    """
    m, n = len(supply), len(demand)
    if m == 0 or n == 0:
        raise ValidationError("empty supply or demand")
    if min(supply) < 0.0 or min(demand) < 0.0:
        raise ValidationError("negative masses")
    total_s, total_d = sum(supply), sum(demand)
    if abs(total_s - total_d) > 1e-9 * max(1.0, total_s, total_d):
        raise ValidationError(f"unbalanced problem: {total_s} vs {total_d}")
    rows = [list(map(float, cost[i])) for i in range(m)]
    if any(len(r) != n for r in rows):
        raise ValidationError("cost matrix shape does not match supply/demand")

    flow = _northwest_corner(supply, demand)
    basis = set(flow)
    # basis spanning tree adjacency: row i is node i, column j is node m + j
    adj: list[set[int]] = [set() for _ in range(m + n)]
    for (i, j) in basis:
        adj[i].add(m + j)
        adj[m + j].add(i)

    u = [0.0] * m
    v = [0.0] * n
    limit_plain = 400 * (m + n)
    limit_total = limit_plain + 4000 * (m + n)
    iteration = 0
    while True:
        iteration += 1
        if iteration > limit_total:
            raise RuntimeError("transportation simplex failed to converge")
        bland = iteration > limit_plain

        # duals from the basis tree, rooted at row 0
        seen = [False] * (m + n)
        seen[0] = True
        stack = [0]
        while stack:
            node = stack.pop()
            if node < m:
                ui = u[node]
                crow = rows[node]
                for nxt in adj[node]:
                    if not seen[nxt]:
                        seen[nxt] = True
                        v[nxt - m] = crow[nxt - m] - ui
                        stack.append(nxt)
            else:
                jj = node - m
                vj = v[jj]
                for nxt in adj[node]:
                    if not seen[nxt]:
                        seen[nxt] = True
                        u[nxt] = rows[nxt][jj] - vj
                        stack.append(nxt)

        # entering cell: most negative reduced cost (first hit under Bland)
        ei = ej = -1
        best = -_OPT_TOL
        for i in range(m):
            ui = u[i]
            crow = rows[i]
            for j in range(n):
                r = crow[j] - ui - v[j]
                if r < best and (i, j) not in basis:
                    ei, ej = i, j
                    best = r
                    if bland:
                        break
            if bland and ei >= 0:
                break
        if ei < 0:
            break

        # unique cycle: tree path from row node ei to column node m + ej
        parent: dict[int, int] = {ei: -1}
        stack = [ei]
        target = m + ej
        while target not in parent:
            node = stack.pop()
            for nxt in adj[node]:
                if nxt not in parent:
                    parent[nxt] = node
                    stack.append(nxt)
        path = []
        node = target
        while parent[node] != -1:
            p = parent[node]
            path.append((node, p - m) if node < m else (p, node - m))
            node = p
        # signs alternate along the cycle, entering cell positive
        minus = path[0::2]
        plus = [(ei, ej)] + path[1::2]
        theta = min(flow[c] for c in minus)
        leave = min(c for c in minus if flow[c] == theta)
        if theta != 0.0:
            for c in plus:
                flow[c] = flow.get(c, 0.0) + theta
            for c in minus:
                flow[c] -= theta
        else:
            flow.setdefault((ei, ej), 0.0)
        del flow[leave]
        basis.remove(leave)
        basis.add((ei, ej))
        li, lj = leave
        adj[li].discard(m + lj)
        adj[m + lj].discard(li)
        adj[ei].add(m + ej)
        adj[m + ej].add(ei)

    # re-derive flows on the optimal basis from exact marginals
    ra, rb = list(map(float, supply)), list(map(float, demand))
    deg = [len(s) for s in adj]
    cells_at: list[list[tuple[int, int]]] = [[] for _ in range(m + n)]
    for (i, j) in basis:
        cells_at[i].append((i, j))
        cells_at[m + j].append((i, j))
    alive = set(basis)
    leaves = [k for k in range(m + n) if deg[k] == 1]
    out: dict[tuple[int, int], float] = {}
    while leaves:
        node = leaves.pop()
        cell = None
        for c in cells_at[node]:
            if c in alive:
                cell = c
                break
        if cell is None:
            continue
        i, j = cell
        x = ra[i] if node < m else rb[j]
        if x < 0.0:
            x = 0.0
        out[cell] = x
        ra[i] -= x
        rb[j] -= x
        alive.remove(cell)
        for k in (i, m + j):
            deg[k] -= 1
            if deg[k] == 1:
                leaves.append(k)

    objective = 0.0
    for (i, j), x in out.items():
        objective += x * rows[i][j]
    return objective, out
