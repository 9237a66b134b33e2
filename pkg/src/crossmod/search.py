"""Backtracking enumeration with constraint propagation.

Both counting paths (diagram colorings and presentation morphisms) are
phrased as a finite set of integer variables plus constraints.  A constraint
always knows how to *check* itself once its variables are assigned; it may
also know how to *solve* for one variable from the others, or how to
*restrict* the candidate values of a variable (a fiber of the boundary map).

:func:`build_plan` turns the constraints into a static schedule of branch,
compute and check steps; :func:`count` and :func:`solutions` run it.
Propagation is preferred over branching, and every check is scheduled as
early as its variables allow.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator, Mapping, Sequence

Values = list[int]


@dataclass
class Constraint:
    vars: tuple[int, ...]
    check: Callable[[Values], bool]
    solve: Mapping[int, Callable[[Values], int]] = field(default_factory=dict)
    # (var, fn) : candidate values for var once the other vars are assigned
    restrict: tuple[int, Callable[[Values], Sequence[int]]] | None = None
    label: str = ""


BRANCH, COMPUTE, CHECK = 0, 1, 2


@dataclass
class Plan:
    n_vars: int
    steps: list[tuple]  # (BRANCH, var, candidates_fn) | (COMPUTE, var, fn) | (CHECK, fn, label)
    branch_vars: list[int]


def build_plan(
    domains: Sequence[int],
    constraints: Sequence[Constraint],
    branch_order: Sequence[int],
) -> Plan:
    """Schedule the search.

    ``domains[v]`` is the number of values of variable ``v``;
    ``branch_order`` lists variables in the order they should be branched on
    when nothing can be propagated.  Variables missing from it are appended.
    """
    n = len(domains)
    assigned = [False] * n
    used = [False] * len(constraints)
    steps: list[tuple] = []
    branched: list[int] = []

    def flush() -> None:
        progress = True
        while progress:
            progress = False
            for i, c in enumerate(constraints):
                if not used[i] and all(assigned[v] for v in c.vars):
                    steps.append((CHECK, c.check, c.label))
                    used[i] = True
            for i, c in enumerate(constraints):
                if used[i] or not c.solve:
                    continue
                free = [v for v in set(c.vars) if not assigned[v]]
                if len(free) == 1 and free[0] in c.solve:
                    v = free[0]
                    steps.append((COMPUTE, v, c.solve[v]))
                    assigned[v] = True
                    used[i] = True
                    progress = True
                    break

    order = list(branch_order) + [v for v in range(n) if v not in set(branch_order)]
    for v in order:
        flush()
        if assigned[v]:
            continue
        cand = None
        for i, c in enumerate(constraints):
            if used[i] or c.restrict is None or c.restrict[0] != v:
                continue
            if all(assigned[u] for u in c.vars if u != v):
                cand = c.restrict[1]
                used[i] = True
                break
        if cand is None:
            size = domains[v]
            full = range(size)
            cand = lambda values, full=full: full  # noqa: E731
        steps.append((BRANCH, v, cand))
        branched.append(v)
        assigned[v] = True
    flush()
    return Plan(n, steps, branched)


def count(plan: Plan, shard: int = 0, jobs: int = 1) -> int:
    """Number of complete assignments passing every check.

    With ``jobs > 1`` only the ``shard``-th slice of the first branch step's
    candidates is explored, so summing over all shards gives the total.
    """
    steps = plan.steps
    values = [0] * plan.n_vars
    nsteps = len(steps)
    first_branch = next((i for i, s in enumerate(steps) if s[0] == BRANCH), -1)
    if first_branch < 0 and shard > 0:
        return 0  # nothing to split; shard 0 owns the single leaf

    def run(i: int) -> int:
        while i < nsteps:
            kind, a, b = steps[i]
            if kind == CHECK:
                if not a(values):
                    return 0
            elif kind == COMPUTE:
                values[a] = b(values)
            else:
                cands = b(values)
                if i == first_branch and jobs > 1:
                    cands = list(cands)[shard::jobs]
                total = 0
                for x in cands:
                    values[a] = x
                    total += run(i + 1)
                return total
            i += 1
        return 1

    return run(0)


def solutions(plan: Plan, shard: int = 0, jobs: int = 1) -> Iterator[tuple[int, ...]]:
    """Yield every complete assignment passing all checks, as a tuple.

    ``shard`` and ``jobs`` split the first branch step as in :func:`count`.
    """
    steps = plan.steps
    values = [0] * plan.n_vars
    nsteps = len(steps)
    first_branch = next((i for i, s in enumerate(steps) if s[0] == BRANCH), -1)
    if first_branch < 0 and shard > 0:
        return iter(())

    def run(i: int) -> Iterator[tuple[int, ...]]:
        while i < nsteps:
            kind, a, b = steps[i]
            if kind == CHECK:
                if not a(values):
                    return
            elif kind == COMPUTE:
                values[a] = b(values)
            else:
                cands = list(b(values))
                if i == first_branch and jobs > 1:
                    cands = cands[shard::jobs]
                for x in cands:
                    values[a] = x
                    yield from run(i + 1)
                return
            i += 1
        yield tuple(values)

    return run(0)


def parallel_count(worker: Callable[..., int], args: tuple, jobs: int) -> int:
    """Sum ``worker(*args, shard, jobs)`` over all shards.

    ``worker`` must be a module-level function (it is pickled) that builds
    its own plan and runs only the given shard.
    """
    if jobs <= 1:
        return worker(*args, 0, 1)
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(worker, *args, k, jobs) for k in range(jobs)]
        return sum(f.result() for f in futures)
