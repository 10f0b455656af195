"""Classic constructive baselines: dispatching rules and insertion.

Dispatching rules run over the same step-wise decision process as every
other constructor in this package, in the traditional non-delay manner:
candidates at each step are the jobs whose ready operation can start at the
earliest achievable time, and the rule prioritizes among them. SPT picks
the candidate with the shortest ready operation, MWR the one with the most
remaining work, MOR the one with the most remaining operations. The
randomized variants pick uniformly among the three best-ranked candidates.

INSA builds a solution by seeding the machine permutations with the longest
job and inserting the remaining operations, longest first, at the position
that minimizes the resulting makespan.
"""

from __future__ import annotations

import enum

import numpy as np

from .batched import BatchedSchedules
from .instance import Instance
from .schedule import PartialSchedule, ScheduleError, Solution, build_solution

_SENTINEL = np.int64(2**62)


class Rule(enum.Enum):
    SPT = "spt"
    MWR = "mwr"
    MOR = "mor"

    @classmethod
    def parse(cls, text: str) -> "Rule":
        try:
            return cls(text.lower())
        except ValueError:
            raise ValueError(f"unknown dispatching rule {text!r}") from None


def pdr_priority(rule: Rule, s: PartialSchedule) -> np.ndarray:
    """Priority value of every uncompleted job (NaN for completed jobs).

    SPT is minimized; MWR and MOR are maximized.
    """
    inst = s.instance
    out = np.full(inst.num_jobs, np.nan)
    for j in range(inst.num_jobs):
        if s.job_done(j):
            continue
        if rule is Rule.SPT:
            out[j] = inst.duration[s.ready_op(j)]
        elif rule is Rule.MWR:
            sl = inst.job_slice(j)
            out[j] = inst.duration[sl][s.next_op[j]:].sum()
        else:
            out[j] = inst.job_len[j] - s.next_op[j]
    return out


def _rank_keys(rule: Rule, state: BatchedSchedules, remaining_work: np.ndarray) -> np.ndarray:
    """(B, n) int64 sort keys, smaller = higher priority; non-candidates last.

    Candidates are the uncompleted jobs whose ready operation can start at
    the earliest time achievable in that schedule (non-delay dispatching).
    """
    inst = state.instance
    if rule is Rule.SPT:
        keys = inst.duration[state.ready_ops()].copy()
    elif rule is Rule.MWR:
        keys = -remaining_work
    else:
        keys = -(inst.job_len[None, :] - state.next_op)
    active = state.active_jobs()
    rows = np.arange(state.batch)[:, None]
    est = np.maximum(state.job_ready,
                     state.mach_ready[rows, inst.machine[state.ready_ops()]])
    est[~active] = _SENTINEL
    keys[est != est.min(axis=1)[:, None]] = _SENTINEL
    keys[~active] = _SENTINEL
    return keys


def _pdr_rollout(inst: Instance, rule: Rule, draws: np.ndarray | None,
                 batch: int = 1) -> BatchedSchedules:
    """Run the dispatching-rule decision process for `batch` schedules.

    draws is a (batch, o) matrix of uniforms in [0, 1) used to pick among
    the top-3 ranked candidates; None means greedy (always the top rank).
    """
    state = BatchedSchedules(inst, batch)
    rows = np.arange(batch)
    job_totals = np.array([inst.duration[inst.job_slice(j)].sum()
                           for j in range(inst.num_jobs)], dtype=np.int64)
    remaining_work = np.tile(job_totals, (batch, 1))
    for t in range(inst.num_ops):
        keys = _rank_keys(rule, state, remaining_work)
        if draws is None:
            jobs = keys.argmin(axis=1)
        else:
            order = np.argsort(keys, axis=1, kind="stable")
            k = np.minimum((keys != _SENTINEL).sum(axis=1), 3)
            pick = (draws[:, t] * k).astype(np.int64)
            jobs = order[rows, pick]
        ops = inst.job_start[jobs] + state.next_op[rows, jobs]
        remaining_work[rows, jobs] -= inst.duration[ops]
        state.step_all(jobs)
    return state


def pdr_solve(rule: Rule, inst: Instance) -> Solution:
    """Greedy dispatching: best-priority job at every step, ties to the
    lowest job index. Deterministic."""
    return _pdr_rollout(inst, rule, draws=None).to_solutions()[0]


def _sample_draws(beta: int, num_ops: int, seed: int) -> np.ndarray:
    """Per-sample uniform streams: row b depends only on (seed, b)."""
    draws = np.empty((beta, num_ops), dtype=np.float64)
    for b in range(beta):
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence((seed, b))))
        draws[b] = rng.random(num_ops)
    return draws


def pdr_randomized(rule: Rule, inst: Instance, beta: int, seed: int,
                   return_makespans: bool = False):
    """Best of `beta` randomized dispatching runs.

    Each run picks uniformly among the top-3 ranked jobs (fewer when fewer
    jobs remain). Sample b consumes a stream derived from (seed, b), so
    results are reproducible and independent of beta. Ties on the final
    makespan go to the lowest sample index.
    """
    if beta < 1:
        raise ValueError("beta must be >= 1")
    draws = _sample_draws(beta, inst.num_ops, seed)
    state = _pdr_rollout(inst, rule, draws, batch=beta)
    makespans = state.makespans()
    best = int(makespans.argmin())
    perm, start, completion = _materialize(state, best)
    sol = Solution(perm=perm, start=start, completion=completion,
                   makespan=int(makespans[best]),
                   decisions=[int(j) for j in state.decisions[best]])
    if return_makespans:
        return sol, makespans
    return sol


def _materialize(state: BatchedSchedules, b: int):
    inst = state.instance
    perm: list[list[int]] = [[] for _ in range(inst.num_machines)]
    counters = inst.job_start.copy()
    for j in state.decisions[b]:
        op = int(counters[j])
        counters[j] += 1
        perm[int(inst.machine[op])].append(op)
    return perm, state.start[b].copy(), state.completion[b].copy()


# ---------------------------------------------------------------------------
# INSA: insertion heuristic
# ---------------------------------------------------------------------------
#
# The partial schedule is a DAG over the inserted operations: job arcs link
# consecutive inserted operations of a job, machine arcs link consecutive
# entries of each machine permutation. Candidate positions are evaluated
# exactly in O(1) from the completion times H (longest path into a vertex,
# inclusive) and tails T (longest path out of a vertex, inclusive):
# inserting x between predecessors P and successors S changes the makespan to
#   max(current makespan, max(H[P]) + tau_x + max(T[S])),
# because every path avoiding x is unchanged, any path through a replaced
# arc is dominated by the corresponding path through x, and x cannot lie on
# a path into its own predecessors in an acyclic candidate.


class _InsaState:
    def __init__(self, inst: Instance):
        o = inst.num_ops
        self.inst = inst
        self.present = np.zeros(o, dtype=bool)
        self.tau = inst.duration.astype(np.int64)
        # Neighbor links among present ops; o is the "none" sentinel.
        self.jp = np.full(o, o, dtype=np.int64)
        self.js = np.full(o, o, dtype=np.int64)
        self.mp = np.full(o, o, dtype=np.int64)
        self.ms = np.full(o, o, dtype=np.int64)
        self.perm: list[list[int]] = [[] for _ in range(inst.num_machines)]
        self.H = np.zeros(o + 1, dtype=np.int64)
        self.T = np.zeros(o + 1, dtype=np.int64)
        self.makespan = 0

    def _sweep(self, out: np.ndarray, link_a: np.ndarray, link_b: np.ndarray) -> None:
        """Fixpoint of out[v] = tau[v] + max(out[a(v)], out[b(v)]) over present ops."""
        o = self.inst.num_ops
        out[:] = 0
        while True:
            nxt = self.tau + np.maximum(out[link_a], out[link_b])
            nxt[~self.present] = 0
            if np.array_equal(nxt, out[:o]):
                break
            out[:o] = nxt

    def _reach_from(self, source: int, via_succ: bool) -> np.ndarray:
        """Boolean (o+1,): ops with a path from `source` (descendants when
        via_succ, ancestors otherwise), inclusive of source."""
        o = self.inst.num_ops
        r = np.zeros(o + 1, dtype=bool)
        r[source] = True
        if via_succ:
            link_a, link_b = self.js, self.ms
        else:
            link_a, link_b = self.jp, self.mp
        while True:
            nxt = (r[:o] | r[link_a] | r[link_b]) & self.present
            nxt[source] = True
            if np.array_equal(nxt, r[:o]):
                break
            r[:o] = nxt
        return r

    def job_neighbors(self, x: int) -> tuple[int, int]:
        """Nearest present job predecessor/successor of x (sentinel if none)."""
        inst = self.inst
        o = inst.num_ops
        job = int(np.searchsorted(inst.job_start, x, side="right")) - 1
        lo = int(inst.job_start[job])
        hi = lo + int(inst.job_len[job])
        jp = o
        for v in range(x - 1, lo - 1, -1):
            if self.present[v]:
                jp = v
                break
        js = o
        for v in range(x + 1, hi):
            if self.present[v]:
                js = v
                break
        return jp, js

    def candidate_positions(self, x: int, jp: int, js: int) -> range:
        """Feasible (acyclic) insertion positions in x's machine permutation.

        Descendants of js occupy a suffix of the permutation and ancestors of
        jp a prefix, so the feasible positions form a contiguous window.
        """
        o = self.inst.num_ops
        perm = self.perm[int(self.inst.machine[x])]
        k = len(perm)
        left = 0
        if jp != o:
            anc = self._reach_from(jp, via_succ=False)
            for q in range(k - 1, -1, -1):
                if anc[perm[q]]:
                    left = q + 1
                    break
        right = k
        if js != o:
            desc = self._reach_from(js, via_succ=True)
            for q in range(k):
                if desc[perm[q]]:
                    right = q
                    break
        if left > right:
            raise ScheduleError(f"no feasible insertion position for op {x}")
        return range(left, right + 1)

    def insertion_makespan(self, x: int, pos: int, jp: int, js: int) -> int:
        """Exact makespan after inserting x at `pos`, without inserting it."""
        o = self.inst.num_ops
        perm = self.perm[int(self.inst.machine[x])]
        mp = perm[pos - 1] if pos > 0 else o
        ms = perm[pos] if pos < len(perm) else o
        head = max(int(self.H[jp]), int(self.H[mp]))
        tail = max(int(self.T[js]), int(self.T[ms]))
        return max(self.makespan, head + int(self.tau[x]) + tail)

    def insert(self, x: int, pos: int, jp: int, js: int) -> None:
        o = self.inst.num_ops
        perm = self.perm[int(self.inst.machine[x])]
        mp = perm[pos - 1] if pos > 0 else o
        ms = perm[pos] if pos < len(perm) else o
        perm.insert(pos, x)
        self.present[x] = True
        self.jp[x], self.js[x] = jp, js
        self.mp[x], self.ms[x] = mp, ms
        if jp != o:
            self.js[jp] = x
        if js != o:
            self.jp[js] = x
        if mp != o:
            self.ms[mp] = x
        if ms != o:
            self.mp[ms] = x
        self._sweep(self.H, self.jp, self.mp)
        self._sweep(self.T, self.js, self.ms)
        self.makespan = int(self.H[:o].max()) if o else 0


def _insa_insertion_order(inst: Instance) -> tuple[int, list[int]]:
    """Seed job (max total duration) and the remaining ops, longest first."""
    totals = np.array([inst.duration[inst.job_slice(j)].sum()
                       for j in range(inst.num_jobs)], dtype=np.int64)
    seed_job = int(totals.argmax())
    rest = [i for j in range(inst.num_jobs) if j != seed_job
            for i in range(*inst.job_slice(j).indices(inst.num_ops))]
    rest.sort(key=lambda i: (-int(inst.duration[i]), i))
    return seed_job, rest


def _decisions_from_dag(inst: Instance, state: _InsaState) -> list[int]:
    """A construction order of the final DAG: Kahn's algorithm, earliest
    start first (ties to the lowest job index)."""
    import heapq

    o = inst.num_ops
    job_of = inst.job_of_op()
    start = state.H[:o] - state.tau
    indeg = np.zeros(o, dtype=np.int64)
    for x in range(o):
        indeg[x] = (state.jp[x] != o) + (state.mp[x] != o)
    heap = [(int(start[x]), int(job_of[x]), x) for x in range(o) if indeg[x] == 0]
    heapq.heapify(heap)
    out = []
    while heap:
        _, _, x = heapq.heappop(heap)
        out.append(int(job_of[x]))
        for nxt in (int(state.js[x]), int(state.ms[x])):
            if nxt != o:
                indeg[nxt] -= 1
                if indeg[nxt] == 0:
                    heapq.heappush(heap, (int(start[nxt]), int(job_of[nxt]), nxt))
    if len(out) != o:
        raise ScheduleError("final insertion graph contains a cycle")
    return out


def insa(inst: Instance) -> Solution:
    """Insertion heuristic: seed with the longest job, then insert every
    remaining operation, longest first, at the makespan-minimizing feasible
    position of its machine permutation."""
    state = _InsaState(inst)
    seed_job, rest = _insa_insertion_order(inst)
    sl = inst.job_slice(seed_job)
    for x in range(sl.start, sl.stop):
        jp, js = state.job_neighbors(x)
        pos = len(state.perm[int(inst.machine[x])])
        state.insert(x, pos, jp, js)
    for x in rest:
        jp, js = state.job_neighbors(x)
        best_pos, best_val = None, None
        for pos in state.candidate_positions(x, jp, js):
            val = state.insertion_makespan(x, pos, jp, js)
            if best_val is None or val < best_val:
                best_pos, best_val = pos, val
        state.insert(x, best_pos, jp, js)
    decisions = _decisions_from_dag(inst, state)
    return build_solution(inst, decisions)


def _insa_reference(inst: Instance) -> Solution:
    """Literal INSA: every candidate evaluated by a full longest-path
    recomputation of the candidate DAG. Quadratic; used to cross-check
    the incremental implementation on small instances."""
    seed_job, rest = _insa_insertion_order(inst)
    perm: list[list[int]] = [[] for _ in range(inst.num_machines)]
    present: list[int] = []
    sl = inst.job_slice(seed_job)
    for x in range(sl.start, sl.stop):
        perm[int(inst.machine[x])].append(x)
        present.append(x)

    def longest_path(perms: list[list[int]], ops: list[int]):
        """(makespan, H) for the DAG over `ops`, or None when cyclic."""
        job_of = inst.job_of_op()
        preds: dict[int, list[int]] = {x: [] for x in ops}
        by_job: dict[int, list[int]] = {}
        for x in sorted(ops):
            by_job.setdefault(int(job_of[x]), []).append(x)
        for chain in by_job.values():
            for a, b in zip(chain, chain[1:]):
                preds[b].append(a)
        for p in perms:
            for a, b in zip(p, p[1:]):
                preds[b].append(a)
        succs: dict[int, list[int]] = {x: [] for x in ops}
        indeg = {x: len(preds[x]) for x in ops}
        for b, ps in preds.items():
            for a in ps:
                succs[a].append(b)
        ready = [x for x in ops if indeg[x] == 0]
        h: dict[int, int] = {}
        done = 0
        while ready:
            x = ready.pop()
            h[x] = int(inst.duration[x]) + max((h[a] for a in preds[x]), default=0)
            done += 1
            for b in succs[x]:
                indeg[b] -= 1
                if indeg[b] == 0:
                    ready.append(b)
        if done != len(ops):
            return None
        return (max(h.values(), default=0), h)

    for x in rest:
        mach = int(inst.machine[x])
        best = None
        for pos in range(len(perm[mach]) + 1):
            cand = [p.copy() for p in perm]
            cand[mach].insert(pos, x)
            res = longest_path(cand, present + [x])
            if res is None:
                continue
            if best is None or res[0] < best[0]:
                best = (res[0], pos)
        if best is None:
            raise ScheduleError(f"no feasible insertion position for op {x}")
        perm[mach].insert(best[1], x)
        present.append(x)

    final = longest_path(perm, present)
    assert final is not None
    _, h = final
    state = _InsaState(inst)
    # Rebuild links for the decision extraction.
    for mach, p in enumerate(perm):
        state.perm[mach] = p.copy()
    state.present[:] = True
    o = inst.num_ops
    job_of = inst.job_of_op()
    for j in range(inst.num_jobs):
        s = inst.job_slice(j)
        chain = list(range(s.start, s.stop))
        for a, b in zip(chain, chain[1:]):
            state.js[a] = b
            state.jp[b] = a
    for p in perm:
        for a, b in zip(p, p[1:]):
            state.ms[a] = b
            state.mp[b] = a
    state.H[:o] = np.array([h[x] for x in range(o)], dtype=np.int64)
    decisions = _decisions_from_dag(inst, state)
    return build_solution(inst, decisions)
