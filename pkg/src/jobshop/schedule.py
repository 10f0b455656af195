"""Step-wise construction of job-shop schedules.

A schedule is built as a sequence of decisions: at each step one uncompleted
job is selected and its unique ready operation is appended to the permutation
of its machine, starting as early as the job and machine frontiers allow
(semi-active appending). Every decision sequence of length o yields a
feasible solution.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .instance import Instance


class ScheduleError(ValueError):
    """Raised on contract violations, e.g. stepping a completed job."""


@dataclass
class Solution:
    """A completed schedule.

    perm: per machine, the ordered operation ids scheduled on it.
    start, completion: per-operation times, shape (o,).
    makespan: max completion time.
    decisions: the job-selection sequence that builds this schedule.
    """

    perm: list[list[int]]
    start: np.ndarray
    completion: np.ndarray
    makespan: int
    decisions: list[int]


class PartialSchedule:
    """Mutable constructive state over a fixed instance.

    Single-owner: one schedule is never shared across threads. Run many
    independent PartialSchedules for parallelism.
    """

    def __init__(self, inst: Instance):
        self.instance = inst
        self.t = 0
        self.next_op = np.zeros(inst.num_jobs, dtype=np.int64)
        self.job_ready = np.zeros(inst.num_jobs, dtype=np.int64)
        self.mach_ready = np.zeros(inst.num_machines, dtype=np.int64)
        self.perm: list[list[int]] = [[] for _ in range(inst.num_machines)]
        self.start = np.full(inst.num_ops, -1, dtype=np.int64)
        self.completion = np.full(inst.num_ops, -1, dtype=np.int64)
        self.decisions: list[int] = []

    @property
    def is_complete(self) -> bool:
        return self.t == self.instance.num_ops

    def job_done(self, job: int) -> bool:
        return self.next_op[job] >= self.instance.job_len[job]

    def legal_jobs(self) -> list[int]:
        return [j for j in range(self.instance.num_jobs) if not self.job_done(j)]

    def ready_op(self, job: int) -> int:
        """Global id of job's ready operation. Errors if the job is done."""
        if self.job_done(job):
            raise ScheduleError(f"job {job} has no ready operation")
        return int(self.instance.job_start[job] + self.next_op[job])

    def step(self, job: int) -> "PartialSchedule":
        """Schedule the ready operation of `job`; returns self for chaining."""
        inst = self.instance
        if not 0 <= job < inst.num_jobs:
            raise ScheduleError(f"job index {job} out of range")
        if self.job_done(job):
            raise ScheduleError(f"job {job} is already completed at step {self.t}")
        op = int(inst.job_start[job] + self.next_op[job])
        mach = int(inst.machine[op])
        start = max(int(self.job_ready[job]), int(self.mach_ready[mach]))
        end = start + int(inst.duration[op])
        self.start[op] = start
        self.completion[op] = end
        self.perm[mach].append(op)
        self.job_ready[job] = end
        self.mach_ready[mach] = end
        self.next_op[job] += 1
        self.t += 1
        self.decisions.append(job)
        return self

    def copy(self) -> "PartialSchedule":
        c = PartialSchedule.__new__(PartialSchedule)
        c.instance = self.instance
        c.t = self.t
        c.next_op = self.next_op.copy()
        c.job_ready = self.job_ready.copy()
        c.mach_ready = self.mach_ready.copy()
        c.perm = [p.copy() for p in self.perm]
        c.start = self.start.copy()
        c.completion = self.completion.copy()
        c.decisions = self.decisions.copy()
        return c

    def to_solution(self) -> Solution:
        if not self.is_complete:
            raise ScheduleError(f"schedule incomplete: {self.t} of {self.instance.num_ops} steps")
        return Solution(
            perm=[p.copy() for p in self.perm],
            start=self.start.copy(),
            completion=self.completion.copy(),
            makespan=makespan_of(self),
            decisions=self.decisions.copy(),
        )


def new_schedule(inst: Instance) -> PartialSchedule:
    return PartialSchedule(inst)


def makespan_of(s: PartialSchedule | Solution) -> int:
    """Max completion over scheduled operations; 0 for an empty schedule."""
    if isinstance(s, Solution):
        return int(s.completion.max()) if len(s.completion) else 0
    if s.t == 0:
        return 0
    return int(max(s.mach_ready.max(), 0))


def build_solution(inst: Instance, decisions) -> Solution:
    """Apply a full decision sequence and return the resulting solution."""
    s = PartialSchedule(inst)
    for j in decisions:
        s.step(int(j))
    return s.to_solution()


def validate_solution(inst: Instance, sol: Solution) -> list[str]:
    """Check feasibility; returns a list of violations (empty means valid).

    Never raises on inconsistent input: every problem is reported as text.
    """
    out: list[str] = []
    o = inst.num_ops
    if len(sol.perm) != inst.num_machines:
        out.append(f"expected {inst.num_machines} machine permutations, got {len(sol.perm)}")
        return out
    if len(sol.start) != o or len(sol.completion) != o:
        out.append("start/completion arrays do not match the operation count")
        return out
    for mach in range(inst.num_machines):
        expect = set(np.flatnonzero(inst.machine == mach).tolist())
        got = list(sol.perm[mach])
        if set(got) != expect or len(got) != len(expect):
            out.append(f"machine {mach}: permutation is not a permutation of its operations")
    for i in range(o):
        if sol.completion[i] != sol.start[i] + inst.duration[i]:
            out.append(f"op {i}: completion != start + duration")
    for j in range(inst.num_jobs):
        s0, l = int(inst.job_start[j]), int(inst.job_len[j])
        for k in range(1, l):
            i = s0 + k
            if sol.start[i] < sol.completion[i - 1]:
                out.append(f"op {i}: starts before job predecessor {i - 1} completes")
    for mach in range(inst.num_machines):
        p = sol.perm[mach]
        for a, b in zip(p, p[1:]):
            if sol.start[b] < sol.completion[a]:
                out.append(f"machine {mach}: ops {a} and {b} overlap")
    recomputed = int(sol.completion.max()) if o else 0
    if sol.makespan != recomputed:
        out.append(f"makespan mismatch: reported {sol.makespan}, recomputed {recomputed}")
    return out


def brute_force_optimum(inst: Instance, op_limit: int = 12) -> tuple[int, Solution]:
    """Exact minimum makespan by exhaustive search of the decision tree.

    Memoizes on (next_op, frontier) states, shifted so the earliest frontier
    is zero; the future cost of a state is invariant under time translation.
    Refuses instances with more than `op_limit` operations.
    """
    o = inst.num_ops
    if o > op_limit:
        raise ScheduleError(f"instance has {o} ops, above the brute-force limit {op_limit}")
    n = inst.num_jobs
    job_start = inst.job_start
    job_len = inst.job_len
    machine = inst.machine
    duration = inst.duration

    memo: dict[tuple, tuple[int, ...]] = {}

    def future(next_op: tuple[int, ...], job_ready: tuple[int, ...],
               mach_ready: tuple[int, ...]) -> tuple[int, ...]:
        """(best max completion over remaining ops, best decision suffix).

        Returns (0, ()) when no operations remain.
        """
        legal = [j for j in range(n) if next_op[j] < job_len[j]]
        if not legal:
            return (0, ())
        shift = min(min(job_ready[j] for j in legal),
                    min(mach_ready))
        key = (next_op,
               tuple(job_ready[j] - shift if next_op[j] < job_len[j] else 0
                     for j in range(n)),
               tuple(r - shift for r in mach_ready))
        hit = memo.get(key)
        if hit is not None:
            return (hit[0] + shift, hit[1])
        best = None
        best_suffix: tuple[int, ...] = ()
        for j in legal:
            op = int(job_start[j] + next_op[j])
            mach = int(machine[op])
            start = max(job_ready[j], mach_ready[mach])
            end = start + int(duration[op])
            jr = job_ready[:j] + (end,) + job_ready[j + 1:]
            mr = mach_ready[:mach] + (end,) + mach_ready[mach + 1:]
            no = next_op[:j] + (next_op[j] + 1,) + next_op[j + 1:]
            sub, suffix = future(no, jr, mr)
            val = max(end, sub)
            if best is None or val < best:
                best = val
                best_suffix = (j,) + suffix
        memo[key] = (best - shift, best_suffix)
        return (best, best_suffix)

    _, decisions = future((0,) * n, (0,) * n, (0,) * inst.num_machines)
    sol = build_solution(inst, decisions)
    return sol.makespan, sol
