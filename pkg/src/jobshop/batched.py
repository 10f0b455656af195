"""Lockstep construction of many schedules over one instance.

All B schedules advance one decision per step, so state lives in batched
arrays and each step is a handful of vectorized operations. Semantics are
identical to stepping B independent PartialSchedules; tests enforce this.
"""

from __future__ import annotations

import numpy as np

from .features import batched_context_features
from .instance import Instance
from .schedule import ScheduleError, Solution


class BatchedSchedules:
    """B partial schedules over the same instance, advanced in lockstep."""

    def __init__(self, inst: Instance, batch: int):
        if batch < 1:
            raise ValueError("batch must be >= 1")
        self.instance = inst
        self.batch = batch
        n, m, o = inst.num_jobs, inst.num_machines, inst.num_ops
        self.t = 0
        self.next_op = np.zeros((batch, n), dtype=np.int64)
        self.job_ready = np.zeros((batch, n), dtype=np.int64)
        self.mach_ready = np.zeros((batch, m), dtype=np.int64)
        self.start = np.full((batch, o), -1, dtype=np.int64)
        self.completion = np.full((batch, o), -1, dtype=np.int64)
        self.decisions = np.full((batch, o), -1, dtype=np.int64)
        self._rows = np.arange(batch)

    @property
    def is_complete(self) -> bool:
        return self.t == self.instance.num_ops

    def active_jobs(self) -> np.ndarray:
        """Boolean (B, n): jobs that still have unscheduled operations."""
        return self.next_op < self.instance.job_len[None, :]

    def ready_ops(self) -> np.ndarray:
        """(B, n) global op index of each job's ready op (clamped when done)."""
        inst = self.instance
        clamped = np.minimum(self.next_op, inst.job_len[None, :] - 1)
        return inst.job_start[None, :] + clamped

    def step_all(self, jobs: np.ndarray) -> None:
        """Schedule the ready op of jobs[b] in every schedule b."""
        inst = self.instance
        jobs = np.asarray(jobs, dtype=np.int64)
        if jobs.shape != (self.batch,):
            raise ValueError(f"expected {self.batch} job choices, got shape {jobs.shape}")
        chosen_next = self.next_op[self._rows, jobs]
        if (chosen_next >= inst.job_len[jobs]).any():
            bad = int(np.flatnonzero(chosen_next >= inst.job_len[jobs])[0])
            raise ScheduleError(
                f"schedule {bad}: job {int(jobs[bad])} is already completed at step {self.t}")
        ops = inst.job_start[jobs] + chosen_next
        machs = inst.machine[ops]
        st = np.maximum(self.job_ready[self._rows, jobs], self.mach_ready[self._rows, machs])
        en = st + inst.duration[ops]
        self.start[self._rows, ops] = st
        self.completion[self._rows, ops] = en
        self.job_ready[self._rows, jobs] = en
        self.mach_ready[self._rows, machs] = en
        self.next_op[self._rows, jobs] += 1
        self.decisions[:, self.t] = jobs
        self.t += 1

    def makespans(self) -> np.ndarray:
        """(B,) current makespan of every schedule (0 while empty)."""
        if self.t == 0:
            return np.zeros(self.batch, dtype=np.int64)
        return self.mach_ready.max(axis=1)

    def context_features(self) -> np.ndarray:
        """(B, n, 11) context features for every schedule."""
        inst = self.instance
        return batched_context_features(
            self.next_op, self.job_ready, self.mach_ready,
            inst.job_start, inst.job_len, inst.machine)

    def to_solutions(self) -> list[Solution]:
        """Materialize all B schedules as Solution objects."""
        if not self.is_complete:
            raise ScheduleError("schedules are not complete")
        inst = self.instance
        makespans = self.makespans()
        out = []
        for b in range(self.batch):
            perm: list[list[int]] = [[] for _ in range(inst.num_machines)]
            counters = inst.job_start.copy()
            for j in self.decisions[b]:
                op = int(counters[j])
                counters[j] += 1
                perm[int(inst.machine[op])].append(op)
            out.append(Solution(
                perm=perm,
                start=self.start[b].copy(),
                completion=self.completion[b].copy(),
                makespan=int(makespans[b]),
                decisions=[int(j) for j in self.decisions[b]],
            ))
        return out
