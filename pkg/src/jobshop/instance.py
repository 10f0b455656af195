"""Job-shop problem instances and their disjunctive-graph view.

An instance is a set of jobs, each a fixed sequence of operations. Operations
are numbered globally and contiguously: job j owns indices
``job_start[j] .. job_start[j] + job_len[j] - 1``, in processing order.
Every operation runs on one machine for an integer duration.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class InstanceError(ValueError):
    """Raised when instance data violates the structural invariants."""


@dataclass(frozen=True)
class Instance:
    """Immutable problem data for one job-shop instance.

    Attributes:
        name: Text label, e.g. a benchmark instance name.
        machine: Per-operation machine id, shape (o,), values in [0, m).
        duration: Per-operation processing time, shape (o,), non-negative ints.
        job_start: Global index of each job's first operation, shape (n,).
        job_len: Number of operations of each job, shape (n,).
    """

    name: str
    machine: np.ndarray
    duration: np.ndarray
    job_start: np.ndarray
    job_len: np.ndarray
    num_machines: int

    def __post_init__(self):
        machine = np.ascontiguousarray(self.machine, dtype=np.int64)
        duration = np.ascontiguousarray(self.duration, dtype=np.int64)
        job_start = np.ascontiguousarray(self.job_start, dtype=np.int64)
        job_len = np.ascontiguousarray(self.job_len, dtype=np.int64)
        for f, v in (("machine", machine), ("duration", duration),
                     ("job_start", job_start), ("job_len", job_len)):
            object.__setattr__(self, f, v)
        if len(job_start) != len(job_len) or len(job_start) == 0:
            raise InstanceError("need at least one job with matching start/len arrays")
        if machine.shape != duration.shape:
            raise InstanceError("machine and duration arrays differ in length")
        expected = np.concatenate([[0], np.cumsum(job_len)[:-1]])
        if not np.array_equal(job_start, expected):
            raise InstanceError("job_start is not the cumulative sum of job_len")
        if int(job_len.sum()) != len(machine):
            raise InstanceError("operation count does not match sum of job lengths")
        if (duration < 0).any():
            raise InstanceError("negative duration")
        if self.num_machines < 1:
            raise InstanceError("need at least one machine")
        if len(machine) and (machine.min() < 0 or machine.max() >= self.num_machines):
            raise InstanceError("machine id out of range")

    @property
    def num_jobs(self) -> int:
        return len(self.job_start)

    @property
    def num_ops(self) -> int:
        return len(self.machine)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.num_jobs, self.num_machines)

    def op_index(self, job: int, k: int) -> int:
        """Global index of job's k-th operation (0-based within the job)."""
        return int(self.job_start[job] + k)

    def job_of_op(self) -> np.ndarray:
        """Per-operation job index, shape (o,)."""
        return np.repeat(np.arange(self.num_jobs), self.job_len)

    def job_slice(self, job: int) -> slice:
        s = int(self.job_start[job])
        return slice(s, s + int(self.job_len[job]))


def make_instance(machine_order, durations, name: str = "") -> Instance:
    """Build an Instance from per-job lists of machine ids and durations.

    Args:
        machine_order: For each job, the machines visited in order.
        durations: For each job, the matching processing times.
    """
    if len(machine_order) != len(durations):
        raise InstanceError("machine_order and durations differ in job count")
    job_len = np.array([len(ms) for ms in machine_order], dtype=np.int64)
    for ms, ds in zip(machine_order, durations):
        if len(ms) != len(ds):
            raise InstanceError("machine/duration rows differ in length within a job")
    machine = np.array([m for ms in machine_order for m in ms], dtype=np.int64)
    duration = np.array([d for ds in durations for d in ds], dtype=np.int64)
    job_start = np.concatenate([[0], np.cumsum(job_len)[:-1]]).astype(np.int64)
    num_machines = int(machine.max()) + 1 if len(machine) else 1
    return Instance(name=name, machine=machine, duration=duration,
                    job_start=job_start, job_len=job_len,
                    num_machines=num_machines)


def generate_instance(n: int, m: int, seed: int, name: str | None = None) -> Instance:
    """Generate a random n-jobs x m-machines instance.

    Each job visits every machine exactly once in uniformly random order;
    durations are uniform integers in [1, 99]. Deterministic for fixed
    (n, m, seed).
    """
    if n < 1 or m < 1:
        raise InstanceError(f"invalid shape {n}x{m}")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    machines = np.empty((n, m), dtype=np.int64)
    durs = np.empty((n, m), dtype=np.int64)
    for j in range(n):
        machines[j] = rng.permutation(m)
        durs[j] = rng.integers(1, 100, size=m)
    if name is None:
        name = f"rand{n}x{m}s{seed}"
    return Instance(
        name=name,
        machine=machines.reshape(-1),
        duration=durs.reshape(-1),
        job_start=np.arange(n, dtype=np.int64) * m,
        job_len=np.full(n, m, dtype=np.int64),
        num_machines=m,
    )


@dataclass(frozen=True)
class DisjunctiveGraph:
    """Graph view of an instance: one vertex per operation.

    conj_arcs: directed arcs (i, i+1) between consecutive operations of a job,
        shape (A, 2) as (src, dst).
    disj_edges: undirected edges {i, k} between distinct operations sharing a
        machine, stored once with i < k, shape (E, 2).
    """

    num_ops: int
    conj_arcs: np.ndarray
    disj_edges: np.ndarray
    _attention_cache: dict = field(default_factory=dict, compare=False, repr=False)

    @classmethod
    def build(cls, inst: Instance) -> "DisjunctiveGraph":
        arcs = []
        for j in range(inst.num_jobs):
            s, l = int(inst.job_start[j]), int(inst.job_len[j])
            for k in range(l - 1):
                arcs.append((s + k, s + k + 1))
        conj = np.array(arcs, dtype=np.int64).reshape(-1, 2)
        edges = []
        for mach in range(inst.num_machines):
            ops = np.flatnonzero(inst.machine == mach)
            for a in range(len(ops)):
                for b in range(a + 1, len(ops)):
                    edges.append((ops[a], ops[b]))
        disj = np.array(edges, dtype=np.int64).reshape(-1, 2)
        return cls(num_ops=inst.num_ops, conj_arcs=conj, disj_edges=disj)

    def attention_edges(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Directed (dst, src) pairs for attention neighborhoods.

        The neighborhood of vertex i is {i}, its conjunctive neighbors in both
        directions, and all same-machine vertices. Returns (dst, src, counts)
        with edges sorted by dst and counts[i] = |N(i)|.
        """
        if "att" not in self._attention_cache:
            o = self.num_ops
            dst = [np.arange(o, dtype=np.int64)]
            src = [np.arange(o, dtype=np.int64)]
            if len(self.conj_arcs):
                dst.append(self.conj_arcs[:, 1])
                src.append(self.conj_arcs[:, 0])
                dst.append(self.conj_arcs[:, 0])
                src.append(self.conj_arcs[:, 1])
            if len(self.disj_edges):
                dst.append(self.disj_edges[:, 0])
                src.append(self.disj_edges[:, 1])
                dst.append(self.disj_edges[:, 1])
                src.append(self.disj_edges[:, 0])
            dst = np.concatenate(dst)
            src = np.concatenate(src)
            order = np.argsort(dst, kind="stable")
            dst, src = dst[order], src[order]
            counts = np.bincount(dst, minlength=o)
            self._attention_cache["att"] = (dst, src, counts)
        return self._attention_cache["att"]
