"""Hand-crafted per-operation and per-job features.

Node features describe an operation within its instance (15 columns);
context features describe a job's status within a partial schedule
(11 columns). Time-valued features are normalized so that inputs stay O(1)
across instance sizes: node features divide by the generator's maximum
duration, context features divide by the current partial makespan clamped
to at least 1. The divisors are centralized here so the convention can be
changed in one place.
"""

from __future__ import annotations

import numpy as np

from .instance import Instance
from .schedule import PartialSchedule

NODE_FEATURES = 15
CONTEXT_FEATURES = 11

# Maximum duration emitted by the random-instance generator.
DURATION_SCALE = 99.0


def quartiles(values) -> tuple[float, float, float]:
    """First, second, and third quartile by linear interpolation.

    With k sorted values, the p-quantile sits at fractional index
    h = p * (k - 1) and interpolates between the neighbors of h.
    """
    v = np.asarray(values, dtype=np.float64)
    if v.size == 0:
        raise ValueError("quartiles of an empty list")
    q = np.quantile(v, [0.25, 0.5, 0.75], method="linear")
    return (float(q[0]), float(q[1]), float(q[2]))


def node_features(inst: Instance, scale: float = DURATION_SCALE) -> np.ndarray:
    """Per-operation feature matrix, shape (o, 15).

    Columns: duration; fraction of the job completed up to and including the
    operation; fraction remaining after it; job duration quartiles; machine
    duration quartiles; duration minus job quartiles; duration minus machine
    quartiles. All divided by `scale` except the two fractions.
    """
    o = inst.num_ops
    dur = inst.duration.astype(np.float64)
    x = np.empty((o, NODE_FEATURES), dtype=np.float64)

    job_q = np.empty((inst.num_jobs, 3), dtype=np.float64)
    for j in range(inst.num_jobs):
        sl = inst.job_slice(j)
        total = dur[sl].sum()
        if total <= 0:
            raise ValueError(f"job {j} has zero total duration")
        job_q[j] = quartiles(dur[sl])
        cum = np.cumsum(dur[sl])
        x[sl, 1] = cum / total
        x[sl, 2] = (total - cum) / total

    mach_q = np.empty((inst.num_machines, 3), dtype=np.float64)
    for mach in range(inst.num_machines):
        ops = np.flatnonzero(inst.machine == mach)
        if len(ops) == 0:
            mach_q[mach] = 0.0
        else:
            mach_q[mach] = quartiles(dur[ops])

    job_of = inst.job_of_op()
    x[:, 0] = dur / scale
    x[:, 3:6] = job_q[job_of] / scale
    x[:, 6:9] = mach_q[inst.machine] / scale
    x[:, 9:12] = (dur[:, None] - job_q[job_of]) / scale
    x[:, 12:15] = (dur[:, None] - mach_q[inst.machine]) / scale
    return x


def batched_context_features(
    next_op: np.ndarray,
    job_ready: np.ndarray,
    mach_ready: np.ndarray,
    job_start: np.ndarray,
    job_len: np.ndarray,
    machine: np.ndarray,
) -> np.ndarray:
    """Context features for a batch of schedules over one instance.

    Arrays are batched along the first axis: next_op and job_ready are
    (B, n), mach_ready is (B, m). Returns (B, n, 11). Completed jobs get
    all-zero rows; their scores are masked downstream.
    """
    B, n = next_op.shape
    jr = job_ready.astype(np.float64)
    mr = mach_ready.astype(np.float64)
    ms = np.maximum(np.maximum(jr.max(axis=1), mr.max(axis=1)), 1.0)[:, None]

    active = next_op < job_len[None, :]
    # Machine of each job's ready operation; completed jobs point at machine 0
    # as a placeholder and are zeroed at the end.
    ready = job_start[None, :] + np.minimum(next_op, job_len[None, :] - 1)
    ready_mach = machine[ready]
    mach_of_job = np.take_along_axis(mr, ready_mach, axis=1)

    jq = np.quantile(jr, [0.25, 0.5, 0.75], axis=1).T
    mq = np.quantile(mr, [0.25, 0.5, 0.75], axis=1).T

    c = np.empty((B, n, CONTEXT_FEATURES), dtype=np.float64)
    c[:, :, 0] = (jr - mach_of_job) / ms
    c[:, :, 1] = jr / ms
    c[:, :, 2] = (jr - jr.mean(axis=1)[:, None]) / ms
    c[:, :, 3:6] = (jr[:, :, None] - jq[:, None, :]) / ms[:, :, None]
    c[:, :, 6] = mach_of_job / ms
    c[:, :, 7] = (mach_of_job - mr.mean(axis=1)[:, None]) / ms
    c[:, :, 8:11] = (mach_of_job[:, :, None] - mq[:, None, :]) / ms[:, :, None]
    c[~active] = 0.0
    return c


def context_features(s: PartialSchedule) -> np.ndarray:
    """Per-job context features for one partial schedule, shape (n, 11).

    For job j with ready operation i on machine u: the row compares the
    completion of j's last scheduled operation and the completion time of u
    against the makespan, the other jobs, and the other machines. The
    makespan divisor is clamped to 1 so the empty schedule yields zeros.
    """
    inst = s.instance
    out = batched_context_features(
        s.next_op[None, :],
        s.job_ready[None, :],
        s.mach_ready[None, :],
        inst.job_start,
        inst.job_len,
        inst.machine,
    )
    return out[0]
