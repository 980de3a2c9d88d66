"""Merging multicast queue with single-queue loop-back retransmission."""

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .channels import p_req


@dataclass
class QueueEntry:
    """All outstanding requests for one file, merged across users.

    `pending` maps user id -> list of arrival timestamps (a user may have
    requested the same file again before the first copy was delivered; every
    timestamp gets its own sojourn record).
    """

    file_id: int
    pending: dict = field(default_factory=dict)
    attempts: int = 0

    def add(self, user_id, now):
        self.pending.setdefault(user_id, []).append(now)

    def users(self):
        return self.pending.keys()

    def timestamp_count(self):
        return sum(len(ts) for ts in self.pending.values())


class MulticastQueue:
    """FIFO queue with at most one entry per file; new requests merge in place."""

    def __init__(self, catalog_size):
        self.catalog_size = catalog_size
        self._order = deque()          # file ids, head first
        self._entries = {}             # file id -> QueueEntry

    def __len__(self):
        return len(self._order)

    def __bool__(self):
        return bool(self._order)

    def entry_for(self, file_id):
        return self._entries.get(file_id)

    def enqueue(self, file_id, user_id, now):
        """Merge the request into an existing entry or append a new one at tail."""
        if not (0 <= file_id < self.catalog_size):
            raise ValueError(f"file_id {file_id} outside catalog")
        entry = self._entries.get(file_id)
        if entry is None:
            entry = QueueEntry(file_id)
            self._entries[file_id] = entry
            self._order.append(file_id)
        entry.add(user_id, now)

    def head(self):
        return self._entries[self._order[0]]

    def pop_head(self):
        fid = self._order.popleft()
        return self._entries.pop(fid)

    def push_head(self, entry):
        self._insert(entry, front=True)

    def push_tail(self, entry):
        self._insert(entry, front=False)

    def _insert(self, entry, front):
        existing = self._entries.get(entry.file_id)
        if existing is not None:
            # merge: requests that arrived meanwhile absorb the loop-back
            for u, ts in entry.pending.items():
                existing.pending.setdefault(u, []).extend(ts)
            return
        self._entries[entry.file_id] = entry
        if front:
            self._order.appendleft(entry.file_id)
        else:
            self._order.append(entry.file_id)

    def pending_timestamps(self):
        return sum(e.timestamp_count() for e in self._entries.values())

    def check_invariants(self):
        assert len(self._order) <= self.catalog_size, "queue exceeds catalog size"
        assert len(set(self._order)) == len(self._order), "duplicate file entry"
        for fid in self._order:
            assert self._entries[fid].pending, "entry with no pending requests"


@dataclass
class ServiceOutcome:
    served_users: np.ndarray      # V(t), length L
    success_mask: np.ndarray      # subset of served_users that decoded
    reward_successes: int
    completed: list               # (user_id, sojourn_seconds) per merged timestamp


def head_indicator(queue, num_users):
    """Binary request vector V for the entry about to be served."""
    v = np.zeros(num_users)
    for u in queue.head().users():
        v[u] = 1.0
    return v


def serve_head(queue, gains, power, config, now):
    """Transmit the head entry once at `power` under channel gains `gains`.

    User j decodes iff power > P_req(gains[j]) (strict). Successful users'
    timestamps complete at now + T. Failed users stay at the head while
    attempts < N, otherwise loop back to the tail with attempts reset.
    Returns the ServiceOutcome; the queue is modified in place.
    """
    if not queue:
        raise IndexError("serve_head on empty queue")
    entry = queue.pop_head()
    num_users = config.num_users
    done_at = now + config.service_time

    served = np.zeros(num_users)
    success = np.zeros(num_users)
    completed = []
    failed = {}
    for u, stamps in entry.pending.items():
        served[u] = 1.0
        if power > p_req(gains[u], config):
            success[u] = 1.0
            completed.extend((u, done_at - t0) for t0 in stamps)
        else:
            failed[u] = stamps

    if failed:
        entry.pending = failed
        entry.attempts += 1
        if config.max_attempts and entry.attempts >= config.max_attempts:
            entry.attempts = 0
            queue.push_tail(entry)
        else:
            queue.push_head(entry)

    return ServiceOutcome(
        served_users=served,
        success_mask=success,
        reward_successes=int(success.sum()),
        completed=completed,
    )
