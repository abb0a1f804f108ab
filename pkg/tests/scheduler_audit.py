"""Event-log analysis for scheduler assertions.

Queue sizes are reconstructed from the log: seeding is round-robin in pool
order, a steal removes one task from the victim's queue, and a start that
was not preceded by a steal of the same task removes one from the claiming
worker's own queue. Log order is authoritative (events are appended under
one lock); timestamps only weight the durations.
"""

from __future__ import annotations


def idle_while_stealable_ms(events: list[dict], pool_size: int, workers: int) -> float:
    """Worst per-worker total time spent idle while some other worker's
    queue held at least two tasks (i.e. work it could have stolen). This is
    an upper bound on any single idle-while-stealable gap."""
    sizes = [len(range(w, pool_size, workers)) for w in range(workers)]
    stolen: set[str] = set()

    # idle_since[w] is the timestamp the worker last became idle, or None.
    idle_since: dict[int, float | None] = {w: 0.0 for w in range(workers)}
    exposure: dict[int, float] = {w: 0.0 for w in range(workers)}

    def stealable_for(worker: int) -> bool:
        return any(sizes[v] >= 2 for v in range(workers) if v != worker)

    last_ts = 0.0
    for event in events:
        ts = float(event["ts_ms"])
        # Account the elapsed slice for currently idle workers first.
        for w in range(workers):
            if idle_since[w] is not None and stealable_for(w):
                exposure[w] += ts - max(idle_since[w], last_ts)
        kind = event["event"]
        if kind == "steal":
            sizes[event["victim"]] -= 1
            stolen.add(event["patch"])
        elif kind == "start":
            worker = event["worker"]
            if event["patch"] not in stolen:
                sizes[worker] -= 1
            idle_since[worker] = None
        elif kind == "end":
            idle_since[event["worker"]] = ts
        last_ts = ts
    return max(exposure.values()) if exposure else 0.0
