"""Comprehension job execution: worker pool and live progress fan-out.

Workers claim queued jobs first-come-first-served; each comprehension run
is single-threaded. Progress events are appended durably to the store and
mirrored to in-memory subscriber queues for server-sent-event streams. A
job's result is written in the same transaction as its terminal state, so
results are never visible before the transition is durable.
"""

from __future__ import annotations

import queue
import threading
from typing import Optional

from ..parser import parse_domain
from ..pipeline import comprehend
from ..reasoner import ProgressEvent, ReaderOptions
from .store import JobRow, Store

TERMINAL_PHASES = ("done", "failed")


class ProgressHub:
    """Fan-out of job progress events to any number of subscribers."""

    def __init__(self):
        self._lock = threading.Lock()
        self._subscribers: dict[str, list[queue.Queue]] = {}

    def subscribe(self, job_id: str) -> "queue.Queue[dict]":
        channel: queue.Queue = queue.Queue()
        with self._lock:
            self._subscribers.setdefault(job_id, []).append(channel)
        return channel

    def unsubscribe(self, job_id: str, channel: queue.Queue) -> None:
        with self._lock:
            channels = self._subscribers.get(job_id, [])
            if channel in channels:
                channels.remove(channel)
            if not channels:
                self._subscribers.pop(job_id, None)

    def publish(self, job_id: str, event: dict) -> None:
        with self._lock:
            channels = list(self._subscribers.get(job_id, ()))
        for channel in channels:
            channel.put(event)


def reader_options_from(options: dict) -> ReaderOptions:
    show = set(options.get("show", ()))
    return ReaderOptions(
        show_universal="universal" in show,
        show_acceptable="acceptable" in show,
        show_retracted="retracted" in show,
        show_elaborated="elaborated" in show,
        show_qualified="qualified" in show,
        show_timings="timings" in show,
        show_story="story" in show,
        horizon=options.get("horizon"),
    )


def run_job(store: Store, hub: ProgressHub, job: JobRow) -> None:
    def record(phase: str, session: Optional[int], payload: dict) -> None:
        seq = store.append_event(job.id, phase, session, payload)
        hub.publish(
            job.id,
            {"seq": seq, "phase": phase, "session": session, "payload": payload},
        )

    def progress(event: ProgressEvent) -> None:
        record(event.phase, event.session, event.detail)

    try:
        result = parse_domain(job.domain_text)
        if result.domain is None:  # queue admission re-parses, so this is a race
            raise ValueError(
                "; ".join(d.render() for d in result.errors()) or "unparseable domain"
            )
        options = reader_options_from(job.options)
        filters = job.options.get("filters", ())
        _, text, payload = comprehend(result.domain, options, filters, progress)
        store.finish_job(job.id, text, payload)
        record("done", None, {})
    except Exception as exc:  # noqa: BLE001 - job isolation boundary
        store.fail_job(job.id, str(exc))
        record("failed", None, {"error": str(exc)})


class Worker(threading.Thread):
    def __init__(self, store: Store, hub: ProgressHub, stop: threading.Event, name: str):
        super().__init__(name=name, daemon=True)
        self.store = store
        self.hub = hub
        self.stop_event = stop

    def run(self) -> None:
        while not self.stop_event.is_set():
            job = self.store.claim_next_job()
            if job is None:
                self.stop_event.wait(0.05)
                continue
            run_job(self.store, self.hub, job)


def start_workers(
    store: Store, hub: ProgressHub, count: int, stop: threading.Event
) -> list[Worker]:
    workers = [Worker(store, hub, stop, name=f"starlang-worker-{i}") for i in range(count)]
    for worker in workers:
        worker.start()
    return workers
