"""Job-queue HTTP service and story repository."""

from .app import ServiceConfig, create_app
from .queue import ProgressHub, Worker, reader_options_from, run_job, start_workers
from .store import (
    CommentRow,
    EventRow,
    JobRow,
    NotFound,
    PermissionDenied,
    Store,
    StoreError,
    StoryRow,
)

__all__ = [
    "CommentRow",
    "EventRow",
    "JobRow",
    "NotFound",
    "PermissionDenied",
    "ProgressHub",
    "ServiceConfig",
    "Store",
    "StoreError",
    "StoryRow",
    "Worker",
    "create_app",
    "reader_options_from",
    "run_job",
    "start_workers",
]
