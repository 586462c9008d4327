"""Single-file relational store for the platform.

One SQLite database holds the job queue, the story repository with its
comments, user accounts and feedback. Schema migrations are versioned
below; the store serializes access so worker threads and request handlers
can share one connection.
"""

from __future__ import annotations

import hashlib
import json
import secrets
import sqlite3
import threading
import time
import uuid
from dataclasses import dataclass
from typing import Optional

MIGRATIONS = [
    # version 1: initial schema
    """
    CREATE TABLE users (
        username TEXT PRIMARY KEY,
        salt BLOB NOT NULL,
        password_hash BLOB NOT NULL,
        created REAL NOT NULL
    );
    CREATE TABLE tokens (
        token TEXT PRIMARY KEY,
        username TEXT NOT NULL REFERENCES users(username),
        created REAL NOT NULL
    );
    CREATE TABLE jobs (
        id TEXT PRIMARY KEY,
        domain_text TEXT NOT NULL,
        options TEXT NOT NULL,
        state TEXT NOT NULL,
        submitted_at REAL NOT NULL,
        started_at REAL,
        finished_at REAL,
        result_text TEXT,
        result_model TEXT,
        error TEXT
    );
    CREATE TABLE job_events (
        job_id TEXT NOT NULL REFERENCES jobs(id),
        seq INTEGER NOT NULL,
        phase TEXT NOT NULL,
        session INTEGER,
        payload TEXT NOT NULL,
        PRIMARY KEY (job_id, seq)
    );
    CREATE TABLE stories (
        id TEXT PRIMARY KEY,
        owner TEXT NOT NULL,
        title TEXT NOT NULL,
        story TEXT NOT NULL,
        knowledge TEXT NOT NULL,
        visibility TEXT NOT NULL,
        example INTEGER NOT NULL DEFAULT 0,
        created REAL NOT NULL,
        updated REAL NOT NULL
    );
    CREATE TABLE comments (
        id TEXT PRIMARY KEY,
        story_id TEXT NOT NULL REFERENCES stories(id),
        author TEXT NOT NULL,
        body TEXT NOT NULL,
        created REAL NOT NULL
    );
    CREATE TABLE feedback (
        id TEXT PRIMARY KEY,
        message TEXT NOT NULL,
        contact TEXT NOT NULL,
        created REAL NOT NULL
    );
    """,
]

QUEUED = "queued"
RUNNING = "running"
DONE = "done"
FAILED = "failed"


class StoreError(Exception):
    pass


class PermissionDenied(StoreError):
    pass


class NotFound(StoreError):
    pass


@dataclass(frozen=True)
class JobRow:
    id: str
    domain_text: str
    options: dict
    state: str
    submitted_at: float
    started_at: Optional[float]
    finished_at: Optional[float]
    result_text: Optional[str]
    result_model: Optional[dict]
    error: Optional[str]


@dataclass(frozen=True)
class EventRow:
    seq: int
    phase: str
    session: Optional[int]
    payload: dict


@dataclass(frozen=True)
class StoryRow:
    id: str
    owner: str
    title: str
    story: str
    knowledge: str
    visibility: str
    example: bool
    created: float
    updated: float


@dataclass(frozen=True)
class CommentRow:
    id: str
    story_id: str
    author: str
    body: str
    created: float


def _new_id() -> str:
    return uuid.uuid4().hex


class Store:
    def __init__(self, path: str = ":memory:"):
        self.path = path
        self._lock = threading.RLock()
        self._conn = sqlite3.connect(path, check_same_thread=False)
        self._conn.row_factory = sqlite3.Row
        self._conn.execute("PRAGMA journal_mode=WAL")
        self._migrate()

    def close(self) -> None:
        with self._lock:
            self._conn.close()

    def _migrate(self) -> None:
        with self._lock:
            version = self._conn.execute("PRAGMA user_version").fetchone()[0]
            for target, script in enumerate(MIGRATIONS, start=1):
                if version < target:
                    self._conn.executescript(script)
                    self._conn.execute(f"PRAGMA user_version = {target}")
            self._conn.commit()

    # -- accounts --------------------------------------------------------

    @staticmethod
    def _hash_password(password: str, salt: bytes) -> bytes:
        return hashlib.pbkdf2_hmac("sha256", password.encode("utf-8"), salt, 200_000)

    def register(self, username: str, password: str) -> None:
        if not username or not password:
            raise StoreError("username and password are required")
        salt = secrets.token_bytes(16)
        with self._lock:
            try:
                self._conn.execute(
                    "INSERT INTO users (username, salt, password_hash, created) VALUES (?,?,?,?)",
                    (username, salt, self._hash_password(password, salt), time.time()),
                )
            except sqlite3.IntegrityError as exc:
                raise StoreError(f"username {username!r} is taken") from exc
            self._conn.commit()

    def login(self, username: str, password: str) -> str:
        with self._lock:
            row = self._conn.execute(
                "SELECT salt, password_hash FROM users WHERE username = ?", (username,)
            ).fetchone()
            if row is None or not secrets.compare_digest(
                row["password_hash"], self._hash_password(password, row["salt"])
            ):
                raise PermissionDenied("unknown username or wrong password")
            token = secrets.token_hex(24)
            self._conn.execute(
                "INSERT INTO tokens (token, username, created) VALUES (?,?,?)",
                (token, username, time.time()),
            )
            self._conn.commit()
            return token

    def user_for_token(self, token: str) -> Optional[str]:
        with self._lock:
            row = self._conn.execute(
                "SELECT username FROM tokens WHERE token = ?", (token,)
            ).fetchone()
            return row["username"] if row else None

    # -- job queue ---------------------------------------------------------

    def create_job(self, domain_text: str, options: dict) -> str:
        job_id = _new_id()
        with self._lock:
            self._conn.execute(
                "INSERT INTO jobs (id, domain_text, options, state, submitted_at)"
                " VALUES (?,?,?,?,?)",
                (job_id, domain_text, json.dumps(options), QUEUED, time.time()),
            )
            self._conn.commit()
        return job_id

    def queued_count(self) -> int:
        with self._lock:
            return self._conn.execute(
                "SELECT COUNT(*) FROM jobs WHERE state = ?", (QUEUED,)
            ).fetchone()[0]

    def claim_next_job(self) -> Optional[JobRow]:
        """Oldest queued job, transitioned to running exactly once."""
        with self._lock:
            row = self._conn.execute(
                "SELECT id FROM jobs WHERE state = ? ORDER BY submitted_at, rowid LIMIT 1",
                (QUEUED,),
            ).fetchone()
            if row is None:
                return None
            updated = self._conn.execute(
                "UPDATE jobs SET state = ?, started_at = ? WHERE id = ? AND state = ?",
                (RUNNING, time.time(), row["id"], QUEUED),
            )
            self._conn.commit()
            if updated.rowcount != 1:
                return None
            return self.get_job(row["id"])

    def finish_job(self, job_id: str, result_text: str, result_model: dict) -> None:
        with self._lock:
            self._conn.execute(
                "UPDATE jobs SET state = ?, finished_at = ?, result_text = ?,"
                " result_model = ? WHERE id = ? AND state = ?",
                (DONE, time.time(), result_text, json.dumps(result_model), job_id, RUNNING),
            )
            self._conn.commit()

    def fail_job(self, job_id: str, error: str) -> None:
        with self._lock:
            self._conn.execute(
                "UPDATE jobs SET state = ?, finished_at = ?, error = ?"
                " WHERE id = ? AND state = ?",
                (FAILED, time.time(), error, job_id, RUNNING),
            )
            self._conn.commit()

    def get_job(self, job_id: str) -> Optional[JobRow]:
        with self._lock:
            row = self._conn.execute("SELECT * FROM jobs WHERE id = ?", (job_id,)).fetchone()
        if row is None:
            return None
        return JobRow(
            id=row["id"],
            domain_text=row["domain_text"],
            options=json.loads(row["options"]),
            state=row["state"],
            submitted_at=row["submitted_at"],
            started_at=row["started_at"],
            finished_at=row["finished_at"],
            result_text=row["result_text"],
            result_model=json.loads(row["result_model"]) if row["result_model"] else None,
            error=row["error"],
        )

    def requeue_running(self) -> int:
        """Crash recovery: running jobs go back to the queue on startup."""
        with self._lock:
            updated = self._conn.execute(
                "UPDATE jobs SET state = ?, started_at = NULL WHERE state = ?",
                (QUEUED, RUNNING),
            )
            self._conn.execute(
                "DELETE FROM job_events WHERE job_id IN"
                " (SELECT id FROM jobs WHERE state = ?)",
                (QUEUED,),
            )
            self._conn.commit()
            return updated.rowcount

    def purge_finished(self, retention_days: float) -> int:
        cutoff = time.time() - retention_days * 86_400
        with self._lock:
            self._conn.execute(
                "DELETE FROM job_events WHERE job_id IN (SELECT id FROM jobs"
                " WHERE state IN (?,?) AND finished_at < ?)",
                (DONE, FAILED, cutoff),
            )
            removed = self._conn.execute(
                "DELETE FROM jobs WHERE state IN (?,?) AND finished_at < ?",
                (DONE, FAILED, cutoff),
            )
            self._conn.commit()
            return removed.rowcount

    # -- progress events ---------------------------------------------------

    def append_event(self, job_id: str, phase: str, session: Optional[int], payload: dict) -> int:
        with self._lock:
            seq = (
                self._conn.execute(
                    "SELECT COALESCE(MAX(seq), 0) FROM job_events WHERE job_id = ?",
                    (job_id,),
                ).fetchone()[0]
                + 1
            )
            self._conn.execute(
                "INSERT INTO job_events (job_id, seq, phase, session, payload)"
                " VALUES (?,?,?,?,?)",
                (job_id, seq, phase, session, json.dumps(payload)),
            )
            self._conn.commit()
            return seq

    def events_for(self, job_id: str) -> list[EventRow]:
        with self._lock:
            rows = self._conn.execute(
                "SELECT seq, phase, session, payload FROM job_events"
                " WHERE job_id = ? ORDER BY seq",
                (job_id,),
            ).fetchall()
        return [
            EventRow(row["seq"], row["phase"], row["session"], json.loads(row["payload"]))
            for row in rows
        ]

    # -- stories -----------------------------------------------------------

    def save_story(
        self,
        owner: str,
        title: str,
        story: str,
        knowledge: str = "",
        visibility: str = "private",
        example: bool = False,
    ) -> StoryRow:
        if visibility not in ("private", "public"):
            raise StoreError("visibility is 'private' or 'public'")
        story_id = _new_id()
        now = time.time()
        with self._lock:
            self._conn.execute(
                "INSERT INTO stories (id, owner, title, story, knowledge, visibility,"
                " example, created, updated) VALUES (?,?,?,?,?,?,?,?,?)",
                (story_id, owner, title, story, knowledge, visibility, int(example), now, now),
            )
            self._conn.commit()
        return self.get_story(story_id, owner)

    def _story_row(self, row) -> StoryRow:
        return StoryRow(
            id=row["id"],
            owner=row["owner"],
            title=row["title"],
            story=row["story"],
            knowledge=row["knowledge"],
            visibility=row["visibility"],
            example=bool(row["example"]),
            created=row["created"],
            updated=row["updated"],
        )

    def get_story(self, story_id: str, requester: Optional[str]) -> StoryRow:
        with self._lock:
            row = self._conn.execute(
                "SELECT * FROM stories WHERE id = ?", (story_id,)
            ).fetchone()
        if row is None:
            raise NotFound(f"story {story_id} not found")
        record = self._story_row(row)
        if record.visibility == "private" and record.owner != requester:
            raise PermissionDenied("this story is private")
        return record

    def list_stories(self, scope: str, requester: Optional[str]) -> list[StoryRow]:
        with self._lock:
            if scope == "mine":
                if requester is None:
                    raise PermissionDenied("sign in to list your stories")
                rows = self._conn.execute(
                    "SELECT * FROM stories WHERE owner = ? ORDER BY updated DESC",
                    (requester,),
                ).fetchall()
            elif scope == "public":
                rows = self._conn.execute(
                    "SELECT * FROM stories WHERE visibility = 'public' AND example = 0"
                    " ORDER BY updated DESC"
                ).fetchall()
            elif scope == "examples":
                rows = self._conn.execute(
                    "SELECT * FROM stories WHERE example = 1 ORDER BY title"
                ).fetchall()
            else:
                raise StoreError("scope is 'mine', 'public' or 'examples'")
        return [self._story_row(row) for row in rows]

    def share_story(self, story_id: str, requester: str) -> StoryRow:
        record = self.get_story(story_id, requester)
        if record.owner != requester:
            raise PermissionDenied("only the owner can share a story")
        with self._lock:
            self._conn.execute(
                "UPDATE stories SET visibility = 'public', updated = ? WHERE id = ?",
                (time.time(), story_id),
            )
            self._conn.commit()
        return self.get_story(story_id, requester)

    # -- comments ------------------------------------------------------------

    def add_comment(self, story_id: str, author: str, body: str) -> CommentRow:
        record = self.get_story(story_id, author)
        if record.visibility != "public":
            raise PermissionDenied("comments attach to public stories only")
        if not body.strip():
            raise StoreError("empty comment")
        comment_id = _new_id()
        with self._lock:
            self._conn.execute(
                "INSERT INTO comments (id, story_id, author, body, created) VALUES (?,?,?,?,?)",
                (comment_id, story_id, author, body, time.time()),
            )
            self._conn.commit()
        return CommentRow(comment_id, story_id, author, body, time.time())

    def list_comments(self, story_id: str, requester: Optional[str]) -> list[CommentRow]:
        self.get_story(story_id, requester)
        with self._lock:
            rows = self._conn.execute(
                "SELECT * FROM comments WHERE story_id = ? ORDER BY created, rowid",
                (story_id,),
            ).fetchall()
        return [
            CommentRow(row["id"], row["story_id"], row["author"], row["body"], row["created"])
            for row in rows
        ]

    # -- feedback --------------------------------------------------------------

    def add_feedback(self, message: str, contact: str = "") -> str:
        if not message.strip():
            raise StoreError("empty feedback message")
        feedback_id = _new_id()
        with self._lock:
            self._conn.execute(
                "INSERT INTO feedback (id, message, contact, created) VALUES (?,?,?,?)",
                (feedback_id, message, contact, time.time()),
            )
            self._conn.commit()
        return feedback_id
