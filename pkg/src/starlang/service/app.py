"""HTTP service: job queue, progress streaming, story repository, converters.

See docs/api.md for the endpoint reference. The app is created per
configuration so tests can run isolated instances against temporary
stores.
"""

from __future__ import annotations

import json
import logging
import queue as queue_module
import threading
from contextlib import asynccontextmanager
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional

from fastapi import Depends, FastAPI, Header, HTTPException, Request
from fastapi.responses import StreamingResponse

from .. import kbgraph
from ..nl2star import (
    AnnotatorError,
    ConversionError,
    StoryFormatError,
    convert,
    fetch_annotations,
    story_from_json,
)
from ..parser import parse_domain
from .models import (
    CommentCreate,
    CommentModel,
    DiagnosticModel,
    FeedbackCreate,
    FeedbackResponse,
    GraphToStarRequest,
    GraphToStarResponse,
    HealthResponse,
    NlConvertRequest,
    NlConvertResponse,
    ParseRequest,
    ParseResponse,
    QueueRequest,
    QueueResponse,
    RegisterRequest,
    ResultsResponse,
    StarToGraphRequest,
    StarToGraphResponse,
    StoryCreate,
    StoryModel,
    TokenResponse,
)
from .queue import TERMINAL_PHASES, ProgressHub, start_workers
from .store import (
    CommentRow,
    NotFound,
    PermissionDenied,
    Store,
    StoreError,
    StoryRow,
)

log = logging.getLogger("starlang.service")


@dataclass
class ServiceConfig:
    store_path: str = "starlang.db"
    workers: int = 1
    retention_days: float = 7.0
    max_queued: int = 100
    annotator_url: Optional[str] = None
    seed_examples: bool = True
    feedback_hook: Optional[callable] = None


def _diag_model(diag) -> DiagnosticModel:
    return DiagnosticModel(
        severity=diag.severity,
        line=diag.line,
        column=diag.column,
        message=diag.message,
        hint=diag.hint,
    )


def _story_model(row: StoryRow) -> StoryModel:
    return StoryModel(**row.__dict__)


def _comment_model(row: CommentRow) -> CommentModel:
    return CommentModel(**row.__dict__)


def _seed_examples(store: Store) -> None:
    if store.list_stories("examples", None):
        return
    data = resources.files("starlang.data")
    store.save_story(
        owner="examples",
        title="The phone call",
        story=(data / "phone_story.star").read_text(),
        knowledge=(data / "phone_knowledge.star").read_text(),
        visibility="public",
        example=True,
    )


def create_app(config: Optional[ServiceConfig] = None) -> FastAPI:
    config = config or ServiceConfig()

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        store = Store(config.store_path)
        requeued = store.requeue_running()
        if requeued:
            log.info("requeued %d interrupted jobs", requeued)
        store.purge_finished(config.retention_days)
        if config.seed_examples:
            _seed_examples(store)
        hub = ProgressHub()
        stop = threading.Event()
        workers = start_workers(store, hub, config.workers, stop)
        app.state.store = store
        app.state.hub = hub
        app.state.stop = stop
        try:
            yield
        finally:
            stop.set()
            for worker in workers:  # drain: workers finish their current job
                worker.join(timeout=30)
            store.close()

    app = FastAPI(title="starlang service", lifespan=lifespan)

    def store_of(request: Request) -> Store:
        return request.app.state.store

    def hub_of(request: Request) -> ProgressHub:
        return request.app.state.hub

    def current_user(
        request: Request, authorization: Optional[str] = Header(None)
    ) -> Optional[str]:
        if not authorization or not authorization.lower().startswith("bearer "):
            return None
        return store_of(request).user_for_token(authorization[7:].strip())

    def require_user(user: Optional[str] = Depends(current_user)) -> str:
        if user is None:
            raise HTTPException(status_code=401, detail="sign in first")
        return user

    # -- accounts -------------------------------------------------------

    @app.post("/api/register", response_model=TokenResponse)
    def register(body: RegisterRequest, request: Request):
        store = store_of(request)
        try:
            store.register(body.username, body.password)
        except StoreError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return TokenResponse(token=store.login(body.username, body.password))

    @app.post("/api/login", response_model=TokenResponse)
    def login(body: RegisterRequest, request: Request):
        try:
            return TokenResponse(token=store_of(request).login(body.username, body.password))
        except PermissionDenied as exc:
            raise HTTPException(status_code=401, detail=str(exc))

    # -- comprehension queue ---------------------------------------------

    @app.post("/api/story/queue", response_model=QueueResponse)
    def add_story_queue(body: QueueRequest, request: Request):
        store = store_of(request)
        result = parse_domain(body.text)
        if result.domain is None:
            raise HTTPException(
                status_code=400,
                detail={
                    "message": "the domain text does not parse",
                    "diagnostics": [_diag_model(d).model_dump() for d in result.errors()],
                },
            )
        if store.queued_count() >= config.max_queued:
            raise HTTPException(status_code=503, detail="queue is full; retry later")
        job_id = store.create_job(body.text, body.options.model_dump())
        return QueueResponse(id=job_id)

    @app.get("/api/story/results/{job_id}", response_model=ResultsResponse)
    def retrieve_story_results(job_id: str, request: Request):
        job = store_of(request).get_job(job_id)
        if job is None:
            raise HTTPException(status_code=404, detail="unknown job id")
        if job.state == "done":
            return ResultsResponse(status="done", reports=job.result_text, model=job.result_model)
        if job.state == "failed":
            return ResultsResponse(status="failed", error=job.error)
        return ResultsResponse(status="pending")

    @app.get("/api/story/progress/{job_id}")
    def stream_progress(job_id: str, request: Request):
        store = store_of(request)
        hub = hub_of(request)
        if store.get_job(job_id) is None:
            raise HTTPException(status_code=404, detail="unknown job id")

        def sse(event: dict) -> str:
            body = json.dumps(
                {"session": event.get("session"), **event.get("payload", {})}
            )
            return f"event: {event['phase']}\ndata: {body}\n\n"

        def generate():
            channel = hub.subscribe(job_id)
            try:
                # replay the durable snapshot first, then go live
                last_seq = 0
                terminal = False
                for row in store.events_for(job_id):
                    last_seq = row.seq
                    event = {"phase": row.phase, "session": row.session, "payload": row.payload}
                    yield sse(event)
                    terminal = terminal or row.phase in TERMINAL_PHASES
                if terminal:
                    return
                job = store.get_job(job_id)
                if job is not None and job.state in ("done", "failed"):
                    yield sse({"phase": job.state, "session": None, "payload": {}})
                    return
                while True:
                    try:
                        event = channel.get(timeout=15)
                    except queue_module.Empty:
                        yield ": keepalive\n\n"
                        continue
                    if event.get("seq", 0) <= last_seq:
                        continue
                    yield sse(event)
                    if event["phase"] in TERMINAL_PHASES:
                        return
            finally:
                hub.unsubscribe(job_id, channel)

        return StreamingResponse(generate(), media_type="text/event-stream")

    # -- story repository --------------------------------------------------

    @app.get("/api/stories", response_model=list[StoryModel])
    def list_stories(
        request: Request, scope: str = "public", user: Optional[str] = Depends(current_user)
    ):
        try:
            return [_story_model(r) for r in store_of(request).list_stories(scope, user)]
        except PermissionDenied as exc:
            raise HTTPException(status_code=401, detail=str(exc))
        except StoreError as exc:
            raise HTTPException(status_code=400, detail=str(exc))

    @app.post("/api/stories", response_model=StoryModel)
    def save_story(body: StoryCreate, request: Request, user: str = Depends(require_user)):
        row = store_of(request).save_story(
            owner=user,
            title=body.title,
            story=body.story,
            knowledge=body.knowledge,
            visibility=body.visibility,
        )
        return _story_model(row)

    @app.get("/api/stories/{story_id}", response_model=StoryModel)
    def get_story(story_id: str, request: Request, user: Optional[str] = Depends(current_user)):
        try:
            return _story_model(store_of(request).get_story(story_id, user))
        except NotFound as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except PermissionDenied as exc:
            raise HTTPException(status_code=403, detail=str(exc))

    @app.post("/api/stories/{story_id}/share", response_model=StoryModel)
    def share_story(story_id: str, request: Request, user: str = Depends(require_user)):
        try:
            return _story_model(store_of(request).share_story(story_id, user))
        except NotFound as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except PermissionDenied as exc:
            raise HTTPException(status_code=403, detail=str(exc))

    @app.get("/api/stories/{story_id}/comments", response_model=list[CommentModel])
    def list_comments(
        story_id: str, request: Request, user: Optional[str] = Depends(current_user)
    ):
        try:
            return [_comment_model(c) for c in store_of(request).list_comments(story_id, user)]
        except NotFound as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except PermissionDenied as exc:
            raise HTTPException(status_code=403, detail=str(exc))

    @app.post("/api/stories/{story_id}/comments", response_model=CommentModel)
    def add_comment(
        story_id: str,
        body: CommentCreate,
        request: Request,
        user: str = Depends(require_user),
    ):
        try:
            return _comment_model(store_of(request).add_comment(story_id, user, body.body))
        except NotFound as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except PermissionDenied as exc:
            raise HTTPException(status_code=403, detail=str(exc))
        except StoreError as exc:
            raise HTTPException(status_code=400, detail=str(exc))

    @app.post("/api/feedback", response_model=FeedbackResponse)
    def submit_feedback(body: FeedbackCreate, request: Request):
        try:
            feedback_id = store_of(request).add_feedback(body.message, body.contact)
        except StoreError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        hook = config.feedback_hook or (
            lambda fid, message: log.info("feedback %s: %.120s", fid, message)
        )
        hook(feedback_id, body.message)
        return FeedbackResponse(id=feedback_id)

    # -- converters ---------------------------------------------------------

    @app.post("/api/parse", response_model=ParseResponse)
    def parse_endpoint(body: ParseRequest):
        from ..parser import parse_story_only

        result = parse_story_only(body.text) if body.story_only else parse_domain(body.text)
        return ParseResponse(
            ok=result.domain is not None,
            diagnostics=[_diag_model(d) for d in result.diagnostics],
        )

    @app.post("/api/convert/nl2star", response_model=NlConvertResponse)
    def convert_nl(body: NlConvertRequest):
        if body.annotations is None and body.text is None:
            raise HTTPException(status_code=400, detail="send annotations or text")
        try:
            if body.annotations is not None:
                story = story_from_json(body.annotations)
            else:
                if config.annotator_url is None:
                    raise HTTPException(
                        status_code=503,
                        detail="no annotation server configured; send annotations instead",
                    )
                story = fetch_annotations(body.text, config.annotator_url)
            domain, trace = convert(story)
        except (StoryFormatError, ConversionError, ValueError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        except AnnotatorError as exc:
            raise HTTPException(status_code=502, detail=str(exc))
        from ..parser import format_domain

        return NlConvertResponse(
            star=format_domain(domain),
            trace=[entry.render() for entry in trace.entries] + trace.notes,
        )

    @app.post("/api/convert/graph2star", response_model=GraphToStarResponse)
    def convert_graph(body: GraphToStarRequest):
        try:
            graph = kbgraph.graph_from_json(body.graph)
        except kbgraph.GraphError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        text, diagnostics = kbgraph.graph_to_star(graph)
        if any(d.severity == "error" for d in diagnostics):
            raise HTTPException(
                status_code=400,
                detail={
                    "message": "the graph does not express a valid rule set",
                    "diagnostics": [d.render() for d in diagnostics],
                },
            )
        return GraphToStarResponse(star=text, diagnostics=[d.render() for d in diagnostics])

    @app.post("/api/convert/star2graph", response_model=StarToGraphResponse)
    def convert_star(body: StarToGraphRequest):
        result = parse_domain(body.text)
        if result.domain is None:
            raise HTTPException(
                status_code=400,
                detail={
                    "message": "the rule text does not parse",
                    "diagnostics": [_diag_model(d).model_dump() for d in result.errors()],
                },
            )
        graph = kbgraph.domain_to_graph(result.domain)
        return StarToGraphResponse(
            graph=kbgraph.graph_to_json(graph),
            diagnostics=[_diag_model(d) for d in result.diagnostics],
        )

    @app.get("/api/health", response_model=HealthResponse)
    def health(request: Request):
        return HealthResponse(status="ok", queued=store_of(request).queued_count())

    return app
