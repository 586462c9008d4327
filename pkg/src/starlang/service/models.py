"""Request and response bodies of the HTTP API (field names are frozen)."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field


class ReadOptions(BaseModel):
    horizon: Optional[int] = None
    show: list[str] = Field(default_factory=list)
    filters: list[str] = Field(default_factory=list)


class QueueRequest(BaseModel):
    text: str
    options: ReadOptions = Field(default_factory=ReadOptions)


class QueueResponse(BaseModel):
    id: str


class DiagnosticModel(BaseModel):
    severity: str
    line: int
    column: int
    message: str
    hint: Optional[str] = None


class ResultsResponse(BaseModel):
    status: Literal["pending", "done", "failed"]
    reports: Optional[str] = None
    model: Optional[dict] = None
    error: Optional[str] = None


class RegisterRequest(BaseModel):
    username: str = Field(min_length=1)
    password: str = Field(min_length=1)


class TokenResponse(BaseModel):
    token: str


class StoryCreate(BaseModel):
    title: str = Field(min_length=1)
    story: str = ""
    knowledge: str = ""
    visibility: Literal["private", "public"] = "private"


class StoryModel(BaseModel):
    id: str
    owner: str
    title: str
    story: str
    knowledge: str
    visibility: str
    example: bool
    created: float
    updated: float


class CommentCreate(BaseModel):
    body: str = Field(min_length=1)


class CommentModel(BaseModel):
    id: str
    story_id: str
    author: str
    body: str
    created: float


class FeedbackCreate(BaseModel):
    message: str
    contact: str = ""


class FeedbackResponse(BaseModel):
    id: str


class ParseRequest(BaseModel):
    text: str
    story_only: bool = False


class ParseResponse(BaseModel):
    ok: bool
    diagnostics: list[DiagnosticModel]


class NlConvertRequest(BaseModel):
    annotations: Optional[dict] = None
    text: Optional[str] = None


class NlConvertResponse(BaseModel):
    star: str
    trace: list[str]


class GraphToStarRequest(BaseModel):
    graph: dict


class GraphToStarResponse(BaseModel):
    star: str
    diagnostics: list[str]


class StarToGraphRequest(BaseModel):
    text: str


class StarToGraphResponse(BaseModel):
    graph: dict
    diagnostics: list[DiagnosticModel] = Field(default_factory=list)


class HealthResponse(BaseModel):
    status: str
    queued: int
