"""Parse StackExchange post data and filter it down to a clean question corpus.

Two input formats are supported: the public data-dump ``Posts.xml`` (rows as
``<row .../>`` elements) and JSONL with one post object per line using the
same field names in lowerCamelCase. Parsing is streaming, so memory use is
independent of file size.
"""

from __future__ import annotations

import json
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from html.parser import HTMLParser
from typing import IO, Iterable, Iterator

from .errors import ParseError

# Post-type codes from the public StackExchange dump schema. Rows with other
# codes are skipped, not errors.
KNOWN_POST_TYPES = frozenset(range(1, 9))
QUESTION = 1
ANSWER = 2

_TAG_RE = re.compile(r"<([^<>]+)>")
_PRE_CODE_RE = re.compile(
    r"<pre[^>]*>\s*<code[^>]*>(.*?)</code>", re.IGNORECASE | re.DOTALL
)
_IMG_RE = re.compile(r"<img[\s>/]", re.IGNORECASE)
_TABLE_RE = re.compile(r"<table[\s>/]|<table>", re.IGNORECASE)


@dataclass(frozen=True)
class RawPost:
    """One row of the dump, before any filtering."""

    id: int
    post_type: int
    title: str | None = None
    body: str = ""
    tags: str | None = None
    accepted_answer_id: int | None = None
    answer_count: int = 0


@dataclass(frozen=True)
class Question:
    """A filtered question: plain text only, whitelisted tags, answered flag."""

    id: int
    title: str
    body_text: str
    tags: frozenset[str]
    answered: bool


@dataclass(frozen=True)
class FilterConfig:
    tag_whitelist: frozenset[str] = frozenset({"javascript", "python"})
    exclude_images: bool = True
    exclude_code_blocks: bool = True
    max_inline_code_chars: int = 0
    answered_policy: str = "any_answer"  # or "accepted_only"

    def __post_init__(self):
        if self.max_inline_code_chars < 0:
            raise ValueError("max_inline_code_chars must be >= 0")
        if self.answered_policy not in ("any_answer", "accepted_only"):
            raise ValueError(f"unknown answered_policy {self.answered_policy!r}")


class _TextExtractor(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.parts: list[str] = []

    def handle_data(self, data):
        self.parts.append(data)


def strip_html(markup: str) -> str:
    """Extract plain text from HTML, with whitespace runs collapsed."""
    extractor = _TextExtractor()
    extractor.feed(markup)
    extractor.close()
    return " ".join("".join(extractor.parts).split())


def parse_tags(tag_field: str | None) -> frozenset[str]:
    """Parse a ``<t1><t2>`` tag field into a set of lowercase names."""
    if not tag_field:
        return frozenset()
    return frozenset(t.lower() for t in _TAG_RE.findall(tag_field))


def parse_posts(source: IO, format: str = "xml") -> Iterator[RawPost]:
    """Stream RawPost records from a Posts.xml or JSONL file object.

    Rows with unknown post-type codes are skipped. Malformed input raises
    ParseError naming the line (XML) or line number (JSONL).
    """
    if format == "xml":
        return _parse_xml(source)
    if format == "jsonl":
        return _parse_jsonl(source)
    raise ValueError(f"unknown format {format!r}")


def _opt_int(value) -> int | None:
    return None if value is None else int(value)


def _parse_xml(source: IO) -> Iterator[RawPost]:
    try:
        for event, elem in ET.iterparse(source, events=("start",)):
            if elem.tag != "row":
                continue
            a = elem.attrib
            if "Id" not in a:
                raise ParseError("row element missing Id attribute")
            post_type = int(a.get("PostTypeId", "0"))
            if post_type not in KNOWN_POST_TYPES:
                elem.clear()
                continue
            yield RawPost(
                id=int(a["Id"]),
                post_type=post_type,
                title=a.get("Title"),
                body=a.get("Body", ""),
                tags=a.get("Tags"),
                accepted_answer_id=_opt_int(a.get("AcceptedAnswerId")),
                answer_count=int(a.get("AnswerCount", "0")),
            )
            elem.clear()
    except ET.ParseError as exc:
        line, col = exc.position
        raise ParseError(f"malformed XML at line {line}, column {col}: {exc.msg}") from exc


def _parse_jsonl(source: IO) -> Iterator[RawPost]:
    for lineno, line in enumerate(source, start=1):
        if isinstance(line, bytes):
            line = line.decode("utf-8")
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"malformed JSON at line {lineno}: {exc.msg}") from exc
        if "id" not in obj:
            raise ParseError(f"post at line {lineno} missing id field")
        post_type = int(obj.get("postTypeId", 0))
        if post_type not in KNOWN_POST_TYPES:
            continue
        yield RawPost(
            id=int(obj["id"]),
            post_type=post_type,
            title=obj.get("title"),
            body=obj.get("body", ""),
            tags=obj.get("tags"),
            accepted_answer_id=_opt_int(obj.get("acceptedAnswerId")),
            answer_count=int(obj.get("answerCount", 0)),
        )


def _has_large_code_block(body: str, budget: int) -> bool:
    return any(len(m.group(1)) > budget for m in _PRE_CODE_RE.finditer(body))


def filter_questions(
    posts: Iterable[RawPost], cfg: FilterConfig | None = None
) -> Iterator[Question]:
    """Apply the corpus filtering rules; never fails, only excludes.

    Keeps questions (post type 1) with a non-empty title, at least one
    whitelisted tag, and a body free of images, HTML tables, and oversized
    fenced code blocks. The kept tag set is the whitelist intersection.
    """
    if cfg is None:
        cfg = FilterConfig()
    for post in posts:
        if post.post_type != QUESTION:
            continue
        if not post.title or not post.title.strip():
            continue
        body = post.body
        if cfg.exclude_images and _IMG_RE.search(body):
            continue
        if _TABLE_RE.search(body):
            continue
        if cfg.exclude_code_blocks and _has_large_code_block(
            body, cfg.max_inline_code_chars
        ):
            continue
        tags = parse_tags(post.tags)
        if cfg.tag_whitelist:
            tags = tags & cfg.tag_whitelist
        if not tags:
            continue
        if cfg.answered_policy == "accepted_only":
            answered = post.accepted_answer_id is not None
        else:
            answered = post.answer_count >= 1
        yield Question(
            id=post.id,
            title=post.title.strip(),
            body_text=strip_html(body),
            tags=tags,
            answered=answered,
        )


def question_text(q: Question) -> str:
    """The text fed to the embedder: title plus body."""
    return f"{q.title}\n{q.body_text}"


def write_questions(questions: Iterable[Question], sink: IO[str]) -> int:
    """Write questions.jsonl (one object per line, LF endings); returns count."""
    n = 0
    for q in questions:
        obj = {
            "id": q.id,
            "title": q.title,
            "bodyText": q.body_text,
            "tags": sorted(q.tags),
            "answered": q.answered,
        }
        sink.write(json.dumps(obj, ensure_ascii=False, separators=(",", ":")))
        sink.write("\n")
        n += 1
    return n


def read_questions(source: IO) -> Iterator[Question]:
    """Read a questions.jsonl file produced by write_questions."""
    for lineno, line in enumerate(source, start=1):
        if isinstance(line, bytes):
            line = line.decode("utf-8")
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"malformed JSON at line {lineno}: {exc.msg}") from exc
        yield Question(
            id=int(obj["id"]),
            title=obj["title"],
            body_text=obj["bodyText"],
            tags=frozenset(obj["tags"]),
            answered=bool(obj["answered"]),
        )
