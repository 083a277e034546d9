"""The stroke document: the one input format shared by CLI, tests, and UI.

JSON with three fields:

    {
      "version": 1,
      "strokes": [[{"x": 0.41, "y": 0.07}, ...], ...],
      "color_id": 1
    }

Coordinates are decimal fractions of the drawing-grid bounds, so a document
replays identically on any device and any canvas size.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .config import STROKE_FORMAT_VERSION
from .errors import InputError
from .grid import Stroke

@dataclass(frozen=True)
class StrokeDocument:
    strokes: tuple[Stroke, ...]
    color_id: int
    version: int = STROKE_FORMAT_VERSION


def document_from_dict(data: dict) -> StrokeDocument:
    if not isinstance(data, dict):
        raise InputError("stroke document must be a JSON object")
    version = data.get("version")
    if version != STROKE_FORMAT_VERSION:
        raise InputError(
            f"unsupported stroke document version {version!r}, "
            f"expected {STROKE_FORMAT_VERSION}"
        )
    raw_strokes = data.get("strokes")
    if not isinstance(raw_strokes, list) or not raw_strokes:
        raise InputError("stroke document needs a non-empty strokes array")
    strokes = []
    for raw in raw_strokes:
        if not isinstance(raw, list):
            raise InputError("each stroke must be an array of points")
        try:
            strokes.append(Stroke.of((float(p["x"]), float(p["y"])) for p in raw))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad point in stroke document: {exc}") from exc
    color_id = data.get("color_id")
    if not isinstance(color_id, int):
        raise InputError("stroke document needs an integer color_id")
    return StrokeDocument(tuple(strokes), color_id)


def document_to_dict(doc: StrokeDocument) -> dict:
    return {
        "version": doc.version,
        "strokes": [
            [{"x": p.x, "y": p.y} for p in stroke.points] for stroke in doc.strokes
        ],
        "color_id": doc.color_id,
    }


def load_stroke_file(path: str | Path) -> StrokeDocument:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read stroke file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"stroke file {path} is not valid JSON: {exc}") from exc
    return document_from_dict(data)


def dump_stroke_file(doc: StrokeDocument, path: str | Path) -> None:
    Path(path).write_text(json.dumps(document_to_dict(doc), indent=2) + "\n")
