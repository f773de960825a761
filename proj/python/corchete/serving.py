"""Server side of the ``/generate`` protocol and the training file reader.

Fine-tuning itself lives outside this package. A model server plugs a
``generate(prompt, max_new_tokens, temperature) -> str`` callable into
``make_server``; the request parsing, stop-sequence handling and ``/health``
route are shared here so every backend answers the client the same way.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Callable, Iterator

Generate = Callable[[str, int, float], str]


class ProtocolError(ValueError):
    pass


class MalformedTrainingFile(ValueError):
    pass


@dataclass
class GenerateRequest:
    prompt: str
    max_new_tokens: int = 1024
    stop: list[str] = field(default_factory=lambda: ["</s>"])
    temperature: float = 0.0

    @classmethod
    def from_json(cls, body: bytes | str) -> "GenerateRequest":
        try:
            data = json.loads(body)
        except (json.JSONDecodeError, UnicodeDecodeError) as e:
            raise ProtocolError(f"body is not JSON: {e}") from e
        if not isinstance(data, dict) or not isinstance(data.get("prompt"), str):
            raise ProtocolError("body needs a string 'prompt'")
        stop = data.get("stop", ["</s>"])
        if isinstance(stop, str):
            stop = [stop]
        if not isinstance(stop, list) or not all(isinstance(s, str) for s in stop):
            raise ProtocolError("'stop' must be a string or a list of strings")
        try:
            max_new = int(data.get("max_new_tokens", 1024))
            temperature = float(data.get("temperature", 0.0))
        except (TypeError, ValueError) as e:
            raise ProtocolError(str(e)) from e
        if max_new < 1 or temperature < 0:
            raise ProtocolError("max_new_tokens must be >= 1 and temperature >= 0")
        return cls(data["prompt"], max_new, stop, temperature)


def apply_stop(text: str, stop: list[str]) -> str:
    """Cuts `text` at the earliest stop sequence."""
    cut = len(text)
    for s in stop:
        if s:
            pos = text.find(s)
            if pos != -1:
                cut = min(cut, pos)
    return text[:cut]


def make_server(generate: Generate, host: str = "127.0.0.1", port: int = 8080,
                model_id: str = "unknown") -> ThreadingHTTPServer:
    class Handler(BaseHTTPRequestHandler):
        def _reply(self, status: int, payload: dict) -> None:
            body = json.dumps(payload, ensure_ascii=False).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def do_GET(self) -> None:
            if self.path.rstrip("/") == "/health":
                self._reply(200, {"model": model_id})
            else:
                self._reply(404, {"error": "not found"})

        def do_POST(self) -> None:
            if not self.path.rstrip("/").endswith("/generate"):
                self._reply(404, {"error": "not found"})
                return
            length = int(self.headers.get("Content-Length", 0))
            try:
                req = GenerateRequest.from_json(self.rfile.read(length))
            except ProtocolError as e:
                self._reply(400, {"error": str(e)})
                return
            text = generate(req.prompt, req.max_new_tokens, req.temperature)
            self._reply(200, {"text": apply_stop(text, req.stop)})

        def log_message(self, *args) -> None:  # keep test output quiet
            pass

    return ThreadingHTTPServer((host, port), Handler)


_EXAMPLE = re.compile(r"<s>(.*?)</s>\s*<s>(.*?)</s>", re.S)


def read_training_examples(path: str | Path) -> Iterator[tuple[str, str]]:
    """Yields (sentence, analysis) pairs from a training file."""
    text = Path(path).read_text(encoding="utf-8")
    pairs = _EXAMPLE.findall(text)
    if not pairs:
        raise MalformedTrainingFile(f"{path}: no <s>sentence</s> <s>analysis</s> pairs")
    leftover = _EXAMPLE.sub("", text).strip()
    if leftover:
        raise MalformedTrainingFile(f"{path}: text outside examples: {leftover[:40]!r}")
    for sentence, analysis in pairs:
        yield sentence.strip(), analysis.strip()
