"""Shared fixtures: small mazes, a canned LLM backend and a local chat-completion stub"""

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Any, Dict, List, Tuple, Union

import pytest

from relmaze.config.settings import GatewayConfig
from relmaze.errors import TransportError
from relmaze.llm_backend.interface import LLMBackend, LLMMessage, LLMResponse
from relmaze.maze.core import Coord, Maze


def make_maze(rows: List[str]) -> Maze:
    """Build a maze from 'S', 'G', '#', '.' rows"""
    obstacles = set()
    start = goal = None
    for r, line in enumerate(rows):
        for c, ch in enumerate(line):
            if ch == "#":
                obstacles.add(Coord(r, c))
            elif ch == "S":
                start = Coord(r, c)
            elif ch == "G":
                goal = Coord(r, c)
    return Maze(width=len(rows[0]), height=len(rows), start=start, goal=goal,
                obstacles=frozenset(obstacles))


@pytest.fixture
def maze_from_rows():
    return make_maze


@pytest.fixture
def open_3x3() -> Maze:
    return make_maze([
        "S..",
        "...",
        "..G",
    ])


@pytest.fixture
def walled_5x5() -> Maze:
    # the straight-line route from S is cut by a wall; the way round is on the left
    return make_maze([
        "S....",
        ".###.",
        ".#G#.",
        ".#.#.",
        ".....",
    ])


class CannedBackend(LLMBackend):
    """Returns queued replies in order; an exception instance in the queue is raised"""

    def __init__(self, replies: List[Union[str, Exception]]):
        super().__init__("canned")
        self.replies = list(replies)
        self.prompts: List[List[LLMMessage]] = []

    def generate(self, messages, max_tokens=None, temperature=None) -> LLMResponse:
        self.prompts.append(list(messages))
        if not self.replies:
            raise TransportError("no canned reply left", attempts=1)
        reply = self.replies.pop(0) if len(self.replies) > 1 else self.replies[0]
        if isinstance(reply, Exception):
            raise reply
        return LLMResponse(content=reply, finish_reason="stop", model="canned")


@pytest.fixture
def canned_backend():
    return CannedBackend


@pytest.fixture
def chat_reply():
    return chat_body


def chat_body(content: str) -> Dict[str, Any]:
    return {
        "model": "stub",
        "choices": [{"index": 0, "message": {"role": "assistant", "content": content},
                     "finish_reason": "stop"}],
        "usage": {"prompt_tokens": 10, "completion_tokens": 1},
    }


class StubChatServer:
    """Answers POSTs from a queue of (status, body); the last entry repeats"""

    def __init__(self):
        self.responses: List[Tuple[int, Union[Dict[str, Any], str]]] = [(200, chat_body("B"))]
        self.requests: List[Dict[str, Any]] = []
        self.headers: List[Dict[str, str]] = []
        stub = self

        class Handler(BaseHTTPRequestHandler):
            def do_POST(self):
                length = int(self.headers.get("Content-Length", 0))
                raw = self.rfile.read(length)
                stub.requests.append(json.loads(raw))
                stub.headers.append(dict(self.headers))
                status, body = stub.responses.pop(0) if len(stub.responses) > 1 else stub.responses[0]
                data = body if isinstance(body, str) else json.dumps(body)
                encoded = data.encode("utf-8")
                self.send_response(status)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(encoded)))
                self.end_headers()
                self.wfile.write(encoded)

            def log_message(self, format, *args):
                pass

        self._server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)

    @property
    def url(self) -> str:
        host, port = self._server.server_address[:2]
        return f"http://{host}:{port}/v1/chat/completions"

    def start(self) -> "StubChatServer":
        self._thread.start()
        return self

    def stop(self) -> None:
        self._server.shutdown()
        self._server.server_close()


@pytest.fixture
def stub_server():
    server = StubChatServer().start()
    yield server
    server.stop()


@pytest.fixture
def sleeps(monkeypatch) -> List[float]:
    """Record backoff sleeps instead of sleeping"""
    recorded: List[float] = []
    monkeypatch.setattr("relmaze.llm_backend.chat_backend.time.sleep", recorded.append)
    return recorded


@pytest.fixture
def api_key(monkeypatch) -> str:
    secret = "sk-test-0123456789abcdef"
    monkeypatch.setenv("RELMAZE_API_KEY", secret)
    return secret


@pytest.fixture
def gateway_config(stub_server) -> GatewayConfig:
    return GatewayConfig(endpoint_url=stub_server.url, model_name="stub-model", timeout=5.0)
