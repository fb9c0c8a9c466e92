import logging
import socket

import pytest

from relmaze.config.settings import GatewayConfig
from relmaze.errors import ConfigError, ExtractionError, ProtocolError, TransportError
from relmaze.llm_backend.chat_backend import ChatCompletionBackend, backoff_delays
from relmaze.llm_backend.extraction import extract_json_block
from relmaze.llm_backend.factory import create_llm_backend


def test_backoff_schedule():
    assert backoff_delays(0) == []
    assert backoff_delays(3) == [0.5, 1.0, 2.0]
    assert backoff_delays(6) == [0.5, 1.0, 2.0, 4.0, 8.0, 8.0]


class TestChatCompletionBackend:
    def test_request_shape_and_reply(self, stub_server, gateway_config, api_key, chat_reply):
        stub_server.responses = [(200, chat_reply("  D  "))]
        backend = create_llm_backend(gateway_config)
        assert backend.complete("be brief", "which node?") == "  D  "

        body = stub_server.requests[0]
        assert body["model"] == "stub-model"
        assert [m["role"] for m in body["messages"]] == ["system", "user"]
        assert body["messages"][1]["content"] == "which node?"
        assert body["temperature"] == 0.0
        assert stub_server.headers[0]["Authorization"] == f"Bearer {api_key}"
        assert backend.ledger.requests == 1 and backend.ledger.failures == 0

    def test_retries_then_succeeds(self, stub_server, gateway_config, api_key, sleeps, chat_reply):
        stub_server.responses = [(503, {"error": "busy"}), (502, "bad gateway"), (200, chat_reply("C"))]
        backend = ChatCompletionBackend(gateway_config)
        assert backend.complete("", "go") == "C"
        assert len(stub_server.requests) == 3
        assert sleeps == [0.5, 1.0]
        assert backend.ledger.requests == 3 and backend.ledger.failures == 2

    def test_gives_up_after_max_retries(self, stub_server, gateway_config, api_key, sleeps):
        stub_server.responses = [(500, {"error": "boom"})]
        backend = ChatCompletionBackend(gateway_config)
        with pytest.raises(TransportError) as exc:
            backend.complete("", "go")
        assert exc.value.attempts == 3
        assert exc.value.status == 500
        assert len(stub_server.requests) == 3
        assert sleeps == [0.5, 1.0]

    def test_no_retries(self, stub_server, stub_server_url_config, api_key, sleeps):
        stub_server.responses = [(429, {"error": "slow down"})]
        backend = ChatCompletionBackend(stub_server_url_config(max_retries=0))
        with pytest.raises(TransportError):
            backend.complete("", "go")
        assert len(stub_server.requests) == 1
        assert sleeps == []

    def test_malformed_body_is_not_retried(self, stub_server, gateway_config, api_key, sleeps):
        stub_server.responses = [(200, {"unexpected": True})]
        backend = ChatCompletionBackend(gateway_config)
        with pytest.raises(ProtocolError):
            backend.complete("", "go")
        assert len(stub_server.requests) == 1

    def test_connection_refused(self, api_key, sleeps):
        with socket.socket() as s:
            s.bind(("127.0.0.1", 0))
            port = s.getsockname()[1]
        config = GatewayConfig(endpoint_url=f"http://127.0.0.1:{port}/v1/chat/completions",
                               timeout=2.0, max_retries=1)
        with pytest.raises(TransportError) as exc:
            ChatCompletionBackend(config).complete("", "go")
        assert exc.value.status is None
        assert exc.value.attempts == 2

    def test_credential_never_logged(self, stub_server, gateway_config, api_key, sleeps, caplog):
        stub_server.responses = [(500, {"error": "boom"})]
        backend = ChatCompletionBackend(gateway_config)
        with caplog.at_level(logging.DEBUG):
            with pytest.raises(TransportError):
                backend.complete("", "go")
        assert "attempt 1/3" in caplog.text
        assert api_key not in caplog.text

    def test_missing_credential(self, gateway_config, monkeypatch):
        monkeypatch.delenv("RELMAZE_API_KEY", raising=False)
        with pytest.raises(ConfigError) as exc:
            create_llm_backend(gateway_config)
        assert "RELMAZE_API_KEY" in str(exc.value)


@pytest.fixture
def stub_server_url_config(stub_server):
    def build(**overrides):
        return GatewayConfig(endpoint_url=stub_server.url, model_name="stub-model", timeout=5.0, **overrides)
    return build


class TestExtractJsonBlock:
    def test_first_balanced_block(self):
        assert extract_json_block('noise {"a": {"b": 1}} trailing {"c": 2}') == '{"a": {"b": 1}}'

    def test_braces_inside_strings(self):
        assert extract_json_block('x {"a": "}{"} y') == '{"a": "}{"}'

    def test_skips_unbalanced_prefix(self):
        assert extract_json_block('{ broken { "a": 1 }') == '{ "a": 1 }'

    def test_nothing_to_extract(self):
        with pytest.raises(ExtractionError):
            extract_json_block("no json here")
