"""Pull structured blocks out of free-form LLM replies"""

from ..errors import ExtractionError


def extract_json_block(reply: str) -> str:
    """Return the first balanced top-level {...} block in reply

    Braces inside JSON string literals do not count toward the balance.
    """
    start = reply.find("{")
    while start != -1:
        depth = 0
        in_string = False
        escaped = False
        for i in range(start, len(reply)):
            ch = reply[i]
            if in_string:
                if escaped:
                    escaped = False
                elif ch == "\\":
                    escaped = True
                elif ch == '"':
                    in_string = False
                continue
            if ch == '"':
                in_string = True
            elif ch == "{":
                depth += 1
            elif ch == "}":
                depth -= 1
                if depth == 0:
                    return reply[start:i + 1]
        # unbalanced from this brace; try the next opening brace
        start = reply.find("{", start + 1)
    raise ExtractionError("no balanced JSON object in reply")
