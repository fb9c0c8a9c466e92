"""Bijective base-26 node labels: A..Z, AA, AB, ..."""

import re

from ..errors import LabelError

LABEL_PATTERN = re.compile(r"[A-Z]+")


def encode_label(index: int) -> str:
    """0 -> 'A', 25 -> 'Z', 26 -> 'AA'"""
    if index < 0:
        raise LabelError(f"label index must be non-negative, got {index}")
    n = index + 1
    chars = []
    while n > 0:
        n, rem = divmod(n - 1, 26)
        chars.append(chr(ord("A") + rem))
    return "".join(reversed(chars))


def decode_label(label: str) -> int:
    """Inverse of encode_label"""
    if not isinstance(label, str) or not LABEL_PATTERN.fullmatch(label):
        raise LabelError(f"malformed node label {label!r}")
    n = 0
    for ch in label:
        n = n * 26 + (ord(ch) - ord("A") + 1)
    return n - 1


def is_label(token: str) -> bool:
    return bool(LABEL_PATTERN.fullmatch(token))
