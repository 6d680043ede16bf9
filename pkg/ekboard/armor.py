# MIT License
#
# Copyright (c) 2024 MatrixEditor
#
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in all
# copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.
"""
OCR-safe transport form of envelopes: uppercase hexadecimal, two symbols per
byte, using only the recognizer's whitelist ``0-9`` and ``A-F``. Space and
newline may appear anywhere in received text (screens wrap long messages) and
are ignored on decode.
"""
import re
import logging
import typing as t

from ekboard import ENVELOPE_MAGIC, HEX_ALPHABET, MIN_ENVELOPE_HEX
from ekboard.errors import OddLength, IllegalCharacter
from ekboard.envelope import MessageEnvelope, parse_envelope, pack_envelope

log = logging.getLogger(__name__)

SEPARATORS = " \n"
"""Characters ignored inside armored text."""

ArmoredMessage = str
"""Armored text.

Contains only ``0-9``, ``A-F`` and the separators; the separator-stripped
length is even.
"""

_HEX_DIGITS = frozenset(HEX_ALPHABET + HEX_ALPHABET.lower())

# A run is a hex digit followed by any number of (optional single separator,
# hex digit) pairs. Two separators in a row end the run.
_RUN_PATTERN = re.compile(r"[0-9A-Fa-f](?:[ \n]?[0-9A-Fa-f])*")


def encode(data: bytes) -> ArmoredMessage:
    """Encodes bytes as uppercase hex without separators.

    >>> encode(b"\\xde\\xad")
    'DEAD'
    """
    return bytes(data).hex().upper()


def strip_separators(text: str) -> str:
    return text.replace(" ", "").replace("\n", "")


def decode_strict(text: str) -> bytes:
    """
    Decodes armored text, ignoring spaces and newlines.

    :param text: the armored text, either case
    :type text: str
    :raises IllegalCharacter: for the first character outside the alphabet,
                              reporting its index in ``text``
    :raises OddLength: if the number of hex digits is odd
    :return: the decoded bytes
    :rtype: bytes
    """
    for index, char in enumerate(text):
        if char not in _HEX_DIGITS and char not in SEPARATORS:
            raise IllegalCharacter(index, char)

    digits = strip_separators(text)
    if len(digits) % 2:
        raise OddLength(f"{len(digits)} hex digits cannot form whole bytes")
    return bytes.fromhex(digits)


def extract_hex_runs(text: str, min_len: int = MIN_ENVELOPE_HEX) -> t.List[str]:
    """
    Finds candidate ciphertext inside recognized screen text.

    A run is a maximal sequence of hex digits in which single spaces or
    newlines are tolerated. Runs with fewer than ``min_len`` digits are
    dropped; the returned strings keep their embedded separators and are in
    document order.

    :param text: recognized text
    :type text: str
    :param min_len: minimum number of hex digits, even and at least 2
    :type min_len: int
    :return: the candidate runs
    :rtype: t.List[str]
    """
    if min_len < 2 or min_len % 2:
        raise ValueError(f"min_len must be even and >= 2, got {min_len}")

    runs = []
    for match in _RUN_PATTERN.finditer(text):
        run = match.group(0)
        if len(strip_separators(run)) >= min_len:
            runs.append(run)
    log.debug("found %d hex run(s) of at least %d digits", len(runs), min_len)
    return runs


def armor_envelope(env: MessageEnvelope) -> ArmoredMessage:
    """Serializes and armors an envelope."""
    return encode(pack_envelope(env))


def load_envelope(data: bytes) -> MessageEnvelope:
    """
    Parses an envelope from either its binary layout or its armored form.

    Binary envelopes are recognized by their magic; anything else is decoded
    as armored ASCII text first.
    """
    data = bytes(data)
    if data.startswith(ENVELOPE_MAGIC):
        return parse_envelope(data)

    try:
        text = data.decode("ascii")
    except UnicodeDecodeError:
        # neither binary envelope nor armored text: let the parser
        # report the magic mismatch
        return parse_envelope(data)
    return parse_envelope(decode_strict(text.strip()))
