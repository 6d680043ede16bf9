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
Loader for the embedded PGP word list.

The resource holds a ``sha256:<hex>`` checksum line followed by the 256 even
words and the 256 odd words, one per line. The checksum covers everything
after the first line.
"""
import hashlib
import logging
import functools
import importlib.resources
import typing as t

from ekboard.errors import CorruptWordList
from ekboard.keyring.model import WordList

log = logging.getLogger(__name__)

WORDLIST_RESOURCE = "pgpwords.txt"
LIST_SIZE = 256


def parse_wordlist(data: bytes) -> WordList:
    """
    Parses and validates raw word-list resource bytes.

    :param data: the resource content
    :type data: bytes
    :raises CorruptWordList: if the checksum does not match or either list
                             violates its shape (size, case, duplicates,
                             overlap)
    :return: the validated word list
    :rtype: WordList
    """
    header, sep, body = data.partition(b"\n")
    if not sep or not header.startswith(b"sha256:"):
        raise CorruptWordList("word list has no checksum line")

    expected = header[len(b"sha256:") :].strip().decode("ascii", "replace").lower()
    actual = hashlib.sha256(body).hexdigest()
    if expected != actual:
        raise CorruptWordList(f"checksum mismatch: expected {expected}, got {actual}")

    words = body.decode("utf-8").split()
    if len(words) != 2 * LIST_SIZE:
        raise CorruptWordList(f"expected {2 * LIST_SIZE} words, got {len(words)}")

    even, odd = tuple(words[:LIST_SIZE]), tuple(words[LIST_SIZE:])
    _check_list("even", even)
    _check_list("odd", odd)
    overlap = set(even) & set(odd)
    if overlap:
        raise CorruptWordList(f"lists are not disjoint: {sorted(overlap)[:3]}")
    return WordList(even, odd)


@functools.lru_cache(maxsize=1)
def load_wordlist() -> WordList:
    """Loads the embedded PGP word list (cached after the first call)."""
    data = (
        importlib.resources.files("ekboard.keyring")
        .joinpath(WORDLIST_RESOURCE)
        .read_bytes()
    )
    wl = parse_wordlist(data)
    log.debug("loaded PGP word list (%d + %d words)", len(wl.even), len(wl.odd))
    return wl


def _check_list(name: str, words: t.Tuple[str, ...]) -> None:
    if any(word != word.lower() for word in words):
        raise CorruptWordList(f"{name} list contains upper case words")
    if len(set(words)) != len(words):
        raise CorruptWordList(f"{name} list contains duplicates")
