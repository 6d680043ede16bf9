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
Automated decryption of a captured frame: recognize the text, locate the
ciphertext, decode and open it.

.. code-block:: python

    from ekboard.ocr import auto_decrypt, default_font, load_pgm

    media, plaintext = auto_decrypt(load_pgm("screen.pgm"), key, default_font())
"""
import logging
import typing as t

import numpy as np

from ekboard import BLOCK_SIZE, MIN_ENVELOPE_HEX, ENVELOPE_MAGIC
from ekboard.armor import extract_hex_runs, strip_separators, decode_strict
from ekboard.crypto import SecretKey, decrypt
from ekboard.envelope import MediaType, parse_envelope
from ekboard.errors import ArmorError, BadPadding, CryptoError, NoCiphertextFound
from ekboard.ocr.font import GlyphFont
from ekboard.ocr.image import GrayImage
from ekboard.ocr.recognize import Recognizer, TemplateRecognizer

log = logging.getLogger(__name__)

_MAGIC_HEX = ENVELOPE_MAGIC.hex().upper()
_BLOCK_HEX = 2 * BLOCK_SIZE


def candidate_ciphertexts(text: str) -> t.Iterator[str]:
    """
    Yields hex strings that may hold an envelope, in document order.

    Each run is tried as a whole first, then from every later occurrence of
    the envelope magic, which drops hex-looking chat text glued to the front
    of the ciphertext. A start whose ciphertext is not block aligned is
    followed by its aligned prefixes, which drop hex-looking text glued to
    the end.
    """
    for run in extract_hex_runs(text, MIN_ENVELOPE_HEX):
        digits = strip_separators(run).upper()
        starts = [0]
        start = digits.find(_MAGIC_HEX, 1)
        while start != -1:
            if len(digits) - start >= MIN_ENVELOPE_HEX:
                starts.append(start)
            start = digits.find(_MAGIC_HEX, start + 1)

        for start in starts:
            suffix = digits[start:]
            yield suffix
            if suffix.startswith(_MAGIC_HEX):
                yield from aligned_prefixes(suffix)


def aligned_prefixes(digits: str) -> t.Iterator[str]:
    """
    Yields the prefixes of ``digits`` whose ciphertext part ends on a cipher
    block, longest first. Nothing is yielded if ``digits`` is aligned itself.
    """
    blocks, rest = divmod(len(digits) - MIN_ENVELOPE_HEX, _BLOCK_HEX)
    if rest == 0:
        return
    for count in range(blocks, 0, -1):
        yield digits[: MIN_ENVELOPE_HEX + count * _BLOCK_HEX]


def decrypt_text(text: str, key: SecretKey) -> t.Tuple[MediaType, bytes]:
    """
    Finds and opens the first envelope in recognized text.

    :raises BadPadding: if an envelope was found but none of the candidates
                        decrypts (usually the wrong key)
    :raises NoCiphertextFound: if no candidate is a structurally valid envelope
    """
    padding_error = None
    for candidate in candidate_ciphertexts(text):
        try:
            env = parse_envelope(decode_strict(candidate))
        except (ArmorError, CryptoError) as err:
            log.debug("rejected candidate run (%d digits): %s", len(candidate), err)
            continue

        try:
            return decrypt(env, key)
        except BadPadding as err:
            padding_error = padding_error or err

    if padding_error is not None:
        raise padding_error
    raise NoCiphertextFound("no recognized hex run holds a valid envelope")


def auto_decrypt(
    img: GrayImage,
    key: SecretKey,
    font: GlyphFont,
    scale: int = 1,
    recognizer: t.Optional[Recognizer] = None,
) -> t.Tuple[MediaType, bytes]:
    """
    Recognizes, extracts and decrypts the envelope shown in a frame.

    :param img: the captured frame
    :type img: GrayImage
    :param key: the shared secret key
    :type key: SecretKey
    :param font: the glyph templates
    :type font: GlyphFont
    :param scale: render scale of the frame, defaults to 1
    :type scale: int, optional
    :param recognizer: custom recognizer, defaults to the template matcher
    :type recognizer: t.Optional[Recognizer], optional
    :raises NoCiphertextFound: if no run yields a valid envelope
    :raises BadPadding: if the envelope does not open with ``key``
    :return: media type and plaintext
    :rtype: t.Tuple[MediaType, bytes]
    """
    recognizer = recognizer or TemplateRecognizer(font, scale)
    recognition = recognizer.recognize(img)
    log.debug(
        "frame %dx%d: %d characters, min score %.3f",
        img.width,
        img.height,
        len(recognition.text),
        recognition.min_score,
    )
    return decrypt_text(recognition.text, key)


def levenshtein(a: str, b: str) -> int:
    """Edit distance with unit costs, one numpy row per character of ``a``."""
    if not a or not b:
        return max(len(a), len(b))

    source = np.frombuffer(a.encode("utf-32-le"), dtype=np.uint32)
    target = np.frombuffer(b.encode("utf-32-le"), dtype=np.uint32)
    offsets = np.arange(len(b) + 1)
    previous = offsets.copy()
    for i, code in enumerate(source, start=1):
        cost = target != code
        current = np.empty_like(previous)
        current[0] = i
        current[1:] = np.minimum(previous[:-1] + cost, previous[1:] + 1)
        # insertions: current[j] = min over k <= j of current[k] + (j - k)
        previous = np.minimum.accumulate(current - offsets) + offsets
    return int(previous[-1])


def ocr_accuracy(reference: str, recognized: str) -> float:
    """
    ``1 - levenshtein / max(len(reference), 1)``, clamped to ``[0, 1]``.

    Two empty strings are a perfect match.
    """
    distance = levenshtein(reference, recognized)
    return float(min(1.0, max(0.0, 1.0 - distance / max(len(reference), 1))))
