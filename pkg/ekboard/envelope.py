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
Binary layout of an encrypted message. The envelope is a flat caterpillar
struct, so the wire format is declared once and used for both directions:

.. code-block:: text

    offset  size  field
    0       4     magic "EKB1"
    4       1     media tag (0..4)
    5       16    CBC initialization vector
    21      n     ciphertext, n a positive multiple of 16

The envelope carries no MAC. Tampering is noticed only probabilistically, by
the PKCS#7 check after decryption.
"""
import enum
import logging

from caterpillar.shortcuts import struct, LittleEndian, pack, unpack
from caterpillar.fields import uint8, Memory

from ekboard import ENVELOPE_MAGIC, BLOCK_SIZE, HEADER_SIZE
from ekboard.errors import BadMagic, BadLength, BadMediaType

log = logging.getLogger(__name__)


class MediaType(enum.IntEnum):
    """Kind of payload stored in an envelope."""

    TEXT = 0
    IMAGE = 1
    AUDIO = 2
    VOICE_MEMO = 3
    VIDEO = 4

    @property
    def label(self) -> str:
        """Human readable name as shown in evaluation reports."""
        return self.name.replace("_", " ").capitalize()

    @classmethod
    def parse(cls, name: str) -> "MediaType":
        """Accepts ``text``, ``voice-memo``, ``VOICE_MEMO`` or a tag number."""
        value = name.strip()
        if value.isdigit():
            return cls.from_tag(int(value))
        try:
            return cls[value.upper().replace("-", "_").replace(" ", "_")]
        except KeyError as err:
            raise BadMediaType(f"unknown media type {name!r}") from err

    @classmethod
    def from_tag(cls, tag: int) -> "MediaType":
        try:
            return cls(tag)
        except ValueError as err:
            raise BadMediaType(f"media tag {tag} out of range 0..4") from err


# Every field is a single byte or raw memory, so the byte order only
# matters to caterpillar's bookkeeping.
@struct(order=LittleEndian)
class MessageEnvelope:
    magic: Memory(4)
    """Envelope magic, always ``EKB1``"""

    media: uint8
    """Media tag, see :class:`MediaType`"""

    iv: Memory(BLOCK_SIZE)
    """Initialization vector of the CBC chain"""

    ciphertext: Memory(...)
    """All following data"""


def new_envelope(media: MediaType, iv: bytes, ciphertext: bytes) -> MessageEnvelope:
    """Creates an envelope with the standard magic."""
    return MessageEnvelope(
        magic=ENVELOPE_MAGIC,
        media=int(media),
        iv=bytes(iv),
        ciphertext=bytes(ciphertext),
    )


def check_envelope(env: MessageEnvelope) -> MediaType:
    """
    Validates the structural invariants of an envelope and returns its
    media type.

    :raises BadMagic: if the magic is not ``EKB1``
    :raises BadLength: if the IV or the ciphertext has an invalid size
    :raises BadMediaType: if the media tag is unknown
    """
    if bytes(env.magic) != ENVELOPE_MAGIC:
        raise BadMagic(f"expected {ENVELOPE_MAGIC!r}, got {bytes(env.magic)!r}")
    if len(env.iv) != BLOCK_SIZE:
        raise BadLength(f"IV must be {BLOCK_SIZE} bytes, got {len(env.iv)}")
    size = len(env.ciphertext)
    if size == 0 or size % BLOCK_SIZE:
        raise BadLength(
            f"ciphertext must be a positive multiple of {BLOCK_SIZE}, got {size}"
        )
    return MediaType.from_tag(env.media)


def pack_envelope(env: MessageEnvelope) -> bytes:
    """Serializes an envelope into its binary layout."""
    check_envelope(env)
    return pack(env)


def parse_envelope(data: bytes | memoryview) -> MessageEnvelope:
    """
    Parses the binary layout of an envelope.

    The magic is checked before anything else, so a foreign blob reports
    :class:`BadMagic` rather than a length problem.

    :param data: the received bytes
    :type data: bytes | memoryview
    :return: the parsed and validated envelope
    :rtype: MessageEnvelope
    """
    data = bytes(data)
    if data[: len(ENVELOPE_MAGIC)] != ENVELOPE_MAGIC:
        raise BadMagic(f"expected {ENVELOPE_MAGIC!r}, got {data[:4]!r}")
    if len(data) < HEADER_SIZE:
        raise BadLength(f"envelope header needs {HEADER_SIZE} bytes, got {len(data)}")

    env = unpack(MessageEnvelope, data)
    env = new_envelope(env.media, env.iv, env.ciphertext)
    check_envelope(env)
    log.debug("parsed envelope: media=%d, %d ciphertext bytes", env.media, len(env.ciphertext))
    return env
