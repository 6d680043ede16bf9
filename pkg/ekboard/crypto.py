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
AES-128 in CBC mode with PKCS#7 padding, wrapped into message envelopes.

A fresh IV is drawn for every message. All randomness comes from a
:class:`numpy.random.Generator` when one is supplied, which makes every
command reproducible under ``--seed``; without a generator the operating
system's CSPRNG is used.
"""
import os
import logging
import typing as t

import numpy as np

from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes
from cryptography.hazmat.primitives import padding

from ekboard import KEY_SIZE, BLOCK_SIZE
from ekboard.errors import BadKey, BadPadding
from ekboard.envelope import MediaType, MessageEnvelope, new_envelope, check_envelope

log = logging.getLogger(__name__)

#: PKCS#7 works in bits
_PADDING_BITS = BLOCK_SIZE * 8


class SecretKey:
    """A 128-bit shared symmetric key.

    The raw bytes are only reachable through :meth:`to_hex` and
    :attr:`material`; ``repr`` never shows them.
    """

    __slots__ = ("_material",)

    def __init__(self, material: bytes) -> None:
        material = bytes(material)
        if len(material) != KEY_SIZE:
            raise BadKey(f"key must be {KEY_SIZE} bytes, got {len(material)}")
        self._material = material

    @property
    def material(self) -> bytes:
        return self._material

    def to_hex(self) -> str:
        """Exports the key as 32 lowercase hex characters."""
        return self._material.hex()

    @classmethod
    def from_hex(cls, text: str) -> "SecretKey":
        """Imports a key from its 32-character hex export."""
        text = text.strip()
        if len(text) != 2 * KEY_SIZE:
            raise BadKey(f"hex key must have {2 * KEY_SIZE} characters, got {len(text)}")
        try:
            return cls(bytes.fromhex(text))
        except ValueError as err:
            raise BadKey(f"invalid hex key: {err}") from err

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SecretKey):
            return NotImplemented
        return self._material == other._material

    def __hash__(self) -> int:
        return hash(self._material)

    def __repr__(self) -> str:
        return "SecretKey(<redacted>)"


def random_bytes(size: int, rng: t.Optional[np.random.Generator] = None) -> bytes:
    """Draws ``size`` bytes from ``rng`` or, without one, from the OS."""
    if rng is None:
        return os.urandom(size)
    return rng.bytes(size)


def generate_key(rng: t.Optional[np.random.Generator] = None) -> SecretKey:
    """Generates a new random 128-bit key."""
    return SecretKey(random_bytes(KEY_SIZE, rng))


def _cipher(key: SecretKey, iv: bytes) -> Cipher:
    return Cipher(algorithms.AES(key.material), modes.CBC(bytes(iv)))


def encrypt_with_iv(
    plaintext: bytes, media: MediaType, key: SecretKey, iv: bytes
) -> MessageEnvelope:
    """Encrypts with a caller-chosen IV.

    Only meant for fixed test vectors; :func:`encrypt` draws a fresh IV.
    """
    if len(iv) != BLOCK_SIZE:
        raise ValueError(f"IV must be {BLOCK_SIZE} bytes")

    padder = padding.PKCS7(_PADDING_BITS).padder()
    padded = padder.update(bytes(plaintext)) + padder.finalize()

    encryptor = _cipher(key, iv).encryptor()
    ciphertext = encryptor.update(padded) + encryptor.finalize()
    return new_envelope(MediaType(media), iv, ciphertext)


def encrypt(
    plaintext: bytes,
    media: MediaType,
    key: SecretKey,
    rng: t.Optional[np.random.Generator] = None,
) -> MessageEnvelope:
    """
    Encrypts a payload of the given media type.

    The ciphertext length is ``16 * ceil((len(plaintext) + 1) / 16)``; an empty
    plaintext yields one full padding block.

    :param plaintext: the payload, may be empty
    :type plaintext: bytes
    :param media: the payload's media type
    :type media: MediaType
    :param key: the shared secret key
    :type key: SecretKey
    :param rng: source of the IV, defaults to the OS CSPRNG
    :type rng: t.Optional[np.random.Generator], optional
    :return: the envelope
    :rtype: MessageEnvelope
    """
    env = encrypt_with_iv(plaintext, media, key, random_bytes(BLOCK_SIZE, rng))
    log.debug(
        "encrypted %d bytes of %s into %d ciphertext bytes",
        len(plaintext),
        MediaType(media).name,
        len(env.ciphertext),
    )
    return env


def decrypt(env: MessageEnvelope, key: SecretKey) -> t.Tuple[MediaType, bytes]:
    """
    Opens an envelope.

    :param env: the envelope
    :type env: MessageEnvelope
    :param key: the shared secret key
    :type key: SecretKey
    :raises BadMagic: wrong leading bytes
    :raises BadLength: ciphertext not a positive multiple of 16
    :raises BadPadding: PKCS#7 check failed (wrong key or corruption)
    :return: the media type and the original plaintext
    :rtype: t.Tuple[MediaType, bytes]
    """
    media = check_envelope(env)

    decryptor = _cipher(key, env.iv).decryptor()
    padded = decryptor.update(bytes(env.ciphertext)) + decryptor.finalize()

    unpadder = padding.PKCS7(_PADDING_BITS).unpadder()
    try:
        plaintext = unpadder.update(padded) + unpadder.finalize()
    except ValueError as err:
        raise BadPadding("invalid PKCS#7 padding (wrong key or corrupted envelope)") from err
    return media, plaintext
