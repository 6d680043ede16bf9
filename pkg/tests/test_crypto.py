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
import pytest
import numpy as np

from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes

from ekboard import ENVELOPE_MAGIC, HEADER_SIZE
from ekboard.crypto import SecretKey, generate_key, encrypt, encrypt_with_iv, decrypt
from ekboard.envelope import MediaType, pack_envelope, parse_envelope, new_envelope
from ekboard.errors import BadKey, BadLength, BadMagic, BadMediaType, BadPadding

# CBC-AES128 example vectors (NIST SP 800-38A)
NIST_KEY = "2b7e151628aed2a6abf7158809cf4f3c"
NIST_IV = bytes(range(16))
NIST_PLAINTEXT = bytes.fromhex(
    "6bc1bee22e409f96e93d7e117393172a"
    "ae2d8a571e03ac9c9eb76fac45af8e51"
    "30c81c46a35ce411e5fbc1191a0a52ef"
    "f69f2445df4f9b17ad2b417be66c3710"
)
NIST_CIPHERTEXT = bytes.fromhex(
    "7649abac8119b246cee98e9b12e9197d"
    "5086cb9b507219ee95db113a917678b2"
    "73bed6b8e3c1743b7116e69e22229516"
    "3ff1caa1681fac09120eca307586e1a7"
)


def test_generate_key_seeded():
    a = generate_key(np.random.default_rng(0))
    b = generate_key(np.random.default_rng(0))
    c = generate_key(np.random.default_rng(1))
    assert a == b
    assert a != c
    assert len(a.material) == 16
    assert len(generate_key().material) == 16


def test_secret_key_hex():
    key = SecretKey.from_hex(NIST_KEY.upper())
    assert key.to_hex() == NIST_KEY
    assert NIST_KEY not in repr(key)

    with pytest.raises(BadKey):
        SecretKey(b"\x00" * 15)
    with pytest.raises(BadKey):
        SecretKey.from_hex("zz" * 16)
    with pytest.raises(BadKey):
        SecretKey.from_hex(NIST_KEY[:-2])


def test_nist_vectors():
    key = SecretKey.from_hex(NIST_KEY)
    env = encrypt_with_iv(NIST_PLAINTEXT, MediaType.TEXT, key, NIST_IV)
    # the trailing block is the full PKCS#7 padding block
    assert env.ciphertext[:64] == NIST_CIPHERTEXT
    assert len(env.ciphertext) == 80
    assert decrypt(env, key) == (MediaType.TEXT, NIST_PLAINTEXT)


def test_independent_oracle(rng):
    AES = pytest.importorskip("Crypto.Cipher.AES")
    Padding = pytest.importorskip("Crypto.Util.Padding")

    for _ in range(100):
        key = generate_key(rng)
        iv = rng.bytes(16)
        plaintext = rng.bytes(int(rng.integers(0, 200)))
        env = encrypt_with_iv(plaintext, MediaType.AUDIO, key, iv)

        oracle = AES.new(key.material, AES.MODE_CBC, iv)
        assert env.ciphertext == oracle.encrypt(Padding.pad(plaintext, 16))


def cbc_by_hand(key: bytes, iv: bytes, plaintext: bytes) -> bytes:
    """AES-CBC built from single ECB block encryptions and manual padding."""
    fill = 16 - len(plaintext) % 16
    data = plaintext + bytes([fill]) * fill
    ecb = Cipher(algorithms.AES(key), modes.ECB()).encryptor()

    blocks, previous = [], iv
    for offset in range(0, len(data), 16):
        block = bytes(a ^ b for a, b in zip(data[offset : offset + 16], previous))
        previous = ecb.update(block)
        blocks.append(previous)
    return b"".join(blocks)


def test_chained_ecb_oracle(rng):
    assert cbc_by_hand(bytes.fromhex(NIST_KEY), NIST_IV, NIST_PLAINTEXT)[:64] == NIST_CIPHERTEXT

    for _ in range(100):
        key = generate_key(rng)
        iv = rng.bytes(16)
        plaintext = rng.bytes(int(rng.integers(0, 200)))
        env = encrypt_with_iv(plaintext, MediaType.VIDEO, key, iv)
        assert env.ciphertext == cbc_by_hand(key.material, iv, plaintext)


@pytest.mark.parametrize("media", list(MediaType))
def test_round_trip(media, rng, key):
    for size in [*range(0, 4097, 127), 15, 16, 17, 4096]:
        plaintext = rng.bytes(size)
        env = encrypt(plaintext, media, key, rng)
        assert len(env.ciphertext) == 16 * ((size + 1 + 15) // 16)
        assert decrypt(parse_envelope(pack_envelope(env)), key) == (media, plaintext)


def test_ciphertext_sizes(key):
    assert len(encrypt(b"", MediaType.TEXT, key).ciphertext) == 16
    assert len(encrypt(b"x" * 16, MediaType.TEXT, key).ciphertext) == 32


def test_fresh_iv(rng, key):
    envs = [encrypt(b"same message", MediaType.TEXT, key, rng) for _ in range(100)]
    assert len({bytes(env.iv) for env in envs}) == 100
    assert len({bytes(env.ciphertext) for env in envs}) == 100


def test_wrong_key_rate(rng, key):
    trials, failures = 1000, 0
    env = encrypt(b"attack at dawn", MediaType.TEXT, key, rng)
    for _ in range(trials):
        try:
            decrypt(env, generate_key(rng))
        except BadPadding:
            failures += 1

    p = 255 / 256
    sigma = (p * (1 - p) / trials) ** 0.5
    assert abs(failures / trials - p) <= 3 * sigma


def test_envelope_layout(key):
    env = encrypt_with_iv(b"hi", MediaType.VIDEO, key, NIST_IV)
    data = pack_envelope(env)
    assert data[:4] == ENVELOPE_MAGIC
    assert data[4] == MediaType.VIDEO
    assert data[5:21] == NIST_IV
    assert data[HEADER_SIZE:] == env.ciphertext
    assert len(data) == HEADER_SIZE + 16


def test_envelope_errors(key):
    data = pack_envelope(encrypt(b"payload", MediaType.IMAGE, key))

    with pytest.raises(BadMagic):
        parse_envelope(b"EKB2" + data[4:])
    with pytest.raises(BadLength):
        # ciphertext of 8 bytes
        parse_envelope(data[: HEADER_SIZE + 8])
    with pytest.raises(BadLength):
        parse_envelope(data[:HEADER_SIZE])
    with pytest.raises(BadMediaType):
        parse_envelope(data[:4] + b"\x05" + data[5:])
    with pytest.raises(BadLength):
        decrypt(new_envelope(MediaType.TEXT, NIST_IV, b"\x00" * 8), key)


def test_media_type_parse():
    assert MediaType.parse("voice-memo") == MediaType.VOICE_MEMO
    assert MediaType.parse("Text") == MediaType.TEXT
    assert MediaType.parse("4") == MediaType.VIDEO
    assert MediaType.VOICE_MEMO.label == "Voice memo"
    with pytest.raises(BadMediaType):
        MediaType.parse("hologram")
