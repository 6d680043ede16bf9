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

from ekboard import HEX_ALPHABET
from ekboard.armor import (
    encode,
    decode_strict,
    extract_hex_runs,
    armor_envelope,
    load_envelope,
)
from ekboard.crypto import encrypt, decrypt
from ekboard.envelope import MediaType, pack_envelope
from ekboard.errors import BadMagic, IllegalCharacter, OddLength


def test_encode():
    assert encode(b"\x00") == "00"
    assert encode(b"\xde\xad") == "DEAD"
    assert encode(b"") == ""


def test_decode_strict():
    assert decode_strict("DE AD\n") == b"\xde\xad"
    assert decode_strict("dead") == b"\xde\xad"
    with pytest.raises(OddLength):
        decode_strict("DEA")
    with pytest.raises(IllegalCharacter) as info:
        decode_strict("DEAG")
    assert info.value.index == 3
    assert info.value.char == "G"
    with pytest.raises(IllegalCharacter):
        decode_strict("DE\tAD")


def test_round_trip(rng):
    for size in range(0, 300, 7):
        data = rng.bytes(size)
        text = encode(data)
        assert set(text) <= set(HEX_ALPHABET)
        assert decode_strict(text) == data
        assert encode(decode_strict(text)) == text


def test_extract_hex_runs():
    assert extract_hex_runs("hello ABCD12 world", 6) == ["ABCD12"]
    assert extract_hex_runs("nothing to see here", 6) == []
    assert extract_hex_runs("x 0011AA yy BBCC 22 zz", 6) == ["0011AA", "BBCC 22"]
    # a double separator ends a run
    assert extract_hex_runs("AABB  CCDD", 4) == ["AABB", "CCDD"]

    for run in extract_hex_runs("see: 12AB\n34CD, then ffee 0099!", 4):
        assert set(run) <= set(HEX_ALPHABET + "abcdef \n")

    with pytest.raises(ValueError):
        extract_hex_runs("ABCD", 3)


def test_load_envelope_both_forms(key):
    env = encrypt(b"hello", MediaType.TEXT, key)
    armored = armor_envelope(env)
    assert decrypt(load_envelope(pack_envelope(env)), key)[1] == b"hello"
    assert decrypt(load_envelope(armored.encode() + b"\n"), key)[1] == b"hello"
    with pytest.raises(BadMagic):
        load_envelope(b"\xff\xfe garbage")
