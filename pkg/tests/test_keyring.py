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
import hashlib

import pytest

from ekboard.crypto import SecretKey
from ekboard.errors import (
    ContactExists,
    CorruptWordList,
    MissingSharedKey,
    StoreCorrupt,
    TranscriptionFailed,
    UnknownContact,
    UnverifiedContact,
)
from ekboard.keyring import (
    ContactStore,
    ErrorInjectingTranscriber,
    FindingKind,
    MockTranscriber,
    Transcript,
    generate_fingerprint,
    load_store,
    parse_wordlist,
    save_store,
    validate_recitation,
    verify_fingerprint,
)

# SHA-256(b"\x00") = 6e340b9c...afa01d spoken with the PGP word list
ZERO_BYTE_FINGERPRINT = (
    "goldfish confidence alone october zulu pocketful keyboard narrative "
    "python paperweight crumpled trombonist shamrock indigo allow chicago "
    "island millionaire belfast customer scallion consensus classic impetus "
    "music babylon reform amulet banjo pharmacy ragtime breakaway"
).split()


def random_keys(rng, count=100):
    return [rng.bytes(int(rng.integers(16, 65))) for _ in range(count)]


# --- word list ---
def test_wordlist_shape(wl):
    assert len(wl.even) == len(wl.odd) == 256
    assert wl.even[0] == "aardvark"
    assert wl.even[255] == "zulu"
    assert wl.odd[0] == "adroitness"
    assert wl.odd[255] == "yucatan"
    assert not set(wl.even) & set(wl.odd)
    assert wl.parity_of("absurd") == 1
    assert wl.index_of("zulu") == 255
    assert wl.parity_of("keyboardist") is None


def test_wordlist_checksum():
    body = b"\n".join(f"even{i:03d}".encode() for i in range(256))
    body += b"\n" + b"\n".join(f"odd{i:03d}".encode() for i in range(256)) + b"\n"
    header = b"sha256:" + hashlib.sha256(body).hexdigest().encode()

    wl = parse_wordlist(header + b"\n" + body)
    assert wl.even[3] == "even003"

    with pytest.raises(CorruptWordList):
        parse_wordlist(header + b"\n" + body.replace(b"odd255", b"odd254"))
    with pytest.raises(CorruptWordList):
        parse_wordlist(body)

    duplicated = body.replace(b"odd255", b"odd254")
    header = b"sha256:" + hashlib.sha256(duplicated).hexdigest().encode()
    with pytest.raises(CorruptWordList):
        parse_wordlist(header + b"\n" + duplicated)


# --- fingerprints ---
def test_known_fingerprint(wl):
    fp = generate_fingerprint(b"\x00", wl)
    assert list(fp.words) == ZERO_BYTE_FINGERPRINT
    assert fp.lines()[0] == "goldfish confidence alone october"
    assert len(fp.lines()) == 8

    with pytest.raises(ValueError):
        generate_fingerprint(b"", wl)


def test_fingerprint_alternation(wl, rng):
    for public_key in random_keys(rng, 50):
        fp = generate_fingerprint(public_key, wl)
        assert len(fp.words) == 32
        assert generate_fingerprint(public_key, wl) == fp
        for position, word in enumerate(fp.words):
            assert wl.parity_of(word) == position % 2
        assert validate_recitation(fp.words, wl).valid


def test_single_bit_changes_fingerprint(wl, rng):
    for public_key in random_keys(rng, 256):
        flipped = bytearray(public_key)
        flipped[int(rng.integers(len(flipped)))] ^= 1 << int(rng.integers(8))
        assert generate_fingerprint(public_key, wl) != generate_fingerprint(bytes(flipped), wl)


def test_duplicate_and_omission(wl):
    words = list(ZERO_BYTE_FINGERPRINT)

    duplicated = words[:3] + [words[2]] + words[3:]
    report = validate_recitation(duplicated, wl)
    assert any(
        f.kind == FindingKind.PARITY_VIOLATION and f.position == 3 for f in report.findings
    )
    assert len(report.of_kind(FindingKind.LENGTH_ERROR)) == 1

    omitted = words[:5] + words[6:]
    report = validate_recitation(omitted, wl)
    assert report.of_kind(FindingKind.LENGTH_ERROR)
    assert {f.position for f in report.of_kind(FindingKind.PARITY_VIOLATION)} == set(range(5, 31))

    report = validate_recitation(words[:-1] + ["Gibberish!"], wl)
    (finding,) = report.findings
    assert finding.kind == FindingKind.UNKNOWN_WORD
    assert finding.position == 31


def test_error_detection_exhaustive(wl, rng):
    for public_key in random_keys(rng, 100):
        words = list(generate_fingerprint(public_key, wl).words)
        digest = hashlib.sha256(public_key).digest()
        transcript = Transcript(tuple(words))
        assert verify_fingerprint(public_key, transcript, wl).matched

        for i in range(32):
            omitted = words[:i] + words[i + 1 :]
            assert not validate_recitation(omitted, wl).valid

            duplicated = words[: i + 1] + [words[i]] + words[i + 1 :]
            assert not validate_recitation(duplicated, wl).valid

            wrong_parity = list(words)
            wrong_parity[i] = wl.word_for(i + 1, digest[i])
            assert not validate_recitation(wrong_parity, wl).valid

            same_parity = list(words)
            same_parity[i] = wl.word_for(i, (digest[i] + 1) % 256)
            assert validate_recitation(same_parity, wl).valid
            result = verify_fingerprint(public_key, Transcript(tuple(same_parity)), wl)
            assert not result.matched
            assert [d.position for d in result.differences] == [i]

            if i < 31:
                swapped = list(words)
                swapped[i], swapped[i + 1] = swapped[i + 1], swapped[i]
                report = validate_recitation(swapped, wl)
                assert len(report.of_kind(FindingKind.PARITY_VIOLATION)) == 2


def test_verify_fingerprint(wl, rng):
    alice, mallory = random_keys(rng, 2)
    spoken = Transcript(generate_fingerprint(alice, wl).words)

    assert verify_fingerprint(alice, spoken, wl).matched
    # the public key was replaced in transit, the recitation was not
    result = verify_fingerprint(mallory, spoken, wl)
    assert not result.matched
    assert result.differences

    short = Transcript(spoken.words[:30])
    result = verify_fingerprint(alice, short, wl)
    assert [(d.position, d.actual) for d in result.differences] == [(30, None), (31, None)]


# --- transcribers ---
def test_mock_transcriber():
    transcript = MockTranscriber().transcribe(b"Aardvark, absurd.\n accrue")
    assert transcript.words == ("aardvark", "absurd", "accrue")
    assert transcript.source == "mock"

    with pytest.raises(TranscriptionFailed):
        MockTranscriber().transcribe(b"   ")
    with pytest.raises(TranscriptionFailed):
        MockTranscriber().transcribe(b"\xff\xfe")


def test_error_injecting_transcriber():
    manifest = " ".join(ZERO_BYTE_FINGERPRINT)
    inner = MockTranscriber()

    assert len(ErrorInjectingTranscriber(inner, omit={5}).transcribe(manifest).words) == 31
    duplicated = ErrorInjectingTranscriber(inner, duplicate={0}).transcribe(manifest)
    assert len(duplicated.words) == 33
    assert duplicated.words[:2] == ("goldfish", "goldfish")
    assert duplicated.source == "error-injecting:mock"

    substituted = ErrorInjectingTranscriber(inner, substitute={1: "absurd"}).transcribe(manifest)
    assert substituted.words[1] == "absurd"
    assert len(substituted.words) == 32


# --- contact store ---
def verified_store(wl, public_key=b"bob's public key"):
    store = ContactStore()
    store.add_contact("bob", public_key)
    spoken = Transcript(generate_fingerprint(public_key, wl).words)
    result, report = store.verify_contact("bob", spoken, wl, speaker_attested=True)
    assert result.matched and report.valid
    return store


def test_store_workflow(wl, key, tmp_path):
    store = verified_store(wl)
    store.set_shared_key("bob", key)
    assert store.get_shared_key("bob").material == key.material

    path = str(tmp_path / "contacts.json")
    save_store(store, path)
    loaded = load_store(path)
    assert loaded.contacts() == store.contacts()
    assert loaded.get("bob").speaker_attested


def test_store_errors(wl, key, tmp_path):
    store = ContactStore()
    store.add_contact("carol", b"carol's key")
    with pytest.raises(ContactExists):
        store.add_contact("carol", b"other")
    with pytest.raises(ValueError):
        store.add_contact("erin", b"")
    assert "erin" not in [c.name for c in store.contacts()]
    with pytest.raises(UnverifiedContact):
        store.set_shared_key("carol", key)
    with pytest.raises(UnknownContact):
        store.get("dave")
    with pytest.raises(MissingSharedKey):
        store.get_shared_key("carol")

    # a failed verification changes nothing
    wrong = Transcript(generate_fingerprint(b"someone else", wl).words)
    result, _ = store.verify_contact("carol", wrong, wl)
    assert not result.matched
    assert not store.get("carol").fingerprint_verified

    assert len(load_store(str(tmp_path / "missing.json"))) == 0


def test_store_corrupt(tmp_path, key):
    path = tmp_path / "contacts.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(StoreCorrupt):
        load_store(str(path))

    path.write_text(
        '{"version": 1, "contacts": [{"name": "eve", "public_key_hex": "00",'
        f' "fingerprint_verified": false, "shared_key_hex": "{key.to_hex()}"}}]}}',
        encoding="utf-8",
    )
    with pytest.raises(StoreCorrupt):
        load_store(str(path))

    path.write_text('{"version": 2, "contacts": []}', encoding="utf-8")
    with pytest.raises(StoreCorrupt):
        load_store(str(path))

    path.write_text(
        '{"version": 1, "contacts": [{"name": "eve", "public_key_hex": "",'
        ' "fingerprint_verified": false}]}',
        encoding="utf-8",
    )
    with pytest.raises(StoreCorrupt):
        load_store(str(path))
