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
import re
import enum
import json
import typing as t
import dataclasses as dc

from ekboard.crypto import SecretKey
from ekboard.errors import BadKey, StoreCorrupt

FINGERPRINT_WORDS = 32
"""Number of words in a fingerprint (one per SHA-256 byte)."""

STORE_VERSION = 1
"""Version of the contact store document."""

_PUNCTUATION = re.compile(r"[^\w\s]")


def normalize_words(text: str) -> t.Tuple[str, ...]:
    """Lowercases, strips punctuation and splits on any whitespace."""
    return tuple(_PUNCTUATION.sub("", text.lower()).split())


# --- word lists and fingerprints ---
@dc.dataclass(frozen=True, slots=True)
class WordList:
    """The two disjoint 256-word PGP alphabets.

    Even byte positions are spoken with a word from :attr:`even`, odd ones
    with a word from :attr:`odd`.
    """

    even: t.Tuple[str, ...]
    odd: t.Tuple[str, ...]
    _lookup: t.Dict[str, t.Tuple[int, int]] = dc.field(
        init=False, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        lookup = {word: (0, i) for i, word in enumerate(self.even)}
        lookup.update({word: (1, i) for i, word in enumerate(self.odd)})
        object.__setattr__(self, "_lookup", lookup)

    def parity_of(self, word: str) -> t.Optional[int]:
        """Returns 0 for an even-list word, 1 for an odd-list word, else None."""
        entry = self._lookup.get(word)
        return entry[0] if entry else None

    def index_of(self, word: str) -> t.Optional[int]:
        """Returns the byte value a word encodes, regardless of parity."""
        entry = self._lookup.get(word)
        return entry[1] if entry else None

    def word_for(self, position: int, value: int) -> str:
        return (self.even if position % 2 == 0 else self.odd)[value]


@dc.dataclass(frozen=True, slots=True)
class Fingerprint:
    """32 PGP words encoding the SHA-256 of a public key."""

    words: t.Tuple[str, ...]

    def __str__(self) -> str:
        return " ".join(self.words)

    def lines(self, per_line: int = 4) -> t.List[str]:
        """Groups the words for display, four per line by default."""
        return [
            " ".join(self.words[i : i + per_line])
            for i in range(0, len(self.words), per_line)
        ]


@dc.dataclass(frozen=True, slots=True)
class Transcript:
    """Words recognized from a spoken fingerprint."""

    words: t.Tuple[str, ...]
    source: str = "manual"

    @classmethod
    def from_text(cls, text: str, source: str = "manual") -> "Transcript":
        return cls(normalize_words(text), source)


# --- recitation checks ---
class FindingKind(enum.Enum):
    """Structural problems in a recited word sequence."""

    UNKNOWN_WORD = "unknown-word"
    """The word is in neither list."""

    PARITY_VIOLATION = "parity-violation"
    """The word comes from the list of the other parity."""

    LENGTH_ERROR = "length-error"
    """The sequence does not have 32 words."""


@dc.dataclass(frozen=True, slots=True)
class Finding:
    kind: FindingKind
    position: t.Optional[int] = None
    word: t.Optional[str] = None

    def __str__(self) -> str:
        if self.kind == FindingKind.LENGTH_ERROR:
            return f"{self.kind.value}: {self.word}"
        return f"{self.kind.value} at {self.position}: {self.word!r}"


@dc.dataclass(frozen=True, slots=True)
class ValidationReport:
    """Result of a recitation check. No findings means structurally valid."""

    findings: t.Tuple[Finding, ...]

    @property
    def valid(self) -> bool:
        return not self.findings

    def of_kind(self, kind: FindingKind) -> t.List[Finding]:
        return [f for f in self.findings if f.kind == kind]


class VerificationStatus(enum.Enum):
    MATCH = "match"
    MISMATCH = "mismatch"


@dc.dataclass(frozen=True, slots=True)
class WordDifference:
    """A position where the transcript disagrees with the expected words.

    A missing word on either side is represented by ``None``.
    """

    position: int
    expected: t.Optional[str]
    actual: t.Optional[str]


@dc.dataclass(frozen=True, slots=True)
class VerificationResult:
    status: VerificationStatus
    differences: t.Tuple[WordDifference, ...] = ()

    @property
    def matched(self) -> bool:
        return self.status == VerificationStatus.MATCH


# --- contacts ---
@dc.dataclass(slots=True)
class Contact:
    """A peer, its public key and, once verified, the shared secret key."""

    name: str
    public_key: bytes
    fingerprint_verified: bool = False
    speaker_attested: bool = False
    shared_key: t.Optional[SecretKey] = None


# --- JSON conversion ---
def contact_to_dict(contact: Contact) -> t.Dict[str, t.Any]:
    doc = {
        "name": contact.name,
        "public_key_hex": contact.public_key.hex(),
        "fingerprint_verified": contact.fingerprint_verified,
        "speaker_attested": contact.speaker_attested,
    }
    if contact.shared_key is not None:
        doc["shared_key_hex"] = contact.shared_key.to_hex()
    return doc


def contact_from_dict(doc: t.Dict[str, t.Any]) -> Contact:
    """Converts a stored record back into a contact, enforcing invariants."""
    try:
        contact = Contact(
            name=str(doc["name"]),
            public_key=bytes.fromhex(doc["public_key_hex"]),
            fingerprint_verified=bool(doc["fingerprint_verified"]),
            speaker_attested=bool(doc.get("speaker_attested", False)),
        )
        if doc.get("shared_key_hex") is not None:
            contact.shared_key = SecretKey.from_hex(doc["shared_key_hex"])
    except (KeyError, TypeError, ValueError, BadKey) as err:
        raise StoreCorrupt(f"invalid contact record: {err}") from err

    if not contact.public_key:
        raise StoreCorrupt(f"contact {contact.name!r} has an empty public key")
    if contact.shared_key is not None and not contact.fingerprint_verified:
        raise StoreCorrupt(f"contact {contact.name!r} has a key but is not verified")
    return contact


def to_json(contacts: t.Iterable[Contact]) -> str:
    """Converts contacts into the store document."""
    obj = {
        "version": STORE_VERSION,
        "contacts": [contact_to_dict(c) for c in contacts],
    }
    return json.dumps(obj, indent=2)


def from_json(json_str: str | dict) -> t.List[Contact]:
    """Converts the store document back into contacts."""
    if isinstance(json_str, str):
        try:
            obj = json.loads(json_str)
        except json.JSONDecodeError as err:
            raise StoreCorrupt(f"store is not valid JSON: {err}") from err
    else:
        obj = json_str

    if not isinstance(obj, dict) or obj.get("version") != STORE_VERSION:
        raise StoreCorrupt(f"unsupported store version (expected {STORE_VERSION})")
    records = obj.get("contacts")
    if not isinstance(records, list):
        raise StoreCorrupt("store has no contact list")
    return [contact_from_dict(doc) for doc in records]

