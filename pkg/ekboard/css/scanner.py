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
Client-side scanner.

A :class:`ScanDatabase` holds the known-bad corpus in three forms: SHA-256
digests for exact matches, 64-bit difference hashes for visually similar
images and lower case keywords for text. A scanner profile selects which of
these rules a messaging app applies.

The database file is plain text with labeled sections:

.. code-block:: text

    # comments are allowed anywhere
    [sha256]
    6e340b9cffb37a989ca544e6bb780a2c78901d3fb33738768511a30617afa01d
    [dhash]
    f0e0c0c080808000
    [keywords]
    rumor
"""
import re
import enum
import hashlib
import logging
import dataclasses as dc
import typing as t

import numpy as np

from ekboard.envelope import MediaType
from ekboard.errors import OcrError, ImageTooSmall, ScanDatabaseCorrupt
from ekboard.ocr.image import GrayImage, read_pgm

log = logging.getLogger(__name__)

#: maximum Hamming distance at which two difference hashes match
PERCEPTUAL_THRESHOLD = 10

#: shortest word taken from known-bad text as a keyword
MIN_KEYWORD_LENGTH = 4

DHASH_COLUMNS = 9
DHASH_ROWS = 8

_WORD = re.compile(r"[^\W_]+")
_HEX_ONLY = re.compile(r"[0-9a-f]+")


class Outcome(enum.Enum):
    CLEAN = "clean"
    FLAGGED = "flagged"


class ScanRule(enum.Enum):
    """Matching rules a scanner can apply."""

    EXACT = "sha256"
    """SHA-256 of the payload is in the database."""

    PERCEPTUAL = "dhash"
    """An image payload is visually close to a known image."""

    KEYWORD = "keyword"
    """A text payload contains a known keyword."""


ALL_RULES = frozenset(ScanRule)

SCAN_PROFILES: t.Dict[str, t.FrozenSet[ScanRule]] = {
    "exact": frozenset({ScanRule.EXACT}),
    "perceptual": frozenset({ScanRule.EXACT, ScanRule.PERCEPTUAL}),
    "full": ALL_RULES,
}
"""Named rule sets; every profile includes the exact rule."""


@dc.dataclass(frozen=True, slots=True)
class ScanVerdict:
    outcome: Outcome
    reason: t.Optional[str] = None
    """Which rule fired, e.g. ``keyword:rumor``"""

    def __post_init__(self) -> None:
        if (self.outcome == Outcome.FLAGGED) != (self.reason is not None):
            raise ValueError("a reason is required exactly for flagged verdicts")

    @property
    def flagged(self) -> bool:
        return self.outcome == Outcome.FLAGGED

    def __str__(self) -> str:
        return self.outcome.value if not self.flagged else f"flagged ({self.reason})"


CLEAN = ScanVerdict(Outcome.CLEAN)


@dc.dataclass(frozen=True, slots=True)
class ScanDatabase:
    exact_hashes: t.FrozenSet[bytes] = frozenset()
    perceptual_hashes: t.FrozenSet[int] = frozenset()
    keywords: t.Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "exact_hashes", frozenset(map(bytes, self.exact_hashes)))
        object.__setattr__(self, "perceptual_hashes", frozenset(map(int, self.perceptual_hashes)))
        # keep the first occurrence of every keyword
        keywords = dict.fromkeys(k.strip().lower() for k in self.keywords)
        keywords.pop("", None)
        object.__setattr__(self, "keywords", tuple(keywords))

        if any(len(digest) != 32 for digest in self.exact_hashes):
            raise ValueError("exact hashes must be 32-byte SHA-256 digests")
        if any(not 0 <= value < 1 << 64 for value in self.perceptual_hashes):
            raise ValueError("perceptual hashes must be 64-bit values")

    def __len__(self) -> int:
        return len(self.exact_hashes) + len(self.perceptual_hashes) + len(self.keywords)

    def merge(self, other: "ScanDatabase") -> "ScanDatabase":
        return ScanDatabase(
            self.exact_hashes | other.exact_hashes,
            self.perceptual_hashes | other.perceptual_hashes,
            self.keywords + other.keywords,
        )

    @classmethod
    def from_plaintexts(
        cls, items: t.Iterable[t.Tuple[MediaType, bytes]]
    ) -> "ScanDatabase":
        """
        Derives rules from known-bad content.

        Every payload contributes its SHA-256. Images that parse as PGM
        contribute their difference hash and text contributes its words of at
        least four characters. Words made of hex digits only are skipped, as
        they could occur inside any armored message.

        :param items: ``(media, payload)`` pairs
        :type items: t.Iterable[t.Tuple[MediaType, bytes]]
        :return: the derived database
        :rtype: ScanDatabase
        """
        exact, perceptual, keywords = set(), set(), []
        for media, payload in items:
            exact.add(hashlib.sha256(payload).digest())
            if media == MediaType.IMAGE:
                try:
                    perceptual.add(dhash(read_pgm(payload)))
                except OcrError:
                    pass
            elif media == MediaType.TEXT:
                keywords.extend(extract_keywords(payload))
        return cls(frozenset(exact), frozenset(perceptual), tuple(keywords))

    # --- text format ---
    def to_text(self) -> str:
        lines = ["# ekboard scan database", "[sha256]"]
        lines.extend(sorted(digest.hex() for digest in self.exact_hashes))
        lines.append("[dhash]")
        lines.extend(f"{value:016x}" for value in sorted(self.perceptual_hashes))
        lines.append("[keywords]")
        lines.extend(self.keywords)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ScanDatabase":
        """Parses the labeled-section file format."""
        exact, perceptual, keywords = set(), set(), []
        section = None
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("[") and line.endswith("]"):
                section = line[1:-1].strip().lower()
                if section not in ("sha256", "dhash", "keywords"):
                    raise ScanDatabaseCorrupt(f"line {lineno}: unknown section {line}")
                continue

            try:
                match section:
                    case "sha256":
                        digest = bytes.fromhex(line)
                        if len(digest) != 32:
                            raise ValueError("digest must be 32 bytes")
                        exact.add(digest)
                    case "dhash":
                        if len(line) != 16:
                            raise ValueError("dHash must be 16 hex digits")
                        perceptual.add(int(line, 16))
                    case "keywords":
                        keywords.append(line.lower())
                    case _:
                        raise ValueError("entry outside of any section")
            except ValueError as err:
                raise ScanDatabaseCorrupt(f"line {lineno}: {err}") from err
        return cls(frozenset(exact), frozenset(perceptual), tuple(keywords))


def extract_keywords(payload: bytes) -> t.List[str]:
    """Lower case words of known-bad text usable as keywords."""
    text = payload.decode("utf-8", errors="replace").lower()
    return [
        word
        for word in _WORD.findall(text)
        if len(word) >= MIN_KEYWORD_LENGTH and not _HEX_ONLY.fullmatch(word)
    ]


def load_scan_database(path: str) -> ScanDatabase:
    try:
        with open(path, "r", encoding="utf-8") as fp:
            text = fp.read()
    except (OSError, UnicodeDecodeError) as err:
        raise ScanDatabaseCorrupt(f"could not read scan database {path!r}: {err}") from err
    return ScanDatabase.from_text(text)


def save_scan_database(db: ScanDatabase, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fp:
        fp.write(db.to_text())


# --- difference hash ---
def _pool_weights(size: int, cells: int) -> np.ndarray:
    """
    Integer area weights of ``size`` pixels over ``cells`` equal cells.

    Pixel ``i`` spans ``[i * cells, (i + 1) * cells)`` and cell ``c`` spans
    ``[c * size, (c + 1) * size)`` in units of ``1 / cells`` pixel, so every
    cell has the same total weight ``size`` and pooled cells compare exactly.
    """
    pixel = np.arange(size, dtype=np.int64)[None, :]
    cell = np.arange(cells, dtype=np.int64)[:, None]
    low = np.maximum(pixel * cells, cell * size)
    high = np.minimum((pixel + 1) * cells, (cell + 1) * size)
    return np.clip(high - low, 0, None)


def dhash(img: GrayImage) -> int:
    """
    64-bit difference hash.

    The image is area-averaged onto a 9x8 grid; bit ``(r, c)`` is set when
    cell ``(r, c)`` is brighter than its right neighbour. Bits are packed
    row-major with ``(0, 0)`` as the most significant bit. A uniform image
    and a dark-to-light gradient hash to 0, a light-to-dark gradient to
    ``2**64 - 1``.

    :raises ImageTooSmall: for images narrower than 2 or without rows
    """
    if img.width < 2 or img.height < 1:
        raise ImageTooSmall(f"dHash needs at least 2x1 pixels, got {img.width}x{img.height}")

    array = img.as_array().astype(np.int64)
    rows = _pool_weights(img.height, DHASH_ROWS)
    cols = _pool_weights(img.width, DHASH_COLUMNS)
    grid = rows @ array @ cols.T

    bits = grid[:, :-1] > grid[:, 1:]
    return int.from_bytes(np.packbits(bits.ravel()).tobytes(), "big")


def hamming(a: int, b: int) -> int:
    return (a ^ b).bit_count()


# --- scanning ---
def scan(
    db: ScanDatabase,
    media: MediaType,
    payload: bytes,
    rules: t.AbstractSet[ScanRule] = ALL_RULES,
) -> ScanVerdict:
    """
    Checks one payload against the database.

    Rules are applied in the order exact, perceptual (images that parse as
    PGM), keyword (text); the first one that fires decides.

    :param db: the known-bad corpus
    :type db: ScanDatabase
    :param media: the payload's declared media type
    :type media: MediaType
    :param payload: the payload bytes, must not be empty
    :type payload: bytes
    :param rules: rules to apply, defaults to all
    :type rules: t.AbstractSet[ScanRule], optional
    :return: the verdict
    :rtype: ScanVerdict
    """
    if not payload:
        raise ValueError("cannot scan an empty payload")

    if ScanRule.EXACT in rules:
        digest = hashlib.sha256(payload).digest()
        if digest in db.exact_hashes:
            return ScanVerdict(Outcome.FLAGGED, f"sha256:{digest.hex()}")

    if ScanRule.PERCEPTUAL in rules and media == MediaType.IMAGE and db.perceptual_hashes:
        try:
            value = dhash(read_pgm(payload))
        except OcrError:
            value = None
        if value is not None:
            known = min(db.perceptual_hashes, key=lambda h: hamming(h, value))
            distance = hamming(known, value)
            if distance <= PERCEPTUAL_THRESHOLD:
                return ScanVerdict(Outcome.FLAGGED, f"dhash:{known:016x} distance {distance}")

    if ScanRule.KEYWORD in rules and media == MediaType.TEXT and db.keywords:
        text = payload.decode("utf-8", errors="replace").lower()
        for keyword in db.keywords:
            if keyword in text:
                return ScanVerdict(Outcome.FLAGGED, f"keyword:{keyword}")

    return CLEAN
