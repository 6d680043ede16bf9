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
Every failure raised by *ekboard* derives from :class:`EKBError`. Each family
carries the exit code the command line interface reports for it, so callers
can map an exception to a process status without a lookup table.

Report-style outcomes (recitation findings, scan verdicts, blocked deliveries,
fingerprint mismatches) are plain values and never raised.
"""


class EKBError(Exception):
    """Base class of all domain errors."""

    exit_code: int = 1


class UsageError(EKBError):
    """Invalid command line arguments or settings."""


# --- crypto ---
class CryptoError(EKBError):
    """Envelope could not be created or opened."""

    exit_code = 2


class BadMagic(CryptoError):
    """The leading four bytes are not the envelope magic."""


class BadLength(CryptoError):
    """The ciphertext is empty, truncated or not block aligned."""


class BadPadding(CryptoError):
    """PKCS#7 check failed, usually a wrong key or a corrupted envelope."""


class BadMediaType(CryptoError):
    """The media tag byte is outside the known range."""


class BadKey(CryptoError):
    """A secret key has the wrong size or an unparsable hex form."""


# --- armor ---
class ArmorError(EKBError):
    """Armored text could not be decoded."""

    exit_code = 2


class OddLength(ArmorError):
    """The separator-stripped text has an odd number of digits."""


class IllegalCharacter(ArmorError):
    """A character outside the hex alphabet and the separators was found."""

    def __init__(self, index: int, char: str) -> None:
        super().__init__(f"illegal character {char!r} at index {index}")
        self.index = index
        self.char = char


# --- keyring ---
class KeyringError(EKBError):
    """Word list, transcriber or contact store failure."""

    exit_code = 5


class CorruptWordList(KeyringError):
    """The embedded word list does not match its checksum or shape."""


class TranscriptionFailed(KeyringError):
    """A transcriber could not turn the recording into words."""


class UnknownContact(KeyringError):
    """No contact with the given name exists in the store."""

    exit_code = 1


class ContactExists(KeyringError):
    """A contact with the given name is already present."""

    exit_code = 1


class UnverifiedContact(KeyringError):
    """A shared key was assigned before the fingerprint was verified."""

    exit_code = 3


class MissingSharedKey(KeyringError):
    """The contact is known but no shared key has been assigned yet."""

    exit_code = 1


class StoreCorrupt(KeyringError):
    """The contact store file is unreadable or violates its invariants."""


# --- ocr ---
class OcrError(EKBError):
    """Capture or recognition failure."""

    exit_code = 5


class FrameUnavailable(OcrError):
    """The capture source has no frame to hand out."""


class MalformedImage(OcrError):
    """The frame is not a binary 8-bit PGM."""


class ImageTooSmall(OcrError):
    """The image is smaller than the hash grid requires."""

    exit_code = 1


class NoCiphertextFound(OcrError):
    """No recognized hex run yields a valid envelope."""

    exit_code = 2


# --- simulation ---
class SimulationError(EKBError):
    """Channel simulation or evaluation failure."""

    exit_code = 1


class ConfigInvalid(SimulationError):
    """The evaluation configuration is inconsistent."""


class ScanDatabaseCorrupt(SimulationError):
    """The scanner database file cannot be parsed."""

    exit_code = 5


# --- analysis ---
class AnalysisError(EKBError):
    """Reordering-attack parameters are unusable."""

    exit_code = 1


class InvalidParams(AnalysisError):
    """The parameters violate their invariants or an operation precondition."""


class ParamsNotDivisible(AnalysisError):
    """The dictionary size is not a multiple of the words per fingerprint."""


class TooLargeForExact(AnalysisError):
    """Exact enumeration was requested for a dictionary that is too large."""
