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
File-backed contact store.

The store keeps all contacts in memory and writes them back as one JSON
document (see :func:`ekboard.keyring.model.to_json`). It is single-writer:
load it, mutate it, save it. A missing store file is treated as an empty
store so the first ``contact add`` can create it.
"""
import os
import logging
import tempfile
import typing as t

from ekboard.crypto import SecretKey
from ekboard.errors import (
    ContactExists,
    MissingSharedKey,
    StoreCorrupt,
    UnknownContact,
    UnverifiedContact,
)
from ekboard.keyring.model import (
    Contact,
    Transcript,
    ValidationReport,
    VerificationResult,
    WordList,
    to_json,
    from_json,
)
from ekboard.keyring.fingerprint import validate_recitation, verify_fingerprint

log = logging.getLogger(__name__)


class ContactStore:
    def __init__(
        self,
        path: t.Optional[str] = None,
        contacts: t.Optional[t.Iterable[Contact]] = None,
    ) -> None:
        """
        Initializes the store.

        :param path: the store file, defaults to None (in-memory only)
        :type path: t.Optional[str], optional
        :param contacts: pre-loaded contacts, defaults to None
        :type contacts: t.Optional[t.Iterable[Contact]], optional
        """
        self.path = path
        self.ccache: t.Dict[str, Contact] = {}
        for contact in contacts or ():
            if contact.name in self.ccache:
                raise StoreCorrupt(f"duplicate contact {contact.name!r}")
            self.ccache[contact.name] = contact

    def __contains__(self, name: str) -> bool:
        return name in self.ccache

    def __len__(self) -> int:
        return len(self.ccache)

    def contacts(self) -> t.List[Contact]:
        """Returns all contacts in insertion order."""
        return list(self.ccache.values())

    def get(self, name: str) -> Contact:
        contact = self.ccache.get(name)
        if contact is None:
            raise UnknownContact(f"no contact named {name!r}")
        return contact

    def add_contact(self, name: str, public_key: bytes) -> Contact:
        """
        Adds an unverified contact.

        :raises ContactExists: if the name is taken
        :raises ValueError: for an empty name or public key
        """
        if not name:
            raise ValueError("contact name must not be empty")
        if not public_key:
            raise ValueError(f"public key of {name!r} must not be empty")
        if name in self.ccache:
            raise ContactExists(f"contact {name!r} already exists")

        contact = Contact(name, bytes(public_key))
        self.ccache[name] = contact
        log.debug("added contact %r (%d byte public key)", name, len(contact.public_key))
        return contact

    def verify_contact(
        self,
        name: str,
        transcript: Transcript,
        wl: WordList,
        speaker_attested: bool = False,
    ) -> t.Tuple[VerificationResult, ValidationReport]:
        """
        Checks a transcribed recitation against the contact's public key.

        The contact becomes verified only if the recitation is structurally
        valid and every word matches. ``speaker_attested`` is the operator's
        judgement that the voice belongs to the contact; it is recorded as
        given. A failed verification leaves the contact untouched.

        :param name: the contact name
        :type name: str
        :param transcript: the transcribed recitation
        :type transcript: Transcript
        :param wl: the word list
        :type wl: WordList
        :param speaker_attested: whether the operator recognized the voice
        :type speaker_attested: bool
        :return: the verification result and the recitation report
        :rtype: t.Tuple[VerificationResult, ValidationReport]
        """
        contact = self.get(name)
        report = validate_recitation(transcript.words, wl)
        result = verify_fingerprint(contact.public_key, transcript, wl)
        if result.matched and report.valid:
            contact.fingerprint_verified = True
            contact.speaker_attested = bool(speaker_attested)
            log.info("contact %r verified", name)
        else:
            log.warning(
                "verification of %r failed: %d differing word(s), %d finding(s)",
                name,
                len(result.differences),
                len(report.findings),
            )
        return result, report

    def set_shared_key(self, name: str, key: SecretKey) -> None:
        """
        Assigns the shared secret key of a verified contact.

        :raises UnverifiedContact: if the fingerprint was not verified yet
        """
        contact = self.get(name)
        if not contact.fingerprint_verified:
            raise UnverifiedContact(
                f"verify the fingerprint of {name!r} before assigning a key"
            )
        contact.shared_key = key
        log.debug("assigned shared key to %r", name)

    def get_shared_key(self, name: str) -> SecretKey:
        contact = self.get(name)
        if contact.shared_key is None:
            raise MissingSharedKey(f"contact {name!r} has no shared key")
        return contact.shared_key

    def save(self, path: t.Optional[str] = None) -> None:
        """Writes the store, replacing the target file atomically."""
        path = path or self.path
        if not path:
            raise ValueError("no store path configured")

        directory = os.path.dirname(os.path.abspath(path))
        try:
            fd, tmp_path = tempfile.mkstemp(prefix=".ekboard-", dir=directory)
            with os.fdopen(fd, "w", encoding="utf-8") as fp:
                fp.write(to_json(self.contacts()))
            os.replace(tmp_path, path)
        except OSError as err:
            raise StoreCorrupt(f"could not write store {path!r}: {err}") from err
        log.info("saved %d contact(s) to %s", len(self), path)

    @classmethod
    def load(cls, path: str) -> "ContactStore":
        """Loads a store file; a missing file yields an empty store."""
        if not os.path.exists(path):
            log.debug("store %s does not exist yet, starting empty", path)
            return cls(path)

        try:
            with open(path, "r", encoding="utf-8") as fp:
                contacts = from_json(fp.read())
        except (OSError, UnicodeDecodeError) as err:
            raise StoreCorrupt(f"could not read store {path!r}: {err}") from err
        return cls(path, contacts)


def save_store(store: ContactStore, path: t.Optional[str] = None) -> None:
    store.save(path)


def load_store(path: str) -> ContactStore:
    return ContactStore.load(path)
