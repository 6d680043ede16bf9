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
Vocal fingerprints of public keys.

A fingerprint is the SHA-256 digest of the public key spoken as 32 PGP words.
Byte ``i`` is read from the even list when ``i`` is even and from the odd
list otherwise. Because both lists are disjoint, a listener can notice
omitted, duplicated or swapped words without knowing the key: every such
mistake moves some word onto a slot of the wrong parity.

.. code-block:: python

    from ekboard.keyring import load_wordlist, generate_fingerprint

    wl = load_wordlist()
    fp = generate_fingerprint(public_key, wl)
    print("\\n".join(fp.lines()))
"""
import hashlib
import itertools
import logging
import typing as t

from ekboard.keyring.model import (
    FINGERPRINT_WORDS,
    WordList,
    Fingerprint,
    Transcript,
    Finding,
    FindingKind,
    ValidationReport,
    VerificationResult,
    VerificationStatus,
    WordDifference,
    normalize_words,
)

log = logging.getLogger(__name__)


def fingerprint_digest(public_key: bytes) -> bytes:
    """Returns the SHA-256 digest the fingerprint words encode."""
    return hashlib.sha256(bytes(public_key)).digest()


def generate_fingerprint(public_key: bytes, wl: WordList) -> Fingerprint:
    """
    Maps the SHA-256 of a public key to 32 alternating PGP words.

    :param public_key: the raw public key, must not be empty
    :type public_key: bytes
    :param wl: the word list
    :type wl: WordList
    :return: the fingerprint
    :rtype: Fingerprint
    """
    if not public_key:
        raise ValueError("public key must not be empty")

    digest = fingerprint_digest(public_key)
    return Fingerprint(tuple(wl.word_for(i, b) for i, b in enumerate(digest)))


def validate_recitation(words: t.Sequence[str], wl: WordList) -> ValidationReport:
    """
    Checks a recited word sequence for structural mistakes.

    No knowledge of the expected fingerprint is needed; the check only uses
    list membership and the even/odd alternation.

    :param words: the recited words (case and punctuation are ignored)
    :type words: t.Sequence[str]
    :param wl: the word list
    :type wl: WordList
    :return: one finding per unknown or misplaced word, plus a length error
             if the sequence does not have 32 words
    :rtype: ValidationReport
    """
    findings = []
    for position, raw in enumerate(words):
        word = " ".join(normalize_words(raw))
        parity = wl.parity_of(word)
        if parity is None:
            findings.append(Finding(FindingKind.UNKNOWN_WORD, position, raw))
        elif parity != position % 2:
            findings.append(Finding(FindingKind.PARITY_VIOLATION, position, word))

    if len(words) != FINGERPRINT_WORDS:
        findings.append(
            Finding(
                FindingKind.LENGTH_ERROR,
                word=f"expected {FINGERPRINT_WORDS} words, got {len(words)}",
            )
        )
    return ValidationReport(tuple(findings))


def verify_fingerprint(
    public_key: bytes, transcript: Transcript, wl: WordList
) -> VerificationResult:
    """
    Compares a transcribed recitation with the fingerprint of the public
    key that was actually received.

    An attacker who swaps the public key but cannot change what the owner
    speaks is caught here.

    :param public_key: the received public key
    :type public_key: bytes
    :param transcript: the words recognized from the owner's recitation
    :type transcript: Transcript
    :param wl: the word list
    :type wl: WordList
    :return: a match, or a mismatch with every differing position
    :rtype: VerificationResult
    """
    expected = generate_fingerprint(public_key, wl).words
    differences = tuple(
        WordDifference(position, exp, act)
        for position, (exp, act) in enumerate(
            itertools.zip_longest(expected, transcript.words)
        )
        if exp != act
    )
    if differences:
        log.debug(
            "fingerprint mismatch at %d position(s) (source=%s)",
            len(differences),
            transcript.source,
        )
        return VerificationResult(VerificationStatus.MISMATCH, differences)
    return VerificationResult(VerificationStatus.MATCH)
