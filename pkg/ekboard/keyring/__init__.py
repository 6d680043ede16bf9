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
from ekboard.keyring.model import (
    FINGERPRINT_WORDS,
    WordList,
    Fingerprint,
    Transcript,
    FindingKind,
    Finding,
    ValidationReport,
    VerificationStatus,
    WordDifference,
    VerificationResult,
    Contact,
    normalize_words,
    to_json,
    from_json,
)
from ekboard.keyring.wordlist import load_wordlist, parse_wordlist
from ekboard.keyring.fingerprint import (
    fingerprint_digest,
    generate_fingerprint,
    validate_recitation,
    verify_fingerprint,
)
from ekboard.keyring.transcriber import (
    Transcriber,
    MockTranscriber,
    ErrorInjectingTranscriber,
)
from ekboard.keyring.store import ContactStore, save_store, load_store
