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
Speech-to-text is pluggable. A :class:`Transcriber` turns an opaque
recording into a :class:`~ekboard.keyring.model.Transcript`; real engines are
out of scope, so the built-in implementation reads a text manifest instead of
audio. :class:`ErrorInjectingTranscriber` reproduces typical recitation
mistakes on top of any other transcriber.
"""
import logging
import typing as t

from ekboard.errors import TranscriptionFailed
from ekboard.keyring.model import Transcript, normalize_words

log = logging.getLogger(__name__)


class Transcriber:
    """Base class of all transcribers."""

    #: identifier stored in every produced transcript
    name: str = "transcriber"

    def transcribe(self, audio: bytes) -> Transcript:
        raise NotImplementedError


class MockTranscriber(Transcriber):
    """Treats the recording as a UTF-8 manifest of the spoken words."""

    name = "mock"

    def transcribe(self, audio: bytes | str) -> Transcript:
        if isinstance(audio, str):
            text = audio
        else:
            try:
                text = bytes(audio).decode("utf-8")
            except UnicodeDecodeError as err:
                raise TranscriptionFailed(f"manifest is not UTF-8: {err}") from err

        words = normalize_words(text)
        if not words:
            raise TranscriptionFailed("manifest contains no words")
        return Transcript(words, self.name)


class ErrorInjectingTranscriber(Transcriber):
    """
    Wraps another transcriber and applies recitation mistakes.

    All positions refer to the word sequence produced by the wrapped
    transcriber, so ``omit={5}`` always removes the sixth original word no
    matter what else is injected. Positions outside the sequence are ignored.

    :param inner: the wrapped transcriber
    :type inner: Transcriber
    :param omit: positions of words that are not spoken
    :type omit: t.Iterable[int]
    :param duplicate: positions of words spoken twice in a row
    :type duplicate: t.Iterable[int]
    :param substitute: replacement word per position
    :type substitute: t.Optional[t.Mapping[int, str]]
    """

    name = "error-injecting"

    def __init__(
        self,
        inner: Transcriber,
        omit: t.Iterable[int] = (),
        duplicate: t.Iterable[int] = (),
        substitute: t.Optional[t.Mapping[int, str]] = None,
    ) -> None:
        self.inner = inner
        self.omit = frozenset(omit)
        self.duplicate = frozenset(duplicate)
        self.substitute = dict(substitute or {})

    def transcribe(self, audio: bytes) -> Transcript:
        original = self.inner.transcribe(audio)
        words = []
        for position, word in enumerate(original.words):
            if position in self.omit:
                continue
            word = self.substitute.get(position, word)
            words.append(word)
            if position in self.duplicate:
                words.append(word)

        log.debug(
            "injected errors: %d -> %d words (omit=%s, duplicate=%s, substitute=%s)",
            len(original.words),
            len(words),
            sorted(self.omit),
            sorted(self.duplicate),
            sorted(self.substitute),
        )
        return Transcript(tuple(words), f"{self.name}:{original.source}")
