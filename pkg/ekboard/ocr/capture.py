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
Frame capture. A :class:`CaptureSource` hands out the most recent screen
frame; :class:`FileCaptureSource` re-reads a PGM file that some external
screenshot tool keeps overwriting.

:class:`CaptureAgent` polls a source in a background thread and passes every
new frame to a :class:`FrameListener`, the way a screenshot service running
once per second would:

.. code-block:: python

    listener = DecryptingListener(key, default_font())
    agent = CaptureAgent(FileCaptureSource("screen.pgm"), listener, interval=1.0)
    if agent.run(timeout=30):
        media, plaintext = listener.result
"""
import os
import hashlib
import logging
import threading
import typing as t

from ekboard.crypto import SecretKey
from ekboard.envelope import MediaType
from ekboard.errors import (
    CryptoError,
    FrameUnavailable,
    MalformedImage,
    NoCiphertextFound,
    OcrError,
)
from ekboard.ocr.font import GlyphFont
from ekboard.ocr.image import GrayImage, load_pgm
from ekboard.ocr.pipeline import auto_decrypt

log = logging.getLogger(__name__)


class CaptureSource:
    def latest_frame(self) -> GrayImage:
        raise NotImplementedError


class FileCaptureSource(CaptureSource):
    """Reads the frame from ``path`` on every call."""

    def __init__(self, path: str) -> None:
        self.path = path

    def latest_frame(self) -> GrayImage:
        try:
            if os.path.getsize(self.path) == 0:
                # the writer truncated the file and has not finished yet
                raise FrameUnavailable(f"frame file {self.path!r} is empty")
            return load_pgm(self.path)
        except FileNotFoundError as err:
            raise FrameUnavailable(f"no frame at {self.path!r}") from err
        except OSError as err:
            raise FrameUnavailable(f"could not read {self.path!r}: {err}") from err


def latest_frame(source: CaptureSource) -> GrayImage:
    return source.latest_frame()


class FrameListener:
    def on_frame(self, frame: GrayImage) -> bool:
        """Handles a new frame. Returning True stops the agent."""
        return False

    def on_error(self, error: OcrError) -> None:
        pass


class DecryptingListener(FrameListener):
    """Tries :func:`auto_decrypt` on every new frame until one succeeds."""

    def __init__(self, key: SecretKey, font: GlyphFont, scale: int = 1) -> None:
        self.key = key
        self.font = font
        self.scale = scale
        self.result: t.Optional[t.Tuple[MediaType, bytes]] = None
        self.last_error: t.Optional[Exception] = None

    def on_frame(self, frame: GrayImage) -> bool:
        try:
            self.result = auto_decrypt(frame, self.key, self.font, self.scale)
        except (NoCiphertextFound, CryptoError) as err:
            self.last_error = err
            log.debug("frame not decryptable yet: %s", err)
            return False
        return True

    def on_error(self, error: OcrError) -> None:
        self.last_error = error


class CaptureAgent:
    def __init__(
        self,
        source: CaptureSource,
        listener: FrameListener,
        interval: float = 1.0,
    ) -> None:
        """
        Initializes the agent.

        :param source: where frames come from
        :type source: CaptureSource
        :param listener: receives every new frame
        :type listener: FrameListener
        :param interval: seconds between two polls, defaults to 1.0
        :type interval: float, optional
        """
        if interval <= 0:
            raise ValueError("interval must be positive")
        self.source = source
        self.listener = listener
        self.interval = interval
        self.frames_seen = 0

        # threading states
        self._stop = threading.Event()
        self._done = threading.Event()
        self._thread = None
        self._last_digest = None

    def start(self) -> None:
        if self._thread and self._thread.is_alive():
            raise RuntimeError("agent is already running")
        self._stop.clear()
        self._done.clear()
        self._thread = threading.Thread(target=self._run, daemon=True)
        self._thread.start()

    def stop(self) -> None:
        self._stop.set()
        if self._thread:
            self._thread.join()

    def wait(self, timeout: t.Optional[float] = None) -> bool:
        """Blocks until the listener is done; False on timeout."""
        return self._done.wait(timeout)

    def run(self, timeout: t.Optional[float] = None) -> bool:
        """Starts polling and blocks until the listener is done or time is up."""
        self.start()
        try:
            return self.wait(timeout)
        finally:
            self.stop()

    def poll_once(self) -> bool:
        """Reads the source once and returns True when the listener is done."""
        try:
            frame = self.source.latest_frame()
        except FrameUnavailable as err:
            log.debug("%s", err)
            return False
        except MalformedImage as err:
            self.listener.on_error(err)
            return False

        digest = hashlib.sha256(frame.pixels).digest()
        if digest == self._last_digest:
            return False

        self._last_digest = digest
        self.frames_seen += 1
        log.debug("new frame #%d (%dx%d)", self.frames_seen, frame.width, frame.height)
        return self.listener.on_frame(frame)

    def _run(self) -> None:
        while not self._stop.is_set():
            if self.poll_once():
                self._done.set()
                break
            self._stop.wait(self.interval)
