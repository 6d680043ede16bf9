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
Whitelist-constrained recognition of rendered armored text.

Recognition is pluggable through :class:`Recognizer`. The built-in
:class:`TemplateRecognizer` knows the rendering grid, so it can cut the frame
into glyph cells directly and classify each cell as the template with the
smallest Hamming distance. Nothing outside ``0-9``, ``A-F`` and the space
can ever be produced.
"""
import logging
import dataclasses as dc
import typing as t

import numpy as np

from ekboard.ocr.font import (
    GlyphFont,
    GLYPH_CELLS,
    GLYPH_HEIGHT,
    GLYPH_WIDTH,
    CELL_PITCH,
    LINE_PITCH,
)
from ekboard.ocr.image import GrayImage, INK_THRESHOLD

log = logging.getLogger(__name__)

#: cells with at most this many ink pixels are blank
BLANK_INK_LIMIT = 4


@dc.dataclass(frozen=True, slots=True)
class Recognition:
    """Recognized text and one match score per character.

    Spaces stand for blank cells followed by a glyph and always score 1.0.
    """

    text: str
    scores: t.Tuple[float, ...]

    @property
    def min_score(self) -> float:
        return min(self.scores, default=1.0)


class Recognizer:
    """Base class of all recognizers."""

    def recognize(self, img: GrayImage) -> Recognition:
        raise NotImplementedError


class TemplateRecognizer(Recognizer):
    """
    Nearest-template matcher for frames produced by
    :func:`~ekboard.ocr.render.render_armored`.

    :param font: the glyph templates
    :type font: GlyphFont
    :param scale: pixels per font cell the frame was rendered with
    :type scale: int
    """

    def __init__(self, font: GlyphFont, scale: int = 1) -> None:
        if scale < 1:
            raise ValueError("scale must be positive")
        self.font = font
        self.scale = scale

    def binarize(self, img: GrayImage) -> np.ndarray:
        """Averages ``scale x scale`` blocks and thresholds them (True = ink)."""
        s = self.scale
        rows, cols = img.height // s, img.width // s
        array = img.as_array()[: rows * s, : cols * s].astype(np.float64)
        blocks = array.reshape(rows, s, cols, s).mean(axis=(1, 3))
        return blocks < INK_THRESHOLD

    def classify(self, cell: np.ndarray) -> t.Tuple[str, float]:
        """Returns the nearest whitelist character and its score."""
        distances = np.count_nonzero(self.font.templates != cell, axis=(1, 2))
        # argmin picks the first minimum, i.e. whitelist order on ties
        best = int(np.argmin(distances))
        return self.font.chars[best], float(1.0 - distances[best] / GLYPH_CELLS)

    def recognize(self, img: GrayImage) -> Recognition:
        ink = self.binarize(img)
        lines = (ink.shape[0] + 1) // LINE_PITCH
        cols = (ink.shape[1] + 1) // CELL_PITCH

        chars, scores = [], []
        for line in range(lines):
            pending_blanks = 0
            for col in range(cols):
                y, x = line * LINE_PITCH, col * CELL_PITCH
                cell = ink[y : y + GLYPH_HEIGHT, x : x + GLYPH_WIDTH]
                if np.count_nonzero(cell) <= BLANK_INK_LIMIT:
                    pending_blanks += 1
                    continue

                # blanks count only when a glyph follows on the same line
                chars.extend(" " * pending_blanks)
                scores.extend([1.0] * pending_blanks)
                pending_blanks = 0

                char, score = self.classify(cell)
                chars.append(char)
                scores.append(score)

        text = "".join(chars)
        log.debug("recognized %d characters on %d line(s)", len(text), lines)
        return Recognition(text, tuple(scores))


def recognize_hex(
    img: GrayImage, font: GlyphFont, scale: int = 1
) -> t.Tuple[str, t.List[float]]:
    """
    Recognizes armored text in a rendered frame.

    Blank cells after the last glyph of a line are skipped. Every other blank
    cell comes back as a space with a score of 1.0, so that separate hex runs
    on one line stay separate for :func:`~ekboard.armor.extract_hex_runs`.

    :param img: the frame
    :type img: GrayImage
    :param font: the glyph templates
    :type font: GlyphFont
    :param scale: the scale the frame was rendered at, defaults to 1
    :type scale: int, optional
    :return: the text and the score of every character
    :rtype: t.Tuple[str, t.List[float]]
    """
    result = TemplateRecognizer(font, scale).recognize(img)
    return result.text, list(result.scores)
