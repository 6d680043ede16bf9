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
Renders armored text the way a phone screen would show it: black glyphs on
white, one blank column between characters, one blank row between lines,
wrapped after ``wrap_width`` characters.

For ``n`` rendered characters the image measures

.. code-block:: text

    cols   = max(1, min(n, wrap_width))
    lines  = max(1, ceil(n / wrap_width))
    width  = (cols * 6 - 1) * scale
    height = (lines * 8 - 1) * scale

Spaces are drawn as blank cells. Newlines are dropped since the layout
wraps on its own.
"""
import math
import logging
import typing as t

import numpy as np

from ekboard.ocr.font import GlyphFont, CELL_PITCH, LINE_PITCH, GLYPH_HEIGHT, GLYPH_WIDTH
from ekboard.ocr.image import GrayImage, WHITE, BLACK

log = logging.getLogger(__name__)

DEFAULT_WRAP_WIDTH = 64


def layout_size(
    length: int, scale: int = 1, wrap_width: int = DEFAULT_WRAP_WIDTH
) -> t.Tuple[int, int]:
    """Returns ``(width, height)`` of the image for ``length`` characters."""
    if scale < 1 or wrap_width < 1:
        raise ValueError("scale and wrap_width must be positive")

    cols = max(1, min(length, wrap_width))
    lines = max(1, math.ceil(length / wrap_width))
    return (cols * CELL_PITCH - 1) * scale, (lines * LINE_PITCH - 1) * scale


def render_armored(
    text: str,
    font: GlyphFont,
    scale: int = 1,
    wrap_width: int = DEFAULT_WRAP_WIDTH,
) -> GrayImage:
    """
    Draws armored text into a grayscale frame.

    :param text: the armored message (lower case digits are drawn upper case)
    :type text: str
    :param font: the glyph templates
    :type font: GlyphFont
    :param scale: pixels per font cell, defaults to 1
    :type scale: int, optional
    :param wrap_width: characters per line, defaults to 64
    :type wrap_width: int, optional
    :raises ValueError: if ``text`` contains a character the font lacks
    :return: the rendered frame
    :rtype: GrayImage
    """
    cells = text.replace("\n", "").upper()
    width, height = layout_size(len(cells), scale, wrap_width)
    canvas = np.full((height // scale, width // scale), WHITE, dtype=np.uint8)

    for index, char in enumerate(cells):
        if char == " ":
            continue
        if char not in font.chars:
            raise ValueError(f"cannot render {char!r} at index {index}")

        line, col = divmod(index, wrap_width)
        y, x = line * LINE_PITCH, col * CELL_PITCH
        cell = canvas[y : y + GLYPH_HEIGHT, x : x + GLYPH_WIDTH]
        cell[font.glyph(char)] = BLACK

    if scale > 1:
        canvas = np.kron(canvas, np.ones((scale, scale), dtype=np.uint8))
    log.debug("rendered %d characters into %dx%d frame", len(cells), width, height)
    return GrayImage.from_array(canvas)
