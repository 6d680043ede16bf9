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
The 5x7 bitmap font used for rendering and recognizing armored text.

Only the OCR whitelist ``0-9`` and ``A-F`` is covered. The glyphs differ
pairwise in at least three cells (``B`` and ``8`` are the closest pair), so
a single flipped cell never changes the nearest template.
"""
import dataclasses as dc
import functools
import itertools
import typing as t

import numpy as np

from ekboard import HEX_ALPHABET

GLYPH_WIDTH = 5
GLYPH_HEIGHT = 7
GLYPH_CELLS = GLYPH_WIDTH * GLYPH_HEIGHT

#: horizontal distance between two glyph origins (one blank column)
CELL_PITCH = GLYPH_WIDTH + 1
#: vertical distance between two text lines (one blank row)
LINE_PITCH = GLYPH_HEIGHT + 1

# fmt: off
_GLYPHS = {
    "0": (".###.", "#...#", "#..##", "#.#.#", "##..#", "#...#", ".###."),
    "1": ("..#..", ".##..", "..#..", "..#..", "..#..", "..#..", ".###."),
    "2": (".###.", "#...#", "....#", "...#.", "..#..", ".#...", "#####"),
    "3": ("#####", "...#.", "..#..", "...#.", "....#", "#...#", ".###."),
    "4": ("...#.", "..##.", ".#.#.", "#..#.", "#####", "...#.", "...#."),
    "5": ("#####", "#....", "####.", "....#", "....#", "#...#", ".###."),
    "6": ("..##.", ".#...", "#....", "####.", "#...#", "#...#", ".###."),
    "7": ("#####", "....#", "...#.", "..#..", ".#...", ".#...", ".#..."),
    "8": (".###.", "#...#", "#...#", ".###.", "#...#", "#...#", ".###."),
    "9": (".###.", "#...#", "#...#", ".####", "....#", "...#.", ".##.."),
    "A": (".###.", "#...#", "#...#", "#####", "#...#", "#...#", "#...#"),
    "B": ("####.", "#...#", "#...#", "####.", "#...#", "#...#", "####."),
    "C": (".###.", "#...#", "#....", "#....", "#....", "#...#", ".###."),
    "D": ("###..", "#..#.", "#...#", "#...#", "#...#", "#..#.", "###.."),
    "E": ("#####", "#....", "#....", "####.", "#....", "#....", "#####"),
    "F": ("#####", "#....", "#....", "####.", "#....", "#....", "#...."),
}
# fmt: on


@dc.dataclass(frozen=True)
class GlyphFont:
    """Binary templates, one ``(7, 5)`` boolean array per character.

    ``True`` marks ink. :attr:`templates` is stacked in the order of
    :attr:`chars`, which is also the tie-break order of the recognizer.
    """

    chars: str
    templates: np.ndarray

    def __post_init__(self) -> None:
        shape = (len(self.chars), GLYPH_HEIGHT, GLYPH_WIDTH)
        if self.templates.shape != shape:
            raise ValueError(f"templates must have shape {shape}, got {self.templates.shape}")
        if len(set(self.chars)) != len(self.chars):
            raise ValueError("duplicate characters in font")
        if self.min_distance() == 0:
            raise ValueError("font templates are not pairwise distinct")

    def glyph(self, char: str) -> np.ndarray:
        return self.templates[self.chars.index(char)]

    def min_distance(self) -> int:
        """Smallest Hamming distance between any two templates."""
        return min(
            int(np.count_nonzero(a != b))
            for a, b in itertools.combinations(self.templates, 2)
        )

    @classmethod
    def from_rows(cls, rows: t.Mapping[str, t.Sequence[str]]) -> "GlyphFont":
        """Builds a font from ``#``/``.`` row strings."""
        chars = "".join(rows)
        templates = np.array(
            [[[cell == "#" for cell in row] for row in rows[c]] for c in chars],
            dtype=bool,
        )
        return cls(chars, templates)


@functools.lru_cache(maxsize=1)
def default_font() -> GlyphFont:
    """The built-in whitelist font."""
    font = GlyphFont.from_rows(_GLYPHS)
    assert font.chars == HEX_ALPHABET
    return font
