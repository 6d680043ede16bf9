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
Grayscale frames and binary PGM (P5) files.

Frames are immutable; :meth:`GrayImage.as_array` gives a read-only
``(height, width)`` view for numpy based processing.
"""
import io
import logging
import dataclasses as dc
import typing as t

import numpy as np

from PIL import Image, UnidentifiedImageError

from ekboard.errors import MalformedImage

log = logging.getLogger(__name__)

WHITE = 255
BLACK = 0

#: luminance below this value counts as ink
INK_THRESHOLD = 128


@dc.dataclass(frozen=True, slots=True)
class GrayImage:
    """An 8-bit grayscale image, 0 is black and 255 is white."""

    width: int
    height: int
    pixels: bytes
    """Row-major luminance values"""

    def __post_init__(self) -> None:
        if self.width < 0 or self.height < 0:
            raise ValueError("image dimensions must not be negative")
        if len(self.pixels) != self.width * self.height:
            raise ValueError(
                f"expected {self.width * self.height} pixels, got {len(self.pixels)}"
            )

    def as_array(self) -> np.ndarray:
        return np.frombuffer(self.pixels, dtype=np.uint8).reshape(
            self.height, self.width
        )

    @classmethod
    def from_array(cls, array: np.ndarray) -> "GrayImage":
        array = np.asarray(array)
        if array.ndim != 2:
            raise ValueError(f"expected a 2D array, got shape {array.shape}")
        height, width = array.shape
        return cls(width, height, np.ascontiguousarray(array, dtype=np.uint8).tobytes())

    @classmethod
    def blank(cls, width: int, height: int, value: int = WHITE) -> "GrayImage":
        return cls(width, height, bytes([value]) * (width * height))


def read_pgm(data: bytes) -> GrayImage:
    """
    Decodes a binary PGM with maxval 255.

    :raises MalformedImage: for anything else, including plain (P2) PGMs
    """
    data = bytes(data)
    if not data.startswith(b"P5"):
        raise MalformedImage("not a binary PGM (missing P5 magic)")
    try:
        with Image.open(io.BytesIO(data)) as img:
            img.load()
            if img.mode != "L":
                raise MalformedImage(f"unsupported PGM mode {img.mode!r} (maxval must be 255)")
            array = np.asarray(img, dtype=np.uint8)
    except (UnidentifiedImageError, OSError, ValueError, SyntaxError) as err:
        raise MalformedImage(f"invalid PGM: {err}") from err
    return GrayImage.from_array(array)


def write_pgm(img: GrayImage) -> bytes:
    """Encodes a frame as binary PGM."""
    buffer = io.BytesIO()
    Image.fromarray(img.as_array()).save(buffer, format="PPM")
    return buffer.getvalue()


def load_pgm(path: str) -> GrayImage:
    with open(path, "rb") as fp:
        return read_pgm(fp.read())


def save_pgm(img: GrayImage, path: str) -> None:
    with open(path, "wb") as fp:
        fp.write(write_pgm(img))


def flip_pixels(
    img: GrayImage, p: float, rng: t.Optional[np.random.Generator] = None
) -> GrayImage:
    """
    Inverts every pixel independently with probability ``p``.

    :param img: the frame
    :type img: GrayImage
    :param p: flip probability in ``[0, 1]``
    :type p: float
    :param rng: the random source, defaults to an unseeded generator
    :type rng: t.Optional[np.random.Generator], optional
    :return: the noisy frame
    :rtype: GrayImage
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"flip probability must be in [0, 1], got {p}")

    rng = rng or np.random.default_rng()
    array = img.as_array()
    mask = rng.random(array.shape) < p
    noisy = np.where(mask, WHITE - array, array).astype(np.uint8)
    return GrayImage.from_array(noisy)
