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
from ekboard.ocr.image import (
    GrayImage,
    read_pgm,
    write_pgm,
    load_pgm,
    save_pgm,
    flip_pixels,
)
from ekboard.ocr.font import GlyphFont, default_font
from ekboard.ocr.render import render_armored, layout_size, DEFAULT_WRAP_WIDTH
from ekboard.ocr.recognize import (
    Recognition,
    Recognizer,
    TemplateRecognizer,
    recognize_hex,
)
from ekboard.ocr.pipeline import auto_decrypt, decrypt_text, ocr_accuracy, levenshtein
from ekboard.ocr.capture import (
    CaptureSource,
    FileCaptureSource,
    FrameListener,
    DecryptingListener,
    CaptureAgent,
    latest_frame,
)
