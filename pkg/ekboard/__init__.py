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

ENVELOPE_MAGIC = b"EKB1"
"""
Leading four bytes of every binary message envelope.
"""

KEY_SIZE = 16
"""
Size of the shared secret key in bytes (AES-128).
"""

BLOCK_SIZE = 16
"""
AES block size in bytes. The envelope IV has the same length.
"""

HEADER_SIZE = len(ENVELOPE_MAGIC) + 1 + BLOCK_SIZE
"""
Size of the envelope header (magic, media tag and IV) in bytes.
"""

HEX_ALPHABET = "0123456789ABCDEF"
"""
The OCR whitelist: every armored message is written with these symbols only.
"""

MIN_ENVELOPE_HEX = 2 * (HEADER_SIZE)
"""
Shortest hex run that could possibly hold an envelope (21 bytes).
"""

__author__ = "MatrixEditor"
__version__ = "0.1-beta"
