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
Settings of the command line interface.

Values come from three places, later ones winning: built-in defaults, an
optional settings file and the global command line flags. The settings file
is line based::

    # ekboard settings
    store_path = ~/.ekboard/contacts.json
    seed = 42
"""
import os
import logging
import dataclasses as dc
import typing as t

from ekboard.errors import UsageError

log = logging.getLogger(__name__)

DEFAULT_STORE_PATH = "contacts.json"
DEFAULT_CAPTURE_PATH = "capture.pgm"
DEFAULT_SCANNER_DB_PATH = "scan.db"


@dc.dataclass(slots=True)
class CliConfig:
    store_path: str = DEFAULT_STORE_PATH
    """The contact store file"""

    capture_path: str = DEFAULT_CAPTURE_PATH
    """Frame file polled by ``ocr-decrypt``"""

    scanner_db_path: str = DEFAULT_SCANNER_DB_PATH
    """Scan database used by ``scan``"""

    seed: t.Optional[int] = None
    """Seed for all randomized commands, None means OS entropy"""


SETTING_KEYS = frozenset(field.name for field in dc.fields(CliConfig))


def parse_settings(text: str) -> t.Dict[str, str]:
    """
    Parses ``key = value`` lines. Blank lines and ``#`` comments are skipped.

    :raises UsageError: for lines without ``=`` and unknown keys
    """
    settings = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue

        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or not key:
            raise UsageError(f"settings line {number}: expected 'key = value'")
        if key not in SETTING_KEYS:
            raise UsageError(f"settings line {number}: unknown key {key!r}")
        settings[key] = value.strip()
    return settings


def _parse_seed(value: t.Any) -> t.Optional[int]:
    if value is None or value == "":
        return None
    try:
        seed = int(value)
    except (TypeError, ValueError) as err:
        raise UsageError(f"seed must be an integer, got {value!r}") from err
    if seed < 0:
        raise UsageError(f"seed must not be negative, got {seed}")
    return seed


def load_config(
    settings_path: t.Optional[str] = None,
    overrides: t.Optional[t.Mapping[str, t.Any]] = None,
) -> CliConfig:
    """
    Builds the effective configuration.

    :param settings_path: optional settings file
    :type settings_path: t.Optional[str]
    :param overrides: values from command line flags, None entries are ignored
    :type overrides: t.Optional[t.Mapping[str, t.Any]]
    :raises UsageError: for unreadable or invalid settings
    :return: the configuration
    :rtype: CliConfig
    """
    values: t.Dict[str, t.Any] = {}
    if settings_path:
        try:
            with open(settings_path, "r", encoding="utf-8") as fp:
                values.update(parse_settings(fp.read()))
        except OSError as err:
            raise UsageError(f"could not read settings {settings_path!r}: {err}") from err
        log.debug("loaded settings from %s", settings_path)

    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    unknown = set(values) - SETTING_KEYS
    if unknown:
        raise UsageError(f"unknown setting(s): {', '.join(sorted(unknown))}")

    config = CliConfig()
    for key in ("store_path", "capture_path", "scanner_db_path"):
        if key in values:
            setattr(config, key, os.path.expanduser(str(values[key])))
    config.seed = _parse_seed(values.get("seed"))
    return config
