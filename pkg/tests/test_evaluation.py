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
import json

import numpy as np
import pytest

from ekboard.envelope import MediaType
from ekboard.errors import ConfigInvalid
from ekboard.css import (
    Endpoint,
    EvalCase,
    Status,
    config_from_json,
    config_to_json,
    default_config,
    report_table,
    rows_to_json,
    run_evaluation,
)
from ekboard.css.evaluation import generate_payloads


def test_default_schedule_shape():
    config = default_config()
    assert len(config.schedule) == 15
    assert [case.media for case in config.schedule[::3]] == list(MediaType)
    assert len(set(config.agents)) == 3
    assert len(config.channels) == 6


def test_default_evaluation():
    rows = run_evaluation(default_config(), np.random.default_rng(7))
    assert [row.message_no for row in rows] == list(range(1, 16))
    for row in rows:
        assert row.encryption_status == Status.SUCCESSFUL
        assert row.decryption_status == Status.SUCCESSFUL
        assert row.blocked_at is None
        if row.media == MediaType.TEXT:
            assert row.ocr_accuracy == 1.0
        else:
            assert row.ocr_accuracy is None

    table = report_table(rows)
    assert table.row_count == 15
    doc = json.loads(rows_to_json(rows))
    assert doc[0]["media"] == "Text"
    assert doc[0]["ocr_accuracy"] == 1.0
    assert doc[3]["decryption_status"] == "Successful"


def test_evaluation_deterministic():
    a = run_evaluation(default_config(), np.random.default_rng(11))
    b = run_evaluation(default_config(), np.random.default_rng(11))
    assert a == b


def test_plaintext_is_blocked():
    config = default_config()
    config.encrypt = False
    rows = run_evaluation(config, np.random.default_rng(3))
    assert all(row.blocked_at == Endpoint.SENDER for row in rows)
    assert all(row.encryption_status == Status.FAILED for row in rows)
    assert all(row.decryption_status == Status.FAILED for row in rows)


def test_empty_schedule():
    config = default_config()
    config.schedule = []
    assert run_evaluation(config, np.random.default_rng(0)) == []


def test_payloads(rng):
    config = default_config()
    payloads = generate_payloads(config, rng)
    assert payloads[0] == config.text_messages[0].encode()
    assert payloads[3].startswith(b"P5")
    assert len(payloads[6]) == config.payload_sizes[MediaType.AUDIO]
    assert len(payloads[12]) == config.payload_sizes[MediaType.VIDEO]


def test_config_json():
    config = default_config()
    assert config_from_json(config_to_json(config)) == config

    partial = config_from_json(
        {"schedule": [{"media": "voice-memo", "sender": "Google Pixel",
                       "channel": "LINE", "receiver": "Samsung Android 4"}]}
    )
    assert partial.schedule == [
        EvalCase(MediaType.VOICE_MEMO, "Google Pixel", "LINE", "Samsung Android 4")
    ]
    assert partial.agents == default_config().agents


@pytest.mark.parametrize(
    "doc",
    [
        "[]",
        '{"agents": ["only-one"]}',
        '{"channels": {"Signal": "paranoid"}}',
        '{"schedule": [{"media": "text", "sender": "nobody", "channel": "LINE", "receiver": "Google Pixel"}]}',
        '{"schedule": [{"media": "smell"}]}',
        '{"image_size": [4, 4]}',
        "not json",
    ],
)
def test_config_invalid(doc):
    with pytest.raises(ConfigInvalid):
        config_from_json(doc)
