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

import pytest

from ekboard.cmd import EXIT_FLAGGED, EXIT_MISMATCH, EXIT_OK, main
from ekboard.config import CliConfig, load_config, parse_settings
from ekboard.errors import UsageError
from ekboard.keyring import ContactStore, generate_fingerprint, load_wordlist

PUBLIC_KEY = bytes(range(64))


@pytest.fixture
def workspace(tmp_path):
    (tmp_path / "alice.pub").write_bytes(PUBLIC_KEY)
    fp = generate_fingerprint(PUBLIC_KEY, load_wordlist())
    (tmp_path / "alice.txt").write_text(str(fp))
    (tmp_path / "message.txt").write_bytes(b"meet me at the harbour tonight")
    return tmp_path


def run(workspace, cmd: str) -> int:
    return main(f"--store {workspace / 'contacts.json'} {cmd}")


def error_line(capsys) -> dict:
    lines = capsys.readouterr().err.strip().splitlines()
    return json.loads(lines[-1])


@pytest.fixture
def alice(workspace, capsys):
    assert run(workspace, f"contact add alice {workspace / 'alice.pub'}") == EXIT_OK
    assert run(workspace, f"contact verify alice {workspace / 'alice.txt'}") == EXIT_OK
    assert run(workspace, "--seed 7 contact set-key alice") == EXIT_OK
    capsys.readouterr()
    return workspace


def test_keygen_seeded(capsys):
    assert main("--seed 1 keygen") == EXIT_OK
    first = capsys.readouterr().out.strip()
    assert main("--seed 1 keygen") == EXIT_OK
    assert capsys.readouterr().out.strip() == first
    assert len(first) == 32 and first == first.lower()


def test_fingerprint_commands(workspace, capsys):
    assert main(f"fingerprint gen {workspace / 'alice.pub'}") == EXIT_OK
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 8
    assert " ".join(lines) == (workspace / "alice.txt").read_text()

    assert main(f"fingerprint gen --format hex {workspace / 'alice.pub'}") == EXIT_OK
    digest = capsys.readouterr().out.strip()
    assert len(digest) == 64 and digest == digest.upper()

    pub, transcript = workspace / "alice.pub", workspace / "alice.txt"
    assert main(f"fingerprint verify {pub} {transcript}") == EXIT_OK
    assert "Match" in capsys.readouterr().out

    words = transcript.read_text().split()
    words[3], words[5] = words[5], words[3]
    transcript.write_text(" ".join(words))
    assert main(f"fingerprint verify {pub} {transcript}") == EXIT_MISMATCH
    assert "Mismatch" in capsys.readouterr().out


def test_contact_workflow(alice):
    store = ContactStore.load(str(alice / "contacts.json"))
    contact = store.get("alice")
    assert contact.fingerprint_verified
    assert contact.shared_key is not None


def test_contact_add_empty_key(workspace, capsys):
    (workspace / "empty.pub").write_bytes(b"")
    assert run(workspace, f"contact add mallory {workspace / 'empty.pub'}") == 1
    assert error_line(capsys)["error"] == "ValueError"
    assert run(workspace, "contact list") == EXIT_OK


def test_set_key_requires_verification(workspace, capsys):
    assert run(workspace, f"contact add bob {workspace / 'alice.pub'}") == EXIT_OK
    capsys.readouterr()
    assert run(workspace, "contact set-key bob") == EXIT_MISMATCH
    line = error_line(capsys)
    assert line["error"] == "UnverifiedContact"
    assert line["exit"] == EXIT_MISMATCH


def test_contact_verify_mismatch(workspace, capsys):
    assert run(workspace, f"contact add bob {workspace / 'alice.pub'}") == EXIT_OK
    (workspace / "wrong.txt").write_text("aardvark " * 32)
    assert run(workspace, f"contact verify bob {workspace / 'wrong.txt'}") == EXIT_MISMATCH
    store = ContactStore.load(str(workspace / "contacts.json"))
    assert not store.get("bob").fingerprint_verified


def test_encrypt_decrypt_binary(alice):
    message, envelope, plain = alice / "message.txt", alice / "msg.ekb", alice / "out.txt"
    assert run(alice, f"encrypt --to alice {message} -o {envelope}") == EXIT_OK
    assert envelope.read_bytes()[:4] == b"EKB1"
    assert run(alice, f"decrypt --from alice {envelope} -o {plain}") == EXIT_OK
    assert plain.read_bytes() == message.read_bytes()


def test_encrypt_decrypt_armored(alice):
    message, envelope, plain = alice / "message.txt", alice / "msg.hex", alice / "out.txt"
    assert run(alice, f"encrypt --to alice --armor {message} -o {envelope}") == EXIT_OK
    text = envelope.read_text().strip()
    assert text.startswith("454B4231")
    assert run(alice, f"decrypt --from alice {envelope} -o {plain}") == EXIT_OK
    assert plain.read_bytes() == message.read_bytes()


def test_binary_encrypt_needs_output(alice, capsys):
    assert run(alice, f"encrypt --to alice {alice / 'message.txt'}") == 1
    assert error_line(capsys)["error"] == "UsageError"


def test_render_and_ocr_decrypt(alice):
    message, armored = alice / "message.txt", alice / "msg.hex"
    frame, plain = alice / "frame.pgm", alice / "out.txt"
    assert run(alice, f"encrypt --to alice --armor {message} -o {armored}") == EXIT_OK
    assert run(alice, f"render {armored} -o {frame} --scale 2") == EXIT_OK
    assert frame.read_bytes().startswith(b"P5")
    assert run(alice, f"ocr-decrypt {frame} --from alice --scale 2 -o {plain}") == EXIT_OK
    assert plain.read_bytes() == message.read_bytes()

    assert run(alice, f"--capture {frame} ocr-decrypt --from alice --scale 2 --watch "
                      f"--interval 0.05 --timeout 5 -o {plain}") == EXIT_OK
    assert plain.read_bytes() == message.read_bytes()


def test_ocr_decrypt_missing_frame(alice, capsys):
    missing = alice / "missing.pgm"
    assert run(alice, f"ocr-decrypt {missing} --from alice") == 5
    assert error_line(capsys)["error"] == "FrameUnavailable"


def test_unknown_contact(workspace, capsys):
    assert run(workspace, f"decrypt --from nobody {workspace / 'message.txt'}") == 1
    assert error_line(capsys)["error"] == "UnknownContact"


def test_scan_commands(alice, capsys):
    db, message = alice / "scan.db", alice / "message.txt"
    assert main(f"--scanner-db {db} scandb build {message}") == EXIT_OK
    assert db.exists()

    assert main(f"--scanner-db {db} scan {message}") == EXIT_FLAGGED
    assert "flagged" in capsys.readouterr().out

    armored = alice / "msg.hex"
    assert run(alice, f"encrypt --to alice --armor {message} -o {armored}") == EXIT_OK
    capsys.readouterr()
    assert main(f"--scanner-db {db} scan {armored}") == EXIT_OK
    assert "clean" in capsys.readouterr().out


def test_simulate_json(capsys):
    assert main("--seed 3 simulate --json") == EXIT_OK
    rows = json.loads(capsys.readouterr().out)
    assert len(rows) == 15
    assert all(row["decryption_status"] == "Successful" for row in rows)
    assert all(row["blocked_at"] is None for row in rows)


def test_analyze_reorder_json(capsys):
    cmd = "--seed 11 analyze reorder --dict 4 --words 2 --keys 2 --trials 1000000 --json"
    assert main(cmd) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["params"] == {"dict_size": 4, "words_per_fp": 2, "num_keys": 2}
    entries = {entry["name"]: entry for entry in report["entries"]}
    assert entries["p1_exact_event"]["value"] == 0.0087890625
    assert entries["mc_collect_all"]["within_3_sigma"]
    assert entries["mc_reorder_match"]["within_3_sigma"]


def test_analyze_reorder_table(capsys):
    assert main("analyze reorder --trials 0") == EXIT_OK
    assert capsys.readouterr().out.strip()


@pytest.mark.parametrize(
    "cmd",
    [
        "",
        "no-such-command",
        "encrypt",
        "analyze reorder --dict 2 --words 3 --trials 0",
        "--seed -4 keygen",
    ],
)
def test_usage_errors(cmd, capsys):
    assert main(cmd) == 1
    assert error_line(capsys)["exit"] == 1


def test_settings_file(tmp_path, capsys):
    settings = tmp_path / "ekboard.conf"
    settings.write_text("# test settings\nseed = 5\nstore_path = ~/contacts.json\n")
    config = load_config(str(settings))
    assert config.seed == 5
    assert not config.store_path.startswith("~")

    config = load_config(str(settings), {"seed": 6, "capture_path": None})
    assert config.seed == 6
    assert config.capture_path == CliConfig().capture_path

    settings.write_text("colour = blue\n")
    assert main(f"--settings {settings} keygen") == 1
    assert "unknown key" in error_line(capsys)["message"]


def test_parse_settings():
    assert parse_settings("\n# only comments\n") == {}
    assert parse_settings("seed=1  # inline\n") == {"seed": "1"}
    with pytest.raises(UsageError):
        parse_settings("seed\n")
    with pytest.raises(UsageError):
        parse_settings("= 3\n")
