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
import sys
import json
import shlex
import logging
import argparse
import typing as t

import numpy as np

from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from ekboard.config import CliConfig, load_config
from ekboard.errors import EKBError, UsageError, NoCiphertextFound
from ekboard.envelope import MediaType, pack_envelope
from ekboard.crypto import SecretKey, generate_key, encrypt, decrypt
from ekboard.armor import armor_envelope, load_envelope
from ekboard.keyring import (
    ContactStore,
    MockTranscriber,
    ValidationReport,
    VerificationResult,
    load_wordlist,
    fingerprint_digest,
    generate_fingerprint,
    validate_recitation,
    verify_fingerprint,
)
from ekboard.ocr import (
    DEFAULT_WRAP_WIDTH,
    FileCaptureSource,
    DecryptingListener,
    CaptureAgent,
    auto_decrypt,
    default_font,
    render_armored,
    save_pgm,
)
from ekboard.css import (
    SCAN_PROFILES,
    ScanDatabase,
    config_from_json,
    default_config,
    load_scan_database,
    save_scan_database,
    report_table,
    rows_to_json,
    run_evaluation,
    scan as scan_payload,
)
from ekboard.analysis import ReorderParams, discrepancy_report

EXIT_OK = 0
EXIT_MISMATCH = 3
EXIT_FLAGGED = 4
EXIT_IO = 5

console = Console()
err_console = Console(stderr=True)
log = logging.getLogger(__name__)


# --- helpers ---
class ArgumentParser(argparse.ArgumentParser):
    """Reports usage errors as :class:`UsageError` instead of exiting."""

    def error(self, message: str) -> t.NoReturn:
        raise UsageError(f"{self.prog}: {message}")


def setup_logging(verbosity: int) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity > 1:
        level = logging.DEBUG

    logger = logging.getLogger("ekboard")
    logger.handlers = [RichHandler(console=err_console, show_path=False)]
    logger.setLevel(level)


def report_error(err: Exception, exit_code: int) -> int:
    line = {"error": type(err).__name__, "message": str(err), "exit": exit_code}
    print(json.dumps(line), file=sys.stderr)
    return exit_code


def read_file(path: str) -> bytes:
    with open(path, "rb") as fp:
        return fp.read()


def write_output(data: bytes, output: t.Optional[str]) -> None:
    if output:
        with open(output, "wb") as fp:
            fp.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def make_rng(config: CliConfig) -> np.random.Generator:
    return np.random.default_rng(config.seed)


def key_rng(config: CliConfig) -> t.Optional[np.random.Generator]:
    # without a seed, keys and IVs come from the OS CSPRNG
    return None if config.seed is None else make_rng(config)


def open_store(config: CliConfig) -> ContactStore:
    return ContactStore.load(config.store_path)


# --- keys and contacts ---
def keygen(config: CliConfig, output: t.Optional[str]) -> int:
    """Prints a new hex key."""
    key = generate_key(key_rng(config))
    write_output(f"{key.to_hex()}\n".encode(), output)
    return EXIT_OK


def fingerprint_gen(config: CliConfig, pubkey: str, fmt: str) -> int:
    public_key = read_file(pubkey)
    if fmt == "hex":
        console.print(fingerprint_digest(public_key).hex().upper())
    else:
        for line in generate_fingerprint(public_key, load_wordlist()).lines():
            console.print(line)
    return EXIT_OK


def print_verification(result: VerificationResult, report: ValidationReport) -> None:
    if result.matched:
        console.print("[green]Match[/]")
    else:
        console.print("[red]Mismatch[/]")
        for diff in result.differences:
            console.print(
                f"  position {diff.position}: expected {diff.expected or '-'}, "
                f"heard {diff.actual or '-'}"
            )
    for finding in report.findings:
        console.print(f"  [dark_orange]{finding}[/]")


def fingerprint_verify(config: CliConfig, pubkey: str, transcript: str) -> int:
    """Compares a transcribed recitation with a public key's fingerprint."""
    wl = load_wordlist()
    spoken = MockTranscriber().transcribe(read_file(transcript))
    result = verify_fingerprint(read_file(pubkey), spoken, wl)
    report = validate_recitation(spoken.words, wl)
    print_verification(result, report)
    return EXIT_OK if result.matched and report.valid else EXIT_MISMATCH


def contact_add(config: CliConfig, name: str, pubkey: str) -> int:
    store = open_store(config)
    store.add_contact(name, read_file(pubkey))
    store.save()
    console.log(f"[green]Added:[/] {name}")
    return EXIT_OK


def contact_verify(
    config: CliConfig, name: str, transcript: str, speaker_attested: bool
) -> int:
    store = open_store(config)
    spoken = MockTranscriber().transcribe(read_file(transcript))
    result, report = store.verify_contact(
        name, spoken, load_wordlist(), speaker_attested
    )
    print_verification(result, report)
    if not (result.matched and report.valid):
        return EXIT_MISMATCH
    store.save()
    return EXIT_OK


def contact_set_key(config: CliConfig, name: str, key: t.Optional[str]) -> int:
    """Assigns a shared key, generating one if none is given."""
    store = open_store(config)
    secret = SecretKey.from_hex(key) if key else generate_key(key_rng(config))
    store.set_shared_key(name, secret)
    store.save()
    if not key:
        sys.stdout.write(f"{secret.to_hex()}\n")
    return EXIT_OK


def contact_list(config: CliConfig) -> int:
    store = open_store(config)
    wl = load_wordlist()
    table = Table(title=f"Contacts ({config.store_path})")
    for column in ("Name", "Verified", "Speaker Attested", "Shared Key", "Fingerprint"):
        table.add_column(column)
    for contact in store.contacts():
        fp = generate_fingerprint(contact.public_key, wl)
        table.add_row(
            contact.name,
            str(contact.fingerprint_verified),
            str(contact.speaker_attested),
            "yes" if contact.shared_key else "no",
            f"{fp.lines()[0]} ...",
        )
    console.print(table)
    return EXIT_OK


# --- messages ---
def encrypt_cmd(
    config: CliConfig,
    to: str,
    media: str,
    input_path: str,
    armor: bool,
    output: t.Optional[str],
) -> int:
    """Encrypts a file for a contact."""
    if not armor and not output:
        raise UsageError("binary envelopes need an output file (-o) or --armor")

    key = open_store(config).get_shared_key(to)
    env = encrypt(read_file(input_path), MediaType.parse(media), key, key_rng(config))
    if armor:
        write_output(f"{armor_envelope(env)}\n".encode("ascii"), output)
    else:
        write_output(pack_envelope(env), output)
    return EXIT_OK


def decrypt_cmd(
    config: CliConfig, sender: str, input_path: str, output: t.Optional[str]
) -> int:
    """Opens a binary or armored envelope from a contact."""
    key = open_store(config).get_shared_key(sender)
    media, plaintext = decrypt(load_envelope(read_file(input_path)), key)
    log.info("decrypted %s (%d bytes)", media.label, len(plaintext))
    write_output(plaintext, output)
    return EXIT_OK


def render(
    config: CliConfig, input_path: str, output: str, scale: int, wrap: int
) -> int:
    """Draws armored text as a PGM frame."""
    text = read_file(input_path).decode("ascii").strip()
    img = render_armored(text, default_font(), scale, wrap)
    save_pgm(img, output)
    console.log(f"[green]Rendered:[/] {output} ({img.width}x{img.height})")
    return EXIT_OK


def ocr_decrypt(
    config: CliConfig,
    sender: str,
    frame: t.Optional[str],
    output: t.Optional[str],
    scale: int,
    watch: bool,
    interval: float,
    timeout: t.Optional[float],
) -> int:
    """Recognizes and decrypts the envelope shown in a captured frame."""
    key = open_store(config).get_shared_key(sender)
    source = FileCaptureSource(frame or config.capture_path)

    if not watch:
        media, plaintext = auto_decrypt(source.latest_frame(), key, default_font(), scale)
    else:
        listener = DecryptingListener(key, default_font(), scale)
        agent = CaptureAgent(source, listener, interval)
        with err_console.status(f"Watching [b]{source.path}[/]..."):
            done = agent.run(timeout)
        if not done:
            if listener.last_error is not None:
                raise listener.last_error
            raise NoCiphertextFound(f"no decryptable frame within {timeout}s")
        media, plaintext = listener.result

    log.info("decrypted %s (%d bytes)", media.label, len(plaintext))
    write_output(plaintext, output)
    return EXIT_OK


# --- scanning and simulation ---
def scan_cmd(config: CliConfig, input_path: str, media: str, profile: str) -> int:
    """Scans one file; exit code 4 when flagged."""
    db = load_scan_database(config.scanner_db_path)
    verdict = scan_payload(db, MediaType.parse(media), read_file(input_path), SCAN_PROFILES[profile])
    console.print(str(verdict))
    return EXIT_FLAGGED if verdict.flagged else EXIT_OK


def scandb_build(config: CliConfig, media: str, inputs: t.List[str], append: bool) -> int:
    kind = MediaType.parse(media)
    db = ScanDatabase.from_plaintexts((kind, read_file(path)) for path in inputs)
    if append:
        try:
            db = load_scan_database(config.scanner_db_path).merge(db)
        except EKBError:
            log.debug("no scan database to append to")
    save_scan_database(db, config.scanner_db_path)
    console.log(f"[green]Saved:[/] {config.scanner_db_path} ({len(db)} rules)")
    return EXIT_OK


def simulate(config: CliConfig, eval_config: t.Optional[str], as_json: bool) -> int:
    """Runs the evaluation matrix through the simulated channels."""
    if eval_config:
        settings = config_from_json(read_file(eval_config).decode("utf-8"))
    else:
        settings = default_config()

    with err_console.status("Running evaluation..."):
        rows = run_evaluation(settings, make_rng(config))

    if as_json:
        sys.stdout.write(rows_to_json(rows) + "\n")
    else:
        console.print(report_table(rows))
    return EXIT_OK


def analyze_reorder(
    config: CliConfig,
    dict_size: int,
    words: int,
    keys: int,
    trials: int,
    as_json: bool,
) -> int:
    """Prints the discrepancy report of the reordering attack."""
    params = ReorderParams(dict_size, words, keys)
    with err_console.status("Evaluating probabilities..."):
        report = discrepancy_report(params, trials, config.seed)

    if as_json:
        sys.stdout.write(json.dumps(report.to_dict(), indent=2) + "\n")
        return EXIT_OK

    table = Table(title=f"Reordering attack (d={dict_size}, w={words}, K={keys})")
    for column in ("Quantity", "Value", "Compared With", "Rel. Difference", "Std. Error", "Within 3σ"):
        table.add_column(column)
    for entry in report.entries:
        table.add_row(
            entry.name,
            f"{entry.value:.6e}",
            entry.reference or "-",
            "-" if entry.relative_difference is None else f"{entry.relative_difference:+.3e}",
            "-" if entry.std_error is None else f"{entry.std_error:.3e}",
            "-" if entry.within_3_sigma is None else str(entry.within_3_sigma),
        )
    console.print(table)
    return EXIT_OK


# --- parser ---
def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="ekboard")
    parser.add_argument("--store", dest="store_path", help="The contact store file")
    parser.add_argument("--capture", dest="capture_path", help="The frame file to poll")
    parser.add_argument("--scanner-db", dest="scanner_db_path", help="The scan database file")
    parser.add_argument("--seed", type=int, help="Seed for reproducible randomness")
    parser.add_argument("--settings", help="A 'key = value' settings file")
    parser.add_argument(
        "-v", dest="verbose", action="count", default=0, help="More log output (-vv for debug)"
    )
    parsers = parser.add_subparsers()

    keygen_parser = parsers.add_parser("keygen", help="Prints a new shared key")
    keygen_parser.add_argument("-o", dest="output", help="Write the key to a file")
    keygen_parser.set_defaults(func=keygen)

    # fingerprint gen|verify
    fp_parser = parsers.add_parser("fingerprint", help="Vocal fingerprints")
    fp_parsers = fp_parser.add_subparsers()
    gen_parser = fp_parsers.add_parser("gen", help="Prints the 32-word fingerprint")
    gen_parser.add_argument("pubkey", help="The public key file")
    gen_parser.add_argument("--format", dest="fmt", choices=("words", "hex"), default="words")
    gen_parser.set_defaults(func=fingerprint_gen)

    verify_parser = fp_parsers.add_parser("verify", help="Checks a transcribed recitation")
    verify_parser.add_argument("pubkey", help="The public key file")
    verify_parser.add_argument("transcript", help="The transcript (one word manifest)")
    verify_parser.set_defaults(func=fingerprint_verify)

    # contact add|verify|set-key|list
    contact_parser = parsers.add_parser("contact", help="Manages the contact store")
    contact_parsers = contact_parser.add_subparsers()
    add_parser = contact_parsers.add_parser("add", help="Adds a contact")
    add_parser.add_argument("name")
    add_parser.add_argument("pubkey", help="The contact's public key file")
    add_parser.set_defaults(func=contact_add)

    cverify_parser = contact_parsers.add_parser("verify", help="Verifies a contact's fingerprint")
    cverify_parser.add_argument("name")
    cverify_parser.add_argument("transcript", help="The transcribed recitation")
    cverify_parser.add_argument(
        "--speaker-attested",
        action="store_true",
        help="The voice was recognized as the contact's",
    )
    cverify_parser.set_defaults(func=contact_verify)

    setkey_parser = contact_parsers.add_parser("set-key", help="Assigns the shared key")
    setkey_parser.add_argument("name")
    setkey_parser.add_argument("key", nargs="?", help="Hex key, generated if omitted")
    setkey_parser.set_defaults(func=contact_set_key)

    list_parser = contact_parsers.add_parser("list", help="Lists all contacts")
    list_parser.set_defaults(func=contact_list)

    # messages
    encrypt_parser = parsers.add_parser("encrypt", help="Encrypts a file for a contact")
    encrypt_parser.add_argument("input_path", metavar="input", help="The plaintext file")
    encrypt_parser.add_argument("--to", required=True, help="The receiving contact")
    encrypt_parser.add_argument("--type", dest="media", default="text", help="The media type")
    encrypt_parser.add_argument("--armor", action="store_true", help="Write armored hex text")
    encrypt_parser.add_argument("-o", dest="output", help="The output file")
    encrypt_parser.set_defaults(func=encrypt_cmd)

    decrypt_parser = parsers.add_parser("decrypt", help="Opens an envelope from a contact")
    decrypt_parser.add_argument("input_path", metavar="input", help="Binary or armored envelope")
    decrypt_parser.add_argument("--from", dest="sender", required=True, help="The sending contact")
    decrypt_parser.add_argument("-o", dest="output", help="The plaintext file")
    decrypt_parser.set_defaults(func=decrypt_cmd)

    render_parser = parsers.add_parser("render", help="Renders armored text as a PGM frame")
    render_parser.add_argument("input_path", metavar="input", help="The armored text file")
    render_parser.add_argument("-o", dest="output", required=True, help="The PGM file")
    render_parser.add_argument("--scale", type=int, default=1)
    render_parser.add_argument("--wrap", type=int, default=DEFAULT_WRAP_WIDTH)
    render_parser.set_defaults(func=render)

    ocr_parser = parsers.add_parser("ocr-decrypt", help="Decrypts the envelope in a frame")
    ocr_parser.add_argument("frame", nargs="?", help="The PGM frame, defaults to --capture")
    ocr_parser.add_argument("--from", dest="sender", required=True, help="The sending contact")
    ocr_parser.add_argument("-o", dest="output", help="The plaintext file")
    ocr_parser.add_argument("--scale", type=int, default=1)
    ocr_parser.add_argument("--watch", action="store_true", help="Poll the frame file")
    ocr_parser.add_argument("--interval", type=float, default=1.0)
    ocr_parser.add_argument("--timeout", type=float, default=None)
    ocr_parser.set_defaults(func=ocr_decrypt)

    # scanning and simulation
    scan_parser = parsers.add_parser("scan", help="Scans a file against the scan database")
    scan_parser.add_argument("input_path", metavar="input")
    scan_parser.add_argument("--type", dest="media", default="text", help="The media type")
    scan_parser.add_argument("--profile", choices=sorted(SCAN_PROFILES), default="full")
    scan_parser.set_defaults(func=scan_cmd)

    scandb_parser = parsers.add_parser("scandb", help="Scan database maintenance")
    scandb_parsers = scandb_parser.add_subparsers()
    build_parser_ = scandb_parsers.add_parser("build", help="Derives rules from files")
    build_parser_.add_argument("inputs", nargs="+")
    build_parser_.add_argument("--type", dest="media", default="text", help="Media type of all inputs")
    build_parser_.add_argument("--append", action="store_true", help="Merge with the existing database")
    build_parser_.set_defaults(func=scandb_build)

    sim_parser = parsers.add_parser("simulate", help="Runs the messaging evaluation")
    sim_parser.add_argument("--config", dest="eval_config", help="Evaluation config (JSON)")
    sim_parser.add_argument("--json", dest="as_json", action="store_true")
    sim_parser.set_defaults(func=simulate)

    analyze_parser = parsers.add_parser("analyze", help="Attack analysis")
    analyze_parsers = analyze_parser.add_subparsers()
    reorder_parser = analyze_parsers.add_parser("reorder", help="Reordering attack probabilities")
    reorder_parser.add_argument("--dict", dest="dict_size", type=int, default=256)
    reorder_parser.add_argument("--words", type=int, default=16)
    reorder_parser.add_argument("--keys", type=int, default=16)
    reorder_parser.add_argument("--trials", type=int, default=100_000)
    reorder_parser.add_argument("--json", dest="as_json", action="store_true")
    reorder_parser.set_defaults(func=analyze_reorder)
    return parser


def main(cmd: t.Optional[str] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(shlex.split(cmd) if cmd is not None else None).__dict__
        setup_logging(args.pop("verbose"))
        config = load_config(
            args.pop("settings"),
            {name: args.pop(name) for name in ("store_path", "capture_path", "scanner_db_path", "seed")},
        )
        func = args.pop("func", None)
        if func is None:
            raise UsageError("no command given, see --help")
        return func(config, **args)
    except EKBError as err:
        return report_error(err, err.exit_code)
    except OSError as err:
        return report_error(err, EXIT_IO)
    except ValueError as err:
        return report_error(err, UsageError.exit_code)


if __name__ == "__main__":
    sys.exit(main())
