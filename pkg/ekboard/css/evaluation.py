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
Evaluation matrix: every scheduled message is encrypted, sent through a
scanning channel and decrypted at the receiver. Text travels as armored text
and is read back through the OCR pipeline; all other media travel as binary
envelopes.

The default configuration reproduces the fifteen cases of the original
experiment: three devices, six messaging apps and three messages of each
media type.
"""
import enum
import json
import logging
import dataclasses as dc
import typing as t

import numpy as np

from rich.table import Table

from ekboard.armor import armor_envelope
from ekboard.crypto import SecretKey, decrypt, encrypt, generate_key
from ekboard.envelope import MediaType, pack_envelope, parse_envelope
from ekboard.errors import ConfigInvalid, EKBError, BadMediaType
from ekboard.css.scanner import SCAN_PROFILES, ScanDatabase, ScanVerdict
from ekboard.css.channel import APP_PROFILES, Agent, Channel, DeliveryReport, Endpoint
from ekboard.ocr.font import GlyphFont, default_font
from ekboard.ocr.image import GrayImage, write_pgm
from ekboard.ocr.render import DEFAULT_WRAP_WIDTH, render_armored
from ekboard.ocr.recognize import TemplateRecognizer
from ekboard.ocr.pipeline import decrypt_text, ocr_accuracy

log = logging.getLogger(__name__)


class Status(enum.Enum):
    SUCCESSFUL = "Successful"
    FAILED = "Failed"

    @classmethod
    def of(cls, ok: bool) -> "Status":
        return cls.SUCCESSFUL if ok else cls.FAILED


@dc.dataclass(frozen=True, slots=True)
class EvalCase:
    media: MediaType
    sender: str
    channel: str
    receiver: str


@dc.dataclass(slots=True)
class EvalConfig:
    agents: t.List[str]
    channels: t.Dict[str, str]
    """Channel name to scanner profile"""

    schedule: t.List[EvalCase]
    encrypt: bool = True
    seed_database: bool = True
    """Derive scan rules from the generated plaintexts"""

    text_messages: t.List[str] = dc.field(default_factory=list)
    payload_sizes: t.Dict[MediaType, int] = dc.field(default_factory=dict)
    image_size: t.Tuple[int, int] = (64, 48)
    scale: int = 1
    wrap_width: int = DEFAULT_WRAP_WIDTH

    def validate(self) -> None:
        """:raises ConfigInvalid: if the configuration is inconsistent"""
        if len(set(self.agents)) < 2:
            raise ConfigInvalid("at least two agents are required")
        if not self.channels:
            raise ConfigInvalid("at least one channel is required")
        for name, profile in self.channels.items():
            if profile not in SCAN_PROFILES:
                raise ConfigInvalid(f"channel {name!r}: unknown profile {profile!r}")
        for number, case in enumerate(self.schedule, start=1):
            for agent in (case.sender, case.receiver):
                if agent not in self.agents:
                    raise ConfigInvalid(f"case {number}: unknown agent {agent!r}")
            if case.channel not in self.channels:
                raise ConfigInvalid(f"case {number}: unknown channel {case.channel!r}")
            if case.media == MediaType.TEXT and not self.text_messages:
                raise ConfigInvalid("text cases need at least one text message")
        if any(size < 1 for size in self.payload_sizes.values()):
            raise ConfigInvalid("payload sizes must be positive")
        width, height = self.image_size
        if width < 9 or height < 8:
            raise ConfigInvalid("images must be at least 9x8 pixels")
        if self.scale < 1 or self.wrap_width < 1:
            raise ConfigInvalid("scale and wrap_width must be positive")


_SAMSUNG_4, _SAMSUNG_5, _PIXEL = "Samsung Android 4", "Samsung Android 5", "Google Pixel"

_DEFAULT_SCHEDULE = [
    (MediaType.TEXT, _SAMSUNG_4, "Signal", _SAMSUNG_5),
    (MediaType.TEXT, _PIXEL, "Viber", _SAMSUNG_4),
    (MediaType.TEXT, _SAMSUNG_5, "Skype", _PIXEL),
    (MediaType.IMAGE, _PIXEL, "Telegram", _SAMSUNG_5),
    (MediaType.IMAGE, _SAMSUNG_5, "WhatsApp", _SAMSUNG_4),
    (MediaType.IMAGE, _SAMSUNG_4, "Signal", _PIXEL),
    (MediaType.AUDIO, _SAMSUNG_5, "LINE", _SAMSUNG_4),
    (MediaType.AUDIO, _SAMSUNG_4, "Viber", _PIXEL),
    (MediaType.AUDIO, _PIXEL, "Skype", _SAMSUNG_5),
    (MediaType.VOICE_MEMO, _SAMSUNG_4, "Telegram", _SAMSUNG_5),
    (MediaType.VOICE_MEMO, _PIXEL, "WhatsApp", _SAMSUNG_4),
    (MediaType.VOICE_MEMO, _SAMSUNG_5, "Signal", _PIXEL),
    (MediaType.VIDEO, _PIXEL, "LINE", _SAMSUNG_5),
    (MediaType.VIDEO, _SAMSUNG_5, "Viber", _SAMSUNG_4),
    (MediaType.VIDEO, _SAMSUNG_4, "Skype", _PIXEL),
]

DEFAULT_TEXT_MESSAGES = [
    "the rumor spreads faster than the official statement",
    "meet me at the north entrance after the protest",
    "forward this leaked memo to the newsroom",
]

DEFAULT_PAYLOAD_SIZES = {
    MediaType.AUDIO: 4096,
    MediaType.VOICE_MEMO: 2048,
    MediaType.VIDEO: 16384,
}


def default_config() -> EvalConfig:
    return EvalConfig(
        agents=[_SAMSUNG_4, _SAMSUNG_5, _PIXEL],
        channels=dict(APP_PROFILES),
        schedule=[EvalCase(*case) for case in _DEFAULT_SCHEDULE],
        text_messages=list(DEFAULT_TEXT_MESSAGES),
        payload_sizes=dict(DEFAULT_PAYLOAD_SIZES),
    )


@dc.dataclass(frozen=True, slots=True)
class EvalRow:
    message_no: int
    media: MediaType
    encryption_status: Status
    sender: str
    channel: str
    receiver: str
    ocr_accuracy: t.Optional[float]
    """Only measured for text rows that reached the receiver"""

    decryption_status: Status
    blocked_at: t.Optional[Endpoint] = None
    sender_verdict: t.Optional[ScanVerdict] = None
    receiver_verdict: t.Optional[ScanVerdict] = None

    def to_dict(self) -> t.Dict[str, t.Any]:
        return {
            "message_no": self.message_no,
            "media": self.media.label,
            "encryption_status": self.encryption_status.value,
            "sender": self.sender,
            "channel": self.channel,
            "receiver": self.receiver,
            "ocr_accuracy": self.ocr_accuracy,
            "decryption_status": self.decryption_status.value,
            "blocked_at": self.blocked_at.value if self.blocked_at else None,
            "sender_verdict": str(self.sender_verdict) if self.sender_verdict else None,
            "receiver_verdict": (
                str(self.receiver_verdict) if self.receiver_verdict else None
            ),
        }


# --- payloads ---
def generate_image(width: int, height: int, rng: np.random.Generator) -> bytes:
    """A blocky random PGM image, 8x8 pixel tiles of random gray."""
    tiles = rng.integers(0, 256, size=(-(-height // 8), -(-width // 8)), dtype=np.uint8)
    array = np.kron(tiles, np.ones((8, 8), dtype=np.uint8))[:height, :width]
    return write_pgm(GrayImage.from_array(array))


def generate_payloads(config: EvalConfig, rng: np.random.Generator) -> t.List[bytes]:
    """Creates the plaintext of every scheduled case, in schedule order."""
    payloads = []
    texts = 0
    for case in config.schedule:
        match case.media:
            case MediaType.TEXT:
                message = config.text_messages[texts % len(config.text_messages)]
                payloads.append(message.encode("utf-8"))
                texts += 1
            case MediaType.IMAGE:
                payloads.append(generate_image(*config.image_size, rng))
            case _:
                size = config.payload_sizes.get(
                    case.media, DEFAULT_PAYLOAD_SIZES[case.media]
                )
                payloads.append(rng.bytes(size))
    return payloads


# --- evaluation ---
class Evaluation:
    """Runs the schedule of one configuration."""

    def __init__(
        self,
        config: EvalConfig,
        rng: np.random.Generator,
        database: t.Optional[ScanDatabase] = None,
        font: t.Optional[GlyphFont] = None,
    ) -> None:
        config.validate()
        self.config = config
        self.rng = rng
        self.font = font or default_font()
        self.database = database or ScanDatabase()
        self.recognizer = TemplateRecognizer(self.font, config.scale)
        self.keys: t.Dict[t.FrozenSet[str], SecretKey] = {}
        self.channels: t.Dict[str, Channel] = {}

    def shared_key(self, a: str, b: str) -> SecretKey:
        pair = frozenset((a, b))
        if pair not in self.keys:
            self.keys[pair] = generate_key(self.rng)
        return self.keys[pair]

    def run(self) -> t.List["EvalRow"]:
        payloads = generate_payloads(self.config, self.rng)
        database = self.database
        if self.config.seed_database:
            database = database.merge(
                ScanDatabase.from_plaintexts(
                    (case.media, payload)
                    for case, payload in zip(self.config.schedule, payloads)
                )
            )
        self.channels = {
            name: Channel(name, database, profile)
            for name, profile in self.config.channels.items()
        }

        rows = [
            self.run_case(number, case, payload)
            for number, (case, payload) in enumerate(
                zip(self.config.schedule, payloads), start=1
            )
        ]
        log.info(
            "evaluation finished: %d row(s), %d decrypted",
            len(rows),
            sum(row.decryption_status == Status.SUCCESSFUL for row in rows),
        )
        return rows

    def run_case(self, number: int, case: EvalCase, payload: bytes) -> EvalRow:
        key = self.shared_key(case.sender, case.receiver)
        encrypted = self.config.encrypt
        if encrypted:
            env = encrypt(payload, case.media, key, self.rng)
            if case.media == MediaType.TEXT:
                wire = armor_envelope(env).encode("ascii")
            else:
                wire = pack_envelope(env)
        else:
            wire = payload

        report = self.channels[case.channel].send(
            Agent(case.sender), Agent(case.receiver), case.media, wire
        )

        accuracy, decrypted = None, False
        if encrypted and not report.blocked:
            accuracy, decrypted = self.receive(case.media, report, key, payload)

        return EvalRow(
            message_no=number,
            media=case.media,
            encryption_status=Status.of(encrypted),
            sender=case.sender,
            channel=case.channel,
            receiver=case.receiver,
            ocr_accuracy=accuracy,
            decryption_status=Status.of(decrypted),
            blocked_at=report.blocked_at,
            sender_verdict=report.sender_verdict,
            receiver_verdict=report.receiver_verdict,
        )

    def receive(
        self, media: MediaType, report: DeliveryReport, key: SecretKey, expected: bytes
    ) -> t.Tuple[t.Optional[float], bool]:
        """Decrypts a delivered message; returns OCR accuracy and success."""
        accuracy = None
        try:
            if media == MediaType.TEXT:
                armored = report.delivered.decode("ascii")
                frame = render_armored(
                    armored, self.font, self.config.scale, self.config.wrap_width
                )
                recognized = self.recognizer.recognize(frame).text
                accuracy = ocr_accuracy(armored, recognized)
                opened_media, plaintext = decrypt_text(recognized, key)
            else:
                opened_media, plaintext = decrypt(parse_envelope(report.delivered), key)
        except EKBError as err:
            log.debug("receiver could not decrypt %s message: %s", media.label, err)
            return accuracy, False
        return accuracy, opened_media == media and plaintext == expected


def run_evaluation(
    config: EvalConfig,
    rng: np.random.Generator,
    database: t.Optional[ScanDatabase] = None,
) -> t.List[EvalRow]:
    """
    Runs the evaluation matrix.

    :param config: agents, channels and the schedule
    :type config: EvalConfig
    :param rng: source of keys, IVs and generated payloads
    :type rng: np.random.Generator
    :param database: extra scan rules merged with the seeded ones
    :type database: t.Optional[ScanDatabase], optional
    :raises ConfigInvalid: if the configuration is inconsistent
    :return: one row per scheduled case
    :rtype: t.List[EvalRow]
    """
    return Evaluation(config, rng, database).run()


# --- JSON conversion ---
def config_to_json(config: EvalConfig) -> str:
    obj = {
        "agents": config.agents,
        "channels": config.channels,
        "schedule": [
            {
                "media": case.media.name.lower(),
                "sender": case.sender,
                "channel": case.channel,
                "receiver": case.receiver,
            }
            for case in config.schedule
        ],
        "encrypt": config.encrypt,
        "seed_database": config.seed_database,
        "text_messages": config.text_messages,
        "payload_sizes": {m.name.lower(): s for m, s in config.payload_sizes.items()},
        "image_size": list(config.image_size),
        "scale": config.scale,
        "wrap_width": config.wrap_width,
    }
    return json.dumps(obj, indent=2)


def config_from_json(json_str: str | dict) -> EvalConfig:
    """
    Loads an evaluation configuration. Omitted fields keep their defaults.

    :raises ConfigInvalid: for malformed documents or inconsistent values
    """
    try:
        obj = json.loads(json_str) if isinstance(json_str, str) else json_str
        if not isinstance(obj, dict):
            raise ConfigInvalid("configuration must be a JSON object")

        config = default_config()
        if "agents" in obj:
            config.agents = [str(name) for name in obj["agents"]]
        if "channels" in obj:
            config.channels = {str(k): str(v) for k, v in obj["channels"].items()}
        if "schedule" in obj:
            config.schedule = [
                EvalCase(
                    MediaType.parse(str(case["media"])),
                    str(case["sender"]),
                    str(case["channel"]),
                    str(case["receiver"]),
                )
                for case in obj["schedule"]
            ]
        for name in ("encrypt", "seed_database"):
            if name in obj:
                setattr(config, name, bool(obj[name]))
        if "text_messages" in obj:
            config.text_messages = [str(text) for text in obj["text_messages"]]
        if "payload_sizes" in obj:
            config.payload_sizes.update(
                {MediaType.parse(k): int(v) for k, v in obj["payload_sizes"].items()}
            )
        if "image_size" in obj:
            width, height = obj["image_size"]
            config.image_size = (int(width), int(height))
        for name in ("scale", "wrap_width"):
            if name in obj:
                setattr(config, name, int(obj[name]))
    except (KeyError, TypeError, ValueError, AttributeError, BadMediaType) as err:
        raise ConfigInvalid(f"invalid evaluation config: {err}") from err

    config.validate()
    return config


def rows_to_json(rows: t.Iterable[EvalRow]) -> str:
    return json.dumps([row.to_dict() for row in rows], indent=2)


def report_table(rows: t.Iterable[EvalRow]) -> Table:
    """The evaluation matrix as a rich table."""
    table = Table(title="Evaluation results")
    for column in (
        "Message No.",
        "Message Type",
        "Encryption Status",
        "Sender Device",
        "Messaging App",
        "Receiver Device",
        "OCR Accuracy",
        "Decryption Status",
        "Blocked At",
    ):
        table.add_column(column)

    for row in rows:
        table.add_row(
            str(row.message_no),
            row.media.label,
            row.encryption_status.value,
            row.sender,
            row.channel,
            row.receiver,
            "N/A" if row.ocr_accuracy is None else f"{row.ocr_accuracy:.0%}",
            row.decryption_status.value,
            row.blocked_at.value if row.blocked_at else "-",
        )
    return table
