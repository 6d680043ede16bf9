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
Simulated instant-messaging channel with a scanner on both endpoints.

A message is scanned on the sender's device before it leaves and again on
the receiver's device after it arrives. Blocking is part of the delivery
report, never an exception.
"""
import enum
import logging
import dataclasses as dc
import typing as t

from ekboard.envelope import MediaType
from ekboard.css.scanner import (
    SCAN_PROFILES,
    ScanDatabase,
    ScanRule,
    ScanVerdict,
    scan,
)

log = logging.getLogger(__name__)

APP_PROFILES: t.Dict[str, str] = {
    "Signal": "full",
    "Viber": "perceptual",
    "Skype": "exact",
    "Telegram": "perceptual",
    "WhatsApp": "full",
    "LINE": "exact",
}
"""The six messaging apps of the evaluation and the scanner profile each runs."""


class Endpoint(enum.Enum):
    SENDER = "sender"
    RECEIVER = "receiver"


@dc.dataclass(frozen=True, slots=True)
class Agent:
    """A device taking part in a conversation."""

    name: str


@dc.dataclass(frozen=True, slots=True)
class DeliveryReport:
    channel: str
    sender: Agent
    receiver: Agent
    media: MediaType
    sender_verdict: ScanVerdict
    receiver_verdict: t.Optional[ScanVerdict] = None
    """``None`` when the message never left the sender"""

    delivered: t.Optional[bytes] = None
    """The bytes that reached the receiver"""

    @property
    def blocked_at(self) -> t.Optional[Endpoint]:
        if self.sender_verdict.flagged:
            return Endpoint.SENDER
        if self.receiver_verdict is not None and self.receiver_verdict.flagged:
            return Endpoint.RECEIVER
        return None

    @property
    def blocked(self) -> bool:
        return self.blocked_at is not None


@dc.dataclass(frozen=True)
class Channel:
    """A messaging app: a name, a scan database and a scanner profile."""

    name: str
    database: ScanDatabase
    profile: str = "full"

    def __post_init__(self) -> None:
        if self.profile not in SCAN_PROFILES:
            raise ValueError(f"unknown scanner profile {self.profile!r}")

    @property
    def rules(self) -> t.FrozenSet[ScanRule]:
        return SCAN_PROFILES[self.profile]

    def send(
        self, sender: Agent, receiver: Agent, media: MediaType, payload: bytes
    ) -> DeliveryReport:
        """
        Delivers one message.

        :param sender: the sending device
        :type sender: Agent
        :param receiver: the receiving device
        :type receiver: Agent
        :param media: the declared media type
        :type media: MediaType
        :param payload: the bytes handed to the app
        :type payload: bytes
        :return: both verdicts and, unless blocked at the sender, the
                 delivered bytes
        :rtype: DeliveryReport
        """
        payload = bytes(payload)
        outgoing = scan(self.database, media, payload, self.rules)
        if outgoing.flagged:
            log.info(
                "%s: %s -> %s blocked at sender (%s)",
                self.name, sender.name, receiver.name, outgoing.reason,
            )
            return DeliveryReport(self.name, sender, receiver, media, outgoing)

        delivered = payload
        incoming = scan(self.database, media, delivered, self.rules)
        if incoming.flagged:
            log.info(
                "%s: %s -> %s flagged at receiver (%s)",
                self.name, sender.name, receiver.name, incoming.reason,
            )
        return DeliveryReport(
            self.name, sender, receiver, media, outgoing, incoming, delivered
        )


def channel_send(
    channel: Channel, sender: Agent, receiver: Agent, media: MediaType, payload: bytes
) -> DeliveryReport:
    return channel.send(sender, receiver, media, payload)


def app_channels(
    database: ScanDatabase, profiles: t.Optional[t.Mapping[str, str]] = None
) -> t.Dict[str, Channel]:
    """Creates one channel per app, all sharing ``database``."""
    profiles = APP_PROFILES if profiles is None else profiles
    return {name: Channel(name, database, profile) for name, profile in profiles.items()}
