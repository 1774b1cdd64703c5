"""A prefix is a network hard-coded as the fixed head of a synthesis problem."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from django.core.exceptions import ValidationError

from core.exceptions import NetworkError
from networks.network import ComparatorNetwork
from networks.serialization import network_from_dict, network_to_dict

LABELS = ("pb", "bz", "green", "optimized", "enumerated", "custom")


@dataclass(frozen=True)
class Prefix:
    network: ComparatorNetwork
    label: str = "custom"

    def __post_init__(self):
        if self.label not in LABELS:
            raise NetworkError(f"unknown prefix label {self.label!r}")
        self.network.require_standard()

    @classmethod
    def empty(cls, channels, label="custom"):
        return cls(ComparatorNetwork.empty(channels), label)

    @property
    def channels(self):
        return self.network.channels

    @property
    def depth(self):
        return self.network.depth

    def digest(self):
        """Short stable hash of the prefix layers."""
        text = json.dumps(network_to_dict(self.network), sort_keys=True)
        return hashlib.sha256(text.encode()).hexdigest()[:12]

    def __str__(self):
        return f"{self.label}:{self.network}"


def prefix_to_dict(prefix):
    data = network_to_dict(prefix.network)
    data["label"] = prefix.label
    return data


def prefix_from_dict(data):
    network = network_from_dict(data)
    label = data.get("label", "custom")
    if label not in LABELS:
        raise ValidationError(f"Unknown prefix label {label!r}.", code="invalid")
    try:
        return Prefix(network, label)
    except NetworkError as exc:
        raise ValidationError(str(exc), code="constraint") from exc


def dumps_prefix(prefix):
    return json.dumps(prefix_to_dict(prefix), separators=(", ", ": "))


def loads_prefix(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"Not valid JSON: {exc}", code="invalid") from exc
    return prefix_from_dict(data)
