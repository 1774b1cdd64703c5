"""
Canonical JSON form of comparator networks::

    {"channels": 4, "layers": [[[1, 2], [3, 4]], [[1, 3], [2, 4]], [[2, 3]]]}

Channel indices are 1-based; each pair lists the min end first, and pairs in
a layer are sorted by their upper channel.
"""

import json

from django.core.exceptions import ValidationError

from core.exceptions import NetworkError

from .network import Comparator, ComparatorNetwork, Layer


def network_to_dict(net):
    return {"channels": net.channels, "layers": [layer.pairs() for layer in net.layers]}


def network_from_dict(data):
    """Build a network from its JSON document; malformed input raises ValidationError."""
    if not isinstance(data, dict):
        raise ValidationError("A network document must be a JSON object.", code="invalid")
    channels = data.get("channels")
    layers = data.get("layers")
    if not isinstance(channels, int) or isinstance(channels, bool):
        raise ValidationError("'channels' must be an integer.", code="invalid")
    if not isinstance(layers, list):
        raise ValidationError("'layers' must be a list of layers.", code="invalid")
    built = []
    for depth, layer in enumerate(layers, start=1):
        if not isinstance(layer, list):
            raise ValidationError(f"Layer {depth} must be a list of pairs.", code="invalid")
        comparators = []
        for pair in layer:
            if (
                not isinstance(pair, list)
                or len(pair) != 2
                or not all(isinstance(v, int) and not isinstance(v, bool) for v in pair)
            ):
                raise ValidationError(
                    f"Layer {depth} contains {pair!r}, expected [lo, hi].", code="invalid"
                )
            comparators.append(pair)
        built.append(comparators)
    try:
        return ComparatorNetwork(
            channels,
            tuple(Layer(tuple(Comparator(lo, hi) for lo, hi in layer)) for layer in built),
        )
    except NetworkError as exc:
        raise ValidationError(str(exc), code="constraint") from exc


def dumps(net):
    """Canonical text: compact separators, fixed key order."""
    return json.dumps(network_to_dict(net), separators=(", ", ": "))


def loads(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"Not valid JSON: {exc}", code="invalid") from exc
    return network_from_dict(data)
