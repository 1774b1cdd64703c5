import copy

from django.conf import settings

DEFAULTS = {
    "EXHAUSTIVE_LIMIT": 24,
    "ENUMERATION_LIMIT": 10,
    "MAX_CHANNELS": 64,
    "EXTERNAL_SOLVER": "",
    "EXTERNAL_TIMEOUT": None,
    "SOLVER": {
        "CLAUSE_DECAY": 0.9999,
        "VAR_DECAY": 0.95,
        "RESTART_FIRST": 100,
        "RESTART_FACTOR": 1.5,
        "LEARNT_FRACTION": 1 / 3,
        "PROBE": False,
        "RANDOM_FREQ": 0.0,
        "SEED": 0,
    },
    "EA": {
        "POPULATION": 20,
        "OFFSPRING": 40,
        "GENERATIONS": 200,
        "MUTATION_RATE": 0.2,
        "SAMPLE_SIZE": 800,
        "SEED": 0,
    },
    "SYNTHESIS": {
        "MODE": "improved",
        "BATCH_SIZE": 1,
        "REENCODE_EVERY": 64,
        "INITIAL_STRATEGY": "small-window-first",
    },
    "CATALOG_DIR": None,
}


def _merge(base, override):
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def sortnet_settings():
    """Return the SORTNET settings dict merged over the defaults."""
    return _merge(DEFAULTS, getattr(settings, "SORTNET", {}))


def sortnet_setting(path, default=None):
    """
    Look up a dotted setting path, e.g. ``sortnet_setting("SOLVER.CLAUSE_DECAY")``.
    """
    node = sortnet_settings()
    for part in path.split("."):
        if not isinstance(node, dict) or part not in node:
            return default
        node = node[part]
    return node
