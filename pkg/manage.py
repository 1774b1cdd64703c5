#!/usr/bin/env python
"""Django's command-line utility, also the sortnet command-line entry point."""
import os
import sys

# Hyphenated command names map onto Django command modules.
COMMAND_ALIASES = {
    "window-sum": "window_sum",
    "optimize-prefix": "optimize_prefix",
    "green-filter": "green_filter",
    "enumerate-prefixes": "enumerate_prefixes",
}


def main(argv=None):
    """Run administrative and sortnet tasks."""
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "sortnet.settings")
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Are you sure it's installed and "
            "available on your PYTHONPATH environment variable? Did you "
            "forget to activate a virtual environment?"
        ) from exc
    argv = list(sys.argv if argv is None else argv)
    if len(argv) > 1:
        argv[1] = COMMAND_ALIASES.get(argv[1], argv[1])
    try:
        execute_from_command_line(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
