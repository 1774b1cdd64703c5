import os
from pathlib import Path

BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = os.environ.get(
    "SORTNET_SECRET_KEY",
    "django-insecure-sortnet-local-only-3r7c!x0q9l2w$k8m@u5v1n6b4z",
)

DEBUG = os.environ.get("SORTNET_DEBUG", "1") == "1"

ALLOWED_HOSTS = ["*"]

INSTALLED_APPS = [
    "django.contrib.admin",
    "django.contrib.auth",
    "django.contrib.contenttypes",
    "django.contrib.sessions",
    "django.contrib.messages",
    "django.contrib.staticfiles",
    "core",
    "networks",
    "prefixes",
    "encoding",
    "solvers",
    "synthesis",
    "catalog",
    "reports",
    "mathfilters",
]

MIDDLEWARE = [
    "django.middleware.security.SecurityMiddleware",
    "django.contrib.sessions.middleware.SessionMiddleware",
    "django.middleware.common.CommonMiddleware",
    "django.middleware.csrf.CsrfViewMiddleware",
    "django.contrib.auth.middleware.AuthenticationMiddleware",
    "django.contrib.messages.middleware.MessageMiddleware",
    "django.middleware.clickjacking.XFrameOptionsMiddleware",
]

ROOT_URLCONF = "sortnet.urls"

TEMPLATES = [
    {
        "BACKEND": "django.template.backends.django.DjangoTemplates",
        "DIRS": [],
        "APP_DIRS": True,
        "OPTIONS": {
            "context_processors": [
                "django.template.context_processors.debug",
                "django.template.context_processors.request",
                "django.contrib.auth.context_processors.auth",
                "django.contrib.messages.context_processors.messages",
                "core.context_processors.sortnet_context",
            ],
        },
    },
]

WSGI_APPLICATION = "sortnet.wsgi.application"

DATABASES = {
    "default": {
        "ENGINE": "django.db.backends.sqlite3",
        "NAME": BASE_DIR / "db.sqlite3",
    }
}


LANGUAGE_CODE = "en-us"

TIME_ZONE = "UTC"

USE_I18N = True

USE_TZ = True

STATIC_URL = "static/"

STATIC_ROOT = BASE_DIR / "staticfiles"

DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"


# Logging
LOG_LEVEL = os.environ.get("SORTNET_LOG_LEVEL", "WARNING")

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "verbose": {
            "format": "{asctime} {levelname} {name} {message}",
            "style": "{",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "verbose",
        },
    },
    "root": {
        "handlers": ["console"],
        "level": "WARNING",
    },
    "loggers": {
        app: {"handlers": ["console"], "level": LOG_LEVEL, "propagate": False}
        for app in (
            "core",
            "networks",
            "prefixes",
            "encoding",
            "solvers",
            "synthesis",
            "catalog",
            "reports",
        )
    },
}


# Sorting network toolkit settings. Missing keys fall back to the defaults
# in core.conf, so a deployment only lists what it changes.
SORTNET = {
    "EXHAUSTIVE_LIMIT": 24,
    "ENUMERATION_LIMIT": 10,
    "EXTERNAL_SOLVER": os.environ.get("SORTNET_SAT_SOLVER", ""),
    "EXTERNAL_TIMEOUT": None,
    "SOLVER": {
        "CLAUSE_DECAY": 0.9999,
    },
    "CATALOG_DIR": BASE_DIR / "catalog" / "data",
}
