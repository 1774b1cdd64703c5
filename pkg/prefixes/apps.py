from django.apps import AppConfig


class PrefixesConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "prefixes"
