import json

from django import forms
from django.core.exceptions import ValidationError

from .evolution import EaConfig

FIELDS = ('sample_size', 'population', 'offspring', 'generations', 'mutation_rate', 'seed')


class EaConfigForm(forms.Form):
    """Evolutionary search settings; blank fields keep the configured defaults"""

    sample_size = forms.IntegerField(min_value=1, required=False)
    population = forms.IntegerField(min_value=1, required=False)
    offspring = forms.IntegerField(min_value=1, required=False)
    generations = forms.IntegerField(min_value=1, required=False)
    mutation_rate = forms.FloatField(min_value=0.0, max_value=0.999, required=False)
    seed = forms.IntegerField(required=False)

    @classmethod
    def from_json(cls, text, **overrides):
        """Form bound to a JSON settings document, with flag overrides on top."""
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise forms.ValidationError(f"Not valid JSON: {exc}", code='invalid')
        if not isinstance(data, dict):
            raise forms.ValidationError("EA settings must be a JSON object.", code='invalid')
        unknown = sorted(set(data) - set(FIELDS))
        if unknown:
            raise forms.ValidationError(f"Unknown EA settings: {', '.join(unknown)}.", code='invalid')
        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls(data)

    def ea_config(self):
        try:
            return EaConfig.from_settings(**{name: self.cleaned_data.get(name) for name in FIELDS})
        except ValidationError as exc:
            raise forms.ValidationError(exc.messages)
