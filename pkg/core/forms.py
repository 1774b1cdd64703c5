from django import forms

from core.conf import sortnet_setting
from core.exceptions import SortnetError
from encoding.encoder import MODES
from solvers.results import Budget
from solvers.sessions import BACKENDS
from synthesis.counterexamples import parse_strategy
from synthesis.loop import LoopConfig


class RunConfigForm(forms.Form):
    """Validates the flags of the synthesize and prove commands"""

    channels = forms.IntegerField(min_value=1)
    depth = forms.IntegerField(min_value=1)
    mode = forms.ChoiceField(choices=[(m, m) for m in MODES], required=False)
    solver = forms.ChoiceField(choices=[(b, b) for b in BACKENDS], required=False)
    command = forms.CharField(required=False)
    strategy = forms.CharField(required=False)
    initial = forms.IntegerField(min_value=0, required=False)
    batch_size = forms.IntegerField(min_value=1, required=False)
    reencode_every = forms.IntegerField(min_value=0, required=False)
    workers = forms.IntegerField(min_value=1, required=False)
    seed = forms.IntegerField(required=False)
    conflicts = forms.IntegerField(min_value=1, required=False)
    seconds = forms.FloatField(min_value=0.0, required=False)

    def clean_channels(self):
        channels = self.cleaned_data['channels']
        limit = sortnet_setting("EXHAUSTIVE_LIMIT")
        if channels > limit:
            raise forms.ValidationError(f"At most {limit} channels can be synthesized.")
        return channels

    def clean_strategy(self):
        strategy = self.cleaned_data.get('strategy')
        if strategy:
            try:
                parse_strategy(strategy)
            except SortnetError as exc:
                raise forms.ValidationError(str(exc))
        return strategy

    def clean(self):
        cleaned_data = super().clean()
        if cleaned_data.get('solver') == 'external' and not (
            cleaned_data.get('command') or sortnet_setting("EXTERNAL_SOLVER")
        ):
            raise forms.ValidationError(
                "The external solver needs --command or the SORTNET_SAT_SOLVER environment variable."
            )
        if cleaned_data.get('command') and cleaned_data.get('solver') != 'external':
            raise forms.ValidationError("--command is only used with --solver external.")
        return cleaned_data

    def loop_config(self):
        data = self.cleaned_data
        budget = Budget(data.get('conflicts'), data.get('seconds'))
        return LoopConfig.from_settings(
            mode=data.get('mode') or None,
            backend=data.get('solver') or None,
            command=data.get('command') or None,
            strategy=data.get('strategy') or None,
            batch_size=data.get('batch_size'),
            reencode_every=data.get('reencode_every'),
            seed=data.get('seed'),
            budget=budget,
        )
