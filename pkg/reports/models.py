from django.core.validators import MinValueValidator
from django.db import models


class ProofRun(models.Model):
    """
    One lower-bound sweep: every prefix of a set was given to the synthesis
    loop at a fixed channel count and depth.
    """

    class Verdict(models.TextChoices):
        NO_NETWORK = "no-network", "No network extends any prefix"
        NETWORK_FOUND = "network-found", "Network found"
        INCONCLUSIVE = "inconclusive", "Inconclusive"

    channels = models.PositiveSmallIntegerField(
        validators=[MinValueValidator(1)],
        help_text="Number of channels"
    )
    depth = models.PositiveSmallIntegerField(
        help_text="Depth that was shown impossible (or possible)"
    )
    mode = models.CharField(
        max_length=16,
        help_text="Encoding mode (original or improved)"
    )
    solver = models.CharField(
        max_length=16,
        help_text="Solver backend"
    )
    verdict = models.CharField(
        max_length=16,
        choices=Verdict.choices,
        help_text="Overall verdict of the sweep"
    )
    summary = models.CharField(max_length=200, blank=True)
    assumptions = models.JSONField(
        default=list,
        blank=True,
        help_text="Assumptions the verdict depends on"
    )
    notes = models.JSONField(default=list, blank=True)
    seconds = models.FloatField(default=0.0)
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        verbose_name = "Proof Run"
        verbose_name_plural = "Proof Runs"
        ordering = ['-created_at']

    def __str__(self):
        return f"{self.channels} channels, depth {self.depth}: {self.get_verdict_display()}"

    def prefix_count(self):
        return self.prefixes.count()


class PrefixVerdict(models.Model):
    """Result of the synthesis loop for one prefix of a proof run."""

    run = models.ForeignKey(
        ProofRun,
        on_delete=models.CASCADE,
        related_name='prefixes',
        help_text="Proof run this verdict belongs to"
    )
    prefix_id = models.CharField(
        max_length=32,
        help_text="Short hash of the prefix layers"
    )
    label = models.CharField(max_length=16)
    layers = models.JSONField(help_text="Prefix network document")
    verdict = models.CharField(max_length=16)
    iterations = models.PositiveIntegerField(default=0)
    inputs = models.PositiveIntegerField(default=0)
    seconds = models.FloatField(default=0.0)

    class Meta:
        verbose_name = "Prefix Verdict"
        verbose_name_plural = "Prefix Verdicts"
        ordering = ['run', 'id']

    def __str__(self):
        return f"{self.prefix_id}: {self.verdict}"
