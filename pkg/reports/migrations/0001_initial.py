import django.core.validators
import django.db.models.deletion
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name='ProofRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('channels', models.PositiveSmallIntegerField(help_text='Number of channels', validators=[django.core.validators.MinValueValidator(1)])),
                ('depth', models.PositiveSmallIntegerField(help_text='Depth that was shown impossible (or possible)')),
                ('mode', models.CharField(help_text='Encoding mode (original or improved)', max_length=16)),
                ('solver', models.CharField(help_text='Solver backend', max_length=16)),
                ('verdict', models.CharField(choices=[('no-network', 'No network extends any prefix'), ('network-found', 'Network found'), ('inconclusive', 'Inconclusive')], help_text='Overall verdict of the sweep', max_length=16)),
                ('summary', models.CharField(blank=True, max_length=200)),
                ('assumptions', models.JSONField(blank=True, default=list, help_text='Assumptions the verdict depends on')),
                ('notes', models.JSONField(blank=True, default=list)),
                ('seconds', models.FloatField(default=0.0)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
            ],
            options={
                'verbose_name': 'Proof Run',
                'verbose_name_plural': 'Proof Runs',
                'ordering': ['-created_at'],
            },
        ),
        migrations.CreateModel(
            name='PrefixVerdict',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('prefix_id', models.CharField(help_text='Short hash of the prefix layers', max_length=32)),
                ('label', models.CharField(max_length=16)),
                ('layers', models.JSONField(help_text='Prefix network document')),
                ('verdict', models.CharField(max_length=16)),
                ('iterations', models.PositiveIntegerField(default=0)),
                ('inputs', models.PositiveIntegerField(default=0)),
                ('seconds', models.FloatField(default=0.0)),
                ('run', models.ForeignKey(help_text='Proof run this verdict belongs to', on_delete=django.db.models.deletion.CASCADE, related_name='prefixes', to='reports.proofrun')),
            ],
            options={
                'verbose_name': 'Prefix Verdict',
                'verbose_name_plural': 'Prefix Verdicts',
                'ordering': ['run', 'id'],
            },
        ),
    ]
