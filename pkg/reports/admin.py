from django.contrib import admin

from .models import PrefixVerdict, ProofRun


class PrefixVerdictInline(admin.TabularInline):
    model = PrefixVerdict
    extra = 0
    fields = ['prefix_id', 'label', 'verdict', 'iterations', 'inputs', 'seconds']
    readonly_fields = fields


@admin.register(ProofRun)
class ProofRunAdmin(admin.ModelAdmin):
    """Admin interface for ProofRun"""

    list_display = ['channels', 'depth', 'verdict', 'mode', 'solver', 'prefix_count', 'seconds', 'created_at']
    list_filter = ['verdict', 'mode', 'solver', 'channels']
    readonly_fields = ['created_at']
    inlines = [PrefixVerdictInline]

    fieldsets = (
        ('Problem', {
            'fields': ('channels', 'depth', 'mode', 'solver')
        }),
        ('Outcome', {
            'fields': ('verdict', 'summary', 'seconds')
        }),
        ('Assumptions', {
            'fields': ('assumptions', 'notes'),
            'classes': ('collapse',)
        }),
        ('Timestamps', {
            'fields': ('created_at',),
            'classes': ('collapse',)
        }),
    )


@admin.register(PrefixVerdict)
class PrefixVerdictAdmin(admin.ModelAdmin):
    list_display = ['prefix_id', 'run', 'label', 'verdict', 'iterations', 'inputs', 'seconds']
    list_filter = ['verdict', 'label']
    search_fields = ['prefix_id']
