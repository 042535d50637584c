"""
Django admin customization
"""
from django.contrib import admin

from . import models


class ExperimentRunAdmin(admin.ModelAdmin):
    """Define the admin page for archived runs."""
    ordering = ['-created_at']
    list_display = ['command', 'seed', 'exit_code', 'created_at']
    list_filter = ['command', 'exit_code']
    readonly_fields = ['created_at']
    fieldsets = (
        (
            None,
            {
                'fields': ('command', 'seed', 'exit_code')
            }
        ),
        (
            'Payload',
            {
                'fields': ('config', 'summary')
            }
        ),
        (
            'Important dates',
            {
                'fields': ('created_at',)
            }
        ),
    )


admin.site.register(models.ExperimentRun, ExperimentRunAdmin)
