"""
Database models
"""
from django.db import models


class ExperimentRun(models.Model):
    """Archive entry for one laboratory command run"""
    command = models.CharField(max_length=64)
    seed = models.BigIntegerField()
    config = models.JSONField(default=dict)
    exit_code = models.IntegerField()
    summary = models.JSONField(default=dict)
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ['-created_at', '-id']

    def __str__(self):
        return f'{self.command} #{self.id}'

    @property
    def passed(self):
        return self.exit_code == 0
