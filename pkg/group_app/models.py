from django.db import models


class CharacterTableRecord(models.Model):
    """Cached character table, keyed by the canonical hash of the group's multiplication table."""
    group_hash = models.CharField(max_length=64, unique=True, db_index=True)
    group_name = models.CharField(max_length=100, blank=True)
    order = models.PositiveIntegerField()
    class_count = models.PositiveIntegerField()
    payload = models.JSONField()
    created_at = models.DateTimeField(auto_now_add=True)
    hits = models.PositiveIntegerField(default=0)

    class Meta:
        ordering = ['order', 'group_name']

    def __str__(self):
        return f"{self.group_name or 'group'} (order {self.order}, {self.class_count} classes)"
