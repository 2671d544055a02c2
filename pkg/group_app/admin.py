from django.contrib import admin
from .models import CharacterTableRecord


def reset_cache_hits(model_admin, request, query_set):
    query_set.update(hits=0)


reset_cache_hits.short_description = "Reset hit counters"


class CharacterTableRecordAdmin(admin.ModelAdmin):
    list_display = ['group_name', 'order', 'class_count', 'hits', 'created_at']
    list_filter = ['order']
    search_fields = ['group_name', 'group_hash']
    readonly_fields = ['group_hash', 'payload', 'created_at', 'hits']
    actions = [reset_cache_hits]


admin.site.register(CharacterTableRecord, CharacterTableRecordAdmin)
