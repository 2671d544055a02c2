from django.test import TestCase

from group_app.admin import reset_cache_hits
from group_app.groups import metacyclic_group
from group_app.models import CharacterTableRecord
from group_app.table_cache import cached_character_table


class TableCacheTestCase(TestCase):
    def test_miss_then_hit(self):
        """First call stores the table, second call loads it and counts a hit"""
        group = metacyclic_group(3, 8, 2)
        first = cached_character_table(group)
        record = CharacterTableRecord.objects.get(group_hash=group.canonical_hash)
        self.assertEqual(record.order, 24)
        self.assertEqual(record.class_count, len(first))
        self.assertEqual(record.hits, 0)

        second = cached_character_table(metacyclic_group(3, 8, 2))
        self.assertEqual(second, first)
        record.refresh_from_db()
        self.assertEqual(record.hits, 1)
        print("✅ Table cache test passed")

    def test_distinct_groups_get_distinct_records(self):
        cached_character_table(metacyclic_group(3, 8, 2))
        cached_character_table(metacyclic_group(5, 4, 2))
        self.assertEqual(CharacterTableRecord.objects.count(), 2)
        self.assertEqual(str(CharacterTableRecord.objects.first()), "metacyclic(5,4,2) (order 20, 5 classes)")

    def test_admin_resets_hit_counters(self):
        group = metacyclic_group(3, 8, 2)
        cached_character_table(group)
        cached_character_table(group)
        reset_cache_hits(None, None, CharacterTableRecord.objects.all())
        self.assertEqual(CharacterTableRecord.objects.get(group_hash=group.canonical_hash).hits, 0)
