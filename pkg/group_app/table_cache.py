import logging

from django.db import DatabaseError
from django.db.models import F

from .characters import character_table, table_from_dict
from .groups import group_to_spec
from .models import CharacterTableRecord

logger = logging.getLogger(__name__)


def cached_character_table(group):
    """
    Character table of ``group`` from the table cache, computed and stored on a miss.
    Cached payloads are re-verified on load, so a corrupted row fails loudly.
    """
    key = group.canonical_hash
    try:
        record = CharacterTableRecord.objects.filter(group_hash=key).first()
    except DatabaseError as e:
        logger.warning(f"Character table cache unavailable ({e}); computing without it")
        return character_table(group)

    if record is not None:
        CharacterTableRecord.objects.filter(pk=record.pk).update(hits=F('hits') + 1)
        logger.info(f"Character table cache hit for {group!r}")
        return table_from_dict(record.payload, group)

    table = character_table(group)
    CharacterTableRecord.objects.create(
        group_hash=key,
        group_name=group.name[:100],
        order=group.order,
        class_count=len(table),
        payload=table.to_dict(group_to_spec(group)),
    )
    logger.info(f"Stored character table for {group!r} in the cache")
    return table
