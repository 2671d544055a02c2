import json
import logging
from pathlib import Path

from rest_framework import serializers

from group_app.exceptions import SchemaError, UsageError
from group_app.groups import group_from_spec
from group_app.serializer import validated_group_spec

from .orbits import Homomorphism
from .words import Word

logger = logging.getLogger(__name__)


def read_json(path):
    try:
        with open(path) as f:
            return json.load(f)
    except OSError as e:
        raise UsageError(f"Cannot read {path}: {e.strerror}", path=str(path))
    except json.JSONDecodeError as e:
        raise SchemaError(f"{path} is not valid JSON: {e.msg}", path=str(path), line=e.lineno)


class HomSpecSerializer(serializers.Serializer):
    """
    Homomorphism file: {"group": spec or path, "images": [element refs], "rank": n}.
    Element refs are indices or labels such as "a*b^2".
    """
    group = serializers.JSONField()
    images = serializers.ListField(child=serializers.JSONField(), min_length=1)
    rank = serializers.IntegerField(min_value=1, required=False)

    def validate_group(self, value):
        if not isinstance(value, (dict, str)):
            raise serializers.ValidationError("Group must be a spec object or a path to a group file")
        return value

    def validate_images(self, value):
        for ref in value:
            if isinstance(ref, bool) or not isinstance(ref, (int, str)):
                raise serializers.ValidationError("Images are element indices or labels")
        return value

    def validate(self, data):
        if 'rank' in data and data['rank'] != len(data['images']):
            raise serializers.ValidationError("Rank must equal the number of images")
        return data


class PresetSpecSerializer(serializers.Serializer):
    """Surface preset file; words are letter strings with upper case for inverse letters."""
    name = serializers.CharField(required=False, allow_blank=True)
    rank = serializers.IntegerField(min_value=1, max_value=26)
    autos = serializers.ListField(child=serializers.ListField(child=serializers.CharField(allow_blank=True)))
    inverses = serializers.ListField(child=serializers.ListField(child=serializers.CharField(allow_blank=True)))
    seeds = serializers.ListField(child=serializers.CharField(), min_length=1)
    peripheral = serializers.ListField(child=serializers.CharField(), min_length=1)
    genus = serializers.IntegerField(min_value=0, required=False)
    punctures = serializers.IntegerField(min_value=0, required=False)

    def validate(self, data):
        rank = data['rank']
        if len(data['autos']) != len(data['inverses']):
            raise serializers.ValidationError("Need one inverse per substitution")
        for sub in data['autos'] + data['inverses']:
            if len(sub) != rank:
                raise serializers.ValidationError(f"Substitutions need {rank} words")
        for text in [w for sub in data['autos'] + data['inverses'] for w in sub] + data['seeds'] + data['peripheral']:
            try:
                Word.from_string(text, rank)
            except SchemaError as e:
                raise serializers.ValidationError(e.message)
        return data


def _validated(serializer_class, data, what):
    serializer = serializer_class(data=data)
    if not serializer.is_valid():
        logger.warning(f"Rejected {what}: {serializer.errors}")
        raise SchemaError(f"Invalid {what}", errors=serializer.errors)
    return dict(serializer.validated_data)


def load_group(source, base_dir=None, allow_paths=True):
    """A group from a spec dict or from the path of a group file."""
    if isinstance(source, (str, Path)):
        if not allow_paths:
            raise SchemaError("Group must be given as a spec object")
        path = Path(source)
        if base_dir is not None and not path.is_absolute():
            path = Path(base_dir) / path
        source = read_json(path)
    return group_from_spec(validated_group_spec(source))


def hom_from_spec(data, base_dir=None, allow_paths=True):
    if not isinstance(data, dict):
        raise SchemaError("Homomorphism spec must be an object")
    spec = _validated(HomSpecSerializer, data, "homomorphism spec")
    group = load_group(spec['group'], base_dir, allow_paths)
    return Homomorphism(group, spec['images'], rank=spec.get('rank'))


def load_hom(path):
    path = Path(path)
    return hom_from_spec(read_json(path), base_dir=path.parent)


def validated_preset_spec(data):
    return _validated(PresetSpecSerializer, data, "preset spec")
