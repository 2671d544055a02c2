from rest_framework import serializers

from .exceptions import SchemaError

GROUP_KINDS = ('metacyclic', 'nilpotent2', 'type_ii', 'abelian', 'permutation', 'table')

REQUIRED_FIELDS = {
    'metacyclic': ('m', 'k', 'r'),
    'nilpotent2': ('rank', 'modulus'),
    'type_ii': ('m', 'n', 'r', 'l', 'k'),
    'abelian': ('moduli',),
    'permutation': ('generators',),
    'table': ('order', 'table', 'generators'),
}


class GroupSpecSerializer(serializers.Serializer):
    """
    Group spec file: {"kind": ..., parameters...}. Tables are flat row-major
    integer arrays of length order^2.
    """
    kind = serializers.ChoiceField(choices=GROUP_KINDS)
    m = serializers.IntegerField(min_value=1, required=False)
    k = serializers.IntegerField(min_value=1, required=False)
    r = serializers.IntegerField(required=False)
    n = serializers.IntegerField(min_value=1, required=False)
    l = serializers.IntegerField(required=False)  # noqa: E741
    rank = serializers.IntegerField(min_value=1, required=False)
    modulus = serializers.IntegerField(min_value=2, required=False)
    center_quotient = serializers.ListField(
        child=serializers.ListField(child=serializers.IntegerField()), required=False
    )
    moduli = serializers.ListField(child=serializers.IntegerField(min_value=1), required=False, min_length=1)
    degree = serializers.IntegerField(min_value=1, required=False)
    order = serializers.IntegerField(min_value=1, required=False)
    table = serializers.ListField(child=serializers.IntegerField(min_value=0), required=False)
    generators = serializers.ListField(child=serializers.JSONField(), required=False, min_length=1)
    gen_names = serializers.ListField(child=serializers.CharField(), required=False)
    labels = serializers.ListField(child=serializers.CharField(), required=False)

    def validate(self, data):
        kind = data['kind']
        missing = [name for name in REQUIRED_FIELDS[kind] if name not in data]
        if missing:
            raise serializers.ValidationError(f"Group kind '{kind}' requires {', '.join(missing)}")
        if kind == 'table':
            if len(data['table']) != data['order'] ** 2:
                raise serializers.ValidationError("Flat table length must equal order squared")
            if not all(isinstance(g, int) and not isinstance(g, bool) for g in data['generators']):
                raise serializers.ValidationError("Table generators must be element indices")
            if 'labels' in data and len(data['labels']) != data['order']:
                raise serializers.ValidationError("Need one label per element")
        if kind == 'permutation':
            for gen in data['generators']:
                if not isinstance(gen, list) or not all(
                        isinstance(cycle, list) and all(isinstance(p, int) and p >= 0 for p in cycle)
                        for cycle in gen):
                    raise serializers.ValidationError("Permutation generators are lists of cycles of points")
        if 'gen_names' in data and kind == 'table' and len(data['gen_names']) != len(data['generators']):
            raise serializers.ValidationError("Need one name per generator")
        return data


class CycloNumberSerializer(serializers.Serializer):
    N = serializers.IntegerField(min_value=1)
    c = serializers.ListField(child=serializers.CharField())


class CharacterTableSerializer(serializers.Serializer):
    """Character table file: {"group": spec, "classes": [[rep, size]...], "chars": [[CycloNumber...]...]}."""
    group = GroupSpecSerializer()
    classes = serializers.ListField(
        child=serializers.ListField(child=serializers.IntegerField(min_value=0), min_length=2, max_length=2)
    )
    chars = serializers.ListField(child=serializers.ListField(child=CycloNumberSerializer()))

    def validate(self, data):
        if len(data['chars']) != len(data['classes']):
            raise serializers.ValidationError("Need one character row per class")
        return data


def validated_group_spec(data):
    serializer = GroupSpecSerializer(data=data)
    if not serializer.is_valid():
        raise SchemaError("Invalid group spec", errors=serializer.errors)
    return dict(serializer.validated_data)


def validated_table_file(data):
    serializer = CharacterTableSerializer(data=data)
    if not serializer.is_valid():
        raise SchemaError("Invalid character table file", errors=serializer.errors)
    return serializer.validated_data
