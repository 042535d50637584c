"""
Serializers for JSON bundle descriptions {k, m, rows}.
"""
from rest_framework import serializers

from bundlealg.bundles import BundleClass, ClutchingData
from bundlealg.intmat import IntMat


class IntMatSerializer(serializers.Serializer):
    """Serializer for a k x m integer matrix"""
    k = serializers.IntegerField(min_value=1)
    m = serializers.IntegerField(min_value=1)
    rows = serializers.ListField(
        child=serializers.ListField(child=serializers.IntegerField()),
    )

    def validate(self, attrs):
        """Check the rows match the declared shape"""
        rows = attrs['rows']
        if len(rows) != attrs['k']:
            raise serializers.ValidationError(
                {'rows': f'Expected {attrs["k"]} rows, got {len(rows)}'}
            )
        for index, row in enumerate(rows):
            if len(row) != attrs['m']:
                raise serializers.ValidationError({
                    'rows': f'Row {index} has {len(row)} entries, '
                            f'expected {attrs["m"]}',
                })
        return attrs

    def to_intmat(self):
        return IntMat(self.validated_data['rows'])

    @staticmethod
    def describe(matrix):
        matrix = IntMat.coerce(matrix)
        k, m = matrix.shape
        return {'k': k, 'm': m, 'rows': matrix.tolist()}


class ClutchingSerializer(IntMatSerializer):
    """Serializer for clutching exponents over a wedge of m spheres"""

    def to_clutching(self):
        return ClutchingData(self.to_intmat())


class BundleClassSerializer(IntMatSerializer):
    """Serializer for the Chern matrix of a bundle"""

    def to_bundle(self):
        return BundleClass(self.to_intmat())


class SquareMatrixSerializer(IntMatSerializer):
    """Serializer for an automorphism or a base action"""

    def validate(self, attrs):
        attrs = super().validate(attrs)
        if attrs['k'] != attrs['m']:
            raise serializers.ValidationError(
                {'m': 'A square matrix needs k == m'}
            )
        return attrs
