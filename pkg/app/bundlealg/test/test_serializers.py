"""
Tests for the JSON bundle descriptions
"""
from django.test import SimpleTestCase

from bundlealg.intmat import IntMat
from bundlealg.serializers import (
    BundleClassSerializer,
    ClutchingSerializer,
    IntMatSerializer,
    SquareMatrixSerializer,
)


class BundleSerializerTests(SimpleTestCase):
    """Test validation of {k, m, rows}"""

    def test_valid_description(self):
        """Test a consistent description builds the matrix"""
        serializer = ClutchingSerializer(
            data={'k': 2, 'm': 3, 'rows': [[1, 0, 2], [0, 1, -1]]}
        )
        self.assertTrue(serializer.is_valid(), serializer.errors)
        clutching = serializer.to_clutching()
        self.assertEqual(clutching.exponents,
                         IntMat([[1, 0, 2], [0, 1, -1]]))
        self.assertEqual((clutching.k, clutching.m), (2, 3))

    def test_row_count_mismatch(self):
        """Test the wrong number of rows is reported on rows"""
        serializer = BundleClassSerializer(
            data={'k': 3, 'm': 1, 'rows': [[1], [2]]}
        )
        self.assertFalse(serializer.is_valid())
        self.assertIn('rows', serializer.errors)

    def test_non_integer_entry(self):
        """Test fractional entries are rejected"""
        serializer = IntMatSerializer(
            data={'k': 1, 'm': 2, 'rows': [[1, 0.5]]}
        )
        self.assertFalse(serializer.is_valid())
        self.assertIn('rows', serializer.errors)

    def test_square_required(self):
        serializer = SquareMatrixSerializer(
            data={'k': 1, 'm': 2, 'rows': [[1, 0]]}
        )
        self.assertFalse(serializer.is_valid())
        self.assertIn('m', serializer.errors)

    def test_describe(self):
        """Test a matrix is written back as {k, m, rows}"""
        payload = IntMatSerializer.describe(IntMat([[2, 1], [1, 1]]))
        self.assertEqual(payload, {'k': 2, 'm': 2, 'rows': [[2, 1], [1, 1]]})
        serializer = BundleClassSerializer(data=payload)
        self.assertTrue(serializer.is_valid())
        self.assertEqual(serializer.to_bundle().chern.det(), 1)
