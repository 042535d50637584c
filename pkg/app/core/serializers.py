"""
Serializers validating the run configuration of each command.

Validated data carries the built domain objects next to the raw fields:
``params`` (PerturbedMapParams), ``skew`` (SkewParams) and ``matrices``
((A, H, F) for bundles).
"""
from fractions import Fraction

from django.conf import settings
from rest_framework import serializers

from bundlealg.bundles import (
    KUMMER_RANK,
    kummer_configuration,
    require_unimodular,
)
from bundlealg.intmat import IntMat
from dyncore.bump import BumpKind, BumpProfile
from dyncore.maps import PerturbedMapParams, epsilon_limit
from dyncore.matrices import DEFAULT_B, Mat2Int
from hyperbolic.lyapunov import MIN_ITERS
from hyperbolic.pinching import DEFAULT_HORIZONS, DEFAULT_SCALES
from skewprod.ergodicity import MIN_STEPS
from skewprod.model import (
    MAX_RANK,
    MIN_RANK,
    MIN_SKEW_ITERS,
    SkewParams,
    rotate,
)


DEFAULT_START = [0.1234, 0.5678, 0.9012, 0.3456]
DEFAULT_CHARACTER_COUNT = 5


def _lab_default(key):
    return lambda: settings.DYNLAB[key]


def _field_error(field, error):
    return serializers.ValidationError({field: str(error)})


def default_characters(rank, count=DEFAULT_CHARACTER_COUNT):
    """Unit characters, then e_1 + e_i and e_1 - e_i, then multiples of e_1"""
    def combine(*pairs):
        m = [0] * rank
        for index, value in pairs:
            m[index] += value
        return m

    candidates = [combine((i, 1)) for i in range(rank)]
    for i in range(1, rank):
        candidates += [combine((0, 1), (i, 1)), combine((0, 1), (i, -1))]
    scale = 2
    while len(candidates) < count:
        candidates.append(combine((0, scale)))
        scale += 1
    return candidates[:count]


class CoefficientField(serializers.Field):
    """A torus constant: ints and fraction strings stay exact"""
    default_error_messages = {
        'invalid': 'Expected a number or a fraction string such as "1/3".',
    }

    def to_internal_value(self, data):
        if isinstance(data, bool):
            self.fail('invalid')
        if isinstance(data, (int, float)):
            return data
        try:
            return Fraction(str(data))
        except (ValueError, ZeroDivisionError):
            self.fail('invalid')

    def to_representation(self, value):
        if isinstance(value, Fraction):
            return str(value)
        return value


class RunConfigSerializer(serializers.Serializer):
    """Fields shared by every command"""
    seed = serializers.IntegerField(
        min_value=0, max_value=2 ** 63 - 1, default=_lab_default('SEED'),
    )
    output = serializers.CharField(default=_lab_default('OUTPUT_DIR'))
    jobs = serializers.IntegerField(min_value=1, default=_lab_default('JOBS'))


class MapConfigSerializer(RunConfigSerializer):
    """Parameters of the perturbed torus map B_{eps,d} (+) B_{eps,d}"""
    epsilon = serializers.FloatField(min_value=0, default=0.0)
    d = serializers.IntegerField(min_value=1, default=1)
    delta = serializers.FloatField(default=1 / 16)
    kind = serializers.ChoiceField(
        choices=[kind.value for kind in BumpKind],
        default=BumpKind.SMOOTH.value,
    )
    direction = serializers.ListField(
        child=serializers.IntegerField(), min_length=2, max_length=2,
        default=[1, 1],
    )
    B = serializers.ListField(
        child=serializers.ListField(
            child=serializers.IntegerField(), min_length=2, max_length=2,
        ),
        min_length=2, max_length=2,
        default=[list(row) for row in DEFAULT_B.rows],
    )

    def validate_delta(self, value):
        if not 0 < value < 1 / 8:
            raise serializers.ValidationError(
                'delta must lie in the open interval (0, 1/8)'
            )
        return value

    def validate_B(self, value):
        if Mat2Int.from_rows(value).det not in (1, -1):
            raise serializers.ValidationError('B must be unimodular')
        return value

    def validate(self, attrs):
        attrs = super().validate(attrs)
        limit = epsilon_limit(Mat2Int.from_rows(attrs['B']),
                              attrs['direction'])
        if attrs['epsilon'] >= limit:
            raise _field_error(
                'epsilon',
                f'Ensure this value is less than {limit:.6g} for '
                f'direction {list(attrs["direction"])}',
            )
        try:
            bump = BumpProfile(
                kind=attrs['kind'],
                epsilon=attrs['epsilon'],
                d=attrs['d'],
                delta=attrs['delta'],
            )
            attrs['params'] = PerturbedMapParams(
                B=Mat2Int.from_rows(attrs['B']),
                bump=bump,
                direction=tuple(attrs['direction']),
            )
        except ValueError as error:
            raise serializers.ValidationError(str(error))
        return attrs


class SkewConfigSerializer(MapConfigSerializer):
    """Map parameters plus the fiber rank k and the rotation omega"""
    k = serializers.IntegerField(
        min_value=MIN_RANK, max_value=MAX_RANK, required=False,
        allow_null=True, default=None,
    )
    omega = serializers.ListField(child=CoefficientField(), required=False)
    start = serializers.ListField(
        child=serializers.FloatField(), min_length=4, max_length=4,
        default=DEFAULT_START,
    )
    fiber = serializers.ListField(child=serializers.FloatField(),
                                  required=False)

    def validate(self, attrs):
        attrs = super().validate(attrs)
        k = attrs.get('k')
        if k is None:
            for name in ('omega', 'fiber'):
                if attrs.get(name):
                    raise _field_error(name, 'Only meaningful with k')
            attrs['skew'] = None
            return attrs
        if 'fiber' in attrs and len(attrs['fiber']) != k:
            raise _field_error('fiber', f'Expected {k} coordinates')
        omega = attrs.get('omega') or [0] * (k - 2)
        if len(omega) != k - 2:
            raise _field_error('omega', f'Expected {k - 2} coordinates')
        attrs['skew'] = rotate(SkewParams.standard(k, attrs['params']), omega)
        return attrs


class BundleConfigSerializer(RunConfigSerializer):
    """A fiber automorphism A, a base action F and the map H"""
    A = serializers.JSONField(default='B2')
    k = serializers.IntegerField(min_value=1, default=2)
    m = serializers.IntegerField(min_value=1, default=KUMMER_RANK)
    H = serializers.ListField(
        child=serializers.ListField(child=serializers.IntegerField()),
        required=False,
    )
    F = serializers.ListField(
        child=serializers.ListField(child=serializers.IntegerField()),
        required=False,
    )

    def _automorphism(self, value, k):
        if value == 'I':
            return IntMat.identity(k)
        if value == 'B2':
            square = IntMat.coerce(DEFAULT_B.squared())
            if k < 2:
                raise _field_error('A', 'B2 needs k >= 2')
            return square if k == 2 \
                else IntMat.diag(square, IntMat.identity(k - 2))
        try:
            return require_unimodular(IntMat(value), k)
        except (TypeError, ValueError) as error:
            raise _field_error('A', error)

    def _matrix(self, name, rows, shape):
        try:
            matrix = IntMat(rows)
        except (TypeError, ValueError) as error:
            raise _field_error(name, error)
        if matrix.shape != shape:
            raise _field_error(
                name, f'Expected shape {shape}, got {matrix.shape}'
            )
        return matrix

    def validate(self, attrs):
        attrs = super().validate(attrs)
        k, m = attrs['k'], attrs['m']
        A = self._automorphism(attrs['A'], k)
        if ('H' in attrs) != ('F' in attrs):
            missing = 'F' if 'H' in attrs else 'H'
            raise _field_error(missing, 'H and F must be given together')
        if 'H' in attrs:
            H = self._matrix('H', attrs['H'], (k, m))
            F = self._matrix('F', attrs['F'], (m, m))
            try:
                require_unimodular(F, m)
            except ValueError as error:
                raise _field_error('F', error)
        else:
            if m != KUMMER_RANK:
                raise _field_error(
                    'm', f'The Kummer configuration has m = {KUMMER_RANK}'
                )
            try:
                _, H, F = kummer_configuration(k)
            except ValueError as error:
                raise _field_error('k', error)
        attrs['matrices'] = (A, H, F)
        return attrs


class SimulateConfigSerializer(SkewConfigSerializer):
    steps = serializers.IntegerField(min_value=1, default=1000)


class LyapunovConfigSerializer(SkewConfigSerializer):
    iters = serializers.IntegerField(min_value=MIN_ITERS, default=10 ** 5)
    transient = serializers.IntegerField(min_value=0, default=0)

    def validate(self, attrs):
        attrs = super().validate(attrs)
        if attrs['skew'] is not None and attrs['iters'] < MIN_SKEW_ITERS:
            raise _field_error(
                'iters', f'The skew product needs at least {MIN_SKEW_ITERS}'
            )
        return attrs


class MetricConfigSerializer(RunConfigSerializer):
    mu = serializers.FloatField(default=1.5)
    samples = serializers.IntegerField(min_value=1, default=10 ** 4)

    def validate_mu(self, value):
        if value <= 1:
            raise serializers.ValidationError('mu must exceed 1')
        return value


class PinchingConfigSerializer(MapConfigSerializer):
    samples = serializers.IntegerField(min_value=1, default=10 ** 4)
    scales = serializers.ListField(
        child=serializers.IntegerField(min_value=1), min_length=1,
        default=list(DEFAULT_SCALES),
    )
    horizons = serializers.ListField(
        child=serializers.IntegerField(min_value=1), min_length=1,
        default=list(DEFAULT_HORIZONS),
    )
    k = serializers.IntegerField(min_value=MIN_RANK, max_value=MAX_RANK,
                                 default=MIN_RANK)


class ErgodicityConfigSerializer(SkewConfigSerializer):
    k = serializers.IntegerField(min_value=MIN_RANK + 1, max_value=MAX_RANK,
                                 default=4)
    characters = serializers.ListField(
        child=serializers.ListField(child=serializers.IntegerField()),
        required=False,
    )
    n = serializers.IntegerField(min_value=MIN_STEPS, default=10 ** 6)

    def validate(self, attrs):
        attrs = super().validate(attrs)
        rank = attrs['k'] - 2
        characters = attrs.get('characters') or default_characters(rank)
        for m in characters:
            if len(m) != rank:
                raise _field_error(
                    'characters', f'Character {m} needs {rank} coordinates'
                )
        attrs['characters'] = characters
        return attrs


class AcceptanceConfigSerializer(RunConfigSerializer):
    quick = serializers.BooleanField(default=False)
