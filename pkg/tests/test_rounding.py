"""Tests for rounding, digits, the marker encoding and finite classes."""

from fractions import Fraction

import pytest

from uniqset.errors import ClassTooLarge, NegativeComponent, NegativeInput, NonTerminatingExpansion
from uniqset.exactnum import ZERO, GaussianRational
from uniqset.rounding import (
    ClassKind,
    ClassSpec,
    EncodingSpec,
    RoundingSpec,
    approximate_into_class,
    class_cardinality,
    conforms_to_encoding,
    digit,
    encode_signal,
    enumerate_class,
    floor_toward_zero,
    is_member,
    round_real,
    round_signal,
    zeta_encode,
)
from uniqset.signal import Signal
from uniqset.spectral import ModulationSpec


class TestRounding:
    """Tests for truncation rounding."""

    def test_truncates_toward_zero(self) -> None:
        """Test rounding truncates toward zero."""
        spec = RoundingSpec(2, 2)
        assert round_real(spec, Fraction(7, 10)) == Fraction(1, 2)
        assert round_real(spec, Fraction(-7, 10)) == Fraction(-1, 2)

    def test_floor_for_negative_integers(self) -> None:
        """Test the floor keeps negative integers."""
        assert floor_toward_zero(Fraction(-3)) == -3
        assert floor_toward_zero(Fraction(-5, 2)) == -2

    def test_grid_points_are_fixed(self) -> None:
        """Test grid points are fixed by rounding."""
        spec = RoundingSpec(3, 2)
        x = Signal.of(["4/9", "-2/3", 1])
        assert round_signal(spec, x) == x

    def test_invalid_spec(self) -> None:
        """Test invalid bases and depths are rejected."""
        with pytest.raises(ValueError, match="nu"):
            RoundingSpec(1, 0)
        with pytest.raises(ValueError, match="mu"):
            RoundingSpec(2, -1)


class TestDigits:
    """Tests for base-ν digit extraction."""

    def test_marker_digits_of_sparse_sum(self) -> None:
        """Test the digits of the worked sum."""
        total = Fraction(53, 64)
        assert [digit(2, k, total) for k in range(3, 7)] == [0, 1, 0, 1]

    def test_negative_input(self) -> None:
        """Test digits of negatives are refused."""
        with pytest.raises(NegativeInput):
            digit(2, 1, Fraction(-1, 2))

    def test_non_terminating(self) -> None:
        """Test non-terminating expansions are refused."""
        with pytest.raises(NonTerminatingExpansion):
            digit(2, 1, Fraction(1, 3))

    def test_base_ten(self) -> None:
        """Test digits in base ten."""
        assert digit(10, 2, Fraction(125, 1000)) == 2


class TestEncoding:
    """Tests for the marker encoding."""

    def test_real_components(self, sparse_encoding: EncodingSpec) -> None:
        """Test real components get their markers."""
        assert zeta_encode(sparse_encoding, 1, GaussianRational.of("3/5")) == GaussianRational.of(
            "9/16"
        )
        assert zeta_encode(sparse_encoding, 3, GaussianRational.of("3/10")) == GaussianRational.of(
            "17/64"
        )

    def test_imaginary_part_gets_marker(self, sparse_encoding: EncodingSpec) -> None:
        """Test a nonzero imaginary part gets a marker."""
        z = zeta_encode(sparse_encoding, 0, GaussianRational.of("3/5", "3/10"))
        assert z == GaussianRational.of("5/8", "3/8")

    def test_zero_stays_zero(self, sparse_encoding: EncodingSpec) -> None:
        """Test zero is not marked."""
        assert zeta_encode(sparse_encoding, 2, ZERO) == ZERO

    def test_small_value_keeps_marker(self, sparse_encoding: EncodingSpec) -> None:
        """Test a value below the grid still gets a marker."""
        # rounds to zero but is not zero
        z = zeta_encode(sparse_encoding, 0, GaussianRational.of("1/100"))
        assert z == GaussianRational.of("1/8")

    def test_negative_component(self, sparse_encoding: EncodingSpec) -> None:
        """Test negative parts are refused."""
        with pytest.raises(NegativeComponent):
            zeta_encode(sparse_encoding, 0, GaussianRational.of(-1))

    def test_encoding_is_idempotent(self, sparse_encoding: EncodingSpec) -> None:
        """Test encoding twice changes nothing."""
        x = Signal.of(["3/5", 0, "7/3", "1/9"])
        encoded = encode_signal(sparse_encoding, x)
        assert encode_signal(sparse_encoding, encoded) == encoded
        assert conforms_to_encoding(sparse_encoding, encoded)
        assert not conforms_to_encoding(sparse_encoding, x)

    def test_full_depth_rounding_keeps_encoded_signal(
        self, sparse_encoding: EncodingSpec, sparse_signal: Signal
    ) -> None:
        """Test rounding at depth M+N keeps encoded signals."""
        spec = RoundingSpec(2, sparse_encoding.full_depth)
        assert round_signal(spec, sparse_signal) == sparse_signal


class TestClasses:
    """Tests for class membership, counting and enumeration."""

    def test_binary_class(self, binary_class: ClassSpec) -> None:
        """Test the binary class members."""
        members = list(enumerate_class(binary_class))
        assert class_cardinality(binary_class) == 4
        assert members == [Signal.of(v) for v in ([0, 0], [0, 1], [1, 0], [1, 1])]

    def test_sparsity_cap(self, binary_class: ClassSpec) -> None:
        """Test the sparsity cap."""
        spec = ClassSpec(ClassKind.PLAIN, binary_class.rounding, 2, Fraction(1), 1, real_only=True)
        assert class_cardinality(spec) == 3
        assert Signal.of([1, 1]) not in list(enumerate_class(spec))
        assert not is_member(spec, Signal.of([1, 1]))

    def test_signed_class(self) -> None:
        """Test signed classes."""
        spec = ClassSpec(
            ClassKind.PLAIN, RoundingSpec(2, 0), 2, Fraction(1), signed=True, real_only=True
        )
        assert class_cardinality(spec) == 9

    def test_complex_class_count(self, half_grid_class: ClassSpec) -> None:
        """Test the complex class cardinality."""
        assert class_cardinality(half_grid_class) == 16
        assert len(list(enumerate_class(half_grid_class))) == 16

    def test_encoded_class(self) -> None:
        """Test encoded class members."""
        spec = ClassSpec(ClassKind.ENCODED, EncodingSpec(2, 0, 2), 2, Fraction(1), real_only=True)
        members = list(enumerate_class(spec))
        assert class_cardinality(spec) == 4
        assert Signal.of(["1/2", "1/4"]) in members
        assert all(conforms_to_encoding(EncodingSpec(2, 0, 2), x) for x in members)

    def test_limit(self, half_grid_class: ClassSpec) -> None:
        """Test the member limit."""
        with pytest.raises(ClassTooLarge) as exc_info:
            enumerate_class(half_grid_class, limit=10)
        assert exc_info.value.cardinality == 16

    def test_membership_length(self, binary_class: ClassSpec) -> None:
        """Test membership checks the length."""
        with pytest.raises(ValueError, match="length"):
            is_member(binary_class, Signal.of([0, 0, 0]))

    def test_difference_class(self, binary_class: ClassSpec) -> None:
        """Test the difference class of a plain class."""
        diff = binary_class.difference_class()
        assert diff is not None
        assert diff.signed
        assert diff.bound == 1
        signed_diff = diff.difference_class()
        assert signed_diff is not None
        assert signed_diff.bound == 2

    def test_difference_class_sparsity(self) -> None:
        """Test the difference class doubles the sparsity."""
        spec = ClassSpec(ClassKind.PLAIN, RoundingSpec(2, 0), 4, Fraction(1), 1)
        diff = spec.difference_class()
        assert diff is not None
        assert diff.sparsity == 2

    def test_encoded_class_has_no_difference_class(self) -> None:
        """Test encoded classes have no difference class."""
        spec = ClassSpec(ClassKind.ENCODED, EncodingSpec(2, 0, 2), 2, Fraction(1))
        assert not spec.closed_under_subtraction
        assert spec.difference_class() is None

    def test_invalid_class(self) -> None:
        """Test invalid class specs are rejected."""
        with pytest.raises(ValueError, match="bound"):
            ClassSpec(ClassKind.PLAIN, RoundingSpec(2, 0), 2, Fraction(0))
        with pytest.raises(ValueError, match="EncodingSpec"):
            ClassSpec(ClassKind.ENCODED, RoundingSpec(2, 0), 2, Fraction(1))


class TestApproximation:
    """Tests for nearest-below class approximation."""

    def test_plain_class(self) -> None:
        """Parts are clipped to the bound, then truncated onto the grid."""
        spec = ClassSpec(ClassKind.PLAIN, RoundingSpec(2, 1), 2, Fraction(1), real_only=True)
        approx = approximate_into_class(spec, Signal.of(["7/10", "7/5"]))
        assert approx.member == Signal.of(["1/2", 1])
        assert approx.distance == Fraction(2, 5)
        assert approx.modulation is None
        assert is_member(spec, approx.member)

    def test_encoded_class(self, sparse_encoding: EncodingSpec) -> None:
        """Test an out-of-range part is pulled below the bound before the marker is added."""
        spec = ClassSpec(ClassKind.ENCODED, sparse_encoding, 4, Fraction(1))
        member = approximate_into_class(spec, Signal.of([0, "3/5", 0, 5])).member
        assert is_member(spec, member)
        assert member.support() == (1, 3)
        assert member[3] == GaussianRational.of(Fraction(3, 4) + Fraction(1, 64))

    def test_encoded_matches_encoding_in_range(self, sparse_encoding: EncodingSpec) -> None:
        """Test in-range signals are simply encoded."""
        spec = ClassSpec(ClassKind.ENCODED, sparse_encoding, 4, Fraction(1))
        x = Signal.of([0, "3/5", 0, "3/10"])
        assert approximate_into_class(spec, x).member == encode_signal(sparse_encoding, x)

    def test_modulation_keeps_distance(self, modulation: ModulationSpec) -> None:
        """Unit-modulus factors leave the member and its distance unchanged."""
        spec = ClassSpec(ClassKind.ENCODED, EncodingSpec(2, 2, 2), 2, Fraction(1))
        x = Signal.of(["3/5", "1/3"])
        plain = approximate_into_class(spec, x)
        modulated = approximate_into_class(spec, x, modulation)
        assert modulated.modulation is modulation
        assert modulated.member == plain.member
        assert modulated.distance == plain.distance

    def test_modulation_length_mismatch(
        self, sparse_encoding: EncodingSpec, modulation: ModulationSpec
    ) -> None:
        """Test the modulation length must match the class."""
        spec = ClassSpec(ClassKind.ENCODED, sparse_encoding, 4, Fraction(1))
        with pytest.raises(ValueError, match="modulation length"):
            approximate_into_class(spec, Signal.of([0, 0, 0, 0]), modulation)

    def test_signal_length_mismatch(self, sparse_encoding: EncodingSpec) -> None:
        """Test the signal length must match the class."""
        spec = ClassSpec(ClassKind.ENCODED, sparse_encoding, 4, Fraction(1))
        with pytest.raises(ValueError, match="class length"):
            approximate_into_class(spec, Signal.of([0, 0]))
