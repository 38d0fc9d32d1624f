"""Tests for finite abelian groups and Fourier matrices."""

import numpy as np
import pytest

from qwalk.errors import GroupError
from qwalk.groups import AbelianGroup, GroupElt, fourier_matrix, group_arithmetic


class TestAbelianGroup:
    """Element arithmetic and canonical enumeration."""

    def test_parse_descriptor(self):
        """Test that descriptors parse into cyclic orders."""
        assert AbelianGroup.parse("Z2xZ3").orders == (2, 3)
        assert AbelianGroup.parse("Z5").size == 5
        assert AbelianGroup.parse("z2XZ2").label == "Z2xZ2"

    @pytest.mark.parametrize("bad", ["", "Z", "Z0", "Z2x", "2xZ3", "Z2*Z3"])
    def test_parse_rejects_malformed(self, bad):
        """Test that malformed descriptors raise GroupError."""
        with pytest.raises(GroupError):
            AbelianGroup.parse(bad)

    def test_modular_addition(self):
        """Test Z4: 3 + 2 = 1."""
        Z4 = AbelianGroup.cyclic(4)
        assert group_arithmetic(Z4, "add", (3,), (2,)) == GroupElt((1,))

    def test_componentwise_negation(self):
        """Test Z2xZ3: -(1,2) = (1,1)."""
        X = AbelianGroup((2, 3))
        assert group_arithmetic(X, "negate", (1, 2)) == GroupElt((1, 1))

    def test_enumeration_order(self):
        """Test that the first factor is most significant."""
        X = AbelianGroup((2, 2))
        listed = group_arithmetic(X, "enumerate")
        assert [g.residues for g in listed] == [(0, 0), (0, 1), (1, 0), (1, 1)]
        assert listed[0] == X.zero()

    def test_index_roundtrip_is_bijective(self):
        """Test that index and element are mutual inverses."""
        X = AbelianGroup((2, 3, 4))
        indices = [X.index(g) for g in X.elements()]
        assert indices == list(range(X.size))

    def test_arity_mismatch(self):
        """Test that elements of the wrong arity are rejected."""
        X = AbelianGroup((2, 3))
        with pytest.raises(GroupError):
            X.add((1,), (1, 1))

    def test_tables_match_elementwise_arithmetic(self):
        """Test the add/neg/sub lookup tables."""
        X = AbelianGroup((3, 2))
        add, neg, sub = X.add_table(), X.neg_table(), X.sub_table()
        for x in range(X.size):
            assert neg[x] == X.index(X.negate(x))
            for y in range(X.size):
                assert add[x, y] == X.index(X.add(x, y))
                assert sub[x, y] == X.index(X.sub(x, y))

    def test_tables_are_read_only(self):
        """Test that shared tables cannot be mutated."""
        X = AbelianGroup((4,))
        with pytest.raises(ValueError):
            X.add_table()[0, 0] = 3


class TestFourierMatrix:
    """Fourier matrix values and character identities."""

    def test_trivial_group(self):
        """Test Z1 gives [1]."""
        assert np.allclose(fourier_matrix(AbelianGroup((1,))), [[1.0]])

    def test_z2(self):
        """Test F_2 = [[1,1],[1,-1]]."""
        assert np.allclose(fourier_matrix(AbelianGroup((2,))), [[1, 1], [1, -1]], atol=1e-12)

    def test_kronecker_structure(self):
        """Test F_{Z2xZ3} equals kron(F_2, F_3)."""
        F2 = fourier_matrix(AbelianGroup((2,)))
        F3 = fourier_matrix(AbelianGroup((3,)))
        assert np.allclose(fourier_matrix(AbelianGroup((2, 3))), np.kron(F2, F3), atol=1e-12)

    @pytest.mark.parametrize("orders", [(2,), (5,), (2, 2), (2, 3), (4, 2)])
    def test_character_identities(self, orders):
        """Test F_{x+y,z} = F_{xz} F_{yz} and F_{-x,y} = conj F_{xy}."""
        X = AbelianGroup(orders)
        F = fourier_matrix(X)
        add, neg = X.add_table(), X.neg_table()
        for x in range(X.size):
            assert np.allclose(F[neg[x]], np.conj(F[x]), atol=1e-12)
            for y in range(X.size):
                assert np.allclose(F[add[x, y]], F[x] * F[y], atol=1e-12)
                assert np.allclose(F[:, add[x, y]], F[:, x] * F[:, y], atol=1e-12)

    @pytest.mark.parametrize("orders", [(3,), (4,), (2, 2), (3, 3)])
    def test_hadamard_property(self, orders):
        """Test F F* = |X| I."""
        X = AbelianGroup(orders)
        F = fourier_matrix(X)
        assert np.allclose(F @ F.conj().T, X.size * np.eye(X.size), atol=1e-9)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
