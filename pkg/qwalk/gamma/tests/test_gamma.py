"""Tests for Gamma_{X,Y}, theta-representations and walk moments."""

import numpy as np
import pytest

from qwalk.errors import GroupError, ResourceCapExceeded
from qwalk.gamma import (
    GammaContext,
    GeneratorLetter,
    SemidirectElt,
    embed_generator,
    faithfulness_probe,
    rep_pi_k,
    scalar_spread,
    semidirect_inverse,
    semidirect_mul,
    t_word,
    theta,
    theta_table,
    verify_model_rep,
    walk_moment,
    word_product,
)
from qwalk.groups import AbelianGroup
from qwalk.hadamard import PhaseMatrix, generic_q
from qwalk.models import deform, fourier_model

Z2 = AbelianGroup.cyclic(2)
Z3 = AbelianGroup.cyclic(3)


def c3_closed_form(M: int, N: int) -> int:
    return N * N + 3 * (M - 1) * N + (M - 1) * (M - 2)


def random_element(ctx: GammaContext, rng: np.random.Generator) -> SemidirectElt:
    vec = rng.integers(-5, 6, size=ctx.vec_shape)
    return SemidirectElt(ctx, tuple(vec.ravel().tolist()), int(rng.integers(ctx.y.size)))


@pytest.fixture
def ctx23():
    return GammaContext(Z2, Z3)


@pytest.fixture
def generic_z3z3():
    return generic_q(Z3, Z3, seed=11)


class TestSemidirect:
    """Group law of Z^{(M-1)N} x| Y."""

    def test_associativity(self, ctx23):
        """Test (gh)k = g(hk) on 1000 random triples."""
        rng = np.random.default_rng(0)
        for _ in range(1000):
            g, h, k = (random_element(ctx23, rng) for _ in range(3))
            assert (g * h) * k == g * (h * k)

    def test_inverse(self, ctx23):
        """Test g g^-1 = g^-1 g = 1."""
        rng = np.random.default_rng(1)
        for _ in range(200):
            g = random_element(ctx23, rng)
            inv = semidirect_inverse(g)
            assert (g * inv).is_identity
            assert (inv * g).is_identity

    def test_identity(self, ctx23):
        """Test that the identity is neutral."""
        g = random_element(ctx23, np.random.default_rng(2))
        assert ctx23.identity() * g == g
        assert g * ctx23.identity() == g

    def test_copies_embed_as_groups(self):
        """Test c^(i) d^(i) = (c + d)^(i) for every copy of Y."""
        ctx = GammaContext(Z3, Z3)
        add = Z3.add_table()
        for i in range(3):
            for c in range(3):
                for d in range(3):
                    lhs = semidirect_mul(
                        embed_generator(ctx, GeneratorLetter(i, c)),
                        embed_generator(ctx, GeneratorLetter(i, d)),
                    )
                    assert lhs == embed_generator(ctx, GeneratorLetter(i, int(add[c, d])))

    def test_zero_letters_are_trivial(self, ctx23):
        """Test that 0^(i) embeds as the identity."""
        for i in range(2):
            assert embed_generator(ctx23, GeneratorLetter(i, 0)).is_identity

    def test_zero_sum_words_commute(self):
        """Test that T-words lie in the abelian normal subgroup."""
        ctx = GammaContext(Z3, Z3)
        rng = np.random.default_rng(3)
        for _ in range(50):
            g = word_product(ctx, t_word(ctx, rng.integers(-3, 4, size=(2, 2))))
            h = word_product(ctx, t_word(ctx, rng.integers(-3, 4, size=(2, 2))))
            assert g.y == 0 and h.y == 0
            assert g * h == h * g

    def test_nonzero_t_word_is_nontrivial(self, ctx23):
        """Test that a nonzero exponent array gives a nontrivial element."""
        assert not word_product(ctx23, t_word(ctx23, [[1, 0]])).is_identity
        assert word_product(ctx23, t_word(ctx23, [[0, 0]])).is_identity

    def test_t_word_shape(self, ctx23):
        """Test that a wrong exponent shape raises."""
        with pytest.raises(GroupError):
            t_word(ctx23, [[1, 0, 0]])

    def test_letter_out_of_range(self, ctx23):
        """Test that a letter outside X x Y raises."""
        with pytest.raises(GroupError):
            embed_generator(ctx23, GeneratorLetter(2, 0))

    def test_context_mismatch(self, ctx23):
        """Test that multiplying across contexts raises."""
        other = GammaContext(Z3, Z2)
        with pytest.raises(GroupError):
            semidirect_mul(ctx23.identity(), other.identity())


class TestWalkMoment:
    """Exact moments by enumeration."""

    @pytest.mark.parametrize("method", ["multiset", "group"])
    def test_first_moment(self, method):
        """Test c_1 = 1."""
        assert walk_moment(Z2, Z3, 1, method).value == pytest.approx(1.0)

    @pytest.mark.parametrize("M", [2, 3, 4, 5])
    @pytest.mark.parametrize("N", [2, 3, 4, 5])
    def test_second_moment(self, M, N):
        """Test c_2 = M + N - 1."""
        report = walk_moment(AbelianGroup.cyclic(M), AbelianGroup.cyclic(N), 2)
        assert report.exact == M + N - 1

    @pytest.mark.parametrize("M,N", [(2, 2), (2, 3), (3, 2), (3, 3)])
    def test_methods_agree(self, M, N):
        """Test that both counts give the same moment, counts related by N."""
        X, Y = AbelianGroup.cyclic(M), AbelianGroup.cyclic(N)
        for p in (2, 3):
            multiset = walk_moment(X, Y, p, "multiset")
            group = walk_moment(X, Y, p, "group")
            assert multiset.exact == group.exact
            assert multiset.count == N * group.count

    @pytest.mark.parametrize("M,N", [(2, 2), (2, 3), (3, 2), (3, 3), (2, 4)])
    def test_third_moment_closed_form(self, M, N):
        """Test c_3 against N^2 + 3(M-1)N + (M-1)(M-2)."""
        report = walk_moment(AbelianGroup.cyclic(M), AbelianGroup.cyclic(N), 3, "group")
        assert report.exact == c3_closed_form(M, N)

    def test_z2_z2_third_moment(self):
        """Test c_3 = 10 on Z2, Z2."""
        assert walk_moment(Z2, Z2, 3).exact == 10

    def test_symmetry_in_x_and_y(self):
        """Test that swapping X and Y keeps c_3."""
        assert walk_moment(Z2, Z3, 3).exact == walk_moment(Z3, Z2, 3).exact

    def test_non_cyclic_group(self):
        """Test c_2 on Z2 x Z2 against Z4."""
        V4 = AbelianGroup((2, 2))
        Z4 = AbelianGroup.cyclic(4)
        assert walk_moment(V4, Z2, 2).exact == walk_moment(Z4, Z2, 2).exact == 5

    def test_threads_do_not_change_result(self):
        """Test that a chunked threaded count matches the serial count."""
        serial = walk_moment(Z3, Z3, 6, "multiset", threads=1)
        threaded = walk_moment(Z3, Z3, 6, "multiset", threads=4)
        assert serial.count == threaded.count

    def test_cap(self):
        """Test that (MN)^p above the cap raises."""
        with pytest.raises(ResourceCapExceeded):
            walk_moment(Z3, Z3, 4, cap=100)

    def test_unknown_method(self):
        """Test that an unknown method raises ValueError."""
        with pytest.raises(ValueError):
            walk_moment(Z2, Z2, 2, "bogus")


class TestTheta:
    """theta values and the representations pi^k."""

    def test_ones_gives_trivial_theta(self):
        """Test theta = 1 for Q = 1."""
        assert np.allclose(theta_table(PhaseMatrix.ones(Z3, Z3)), 1.0)

    def test_theta_trivial_at_k_or_c_zero(self, generic_z3z3):
        """Test theta_{i0}^{ke} = theta_{ic}^{0e} = 1."""
        table = theta_table(generic_z3z3)
        assert np.allclose(table[:, 0, :, :], 1.0)
        assert np.allclose(table[:, :, 0, :], 1.0)

    def test_scalar_matches_table(self, generic_z3z3):
        """Test theta() against theta_table()."""
        table = theta_table(generic_z3z3)
        assert theta(generic_z3z3, 1, 2, 2, 1) == pytest.approx(table[1, 2, 2, 1])
        assert theta(generic_z3z3, (2,), (1,), (1,), (0,)) == pytest.approx(table[2, 1, 1, 0])

    def test_z2_value(self):
        """Test theta_{11}^{10} = Q_11 for dephased Q over Z2, Z2."""
        Q = PhaseMatrix.from_angles(Z2, Z2, [[0, 0], [0, 0.13]])
        assert theta(Q, 1, 1, 1, 0) == pytest.approx(Q[1, 1])

    def test_images_are_unitary(self, generic_z3z3):
        """Test that pi^k of a random word is unitary."""
        rng = np.random.default_rng(4)
        word = [GeneratorLetter(int(i), int(c)) for i, c in rng.integers(0, 3, size=(12, 2))]
        for k in range(3):
            image = rep_pi_k(generic_z3z3, k, word)
            assert np.allclose(image @ image.conj().T, np.eye(3), atol=1e-12)

    def test_copies_respected(self, generic_z3z3):
        """Test pi^k(c^(i) d^(i)) = pi^k((c + d)^(i))."""
        for k in range(3):
            lhs = rep_pi_k(generic_z3z3, k, [GeneratorLetter(1, 1), GeneratorLetter(1, 2)])
            rhs = rep_pi_k(generic_z3z3, k, [GeneratorLetter(1, 0)])
            assert np.allclose(lhs, rhs, atol=1e-12)

    def test_t_words_are_diagonal(self, generic_z3z3):
        """Test that zero-sum words have diagonal images."""
        ctx = GammaContext(Z3, Z3)
        word = t_word(ctx, [[1, -2], [0, 3]])
        for k in range(3):
            image = rep_pi_k(generic_z3z3, k, word)
            assert np.allclose(image, np.diag(np.diag(image)), atol=1e-12)

    def test_z2_t_word_diagonal(self):
        """Test pi^1 of ((-1)^(0) 1^(1)) = diag(q^2, q^-2) over Z2, Z2."""
        Q = PhaseMatrix.from_angles(Z2, Z2, [[0, 0], [0, 0.07]])
        q = Q[1, 1]
        image = rep_pi_k(Q, 1, t_word(GammaContext(Z2, Z2), [[1]]))
        assert np.allclose(np.diag(image), [q ** 2, q ** -2], atol=1e-12)
        assert scalar_spread(image) == pytest.approx(abs(q ** 2 - q ** -2))


class TestFaithfulnessProbe:
    """Sampled detection of nontrivial T-words."""

    @pytest.mark.parametrize("X,Y", [(Z2, Z2), (Z2, Z3), (Z3, Z3)])
    def test_generic_q_detects_all(self, X, Y):
        """Test that 100 sampled words are all detected at generic Q."""
        report = faithfulness_probe(generic_q(X, Y, seed=5), n_words=100, seed=0)
        assert report.passed
        assert report.detected == 100
        assert report.min_spread > 1e-9
        assert report.max_offdiagonal < 1e-12

    def test_ones_detects_nothing(self):
        """Test that Q = 1 is not faithful on T-words."""
        report = faithfulness_probe(PhaseMatrix.ones(Z2, Z3), n_words=20, seed=0)
        assert not report.passed
        assert report.detected == 0

    @pytest.mark.parametrize("X,Y", [(AbelianGroup.cyclic(1), Z3), (Z3, AbelianGroup.cyclic(1))])
    def test_trivial_t_passes_vacuously(self, X, Y):
        """Test that a trivial T gives a vacuous pass instead of sampling the empty word."""
        report = faithfulness_probe(generic_q(X, Y, seed=1), n_words=5)
        assert report.passed
        assert report.n_words == 0
        assert report.detected == 0
        assert report.undetected == []

    def test_seed_reproducible(self):
        """Test that the same seed reproduces the report."""
        Q = generic_q(Z2, Z3, seed=5)
        a = faithfulness_probe(Q, n_words=10, seed=3)
        b = faithfulness_probe(Q, n_words=10, seed=3)
        assert a.min_spread == b.min_spread


class TestModelRepresentation:
    """pi(c^(i)) acting on eps_ke inside the deformed Fourier model."""

    @pytest.mark.parametrize("X,Y", [(Z2, Z2), (Z3, Z3), (Z2, Z3)])
    def test_action_matches_theta(self, X, Y):
        """Test pi(c^(i)) eps_ke = theta eps_{k,e-c}."""
        Q = generic_q(X, Y, seed=9)
        W = deform(fourier_model(X), fourier_model(Y), Q, "right")
        report = verify_model_rep(W, Q)
        assert report.passed, report.worst_case
        assert report.max_deviation < 1e-9

    def test_conjugated_theta_fails(self):
        """Test that a wrong theta convention is caught."""
        Q = generic_q(Z3, Z3, seed=9)
        W = deform(fourier_model(Z3), fourier_model(Z3), Q, "right")
        report = verify_model_rep(W, Q, theta_fn=lambda q: np.conj(theta_table(q)))
        assert not report.passed
