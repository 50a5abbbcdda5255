#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "boundkey/json_io.hpp"
#include "boundkey/private_key.hpp"
#include "boundkey/protocol.hpp"
#include "boundkey/random.hpp"
#include "boundkey/states.hpp"
#include "fixtures.hpp"

using namespace boundkey;
using boundkey::testing::max_abs_diff;

namespace {

// eta = p |0111><0111| + (1-p) |1000><1000| on key [2,2] + shield [2,2].
KeyShieldState eta_example(double p) {
  CMatrix m = CMatrix::Zero(16, 16);
  m(0b0111, 0b0111) = p;
  m(0b1000, 0b1000) = 1.0 - p;
  return KeyShieldState(MultipartiteOperator({2, 2, 2, 2}, m));
}

KeyShieldState basic_pdit(int d, const CMatrix& sigma,
                          std::pair<int, int> shield_dims) {
  std::vector<CMatrix> ids(d, CMatrix::Identity(sigma.rows(), sigma.rows()));
  return make_pdit(ProductBasis::standard(d), shield_dims, sigma, ids).assemble();
}

double eve_distance(const CMatrix& a, const CMatrix& b) {
  return 0.5 * hermitian_eigenvalues(a - b).cwiseAbs().sum();
}

// p_ij via the key marginal, the route independent of the purification.
RMatrix distribution_from_marginal(const KeyShieldState& state,
                                   const ProductBasis& basis) {
  const MultipartiteOperator key = partial_trace(state.rho(), {2, 3});
  RMatrix p(basis.d, basis.d);
  for (int i = 0; i < basis.d; ++i)
    for (int j = 0; j < basis.d; ++j) {
      const CVector ket = basis.key_ket(i, j);
      p(i, j) = (ket.adjoint() * key.matrix() * ket)(0, 0).real();
    }
  return p;
}

}  // namespace

TEST_CASE("purify a pure state") {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  const Purification pur = purify(MultipartiteOperator({2}, m));
  CHECK(pur.eve_dim == 1);
  CHECK(std::abs(pur.psi(0)) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("purify the maximally mixed qubit") {
  const Purification pur =
      purify(MultipartiteOperator({2}, CMatrix::Identity(2, 2) / 2.0));
  CHECK(pur.eve_dim == 2);
  // Marginals of a maximally entangled pure state are maximally mixed.
  Eigen::Map<const CMatrix> psi(pur.psi.data(), 2, 2);
  const CMatrix eve_marginal = psi.adjoint() * psi;
  CHECK(max_abs_diff(eve_marginal, CMatrix(CMatrix::Identity(2, 2) / 2.0)) <
        1e-12);
}

TEST_CASE("purify the two-outcome example state") {
  for (double p : {0.3, 0.9}) {
    CAPTURE(p);
    const KeyShieldState eta = eta_example(p);
    const Purification pur = purify(eta.rho());
    CHECK(pur.eve_dim == 2);
    // Up to Eve-local phases the state is sqrt(p)|0111>|e0> +
    // sqrt(1-p)|1000>|e1>, with the larger branch listed first.
    const double hi = std::max(p, 1.0 - p), lo = std::min(p, 1.0 - p);
    const Eigen::Index hi_sys = p >= 0.5 ? 0b0111 : 0b1000;
    const Eigen::Index lo_sys = p >= 0.5 ? 0b1000 : 0b0111;
    CHECK(std::abs(pur.psi(hi_sys * 2 + 0)) ==
          doctest::Approx(std::sqrt(hi)).epsilon(1e-12));
    CHECK(std::abs(pur.psi(lo_sys * 2 + 1)) ==
          doctest::Approx(std::sqrt(lo)).epsilon(1e-12));
    // System marginal reproduces the input.
    const MultipartiteOperator full({16, pur.eve_dim},
                                    pur.psi * pur.psi.adjoint());
    CHECK(max_abs_diff(partial_trace(full, {1}).matrix(),
                       eta.rho().matrix()) < 1e-9);
  }
}

TEST_CASE("purify validates its input") {
  CHECK_THROWS_AS(purify(MultipartiteOperator::identity({2})),
                  std::invalid_argument);
  CMatrix m(2, 2);
  m << 1.5, 0, 0, -0.5;
  CHECK_THROWS_AS(purify(MultipartiteOperator({2}, m)), std::invalid_argument);
}

TEST_CASE("ccq of the two-outcome example reads off the key") {
  for (double p : {0.3, 0.5, 0.9}) {
    CAPTURE(p);
    const CcqState c = ccq(eta_example(p), ProductBasis::standard(2));
    CHECK(c.p(0, 1) == doctest::Approx(p).epsilon(1e-12));
    CHECK(c.p(1, 0) == doctest::Approx(1.0 - p).epsilon(1e-12));
    CHECK(c.p(0, 0) <= tol::prob_floor);
    CHECK(c.p(1, 1) <= tol::prob_floor);
    // Eve's conditional states are orthogonal pure states: she reads the key.
    const CMatrix& e01 = c.eve_states[0][1];
    const CMatrix& e10 = c.eve_states[1][0];
    CHECK((e01 * e01).trace().real() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK((e10 * e10).trace().real() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs((e01 * e10).trace()) < 1e-12);
    CHECK(eve_distance(e01, e10) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("ccq of a basic pdit decouples Eve") {
  Rng rng(101);
  const CMatrix sigma = random_density(4, rng);
  const CcqState c = ccq(basic_pdit(2, sigma, {2, 2}), ProductBasis::standard(2));
  CHECK(c.p(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(c.p(1, 1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(c.p(0, 1) <= tol::prob_floor);
  CHECK(eve_distance(c.eve_states[0][0], c.eve_states[1][1]) < 1e-10);
  CHECK(is_secure(c, 1e-9));
}

TEST_CASE("ccq distribution of the PPT state comes from the block traces") {
  const CcqState c = ccq(make_rho(3), ProductBasis::standard(2));
  CHECK(c.p(0, 0) == doctest::Approx(11.0 / 40.0).epsilon(1e-12));
  CHECK(c.p(1, 1) == doctest::Approx(11.0 / 40.0).epsilon(1e-12));
  CHECK(c.p(0, 1) == doctest::Approx(9.0 / 40.0).epsilon(1e-12));
  CHECK(c.p(1, 0) == doctest::Approx(9.0 / 40.0).epsilon(1e-12));
}

TEST_CASE("ccq distribution matches the key-marginal route") {
  Rng rng(102);
  const KeyShieldState rho = make_rho(3);
  const ProductBasis basis = random_product_basis(2, rng);
  const CcqState c = ccq(rho, basis);
  CHECK((c.p - distribution_from_marginal(rho, basis)).cwiseAbs().maxCoeff() <
        1e-10);
  double total = c.p.sum();
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ccq conditional states average to Eve's marginal") {
  const KeyShieldState rho = make_rho(3);
  const Purification pur = purify(rho.rho());
  const CcqState c = ccq_from_purification(pur, ProductBasis::standard(2));
  Eigen::Map<const CMatrix> psi(pur.psi.data(), pur.eve_dim, rho.rho().dim());
  const CMatrix eve_marginal = (psi * psi.adjoint()).conjugate();
  CMatrix mixed = CMatrix::Zero(c.eve_dim, c.eve_dim);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (c.has_eve_state(i, j)) mixed += c.p(i, j) * c.eve_states[i][j];
  CHECK(max_abs_diff(mixed, eve_marginal) < 1e-10);
}

TEST_CASE("the example state is insecure at p = 1/2") {
  const CcqState c = ccq(eta_example(0.5), ProductBasis::standard(2));
  CHECK_FALSE(is_secure(c, 1e-9));
}

TEST_CASE("pdits measured in their own basis are secure") {
  Rng rng(103);
  for (int trial = 0; trial < 5; ++trial) {
    const int d = trial % 2 == 0 ? 2 : 3;
    PrivateState pdit = random_pdit(d, {2, trial % 3 + 1}, rng);
    pdit.basis = random_product_basis(d, rng);
    const CcqState c = ccq(pdit.assemble(), pdit.basis);
    CAPTURE(trial);
    CHECK(is_secure(c, 1e-9));
    for (int i = 0; i < d; ++i)
      CHECK(c.p(i, i) == doctest::Approx(1.0 / d).epsilon(1e-10));
  }
}

TEST_CASE("identity twisting is a no-op") {
  const KeyShieldState rho = make_rho(3);
  Twisting t;
  t.d = 2;
  t.controls.assign(2, std::vector<CMatrix>(2, CMatrix::Identity(9, 9)));
  const KeyShieldState twisted =
      apply_twisting(rho, t, ProductBasis::standard(2));
  CHECK(max_abs_diff(twisted.rho(), rho.rho()) < 1e-14);
}

TEST_CASE("twisting preserves the ccq state") {
  const KeyShieldState rho = make_rho(3);
  const ProductBasis basis = ProductBasis::standard(2);
  const CcqState reference = ccq(rho, basis);
  const Purification pur = purify(rho.rho());

  for (int seed = 0; seed < 20; ++seed) {
    CAPTURE(seed);
    Rng rng(1000 + seed);
    const Twisting t = random_twisting(2, rho.shield_dims(), rng);
    const KeyShieldState twisted = apply_twisting(rho, t, basis);

    // Distributions agree between completely independent purification runs.
    const CcqState independent = ccq(twisted, basis);
    CHECK((independent.p - reference.p).cwiseAbs().maxCoeff() < 1e-10);

    // Eve states agree entrywise along the transported purification. (Eve
    // states of independently computed purifications agree only up to a
    // global Eve unitary, so entrywise comparison needs a common gauge.)
    const MultipartiteOperator u = twisting_unitary(t, basis, rho.shield_dims());
    const CcqState aligned =
        ccq_from_purification(apply_to_purification(u.matrix(), pur), basis);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        REQUIRE(reference.has_eve_state(i, j) == aligned.has_eve_state(i, j));
        if (reference.has_eve_state(i, j))
          CHECK(eve_distance(reference.eve_states[i][j],
                             aligned.eve_states[i][j]) < 1e-9);
      }

    // Unitary-invariant cross-checks on the independent run: pairwise Eve
    // geometry and the one-way rate.
    REQUIRE(independent.eve_dim == reference.eve_dim);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l) {
            if (!reference.has_eve_state(i, j) || !reference.has_eve_state(k, l))
              continue;
            const double da = eve_distance(reference.eve_states[i][j],
                                           reference.eve_states[k][l]);
            const double db = eve_distance(independent.eve_states[i][j],
                                           independent.eve_states[k][l]);
            CHECK(std::abs(da - db) < 1e-9);
          }
    CHECK(std::abs(dw_rate(independent) - dw_rate(reference)) < 1e-9);
  }
}

TEST_CASE("twisting preserves the ccq state of random key-shield states") {
  for (int trial = 0; trial < 6; ++trial) {
    CAPTURE(trial);
    Rng rng(2000 + trial);
    const std::pair<int, int> shield{2, 3};
    const KeyShieldState rho(
        MultipartiteOperator({2, 2, shield.first, shield.second},
                             random_density(4 * shield.first * shield.second, rng)));
    const ProductBasis basis = trial % 2 == 0 ? ProductBasis::standard(2)
                                              : random_product_basis(2, rng);
    const Twisting t = random_twisting(2, shield, rng);

    const CcqState reference = ccq(rho, basis);
    const CcqState independent = ccq(apply_twisting(rho, t, basis), basis);
    CHECK((independent.p - reference.p).cwiseAbs().maxCoeff() < 1e-10);

    const MultipartiteOperator u = twisting_unitary(t, basis, shield);
    const CcqState aligned = ccq_from_purification(
        apply_to_purification(u.matrix(), purify(rho.rho())), basis);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        if (reference.has_eve_state(i, j))
          CHECK(eve_distance(reference.eve_states[i][j],
                             aligned.eve_states[i][j]) < 1e-9);
  }
}

TEST_CASE("the untwisting maps a pdit to its basic form and back") {
  Rng rng(104);
  for (int trial = 0; trial < 5; ++trial) {
    CAPTURE(trial);
    const int d = trial < 3 ? 2 : 3;
    const PrivateState pdit = random_pdit(d, {2, 2}, rng);
    const KeyShieldState gamma = pdit.assemble();
    const KeyShieldState basic =
        apply_twisting(gamma, pdit.untwisting(), pdit.basis);
    CHECK(max_abs_diff(basic.rho(),
                       basic_pdit(d, pdit.sigma, pdit.shield_dims).rho()) <
          1e-10);

    Twisting forward = pdit.untwisting();
    for (int i = 0; i < d; ++i) forward.controls[i][i] = pdit.unitaries[i];
    const KeyShieldState back = apply_twisting(basic, forward, pdit.basis);
    CHECK(max_abs_diff(back.rho(), gamma.rho()) < 1e-10);

    // Off-diagonal controls never touch a pdit: its key support is spanned
    // by the correlated kets alone.
    Twisting scrambled = pdit.untwisting();
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        if (i != j) scrambled.controls[i][j] = random_unitary(4, rng);
    const KeyShieldState basic2 = apply_twisting(gamma, scrambled, pdit.basis);
    CHECK(max_abs_diff(basic2.rho(), basic.rho()) < 1e-10);
  }
}

TEST_CASE("make_pdit with identity controls is the basic pdit") {
  Rng rng(105);
  for (int d : {2, 3}) {
    const CMatrix sigma = random_density(4, rng);
    std::vector<CMatrix> ids(d, CMatrix::Identity(4, 4));
    const KeyShieldState gamma =
        make_pdit(ProductBasis::standard(d), {2, 2}, sigma, ids).assemble();
    CMatrix plus = CMatrix::Zero(d * d, d * d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) plus(i * d + i, j * d + j) = 1.0 / d;
    const auto expected =
        tensor(MultipartiteOperator({d, d}, plus),
               MultipartiteOperator({2, 2}, sigma));
    CHECK(max_abs_diff(gamma.rho().matrix(), expected.matrix()) < 1e-14);
  }
}

TEST_CASE("pdit key marginal is uniform on the diagonal") {
  Rng rng(106);
  PrivateState pdit = random_pdit(3, {2, 2}, rng);
  pdit.basis = random_product_basis(3, rng);
  const KeyShieldState gamma = pdit.assemble();
  CHECK(std::abs(gamma.rho().trace() - Complex(1.0)) < 1e-12);
  CHECK(is_psd(gamma.rho(), 1e-12));
  const MultipartiteOperator key = partial_trace(gamma.rho(), {2, 3});
  for (int i = 0; i < 3; ++i) {
    const CVector ket = pdit.basis.key_ket(i, i);
    const double weight = (ket.adjoint() * key.matrix() * ket)(0, 0).real();
    CHECK(weight == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  }
}

TEST_CASE("pbit key block has trace norm one half") {
  Rng rng(107);
  for (int trial = 0; trial < 6; ++trial) {
    const PrivateState pbit = random_pdit(2, {2, 2}, rng);
    CHECK(key_block_trace_norm(pbit.assemble()) ==
          doctest::Approx(0.5).epsilon(1e-10));
  }
}

TEST_CASE("make_pdit validates its inputs") {
  Rng rng(108);
  const CMatrix sigma = random_density(4, rng);
  const CMatrix u = random_unitary(4, rng);
  const ProductBasis basis = ProductBasis::standard(2);
  CHECK_THROWS_AS(make_pdit(basis, {2, 2}, sigma, {u}), std::invalid_argument);
  CHECK_THROWS_AS(make_pdit(basis, {2, 2}, u, {u, u}), std::invalid_argument);
  CHECK_THROWS_AS(make_pdit(basis, {2, 2}, sigma, {u, 2.0 * u}),
                  std::invalid_argument);
}

TEST_CASE("entropy helpers") {
  CHECK(shannon_entropy({0.5, 0.5}) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(shannon_entropy({1.0, 0.0}) == 0.0);
  CHECK(binary_entropy(0.75) ==
        doctest::Approx(2.0 - 0.75 * std::log2(3.0)).epsilon(1e-13));
  Rng rng(109);
  CHECK(von_neumann_entropy(CMatrix::Identity(4, 4) / 4.0) ==
        doctest::Approx(2.0).epsilon(1e-13));
  CHECK(von_neumann_entropy(random_density(3, rng)) >= 0.0);
}

TEST_CASE("one-way rate of a basic pbit is one bit") {
  Rng rng(110);
  const CcqState c =
      ccq(basic_pdit(2, random_density(4, rng), {2, 2}), ProductBasis::standard(2));
  CHECK(dw_rate(c) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("one-way rate vanishes when Eve reads the key") {
  const CcqState c = ccq(eta_example(0.5), ProductBasis::standard(2));
  CHECK(std::abs(dw_rate(c)) < 1e-10);
}

TEST_CASE("one-way rate of a perfectly correlated decoupled table is log d") {
  Rng rng(111);
  for (int d : {2, 3}) {
    CcqState c;
    c.d = d;
    c.eve_dim = 3;
    c.p = RMatrix::Zero(d, d);
    const CMatrix omega = random_density(3, rng);
    c.eve_states.assign(d, std::vector<CMatrix>(d));
    for (int i = 0; i < d; ++i) {
      c.p(i, i) = 1.0 / d;
      c.eve_states[i][i] = omega;
    }
    CHECK(dw_rate(c) == doctest::Approx(std::log2(d)).epsilon(1e-10));
  }
}

TEST_CASE("biased pbit mixtures beat the binary-entropy bound") {
  Rng rng(112);
  for (int pair = 0; pair < 10; ++pair) {
    CAPTURE(pair);
    const PrivateState g1 = random_pdit(2, {2, 2}, rng);
    const PrivateState g2 = random_pdit(2, {2, 2}, rng);
    for (double p1 : {0.5, 0.75, 1.0}) {
      const KeyShieldState mix = pbit_mixture(g1, g2, p1);
      const double rate = dw_rate(ccq(mix, ProductBasis::standard(2)));
      const double bound = 1.0 - binary_entropy(p1);
      CHECK(rate >= bound - 1e-9);
    }
  }
}

TEST_CASE("the mixture rate is the bound itself for exact pbits") {
  Rng rng(113);
  const PrivateState g1 = random_pdit(2, {2, 2}, rng);
  const PrivateState g2 = random_pdit(2, {2, 2}, rng);
  const double rate =
      dw_rate(ccq(pbit_mixture(g1, g2, 0.75), ProductBasis::standard(2)));
  CHECK(rate == doctest::Approx(1.0 - binary_entropy(0.75)).epsilon(1e-8));
}

TEST_CASE("mixture endpoints") {
  Rng rng(114);
  const PrivateState g1 = random_pdit(2, {2, 2}, rng);
  const PrivateState g2 = random_pdit(2, {2, 2}, rng);

  const KeyShieldState all_first = pbit_mixture(g1, g2, 1.0);
  CHECK(max_abs_diff(all_first.rho(), g1.assemble().rho()) == 0.0);

  // p1 = 0: Alice's key bit of the second pbit is flipped, so the key
  // marginal sits on the anticorrelated outcomes.
  const CcqState c =
      ccq(pbit_mixture(g1, g2, 0.0), ProductBasis::standard(2));
  CHECK(c.p(0, 1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(c.p(1, 0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(c.p(0, 0) <= tol::prob_floor);
  CHECK(c.p(1, 1) <= tol::prob_floor);
}

TEST_CASE("pbit_mixture validates its inputs") {
  Rng rng(115);
  const PrivateState g1 = random_pdit(2, {2, 2}, rng);
  const PrivateState g2 = random_pdit(2, {3, 2}, rng);
  CHECK_THROWS_AS(pbit_mixture(g1, g2, 0.5), std::invalid_argument);
  const PrivateState g3 = random_pdit(2, {2, 2}, rng);
  CHECK_THROWS_AS(pbit_mixture(g1, g3, 1.5), std::invalid_argument);
  const PrivateState trit = random_pdit(3, {2, 2}, rng);
  CHECK_THROWS_AS(pbit_mixture(trit, trit, 0.5), std::invalid_argument);
}

TEST_CASE("pdit descriptions round-trip through JSON") {
  Rng rng(116);
  PrivateState pdit = random_pdit(2, {2, 3}, rng);
  pdit.basis = random_product_basis(2, rng);
  const PrivateState loaded = pdit_from_json(pdit_to_json(pdit));
  CHECK(loaded.d == pdit.d);
  CHECK(loaded.shield_dims == pdit.shield_dims);
  CHECK(max_abs_diff(loaded.sigma, pdit.sigma) == 0.0);
  CHECK(max_abs_diff(loaded.basis.alice, pdit.basis.alice) == 0.0);
  for (int i = 0; i < 2; ++i)
    CHECK(max_abs_diff(loaded.unitaries[i], pdit.unitaries[i]) == 0.0);
  CHECK(max_abs_diff(loaded.assemble().rho(), pdit.assemble().rho()) < 1e-12);
}
