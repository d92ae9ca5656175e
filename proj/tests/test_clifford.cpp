#include "doctest.h"
#include "support.hpp"

#include "superdirac/clifford.hpp"

using namespace superdirac;

namespace {

Multivector random_mv(std::mt19937_64& rng, const FormPtr& f, AlgebraTag tag) {
  return Multivector(f, tag, testing::random_cvec(rng, 1 << f->dim()));
}

Multivector random_one_form(std::mt19937_64& rng, const FormPtr& f, AlgebraTag tag = AlgebraTag::Exterior) {
  return Multivector::one_form(f, tag, testing::random_cvec(rng, f->dim()));
}

cplx pairing(const FormPtr& f, const Multivector& u, const Multivector& v) {
  cplx s = 0;
  for (int i = 0; i < f->dim(); ++i)
    for (int j = 0; j < f->dim(); ++j) s += u[1u << i] * (*f)(i, j) * v[1u << j];
  return s;
}

// Antisymmetrized product of generator matrices, the definition of q on a blade.
CMat antisymmetrized(int n, const std::vector<int>& idx, const Eigen::MatrixXd& b) {
  const int N = 1 << n;
  std::vector<int> perm(idx.size());
  std::iota(perm.begin(), perm.end(), 0);
  CMat acc = CMat::Zero(N, N);
  do {
    CMat p = CMat::Identity(N, N);
    for (int k : perm) p = p * clifford_matrix(n, idx[k], b);
    acc += double(testing::permutation_sign(perm)) * p;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return acc / double(testing::factorial(static_cast<int>(idx.size())));
}

}  // namespace

TEST_SUITE("clifford") {
  TEST_CASE("Clifford relation on random forms and both signatures") {
    std::mt19937_64 rng(11);
    for (int n = 2; n <= 6; ++n)
      for (int q : {0, 1}) {
        auto f = BilinearForm::make(testing::random_form(rng, n, q));
        for (int t = 0; t < 3; ++t) {
          auto u = random_one_form(rng, f), v = random_one_form(rng, f);
          auto a = random_mv(rng, f, AlgebraTag::Exterior);
          Multivector lhs = clifford_action(u, clifford_action(v, a)) + clifford_action(v, clifford_action(u, a));
          Multivector rhs = (-2.0 * pairing(f, u, v)) * a;
          CHECK(distance(lhs, rhs) < 1e-12 * (1.0 + rhs.coeffs().cwiseAbs().maxCoeff()));
          Multivector sq = clifford_action(u, clifford_action(u, a));
          CHECK(distance(sq, (-pairing(f, u, u)) * a) < 1e-11);
        }
      }
  }

  TEST_CASE("canonical anticommutation relations") {
    std::mt19937_64 rng(12);
    for (int n = 1; n <= 5; ++n) {
      auto f = BilinearForm::make(testing::random_symmetric(rng, n));
      auto u = random_one_form(rng, f), v = random_one_form(rng, f);
      auto a = random_mv(rng, f, AlgebraTag::Exterior);
      CHECK(distance(epsilon(u, epsilon(v, a)) + epsilon(v, epsilon(u, a)), Multivector(f, AlgebraTag::Exterior)) < 1e-12);
      CHECK(distance(iota(u, iota(v, a)) + iota(v, iota(u, a)), Multivector(f, AlgebraTag::Exterior)) < 1e-12);
      CHECK(distance(epsilon(u, iota(v, a)) + iota(v, epsilon(u, a)), pairing(f, u, v) * a) < 1e-12);
    }
    auto flat = BilinearForm::make(Eigen::MatrixXd::Identity(2, 2));
    auto dx1 = Multivector::generator(flat, AlgebraTag::Exterior, 0);
    auto dx2 = Multivector::generator(flat, AlgebraTag::Exterior, 1);
    auto one = Multivector::scalar(flat, AlgebraTag::Exterior, 1.0);
    CHECK(distance(epsilon(dx1, iota(dx2, one)) + iota(dx2, epsilon(dx1, one)), Multivector(flat, AlgebraTag::Exterior)) == 0.0);
  }

  TEST_CASE("symbol expansions of low-degree Clifford products") {
    std::mt19937_64 rng(13);
    const int n = 4;
    auto f = BilinearForm::make(testing::random_form(rng, n, 1));
    auto g = [&](int i, int j) { return (*f)(i, j); };
    auto gen = [&](int i) { return Multivector::generator(f, AlgebraTag::Clifford, i); };
    auto ext = [&](int i) { return Multivector::generator(f, AlgebraTag::Exterior, i); };
    auto one = Multivector::scalar(f, AlgebraTag::Exterior, 1.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Multivector s = symbol(clifford_product(gen(i), gen(j)));
        Multivector expect = wedge(ext(i), ext(j)) - g(i, j) * one;
        CHECK(distance(s, expect) < 1e-13);
        for (int k = 0; k < n; ++k) {
          Multivector s3 = symbol(clifford_product(clifford_product(gen(i), gen(j)), gen(k)));
          Multivector e3 = wedge(wedge(ext(i), ext(j)), ext(k)) - g(i, j) * ext(k) + g(i, k) * ext(j) - g(j, k) * ext(i);
          CHECK(distance(s3, e3) < 1e-13);
        }
      }
  }

  TEST_CASE("quantization matches antisymmetrized generator products") {
    std::mt19937_64 rng(14);
    for (int n = 2; n <= 4; ++n) {
      const Eigen::MatrixXd b = testing::random_form(rng, n, n % 2);
      for (Blade I = 0; I < (1u << n); ++I) {
        const CMat m = quantized_blade_matrix(n, I, b);
        CHECK((m - antisymmetrized(n, blade_indices(I), b)).cwiseAbs().maxCoeff() < 1e-12);
      }
    }
  }

  TEST_CASE("associativity and symbol round trip") {
    std::mt19937_64 rng(15);
    for (int n = 1; n <= 5; ++n) {
      auto f = BilinearForm::make(testing::random_form(rng, n, n / 2));
      auto a = random_mv(rng, f, AlgebraTag::Clifford), b = random_mv(rng, f, AlgebraTag::Clifford),
           c = random_mv(rng, f, AlgebraTag::Clifford);
      auto l = clifford_product(clifford_product(a, b), c), r = clifford_product(a, clifford_product(b, c));
      CHECK(distance(l, r) < 1e-11 * (1.0 + l.coeffs().cwiseAbs().maxCoeff()));
      auto e = random_mv(rng, f, AlgebraTag::Exterior);
      CHECK(distance(symbol(quantize(e)), e) == 0.0);
      auto one = Multivector::scalar(f, AlgebraTag::Clifford, 1.0);
      CHECK(distance(clifford_product(one, a), a) < 1e-15);
    }
  }

  TEST_CASE("chirality squares to one and anticommutes with generators") {
    std::mt19937_64 rng(16);
    for (int n : {2, 4, 6})
      for (int q = 0; q <= 2; ++q) {
        auto f = BilinearForm::make(testing::random_form(rng, n, q));
        for (int orient : {1, -1}) {
          Multivector gam = chirality(f, orient);
          CHECK(distance(clifford_product(gam, gam), Multivector::scalar(f, AlgebraTag::Clifford, 1.0)) < 1e-10);
          for (int i = 0; i < n; ++i) {
            auto e = Multivector::generator(f, AlgebraTag::Clifford, i);
            CHECK(distance(clifford_product(gam, e) + clifford_product(e, gam), Multivector(f, AlgebraTag::Clifford)) < 1e-10);
          }
          auto v = random_one_form(rng, f);
          auto a = random_mv(rng, f, AlgebraTag::Exterior);
          Multivector lhs = clifford_action(gam, epsilon(v, a));
          Multivector rhs = iota(v, clifford_action(gam, a));
          CHECK(distance(lhs, rhs) < 1e-10);
        }
      }
  }

  TEST_CASE("Riemannian chirality is the scaled top blade") {
    std::mt19937_64 rng(17);
    for (int n : {2, 4}) {
      const Eigen::MatrixXd binv = testing::random_form(rng, n);
      auto f = BilinearForm::make(binv);
      const double vol = std::sqrt(std::abs(binv.inverse().determinant()));
      Multivector top(f, AlgebraTag::Clifford);
      top[(1u << n) - 1] = std::pow(cplx(0, 1), n / 2) * vol;
      CHECK(distance(chirality(f), top) < 1e-12);
      CHECK(distance(chirality(f, -1), -1.0 * top) < 1e-12);
    }
  }

  TEST_CASE("errors") {
    auto f = BilinearForm::make(Eigen::MatrixXd::Identity(3, 3));
    auto two = wedge(Multivector::generator(f, AlgebraTag::Exterior, 0), Multivector::generator(f, AlgebraTag::Exterior, 1));
    auto one = Multivector::scalar(f, AlgebraTag::Exterior, 1.0);
    CHECK_THROWS_AS(iota(two, one), DimensionError);
    CHECK_THROWS_AS(chirality(f), DimensionError);
    CHECK_THROWS_AS(chirality(BilinearForm::make(Eigen::MatrixXd::Zero(2, 2))), DegenerateError);
    CHECK_THROWS_AS(clifford_product(one, one), DimensionError);
    auto g = BilinearForm::make(Eigen::MatrixXd::Identity(2, 2));
    CHECK_THROWS_AS(wedge(one, Multivector::scalar(g, AlgebraTag::Exterior, 1.0)), DimensionError);
    CHECK_THROWS_AS(supercommutator(quantize(one + Multivector::generator(f, AlgebraTag::Exterior, 0)), quantize(one)), ParityError);
  }
}
