#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "labelgcn/adam.hpp"
#include "labelgcn/checkpoint.hpp"
#include "labelgcn/error.hpp"
#include "labelgcn/gradcheck.hpp"
#include "labelgcn/loss.hpp"
#include "labelgcn/matrix.hpp"
#include "labelgcn/rng.hpp"
#include "labelgcn/tape.hpp"
#include "oracles.hpp"

using namespace labelgcn;

TEST_CASE("matmul identity and hand 2x2") {
  Rng rng(3);
  const Matrix m = oracle::random_matrix(3, 4, rng);
  CHECK(matmul(Matrix::identity(3), m) == m);
  const Matrix r = matmul(Matrix::from_rows({{1, 2}, {3, 4}}), Matrix::from_rows({{1}, {1}}));
  CHECK(r == Matrix::from_rows({{3}, {7}}));
}

TEST_CASE("matmul matches triple loop") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = oracle::random_matrix(5, 4, rng);
    const Matrix b = oracle::random_matrix(4, 3, rng);
    CHECK(max_abs_diff(matmul(a, b), oracle::triple_loop_matmul(a, b)) < 1e-14);
  }
}

TEST_CASE("matmul shape error names both shapes") {
  try {
    (void)matmul(Matrix(2, 3), Matrix(4, 5));
    FAIL("expected ShapeError");
  } catch (const ShapeError& e) {
    const std::string what = e.what();
    CHECK(what.find("2x3") != std::string::npos);
    CHECK(what.find("4x5") != std::string::npos);
  }
}

TEST_CASE("matmul associativity") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = oracle::random_matrix(4, 6, rng);
    const Matrix b = oracle::random_matrix(6, 3, rng);
    const Matrix c = oracle::random_matrix(3, 5, rng);
    const Matrix left = matmul(matmul(a, b), c);
    const Matrix right = matmul(a, matmul(b, c));
    for (std::size_t i = 0; i < left.size(); ++i) {
      CHECK(std::abs(left.data()[i] - right.data()[i]) <= 1e-9 * std::max(1.0, std::abs(right.data()[i])));
    }
  }
}

TEST_CASE("matrix rejects bad data length and non-finite values are detected") {
  CHECK_THROWS_AS(Matrix(2, 2, std::vector<double>{1, 2, 3}), ShapeError);
  Matrix m(1, 2);
  CHECK(m.all_finite());
  m(0, 1) = std::nan("");
  CHECK_FALSE(m.all_finite());
}

TEST_CASE("softmax_nll on equal scores") {
  const std::vector<double> s(4, 0.7);
  const auto r = softmax_nll(s, 2);
  CHECK(r.loss == doctest::Approx(std::log(4.0)).epsilon(1e-15));
  for (std::size_t i = 0; i < 4; ++i) CHECK(r.grad[i] == doctest::Approx(0.25 - (i == 2 ? 1.0 : 0.0)));
}

TEST_CASE("softmax_nll is stable for large scores") {
  const std::vector<double> s{1000.0, 0.0};
  const auto r = softmax_nll(s, 0);
  CHECK(std::isfinite(r.loss));
  CHECK(r.loss == doctest::Approx(0.0).epsilon(1e-12));
  const auto r1 = softmax_nll(s, 1);
  CHECK(r1.loss == doctest::Approx(1000.0));
}

TEST_CASE("softmax_nll gradient matches finite differences and sums to zero") {
  Rng rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> s(6);
    for (double& v : s) v = rng.uniform(-3, 3);
    const std::size_t target = rng.index(6);
    const auto r = softmax_nll(s, target);
    double sum = 0;
    for (double g : r.grad) sum += g;
    CHECK(std::abs(sum) < 1e-10);
    for (std::size_t i = 0; i < 6; ++i) {
      const double eps = 1e-5;
      auto plus = s, minus = s;
      plus[i] += eps;
      minus[i] -= eps;
      const double fd = (softmax_nll(plus, target).loss - softmax_nll(minus, target).loss) / (2 * eps);
      CHECK(std::abs(fd - r.grad[i]) / std::max(1.0, std::abs(fd)) < 1e-6);
    }
  }
}

TEST_CASE("softmax_nll rejects an out-of-range target") {
  const std::vector<double> s{1, 2, 3};
  CHECK_THROWS_AS(softmax_nll(s, 3), IndexError);
}

namespace {

ParameterSet scalar_param(double v) {
  ParameterSet p;
  p.add("p", Matrix(1, 1, v));
  return p;
}

}  // namespace

TEST_CASE("adam: zero gradient leaves parameters unchanged") {
  Rng rng(1);
  ParameterSet p;
  p.add("w", oracle::random_matrix(3, 2, rng));
  const ParameterSet before = p;
  Adam adam(p);
  for (int i = 0; i < 5; ++i) adam.step(p, p.zeros_like());
  CHECK(p == before);
  CHECK(adam.step_count() == 5);
}

TEST_CASE("adam: one step on p=1, g=1 matches the hand recurrence") {
  ParameterSet p = scalar_param(1.0);
  Adam adam(p);
  Gradients g{Matrix(1, 1, 1.0)};
  adam.step(p, g);
  // m = 0.1, v = 0.001; m_hat = 1, v_hat = 1.
  const double m = 0.1 * 1.0, v = 0.001 * 1.0;
  const double m_hat = m / (1 - 0.9), v_hat = v / (1 - 0.999);
  const double expected = 1.0 - 0.001 * m_hat / (std::sqrt(v_hat) + 1e-8);
  CHECK(p[0](0, 0) == doctest::Approx(expected).epsilon(1e-15));
  CHECK(p[0](0, 0) == doctest::Approx(1.0 - 0.001 / (1.0 + 1e-8)).epsilon(1e-15));
}

TEST_CASE("adam: constant gradient moves by about lr against its sign") {
  ParameterSet p = scalar_param(0.0);
  Adam adam(p);
  Gradients g{Matrix(1, 1, -3.0)};
  double prev = 0.0;
  for (int i = 0; i < 200; ++i) {
    adam.step(p, g);
    const double step = p[0](0, 0) - prev;
    prev = p[0](0, 0);
    CHECK(step > 0.0);
    CHECK(step == doctest::Approx(1e-3).epsilon(1e-6));
  }
}

TEST_CASE("adam: shape mismatch is a shape error") {
  ParameterSet p = scalar_param(0.0);
  Adam adam(p);
  Gradients g{Matrix(2, 1)};
  CHECK_THROWS_AS(adam.step(p, g), ShapeError);
  Gradients none;
  CHECK_THROWS_AS(adam.step(p, none), ShapeError);
}

TEST_CASE("finite differences on analytic functions") {
  const auto square = [](const ParameterSet& p) { return p[0](0, 0) * p[0](0, 0); };
  const auto g = finite_diff_gradient(square, scalar_param(3.0));
  CHECK(std::abs(g[0](0, 0) - 6.0) < 1e-6);

  const auto constant = [](const ParameterSet&) { return 4.2; };
  CHECK(finite_diff_gradient(constant, scalar_param(1.0))[0](0, 0) == 0.0);

  const auto bad = [](const ParameterSet& p) { return p[0](0, 0) > 1.0 ? std::nan("") : 0.0; };
  CHECK_THROWS_AS(finite_diff_gradient(bad, scalar_param(1.0)), NumericError);
}

namespace {

// Exercises every tape op in one scalar loss.
double composite_loss(const ParameterSet& p, Gradients* grads) {
  Tape t(p);
  const Var a = t.param(0);  // 3x4
  const Var b = t.param(1);  // 4x2
  const Var row = t.param(2);  // 1x2
  const Var table = t.param(3);  // 5x2
  const Var h = t.tanh(t.add_row(t.matmul(a, b), row));                  // 3x2
  const Var e = t.gather_mean(table, std::vector<std::size_t>{0, 3, 3});  // 1x2
  const Var cat = t.concat_cols(h, t.repeat_rows(e, 3));                  // 3x4
  const Var sq = t.matmul(cat, t.transpose(a));                           // 3x3
  const Var mixed = t.add(sq, t.scale(t.constant(Matrix::identity(3)), 0.5));
  const Var scores = t.row_dot(mixed, t.tanh(mixed));                     // 3x1
  const Var loss = t.softmax_nll(scores, 1);
  if (grads) t.backward(loss, *grads);
  return t.value(loss)(0, 0);
}

}  // namespace

TEST_CASE("tape gradients match finite differences for every op") {
  Rng rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    ParameterSet p;
    p.add("a", oracle::random_matrix(3, 4, rng));
    p.add("b", oracle::random_matrix(4, 2, rng));
    p.add("row", oracle::random_matrix(1, 2, rng));
    p.add("table", oracle::random_matrix(5, 2, rng));
    Gradients g = p.zeros_like();
    composite_loss(p, &g);
    const auto fd = finite_diff_gradient([](const ParameterSet& q) { return composite_loss(q, nullptr); }, p);
    CHECK(max_relative_error(g, fd) < 1e-7);
    // Table rows not gathered get exactly zero gradient.
    CHECK(g[3](1, 0) == 0.0);
    CHECK(g[3](4, 1) == 0.0);
  }
}

TEST_CASE("tape backward accumulates and leaves untouched parameters at zero") {
  ParameterSet p;
  p.add("used", Matrix(1, 1, 2.0));
  p.add("unused", Matrix(1, 1, 5.0));
  Tape t(p);
  const Var loss = t.scale(t.param(0), 3.0);
  Gradients g = p.zeros_like();
  t.backward(loss, g);
  t.backward(loss, g);
  CHECK(g[0](0, 0) == 6.0);
  CHECK(g[1](0, 0) == 0.0);
}

TEST_CASE("tape reports shape and numeric errors") {
  ParameterSet p;
  p.add("x", Matrix(2, 3, 1.0));
  Tape t(p);
  const Var x = t.param(0);
  CHECK_THROWS_AS(t.matmul(x, x), ShapeError);
  CHECK_THROWS_AS(t.add(x, t.constant(Matrix(3, 2))), ShapeError);
  CHECK_THROWS_AS(t.scale(x, std::numeric_limits<double>::infinity()), NumericError);
  Gradients g = p.zeros_like();
  CHECK_THROWS_AS(t.backward(x, g), ShapeError);
}

TEST_CASE("parameter set rejects duplicate names") {
  ParameterSet p;
  p.add("w", Matrix(1, 1));
  CHECK_THROWS_AS(p.add("w", Matrix(1, 1)), ArgumentError);
  CHECK(p.find("w") == std::size_t{0});
  CHECK_FALSE(p.find("nope").has_value());
}

TEST_CASE("checkpoint round trip and little-endian payload") {
  Checkpoint cp;
  cp.kind = "mlp";
  cp.hyper = {{"a", "1"}, {"b", "x_y"}};
  cp.vocabulary = {"alpha", "beta_gamma"};
  cp.params.add("w", Matrix::from_rows({{1.5, -2.0}, {0.1, 3e-300}}));
  cp.params.add("b", Matrix(1, 3, -0.0));
  std::stringstream s;
  write_checkpoint(s, cp);
  const std::string bytes = s.str();

  const auto payload = bytes.find("payload\n");
  REQUIRE(payload != std::string::npos);
  const std::string data = bytes.substr(payload + 8);
  CHECK(data.size() == 7 * 8);
  // 1.5 = 0x3FF8000000000000, least significant byte first.
  const unsigned char first[8] = {0, 0, 0, 0, 0, 0, 0xF8, 0x3F};
  for (int i = 0; i < 8; ++i) CHECK(static_cast<unsigned char>(data[i]) == first[i]);

  std::stringstream in(bytes);
  const Checkpoint back = read_checkpoint(in);
  CHECK(back == cp);
  CHECK(back.hyper_value("b") == "x_y");
}

TEST_CASE("checkpoint rejects truncation and trailing bytes") {
  Checkpoint cp;
  cp.kind = "mlp";
  cp.params.add("w", Matrix(2, 2, 1.0));
  std::stringstream s;
  write_checkpoint(s, cp);
  const std::string bytes = s.str();
  std::stringstream truncated(bytes.substr(0, bytes.size() - 3));
  CHECK_THROWS_AS(read_checkpoint(truncated), DataError);
  std::stringstream trailing(bytes + "x");
  CHECK_THROWS_AS(read_checkpoint(trailing), DataError);
  std::stringstream garbage("NOT-A-CHECKPOINT\n");
  CHECK_THROWS_AS(read_checkpoint(garbage), DataError);
}

TEST_CASE("splitmix64 matches the published reference stream") {
  std::uint64_t state = 0;
  CHECK(splitmix64(state) == 0xE220A8397B1DCDAFull);
  CHECK(splitmix64(state) == 0x6E789E6AA1B965F4ull);
}

TEST_CASE("rng is deterministic and in range") {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    CHECK(x == b.next());
    differs |= x != c.next();
  }
  CHECK(differs);
  double sum = 0, sq = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double u = a.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(a.index(7) < 7);
    const double z = a.normal();
    sum += z;
    sq += z * z;
    const double lu = a.log_uniform(32, 256);
    CHECK(lu >= 32.0);
    CHECK(lu <= 256.0);
  }
  CHECK(std::abs(sum / n) < 0.05);
  CHECK(std::abs(sq / n - 1.0) < 0.05);
}
