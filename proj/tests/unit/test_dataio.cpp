#include <doctest.h>

#include <sstream>

#include "svrda/dataio.hpp"
#include "test_util.hpp"

using namespace svrda;
using namespace svrda::testutil;

TEST_CASE("libsvm parsing") {
  SUBCASE("basic line") {
    std::istringstream in("+1 1:0.5 3:2\n");
    const Dataset ds = parse_libsvm(in);
    REQUIRE(ds.n() == 1);
    CHECK(ds.d == 3);
    CHECK(ds.samples[0].label == 1.0);
    REQUIRE(ds.samples[0].features.idx.size() == 2);
    CHECK(ds.samples[0].features.idx[0] == 0);
    CHECK(ds.samples[0].features.val[0] == 0.5);
    CHECK(ds.samples[0].features.idx[1] == 2);
    CHECK(ds.samples[0].features.val[1] == 2.0);
  }

  SUBCASE("comments, blank lines and CRLF") {
    std::istringstream in("# header\n\n-1 2:1.5\r\n  \n+1 1:3\n");
    const Dataset ds = parse_libsvm(in);
    CHECK(ds.n() == 2);
    CHECK(ds.d == 2);
  }

  SUBCASE("empty stream") {
    std::istringstream in("");
    CHECK_THROWS_AS(parse_libsvm(in), ParseError);
  }

  SUBCASE("malformed tokens carry the line number") {
    std::istringstream in("+1 1:0.5\n+1 2:abc\n");
    try {
      parse_libsvm(in);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }

  SUBCASE("non-ascending indices rejected") {
    std::istringstream in("+1 3:1 2:1\n");
    CHECK_THROWS_AS(parse_libsvm(in), ParseError);
    std::istringstream dup("+1 2:1 2:1\n");
    CHECK_THROWS_AS(parse_libsvm(dup), ParseError);
  }

  SUBCASE("dimension override") {
    std::istringstream in("+1 1:1\n");
    CHECK(parse_libsvm(in, 10).d == 10);
    std::istringstream in2("+1 4:1\n");
    CHECK_THROWS_AS(parse_libsvm(in2, 3), ParseError);
  }
}

TEST_CASE("libsvm round-trip preserves the dataset exactly") {
  const SyntheticData syn = generate_synthetic(
      {.n = 25, .d = 8, .k = 3, .noise_std = 0.3,
       .label_kind = SyntheticSpec::LabelKind::Regression, .seed = 5});
  std::ostringstream out;
  write_libsvm(syn.dataset, out);
  std::istringstream in(out.str());
  const Dataset back = parse_libsvm(in, syn.dataset.d);
  REQUIRE(back.n() == syn.dataset.n());
  CHECK(back.d == syn.dataset.d);
  for (Index i = 0; i < back.n(); ++i) {
    const Sample& a = syn.dataset.samples[static_cast<std::size_t>(i)];
    const Sample& b = back.samples[static_cast<std::size_t>(i)];
    CHECK(a.label == b.label);
    REQUIRE(a.features.idx == b.features.idx);
    CHECK(a.features.val == b.features.val);
  }
}

TEST_CASE("feature normalization") {
  SUBCASE("population convention on a two-point column") {
    Dataset ds;
    ds.d = 1;
    ds.samples = {dense_sample({1.0}, 0), dense_sample({3.0}, 0)};
    const Dataset norm = normalize_features(ds, NormalizePolicy::Materialize);
    REQUIRE(norm.normalization.has_value());
    CHECK(norm.normalization->mean[0] == doctest::Approx(2.0));
    CHECK(norm.normalization->std[0] == doctest::Approx(1.0));
    CHECK(norm.samples[0].features.to_dense(1)[0] == doctest::Approx(-1.0));
    CHECK(norm.samples[1].features.to_dense(1)[0] == doctest::Approx(1.0));
  }

  SUBCASE("constant columns are flagged and zeroed") {
    Dataset ds;
    ds.d = 2;
    ds.samples = {dense_sample({5.0, 1.0}, 0), dense_sample({5.0, 2.0}, 0),
                  dense_sample({5.0, 3.0}, 0)};
    const Dataset norm = normalize_features(ds, NormalizePolicy::Materialize);
    CHECK(norm.normalization->constant[0] == 1);
    CHECK(norm.normalization->constant[1] == 0);
    for (const Sample& s : norm.samples) {
      for (Index j : s.features.idx) CHECK(j != 0);
    }
  }

  SUBCASE("an already-normalized column stays put") {
    Dataset ds;
    ds.d = 1;
    ds.samples = {dense_sample({-1.0}, 0), dense_sample({1.0}, 0)};
    const Dataset norm = normalize_features(ds, NormalizePolicy::Materialize);
    CHECK(std::abs(norm.samples[0].features.to_dense(1)[0] + 1.0) < 1e-12);
    CHECK(std::abs(norm.samples[1].features.to_dense(1)[0] - 1.0) < 1e-12);
  }

  SUBCASE("post-normalization moments") {
    const SyntheticData syn = generate_synthetic(
        {.n = 60, .d = 6, .k = 2, .noise_std = 0.2,
         .label_kind = SyntheticSpec::LabelKind::Regression, .seed = 8});
    const Dataset norm = normalize_features(syn.dataset, NormalizePolicy::Materialize);
    for (Index j = 0; j < norm.d; ++j) {
      double mean = 0.0, second = 0.0;
      for (const Sample& s : norm.samples) {
        const double v = s.features.to_dense(norm.d)[j];
        mean += v;
        second += v * v;
      }
      mean /= static_cast<double>(norm.n());
      second /= static_cast<double>(norm.n());
      CHECK(std::abs(mean) < 1e-10);
      CHECK(std::abs(second - mean * mean - 1.0) < 1e-10);
    }
  }

  SUBCASE("n = 1 is rejected") {
    Dataset ds;
    ds.d = 1;
    ds.samples = {dense_sample({1.0}, 0)};
    CHECK_THROWS_AS(normalize_features(ds), std::invalid_argument);
  }
}

TEST_CASE("lazy and materialized normalization give identical problems") {
  const SyntheticData syn = generate_synthetic(
      {.n = 30, .d = 5, .k = 2, .noise_std = 0.1,
       .label_kind = SyntheticSpec::LabelKind::Regression, .seed = 13});
  const Dataset lazy = normalize_features(syn.dataset, NormalizePolicy::Lazy);
  const Dataset dense = normalize_features(syn.dataset, NormalizePolicy::Materialize);
  REQUIRE(!lazy.normalization->materialized);
  REQUIRE(dense.normalization->materialized);

  const Regularizer reg = Regularizer::elastic_net(0.05, 0.1);
  const CompositeProblem pl = make_problem(lazy, SmoothLoss::SquaredError, reg);
  const CompositeProblem pd = make_problem(dense, SmoothLoss::SquaredError, reg);
  CHECK(std::abs(pl.lbar() - pd.lbar()) <= 1e-12 * pd.lbar());

  SeededRng rng(14);
  for (int rep = 0; rep < 10; ++rep) {
    const DenseVector x = random_vector(5, rng);
    CHECK(std::abs(pl.objective(x) - pd.objective(x)) <=
          1e-12 * std::max(1.0, std::abs(pd.objective(x))));
    const DenseVector gl = pl.full_gradient(x);
    const DenseVector gd = pd.full_gradient(x);
    CHECK((gl - gd).norm() <= 1e-12 * std::max(1.0, gd.norm()));
  }
}

TEST_CASE("auto policy materializes dense centered data and keeps sparse data lazy") {
  // gaussian columns have nonzero means, so centering densifies: Auto must
  // pick the materialized layout for already-dense data
  const SyntheticData syn = generate_synthetic(
      {.n = 20, .d = 4, .k = 1, .noise_std = 0.1,
       .label_kind = SyntheticSpec::LabelKind::Regression, .seed = 21});
  CHECK(normalize_features(syn.dataset).normalization->materialized);

  // mostly-zero columns whose mean is zero keep their sparsity
  Dataset sparse;
  sparse.d = 40;
  for (int i = 0; i < 40; ++i) {
    Sample s;
    const Index j = static_cast<Index>(i % 40);
    s.features.idx = {j};
    s.features.val = {i % 2 == 0 ? 1.0 : -1.0};
    sparse.samples.push_back(std::move(s));
  }
  CHECK(!normalize_features(sparse).normalization->materialized);
}

TEST_CASE("binary label handling") {
  Dataset ds;
  ds.d = 1;
  ds.samples = {dense_sample({1.0}, 0.0), dense_sample({1.0}, 1.0)};
  ensure_binary_labels(ds);
  CHECK(ds.samples[0].label == -1.0);
  CHECK(ds.samples[1].label == 1.0);
  ensure_binary_labels(ds);  // already +-1: unchanged
  CHECK(ds.samples[0].label == -1.0);

  Dataset bad;
  bad.d = 1;
  bad.samples = {dense_sample({1.0}, 0.7)};
  CHECK_THROWS_AS(ensure_binary_labels(bad), std::invalid_argument);
}

TEST_CASE("synthetic generation") {
  SUBCASE("no signal, no noise") {
    const SyntheticData syn = generate_synthetic(
        {.n = 10, .d = 4, .k = 0, .noise_std = 0.0,
         .label_kind = SyntheticSpec::LabelKind::Regression, .seed = 1});
    for (const Sample& s : syn.dataset.samples) CHECK(s.label == 0.0);
    CHECK(syn.ground_truth.isZero());
  }

  SUBCASE("deterministic given the seed") {
    const SyntheticSpec spec{.n = 15, .d = 6, .k = 3, .noise_std = 0.5,
                             .label_kind = SyntheticSpec::LabelKind::Binary,
                             .seed = 77};
    const SyntheticData a = generate_synthetic(spec);
    const SyntheticData b = generate_synthetic(spec);
    CHECK((a.ground_truth - b.ground_truth).norm() == 0.0);
    for (Index i = 0; i < a.dataset.n(); ++i) {
      CHECK(a.dataset.samples[static_cast<std::size_t>(i)].label ==
            b.dataset.samples[static_cast<std::size_t>(i)].label);
      CHECK(a.dataset.samples[static_cast<std::size_t>(i)].features.val ==
            b.dataset.samples[static_cast<std::size_t>(i)].features.val);
    }
  }

  SUBCASE("ground truth support size and signs") {
    const SyntheticData syn = generate_synthetic(
        {.n = 5, .d = 30, .k = 7, .noise_std = 0.0,
         .label_kind = SyntheticSpec::LabelKind::Regression, .seed = 3});
    Index support = 0;
    for (Index j = 0; j < 30; ++j) {
      if (syn.ground_truth[j] != 0.0) {
        ++support;
        CHECK(std::abs(syn.ground_truth[j]) == 1.0);
      }
    }
    CHECK(support == 7);
  }

  SUBCASE("binary labels are +-1") {
    const SyntheticData syn = generate_synthetic(
        {.n = 40, .d = 5, .k = 2, .noise_std = 0.4,
         .label_kind = SyntheticSpec::LabelKind::Binary, .seed = 9});
    for (const Sample& s : syn.dataset.samples) {
      CHECK((s.label == 1.0 || s.label == -1.0));
    }
  }

  SUBCASE("invalid specs") {
    CHECK_THROWS_AS(generate_synthetic({.n = 5, .d = 3, .k = 4}),
                    std::invalid_argument);
    CHECK_THROWS_AS(generate_synthetic({.n = 0, .d = 3, .k = 1}),
                    std::invalid_argument);
  }
}
