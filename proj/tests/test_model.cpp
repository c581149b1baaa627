#include <catch2/catch_amalgamated.hpp>

#include "gavekit/generator.hpp"
#include "gavekit/json_io.hpp"
#include "gavekit/model.hpp"
#include "test_support.hpp"

using namespace gavekit;
using Catch::Approx;

TEST_CASE("residual vanishes on the worked solutions") {
  const GaveInstance exam = testsupport::load_instance("exam_inf.json");
  CHECK(residual(exam, Vector{12.0 / 7, -3.0 / 7, 1}).inf_norm() <= 1e-12);

  const GaveInstance remark = testsupport::load_instance("mp_remark.json");
  CHECK(residual(remark, Vector{1, -0.5, 1}).inf_norm() <= 1e-12);

  // x = 0 leaves exactly -b
  const Vector r0 = residual(exam, Vector::zeros(3));
  CHECK(testsupport::vec_close(r0, {-3, 0}, 0));

  // the first two coordinates of the worked family do not move with x3 >= 0:
  // the transformed right side is constant there, so both table rows share
  // (12/7, -3/7)
  for (double x3 : {0.0, 0.5, 1.0, 2.0})
    CHECK(residual(exam, Vector{12.0 / 7, -3.0 / 7, x3}).inf_norm() <= 1e-12);
}

TEST_CASE("sign transform reproduces the worked matrices") {
  const GaveInstance inst = testsupport::load_instance("sec32_inf22.json");
  const Matrix c1 = sign_transform(inst, SignPattern({1, 1, 0}));
  CHECK((c1 - Matrix{{-1, 0, 0}, {0, 1, 0}}).max_abs() == 0.0);

  const Matrix c2 = sign_transform(inst, SignPattern({-1, -1, -1}));
  CHECK((c2 - Matrix{{-3, 0, 0}, {0, -3, 0}}).max_abs() == 0.0);

  const GaveInstance b0(Matrix{{1, 2, 3}, {4, 5, 6}}, Matrix(2, 3), Vector{0, 0});
  CHECK((sign_transform(b0, SignPattern::all_ones(3)) - b0.A).max_abs() == 0.0);
}

TEST_CASE("residual agrees with the transform on pattern-conforming points") {
  SplitMix64 rng(97);
  for (int trial = 0; trial < 50; ++trial) {
    const Index m = 1 + rng.next() % 3;
    const Index n = m + rng.next() % 3;
    const GeneratorConfig cfg{.m = m, .n = n, .property = TargetProperty::None};
    const GaveInstance inst = random_instance(cfg, rng.next()).inst;
    std::vector<double> xs(n);
    for (double& v : xs) v = rng.uniform(-2.0, 2.0);
    const Vector x(xs);
    const SignPattern s = sign_of(x);
    const Vector lhs = residual(inst, x);
    const Vector rhs = sign_transform(inst, s) * apply_pattern(s, x) - inst.b;
    CHECK((lhs - rhs).inf_norm() <= 1e-12 * (1.0 + inst.b.inf_norm()));
  }
}

TEST_CASE("instance parsing enforces the schema with distinct error codes") {
  const GaveInstance inst = testsupport::load_instance("exam_inf.json");
  CHECK(inst.m() == 2);
  CHECK(inst.n() == 3);

  auto code_of = [](const std::string& text) {
    try {
      parse_instance(text);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::NumericalFailure;  // no throw: signal an unexpected pass
  };

  CHECK(code_of("not json at all {") == ErrorCode::BadJson);
  CHECK(code_of(R"({"m":2,"n":2,"A":[[1,2],[3]],"B":[[0,0],[0,0]],"b":[0,0]})") == ErrorCode::RaggedRows);
  // out-of-range literals never reach the matrix layer: the parser rejects them
  CHECK(code_of(R"({"m":2,"n":2,"A":[[1,2],[3,1e999]],"B":[[0,0],[0,0]],"b":[0,0]})") == ErrorCode::BadJson);
  CHECK(code_of(R"({"m":2,"n":2,"A":[[1,2],[3,4]],"B":[[0,0],[0,0]],"b":[0]})") == ErrorCode::DimensionMismatch);
  CHECK(code_of(R"({"m":3,"n":2,"A":[[1,2],[3,4],[5,6]],"B":[[0,0],[0,0],[0,0]],"b":[0,0,0]})") ==
        ErrorCode::DimensionMismatch);  // overdetermined
  CHECK(code_of(R"({"m":2,"n":2,"A":[[1,"2/"],[3,4]],"B":[[0,0],[0,0]],"b":[0,0]})") == ErrorCode::BadField);
}

TEST_CASE("serialization round-trips on canonical form") {
  for (const char* name :
       {"exam_inf.json", "mp_remark.json", "zn1_example.json", "egs4.json", "remns_b00.json"}) {
    const std::string raw = read_file(testsupport::fixture_path(name));
    const std::string canonical = serialize_instance(parse_instance(raw));
    CHECK(serialize_instance(parse_instance(canonical)) == canonical);
  }
}

TEST_CASE("rational strings parse exactly") {
  const GaveInstance inst = parse_instance(
      R"({"m":1,"n":2,"A":[["12/7","-3/7"]],"B":[[0,0]],"b":["-1/2"]})");
  CHECK(inst.A(0, 0) == 12.0 / 7);
  CHECK(inst.A(0, 1) == -3.0 / 7);
  CHECK(inst.b[0] == -0.5);
}

TEST_CASE("splitting files validate against the instance") {
  const GaveInstance inst = testsupport::load_instance("zn1_example.json");
  const Splitting split = testsupport::load_splitting("zn1_splitting.json", inst);
  CHECK(split.target == SplitTarget::OnB);
  CHECK(split.M_rank == 2);
  CHECK((split.M - split.N - inst.B).max_abs() <= 1e-12);

  CHECK_THROWS_AS(parse_splitting(R"({"target":"B","M":[[1,0],[0,1]]})", inst), InputError);
  CHECK_THROWS_AS(
      parse_splitting(
          R"({"target":"B","M":[[0.5,0.1,0.1],[0,0.1,0.1]],"N":[[1,0,0],[0,0,0]]})", inst),
      InputError);
}

TEST_CASE("sign_of applies the relative zero threshold") {
  CHECK(sign_of(Vector{1e-14, -2.0, 3.0}) == SignPattern({0, -1, 1}));
  CHECK(sign_of(Vector::zeros(3)) == SignPattern({0, 0, 0}));
  CHECK(sign_of(Vector{1e-9, 1e9, -1e9}) == SignPattern({0, 1, -1}));  // relative, not absolute
}

TEST_CASE("generator is deterministic and re-validates its target property") {
  const GeneratorConfig plain{.m = 2, .n = 4, .property = TargetProperty::None};
  const GaveInstance a = random_instance(plain, 123).inst;
  const GaveInstance b = random_instance(plain, 123).inst;
  CHECK((a.A - b.A).max_abs() == 0.0);
  CHECK((a.B - b.B).max_abs() == 0.0);
  CHECK((a.b - b.b).inf_norm() == 0.0);
  const GaveInstance c = random_instance(plain, 124).inst;
  CHECK((a.A - c.A).max_abs() > 0.0);

  const GeneratorConfig contraction{.m = 3, .n = 5, .property = TargetProperty::ContractionA};
  const GeneratorResult r = random_instance(contraction, 7);
  CHECK(op_norm(pinv(r.inst.A) * r.inst.B, NormKind::Two) < 1.0);
  CHECK(check_contraction_A(r.inst, Splitting::trivial_on(r.inst, SplitTarget::OnA), NormKind::Two).applies);

  const GeneratorConfig sub{.m = 2, .n = 4, .property = TargetProperty::Submatrix};
  const GeneratorResult rs = random_instance(sub, 11);
  CHECK(check_submatrix_condition(rs.inst, NormKind::Two).applies);

  const GeneratorConfig cone{.m = 2, .n = 4, .property = TargetProperty::SignconeB};
  const GeneratorResult rc = random_instance(cone, 19);
  REQUIRE(rc.splitting.has_value());
  bool cone_ok = false;
  for (const TheoremVerdict& v :
       check_signcone_B(rc.inst, *rc.splitting, SignPattern::all_ones(4), NormKind::Two))
    if (v.applies) cone_ok = true;
  CHECK(cone_ok);

  const GeneratorConfig strict{.m = 2, .n = 4, .property = TargetProperty::StrictSignconeB};
  const GeneratorResult rstrict = random_instance(strict, 23);
  REQUIRE(rstrict.splitting.has_value());
  REQUIRE(rstrict.pattern.has_value());
  bool strict_ok = false;
  for (const TheoremVerdict& v :
       check_signcone_B(rstrict.inst, *rstrict.splitting, *rstrict.pattern, NormKind::Inf))
    if (v.id == TheoremId::ThmZn1b && v.applies) strict_ok = true;
  CHECK(strict_ok);
}

TEST_CASE("generator rejects impossible shapes") {
  CHECK_THROWS_AS(random_instance(GeneratorConfig{.m = 3, .n = 2}, 1), InputError);
}
