#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <set>
#include <sstream>

#include "ipq/dataio.hpp"
#include "ipq/error.hpp"
#include "test_util.hpp"

using namespace ipq;

namespace {

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no ipq::Error thrown";
  return ErrorCode::InvalidArgument;
}

template <typename F>
std::string message_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

void le32(std::string& s, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>(v >> (8 * i)));
}
void be32(std::string& s, std::uint32_t v) {
  for (int i = 3; i >= 0; --i) s.push_back(static_cast<char>(v >> (8 * i)));
}
void lef(std::string& s, float f) {
  std::uint32_t bits;
  std::memcpy(&bits, &f, 4);
  le32(s, bits);
}

RawSet load_str(const std::string& s, Format f, LoadOptions o = {}) {
  std::istringstream in(s);
  return load(in, f, o);
}

RawSet raw(std::uint32_t dim, std::vector<double> values) {
  RawSet r;
  r.dim = dim;
  r.values = std::move(values);
  r.source = "test";
  return r;
}

}  // namespace

TEST(Load, FvecsFixture) {
  std::string s;
  const float a[4] = {1.5f, -2.25f, 0.0f, 3.0e-3f}, b[4] = {7.0f, 0.125f, -1e6f, 42.0f};
  le32(s, 4);
  for (float v : a) lef(s, v);
  le32(s, 4);
  for (float v : b) lef(s, v);
  const RawSet r = load_str(s, Format::Fvecs);
  ASSERT_EQ(r.dim, 4u);
  ASSERT_EQ(r.size(), 2u);
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(r.row(0)[i], static_cast<double>(a[i]));
    EXPECT_EQ(r.row(1)[i], static_cast<double>(b[i]));
  }
}

TEST(Load, FvecsErrors) {
  std::string s;
  le32(s, 2);
  lef(s, 1);
  lef(s, 2);
  le32(s, 3);
  for (int i = 0; i < 3; ++i) lef(s, 1);
  EXPECT_EQ(code_of([&] { load_str(s, Format::Fvecs); }), ErrorCode::DimensionMismatch);

  std::string t;
  le32(t, 2);
  lef(t, 1);
  EXPECT_EQ(code_of([&] { load_str(t, Format::Fvecs); }), ErrorCode::ParseError);
  EXPECT_NE(message_of([&] { load_str(t, Format::Fvecs); }).find("byte 4"), std::string::npos);
  std::string neg;
  le32(neg, 0xFFFFFFFFu);
  EXPECT_EQ(code_of([&] { load_str(neg, Format::Fvecs); }), ErrorCode::ParseError);
}

TEST(Load, BvecsFixture) {
  std::string s;
  le32(s, 3);
  s += std::string("\x01\x02\xff", 3);
  const RawSet r = load_str(s, Format::Bvecs);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r.values, (std::vector<double>{1, 2, 255}));
}

TEST(Load, IdxUnsignedBytesScaled) {
  std::string s("\x00\x00\x08\x03", 4);
  be32(s, 2);
  be32(s, 2);
  be32(s, 2);
  s += std::string("\x00\xff\x80\x01\x02\x03\x04\x05", 8);
  const RawSet r = load_str(s, Format::Idx);
  ASSERT_EQ(r.dim, 4u);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r.row(0)[1], 1.0);
  EXPECT_EQ(r.row(0)[2], 128 / 255.0);
  EXPECT_EQ(r.row(1)[3], 5 / 255.0);

  EXPECT_EQ(code_of([&] { load_str(s.substr(0, s.size() - 1), Format::Idx); }), ErrorCode::ParseError);
  std::string bad_type = s;
  bad_type[2] = 0x0B;
  EXPECT_EQ(code_of([&] { load_str(bad_type, Format::Idx); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([&] { load_str(std::string("\x01\x00\x08\x01", 4), Format::Idx); }), ErrorCode::ParseError);
}

TEST(Load, IdxFloatPayload) {
  std::string s("\x00\x00\x0D\x02", 4);
  be32(s, 1);
  be32(s, 2);
  for (float f : {0.5f, -1.25f}) {
    std::uint32_t bits;
    std::memcpy(&bits, &f, 4);
    be32(s, bits);
  }
  EXPECT_EQ(load_str(s, Format::Idx).values, (std::vector<double>{0.5, -1.25}));
}

TEST(Load, Csv) {
  const RawSet r = load_str("1, 2.5,-3\n4e-1,5,6\r\n\n", Format::Csv);
  ASSERT_EQ(r.dim, 3u);
  EXPECT_EQ(r.values, (std::vector<double>{1, 2.5, -3, 0.4, 5, 6}));

  const RawSet h = load_str("x,y\n1,2\n", Format::Csv, LoadOptions{true});
  EXPECT_EQ(h.values, (std::vector<double>{1, 2}));

  EXPECT_EQ(code_of([] { load_str("1,2,3\n4,5\n", Format::Csv); }), ErrorCode::ParseError);
  EXPECT_NE(message_of([] { load_str("1,2,3\n4,5\n", Format::Csv); }).find("byte 6"), std::string::npos);
  EXPECT_EQ(code_of([] { load_str("1,abc\n", Format::Csv); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { load_str("x,y\n1,2\n", Format::Csv); }), ErrorCode::ParseError);
}

TEST(Save, RoundTrips) {
  std::mt19937_64 rng(3);
  std::normal_distribution<float> g;
  RawSet r = raw(5, {});
  for (int i = 0; i < 50; ++i) r.values.push_back(g(rng));  // float-exact values
  for (Format f : {Format::Fvecs, Format::Csv}) {
    std::ostringstream out;
    f == Format::Fvecs ? save_fvecs(out, r) : save_csv(out, r);
    const RawSet back = load_str(out.str(), f);
    EXPECT_EQ(back.dim, r.dim);
    EXPECT_EQ(back.values, r.values) << to_string(f);
  }
  // CSV keeps full binary64 precision too.
  const RawSet dbl = raw(2, {0.1, 1.0 / 3.0});
  std::ostringstream out;
  save_csv(out, dbl);
  EXPECT_EQ(load_str(out.str(), Format::Csv).values, dbl.values);
}

TEST(Format, Names) {
  for (Format f : {Format::Fvecs, Format::Bvecs, Format::Idx, Format::Csv}) EXPECT_EQ(parse_format(to_string(f)), f);
  EXPECT_EQ(code_of([] { parse_format("hdf5"); }), ErrorCode::InvalidArgument);
}

TEST(Normalize, Examples) {
  const VectorSet v = normalize(raw(2, {3, 4}));
  EXPECT_NEAR(v.row(0)[0], 0.6, 0x1p-50);
  EXPECT_NEAR(v.row(0)[1], 0.8, 0x1p-50);
  EXPECT_EQ(v.norms[0], 5.0);

  const VectorSet u = normalize(raw(3, {0, 1, 0}));
  EXPECT_EQ(u.row(0)[1], 1.0);
  EXPECT_EQ(u.norms[0], 1.0);

  const VectorSet z = normalize(raw(2, {1, 0, 0, 0, 0, 2}));
  EXPECT_EQ(z.size(), 2u);
  EXPECT_EQ(z.dropped, 1u);
  EXPECT_EQ(z.origin, (std::vector<std::size_t>{0, 2}));

  EXPECT_EQ(code_of([] { normalize(raw(2, {0, 0, 0, 0})); }), ErrorCode::AllZero);
  EXPECT_EQ(code_of([] { normalize(raw(2, {NAN, 0})); }), ErrorCode::NonFinite);
}

TEST(Normalize, IdempotentAndRecoversOriginal) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g(0.0, 30.0);
  RawSet r = raw(17, {});
  for (int i = 0; i < 17 * 200; ++i) r.values.push_back(g(rng));
  const VectorSet once = normalize(r);
  const VectorSet twice = normalize(once);
  ASSERT_EQ(once.size(), twice.size());
  for (std::size_t i = 0; i < once.values.size(); ++i) EXPECT_NEAR(twice.values[i], once.values[i], 0x1p-40);
  for (std::size_t i = 0; i < once.size(); ++i) {
    EXPECT_NEAR(norm(once.row(i)), 1.0, 0x1p-40);
    EXPECT_NEAR(twice.norms[i], once.norms[i], once.norms[i] * 0x1p-40);
    for (std::size_t k = 0; k < 17; ++k) {
      const double orig = r.row(i)[k];
      EXPECT_LE(std::abs(once.norms[i] * once.row(i)[k] - orig), std::abs(orig) * 0x1p-30 + 1e-300);
    }
  }
}

TEST(GeneralInner, ScalesUnitEstimate) {
  const Codec codec(GridParams(8, Rational(1, 20)));
  std::mt19937_64 rng(5);
  const auto x = ipq::testing::random_unit(rng, 8), y = ipq::testing::random_unit(rng, 8);
  const CodeWord cx = codec.encode(quantize(x, codec.grid())), cy = codec.encode(quantize(y, codec.grid()));
  const double unit = estimate_inner(codec, cx, cy);
  EXPECT_EQ(general_inner(codec, cx, cy, 1.0, 1.0), unit);
  EXPECT_EQ(general_inner(codec, cx, cy, 2.0, 3.0), 6.0 * unit);
  EXPECT_EQ(code_of([&] { general_inner(codec, cx, cy, 0.0, 1.0); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { general_inner(codec, cx, cy, 1.0, -2.0); }), ErrorCode::InvalidArgument);
}

TEST(GeneralInner, ErrorBoundOnScaledPairs) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> scale(0.01, 100.0);
  const Rational delta(1, 10);
  const Codec codec(GridParams(32, delta));
  for (int trial = 0; trial < 2000; ++trial) {
    RawSet r = raw(32, {});
    const double sx = scale(rng), sy = scale(rng);
    for (double v : ipq::testing::random_unit(rng, 32)) r.values.push_back(v * sx);
    for (double v : ipq::testing::random_unit(rng, 32)) r.values.push_back(v * sy);
    const VectorSet s = normalize(r);
    const CodeWord cx = codec.encode(quantize(s.row(0), codec.grid()));
    const CodeWord cy = codec.encode(quantize(s.row(1), codec.grid()));
    const double truth = dot(r.row(0), r.row(1));
    const double bound = s.norms[0] * s.norms[1] * worst_case_error(delta, distance(s.row(0), s.row(1)));
    EXPECT_LE(std::abs(general_inner(codec, cx, cy, s.norms[0], s.norms[1]) - truth), bound * (1 + 1e-9) + 1e-12);
  }
}

TEST(SamplePairs, DeterministicDistinctOrdered) {
  const auto a = sample_pairs(1000, 2000, 42);
  EXPECT_EQ(a, sample_pairs(1000, 2000, 42));
  EXPECT_NE(a, sample_pairs(1000, 2000, 43));
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& p : a) {
    EXPECT_LT(p.first, p.second);
    EXPECT_LT(p.second, 1000u);
    EXPECT_TRUE(seen.emplace(p.first, p.second).second);
  }
}

TEST(SamplePairs, DenseRequestCoversAllPairs) {
  const auto a = sample_pairs(5, 10, 1);
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& p : a) seen.emplace(p.first, p.second);
  EXPECT_EQ(seen.size(), 10u);
}

TEST(SamplePairs, Errors) {
  EXPECT_EQ(code_of([] { sample_pairs(1, 1, 0); }), ErrorCode::SetTooSmall);
  EXPECT_EQ(code_of([] { sample_pairs(4, 7, 0); }), ErrorCode::SetTooSmall);
  EXPECT_EQ(code_of([] { sample_pairs(4, 0, 0); }), ErrorCode::InvalidArgument);
}

TEST(ReadPairs, ParsesAndRejects) {
  std::istringstream ok("0 1\n\n  5\t7  \n3 2\r\n");
  EXPECT_EQ(read_pairs(ok), (std::vector<IndexPair>{{0, 1}, {5, 7}, {3, 2}}));
  std::istringstream bad("0 1\n2 x\n");
  EXPECT_EQ(code_of([&] { read_pairs(bad); }), ErrorCode::ParseError);
  std::istringstream extra("0 1 2\n");
  EXPECT_EQ(code_of([&] { read_pairs(extra); }), ErrorCode::ParseError);
}
