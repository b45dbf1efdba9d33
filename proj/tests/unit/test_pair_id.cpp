#include <gtest/gtest.h>

#include "dfp/pair_id.hpp"

using namespace dfp;

TEST(PairId, SymmetricEncoding) {
  EXPECT_EQ(encode_pair(3, 7), encode_pair(7, 3));
  EXPECT_EQ(encode_pair(0, 1).value, 0u);
  EXPECT_EQ(encode_pair(0, 2).value, 1u);
  EXPECT_EQ(encode_pair(1, 2).value, 2u);
}

TEST(PairId, BijectiveOnSmallN) {
  const Vertex n = 300;
  std::uint32_t expected = 0;
  for (Vertex v = 1; v < n; ++v) {
    for (Vertex u = 0; u < v; ++u) {
      const PairId p = encode_pair(u, v);
      ASSERT_EQ(p.value, expected++);
      const auto [a, b] = decode_pair(p);
      ASSERT_EQ(a, u);
      ASSERT_EQ(b, v);
    }
  }
  EXPECT_EQ(expected, pair_count(n));
}

TEST(PairId, DecodeNearTheTop) {
  const Vertex top = kMaxVertices - 1;
  for (Vertex u : {0u, 1u, top / 2, top - 1}) {
    const auto [a, b] = decode_pair(encode_pair(u, top));
    EXPECT_EQ(a, u);
    EXPECT_EQ(b, top);
  }
  EXPECT_LE(pair_count(kMaxVertices), 0xffffffffull);
  EXPECT_GT(pair_count(kMaxVertices + 1), 0xffffffffull);
}
