#include <gtest/gtest.h>

#include "sumindex/bits.hpp"
#include "sumindex/errors.hpp"

using namespace sumindex;

TEST(Bits, FieldWidth) {
  EXPECT_EQ(field_width(0), 0u);
  EXPECT_EQ(field_width(1), 0u);
  EXPECT_EQ(field_width(2), 1u);
  EXPECT_EQ(field_width(3), 2u);
  EXPECT_EQ(field_width(4096), 12u);
  EXPECT_EQ(field_width(4097), 13u);
  EXPECT_EQ(field_width(~0ULL), 64u);
}

TEST(Bits, RoundTripMixedWidths) {
  BitWriter w;
  w.put_magic("TEST");
  w.put(5, 3);
  w.put_bool(true);
  w.put(0x1FFFF, 17);
  w.put_u64(0xDEADBEEFCAFEF00DULL);
  w.align();
  w.put_f64(-2.5);
  const std::uint8_t blob[] = {1, 2, 3};
  w.put_blob(blob);
  EXPECT_EQ(w.payload_bits() + w.padding_bits(), w.total_bits());
  EXPECT_EQ(w.padding_bits(), 3u);
  const auto bytes = std::move(w).finish();

  BitReader r(bytes);
  r.expect_magic("TEST");
  EXPECT_EQ(r.get(3), 5u);
  EXPECT_TRUE(r.get_bool());
  EXPECT_EQ(r.get(17), 0x1FFFFu);
  EXPECT_EQ(r.get_u64(), 0xDEADBEEFCAFEF00DULL);
  r.align();
  EXPECT_EQ(r.get_f64(), -2.5);
  EXPECT_EQ(r.get_blob(), std::vector<std::uint8_t>({1, 2, 3}));
  EXPECT_TRUE(r.at_end());
}

TEST(Bits, LittleEndianBytes) {
  BitWriter w;
  w.put_u16(0x0201);
  EXPECT_EQ(w.bytes(), std::vector<std::uint8_t>({1, 2}));
}

TEST(Bits, ReadPastEndThrows) {
  BitWriter w;
  w.put(3, 5);
  const auto bytes = std::move(w).finish();
  BitReader r(bytes);
  r.get(8);
  EXPECT_THROW(r.get(1), FormatError);
  BitReader m(bytes);
  EXPECT_THROW(m.expect_magic("SIAD"), FormatError);
}

TEST(Bits, Fnv1aKnownVector) {
  const std::uint8_t a[] = {'a'};
  EXPECT_EQ(fnv1a64(a), 0xAF63DC4C8601EC8CULL);
  EXPECT_EQ(fnv1a64({}), 0xCBF29CE484222325ULL);
}
