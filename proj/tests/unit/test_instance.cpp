#include <gtest/gtest.h>

#include <filesystem>

#include "sumindex/errors.hpp"
#include "sumindex/instance.hpp"
#include "sumindex/oracle.hpp"

using namespace sumindex;

TEST(Instance, FormatParseRoundTrip) {
  for (InstanceKind kind : {InstanceKind::sum3, InstanceKind::sumk, InstanceKind::xork}) {
    GenParams gp{kind, 20, 25, 4, 30, 5000};
    const Instance a = gen_instance(Profile::uniform, 1, gp);
    const Instance b = parse_instance(format_instance(a));
    EXPECT_EQ(a, b) << kind_name(kind);
    EXPECT_EQ(instance_digest(a), instance_digest(b));
  }
}

TEST(Instance, DigestSeesChanges) {
  Instance a = gen_instance(Profile::uniform, 1, {});
  Instance b = a;
  b.A[3] ^= 1;
  EXPECT_NE(instance_digest(a), instance_digest(b));
}

TEST(Instance, MalformedTextRejected) {
  EXPECT_THROW(parse_instance(""), FormatError);
  EXPECT_THROW(parse_instance("sum3 2 2 3 0\n1\n2\n3\n4\n"), FormatError);
  EXPECT_THROW(parse_instance("sum3 2 2 3 0 10\n1\n2\n3\n"), FormatError);
  EXPECT_THROW(parse_instance("sum3 2 2 3 0 10\n1\nx\n3\n4\n"), FormatError);
  EXPECT_THROW(parse_instance("sum3 2 2 3 0 10\n1\n2\n3\n40\n"), FormatError);
  EXPECT_THROW(parse_instance("cube 1 0 3 0 10\n1\n"), FormatError);
  EXPECT_NO_THROW(parse_instance("sum3 2 2 3 0 10\n1\n2\n3\n4\n"));
}

TEST(Instance, ValidateInvariants) {
  Instance i;
  i.kind = InstanceKind::sum3;
  i.A = {1, 2, 3};
  i.B = {1};
  i.M = 10;
  EXPECT_THROW(validate(i), std::invalid_argument);  // n > m
  i.B = {1, 2, 30};
  EXPECT_THROW(validate(i), std::invalid_argument);
  i.B = {1, 2, 3};
  EXPECT_NO_THROW(validate(i));
}

TEST(Instance, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "sumindex_instance_test.txt";
  const Instance a = gen_instance(Profile::duplicates, 4, {});
  write_instance_file(path, a);
  EXPECT_EQ(read_instance_file(path), a);
  std::filesystem::remove(path);
  EXPECT_THROW(read_instance_file(path), std::runtime_error);
}

TEST(Instance, TupleValue) {
  Instance i;
  i.kind = InstanceKind::sumk;
  i.k = 4;
  i.A = {1, 10, 100};
  i.M = 100;
  EXPECT_EQ(tuple_value(i, {0, 1, 2}), 111u);
  EXPECT_THROW(tuple_value(i, {0, 1}), std::invalid_argument);
}
