#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "l2approx/errors.hpp"
#include "l2approx/homology.hpp"
#include "l2approx/io.hpp"

using namespace l2approx;

namespace {

std::string data(const char* name) { return std::string(TEST_DATA_DIR "/") + name; }

// Scratch file that cleans up after itself.
struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const std::string& contents, const char* ext = ".grp") {
    static int counter = 0;
    path = std::filesystem::temp_directory_path() /
           ("l2approx_io_test_" + std::to_string(counter++) + ext);
    std::ofstream out(path);
    out << contents;
  }
  ~TempFile() { std::filesystem::remove(path); }
};

}  // namespace

TEST_CASE("group files of every kind") {
  OracleRef z = load_group(data("z.grp"));
  CHECK(z->alphabet().size() == 1);
  CHECK(z->is_identity(parse_word("t t^-1", z->alphabet())) == Ternary::True);

  OracleRef f2 = load_group(data("f2.grp"));
  CHECK(f2->alphabet().size() == 2);
  CHECK(f2->is_identity(parse_word("a b a^-1 b^-1", f2->alphabet())) == Ternary::False);

  OracleRef fin = load_group(data("z2.grp"));  // table referenced relative to the file
  CHECK(fin->is_identity(parse_word("s s", fin->alphabet())) == Ternary::True);
  CHECK(fin->is_identity(parse_word("s", fin->alphabet())) == Ternary::False);

  OracleRef lamp = load_group(data("lamp.grp"));
  CHECK(lamp->is_identity(parse_word("a a", lamp->alphabet())) == Ternary::True);

  OracleRef prod = load_group(data("prod.grp"));
  CHECK(prod->alphabet().size() == 2);
  CHECK(prod->is_identity(parse_word("t s t^-1 s^-1", prod->alphabet())) == Ternary::True);

  OracleRef fp = load_group(data("fp_z2.grp"));
  CHECK(fp->is_identity(parse_word("a b a^-1 b^-1", fp->alphabet())) == Ternary::True);
  CHECK(fp->is_identity(parse_word("a", fp->alphabet())) == Ternary::False);
}

TEST_CASE("group file errors carry file and line") {
  CHECK_THROWS_AS(load_group("/nonexistent/of_course.grp"), ParseError);

  TempFile bad_kind("group quux x y\n");
  try {
    load_group(bad_kind.path.string());
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.file == bad_kind.path.string());
    CHECK(e.line == 1);
    CHECK(std::string(e.what()).find(bad_kind.path.string()) != std::string::npos);
  }

  TempFile dup("group free a a\n");
  CHECK_THROWS_AS(load_group(dup.path.string()), ParseError);

  TempFile fp_no_bar("group fp\n");
  CHECK_THROWS_AS(load_group(fp_no_bar.path.string()), ParseError);
}

TEST_CASE("table files") {
  TableFile t = load_table(data("s3.tbl"));
  CHECK(t.quotient.order == 6);
  CHECK(t.alphabet.size() == 2);
  CHECK(t.quotient.generators_generate());

  TempFile short_rows("order 3\n0 1 2\n1 2 0\ngen x 1\n", ".tbl");
  try {
    load_table(short_rows.path.string());
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line > 0);
  }

  TempFile out_of_range("order 2\n0 5\n1 0\ngen s 1\n", ".tbl");
  CHECK_THROWS_AS(load_table(out_of_range.path.string()), ParseError);

  TempFile no_gens("order 2\n0 1\n1 0\n", ".tbl");
  CHECK_THROWS_AS(load_table(no_gens.path.string()), ParseError);
}

TEST_CASE("matrix files") {
  OracleRef z = load_group(data("z.grp"));
  GroupRingMatrix a = load_matrix(data("oneminus_t.mat"), z);
  CHECK(a.rows() == 1);
  CHECK(a.cols() == 1);
  CHECK(a.at(0, 0).coefficient_one() == 1);
  CHECK(a.at(0, 0).coefficient(parse_word("t", z->alphabet())) == -1);

  GroupRingMatrix zero = load_matrix(data("zero.mat"), z);
  CHECK(zero.rows() == 2);
  CHECK(zero.cols() == 2);
  CHECK(zero.term_count() == 0);

  GroupRingMatrix laurent = load_matrix(data("laurent.mat"), z);
  CHECK(laurent.at(0, 0).coefficient(parse_word("t^-1", z->alphabet())) == -1);
  CHECK(laurent.at(0, 0).coeff_abs_sum() == 4);

  OracleRef f2 = load_group(data("f2.grp"));
  GroupRingMatrix col = load_matrix(data("f2col.mat"), f2);
  CHECK(col.rows() == 2);
  CHECK(col.cols() == 1);
  CHECK(col.at(1, 0).coefficient(parse_word("b", f2->alphabet())) == 1);

  // words outside the oracle alphabet are reported with a location
  try {
    load_matrix(data("f2col.mat"), z);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.file == data("f2col.mat"));
    CHECK(e.line > 0);
  }

  TempFile bad_shape("matrix 2 2\n1 ; t\n", ".mat");
  CHECK_THROWS_AS(load_matrix(bad_shape.path.string(), z), ParseError);

  TempFile trailing("matrix 1 1\n1\nextra\n", ".mat");
  CHECK_THROWS_AS(load_matrix(trailing.path.string(), z), ParseError);
}

TEST_CASE("complex files") {
  OracleRef z = load_group(data("z.grp"));
  FinPresComplex c = load_complex(data("circle.cpx"), z);
  CHECK(c.length == 0);
  REQUIRE(c.ranks.size() == 2);
  CHECK(c.ranks[0] == 1);
  CHECK(c.ranks[1] == 1);
  REQUIRE(c.boundaries.size() == 1);
  CHECK(c.boundaries[0].at(0, 0).coefficient(parse_word("t", z->alphabet())) == 1);
  CHECK(!validate_complex(c).has_value());

  TempFile wrong_rank("complex 0\nranks 1 2\nmatrix 1 1\nt - 1\n", ".cpx");
  CHECK_THROWS_AS(load_complex(wrong_rank.path.string(), z), ParseError);

  TempFile missing_block("complex 1\nranks 1 1 1\nmatrix 1 1\nt - 1\n", ".cpx");
  CHECK_THROWS_AS(load_complex(missing_block.path.string(), z), ParseError);
}

TEST_CASE("ring element grammar") {
  OracleRef z = load_group(data("z.grp"));
  GroupRingElement e = parse_ring_element("2 - 1*t - t^-1", z);
  CHECK(e.coefficient_one() == 2);
  CHECK(e.coefficient(parse_word("t", z->alphabet())) == -1);
  CHECK(e.coefficient(parse_word("t^-1", z->alphabet())) == -1);

  CHECK(parse_ring_element("-3/4", z).coefficient_one() == Rational(-3, 4));
  CHECK(parse_ring_element("t", z).coefficient(parse_word("t", z->alphabet())) == 1);
  CHECK(parse_ring_element("1/2 * t^2", z)
            .coefficient(parse_word("t^2", z->alphabet())) == Rational(1, 2));
  CHECK(parse_ring_element("0", z).is_zero());
  // terms over the same group element merge
  CHECK(parse_ring_element("t + t", z).coefficient(parse_word("t", z->alphabet())) == 2);
  CHECK(parse_ring_element("1 - 1", z).is_zero());

  OracleRef f2 = load_group(data("f2.grp"));
  GroupRingElement w = parse_ring_element("2*a b^-1 a", f2);
  CHECK(w.coefficient(parse_word("a b^-1 a", f2->alphabet())) == 2);

  CHECK_THROWS_AS(parse_ring_element("", z), std::invalid_argument);
  CHECK_THROWS_AS(parse_ring_element("2 +", z), std::invalid_argument);
  CHECK_THROWS_AS(parse_ring_element("1/0 * t", z), std::invalid_argument);
  CHECK_THROWS_AS(parse_ring_element("* t", z), std::invalid_argument);
  CHECK_THROWS_AS(parse_ring_element("2 * 3", z), std::invalid_argument);
}
