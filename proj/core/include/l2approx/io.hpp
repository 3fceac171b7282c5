#pragma once

#include <string>

#include "l2approx/groupring.hpp"
#include "l2approx/homology.hpp"
#include "l2approx/oracles.hpp"

namespace l2approx {

// Group description file, line-oriented. The first meaningful line selects
// the oracle:
//   group free <name>...
//   group abelian <rank>
//   group finite <table-file>
//   group lamplighter
//   group product <file> <file>
//   group fp <name>... | "<relator>"...
// Blank lines and lines starting with '#' are skipped; referenced files are
// resolved relative to the referencing file. Throws ParseError.
OracleRef load_group(const std::string& path);

struct TableFile {
  FiniteQuotient quotient;
  Alphabet alphabet;
};

// Finite-group table file: `order <N>`, N multiplication-table rows of N
// indices (index 0 is the identity), then one `gen <name> <index>` line per
// generator. The group law is verified on load.
TableFile load_table(const std::string& path);

// Matrix file: `matrix <m> <n>` then m lines of n ';'-separated entries.
GroupRingMatrix load_matrix(const std::string& path, const OracleRef& oracle,
                            const Budget& budget = {});

// Complex file: `complex <k>`, `ranks n0 .. n_{k+1}`, then the k+1 boundary
// matrices as matrix blocks, ascending degree.
FinPresComplex load_complex(const std::string& path, const OracleRef& oracle,
                            const Budget& budget = {});

// One matrix entry: signed terms, each a word, `rational * word`, or a bare
// rational standing for a multiple of the identity. Example: 2 - 1*t - t^-1.
// Throws std::invalid_argument; file loaders wrap positions into ParseError.
GroupRingElement parse_ring_element(const std::string& text, const OracleRef& oracle,
                                    const Budget& budget = {});

}  // namespace l2approx
