#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hardyseq/hfunc.hpp"

namespace hardyseq {

// +1 for {x} in [0, 1/2), -1 for {x} in [1/2, 1).  Throws BoundaryUnresolved
// if the value is still flagged near the boundary.
int chi(const FractionalValue& v);

struct SequenceMeta {
  std::string function_text;
  PrecisionPolicy policy;
  std::size_t boundary_escalations = 0;
};

// E_N as a vector of +-1 signs; signs[n-1] = e_n.
struct BinarySequence {
  std::vector<std::int8_t> signs;
  SequenceMeta meta;

  std::size_t size() const noexcept { return signs.size(); }
  std::span<const std::int8_t> view() const noexcept { return signs; }
  // First n elements, sharing metadata.
  BinarySequence prefix(std::size_t n) const;
};

// Evaluates indices in parallel when threads != 1 (0 = hardware concurrency);
// the result does not depend on the thread count.
BinarySequence generate_sequence(const SubpolyFunction& f, std::size_t n,
                                 const PrecisionPolicy& policy = {},
                                 unsigned threads = 0);

// "# hardyseq v1 N=<N> f="<expr>"" followed by one line of '+'/'-'.
void write_sequence(std::ostream& out, const BinarySequence& seq);
BinarySequence read_sequence(std::istream& in);

}  // namespace hardyseq
