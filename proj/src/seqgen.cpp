#include "hardyseq/seqgen.hpp"

#include <istream>
#include <ostream>
#include <regex>

#include "parallel.hpp"

namespace hardyseq {

int chi(const FractionalValue& v) {
  if (v.near_boundary) {
    throw Error(ErrorKind::BoundaryUnresolved, "fractional value is unresolved at the boundary");
  }
  return v.half;
}

BinarySequence BinarySequence::prefix(std::size_t n) const {
  if (n > signs.size()) throw Error(ErrorKind::InvalidArgument, "prefix longer than sequence");
  BinarySequence out;
  out.signs.assign(signs.begin(), signs.begin() + static_cast<std::ptrdiff_t>(n));
  out.meta = meta;
  return out;
}

BinarySequence generate_sequence(const SubpolyFunction& f, std::size_t n,
                                 const PrecisionPolicy& policy, unsigned threads) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "sequence length must be >= 1");
  BinarySequence seq;
  seq.signs.resize(n);
  seq.meta.function_text = f.to_string();
  seq.meta.policy = policy;

  const std::size_t chunks = detail::chunk_count(n, threads);
  std::vector<std::size_t> escalations(chunks, 0);
  detail::parallel_chunks(n, threads, [&](std::size_t w, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const FractionalValue v = eval_frac(f, static_cast<std::int64_t>(i + 1), policy);
      seq.signs[i] = static_cast<std::int8_t>(chi(v));
      if (v.escalated) ++escalations[w];
    }
  });
  for (auto e : escalations) seq.meta.boundary_escalations += e;
  return seq;
}

void write_sequence(std::ostream& out, const BinarySequence& seq) {
  out << "# hardyseq v1 N=" << seq.size() << " f=\"" << seq.meta.function_text << "\"\n";
  std::string line(seq.size(), '+');
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (seq.signs[i] < 0) line[i] = '-';
  }
  out << line << '\n';
}

BinarySequence read_sequence(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw Error(ErrorKind::Syntax, "empty sequence file");
  static const std::regex kHeader(R"re(# hardyseq v1 N=(\d+) f="([^"]*)"\s*)re");
  std::smatch m;
  if (!std::regex_match(header, m, kHeader)) {
    throw Error(ErrorKind::Syntax, "bad sequence header: " + header);
  }
  const std::size_t n = std::stoull(m[1].str());
  BinarySequence seq;
  seq.meta.function_text = m[2].str();
  std::string body;
  std::getline(in, body);
  if (!body.empty() && body.back() == '\r') body.pop_back();
  if (body.size() != n) {
    throw Error(ErrorKind::Syntax, "sequence line has " + std::to_string(body.size()) +
                                       " symbols, header says " + std::to_string(n));
  }
  seq.signs.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (body[i] == '+') {
      seq.signs[i] = 1;
    } else if (body[i] == '-') {
      seq.signs[i] = -1;
    } else {
      throw Error(ErrorKind::Syntax, "sequence symbols must be '+' or '-'");
    }
  }
  return seq;
}

}  // namespace hardyseq
