#include "sumindex/instance.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "sumindex/bits.hpp"
#include "sumindex/errors.hpp"

namespace sumindex {

const char* kind_name(InstanceKind kind) noexcept {
  switch (kind) {
    case InstanceKind::sum3: return "sum3";
    case InstanceKind::sumk: return "sumk";
    case InstanceKind::xork: return "xork";
  }
  return "unknown";
}

InstanceKind parse_kind(std::string_view name) {
  if (name == "sum3" || name == "3sum") return InstanceKind::sum3;
  if (name == "sumk" || name == "ksum") return InstanceKind::sumk;
  if (name == "xork" || name == "kxor") return InstanceKind::xork;
  throw std::invalid_argument("unknown instance kind: " + std::string(name));
}

std::uint64_t Instance::m() const noexcept {
  if (kind == InstanceKind::sum3) return B.size();
  std::uint64_t out = 1;
  for (unsigned i = 0; i + 2 < k; ++i) {
    if (A.size() != 0 && out > ~0ULL / A.size()) return ~0ULL;
    out *= A.size();
  }
  return out;
}

std::uint64_t Instance::query_range() const {
  switch (kind) {
    case InstanceKind::sum3: return 2 * M + 1;
    case InstanceKind::sumk: return static_cast<std::uint64_t>(k - 1) * M + 1;
    case InstanceKind::xork: return ell_bits >= 64 ? ~0ULL : 1ULL << ell_bits;
  }
  return 0;
}

void validate(const Instance& inst) {
  if (inst.A.empty()) throw std::invalid_argument("instance has no elements");
  switch (inst.kind) {
    case InstanceKind::sum3:
      if (inst.B.empty()) throw std::invalid_argument("sum3 instance needs B");
      if (inst.A.size() > inst.B.size()) throw std::invalid_argument("sum3 needs n <= m");
      break;
    case InstanceKind::sumk:
    case InstanceKind::xork:
      if (inst.k < 3) throw std::invalid_argument("k must be at least 3");
      if (!inst.B.empty()) throw std::invalid_argument("B is derived for this kind");
      break;
  }
  if (inst.kind == InstanceKind::xork) {
    if (inst.ell_bits == 0 || inst.ell_bits > 63)
      throw std::invalid_argument("ell must lie in [1, 63]");
    for (std::uint64_t a : inst.A)
      if (a >> inst.ell_bits) throw std::invalid_argument("vector wider than ell bits");
  } else {
    if (inst.M > (1ULL << 40)) throw std::invalid_argument("M above 2^40 is not supported");
    for (std::uint64_t v : inst.A)
      if (v > inst.M) throw std::invalid_argument("element exceeds M");
    for (std::uint64_t v : inst.B)
      if (v > inst.M) throw std::invalid_argument("element exceeds M");
  }
}

std::string format_instance(const Instance& inst) {
  std::ostringstream out;
  out << kind_name(inst.kind) << ' ' << inst.n() << ' ' << inst.B.size() << ' ' << inst.k << ' '
      << inst.ell_bits << ' ' << inst.M << '\n';
  if (inst.kind == InstanceKind::xork) {
    out << std::hex;
    for (std::uint64_t a : inst.A) out << a << '\n';
  } else {
    for (std::uint64_t a : inst.A) out << a << '\n';
    for (std::uint64_t b : inst.B) out << b << '\n';
  }
  return out.str();
}

namespace {

std::uint64_t parse_number(std::string_view token, int base, std::size_t line) {
  std::uint64_t v = 0;
  if (base == 16 && (token.starts_with("0x") || token.starts_with("0X"))) token.remove_prefix(2);
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v, base);
  if (ec != std::errc() || ptr != token.data() + token.size() || token.empty())
    throw FormatError("bad number on line " + std::to_string(line) + ": '" + std::string(token) +
                      "'");
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

Instance parse_instance(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    if (!line.empty() && line.front() != '#') lines.push_back(line);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  if (lines.empty()) throw FormatError("empty instance file");

  std::vector<std::string_view> head;
  for (std::string_view h = lines[0]; !h.empty();) {
    const std::size_t sp = h.find_first_of(" \t");
    head.push_back(h.substr(0, sp));
    if (sp == std::string_view::npos) break;
    h = trim(h.substr(sp));
  }
  if (head.size() != 6) throw FormatError("header must read 'kind n m k ell M'");
  Instance inst;
  try {
    inst.kind = parse_kind(head[0]);
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  const std::uint64_t n = parse_number(head[1], 10, 1);
  const std::uint64_t m = parse_number(head[2], 10, 1);
  inst.k = static_cast<unsigned>(parse_number(head[3], 10, 1));
  inst.ell_bits = static_cast<unsigned>(parse_number(head[4], 10, 1));
  inst.M = parse_number(head[5], 10, 1);
  if (lines.size() - 1 != n + m)
    throw FormatError("expected " + std::to_string(n + m) + " values, found " +
                      std::to_string(lines.size() - 1));
  const int base = inst.kind == InstanceKind::xork ? 16 : 10;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::uint64_t v = parse_number(lines[i], base, i + 1);
    (i <= n ? inst.A : inst.B).push_back(v);
  }
  try {
    validate(inst);
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  return inst;
}

void write_instance_file(const std::filesystem::path& path, const Instance& inst) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << format_instance(inst);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Instance read_instance_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

std::uint64_t instance_digest(const Instance& inst) {
  const std::string text = format_instance(inst);
  return fnv1a64(std::span<const std::uint8_t>(
      reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::uint64_t tuple_value(const Instance& inst, const std::vector<std::uint64_t>& tuple) {
  if (tuple.size() != inst.arity()) throw std::invalid_argument("tuple arity mismatch");
  if (inst.kind == InstanceKind::sum3) return inst.A.at(tuple[0]) + inst.B.at(tuple[1]);
  std::uint64_t v = 0;
  for (std::uint64_t i : tuple) v = inst.kind == InstanceKind::xork ? v ^ inst.A.at(i) : v + inst.A.at(i);
  return v;
}

}  // namespace sumindex
