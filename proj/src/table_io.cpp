#include "fairbid/table_io.hpp"

#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace fairbid {

namespace {

constexpr const char* kMagic = "fairbid-table";
constexpr int kVersion = 1;

std::string fmt(double d) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, d);
  if (ec != std::errc()) throw std::runtime_error("table_io: number format");
  return std::string(buf, ptr);
}

double parse_double(const std::string& s) {
  double d;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), d);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::invalid_argument("table_io: bad number '" + s + "'");
  return d;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  if (!out.empty() && !out.back().empty() && out.back().back() == '\r')
    out.back().pop_back();
  return out;
}

struct Header {
  std::string kind;
  std::map<std::string, std::string> fields;

  const std::string& need(const std::string& key) const {
    auto it = fields.find(key);
    if (it == fields.end())
      throw std::invalid_argument("table_io: missing header field '" + key + "'");
    return it->second;
  }
};

Header read_header(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument("table_io: empty input");
  auto magic = split(line, ',');
  if (magic.size() != 3 || magic[0] != kMagic ||
      magic[1] != std::to_string(kVersion))
    throw std::invalid_argument("table_io: not a fairbid table file");
  Header h;
  h.kind = magic[2];
  while (std::getline(in, line)) {
    auto kv = split(line, ',');
    if (kv.size() >= 2 && kv[0] == "rows") return h;  // column list follows
    if (kv.size() != 2)
      throw std::invalid_argument("table_io: malformed header line '" + line + "'");
    h.fields[kv[0]] = kv[1];
  }
  throw std::invalid_argument("table_io: missing rows marker");
}

void write_common_header(std::ostream& out, const char* kind, double epsilon,
                         double converged_delta, long iterations,
                         uint64_t fingerprint) {
  out << kMagic << ',' << kVersion << ',' << kind << "\n";
  out << "epsilon," << fmt(epsilon) << "\n";
  out << "converged_delta," << fmt(converged_delta) << "\n";
  out << "iterations," << iterations << "\n";
  char fp[32];
  std::snprintf(fp, sizeof fp, "%016llx",
                static_cast<unsigned long long>(fingerprint));
  out << "model_fingerprint," << fp << "\n";
}

uint64_t parse_fingerprint(const std::string& s) {
  return std::strtoull(s.c_str(), nullptr, 16);
}

}  // namespace

void save_table(const ParityValueTable& table, std::ostream& out) {
  write_common_header(out, "parity", table.epsilon, table.converged_delta,
                      table.iterations, table.model_fingerprint);
  out << "K," << table.K << "\n";
  out << "rows,k,theta,V,Phi\n";
  for (int k = -table.K; k <= table.K; ++k)
    for (Group g : {Group::male, Group::female})
      out << k << ',' << group_name(g) << ',' << fmt(table.value(k, g)) << ','
          << fmt(table.phi(k, g)) << "\n";
}

void save_table(const RatioValueTable& table, std::ostream& out) {
  write_common_header(out, "ratio", table.epsilon, table.converged_delta,
                      table.iterations, table.model_fingerprint);
  out << "r," << fmt(table.r) << "\n";
  out << "K," << fmt(table.K) << "\n";
  out << "p," << fmt(table.p) << "\n";
  out << "mu," << table.mu << "\n";
  out << "n_w_max," << table.n_w_max << "\n";
  out << "rows,n_m,n_w,theta,V,Phi\n";
  for (long n_m = 0; n_m <= table.mu; ++n_m)
    for (long n_w = 0; n_w <= table.n_w_max; ++n_w)
      for (Group g : {Group::male, Group::female})
        out << n_m << ',' << n_w << ',' << group_name(g) << ','
            << fmt(table.value(n_m, n_w, g)) << ',' << fmt(table.phi(n_m, n_w, g))
            << "\n";
}

ParityValueTable load_parity_table(std::istream& in) {
  Header h = read_header(in);
  if (h.kind != "parity")
    throw std::invalid_argument("table_io: expected a parity table, got " + h.kind);
  ParityValueTable t;
  t.K = static_cast<int>(std::stol(h.need("K")));
  t.epsilon = parse_double(h.need("epsilon"));
  t.converged_delta = parse_double(h.need("converged_delta"));
  t.iterations = std::stol(h.need("iterations"));
  t.model_fingerprint = parse_fingerprint(h.need("model_fingerprint"));
  const int n = 2 * (2 * t.K + 1);
  t.V.assign(n, 0.0);
  t.Phi.assign(n, 0.0);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto f = split(line, ',');
    if (f.size() != 4)
      throw std::invalid_argument("table_io: malformed row '" + line + "'");
    int k = static_cast<int>(std::stol(f[0]));
    Group g = group_from_name(f[1]);
    if (!t.contains(k)) throw std::invalid_argument("table_io: row k out of range");
    t.V[t.index(k, g)] = parse_double(f[2]);
    t.Phi[t.index(k, g)] = parse_double(f[3]);
    ++rows;
  }
  if (rows != n) throw std::invalid_argument("table_io: wrong parity row count");
  return t;
}

RatioValueTable load_ratio_table(std::istream& in) {
  Header h = read_header(in);
  if (h.kind != "ratio")
    throw std::invalid_argument("table_io: expected a ratio table, got " + h.kind);
  RatioValueTable t;
  t.r = parse_double(h.need("r"));
  t.K = parse_double(h.need("K"));
  t.p = parse_double(h.need("p"));
  t.mu = static_cast<int>(std::stol(h.need("mu")));
  t.n_w_max = static_cast<int>(std::stol(h.need("n_w_max")));
  t.epsilon = parse_double(h.need("epsilon"));
  t.converged_delta = parse_double(h.need("converged_delta"));
  t.iterations = std::stol(h.need("iterations"));
  t.model_fingerprint = parse_fingerprint(h.need("model_fingerprint"));
  const std::size_t n = static_cast<std::size_t>((t.mu + 1) * (t.n_w_max + 1) * 2);
  t.V.assign(n, 0.0);
  t.Phi.assign(n, 0.0);
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto f = split(line, ',');
    if (f.size() != 5)
      throw std::invalid_argument("table_io: malformed row '" + line + "'");
    long n_m = std::stol(f[0]);
    long n_w = std::stol(f[1]);
    Group g = group_from_name(f[2]);
    if (!t.in_grid(n_m, n_w))
      throw std::invalid_argument("table_io: row out of grid");
    t.V[t.index(n_m, n_w, g)] = parse_double(f[3]);
    t.Phi[t.index(n_m, n_w, g)] = parse_double(f[4]);
    ++rows;
  }
  if (rows != n) throw std::invalid_argument("table_io: wrong ratio row count");
  return t;
}

std::string peek_table_kind(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument("table_io: empty input");
  auto magic = split(line, ',');
  if (magic.size() != 3 || magic[0] != kMagic)
    throw std::invalid_argument("table_io: not a fairbid table file");
  in.clear();
  in.seekg(0);
  return magic[2];
}

namespace {
std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}
}  // namespace

void save_table_file(const ParityValueTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  save_table(table, out);
}

void save_table_file(const RatioValueTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  save_table(table, out);
}

ParityValueTable load_parity_table_file(const std::string& path) {
  auto in = open_in(path);
  return load_parity_table(in);
}

RatioValueTable load_ratio_table_file(const std::string& path) {
  auto in = open_in(path);
  return load_ratio_table(in);
}

std::string table_kind_of_file(const std::string& path) {
  auto in = open_in(path);
  return peek_table_kind(in);
}

}  // namespace fairbid
