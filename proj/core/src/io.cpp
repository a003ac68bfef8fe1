#include "spp/io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "spp/errors.hpp"

namespace spp {

std::string format_double(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

namespace {

template <class T, class Fn>
std::string join(const std::vector<T>& xs, Fn fmt) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ',';
    s += fmt(xs[i]);
  }
  return s;
}

std::uint64_t to_le(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  std::uint64_t r = 0;
  for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
  return r;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw InputError(what, "bad number '" + s + "'");
  return v;
}

std::size_t parse_size(const std::string& s, const std::string& what) {
  std::size_t v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw InputError(what, "bad count '" + s + "'");
  return v;
}

/// key=value tokens after the magic word.
std::vector<std::pair<std::string, std::string>> header_tokens(std::istream& is, const std::string& magic) {
  std::string line;
  if (!std::getline(is, line)) throw InputError(magic, "missing header");
  std::istringstream ls(line);
  std::string word;
  ls >> word;
  if (word != magic) throw InputError(magic, "bad magic '" + word + "'");
  std::vector<std::pair<std::string, std::string>> out;
  while (ls >> word) {
    const auto eq = word.find('=');
    if (eq == std::string::npos) throw InputError(magic, "bad header token '" + word + "'");
    out.emplace_back(word.substr(0, eq), word.substr(eq + 1));
  }
  return out;
}

const std::string& token(const std::vector<std::pair<std::string, std::string>>& toks, const std::string& key,
                         const std::string& magic) {
  for (const auto& [k, v] : toks) {
    if (k == key) return v;
  }
  throw InputError(magic, "header lacks '" + key + "'");
}

}  // namespace

void write_field(std::ostream& os, const Field& f) {
  const Grid& g = f.grid();
  os << "HJF1 dim=" << g.dim() << " counts=" << join(g.counts(), [](std::size_t c) { return std::to_string(c); })
     << " mins=" << join(g.mins(), format_double) << " maxs=" << join(g.maxs(), format_double)
     << " periodic=" << join(g.periodic_flags(), [](bool b) { return std::string(b ? "1" : "0"); }) << '\n';
  std::vector<char> buf(f.size() * 8);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const std::uint64_t bits = to_le(std::bit_cast<std::uint64_t>(f[i]));
    std::memcpy(buf.data() + 8 * i, &bits, 8);
  }
  os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

Field read_field(std::istream& is) {
  const std::string m = "HJF1";
  const auto toks = header_tokens(is, m);
  const std::size_t dim = parse_size(token(toks, "dim", m), m);
  std::vector<std::size_t> counts;
  std::vector<double> mins, maxs;
  std::vector<bool> periodic;
  for (const auto& s : split(token(toks, "counts", m), ',')) counts.push_back(parse_size(s, m));
  for (const auto& s : split(token(toks, "mins", m), ',')) mins.push_back(parse_double(s, m));
  for (const auto& s : split(token(toks, "maxs", m), ',')) maxs.push_back(parse_double(s, m));
  for (const auto& s : split(token(toks, "periodic", m), ',')) periodic.push_back(s == "1");
  if (counts.size() != dim || mins.size() != dim || maxs.size() != dim || periodic.size() != dim) {
    throw InputError(m, "header lists disagree with dim");
  }
  Grid g;
  try {
    g = make_grid(mins, maxs, counts, periodic);
  } catch (const std::invalid_argument& e) {
    throw InputError(m, e.what());
  }
  std::vector<char> buf(g.size() * 8);
  if (!is.read(buf.data(), static_cast<std::streamsize>(buf.size()))) throw InputError(m, "payload too short");
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, buf.data() + 8 * i, 8);
    v[i] = std::bit_cast<double>(to_le(bits));
  }
  return Field(g, std::move(v));
}

void write_time_field(std::ostream& os, const TimeField& tf) {
  os << "HJT1 n=" << tf.size() << " times=" << join(tf.times(), format_double) << '\n';
  for (const Field& f : tf.fields()) write_field(os, f);
}

TimeField read_time_field(std::istream& is) {
  const std::string m = "HJT1";
  const auto toks = header_tokens(is, m);
  const std::size_t n = parse_size(token(toks, "n", m), m);
  std::vector<double> times;
  if (n > 0) {
    for (const auto& s : split(token(toks, "times", m), ',')) times.push_back(parse_double(s, m));
  }
  if (times.size() != n) throw InputError(m, "time list disagrees with n");
  TimeField tf;
  for (double t : times) tf.push_back(t, read_field(is));
  return tf;
}

void write_trajectory(std::ostream& os, const Trajectory& traj) {
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const State3& x = traj.states[k];
    const Control& u = traj.controls[k];
    const Disturbance& d = traj.disturbances[k];
    os << format_double(traj.times[k]) << ' ' << format_double(x.px) << ' ' << format_double(x.py) << ' '
       << format_double(x.theta) << ' ' << format_double(u.v) << ' ' << format_double(u.omega) << ' '
       << format_double(d.dx) << ' ' << format_double(d.dy) << ' ' << format_double(d.dtheta) << '\n';
  }
}

Trajectory read_trajectory(std::istream& is) {
  Trajectory t;
  std::string line;
  std::size_t n = 0;
  while (std::getline(is, line)) {
    ++n;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string w[9];
    for (auto& s : w) {
      if (!(ls >> s)) throw InputError("trajectory line " + std::to_string(n), "expected 9 columns");
    }
    const std::string at = "trajectory line " + std::to_string(n);
    double v[9];
    for (int i = 0; i < 9; ++i) v[i] = parse_double(w[i], at);
    t.push(v[0], {v[1], v[2], v[3]}, {v[4], v[5]}, {v[6], v[7], v[8]});
  }
  if (t.size() >= 2) t.dt = t.times[1] - t.times[0];
  return t;
}

namespace {

std::ofstream open_out(const std::filesystem::path& p, bool binary) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream os(p, binary ? std::ios::binary : std::ios::out);
  if (!os) throw Error("cannot write " + p.string());
  return os;
}

std::ifstream open_in(const std::filesystem::path& p, bool binary) {
  std::ifstream is(p, binary ? std::ios::binary : std::ios::in);
  if (!is) throw InputError(p.string(), "cannot open");
  return is;
}

}  // namespace

void save_field(const std::filesystem::path& p, const Field& f) {
  auto os = open_out(p, true);
  write_field(os, f);
}

Field load_field(const std::filesystem::path& p) {
  auto is = open_in(p, true);
  return read_field(is);
}

void save_time_field(const std::filesystem::path& p, const TimeField& tf) {
  auto os = open_out(p, true);
  write_time_field(os, tf);
}

TimeField load_time_field(const std::filesystem::path& p) {
  auto is = open_in(p, true);
  return read_time_field(is);
}

void save_trajectory(const std::filesystem::path& p, const Trajectory& traj) {
  auto os = open_out(p, false);
  write_trajectory(os, traj);
}

Trajectory load_trajectory(const std::filesystem::path& p) {
  auto is = open_in(p, false);
  return read_trajectory(is);
}

void save_text(const std::filesystem::path& p, const std::string& text) {
  auto os = open_out(p, false);
  os << text;
}

std::string load_text(const std::filesystem::path& p) {
  auto is = open_in(p, false);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace spp
