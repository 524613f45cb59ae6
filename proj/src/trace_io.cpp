#include "nmfbs/trace_io.hpp"

#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nmfbs {

namespace {
constexpr char kTraceHeader[] =
    "k,f_value,gmap_norm,alpha,backtracks,f_evals,grad_evals,wall_ms";
constexpr char kSnapshotMagic[8] = {'N', 'M', 'F', 'B', 'S', 'S', 'N', 'P'};

double parse_double(const std::string& s, const std::string& path) {
  double v;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw std::runtime_error(path + ": bad numeric field '" + s + "'");
  }
  return v;
}

long parse_long(const std::string& s, const std::string& path) {
  long v;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw std::runtime_error(path + ": bad integer field '" + s + "'");
  }
  return v;
}
}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string trace_to_csv(const std::vector<IterationRecord>& trace) {
  std::string out(kTraceHeader);
  out += '\n';
  for (const auto& r : trace) {
    out += std::to_string(r.k);
    out += ',';
    out += format_double(r.f_value);
    out += ',';
    out += format_double(r.gmap_norm);
    out += ',';
    out += format_double(r.alpha);
    out += ',';
    out += std::to_string(r.backtracks);
    out += ',';
    out += std::to_string(r.cum_f_evals);
    out += ',';
    out += std::to_string(r.cum_grad_evals);
    out += ',';
    out += format_double(r.wall_ms);
    out += '\n';
  }
  return out;
}

void write_trace_csv(const std::string& path,
                     const std::vector<IterationRecord>& trace) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << trace_to_csv(trace);
  if (!f) throw std::runtime_error("write failed: " + path);
}

std::vector<IterationRecord> read_trace_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open trace: " + path);
  std::string line;
  if (!std::getline(f, line)) throw std::runtime_error(path + ": empty file");
  if (line != kTraceHeader) {
    throw std::runtime_error(path + ": unexpected trace header");
  }
  std::vector<IterationRecord> trace;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 8) {
      throw std::runtime_error(path + ": expected 8 fields per row");
    }
    IterationRecord r;
    r.k = parse_long(fields[0], path);
    r.f_value = parse_double(fields[1], path);
    r.gmap_norm = parse_double(fields[2], path);
    r.alpha = parse_double(fields[3], path);
    r.backtracks = static_cast<int>(parse_long(fields[4], path));
    r.cum_f_evals = parse_long(fields[5], path);
    r.cum_grad_evals = parse_long(fields[6], path);
    r.wall_ms = parse_double(fields[7], path);
    trace.push_back(r);
  }
  return trace;
}

void write_snapshots(const std::string& path,
                     const std::vector<HilbertVec>& snapshots) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f.write(kSnapshotMagic, sizeof(kSnapshotMagic));
  const std::uint64_t count = snapshots.size();
  const std::uint64_t dim = snapshots.empty() ? 0 : snapshots[0].size();
  f.write(reinterpret_cast<const char*>(&count), sizeof(count));
  f.write(reinterpret_cast<const char*>(&dim), sizeof(dim));
  for (const auto& s : snapshots) {
    if (s.size() != dim) throw std::runtime_error("snapshot dim mismatch");
    f.write(reinterpret_cast<const char*>(s.coeffs().data()),
            static_cast<std::streamsize>(dim * sizeof(double)));
  }
  if (!f) throw std::runtime_error("write failed: " + path);
}

std::vector<std::vector<double>> read_snapshots(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open snapshots: " + path);
  char magic[8];
  f.read(magic, sizeof(magic));
  if (!f || std::memcmp(magic, kSnapshotMagic, sizeof(magic)) != 0) {
    throw std::runtime_error(path + ": not a snapshot file");
  }
  std::uint64_t count = 0, dim = 0;
  f.read(reinterpret_cast<char*>(&count), sizeof(count));
  f.read(reinterpret_cast<char*>(&dim), sizeof(dim));
  if (!f) throw std::runtime_error(path + ": truncated header");
  std::vector<std::vector<double>> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    std::vector<double> row(dim);
    f.read(reinterpret_cast<char*>(row.data()),
           static_cast<std::streamsize>(dim * sizeof(double)));
    if (!f) throw std::runtime_error(path + ": truncated data");
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace nmfbs
