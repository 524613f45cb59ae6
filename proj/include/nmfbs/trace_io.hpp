#pragma once

#include <string>
#include <vector>

#include "nmfbs/hilbert.hpp"
#include "nmfbs/solver.hpp"

namespace nmfbs {

/// Shortest round-trip decimal formatting ('.' separator, locale-free).
std::string format_double(double v);

/// Trace CSV with the exact header
/// k,f_value,gmap_norm,alpha,backtracks,f_evals,grad_evals,wall_ms
std::string trace_to_csv(const std::vector<IterationRecord>& trace);
void write_trace_csv(const std::string& path,
                     const std::vector<IterationRecord>& trace);
std::vector<IterationRecord> read_trace_csv(const std::string& path);

/// Iterate snapshots as a flat little-endian binary file:
/// magic "NMFBSSNP", u64 count, u64 dim, then count*dim f64 values.
void write_snapshots(const std::string& path,
                     const std::vector<HilbertVec>& snapshots);
std::vector<std::vector<double>> read_snapshots(const std::string& path);

}  // namespace nmfbs
