#pragma once

// Deterministic artifact emission: CSV traces (shortest round-trip doubles,
// LF endings) and JSON summaries, all written to a temp file and renamed
// so no artifact is ever left half-written.

#include <filesystem>
#include <string>
#include <vector>

#include "bfosim/device.hpp"

#include "json.hpp"

namespace bfosim {

// Locale-independent shortest round-trip formatting.
std::string format_double(double value);

inline constexpr const char* kTraceHeader =
    "time_s,v_device_V,i_device_A,q,d_mean_m,v_sc_top_V,v_bfo_V,v_sc_bot_V,"
    "phi_eff_top_eV,phi_eff_bot_eV,n_eff_top,n_eff_bot";

std::string trace_to_csv(const std::vector<TraceRecord>& trace);

// Writes content to path atomically (temp file + rename).
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content);

// Applies the row cap: throws ConfigError when the trace exceeds max_rows
// and downsampling is off; otherwise returns a stride-decimated copy.
std::vector<TraceRecord> apply_row_cap(std::vector<TraceRecord> trace,
                                       std::uint64_t max_rows, bool downsample);

void write_trace_csv(const std::filesystem::path& path,
                     const std::vector<TraceRecord>& trace);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace bfosim
