#include "bfosim/trace_io.hpp"

#include <charconv>
#include <fstream>
#include <system_error>

#include "bfosim/errors.hpp"

namespace bfosim {

std::string format_double(double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

std::string trace_to_csv(const std::vector<TraceRecord>& trace) {
    std::string out;
    out.reserve(trace.size() * 200 + 256);
    out += kTraceHeader;
    out += '\n';
    for (const auto& r : trace) {
        out += format_double(r.time_s);
        out += ',';
        out += format_double(r.v_device_V);
        out += ',';
        out += format_double(r.i_device_A);
        out += ',';
        out += format_double(r.q);
        out += ',';
        out += format_double(r.d_mean_m);
        out += ',';
        out += format_double(r.v_sc_top_V);
        out += ',';
        out += format_double(r.v_bfo_V);
        out += ',';
        out += format_double(r.v_sc_bot_V);
        out += ',';
        out += format_double(r.phi_eff_top_eV);
        out += ',';
        out += format_double(r.phi_eff_bot_eV);
        out += ',';
        out += format_double(r.n_eff_top);
        out += ',';
        out += format_double(r.n_eff_bot);
        out += '\n';
    }
    return out;
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open for writing: " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out.good()) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw IoError("write failed: " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("rename failed for " + path.string() + ": " + ec.message());
    }
}

std::vector<TraceRecord> apply_row_cap(std::vector<TraceRecord> trace,
                                       std::uint64_t max_rows, bool downsample) {
    if (trace.size() <= max_rows) return trace;
    if (!downsample) {
        throw ConfigError("trace has " + std::to_string(trace.size()) +
                          " rows, above simulation.max_rows = " +
                          std::to_string(max_rows) +
                          "; enable simulation.downsample or raise the cap");
    }
    const std::uint64_t stride =
        (trace.size() + max_rows - 1) / max_rows;  // ceil
    std::vector<TraceRecord> kept;
    kept.reserve(trace.size() / stride + 1);
    for (std::size_t i = 0; i < trace.size(); i += stride) {
        kept.push_back(trace[i]);
    }
    return kept;
}

void write_trace_csv(const std::filesystem::path& path,
                     const std::vector<TraceRecord>& trace) {
    write_file_atomic(path, trace_to_csv(trace));
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    write_file_atomic(path, j.dump(2) + "\n");
}

}  // namespace bfosim
