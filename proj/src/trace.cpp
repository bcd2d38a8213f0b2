// Copyright tact authors
// SPDX-License-Identifier: Apache-2.0

#include "tact/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string_view>

#include "tact/errors.hpp"

namespace tact {

namespace {

constexpr std::string_view kMagic = "# tact-trace v";
constexpr std::string_view kColumns =
    "time_s,tau_knee_left,tau_knee_right,tau_wheel_left,tau_wheel_right,acc_z,label";
constexpr std::string_view kUnits = "s,Nm,Nm,Nm,Nm,m/s^2,-";

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text, std::size_t line_no, const char* what) {
    double out = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw ValidationError("line " + std::to_string(line_no) + ": cannot parse " + what +
                              " from '" + std::string(text) + "'");
    }
    return out;
}

// Value part of a "# key: value" header line, leading blanks stripped.
std::string_view header_value(std::string_view line, std::string_view prefix) {
    std::string_view rest = line.substr(prefix.size());
    while (!rest.empty() && rest.front() == ' ') {
        rest.remove_prefix(1);
    }
    return rest;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

TraceRow parse_row(std::string_view line, std::size_t line_no) {
    const auto fields = split(line, ',');
    if (fields.size() != 7) {
        throw ValidationError("line " + std::to_string(line_no) + ": expected 7 fields, got " +
                              std::to_string(fields.size()));
    }
    TraceRow row;
    row.time_s = parse_double(fields[0], line_no, "time_s");
    row.tau_knee_left = parse_double(fields[1], line_no, "tau_knee_left");
    row.tau_knee_right = parse_double(fields[2], line_no, "tau_knee_right");
    row.tau_wheel_left = parse_double(fields[3], line_no, "tau_wheel_left");
    row.tau_wheel_right = parse_double(fields[4], line_no, "tau_wheel_right");
    row.acc_z = parse_double(fields[5], line_no, "acc_z");
    const double numeric[] = {row.time_s,         row.tau_knee_left,  row.tau_knee_right,
                              row.tau_wheel_left, row.tau_wheel_right, row.acc_z};
    for (double v : numeric) {
        if (!std::isfinite(v)) {
            throw ValidationError("line " + std::to_string(line_no) + ": non-finite channel value");
        }
    }
    const std::string_view label = fields[6];
    if (label == "C") {
        row.contact = true;
    } else if (label == "N") {
        row.contact = false;
    } else if (label == "-") {
        row.contact = std::nullopt;
    } else {
        throw ValidationError("line " + std::to_string(line_no) + ": unknown label '" +
                              std::string(label) + "' (expected C, N or -)");
    }
    return row;
}

}  // namespace

void write_trace(const std::string& path, const TraceFile& trace) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot open '" + tmp.string() + "' for writing");
        }
        out << kMagic << trace.version << "\n";
        out << "# sample_rate_hz: " << format_double(trace.sample_rate_hz) << "\n";
        out << "# units: " << kUnits << "\n";
        for (const TransitionEvent& e : trace.events) {
            out << "# event: " << event_kind_name(e.kind) << " " << format_double(e.time_s)
                << "\n";
        }
        out << kColumns << "\n";
        for (const TraceRow& r : trace.rows) {
            out << format_double(r.time_s) << ',' << format_double(r.tau_knee_left) << ','
                << format_double(r.tau_knee_right) << ',' << format_double(r.tau_wheel_left)
                << ',' << format_double(r.tau_wheel_right) << ',' << format_double(r.acc_z) << ','
                << (r.contact ? (*r.contact ? "C" : "N") : "-") << "\n";
        }
        if (!out) {
            throw IoError("write to '" + tmp.string() + "' failed");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        throw IoError("cannot move '" + tmp.string() + "' to '" + target.string() +
                      "': " + ec.message());
    }
}

TraceFile read_trace(const std::string& path, Strictness strictness,
                     std::vector<std::string>* warnings) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open trace file '" + path + "'");
    }

    TraceFile trace;
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line)) {
        throw ValidationError("trace file '" + path + "' is empty");
    }
    ++line_no;
    if (line.rfind(kMagic, 0) != 0) {
        throw ValidationError("trace file '" + path + "' has no '" + std::string(kMagic) +
                              "<n>' header");
    }
    trace.version = static_cast<int>(parse_double(line.substr(kMagic.size()), line_no, "version"));
    if (trace.version != 1) {
        throw ValidationError("unsupported trace version " + std::to_string(trace.version));
    }

    bool saw_columns = false;
    bool saw_rate = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        if (line.rfind("# sample_rate_hz:", 0) == 0) {
            trace.sample_rate_hz =
                parse_double(header_value(line, "# sample_rate_hz:"), line_no, "sample rate");
            saw_rate = true;
            continue;
        }
        if (line.rfind("# units:", 0) == 0) {
            const std::string_view units = header_value(line, "# units:");
            if (units != kUnits) {
                throw ValidationError("line " + std::to_string(line_no) + ": unit row '" +
                                      std::string(units) + "' does not match expected '" +
                                      std::string(kUnits) + "'");
            }
            continue;
        }
        if (line.rfind("# event:", 0) == 0) {
            const auto fields = split(header_value(line, "# event:"), ' ');
            if (fields.size() != 2) {
                throw ValidationError("line " + std::to_string(line_no) + ": malformed event row");
            }
            TransitionEvent event;
            if (fields[0] == "takeoff") {
                event.kind = EventKind::kTakeoff;
            } else if (fields[0] == "landing") {
                event.kind = EventKind::kLanding;
            } else {
                throw ValidationError("line " + std::to_string(line_no) + ": unknown event kind '" +
                                      std::string(fields[0]) + "'");
            }
            event.time_s = parse_double(fields[1], line_no, "event time");
            trace.events.push_back(event);
            continue;
        }
        if (line[0] == '#') {
            continue;  // unknown comment
        }
        if (!saw_columns) {
            if (line != kColumns) {
                throw ValidationError("line " + std::to_string(line_no) +
                                      ": unexpected column header '" + line + "'");
            }
            saw_columns = true;
            continue;
        }
        try {
            trace.rows.push_back(parse_row(line, line_no));
        } catch (const ValidationError& e) {
            if (strictness == Strictness::kStrict) {
                throw;
            }
            if (warnings != nullptr) {
                warnings->push_back(std::string("skipped ") + e.what());
            }
        }
    }
    if (!saw_rate || !(trace.sample_rate_hz > 0.0)) {
        throw ValidationError("trace file '" + path + "' is missing a positive sample_rate_hz header");
    }
    if (!saw_columns) {
        throw ValidationError("trace file '" + path + "' has no column header row");
    }
    return trace;
}

TraceFile trace_from_synth(const LabeledTrace& trace) {
    TraceFile out;
    out.sample_rate_hz = trace.sample_rate_hz;
    out.events = trace.events;
    out.rows.reserve(trace.steps.size());
    for (const TraceStep& s : trace.steps) {
        TraceRow row;
        row.time_s = s.time_s;
        row.tau_knee_left = s.tau_knee;
        row.tau_knee_right = s.tau_knee;
        row.tau_wheel_left = s.tau_wheel;
        row.tau_wheel_right = s.tau_wheel;
        row.acc_z = s.acc_z;
        row.contact = s.contact;
        out.rows.push_back(row);
    }
    return out;
}

TorqueSample aggregate_torques(const TraceRow& row, LegMode mode) {
    switch (mode) {
        case LegMode::kLeft:
            return {std::abs(row.tau_knee_left), std::abs(row.tau_wheel_left)};
        case LegMode::kRight:
            return {std::abs(row.tau_knee_right), std::abs(row.tau_wheel_right)};
        default:
            return {0.5 * (std::abs(row.tau_knee_left) + std::abs(row.tau_knee_right)),
                    0.5 * (std::abs(row.tau_wheel_left) + std::abs(row.tau_wheel_right))};
    }
}

IngestResult ingest(const std::string& path, const EstimatorConfig& cfg, Strictness strictness) {
    IngestResult result;
    const TraceFile trace = read_trace(path, strictness, &result.warnings);
    if (trace.rows.empty()) {
        throw ValidationError("trace file '" + path + "' contains no usable rows");
    }

    for (std::size_t i = 1; i < trace.rows.size(); ++i) {
        if (!(trace.rows[i].time_s > trace.rows[i - 1].time_s)) {
            throw ValidationError("trace file '" + path +
                                  "': timestamps not strictly increasing near t=" +
                                  format_double(trace.rows[i].time_s));
        }
    }

    if (trace.rows.size() > 1) {
        std::vector<double> deltas;
        deltas.reserve(trace.rows.size() - 1);
        for (std::size_t i = 1; i < trace.rows.size(); ++i) {
            deltas.push_back(trace.rows[i].time_s - trace.rows[i - 1].time_s);
        }
        std::nth_element(deltas.begin(), deltas.begin() + deltas.size() / 2, deltas.end());
        const double median_dt = deltas[deltas.size() / 2];
        const double declared_dt = 1.0 / trace.sample_rate_hz;
        if (std::abs(median_dt - declared_dt) > 0.01 * declared_dt) {
            const std::string message =
                "declared sample rate " + format_double(trace.sample_rate_hz) +
                " Hz does not match the median timestamp step " + format_double(median_dt) + " s";
            if (strictness == Strictness::kStrict) {
                throw ValidationError(message);
            }
            result.warnings.push_back(message);
        }
    }

    result.sample_rate_hz = trace.sample_rate_hz;
    result.events = trace.events;
    result.steps.reserve(trace.rows.size());
    for (const TraceRow& row : trace.rows) {
        IngestStep step;
        step.time_s = row.time_s;
        step.torque = aggregate_torques(row, cfg.leg_mode);
        step.acc_z = row.acc_z;
        step.contact = row.contact;
        result.steps.push_back(step);
    }
    return result;
}

}  // namespace tact
