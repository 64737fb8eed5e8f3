#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sird/instance.hpp"

namespace sird {

/// Parses a JSON problem file (dense or factored source description, see
/// docs/problem-format.md) into a validated SourceInstance.
SourceInstance parse_problem(const std::string& path);
SourceInstance parse_problem_text(const std::string& text, const std::string& origin = "<string>");

/// Canonical dense JSON serialization; parse_problem_text of the result
/// reproduces the instance tensors exactly.
std::string serialize_instance(const SourceInstance& inst);

/// FNV-1a hash of the canonical serialization, as 16 hex digits.
std::string instance_hash(const SourceInstance& inst);

struct RunRecord {
    std::string command;
    std::string instance_hash;
    std::uint64_t seed = 0;
    std::string options; // JSON fragment
    std::string results; // JSON fragment
    std::string version;
    double wall_ms = 0.0;

    std::string to_json() const;
};

/// 9-significant-digit formatting used for every CSV value.
std::string format_sig(double v);

/// RFC-4180-style CSV with a header row; deterministic row order is the
/// caller's responsibility.
void emit_csv(const std::vector<std::string>& header,
              const std::vector<std::vector<double>>& rows, const std::string& path);

std::string toolkit_version();

} // namespace sird
