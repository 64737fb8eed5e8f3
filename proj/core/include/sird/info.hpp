#pragma once

#include <string>
#include <vector>

#include "sird/joint_pmf.hpp"

namespace sird {

/// Shannon measures in bits (base-2), with the 0 log 0 = 0 convention.
/// Values in [-1e-12, 0) are clamped to 0.

double entropy(const JointPMF& j, const std::vector<std::string>& vars);

double cond_entropy(const JointPMF& j, const std::vector<std::string>& vars,
                    const std::vector<std::string>& given);

double mutual_info(const JointPMF& j, const std::vector<std::string>& a,
                   const std::vector<std::string>& b);

double cond_mutual_info(const JointPMF& j, const std::vector<std::string>& a,
                        const std::vector<std::string>& b,
                        const std::vector<std::string>& given);

double binary_entropy(double alpha);

} // namespace sird
