#pragma once

namespace qmeq::tol {

// Relative residual for span membership; also the threshold below which a
// trace counts as zero.
inline constexpr double kSpan = 1e-8;
inline constexpr double kUnitary = 1e-9;
inline constexpr double kHermitian = 1e-9;
inline constexpr double kPsd = 1e-9;
inline constexpr double kTrace = 1e-9;
// Outcome probabilities at or below this are treated as impossible branches.
inline constexpr double kProbability = 1e-12;

}  // namespace qmeq::tol
