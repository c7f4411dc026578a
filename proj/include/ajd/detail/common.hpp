// SPDX-License-Identifier: MIT
#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ajd {

//! Error raised on invalid arguments or unusable configuration.
struct invalid_input : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

//! Error raised when a numerical routine cannot reach its target accuracy.
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

template <class... Ts>
std::string cat(const Ts&... parts) {
    std::ostringstream os;
    os.precision(17);
    (os << ... << parts);
    return os.str();
}

template <class... Ts>
void require(bool cond, const Ts&... parts) {
    if (!cond) throw invalid_input(cat(parts...));
}

//! Compensated (Neumaier) accumulator, used wherever long alternating sums
//! would otherwise lose digits.
class KahanSum {
  public:
    void add(double x) {
        const double t = s_ + x;
        if (std::abs(s_) >= std::abs(x))
            c_ += (s_ - t) + x;
        else
            c_ += (x - t) + s_;
        s_ = t;
    }
    double value() const { return s_ + c_; }

  private:
    double s_ = 0.0;
    double c_ = 0.0;
};

inline constexpr double pi = 3.14159265358979323846264338327950288;

}  // namespace detail
}  // namespace ajd
