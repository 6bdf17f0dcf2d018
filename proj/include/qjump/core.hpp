#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qjump {

using cx = std::complex<double>;

// Validation failures (bad arguments, bad config, contract violations).
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical failures (non-convergence, overflow, step-size breakdown).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Non-fatal diagnostics (unsafe truncation, coarse time step, ...).
// Default sink writes to stderr; tests install their own collector.
void warn(const std::string& msg);
void set_warning_sink(std::function<void(const std::string&)> sink);

// Row-major dense complex matrix, sized once, no hidden allocation in loops.
class CMat {
  public:
    CMat() = default;
    CMat(int rows, int cols) : rows_(rows), cols_(cols), d_(static_cast<size_t>(rows) * cols) {}
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    cx* row(int r) { return d_.data() + static_cast<size_t>(r) * cols_; }
    const cx* row(int r) const { return d_.data() + static_cast<size_t>(r) * cols_; }
    cx& operator()(int r, int c) { return d_[static_cast<size_t>(r) * cols_ + c]; }
    const cx& operator()(int r, int c) const { return d_[static_cast<size_t>(r) * cols_ + c]; }
    cx* data() { return d_.data(); }
    const cx* data() const { return d_.data(); }
    size_t size() const { return d_.size(); }
    void set_zero() { std::fill(d_.begin(), d_.end(), cx{0.0, 0.0}); }

  private:
    int rows_ = 0, cols_ = 0;
    std::vector<cx> d_;
};

}  // namespace qjump
