#include "manitrans/errors.hpp"
#include "manitrans/types.hpp"

#include <iostream>
#include <sstream>

namespace manitrans::detail {

void require_square(const Mat& m, std::string_view what) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << what << ": expected a square matrix, got " << m.rows() << "x" << m.cols();
    throw DimensionError(os.str());
  }
}

void require_same_shape(const Mat& a, const Mat& b, std::string_view what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream os;
    os << what << ": shape mismatch " << a.rows() << "x" << a.cols() << " vs " << b.rows()
       << "x" << b.cols();
    throw DimensionError(os.str());
  }
}

void require_finite(const Mat& m, std::string_view what) {
  if (!m.allFinite()) {
    throw ValidationError(std::string(what) + ": input has non-finite entries");
  }
}

void warn(std::string_view message) { std::clog << "manitrans: warning: " << message << '\n'; }

}  // namespace manitrans::detail
