#pragma once

#include <stdexcept>
#include <string>

namespace rsflat {

// Precondition violations reuse std::invalid_argument; the types below mark
// failure modes callers are expected to branch on.

class aliasing_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class empty_band_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class out_of_range_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class insufficient_resolution_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class insufficient_data_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class insufficient_range_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class out_of_validity_error : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

class degenerate_input_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// The exhaustive counting oracle refuses inputs past its cost cap.
class oracle_cap_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class grid_too_large_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class io_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace rsflat
