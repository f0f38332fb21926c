#pragma once

#include <stdexcept>
#include <string>

namespace symfid {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct domain_error : error { using error::error; };
struct capacity_error : error { using error::error; };
struct degenerate_family_error : error { using error::error; };
struct degenerate_point_error : error { using error::error; };
struct undefined_state_error : error { using error::error; };

} // namespace symfid
