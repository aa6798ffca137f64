#pragma once

#include <stdexcept>
#include <string>

namespace routeopt {

enum class Errc {
    invalid_input,
    unknown_token,
    unknown_venue,
    non_positive_reserve,
    invalid_amount,
    numerical_failure,
    duplicate_pool_id,
    src_equals_dst,
    no_path_exists,
    no_feasible_path,
    infeasible_path,
    invalid_vector,
    negative_theta,
    too_few_samples,
    invalid_stratum,
};

/// Library-wide exception. `code` maps onto CLI exit codes (see tools/).
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

/// Process exit code for an error class: 2 invalid input, 3 no feasible
/// route, 4 numerical failure.
inline int exit_code(Errc c) noexcept {
    switch (c) {
        case Errc::no_path_exists:
        case Errc::no_feasible_path:
        case Errc::infeasible_path:
            return 3;
        case Errc::numerical_failure:
            return 4;
        default:
            return 2;
    }
}

}  // namespace routeopt
