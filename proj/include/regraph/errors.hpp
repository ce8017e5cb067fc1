#pragma once

#include <stdexcept>
#include <string>

namespace regraph {

// Error codes for every failure mode the library reports. CLI tools map
// these to machine-readable JSON; library code throws Error directly.
enum class errc {
    non_regular,
    illegal_simple,
    odd_product,
    rejection_budget_exceeded,
    decoration_mismatch,
    pole_point,
    not_hermitian,
    out_of_support,
    pole_at_d,
    endpoint_singular,
    all_eigenvalues_excluded,
    bipartite_input,
    budget_exceeded,
    no_root_in_branch,
    branch_jump,
    degenerate_phase,
    pole,
    bad_input,
    io_error,
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::non_regular: return "NonRegular";
        case errc::illegal_simple: return "IllegalSimple";
        case errc::odd_product: return "OddProduct";
        case errc::rejection_budget_exceeded: return "RejectionBudgetExceeded";
        case errc::decoration_mismatch: return "DecorationMismatch";
        case errc::pole_point: return "PolePoint";
        case errc::not_hermitian: return "NotHermitian";
        case errc::out_of_support: return "OutOfSupport";
        case errc::pole_at_d: return "PoleAtD";
        case errc::endpoint_singular: return "EndpointSingular";
        case errc::all_eigenvalues_excluded: return "AllEigenvaluesExcluded";
        case errc::bipartite_input: return "BipartiteInput";
        case errc::budget_exceeded: return "BudgetExceeded";
        case errc::no_root_in_branch: return "NoRootInBranch";
        case errc::branch_jump: return "BranchJump";
        case errc::degenerate_phase: return "DegeneratePhase";
        case errc::pole: return "Pole";
        case errc::bad_input: return "BadInput";
        case errc::io_error: return "IoError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

}  // namespace regraph
