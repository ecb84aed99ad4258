#pragma once

#include <stdexcept>
#include <string>

namespace emergence {

enum class errc {
    not_square,
    negative_entry,
    non_stochastic_row,
    index_out_of_range,
    undefined_conditional,
    degenerate_size,
    no_convergence,
    size_mismatch,
    too_large,
    unreachable,
    invalid_endpoint,
    no_gain,
    bad_params,
    empty_spec,
    decomposition_failure,
    parse_error,
    unknown_experiment,
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::not_square: return "NotSquare";
        case errc::negative_entry: return "NegativeEntry";
        case errc::non_stochastic_row: return "NonStochasticRow";
        case errc::index_out_of_range: return "IndexOutOfRange";
        case errc::undefined_conditional: return "UndefinedConditional";
        case errc::degenerate_size: return "DegenerateSize";
        case errc::no_convergence: return "NoConvergence";
        case errc::size_mismatch: return "SizeMismatch";
        case errc::too_large: return "TooLarge";
        case errc::unreachable: return "Unreachable";
        case errc::invalid_endpoint: return "InvalidEndpoint";
        case errc::no_gain: return "NoGain";
        case errc::bad_params: return "BadParams";
        case errc::empty_spec: return "EmptySpec";
        case errc::decomposition_failure: return "DecompositionFailure";
        case errc::parse_error: return "ParseError";
        case errc::unknown_experiment: return "UnknownExperiment";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    errc code() const noexcept { return code_; }

    // Parse and I/O failures map to exit code 3, everything else to 2.
    bool is_io_error() const noexcept { return code_ == errc::parse_error; }

private:
    errc code_;
};

}  // namespace emergence
