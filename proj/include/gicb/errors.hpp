#pragma once

#include <stdexcept>
#include <string>

namespace gicb {

/// Unknown or duplicate variable label in a GaussianSystem query.
class LabelError : public std::invalid_argument {
public:
    explicit LabelError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Channel description that cannot be brought to standard form,
/// or an operation applied to the wrong channel class.
class InvalidChannelError : public std::domain_error {
public:
    explicit InvalidChannelError(const std::string& msg) : std::domain_error(msg) {}
};

/// Genie parameters outside their admissible set (|rho| > 1, non-PSD Sigma, ...).
class InvalidGenieError : public std::invalid_argument {
public:
    explicit InvalidGenieError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Genie parameters that violate a strict slack condition of an EPI bound.
class InfeasibleGenieError : public std::domain_error {
public:
    explicit InfeasibleGenieError(const std::string& msg) : std::domain_error(msg) {}
};

/// Operation applied outside its stated parameter regime
/// (e.g. strong interference passed to a weak-interference bound).
class RegimeError : public std::domain_error {
public:
    explicit RegimeError(const std::string& msg) : std::domain_error(msg) {}
};

/// A precondition of an inequality does not hold, so there is nothing to verify.
class PreconditionError : public std::invalid_argument {
public:
    explicit PreconditionError(const std::string& msg) : std::invalid_argument(msg) {}
};

} // namespace gicb
