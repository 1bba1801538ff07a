#ifndef DPW_ERROR_HPP
#define DPW_ERROR_HPP

#include <complex>
#include <sstream>
#include <stdexcept>
#include <string>

namespace dpw {

/// Argument outside the mathematical domain of an operation (pole, zero, bad parameter).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Adaptive integration gave up (step-size underflow, step budget exhausted).
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, std::complex<double> where)
        : std::runtime_error(format(what, where)), location_(where) {}

    std::complex<double> location() const noexcept { return location_; }

private:
    static std::string format(const std::string& what, std::complex<double> where) {
        std::ostringstream os;
        os << what << " near z = " << where.real() << (where.imag() < 0 ? "-" : "+")
           << std::abs(where.imag()) << "i";
        return os.str();
    }

    std::complex<double> location_;
};

/// Spectral / Iwasawa factorization failed (non-positive definite input, no convergence).
class FactorizationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Sample grid incompatible with the requested operation.
class GridError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace dpw

#endif // DPW_ERROR_HPP
