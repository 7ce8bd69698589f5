#pragma once

#include <stdexcept>
#include <string>

namespace cablesail {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters, basis, grid or configuration values.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Assembly produced an unusable model (e.g. mass matrix not positive definite).
class ModelConstructionError : public Error {
public:
    using Error::Error;
};

/// Effective stiffness K - Psi* T / dx is (numerically) singular at `tension`.
class NearSingularStiffness : public Error {
public:
    NearSingularStiffness(double tension, double condition)
        : Error("effective stiffness is near-singular at tension " + std::to_string(tension) +
                " N (condition " + std::to_string(condition) + ")"),
          tension_(tension), condition_(condition) {}

    double tension() const noexcept { return tension_; }
    double condition() const noexcept { return condition_; }

private:
    double tension_;
    double condition_;
};

/// Requested value lies outside the reachable range of a monotone map.
class OutOfRange : public Error {
public:
    using Error::Error;
};

class PoleOnGrid : public Error {
public:
    PoleOnGrid(double omega, double condition)
        : Error("frequency " + std::to_string(omega) + " rad/s sits on a pole (condition " +
                std::to_string(condition) + ")"),
          omega_(omega) {}

    double omega() const noexcept { return omega_; }

private:
    double omega_;
};

/// Phase-band and real-part passivity tests disagree.
class InconsistentTests : public Error {
public:
    using Error::Error;
};

class RankDeficient : public Error {
public:
    using Error::Error;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace cablesail
