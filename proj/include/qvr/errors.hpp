#pragma once

#include <stdexcept>
#include <string>

namespace qvr
{
//! Base class for all errors raised by the library.
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

//! A parameter violates its documented domain.
class InvalidParam : public Error
{
  public:
    using Error::Error;
};

//! The perturbation is not superluminal (beta <= 1): no pairs are emitted.
class BelowThreshold : public Error
{
  public:
    explicit BelowThreshold(double beta)
        : Error("beta = " + std::to_string(beta)
                + " is at or below the emission threshold (beta > 1)")
        , beta_(beta)
    {
    }

    double beta() const noexcept { return beta_; }

  private:
    double beta_;
};

//! An adaptive integration exhausted its refinement budget.
class NonConvergence : public Error
{
  public:
    using Error::Error;
};

//! No positive partner wavenumber satisfies the pair constraint.
class NoPartnerSolution : public Error
{
  public:
    using Error::Error;
};

//! Both photons lie on the cone; the constraint holds for any partner k.
class DegenerateConstraint : public Error
{
  public:
    using Error::Error;
};

}  // namespace qvr
