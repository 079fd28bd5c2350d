#pragma once

#include <stdexcept>
#include <string>

namespace pzx {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define PZX_DEFINE_ERROR(Name)                                                 \
  class Name : public Error {                                                  \
  public:                                                                      \
    explicit Name(const std::string& what) : Error(what) {}                    \
  }

// polynomial / transfer function
PZX_DEFINE_ERROR(ZeroPolynomial);
PZX_DEFINE_ERROR(DegreeZero);
PZX_DEFINE_ERROR(EvaluationAtPole);
PZX_DEFINE_ERROR(UnpairedComplexRoot);

// filter zoo
PZX_DEFINE_ERROR(MissingParameter);
PZX_DEFINE_ERROR(InvalidComponentValue);

// measurement
PZX_DEFINE_ERROR(InvalidRange);
PZX_DEFINE_ERROR(SaturatedSweep);
PZX_DEFINE_ERROR(MalformedHeader);
PZX_DEFINE_ERROR(EmptyDataset);
PZX_DEFINE_ERROR(NonPositiveAmplitude);

// fitting
PZX_DEFINE_ERROR(Overflow);
PZX_DEFINE_ERROR(SingularNormalEquations);
PZX_DEFINE_ERROR(NonFiniteResidual);
PZX_DEFINE_ERROR(DegenerateDataset);

// extraction
PZX_DEFINE_ERROR(NonDecayingTerm);
PZX_DEFINE_ERROR(DegenerateSlope);
PZX_DEFINE_ERROR(PeakTooBroad);
PZX_DEFINE_ERROR(NonPositiveParams);
PZX_DEFINE_ERROR(MissingPhase);
PZX_DEFINE_ERROR(InsufficientSamples);
PZX_DEFINE_ERROR(IllConditioned);
PZX_DEFINE_ERROR(AllPassAmbiguity);

#undef PZX_DEFINE_ERROR

/// Simulated sweep hit a pole on the imaginary axis.
class PoleOnAxis : public Error {
public:
  PoleOnAxis(const std::string& what, double omega) : Error(what), omega_(omega) {}
  double omega() const { return omega_; }

private:
  double omega_;
};

/// A CSV field failed to parse as a number; carries the 1-based line number.
class NonNumericField : public Error {
public:
  NonNumericField(const std::string& what, int line) : Error(what), line_(line) {}
  int line() const { return line_; }

private:
  int line_;
};

/// Two CSV rows share the same frequency.
class DuplicateFrequency : public Error {
public:
  DuplicateFrequency(const std::string& what, double omega) : Error(what), omega_(omega) {}
  double omega() const { return omega_; }

private:
  double omega_;
};

}  // namespace pzx
