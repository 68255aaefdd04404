// Copyright The kerrcrit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <exception>
#include <stdexcept>
#include <string>

namespace kerrcrit
{

// Base class of every failure raised by the library. Each subclass names one
// failure mode so callers can recover selectively (e.g. fall back from the
// analytic moments to the numeric steady state on SeriesDivergence).
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error
{
public:
  using Error::Error;
};

class DimensionMismatch : public Error
{
public:
  using Error::Error;
};

class DimensionTooLarge : public Error
{
public:
  using Error::Error;
};

class ConventionMismatch : public Error
{
public:
  using Error::Error;
};

class CutoffOverflow : public Error
{
public:
  using Error::Error;
};

class StepTooLarge : public Error
{
public:
  using Error::Error;
};

class SingularSystem : public Error
{
public:
  using Error::Error;
};

class SeriesDivergence : public Error
{
public:
  using Error::Error;
};

class NotConverged : public Error
{
public:
  using Error::Error;
};

// Raised when the two slowest nonzero modes cannot be told apart. Both
// candidates are kept so the caller can report them.
class GapAmbiguous : public Error
{
public:
  GapAmbiguous(const std::string &what, double re1, double im1, double re2, double im2)
    : Error(what), first_re(re1), first_im(im1), second_re(re2), second_im(im2)
  {
  }
  double first_re, first_im, second_re, second_im;
};

class GridTooSmall : public Error
{
public:
  using Error::Error;
};

class NoMinimumInBracket : public Error
{
public:
  using Error::Error;
};

class WindowTooSmall : public Error
{
public:
  using Error::Error;
};

class DegenerateFit : public Error
{
public:
  using Error::Error;
};

class FormatError : public Error
{
public:
  using Error::Error;
};

// Short type name of a library error ("SingularSystem", ...), used as the
// error tag in sweep records and manifests.
inline std::string error_name(const std::exception &e)
{
#define KERRCRIT_ERROR_NAME(T)          \
  if (dynamic_cast<const T *>(&e))      \
  {                                     \
    return #T;                          \
  }
  KERRCRIT_ERROR_NAME(InvalidParameter)
  KERRCRIT_ERROR_NAME(DimensionMismatch)
  KERRCRIT_ERROR_NAME(DimensionTooLarge)
  KERRCRIT_ERROR_NAME(ConventionMismatch)
  KERRCRIT_ERROR_NAME(CutoffOverflow)
  KERRCRIT_ERROR_NAME(StepTooLarge)
  KERRCRIT_ERROR_NAME(SingularSystem)
  KERRCRIT_ERROR_NAME(SeriesDivergence)
  KERRCRIT_ERROR_NAME(NotConverged)
  KERRCRIT_ERROR_NAME(GapAmbiguous)
  KERRCRIT_ERROR_NAME(GridTooSmall)
  KERRCRIT_ERROR_NAME(NoMinimumInBracket)
  KERRCRIT_ERROR_NAME(WindowTooSmall)
  KERRCRIT_ERROR_NAME(DegenerateFit)
  KERRCRIT_ERROR_NAME(FormatError)
#undef KERRCRIT_ERROR_NAME
  if (dynamic_cast<const Error *>(&e))
  {
    return "Error";
  }
  return "InternalError";
}

}  // namespace kerrcrit
