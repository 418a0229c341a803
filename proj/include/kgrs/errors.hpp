#pragma once

#include <stdexcept>
#include <string>

namespace kgrs {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

class GridMismatch : public Error {
public:
  using Error::Error;
};

// |[phi_n, phi_n]| deviates from 1 beyond the certification tolerance.
class NotJOrthonormal : public Error {
public:
  NotJOrthonormal(int index, double measured, const std::string& what)
      : Error(what), index(index), measured(measured) {}
  int index;
  double measured;  // the offending [phi_n, phi_n] (real part)
};

class GridTooSmall : public Error {
public:
  GridTooSmall(double suggested, const std::string& what)
      : Error(what), suggested_half_width(suggested) {}
  double suggested_half_width;
};

class RankDeficientSpan : public Error {
public:
  RankDeficientSpan(double condition, const std::string& what)
      : Error(what), condition(condition) {}
  double condition;
};

class NonPositiveSection : public Error {
public:
  NonPositiveSection(double eigenvalue, const std::string& what)
      : Error(what), eigenvalue(eigenvalue) {}
  double eigenvalue;
};

}  // namespace kgrs
