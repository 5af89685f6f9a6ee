#pragma once

#include <stdexcept>
#include <string>

namespace squeezer {

/// Base class for every error raised by the simulator.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
   public:
    using Error::Error;
};

/// Unknown or malformed key in a configuration document.
class SchemaError : public Error {
   public:
    using Error::Error;
};

/// A configuration value violates one of its documented ranges.
class ValidationError : public Error {
   public:
    using Error::Error;
};

/// (-i Omega I - A) could not be inverted; only happens at the free-mass pole Omega = 0.
class SingularSystem : public Error {
   public:
    using Error::Error;
};

class ThresholdSearchFailure : public Error {
   public:
    ThresholdSearchFailure(const std::string& what, double lo, double hi, double lo_max_im, double hi_max_im)
        : Error(what), lo_(lo), hi_(hi), lo_max_im_(lo_max_im), hi_max_im_(hi_max_im) {}

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double lo_max_im() const { return lo_max_im_; }
    double hi_max_im() const { return hi_max_im_; }

   private:
    double lo_, hi_, lo_max_im_, hi_max_im_;
};

class DegenerateNoise : public Error {
   public:
    using Error::Error;
};

class NumericalError : public Error {
   public:
    using Error::Error;
};

/// Internal bookkeeping mismatch, e.g. a noise port without an input spectrum.
class ConsistencyError : public Error {
   public:
    using Error::Error;
};

/// Requested operating point is at or above the squeezing threshold.
class AboveThreshold : public Error {
   public:
    AboveThreshold(const std::string& what, double chi, double threshold)
        : Error(what), chi_(chi), threshold_(threshold) {}
    double chi() const { return chi_; }
    double threshold() const { return threshold_; }

   private:
    double chi_, threshold_;
};

}  // namespace squeezer
