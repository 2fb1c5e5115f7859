#pragma once

#include <stdexcept>
#include <string>

namespace geocollab {

// Latitude/longitude outside the valid geodetic range.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Point outside the small-area envelope of a local frame.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Timestamps out of order in a pose or fix stream.
class OrderingError : public std::runtime_error {
 public:
  OrderingError(const std::string& what, std::size_t index)
      : std::runtime_error(what), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

class EncodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Message sequence that violates the session state machine.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class RoomFullError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace geocollab
