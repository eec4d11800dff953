#pragma once

#include <stdexcept>
#include <string>

namespace palletbench {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input files. `where` is an element path like
// "/palletizing/layer[2]/place[1]@x" or a JSON pointer.
class ParseError : public Error {
 public:
  ParseError(std::string where, const std::string& what)
      : Error(where.empty() ? what : where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

class OutOfRangeError : public ParseError {
 public:
  OutOfRangeError(const std::string& field, double lo, double hi, double got)
      : ParseError(field, "value " + std::to_string(got) + " outside allowed range [" +
                              std::to_string(lo) + ", " + std::to_string(hi) + "]"),
        field_(field), lo_(lo), hi_(hi), got_(got) {}
  const std::string& field() const { return field_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double got() const { return got_; }

 private:
  std::string field_;
  double lo_, hi_, got_;
};

class UnknownPackageIdError : public ParseError {
 public:
  UnknownPackageIdError(std::string id, const std::string& where)
      : ParseError(where, "unknown package id \"" + id + "\""), id_(std::move(id)) {}
  const std::string& id() const { return id_; }

 private:
  std::string id_;
};

class EmptyRangeError : public Error {
 public:
  explicit EmptyRangeError(const std::string& field)
      : Error("empty range for " + field) {}
};

// Scene failed verification before or during a run.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

// Non-finite state encountered while stepping.
class FatalNumericError : public Error {
 public:
  FatalNumericError(const std::string& what, std::string subject)
      : Error(what + " (" + subject + ")"), subject_(std::move(subject)) {}
  const std::string& subject() const { return subject_; }

 private:
  std::string subject_;
};

class IoError : public Error {
 public:
  IoError(const std::string& what, std::string path)
      : Error(what + ": " + path), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace palletbench
