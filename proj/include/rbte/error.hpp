#pragma once

#include <stdexcept>
#include <string>

namespace rbte {

/// Broad failure category; the CLI maps it onto its exit code.
enum class ErrorKind {
  Data,  // malformed or semantically invalid input
  Io,    // filesystem / codec failure
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorKind::Data, what) {}
};

/// No sibling edge-map file for the requested external source.
class MissingEdgeMap : public DataError {
 public:
  MissingEdgeMap(const std::string& image, const std::string& tag,
                 const std::string& expected_path)
      : DataError("missing edge map for image '" + image + "' (source '" +
                  tag + "'): expected " + expected_path),
        image_(image),
        tag_(tag) {}

  const std::string& image() const noexcept { return image_; }
  const std::string& tag() const noexcept { return tag_; }

 private:
  std::string image_;
  std::string tag_;
};

/// Every pixel was dropped while building a histogram.
class EmptyHistogram : public DataError {
 public:
  EmptyHistogram() : DataError("histogram is empty (no nonzero pixels)") {}
};

class BlankSketch : public DataError {
 public:
  BlankSketch() : DataError("sketch has no edge pixels") {}
};

class UnmappedClass : public DataError {
 public:
  UnmappedClass(const std::string& source_tag, const std::string& class_name)
      : DataError("class '" + class_name + "' from source '" + source_tag +
                  "' has no entry in the class map") {}
};

}  // namespace rbte
