#pragma once

#include <stdexcept>
#include <string>

namespace gmulti {

// Base class for every error raised by the library.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A parameter is outside its documented range, or required settings are missing.
struct ConfigError : Error {
  using Error::Error;
};

// Input data violates a structural requirement (non-finite values, ragged CSV,
// asymmetric distances, ...).
struct InvalidData : Error {
  using Error::Error;
};

// An observation window is malformed or inconsistent with its graph.
struct InvalidWindow : Error {
  using Error::Error;
};

// A window is too short to admit any split inside the trimmed scan range.
struct WindowTooShort : InvalidWindow {
  using InvalidWindow::InvalidWindow;
};

// An operation that needs at least one candidate change-point received none.
struct EmptyCandidates : Error {
  using Error::Error;
};

// A file could not be read or written.
struct IoError : Error {
  using Error::Error;
};

}  // namespace gmulti
