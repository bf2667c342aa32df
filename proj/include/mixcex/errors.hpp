#pragma once

#include <stdexcept>
#include <string>

namespace mixcex {

// Error taxonomy; the numeric values double as CLI exit codes.
enum class errc : int {
  domain = 2,              // argument outside a documented precondition
  depth_exhausted = 3,     // finite construction too shallow for the query
  search_exhausted = 4,    // search budget spent without a hit
  schedule_violation = 5,  // supplied schedule table breaks a required condition
  mismatch = 6,            // components assembled from different builds
  io = 7,                  // file or parse failure
  precision = 8,           // certified comparison hit the precision cap
};

class error : public std::runtime_error {
public:
  error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

private:
  errc code_;
};

struct domain_error : error {
  explicit domain_error(const std::string& w) : error(errc::domain, w) {}
};
struct depth_exhausted_error : error {
  explicit depth_exhausted_error(const std::string& w) : error(errc::depth_exhausted, w) {}
};
struct search_exhausted_error : error {
  explicit search_exhausted_error(const std::string& w) : error(errc::search_exhausted, w) {}
};
struct schedule_violation_error : error {
  explicit schedule_violation_error(const std::string& w) : error(errc::schedule_violation, w) {}
};
struct mismatch_error : error {
  explicit mismatch_error(const std::string& w) : error(errc::mismatch, w) {}
};
struct io_error : error {
  explicit io_error(const std::string& w) : error(errc::io, w) {}
};
struct step_geometry_error : error {
  explicit step_geometry_error(const std::string& w) : error(errc::domain, w) {}
};
struct precision_error : error {
  explicit precision_error(const std::string& w) : error(errc::precision, w) {}
};

}  // namespace mixcex
