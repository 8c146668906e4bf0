#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace randlat::cli {

std::vector<std::string> verify_suite_names();

/// Runs one suite (or "all"), printing a PASS/FAIL line per check. Returns the failure count.
int run_verify(const std::string& suite, std::ostream& out);

}  // namespace randlat::cli
