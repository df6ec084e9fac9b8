#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fmmde/forecast.hpp"
#include "fmmde/panel.hpp"

namespace fmmde {

/// Completed origins of an interrupted recursive run.
struct Checkpoint {
  std::string fingerprint;
  std::vector<OriginResult> origins;
};

/// Hash of the panel contents and the run specification.
std::string run_fingerprint(const RawPanel& raw, const ForecastSpec& spec);

/// Written to a temporary file and renamed into place.
void save_checkpoint(const std::string& path, const Checkpoint& checkpoint);

/// Empty when the file does not exist; InputError when it cannot be parsed.
std::optional<Checkpoint> load_checkpoint(const std::string& path);

}  // namespace fmmde
