#ifndef HGSIM_EXPERIMENT_HPP
#define HGSIM_EXPERIMENT_HPP

#include <optional>
#include <string>
#include <vector>

#include "hgsim/types.hpp"

namespace hgsim {

/// Result of a configuration-driven run. All data files are deterministic
/// for a fixed config and seed; run_meta.json (wall time) is the only file
/// excluded from that guarantee.
struct RunArtifact {
  std::string out_dir;
  std::vector<std::string> files;  // deterministic data files, relative to out_dir
  std::string summary_json;
};

/// Dispatches on the JSON config. The top-level "task" selects between
/// "experiment" (default; engines quantum | classical | semiclassical |
/// analytic), "reproduce-table" and "scan-global-fano". See README for the
/// schema. Throws Error with a field path on config problems.
RunArtifact run_task_json(const std::string& config_json);

/// Convenience wrappers used by tests.
RunArtifact run_experiment_json(const std::string& config_json);

}  // namespace hgsim

#endif
