#ifndef HGSIM_IO_HPP
#define HGSIM_IO_HPP

#include <string>

namespace hgsim {

/// Shortest round-trip decimal representation; deterministic across runs.
std::string format_double(double value);

/// Write-then-rename so partially written files are never observed.
void atomic_write_file(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace hgsim

#endif
