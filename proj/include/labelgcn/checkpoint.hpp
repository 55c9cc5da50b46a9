#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "labelgcn/tape.hpp"

namespace labelgcn {

/// On-disk parameter checkpoint.
///
/// Layout: a text header, one record per line, terminated by a `payload`
/// line, then the raw tensor data as little-endian IEEE-754 doubles in the
/// order the `tensor` lines declare them.
///
///     LABELGCN-CHECKPOINT 1
///     kind gcntd
///     hyper <key> <value>          (repeated, order preserved)
///     vocab <n>                    (optional; n token lines follow)
///     tensor <name> <rows> <cols>  (repeated)
///     payload
///     <binary>
struct Checkpoint {
  std::string kind;
  std::vector<std::pair<std::string, std::string>> hyper;
  std::vector<std::string> vocabulary;
  ParameterSet params;

  const std::string& hyper_value(const std::string& key) const;
  bool has_hyper(const std::string& key) const;

  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

void write_checkpoint(std::ostream& out, const Checkpoint& checkpoint);
Checkpoint read_checkpoint(std::istream& in, const std::string& source = "<checkpoint>");

void save_checkpoint(const std::string& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace labelgcn
