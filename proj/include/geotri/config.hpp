#ifndef GEOTRI_CONFIG_HPP
#define GEOTRI_CONFIG_HPP

#include <cstdint>
#include <string>

namespace geotri {

// Global tunables.  All tolerances are absolute unless noted.
struct Config {
  double geom_tol = 1e-9;      // geometric predicates (Im z > 0, angle sums)
  double tangency_tol = 1e-9;  // horoball tangency residuals
  std::int64_t prime_bound = 100000;  // largest rational prime scanned
  int tree_depth_limit = 10000;       // cap on walk length
  std::string output_dir = ".";

  void validate() const;
};

// Parses "key = value" lines; '#' starts a comment.
Config load_config_file(const std::string& path, Config base = Config{});

}  // namespace geotri

#endif
