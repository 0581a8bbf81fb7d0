#include "geotri/config.hpp"

#include <fstream>
#include <sstream>

#include "geotri/errors.hpp"

namespace geotri {

void Config::validate() const {
  if (!(geom_tol > 0.0) || !(tangency_tol > 0.0))
    fail(ErrorKind::BadInput, "tolerances must be positive");
  if (prime_bound < 1 || tree_depth_limit < 1)
    fail(ErrorKind::BadInput, "bounds must be at least 1");
}

Config load_config_file(const std::string& path, Config base) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ParseError, "cannot open config file " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    lineno++;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos)
        fail(ErrorKind::ParseError, path + ":" + std::to_string(lineno) + ": expected key = value");
      continue;
    }
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    try {
      if (key == "geom_tol") base.geom_tol = std::stod(value);
      else if (key == "tangency_tol") base.tangency_tol = std::stod(value);
      else if (key == "prime_bound") base.prime_bound = std::stoll(value);
      else if (key == "tree_depth_limit") base.tree_depth_limit = std::stoi(value);
      else if (key == "output_dir") base.output_dir = value;
      else fail(ErrorKind::ParseError, path + ":" + std::to_string(lineno) + ": unknown key " + key);
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      fail(ErrorKind::ParseError, path + ":" + std::to_string(lineno) + ": bad value for " + key);
    }
  }
  base.validate();
  return base;
}

}  // namespace geotri
