#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "pfst/automaton.hpp"
#include "pfst/modelio.hpp"

namespace pfst::testing {

// The French -> English toy transducer: le chat </s> -> the cat </s>.
inline std::vector<ArcSpec> toy_arcs() {
  return {
      {0, 1, "le", "the", 0.48}, {0, 2, "le", "a", 0.08},       {1, 3, "chat", "cat", 1.0},
      {2, 4, "chat", "cat", 1.0}, {3, 5, "</s>", "</s>", 1.0}, {4, 5, "</s>", "</s>", 1.0},
  };
}

inline TransducerModel toy_model() {
  const auto arcs = toy_arcs();
  const FinalWeight finals[] = {{5, 1.0}};
  return build_from_arcs(arcs, 6, 0, finals);
}

inline constexpr const char* kToyFst =
    "0 1 le the 0.48\n"
    "0 2 le a 0.08\n"
    "1 3 chat cat 1\n"
    "2 4 chat cat 1\n"
    "3 5 </s> </s> 1\n"
    "4 5 </s> </s> 1\n"
    "5 1\n";
inline constexpr const char* kToyIsyms = "<eps>\t0\nle\t1\nchat\t2\n</s>\t3\n";
inline constexpr const char* kToyOsyms = "<eps>\t0\nthe\t1\na\t2\ncat\t3\n</s>\t4\n";

inline bool rel_close(double a, double b, double tol) {
  if (a == b) return true;
  return std::fabs(a - b) <= tol * std::max(std::fabs(a), std::fabs(b));
}

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("pfst-test-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }

  std::string file(const std::string& name, const std::string& content) const {
    const auto p = path_ / name;
    std::ofstream(p) << content;
    return p.string();
  }
  std::string path(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace pfst::testing
