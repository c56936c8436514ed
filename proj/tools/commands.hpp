#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "dyadic_forge/rational.hpp"

namespace dyadic_forge::cli {

enum class Format { json, csv };

struct RunConfig {
  std::uint64_t seed = 1;
  std::optional<long> trials;
  std::optional<long> depth;
  Rational window_lo = 0, window_hi = 1;
  std::string calibration_path;
  Format format = Format::json;
  bool format_given = false;
  std::string out;
};

struct DecomposeArgs {
  std::string input;
  std::optional<long> n;
};

struct T3Args {
  long max_size = 256;
};

struct T4Args {
  std::string multiplier = "constant";
  long s_max = 3;
  long level_cap = 4;
  std::string permutation = "adversarial";
  bool control = false;
  std::string mother;
};

struct HaarArgs {
  std::string input;
};

struct TreeArgs {
  std::string input;
  std::string permutation = "adversarial";
  long max_nodes = 120;
};

struct WaveletArgs {
  std::string mother;
  std::string epsilon = "1/10";
};

struct CalibrateArgs {
  std::string mother;
  std::string epsilon = "1/10";
};

struct T1Args {
  std::string multiplier = "power:2";
  long n_max = 12;
};

struct RcArgs {
  std::string s = "1";
  std::string t = "1";
  std::optional<long> single;
  long k_max = 12;
};

// Each returns the process exit code; library exceptions propagate to main.
int cmd_decompose(const RunConfig& cfg, const DecomposeArgs& a);
int cmd_t3_sweep(const RunConfig& cfg, const T3Args& a);
int cmd_t4_demo(const RunConfig& cfg, const T4Args& a);
int cmd_haar_bound(const RunConfig& cfg, const HaarArgs& a);
int cmd_tree_rearrange(const RunConfig& cfg, const TreeArgs& a);
int cmd_wavelet_check(const RunConfig& cfg, const WaveletArgs& a);
int cmd_calibrate_lambda(const RunConfig& cfg, const CalibrateArgs& a);
int cmd_t1_demo(const RunConfig& cfg, const T1Args& a);
int cmd_rc_demo(const RunConfig& cfg, const RcArgs& a);

}  // namespace dyadic_forge::cli
