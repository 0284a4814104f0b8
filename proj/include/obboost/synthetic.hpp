// synthetic.hpp
//
// Majority-of-features generative models used for the bundled datasets.
#pragma once

#include <obboost/core.hpp>

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace obboost {

/// The label is the majority vote of the first `relevant` features, each
/// voting +1 when "on", then flipped with probability `label_noise`.
///
/// Binary models: feature j is on (value 1) with probability `activation`
/// and absent otherwise. Continuous models: every feature is uniform on
/// [0,1) and votes +1 above 1/2.
struct MajorityModel {
  std::string name;
  std::size_t examples = 0;
  std::size_t features = 0;
  std::size_t relevant = 0;  // odd
  double activation = 0.5;
  double label_noise = 0.0;
  bool continuous = false;
};

inline std::vector<Example> generate(const MajorityModel& model, std::uint64_t seed) {
  if (model.relevant == 0 || model.relevant % 2 == 0 || model.relevant > model.features)
    throw Error("synthetic model '" + model.name + "': relevant count must be odd and <= features");
  check_probability(model.activation);
  check_probability(model.label_noise);
  Rng rng(seed, streams::synthetic);
  std::vector<Example> out;
  out.reserve(model.examples);
  for (std::size_t n = 0; n < model.examples; ++n) {
    std::vector<Feature> x;
    int votes = 0;
    for (std::size_t j = 0; j < model.features; ++j) {
      bool on;
      if (model.continuous) {
        const double v = rng.uniform();
        x.push_back({static_cast<std::uint32_t>(j), v});
        on = v >= 0.5;
      } else {
        on = rng.uniform() < model.activation;
        if (on) x.push_back({static_cast<std::uint32_t>(j), 1.0});
      }
      if (j < model.relevant) votes += on ? 1 : -1;
    }
    Label y = sign(static_cast<double>(votes));
    if (rng.uniform() < model.label_noise) y = -y;
    out.emplace_back(std::move(x), y);
  }
  return out;
}

/// The four models behind the files in data/.
inline std::vector<MajorityModel> bundled_models() {
  return {
      {"maj5-binary", 10000, 16, 5, 0.5, 0.05, false},
      {"maj7-sparse", 10000, 60, 7, 0.3, 0.02, false},
      {"maj9-noisy", 10000, 30, 9, 0.5, 0.10, false},
      {"maj5-continuous", 10000, 20, 5, 0.5, 0.05, true},
  };
}

}  // namespace obboost
