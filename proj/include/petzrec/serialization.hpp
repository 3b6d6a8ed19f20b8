/**
 * This code is part of petzrec.
 *
 * (C) Copyright petzrec developers 2026.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef PETZREC_SERIALIZATION_HPP_
#define PETZREC_SERIALIZATION_HPP_

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "petzrec/algebra.hpp"
#include "petzrec/channel.hpp"

namespace petzrec {

using Json = nlohmann::json;

// Algebra: {"block_dims": [...], "trace_weights": [...]}.
Json algebra_to_json(const TracialAlgebra &algebra);
AlgebraPtr algebra_from_json(const Json &j);

// Element: nested block arrays of [re, im] pairs plus the algebra descriptor.
Json element_to_json(const AlgebraElement &x);
AlgebraElement element_from_json(const Json &j);

// Channel: {"source": ..., "target": ..., "kraus": [[[re, im], ...], ...]}.
Json channel_to_json(const Channel &phi);
Channel channel_from_json(const Json &j);

// One randomized trial's full input tuple, sufficient for bit-identical
// replay: stored algebra/A/B/channel plus the seed that drives the remaining
// in-trial draws.
struct TrialInstance {
  std::string kind;       // "scalar" or "superop"
  std::string family;
  std::uint64_t trial_id = 0;
  std::uint64_t seed = 0;
  AlgebraPtr algebra;
  std::optional<StateElement> a;
  std::optional<ReferenceState> b;
  std::optional<Channel> channel;
  double floor_delta = 1e-6;
};

Json instance_to_json(const TrialInstance &inst);
TrialInstance instance_from_json(const Json &j);

void write_json_file(const std::string &path, const Json &j);
Json read_json_file(const std::string &path);

}  // namespace petzrec

#endif  // PETZREC_SERIALIZATION_HPP_
