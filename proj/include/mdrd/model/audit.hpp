// Copyright 2026 The MDRD Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef MDRD_MODEL_AUDIT_HPP_
#define MDRD_MODEL_AUDIT_HPP_

#include <cstdint>

#include "mdrd/data/batch.hpp"
#include "mdrd/model/config.hpp"
#include "mdrd/numerics/grad_check.hpp"

namespace mdrd::model {

/// D=8, H=6, T=2, widths {2,3}, F=2, M=3, Ddom=4, Dg=8, no dropout.
MdrdConfig tiny_config(std::uint64_t seed = 7);

/// Four posts of lengths 5, 3, 1 and 4 with random tokens and metadata.
data::Batch tiny_batch(const MdrdConfig& config, std::uint64_t seed = 11);

/// Central-difference audit of every parameter of the tiny model on the
/// mean BCE of one eval-mode batch. Parameters are jittered off their
/// initial values first: zero biases put padding-only convolution windows
/// exactly on the ReLU kink, where finite differences are meaningless.
num::GradCheckResult gradcheck_tiny_model(std::uint64_t seed = 7, double eps = 1e-5);

}  // namespace mdrd::model

#endif  // MDRD_MODEL_AUDIT_HPP_
