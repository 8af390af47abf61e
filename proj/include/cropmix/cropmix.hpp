// Copyright (c) 2026, The cropmix Authors. All rights reserved.
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

#ifndef CROPMIX_CROPMIX_HPP_INCLUDED
#define CROPMIX_CROPMIX_HPP_INCLUDED

#include "cropmix/augment.hpp"
#include "cropmix/bench.hpp"
#include "cropmix/config.hpp"
#include "cropmix/crop.hpp"
#include "cropmix/dataset.hpp"
#include "cropmix/errors.hpp"
#include "cropmix/image_codec.hpp"
#include "cropmix/manifest.hpp"
#include "cropmix/mix.hpp"
#include "cropmix/parallel.hpp"
#include "cropmix/pipeline.hpp"
#include "cropmix/raw_tensor.hpp"
#include "cropmix/resize.hpp"
#include "cropmix/rng.hpp"
#include "cropmix/stats.hpp"
#include "cropmix/tensor.hpp"

#endif // CROPMIX_CROPMIX_HPP_INCLUDED
