// Copyright 2026 The MagniLift Authors
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

#ifndef MAGNILIFT_MAGNILIFT_HPP_
#define MAGNILIFT_MAGNILIFT_HPP_

#include "magnilift/affine.hpp"
#include "magnilift/conjugate_certify.hpp"
#include "magnilift/error.hpp"
#include "magnilift/gram.hpp"
#include "magnilift/graph_model.hpp"
#include "magnilift/instance_gen.hpp"
#include "magnilift/linalg.hpp"
#include "magnilift/quaternion.hpp"
#include "magnilift/random.hpp"
#include "magnilift/reconstruction.hpp"
#include "magnilift/simplex_graph.hpp"
#include "magnilift/spline_hat.hpp"

#endif  // MAGNILIFT_MAGNILIFT_HPP_
